use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

use sakaguchi::avm::oracle::functionals_by_quadrature;
use sakaguchi::avm::{avm_density, avm_functionals, AvmPoint};
use sakaguchi::bessel::bessel_i;
use sakaguchi::consistency::{
    bifurcation_point, branch_point_at, mu_on_branch, residual, solve_k_given_r, solve_selfconsistency,
    stationary_vonmises, trace_branch,
};
use sakaguchi::Error;

/// `I_1(r) / (r I_0(r))` from plain midpoint sums, independent of the library tables.
fn kuramoto_ratio(r: f64) -> f64 {
    let m = 4096;
    let (mut i0, mut i1) = (0.0, 0.0);
    for j in 0..m {
        let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
        let w = (r * (phi.cos() - 1.0)).exp();
        i0 += w;
        i1 += w * phi.cos();
    }
    i1 / (r * i0)
}

/// Plain bisection on a sign change, used as an oracle for the library's root finder.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn quadrature_t1(k: f64, r: f64) -> f64 {
    let (_, c1, s1) = functionals_by_quadrature(AvmPoint::new(k, r), 2048).unwrap();
    -s1 / c1
}

#[test]
fn bifurcation_points() {
    assert_eq!(bifurcation_point(0.0).unwrap(), (2.0, 0.0));
    let (mu, k) = bifurcation_point(FRAC_PI_6).unwrap();
    assert!((mu - 4.0 / 3f64.sqrt()).abs() < 1e-15);
    assert!((k - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    let (mu, k) = bifurcation_point(PI).unwrap();
    assert!((mu + 2.0).abs() < 1e-15 && k.abs() < 1e-15);
    assert!(matches!(bifurcation_point(FRAC_PI_2), Err(Error::Degenerate(_))));
}

#[test]
fn inner_solve_examples() {
    assert_eq!(solve_k_given_r(0.0, 2.5).unwrap(), 0.0);
    assert!((solve_k_given_r(FRAC_PI_6, 1e-9).unwrap() - FRAC_PI_6.tan()).abs() < 1e-12);

    let target = FRAC_PI_6.tan();
    let k_oracle = bisect(target, 3.0, |k| quadrature_t1(k, 1.0) - target);
    let k = solve_k_given_r(FRAC_PI_6, 1.0).unwrap();
    assert!((k - k_oracle).abs() < 1e-10, "{k} vs {k_oracle}");
    assert!((avm_functionals(AvmPoint::new(k, 1.0)).cal_t1 - target).abs() < 1e-12);
}

#[test]
fn mu_on_branch_examples() {
    for alpha in [0.0, FRAC_PI_6, 1.2] {
        let mu = mu_on_branch(alpha, 1e-6).unwrap();
        assert!((mu - 2.0 / alpha.cos()).abs() < 1e-8, "α = {alpha}");
    }
    for r in [0.5, 2.0, 7.0] {
        let mu = mu_on_branch(0.0, r).unwrap();
        let want = r * bessel_i(0, r).unwrap() / bessel_i(1, r).unwrap();
        assert!((mu - want).abs() < 1e-12 * want);
    }
    // dense scan oracle: the branch at α = π/6 passes r = 1 above onset
    let mu = mu_on_branch(FRAC_PI_6, 1.0).unwrap();
    assert!(mu > 4.0 / 3f64.sqrt());
    let scan = (0..=2000)
        .map(|i| 0.5 + 2.0 * i as f64 / 2000.0)
        .map(|k| {
            let f = avm_functionals(AvmPoint::new(k, 1.0));
            ((f.cal_t1 - FRAC_PI_6.tan()).abs(), 1.0 / f.modulus())
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    assert!((scan.1 - mu).abs() < 1e-2);
}

#[test]
fn onset_limits() {
    for alpha in [0.0, FRAC_PI_6, PI / 4.0, FRAC_PI_3] {
        let p = branch_point_at(alpha, 1e-4).unwrap();
        assert!(((p.mu - 2.0 / alpha.cos()) / p.mu).abs() < 1e-3);
        assert!((p.k - alpha.tan()).abs() < 1e-3);
    }
}

#[test]
fn incoherent_below_onset() {
    assert_eq!(solve_selfconsistency(2.0, FRAC_PI_6).unwrap(), None);
    assert_eq!(solve_selfconsistency(1.9, 0.0).unwrap(), None);
    assert_eq!(solve_selfconsistency(50.0, FRAC_PI_2).unwrap(), None);
}

#[test]
fn kuramoto_branch() {
    let p = solve_selfconsistency(4.0, 0.0).unwrap().unwrap();
    assert_eq!(p.k, 0.0);
    let r_oracle = bisect(0.1, 20.0, |r| kuramoto_ratio(r) - 0.25);
    assert!((p.r - r_oracle).abs() < 1e-9, "{} vs {r_oracle}", p.r);

    let vm = stationary_vonmises(4.0).unwrap().unwrap();
    assert!((vm.r - r_oracle).abs() < 1e-9);
    assert_eq!(stationary_vonmises(2.0).unwrap(), None);
    let mass: f64 = (0..1024).map(|j| vm.pdf(2.0 * PI * j as f64 / 1024.0)).sum::<f64>() * 2.0 * PI / 1024.0;
    assert!((mass - 1.0).abs() < 1e-12);
}

#[test]
fn vonmises_amplitude_grows_with_coupling() {
    let rs: Vec<f64> = [2.1, 3.0, 5.0, 10.0, 50.0, 500.0]
        .iter()
        .map(|&mu| stationary_vonmises(mu).unwrap().unwrap().r)
        .collect();
    assert!(rs.windows(2).all(|w| w[1] > w[0]), "{rs:?}");
    assert!(rs[5] > 400.0);
}

#[test]
fn coherent_wave_at_three() {
    let p = solve_selfconsistency(3.0, FRAC_PI_6).unwrap().unwrap();
    assert!(p.k > FRAC_PI_6.tan());
    assert!(p.residual < 1e-10);
    assert!(avm_density(p.point()).traveling_wave_residual(1024) < 1e-8);
    assert!((p.order_parameter() - p.r / 3.0).abs() < 1e-15);

    // the residual again, with functionals from quadrature
    let (c0, c1, s1) = functionals_by_quadrature(p.point(), 2048).unwrap();
    let cal_c1 = c1 / (p.r * c0);
    let cal_s1 = -s1 / (p.r * c0);
    assert!((cal_c1.hypot(cal_s1) - 1.0 / 3.0).abs() < 1e-10);
    assert!((cal_s1 / cal_c1 - FRAC_PI_6.tan()).abs() < 1e-10);
}

#[test]
fn flux_constant_two_ways() {
    for (mu, alpha) in [(3.0, FRAC_PI_6), (6.0, 1.0), (4.0, 0.2)] {
        let p = solve_selfconsistency(mu, alpha).unwrap().unwrap();
        let d = avm_density(p.point());
        let m = 4096;
        let mean_sin = (0..m)
            .map(|j| {
                let phi = -PI + 2.0 * PI * j as f64 / m as f64;
                phi.sin() * d.pdf(phi)
            })
            .sum::<f64>()
            * 2.0
            * PI
            / m as f64;
        let c = (p.r * mean_sin + p.k) / (2.0 * PI);
        assert!((c - p.c).abs() < 1e-10, "μ = {mu}: {c} vs {}", p.c);
    }
}

#[test]
fn unique_crossing_on_a_scan() {
    for (mu, alpha) in [(3.0, FRAC_PI_6), (8.0, FRAC_PI_3), (2.5, 0.0)] {
        let g: Vec<f64> = (1..=200)
            .map(|i| 0.05 * i as f64)
            .map(|r| {
                let k = solve_k_given_r(alpha, r).unwrap();
                avm_functionals(AvmPoint::new(k, r)).modulus() - 1.0 / mu
            })
            .collect();
        let changes = g.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
        assert_eq!(changes, 1, "μ = {mu}, α = {alpha}");
    }
}

#[test]
fn reflection_past_half_pi() {
    for (mu, alpha) in [(-3.0, 5.0 * FRAC_PI_6), (-8.0, 2.0), (-3.0, 2.5)] {
        let p = solve_selfconsistency(mu, alpha).unwrap().unwrap();
        let q = solve_selfconsistency(-mu, PI - alpha).unwrap().unwrap();
        assert_eq!(p.k, -q.k);
        assert_eq!(p.r, q.r);
        assert!(p.residual < 1e-10);
    }
    // above the reflected onset only the incoherent state remains
    assert_eq!(solve_selfconsistency(-1.0, 5.0 * FRAC_PI_6).unwrap(), None);
}

#[test]
fn residual_reported_on_the_branch() {
    let p = branch_point_at(FRAC_PI_3, 2.0).unwrap();
    let f = avm_functionals(p.point());
    assert_eq!(residual(p.mu, p.alpha, &f), p.residual);
    assert!(residual(p.mu * 1.1, p.alpha, &f) > 1e-3);
}

#[test]
fn traced_branches() {
    let c = trace_branch(FRAC_PI_6, 1e-3, 2).unwrap();
    let end = c.points.last().unwrap();
    assert!((end.mu - 4.0 / 3f64.sqrt()).abs() < 1e-4);
    assert!((end.k - 1.0 / 3f64.sqrt()).abs() < 1e-4);

    let c = trace_branch(0.0, 5.0, 50).unwrap();
    assert_eq!(c.points.len(), 50);
    assert!(c.points.iter().all(|p| p.k == 0.0));

    let c = trace_branch(FRAC_PI_3, 8.0, 80).unwrap();
    assert!(c.failure.is_none());
    assert!(c
        .points
        .windows(2)
        .all(|w| w[1].r > w[0].r && w[1].k > w[0].k && w[1].mu > w[0].mu));
    assert!(c.points.iter().all(|p| p.residual < 1e-10 && p.mu >= 4.0 - 1e-12));
    assert!(c.points.iter().skip(1).all(|p| p.k > FRAC_PI_3.tan()));
    let last = c.points.last().unwrap();
    assert!(last.k > 2.0 * FRAC_PI_3.tan() && last.mu > 2.5 * 4.0);
}

#[test]
fn speed_grows_towards_half_pi() {
    let ks: Vec<f64> = [1.0, 1.3, 1.5, 1.55]
        .iter()
        .map(|&a: &f64| solve_selfconsistency(1.5 * 2.0 / a.cos(), a).unwrap().unwrap().k)
        .collect();
    assert!(ks.windows(2).all(|w| w[1] > w[0]), "{ks:?}");
}

#[test]
fn argument_errors() {
    assert!(solve_selfconsistency(f64::NAN, 0.3).is_err());
    assert!(trace_branch(0.3, -1.0, 10).is_err());
    assert!(trace_branch(0.3, 1.0, 1).is_err());
    assert!(trace_branch(2.0, 1.0, 10).is_err());
}

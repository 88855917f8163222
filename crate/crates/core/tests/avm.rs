use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;

use sakaguchi::avm::oracle::{
    avm_akp_alternating, avm_akp_from_eta, avm_chi_ode_oracle, avm_eta_sigma, cs_from_samples, eta_closed_form,
    functionals_by_quadrature,
};
use sakaguchi::avm::{avm_akp, avm_c0_series, avm_chi, avm_cs_n, avm_density, avm_functionals, AvmPoint};
use sakaguchi::bessel::bessel_i;
use sakaguchi::quadrature::periodic_nodes;
use sakaguchi::verify::{fourier_recursion_residual, telescoping_residuals};

fn pt(k: f64, r: f64) -> AvmPoint {
    AvmPoint::new(k, r)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn chi_traces() {
    assert_eq!(avm_chi(pt(2.0, 0.0), 0.7), 1.0);
    let want = bessel_i(0, 1.5).unwrap() * 1.5f64.exp();
    assert!(close(avm_chi(pt(0.0, 1.5), 0.0), want, 1e-14));
}

#[test]
fn chi_matches_periodic_ode_solution() {
    for (k, r) in [(1.0, 1.0), (-0.5, 3.0), (2.5, 0.3), (0.2, 6.0)] {
        let ode = avm_chi_ode_oracle(pt(k, r), 1024).unwrap();
        let d = avm_density(pt(k, r));
        for (phi, &v) in periodic_nodes(1024).zip(&ode) {
            assert!(close(d.chi(phi), v, 1e-9), "k={k} r={r} phi={phi}");
        }
    }
}

#[test]
fn ode_oracle_reflection() {
    let plus = avm_chi_ode_oracle(pt(1.0, 1.0), 1024).unwrap();
    let minus = avm_chi_ode_oracle(pt(-1.0, 1.0), 1024).unwrap();
    // node j sits at -π + 2πj/m, so -φ_j is node m - j (mod m)
    for j in 0..1024 {
        let mirrored = minus[(1024 - j) % 1024];
        assert!((plus[j] - mirrored).abs() < 1e-10, "j = {j}");
    }
}

#[test]
fn ode_oracle_is_constant_at_r_zero() {
    let v = avm_chi_ode_oracle(pt(1.0, 0.0), 256).unwrap();
    assert!(v.iter().all(|&x| (x - 1.0).abs() < 1e-13));
}

#[test]
fn density_is_normalized_positive_and_solves_the_wave_equation() {
    let d = avm_density(pt(1.0, 1.0));
    let samples = d.sample(2048);
    let mass = samples.iter().sum::<f64>() * 2.0 * PI / 2048.0;
    assert!((mass - 1.0).abs() < 1e-10);
    assert!(samples.iter().all(|&v| v > 0.0));
    assert!(d.traveling_wave_residual(1024) < 1e-9);

    let u = avm_density(pt(0.0, 0.0));
    assert!((u.pdf(0.3) - 1.0 / (2.0 * PI)).abs() < 1e-16);
    let vm = avm_density(pt(0.0, 2.0));
    let i0 = bessel_i(0, 2.0).unwrap();
    assert!(close(vm.pdf(1.0), (2.0 * 1f64.cos()).exp() / (2.0 * PI * i0), 1e-14));
}

#[test]
fn cs_traces_and_recursion() {
    let (c, s) = avm_cs_n(pt(1.3, 0.0), 0);
    assert!((c - 1.0).abs() < 1e-15 && s.abs() < 1e-15);
    let i0 = bessel_i(0, 2.2).unwrap();
    let (c, s) = avm_cs_n(pt(0.0, 2.2), 0);
    assert!(close(c, i0 * i0, 1e-14) && s == 0.0);
    for (k, r) in [(1.0, 1.0), (0.3, 4.0), (-1.5, 2.0), (3.0, 0.2)] {
        assert!(fourier_recursion_residual(pt(k, r), 15) < 1e-10, "k={k} r={r}");
    }
}

#[test]
fn cs_match_quadrature_of_the_ode_solution() {
    for (k, r) in [(1.0, 1.0), (0.5, 2.0), (-2.0, 0.5)] {
        let chi = avm_chi_ode_oracle(pt(k, r), 2048).unwrap();
        for n in 0..6 {
            let (c, s) = avm_cs_n(pt(k, r), n);
            let (cq, sq) = cs_from_samples(&chi, n);
            assert!(close(c, cq, 1e-10) && close(s, sq, 1e-10), "k={k} r={r} n={n}");
        }
    }
}

#[test]
fn functional_examples() {
    let f = avm_functionals(pt(3.0, 0.0));
    assert!(close(f.cal_c1, 0.05, 1e-15));
    assert!(close(f.cal_s1, 0.15, 1e-15));
    assert_eq!(f.cal_t1, 3.0);
    assert!(close(f.cal_r1, 1.0 / (2.0 * 10f64.sqrt()), 1e-15));

    let f = avm_functionals(pt(0.0, 2.0));
    let (i0, i1) = (bessel_i(0, 2.0).unwrap(), bessel_i(1, 2.0).unwrap());
    assert!(close(f.c1, i0 * i1, 1e-14));
    assert_eq!(f.s1, 0.0);

    let f = avm_functionals(pt(1.0, 1.0));
    assert!((f.s1 + (f.c0 - 1.0)).abs() < 1e-12);
}

#[test]
fn functional_invariants() {
    for k in [-2.0, -0.4, 0.0, 0.7, 3.0] {
        for r in [-1.5, 0.0, 0.2, 2.0, 8.0] {
            let f = avm_functionals(pt(k, r));
            assert!(f.c0 >= 1.0);
            assert_eq!(f.c0 == 1.0, r == 0.0, "k={k} r={r}");
            if k * r >= 0.0 {
                assert!(f.s1 <= 0.0);
            }
            assert!(f.c1 * r >= 0.0);
            let sign = if k > 0.0 {
                1.0
            } else if k < 0.0 {
                -1.0
            } else {
                0.0
            };
            assert_eq!(f.cal_r1, sign * f.cal_c1.hypot(f.cal_s1));
            if r != 0.0 {
                assert!(close(f.cal_c1, f.c1 / (r * f.c0), 1e-14));
                assert!(close(f.cal_s1, -f.s1 / (r * f.c0), 1e-14));
            }
        }
    }
}

#[test]
fn series_matches_quadrature() {
    for k in [0.0, 0.5, 1.0, 2.0, 4.0] {
        for r in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let f = avm_functionals(pt(k, r));
            let (c0, c1, s1) = functionals_by_quadrature(pt(k, r), 2048).unwrap();
            assert!(close(f.c0, c0, 1e-10), "C0 k={k} r={r}");
            assert!(close(f.c1, c1, 1e-10), "C1 k={k} r={r}");
            assert!(close(f.s1, s1, 1e-10), "S1 k={k} r={r}");
        }
    }
}

#[test]
fn c0_series_examples() {
    assert_eq!(avm_c0_series(pt(0.7, 0.0), 5).value, 1.0);
    for r in [0.5, 2.0, 5.0] {
        let i0 = bessel_i(0, r).unwrap();
        assert!(close(avm_c0_series(pt(0.0, r), 40).value, i0 * i0, 1e-12), "r = {r}");
    }
    let (c0, _, _) = functionals_by_quadrature(pt(1.5, 2.0), 2048).unwrap();
    assert!(close(avm_c0_series(pt(1.5, 2.0), 40).value, c0, 1e-10));
}

#[test]
fn c1_is_half_the_r_derivative_of_c0() {
    let h = 1e-5;
    for (k, r) in [(1.0, 1.0), (0.0, 2.0), (2.5, 0.6), (0.5, 4.0)] {
        let c0 = |x: f64| avm_c0_series(pt(k, x), 200).value;
        let fd = (c0(r + h) - c0(r - h)) / (2.0 * h);
        let c1 = avm_functionals(pt(k, r)).c1;
        assert!((0.5 * fd - c1).abs() < 1e-8 * c1.abs().max(1.0), "k={k} r={r}");
    }
}

#[test]
fn telescoping_series() {
    for (k, r) in [(1.0, 1.0), (0.5, 3.0), (2.0, 0.4), (4.0, 6.0)] {
        let (a, b) = telescoping_residuals(pt(k, r));
        assert!(a < 1e-8 && b < 1e-8, "k={k} r={r}: {a:e} {b:e}");
    }
}

#[test]
fn parity_table() {
    for (k, r) in [(0.7, 1.3), (2.0, 4.0), (0.1, 0.05)] {
        let f = |k, r| avm_functionals(pt(k, r));
        let base = f(k, r);
        for (sk, sr) in [(-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
            let g = f(sk * k, sr * r);
            assert!((g.c0 - base.c0).abs() <= 1e-12 * base.c0);
            assert!((g.c1 - sr * base.c1).abs() <= 1e-12 * base.c0);
            assert!((g.s1 - sk * sr * base.s1).abs() <= 1e-12 * base.c0);
            assert!((g.cal_t1 - sk * base.cal_t1).abs() <= 1e-12);
        }
    }
}

fn exact_a0p(p: u64) -> BigRational {
    let fact = |n: u64| (1..=n).fold(BigInt::from(1), |a, j| a * BigInt::from(j));
    let pf = fact(p);
    BigRational::new(fact(2 * p), pf.clone() * &pf * &pf * &pf)
}

#[test]
fn a0p_exact_rationals() {
    for p in 0..=10u64 {
        let exact = exact_a0p(p);
        let approx = BigRational::from_float(avm_akp(0.0, p as usize)).unwrap();
        let tol = BigRational::new(BigInt::from(1), BigInt::from(10u64.pow(15)));
        let bound = &exact * tol;
        let diff = approx - &exact;
        assert!(diff < bound && -diff < bound, "p = {p}");
    }
    // (2p)!/(p!)^4 at p = 2 is 24/16
    assert_eq!(exact_a0p(2), BigRational::new(BigInt::from(3), BigInt::from(2)));
}

#[test]
fn akp_three_routes() {
    for k in [0.0, 0.5, 1.0, 2.0, 5.0] {
        for p in 0..=15 {
            let a = avm_akp(k, p);
            let alt = avm_akp_alternating(k, p);
            let eta = avm_akp_from_eta(k, p).unwrap();
            assert!(((alt - a) / a).abs() < 1e-10, "alt k={k} p={p}");
            assert!(((eta - a) / a).abs() < 1e-10, "eta k={k} p={p}");
        }
    }
}

#[test]
fn eta_sigma_examples() {
    let es = avm_eta_sigma(1.0, 0).unwrap();
    assert!(close(es.eta, 2.0 * PI.sinh(), 1e-13));
    for k in [0.25, 1.0, 3.0] {
        for p in [1, 2, 5, 9] {
            let es = avm_eta_sigma(k, p).unwrap();
            assert!(((es.eta - eta_closed_form(k, p)) / es.eta).abs() < 1e-10, "k={k} p={p}");
            // integration by parts: σ_{p,0} = (k/p) η_{p,0}
            let sigma = es.sigma.unwrap();
            assert!(((sigma - k / p as f64 * es.eta) / sigma).abs() < 1e-10, "k={k} p={p}");
            // the recursion in p with denominator 4(p² + k²)
            let prev = avm_eta_sigma(k, p - 1).unwrap().eta;
            let pf = p as f64;
            let ratio = 2.0 * pf * (2.0 * pf - 1.0) / (4.0 * (pf * pf + k * k));
            assert!(((es.eta - ratio * prev) / es.eta).abs() < 1e-10);
        }
    }
    // σ_{1,0}/η_{1,0} reproduces the small-r limit 𝒯_1(k, 0⁺) = k
    let es = avm_eta_sigma(1.0, 1).unwrap();
    let t_small = avm_functionals(pt(1.0, 1e-6)).cal_t1;
    assert!((es.sigma.unwrap() / es.eta - t_small).abs() < 1e-10);
}

#[test]
fn product_index_runs_over_n() {
    // Π_{n=1}^p (n²+k²) matches quadrature; Π (p²+k²) does not
    let (k, p) = (1.0, 3);
    let eta = avm_eta_sigma(k, p).unwrap().eta;
    let fact = |n: usize| (1..=n).map(|j| j as f64).product::<f64>();
    let printed =
        fact(2 * p) / (4f64.powi(p as i32) * ((p * p) as f64 + k * k).powi(p as i32)) * 2.0 * (k * PI).sinh() / k;
    assert!(((eta - eta_closed_form(k, p)) / eta).abs() < 1e-12);
    assert!(((eta - printed) / eta).abs() > 0.5);
}

#[test]
fn lower_bound_of_t1_over_k() {
    for r in [0.5, 2.0, 6.0] {
        let (i0, i1) = (bessel_i(0, r).unwrap(), bessel_i(1, r).unwrap());
        let bound = (i0 * i0 - 1.0) / (r * i0 * i1);
        let t = avm_functionals(pt(1e-8, r)).cal_t1 / 1e-8;
        assert!((t - bound).abs() < 1e-7, "r = {r}");
    }
}

fn partials(k: f64, r: f64) -> [[f64; 2]; 3] {
    let h = 1e-5;
    let f = |k, r| {
        let f = avm_functionals(pt(k, r));
        [f.cal_s1, f.cal_c1]
    };
    let d = |a: [f64; 2], b: [f64; 2]| [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)];
    [d(f(k, r + h), f(k, r - h)), d(f(k + h, r), f(k - h, r)), f(k, r)]
}

#[test]
fn jacobian_signs() {
    for k in [0.25, 0.5, 1.0, 2.0, 4.0] {
        for r in [0.3, 1.0, 3.0, 8.0] {
            let [dr, dk, v] = partials(k, r);
            let det1 = dr[0] * v[1] - dr[1] * v[0];
            let det2 = dk[0] * v[1] - dk[1] * v[0];
            let det3 = dr[0] * dk[1] - dr[1] * dk[0];
            assert!(det1 < 0.0, "det1 k={k} r={r}: {det1:e}");
            assert!(det2 > 0.0, "det2 k={k} r={r}: {det2:e}");
            assert!(det3 > 0.0, "det3 k={k} r={r}: {det3:e}");
        }
    }
}

#[test]
fn monotonicity_on_the_sampled_grid() {
    let ks = [0.25, 0.5, 1.0, 2.0, 4.0];
    let rs: Vec<f64> = (1..=100).map(|i| 0.1 * i as f64).collect();
    for &k in &ks {
        let t: Vec<f64> = rs.iter().map(|&r| avm_functionals(pt(k, r)).cal_t1).collect();
        assert!(t[0] < k);
        assert!(t.windows(2).all(|w| w[1] < w[0]), "r ↦ T1 not decreasing at k = {k}");
        assert!((avm_functionals(pt(k, 1e-7)).cal_t1 - k).abs() < 1e-10);
    }
    let kk: Vec<f64> = (1..=80).map(|i| 0.05 * i as f64).collect();
    for r in [0.5, 1.0, 3.0, 10.0] {
        let ratio: Vec<f64> = kk.iter().map(|&k| avm_functionals(pt(k, r)).cal_t1 / k).collect();
        assert!(ratio.windows(2).all(|w| w[1] > w[0] && w[1] < 1.0), "r = {r}");
        let c1: Vec<f64> = kk.iter().map(|&k| avm_functionals(pt(k, r)).cal_c1).collect();
        assert!(c1.windows(2).all(|w| w[1] < w[0]), "k ↦ C1 at r = {r}");
    }
}

#[test]
fn limits_are_approached_monotonically() {
    for k in [0.5, 1.0, 2.0] {
        let v: Vec<f64> = [25.0, 50.0, 100.0, 200.0]
            .iter()
            .map(|&r| r / k * avm_functionals(pt(k, r)).cal_t1)
            .collect();
        assert!(
            v.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs()),
            "k = {k}: {v:?}"
        );
        assert!((0.99..=1.01).contains(&v[3]));
    }
    for r in [1.0, 10.0] {
        let v: Vec<f64> = [25.0, 50.0, 100.0, 200.0]
            .iter()
            .map(|&k| avm_functionals(pt(k, r)).cal_t1 / k)
            .collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]), "r = {r}: {v:?}");
        assert!((0.99..=1.0).contains(&v[3]));
    }
}

//! Cross-checks against independent computations: dense SVD, brute-force
//! lattice sums, grid scans of the shifted-factorial supremum, and the
//! catalog classifications seen from both the symbol and the orbit side.

use num_complex::Complex64;

use torsym_core::catalog::{build_catalog_symbol, catalog_entry, CATALOG_NAMES};
use torsym_core::fit::{FitOptions, Verdict};
use torsym_core::lattice::c_p_constant;
use torsym_core::lbeta::{
    bbeta_build, bound_chain_check, factorial_shift_check, lbeta_apply, lbeta_inverse,
    mu_constant, recover_symbol,
};
use torsym_core::matrix::CMatrix;
use torsym_core::orbit::orbit_growth_table;
use torsym_core::quantize::norm_bound_check;
use torsym_core::rng::SplitMix64;
use torsym_core::symbol::{analyticity_fit, AnalyticityOptions};
use torsym_core::{MultiIndex, PeriodicFunction, TorusGrid};

#[test]
fn operator_norm_agrees_with_svd_at_size_50() {
    let mut rng = SplitMix64::new(2024);
    let m = CMatrix::from_fn(50, 50, |_, _| Complex64::new(rng.next_sym(), rng.next_sym()));
    let got = m.operator_norm(1e-10, 7).unwrap();
    let na = nalgebra::DMatrix::from_fn(50, 50, |r, c| m.get(r, c));
    let want = na.singular_values()[0];
    assert!((got - want).abs() < 1e-8 * want, "got {got} want {want}");
}

#[test]
fn c_p_constants_match_brute_force_2d() {
    for p in [2u32, 3, 4] {
        let s = c_p_constant(2, p).unwrap();
        let r = 3000i64;
        let mut brute = 0.0f64;
        for l1 in -r..=r {
            for l2 in -r..=r {
                brute += ((1 + l1 * l1 + l2 * l2) as f64).powi(-(p as i32));
            }
        }
        // discarded tail of the brute-force box is below 8r(1+r^2)^(-p) * r
        let tail = 8.0 * (r as f64) * (r as f64) * ((1 + r * r) as f64).powi(-(p as i32));
        assert!(
            (s.value - brute).abs() < s.tail_error_bound + tail + 1e-11,
            "p={p} got {} brute {brute}",
            s.value
        );
    }
}

#[test]
fn mu_constant_matches_grid_scan() {
    for p in [1u32, 2, 3] {
        let m = mu_constant(p).unwrap();
        let mut scan = 0.0f64;
        let mut t = 0.0f64;
        while t <= 40.0 {
            let mut v = (-t).exp2();
            for k in 1..=2 * p {
                v *= t + k as f64;
            }
            scan = scan.max(v);
            t += 1e-4;
        }
        assert!((m.mu - scan).abs() < 1e-6 * scan, "p={p} got {} scan {scan}", m.mu);
        assert!(m.mu >= scan - 1e-9);
    }
}

#[test]
fn factorial_shift_inequality_brute_force() {
    // (a + 2p)! / a! <= mu 2^a, checked directly in exact integer
    // arithmetic for small arguments
    for p in [1u32, 2] {
        let mu = mu_constant(p).unwrap().mu;
        for a in 0u32..=25 {
            let mut ratio = 1.0f64;
            for k in (a + 1)..=(a + 2 * p) {
                ratio *= k as f64;
            }
            assert!(ratio <= mu * (a as f64).exp2() * (1.0 + 1e-12), "p={p} a={a}");
        }
        let rec = factorial_shift_check(p, &MultiIndex::new([25u32])).unwrap();
        assert!(rec.holds);
    }
}

#[test]
fn lbeta_round_trip_and_recovery() {
    let g = TorusGrid::new(1, 32).unwrap();
    let mut rng = SplitMix64::new(5);
    let vals: Vec<Complex64> =
        (0..32).map(|_| Complex64::new(rng.next_sym(), rng.next_sym())).collect();
    let u = PeriodicFunction::analyze(g, &vals).unwrap();
    let beta = MultiIndex::new([3u32]);
    let back = lbeta_inverse(&lbeta_apply(&u, &beta).unwrap(), &beta).unwrap();
    for (a, b) in back.coeffs().iter().zip(u.coeffs()) {
        assert!((a - b).norm() < 1e-12);
    }

    let s = build_catalog_symbol("analytic-pole", g, 4, 0).unwrap();
    let bs = bbeta_build(&s, &beta).unwrap();
    let rec = recover_symbol(&bs, &beta).unwrap();
    for (j, a) in s.iter() {
        let b = rec.entry(j).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}

#[test]
fn norm_bound_holds_across_catalog() {
    let g = TorusGrid::new(1, 64).unwrap();
    for name in CATALOG_NAMES {
        let s = build_catalog_symbol(name, g, 8, 11).unwrap();
        let rec = norm_bound_check(&s, 1, 8, 1e-7, 3).unwrap();
        assert!(
            rec.measured <= rec.bound * (1.0 + 1e-6) + rec.measured_residual,
            "{name}: measured {} bound {}",
            rec.measured,
            rec.bound
        );
    }
}

#[test]
fn bound_chain_holds_across_catalog() {
    let g = TorusGrid::new(1, 64).unwrap();
    for name in CATALOG_NAMES {
        let s = build_catalog_symbol(name, g, 8, 11).unwrap();
        for a in [1u32, 2, 3] {
            let rec = bound_chain_check(&s, &MultiIndex::new([a]), 8, 3).unwrap();
            assert!(
                rec.m_alpha <= rec.bound * (1.0 + 1e-6) + 1e-9,
                "{name} alpha={a}: M {} bound {}",
                rec.m_alpha,
                rec.bound
            );
        }
    }
}

#[test]
fn bump_derivatives_grow_superfactorially() {
    // smooth but not analytic: c_alpha = (M_alpha / alpha!)^(1/(1+|alpha|))
    // keeps climbing instead of leveling off
    let g = TorusGrid::new(1, 512).unwrap();
    let s = build_catalog_symbol("bump", g, 0, 0).unwrap();
    let rep = analyticity_fit(&s, 14, AnalyticityOptions::default()).unwrap();
    let c_of = |order: u32| {
        rep.fit
            .entries
            .iter()
            .find(|e| e.alpha.order() == order)
            .map(|e| e.c_alpha)
            .unwrap()
    };
    assert!(c_of(14) > 1.2 * c_of(8), "c_8 {} c_14 {}", c_of(8), c_of(14));
    assert_ne!(rep.fit.verdict, Verdict::UniformlyAnalytic, "slope {}", rep.fit.plateau_slope);
}

#[test]
fn symbol_and_orbit_classifications_agree() {
    let g = TorusGrid::new(1, 64).unwrap();
    for name in ["constant", "multiplication", "analytic-pole", "jdecay", "random-trig"] {
        let entry = catalog_entry(name, 1).unwrap();
        assert!(entry.uniformly_analytic);
        let s = build_catalog_symbol(name, g, 8, 17).unwrap();
        let sym = analyticity_fit(&s, 8, AnalyticityOptions::default()).unwrap();
        let orb = orbit_growth_table(&s, 8, 8, FitOptions::default(), 17).unwrap();
        assert_eq!(sym.fit.verdict, Verdict::UniformlyAnalytic, "{name} symbol side");
        assert_eq!(orb.fit.verdict, Verdict::UniformlyAnalytic, "{name} orbit side");
    }
}

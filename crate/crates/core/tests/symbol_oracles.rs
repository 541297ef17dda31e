use flamefront::evolver::EquationDescriptor;
use flamefront::symbols::ks_linear_symbol;
use flamefront::{alpha_critical, RescaledSymbolTable, SpectralGrid, SymbolTable};
use proptest::prelude::*;
use std::f64::consts::PI;

/// The rescaled symbols written directly in terms of `X = √(1 + 4ελ)`.
struct Printed {
    b: f64,
    f: f64,
    h: f64,
    m: f64,
}

fn printed(eps: f64, lam: f64) -> Printed {
    let x = (1.0 + 4.0 * eps * lam).sqrt();
    let (x2, x3) = (x * x, x * x * x);
    Printed {
        b: x2 + (1.0 + eps) * x - 1.0 - eps,
        f: 0.25 * (x3 - 3.0 * x2 - 4.0 * (1.0 + eps) * x + 4.0 + 4.0 * eps),
        h: (x2 + (1.0 + eps) * x - 2.0 - eps) / eps,
        m: (x3 - 3.0 * x2 - 4.0 * (1.0 + eps) * x + 6.0 + 4.0 * eps) / (4.0 * eps),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

#[test]
fn stabilized_forms_agree_with_printed_forms() {
    let grid = SpectralGrid::new(10.0 * PI, 65).unwrap();
    for eps in [1.0, 0.5, 0.1] {
        let t = RescaledSymbolTable::new(eps, &grid).unwrap();
        for (k, &lam) in grid.eigenvalues().iter().enumerate() {
            let p = printed(eps, lam);
            assert!(rel(t.b()[k], p.b) < 1e-13, "b, eps {eps}, k {k}");
            assert!(rel(t.f()[k], p.f) < 1e-13, "f, eps {eps}, k {k}");
            assert!(rel(t.h()[k], p.h) < 1e-12, "h, eps {eps}, k {k}");
            assert!(rel(t.m()[k], p.m) < 1e-12, "m, eps {eps}, k {k}");
        }
    }
}

/// Richardson extrapolation of the printed `h, m` to ε = 0 gives `6λ` and
/// `−7λ/2`; the stabilized forms at tiny ε must land on the same limits.
#[test]
fn small_epsilon_limits() {
    let grid = SpectralGrid::new(10.0 * PI, 17).unwrap();
    let tiny = RescaledSymbolTable::new(1e-12, &grid).unwrap();
    for (k, &lam) in grid.eigenvalues().iter().enumerate() {
        let (e1, e2) = (1e-3, 5e-4);
        let h_lim = 2.0 * printed(e2, lam).h - printed(e1, lam).h;
        let m_lim = 2.0 * printed(e2, lam).m - printed(e1, lam).m;
        assert!(rel(h_lim, 6.0 * lam) < 1e-5, "h limit, k {k}");
        assert!(rel(m_lim, -3.5 * lam) < 1e-5, "m limit, k {k}");
        assert!(rel(tiny.h()[k], 6.0 * lam) < 1e-10);
        assert!(rel(tiny.m()[k], -3.5 * lam) < 1e-10);
    }
}

#[test]
fn rescaled_descriptor_approaches_ks_linearly() {
    let grid = SpectralGrid::new(10.0 * PI, 33).unwrap();
    let ks = EquationDescriptor::ks(&grid);
    let gap = |eps: f64| {
        let d = EquationDescriptor::rescaled(eps, &grid).unwrap();
        let dl = d
            .linear_symbol()
            .iter()
            .zip(ks.linear_symbol())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let dg = d
            .nonlinear_symbol()
            .iter()
            .zip(ks.nonlinear_symbol())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        (dl, dg)
    };
    let (l1, g1) = gap(1e-6);
    let (l2, g2) = gap(5e-7);
    assert!((l1 / l2 - 2.0).abs() < 1e-2, "{l1} {l2}");
    assert!((g1 / g2 - 2.0).abs() < 1e-2, "{g1} {g2}");
    let tiny = EquationDescriptor::rescaled(1e-300, &grid).unwrap();
    assert_eq!(tiny.linear_symbol(), ks.linear_symbol());
    assert_eq!(tiny.nonlinear_symbol(), ks.nonlinear_symbol());
}

#[test]
fn threshold_characterization() {
    for ell in [2.0 * PI, 4.0 * PI, 10.0 * PI, 7.3, 21.0] {
        let grid = SpectralGrid::new(ell, 33).unwrap();
        let ac = alpha_critical(ell).unwrap();
        for (alpha, stable) in [(ac * (1.0 - 1e-6), true), (ac * (1.0 + 1e-6), false)] {
            let (_, rate) = SymbolTable::new(alpha, &grid).unwrap().max_nonzero_rate();
            assert_eq!(rate < 0.0, stable, "ell {ell}, alpha {alpha}");
        }
    }
}

#[test]
fn symbol_bounds_hold_over_a_sweep() {
    for (ell, n) in [(10.0 * PI, 128), (2.0 * PI, 256), (50.0, 3)] {
        let grid = SpectralGrid::new(ell, n).unwrap();
        for eps in [1.0, 0.1, 0.01, 1e-3, 1e-6] {
            let r = RescaledSymbolTable::new(eps, &grid)
                .unwrap()
                .verify_bounds();
            assert!(r.all_ok(), "{r:?}");
            if eps == 1.0 {
                assert!(r.max_h_ratio <= 8.0);
            }
        }
    }
}

proptest! {
    #[test]
    fn quotient_identities(ell in 1.0f64..100.0, alpha in 0.05f64..10.0, n in 3usize..200) {
        let grid = SpectralGrid::new(ell, n).unwrap();
        let t = SymbolTable::new(alpha, &grid).unwrap();
        for k in 0..n {
            let tol = 1e-11 * (t.s()[k].abs() + 1.0);
            prop_assert!((t.l()[k] * t.b()[k] - t.s()[k]).abs() < tol);
            prop_assert!((t.g()[k] * t.b()[k] - t.f()[k]).abs() < 1e-11 * (t.f()[k].abs() + 1.0));
            prop_assert!((t.nu()[k] - 0.5 * (1.0 + t.x()[k])).abs() < 1e-15 * t.x()[k]);
        }
    }

    #[test]
    fn rescaled_identities(lam_exp in -3.0f64..5.0, eps_exp in -8.0f64..0.0) {
        let lam = 10f64.powf(lam_exp);
        let eps = 10f64.powf(eps_exp);
        // A one-mode-pair grid whose first eigenvalue is `lam`.
        let ell = 2.0 * PI / lam.sqrt();
        let grid = SpectralGrid::new(ell, 3).unwrap();
        let t = RescaledSymbolTable::new(eps, &grid).unwrap();
        let k = 1;
        let scale = t.b()[k].abs() + 1.0;
        prop_assert!((t.b()[k] - eps * t.h()[k] - 1.0).abs() < 1e-12 * scale);
        prop_assert!((t.f()[k] - eps * t.m()[k] + 0.5).abs() < 1e-12 * (t.f()[k].abs() + 1.0));
        prop_assert_eq!(t.s()[k], ks_linear_symbol(grid.eigenvalues()[k]));
    }
}

use proptest::prelude::*;

use susy_painleve::hyp1f1::{kummer, kummer_y_derivatives, KummerParams};
use susy_painleve::jets::{Jet, JetFn};
use susy_painleve::painleve::{PivParams, PivSolution, PvParams, PvSolution};
use susy_painleve::residual::{piv_residual, pv_residual};

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, 6)
}

fn poly_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    (0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
}

proptest! {
    #[test]
    fn product_matches_polynomial_product(a in coeffs(), b in coeffs()) {
        let p = &Jet::from_taylor(&a) * &Jet::from_taylor(&b);
        prop_assert!(close(&p.taylor(), &poly_mul(&a, &b, 6), 1e-12));
    }

    #[test]
    fn division_inverts_product(a in coeffs(), mut b in coeffs()) {
        b[0] = if b[0] >= 0.0 { b[0] + 0.5 } else { b[0] - 0.5 };
        let (ja, jb) = (Jet::from_taylor(&a), Jet::from_taylor(&b));
        let q = (&ja * &jb).div(&jb).unwrap();
        prop_assert!(close(&q.taylor(), &a, 1e-10));
    }

    #[test]
    fn log_derivative_is_additive(mut a in coeffs(), mut b in coeffs()) {
        a[0] = a[0].abs() + 0.5;
        b[0] = b[0].abs() + 0.5;
        let (ja, jb) = (Jet::from_taylor(&a), Jet::from_taylor(&b));
        let lhs = (&ja * &jb).log_derivative().unwrap();
        let rhs = &ja.log_derivative().unwrap() + &jb.log_derivative().unwrap();
        prop_assert!(close(lhs.derivs(), rhs.derivs(), 1e-9));
    }

    #[test]
    fn exp_of_ln_is_identity(mut a in coeffs()) {
        a[0] = a[0].abs() + 0.3;
        let j = Jet::from_taylor(&a);
        let back = j.ln().unwrap().exp();
        prop_assert!(close(back.derivs(), j.derivs(), 1e-9));
    }

    #[test]
    fn composition_follows_chain_rule(x0 in 0.2..2.0f64, c in -1.5..1.5f64) {
        // sin(c x^2) through compose vs. the closed derivatives
        let inner = JetFn::new(move |x, k| Ok(&(&Jet::variable(x, k) * &Jet::variable(x, k)) * c));
        let outer = JetFn::new(|t, k| {
            let mut d = Vec::with_capacity(k + 1);
            for i in 0..=k {
                d.push((t + i as f64 * std::f64::consts::FRAC_PI_2).sin());
            }
            Jet::from_derivatives(d)
        });
        let f = outer.compose(&inner).eval(x0, 2).unwrap();
        let u = c * x0 * x0;
        let d1 = u.cos() * 2.0 * c * x0;
        let d2 = -u.sin() * (2.0 * c * x0).powi(2) + u.cos() * 2.0 * c;
        prop_assert!((f.value() - u.sin()).abs() < 1e-14);
        prop_assert!((f.deriv(1) - d1).abs() < 1e-12 * (1.0 + d1.abs()));
        prop_assert!((f.deriv(2) - d2).abs() < 1e-12 * (1.0 + d2.abs()));
    }

    #[test]
    fn kummer_derivative_contiguity(p in -2.3..2.3f64, q in 0.3..3.0f64, y in 0.0..12.0f64) {
        let params = KummerParams::new(p, q).unwrap();
        let d = kummer_y_derivatives(params, y, 1).unwrap();
        let want = p / q * kummer(KummerParams::new(p + 1.0, q + 1.0).unwrap(), y).unwrap();
        prop_assert!((d[1] - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn piv_residual_linear_in_parameters(
        a in -4.0..4.0f64, b in -8.0..0.0f64, da in -1.0..1.0f64, db in -1.0..1.0f64,
        x in 0.3..3.0f64, c in 0.5..2.0f64,
    ) {
        let sol = |a, b| PivSolution {
            g: JetFn::new(move |x, k| Ok(&Jet::variable(x, k).exp() * c)),
            params: PivParams { a, b },
            provenance: String::new(),
        };
        let g = c * x.exp();
        let r0 = piv_residual(&sol(a, b), x).unwrap();
        let ra = piv_residual(&sol(a + da, b), x).unwrap();
        let rb = piv_residual(&sol(a, b + db), x).unwrap();
        let scale = 1.0 + r0.abs();
        prop_assert!((ra - r0 - 2.0 * da * g).abs() <= 1e-10 * scale);
        prop_assert!((rb - r0 + db / g).abs() <= 1e-10 * scale);
    }

    #[test]
    fn pv_residual_linear_in_parameters(
        a in 0.0..3.0f64, b in -3.0..0.0f64, cc in -2.0..2.0f64, d in -1.0..1.0f64, z in 0.3..5.0f64,
    ) {
        // w = 2 + z/3 stays away from the guarded values 0 and 1
        let w = |p: PvParams| PvSolution {
            w: JetFn::new(|z, k| Ok(&(&Jet::variable(z, k) * (1.0 / 3.0)) + 2.0)),
            params: p,
            provenance: String::new(),
        };
        let w0 = 2.0 + z / 3.0;
        let q = (w0 - 1.0).powi(2) / (z * z);
        let base = PvParams::new(a, b, cc);
        let r0 = pv_residual(&w(base), z).unwrap();
        let scale = 1.0 + r0.abs();
        let ra = pv_residual(&w(PvParams { a: a + d, ..base }), z).unwrap();
        prop_assert!((ra - r0 + d * q * w0).abs() <= 1e-10 * scale);
        let rb = pv_residual(&w(PvParams { b: b + d, ..base }), z).unwrap();
        prop_assert!((rb - r0 + d * q / w0).abs() <= 1e-10 * scale);
        let rc = pv_residual(&w(PvParams { c: cc + d, ..base }), z).unwrap();
        prop_assert!((rc - r0 + d * w0 / z).abs() <= 1e-10 * scale);
    }
}

//! Seed solutions, eigenfunctions and ladder operators of the truncated
//! oscillator `H0 = -1/2 d^2/dx^2 + x^2/2` on `(0, inf)`.
//!
//! Every state here is unnormalized. Downstream formulas only consume
//! logarithmic derivatives and Wronskian ratios, so constant factors drop out.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hyp1f1::{kummer_jet, KummerParams};
use crate::jets::{Jet, JetFn};

/// Right end of the evaluation domain for seeds.
pub const X_MAX: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            other => Err(Error::InvalidArgument(format!("parity {other:?}"))),
        }
    }
}

/// Factorization energy plus parity: names one transformation function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedSpec {
    pub epsilon: f64,
    pub parity: Parity,
}

impl SeedSpec {
    pub fn new(epsilon: f64, parity: Parity) -> Self {
        SeedSpec { epsilon, parity }
    }

    pub fn odd(epsilon: f64) -> Self {
        Self::new(epsilon, Parity::Odd)
    }

    pub fn even(epsilon: f64) -> Self {
        Self::new(epsilon, Parity::Even)
    }

    /// Kummer parameters and the power of `x` in front of the Gaussian.
    fn kummer(&self) -> (KummerParams, bool) {
        let e = self.epsilon;
        let params = match self.parity {
            Parity::Odd => KummerParams::new((3.0 - 2.0 * e) / 4.0, 1.5),
            Parity::Even => KummerParams::new((1.0 - 2.0 * e) / 4.0, 0.5),
        };
        (params.expect("q is 1/2 or 3/2"), self.parity == Parity::Odd)
    }

    /// The seed as a jet-valued function.
    pub fn function(&self) -> JetFn {
        let spec = *self;
        JetFn::new(move |x, k| seed_u(spec, x, k))
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} seed, epsilon = {}", self.parity, self.epsilon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelKind {
    /// Eigenvalue `E_n = 2n + 3/2` of the truncated oscillator.
    Physical,
    /// Formal even level `2n + 1/2`, violating the boundary condition.
    Formal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumLevel {
    pub n: u32,
    pub kind: LevelKind,
}

impl SpectrumLevel {
    pub fn energy(&self) -> f64 {
        let n = self.n as f64;
        match self.kind {
            LevelKind::Physical => 2.0 * n + 1.5,
            LevelKind::Formal => 2.0 * n + 0.5,
        }
    }
}

fn gaussian_times(params: KummerParams, with_x: bool, x: &Jet) -> Result<Jet> {
    let gauss = (x * x).scale(-0.5).exp();
    let f = kummer_jet(params, x)?;
    let mut out = &gauss * &f;
    if with_x {
        out = x * &out;
    }
    Ok(out)
}

/// Jet of the definite-parity seed `u(x, epsilon)`.
///
/// Odd: `x e^{-x^2/2} 1F1((3-2e)/4; 3/2; x^2)`.
/// Even: `e^{-x^2/2} 1F1((1-2e)/4; 1/2; x^2)`.
pub fn seed_u(spec: SeedSpec, x: f64, order: usize) -> Result<Jet> {
    if !(x > 0.0 && x <= X_MAX) {
        return Err(Error::Domain { op: "seed_u", value: x });
    }
    let (params, with_x) = spec.kummer();
    gaussian_times(params, with_x, &Jet::variable(x, order))
}

fn level_index(n: i64) -> Result<f64> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("level index {n} < 0")));
    }
    Ok(n as f64)
}

/// `psi_n ~ x e^{-x^2/2} 1F1(-n; 3/2; x^2)`, eigenvalue `2n + 3/2`.
pub fn eigenfunction_psi(n: i64, x: f64, order: usize) -> Result<Jet> {
    let nf = level_index(n)?;
    if !(x > 0.0) {
        return Err(Error::Domain { op: "psi", value: x });
    }
    gaussian_times(KummerParams::new(-nf, 1.5)?, true, &Jet::variable(x, order))
}

/// `chi_n ~ e^{-x^2/2} 1F1(-n; 1/2; x^2)`, formal eigenvalue `2n + 1/2`.
/// Defined at `x = 0` too, where it does not vanish.
pub fn formal_chi(n: i64, x: f64, order: usize) -> Result<Jet> {
    let nf = level_index(n)?;
    gaussian_times(KummerParams::new(-nf, 0.5)?, false, &Jet::variable(x, order))
}

pub fn psi_fn(n: i64) -> Result<JetFn> {
    level_index(n)?;
    Ok(JetFn::new(move |x, k| eigenfunction_psi(n, x, k)))
}

pub fn chi_fn(n: i64) -> Result<JetFn> {
    level_index(n)?;
    Ok(JetFn::new(move |x, k| formal_chi(n, x, k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

/// `(a^± f)(x)` with `a^± = (∓ d/dx + x)/√2`. Consumes one order of `f`.
pub fn ladder(direction: Ladder, f: &JetFn, x: f64, order: usize) -> Result<Jet> {
    let fj = f.eval(x, order + 1)?;
    let df = fj.derivative()?;
    let xf = &Jet::variable(x, order) * &fj.truncate(order);
    let out = match direction {
        Ladder::Raise => &xf - &df,
        Ladder::Lower => &xf + &df,
    };
    Ok(out.scale(FRAC_1_SQRT_2))
}

pub fn ladder_fn(direction: Ladder, f: &JetFn) -> JetFn {
    let f = f.clone();
    JetFn::new(move |x, k| ladder(direction, &f, x, k))
}

/// Signed residual `f'' - (x^2 - 2 eps) f` and its scale
/// `|f''| + |x^2 - 2 eps| |f|`.
pub fn schrodinger_residual_scaled(f: &JetFn, epsilon: f64, x: f64) -> Result<(f64, f64)> {
    let j = f.eval(x, 2)?;
    let coeff = x * x - 2.0 * epsilon;
    let r = j.deriv(2) - coeff * j.value();
    Ok((r, j.deriv(2).abs() + coeff.abs() * j.value().abs()))
}

pub fn schrodinger_residual(f: &JetFn, epsilon: f64, x: f64) -> Result<f64> {
    Ok(schrodinger_residual_scaled(f, epsilon, x)?.0)
}

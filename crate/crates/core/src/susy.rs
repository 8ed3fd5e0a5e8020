//! First- and second-order SUSY (Darboux) transformations of the truncated
//! oscillator and the extremal states of the resulting partner Hamiltonians.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::{Jet, JetFn};
use crate::oscillator::{chi_fn, ladder_fn, psi_fn, Ladder, Parity, SeedSpec};

/// Minimum grid size accepted by [`nodeless_check`].
pub const MIN_NODELESS_POINTS: usize = 20;

fn half_x_squared(x: f64, order: usize) -> Jet {
    let v = Jet::variable(x, order);
    (&v * &v).scale(0.5)
}

/// One seed `u`, superpotential `alpha = (ln u)'`, intertwiner
/// `A+ = (-d/dx + alpha)/√2` and partner `V1 = x^2/2 - (ln u)''`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderTransform {
    seed: SeedSpec,
}

impl FirstOrderTransform {
    pub fn new(seed: SeedSpec) -> Self {
        FirstOrderTransform { seed }
    }

    pub fn seed(&self) -> SeedSpec {
        self.seed
    }

    pub fn epsilon(&self) -> f64 {
        self.seed.epsilon
    }

    pub fn u(&self) -> JetFn {
        self.seed.function()
    }

    pub fn alpha_fn(&self) -> JetFn {
        self.u().log_derivative()
    }

    pub fn superpotential_alpha(&self, x: f64, order: usize) -> Result<Jet> {
        self.alpha_fn().eval(x, order)
    }

    pub fn potential_fn(&self) -> JetFn {
        let alpha = self.alpha_fn();
        JetFn::new(move |x, k| {
            let da = alpha.eval(x, k + 1)?.derivative()?;
            Ok(&half_x_squared(x, k) - &da)
        })
    }

    pub fn potential_v1(&self, x: f64) -> Result<f64> {
        self.potential_fn().value(x)
    }

    /// `(A+ f)(x)`, consuming one order of `f`.
    pub fn apply_aplus(&self, f: &JetFn, x: f64, order: usize) -> Result<Jet> {
        self.first_order(f, x, order, -1.0)
    }

    /// `(A f)(x)` with `A = (d/dx + alpha)/√2`, the adjoint of `A+`.
    pub fn apply_a(&self, f: &JetFn, x: f64, order: usize) -> Result<Jet> {
        self.first_order(f, x, order, 1.0)
    }

    fn first_order(&self, f: &JetFn, x: f64, order: usize, sign: f64) -> Result<Jet> {
        let fj = f.eval(x, order + 1)?;
        let alpha = self.superpotential_alpha(x, order)?;
        let out = &fj.derivative()?.scale(sign) + &(&alpha * &fj.truncate(order));
        Ok(out.scale(FRAC_1_SQRT_2))
    }

    pub fn aplus_fn(&self, f: &JetFn) -> JetFn {
        let (t, f) = (*self, f.clone());
        JetFn::new(move |x, k| t.apply_aplus(&f, x, k))
    }

    pub fn a_fn(&self, f: &JetFn) -> JetFn {
        let (t, f) = (*self, f.clone());
        JetFn::new(move |x, k| t.apply_a(&f, x, k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionMode {
    /// Two independent seeds.
    General,
    /// `u2 = a- u1`, `eps2 = eps1 - 1`.
    ReducedStep1,
    /// `u2 = (a-)^2 u1`, `eps2 = eps1 - 2`.
    ReducedStep2,
}

/// Two seeds with `eps2 < eps1`, Wronskian `W(u1, u2)`, intertwiner `B+` and
/// partner `V2 = x^2/2 - (ln W)''`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderTransform {
    seed1: SeedSpec,
    seed2: SeedSpec,
    mode: ReductionMode,
}

impl SecondOrderTransform {
    pub fn general(seed1: SeedSpec, seed2: SeedSpec) -> Result<Self> {
        if !(seed2.epsilon < seed1.epsilon) {
            return Err(Error::InvalidArgument(format!(
                "second-order transform needs eps2 < eps1, got {} >= {}",
                seed2.epsilon, seed1.epsilon
            )));
        }
        Ok(SecondOrderTransform {
            seed1,
            seed2,
            mode: ReductionMode::General,
        })
    }

    /// `u2 = a- u1`: energy lowered by one and parity flipped.
    pub fn reduced_step1(seed1: SeedSpec) -> Self {
        SecondOrderTransform {
            seed1,
            seed2: SeedSpec::new(seed1.epsilon - 1.0, seed1.parity.flip()),
            mode: ReductionMode::ReducedStep1,
        }
    }

    /// `u2 = (a-)^2 u1`: energy lowered by two, parity kept.
    pub fn reduced_step2(seed1: SeedSpec) -> Self {
        SecondOrderTransform {
            seed1,
            seed2: SeedSpec::new(seed1.epsilon - 2.0, seed1.parity),
            mode: ReductionMode::ReducedStep2,
        }
    }

    pub fn seed1(&self) -> SeedSpec {
        self.seed1
    }

    pub fn seed2(&self) -> SeedSpec {
        self.seed2
    }

    pub fn mode(&self) -> ReductionMode {
        self.mode
    }

    pub fn u1(&self) -> JetFn {
        self.seed1.function()
    }

    pub fn u2(&self) -> JetFn {
        match self.mode {
            ReductionMode::General => self.seed2.function(),
            ReductionMode::ReducedStep1 => ladder_fn(Ladder::Lower, &self.u1()),
            ReductionMode::ReducedStep2 => ladder_fn(Ladder::Lower, &ladder_fn(Ladder::Lower, &self.u1())),
        }
    }

    pub fn wronskian_fn(&self) -> JetFn {
        wronskian_of(&self.u1(), &self.u2())
    }

    pub fn wronskian(&self, x: f64, order: usize) -> Result<Jet> {
        self.wronskian_fn().eval(x, order)
    }

    /// `(ln W)'`.
    pub fn eta_fn(&self) -> JetFn {
        self.wronskian_fn().log_derivative()
    }

    pub fn potential_fn(&self) -> JetFn {
        let eta = self.eta_fn();
        JetFn::new(move |x, k| {
            let de = eta.eval(x, k + 1)?.derivative()?;
            Ok(&half_x_squared(x, k) - &de)
        })
    }

    pub fn potential_v2(&self, x: f64) -> Result<f64> {
        self.potential_fn().value(x)
    }

    /// `(B+ f)(x)` with
    /// `B+ = 1/2 [d^2 - eta d + (eta' + eta^2)/2 - x^2 + eps1 + eps2]`.
    /// Consumes two orders of `f`.
    pub fn apply_bplus(&self, f: &JetFn, x: f64, order: usize) -> Result<Jet> {
        let fj = f.eval(x, order + 2)?;
        let eta_hi = self.eta_fn().eval(x, order + 1)?;
        let eta = eta_hi.truncate(order);
        let deta = eta_hi.derivative()?;
        let xx = half_x_squared(x, order).scale(2.0);
        let gamma = &(&(&deta + &(&eta * &eta)).scale(0.5) - &xx) + (self.seed1.epsilon + self.seed2.epsilon);
        let d2f = fj.derivative()?.derivative()?;
        let df = fj.derivative()?.truncate(order);
        let f0 = fj.truncate(order);
        let out = &(&d2f - &(&eta * &df)) + &(&gamma * &f0);
        Ok(out.scale(0.5))
    }

    pub fn bplus_fn(&self, f: &JetFn) -> JetFn {
        let (t, f) = (*self, f.clone());
        JetFn::new(move |x, k| t.apply_bplus(&f, x, k))
    }
}

/// `W(f, g) = f g' - f' g`.
pub fn wronskian_of(f: &JetFn, g: &JetFn) -> JetFn {
    let (f, g) = (f.clone(), g.clone());
    JetFn::new(move |x, k| {
        let fj = f.eval(x, k + 1)?;
        let gj = g.eval(x, k + 1)?;
        Ok(&(&fj.truncate(k) * &gj.derivative()?) - &(&fj.derivative()? * &gj.truncate(k)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowVerdict {
    pub admissible: bool,
    /// An endpoint equality (`eps = E_j` or `eps = 𝓔_j`) was used.
    pub boundary: bool,
}

/// Nonsingular windows for the four parity pairs, `j = 0, 1, 2, ...`:
///
/// | u1 / u2   | below ground       | banded                                  |
/// |-----------|--------------------|-----------------------------------------|
/// | odd/odd   | `e2 < e1 <= 3/2`   | `(3+4j)/2 <= e2 < e1 <= (7+4j)/2`       |
/// | odd/even  | none               | `(1+4j)/2 <= e2 < e1 <= (3+4j)/2`       |
/// | even/odd  | `e2 < e1 <= 1/2`   | `(3+4j)/2 <= e2 < e1 <= (5+4j)/2`       |
/// | even/even | `e2 < e1 <= 1/2`   | `(1+4j)/2 <= e2 < e1 <= (5+4j)/2`       |
pub fn window_verdict(p1: Parity, p2: Parity, eps1: f64, eps2: f64) -> Result<WindowVerdict> {
    if !(eps2 < eps1) {
        return Err(Error::InvalidArgument(format!(
            "window needs eps2 < eps1, got {eps2} >= {eps1}"
        )));
    }
    // (below-ground ceiling, band start, band width)
    let (below, start, width) = match (p1, p2) {
        (Parity::Odd, Parity::Odd) => (Some(1.5), 1.5, 2.0),
        (Parity::Odd, Parity::Even) => (None, 0.5, 1.0),
        (Parity::Even, Parity::Odd) => (Some(0.5), 1.5, 1.0),
        (Parity::Even, Parity::Even) => (Some(0.5), 0.5, 2.0),
    };
    if let Some(top) = below {
        if eps1 <= top {
            return Ok(WindowVerdict {
                admissible: true,
                boundary: eps1 == top,
            });
        }
    }
    let mut j = 0u32;
    loop {
        let lo = start + 2.0 * j as f64;
        if lo > eps2 {
            return Ok(WindowVerdict {
                admissible: false,
                boundary: false,
            });
        }
        let hi = lo + width;
        if eps1 <= hi {
            return Ok(WindowVerdict {
                admissible: true,
                boundary: eps2 == lo || eps1 == hi,
            });
        }
        j += 1;
    }
}

pub fn admissible_window(p1: Parity, p2: Parity, eps1: f64, eps2: f64) -> Result<bool> {
    Ok(window_verdict(p1, p2, eps1, eps2)?.admissible)
}

/// True iff `f` evaluates to a nonzero value of constant sign at every grid
/// point. A failed evaluation counts as a node.
pub fn nodeless_check(f: &JetFn, grid: &[f64]) -> Result<bool> {
    if grid.len() < MIN_NODELESS_POINTS {
        return Err(Error::InvalidArgument(format!(
            "nodeless check needs at least {MIN_NODELESS_POINTS} points, got {}",
            grid.len()
        )));
    }
    if grid.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidArgument("grid must lie in (0, inf)".into()));
    }
    let mut sign = 0.0;
    for &x in grid {
        match f.value(x) {
            Ok(v) if v.is_finite() && v != 0.0 => {
                if sign == 0.0 {
                    sign = v.signum();
                } else if v.signum() != sign {
                    return Ok(false);
                }
            }
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// First grid point at which `f` changes sign (or fails to evaluate).
pub fn first_sign_change(f: &JetFn, grid: &[f64]) -> Option<f64> {
    let mut sign = 0.0;
    for &x in grid {
        match f.value(x) {
            Ok(v) if v.is_finite() && v != 0.0 => {
                if sign == 0.0 {
                    sign = v.signum();
                } else if v.signum() != sign {
                    return Some(x);
                }
            }
            _ => return Some(x),
        }
    }
    None
}

/// Which partner Hamiltonian and which Painleve connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalTarget {
    H1Piv,
    H2Piv,
    H1Pv,
    H2Pv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    First(FirstOrderTransform),
    Second(SecondOrderTransform),
}

/// A formal eigenfunction of a partner Hamiltonian annihilated by its
/// lowering ladder operator.
type Ratio = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// A formal eigenfunction of a partner Hamiltonian annihilated by its
/// lowering ladder operator.
#[derive(Clone)]
pub struct ExtremalState {
    pub eigenvalue: f64,
    pub state: JetFn,
    pub label: String,
    // Smallest |output| / sum|terms| over the operator chain building `state`.
    cancellation: Ratio,
}

impl ExtremalState {
    /// Worst cancellation ratio at `x` among the operator applications that
    /// produced the state; near zero means that stage annihilated its input.
    pub fn cancellation(&self, x: f64) -> Result<f64> {
        (self.cancellation)(x)
    }

    /// True when some stage cancels to rounding level at every grid point,
    /// e.g. `A+ chi0` for `u = chi0`.
    pub fn vanishes_on(&self, grid: &[f64]) -> bool {
        !grid.is_empty()
            && grid
                .iter()
                .all(|&x| matches!(self.cancellation(x), Ok(r) if r <= 1e-10))
    }
}

impl fmt::Debug for ExtremalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtremalState")
            .field("eigenvalue", &self.eigenvalue)
            .field("label", &self.label)
            .finish()
    }
}

fn ratio(out: f64, terms: f64) -> f64 {
    if terms == 0.0 {
        1.0
    } else {
        out.abs() / terms
    }
}

/// One stage of an operator chain: a function and how badly it cancelled.
#[derive(Clone)]
struct Staged {
    f: JetFn,
    worst: Ratio,
}

impl Staged {
    fn start(f: JetFn) -> Self {
        Staged {
            f,
            worst: Arc::new(|_| Ok(1.0)),
        }
    }

    fn then(self, next: JetFn, stage: impl Fn(f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        let prev = self.worst;
        Staged {
            f: next,
            worst: Arc::new(move |x| Ok(prev(x)?.min(stage(x)?))),
        }
    }

    fn ladder(self, dir: Ladder) -> Self {
        let g = self.f.clone();
        let next = ladder_fn(dir, &g);
        let out = next.clone();
        self.then(next, move |x| {
            let j = g.eval(x, 1)?;
            Ok(ratio(
                out.value(x)?,
                (j.deriv(1).abs() + (x * j.value()).abs()) * FRAC_1_SQRT_2,
            ))
        })
    }

    fn raise(self) -> Self {
        self.ladder(Ladder::Raise)
    }

    fn aplus(self, t: FirstOrderTransform) -> Self {
        let g = self.f.clone();
        let next = t.aplus_fn(&g);
        let out = next.clone();
        self.then(next, move |x| {
            let j = g.eval(x, 1)?;
            let a = t.superpotential_alpha(x, 0)?.value();
            let terms = (j.deriv(1).abs() + (a * j.value()).abs()) * FRAC_1_SQRT_2;
            Ok(ratio(out.value(x)?, terms))
        })
    }

    fn bplus(self, t: SecondOrderTransform) -> Self {
        let g = self.f.clone();
        let next = t.bplus_fn(&g);
        let out = next.clone();
        self.then(next, move |x| {
            let j = g.eval(x, 2)?;
            let eta = t.eta_fn().eval(x, 1)?;
            let gamma = 0.5 * (eta.deriv(1) + eta.value() * eta.value()) - x * x + t.seed1.epsilon + t.seed2.epsilon;
            let terms = j.deriv(2).abs() + (eta.value() * j.deriv(1)).abs() + (gamma * j.value()).abs();
            Ok(ratio(out.value(x)?, 0.5 * terms))
        })
    }

    fn into_state(self, eigenvalue: f64, label: &str) -> ExtremalState {
        ExtremalState {
            eigenvalue,
            state: self.f,
            label: label.to_string(),
            cancellation: self.worst,
        }
    }
}

fn wronskian_quotient(t: SecondOrderTransform) -> Staged {
    let u1 = t.u1();
    let u2 = match t.mode() {
        ReductionMode::General => Staged::start(t.u2()),
        ReductionMode::ReducedStep1 => Staged::start(u1.clone()).ladder(Ladder::Lower),
        ReductionMode::ReducedStep2 => Staged::start(u1.clone()).ladder(Ladder::Lower).ladder(Ladder::Lower),
    };
    let (f2, worst) = (u2.f.clone(), u2.worst.clone());
    let w = wronskian_of(&u1, &f2);
    let state = u1.quotient(&w);
    let stage = Staged { f: u1.clone(), worst };
    stage.then(state, move |x| {
        let a = u1.eval(x, 1)?;
        let b = f2.eval(x, 1)?;
        let terms = (a.value() * b.deriv(1)).abs() + (a.deriv(1) * b.value()).abs();
        Ok(ratio(w.value(x)?, terms))
    })
}

/// Extremal states in the conventional order:
///
/// * `H1Piv`: `1/u, A+ a+ u, A+ e^{-x^2/2}` at `eps, eps+1, 1/2`
/// * `H2Piv`: `u1/W, B+ a+ u1, B+ e^{-x^2/2}` at `eps1-1, eps1+1, 1/2`
/// * `H1Pv`: `1/u, A+ (a+)^2 u, A+ chi0, A+ psi0` at `eps, eps+2, 1/2, 3/2`
/// * `H2Pv`: `u1/W, B+ (a+)^2 u1, B+ chi0, B+ psi0` at `eps1-2, eps1+2, 1/2, 3/2`
pub fn extremal_states(target: ExtremalTarget, t: &Transform) -> Result<Vec<ExtremalState>> {
    let chi0 = Staged::start(chi_fn(0)?);
    let psi0 = Staged::start(psi_fn(0)?);
    match (target, t) {
        (ExtremalTarget::H1Piv, Transform::First(t1)) => {
            let (t1, e) = (*t1, t1.epsilon());
            let u = Staged::start(t1.u());
            Ok(vec![
                Staged::start(t1.u().recip()).into_state(e, "1/u"),
                u.raise().aplus(t1).into_state(e + 1.0, "A+ a+ u"),
                chi0.aplus(t1).into_state(0.5, "A+ chi0"),
            ])
        }
        (ExtremalTarget::H1Pv, Transform::First(t1)) => {
            let (t1, e) = (*t1, t1.epsilon());
            let u = Staged::start(t1.u());
            Ok(vec![
                Staged::start(t1.u().recip()).into_state(e, "1/u"),
                u.raise().raise().aplus(t1).into_state(e + 2.0, "A+ (a+)^2 u"),
                chi0.aplus(t1).into_state(0.5, "A+ chi0"),
                psi0.aplus(t1).into_state(1.5, "A+ psi0"),
            ])
        }
        (ExtremalTarget::H2Piv, Transform::Second(t2)) if t2.mode() == ReductionMode::ReducedStep1 => {
            let (t2, e1) = (*t2, t2.seed1().epsilon);
            let u1 = Staged::start(t2.u1());
            Ok(vec![
                wronskian_quotient(t2).into_state(e1 - 1.0, "u1/W"),
                u1.raise().bplus(t2).into_state(e1 + 1.0, "B+ a+ u1"),
                chi0.bplus(t2).into_state(0.5, "B+ chi0"),
            ])
        }
        (ExtremalTarget::H2Pv, Transform::Second(t2)) if t2.mode() == ReductionMode::ReducedStep2 => {
            let (t2, e1) = (*t2, t2.seed1().epsilon);
            let u1 = Staged::start(t2.u1());
            Ok(vec![
                wronskian_quotient(t2).into_state(e1 - 2.0, "u1/W"),
                u1.raise().raise().bplus(t2).into_state(e1 + 2.0, "B+ (a+)^2 u1"),
                chi0.bplus(t2).into_state(0.5, "B+ chi0"),
                psi0.bplus(t2).into_state(1.5, "B+ psi0"),
            ])
        }
        (target, t) => Err(Error::ModeMismatch(format!("{target:?} cannot be built from {t:?}"))),
    }
}

/// Index pairs of states whose eigenvalues coincide (within 1e-12).
pub fn coincident_eigenvalues(states: &[ExtremalState]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            if (states[i].eigenvalue - states[j].eigenvalue).abs() < 1e-12 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Partner Schrödinger residual `phi'' - 2 (V - lambda) phi` and its scale.
pub fn partner_residual(phi: &JetFn, potential: &JetFn, eigenvalue: f64, x: f64) -> Result<(f64, f64)> {
    let p = phi.eval(x, 2)?;
    let v = potential.value(x)? - eigenvalue;
    let r = p.deriv(2) - 2.0 * v * p.value();
    Ok((r, p.deriv(2).abs() + 2.0 * v.abs() * p.value().abs()))
}

/// `L- = A+ a- A` for `H1` (third order), applied to `f`.
pub fn lowering_h1_piv(t: &FirstOrderTransform, f: &JetFn) -> JetFn {
    t.aplus_fn(&ladder_fn(Ladder::Lower, &t.a_fn(f)))
}

/// `L- = A+ (a-)^2 A` for `H1` (fourth order), applied to `f`.
pub fn lowering_h1_pv(t: &FirstOrderTransform, f: &JetFn) -> JetFn {
    let inner = ladder_fn(Ladder::Lower, &ladder_fn(Ladder::Lower, &t.a_fn(f)));
    t.aplus_fn(&inner)
}

/// Magnitude reference for an `m`-th order operator with coefficients of size
/// up to `coeff` acting on `f` at `x`: `sum_k |f^(k)| coeff^(m-k)`.
pub fn operator_scale(f: &JetFn, x: f64, m: usize, coeff: f64) -> Result<f64> {
    let j = f.eval(x, m)?;
    Ok((0..=m).map(|k| j.deriv(k).abs() * coeff.powi((m - k) as i32)).sum())
}

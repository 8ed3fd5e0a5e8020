//! Painleve IV and V solution families built from extremal states, plus the
//! closed forms they reduce to.
//!
//! PIV solutions are functions of `x`. PV solutions are functions of
//! `z = 2 x^2`, so `d = -1/8` always.

use std::fmt;
use std::str::FromStr;

use log::{info, warn};

use crate::error::{Error, Result};
use crate::hyp1f1::{kummer_jet, KummerParams};
use crate::jets::{Jet, JetFn};
use crate::oscillator::{Parity, SeedSpec};
use crate::residual::{default_pv_grid, verify_pv};
use crate::susy::{
    extremal_states, first_sign_change, wronskian_of, ExtremalState, ExtremalTarget, FirstOrderTransform,
    SecondOrderTransform, Transform,
};

/// The fixed PV parameter `d` in the `z = 2 x^2` convention.
pub const PV_D: f64 = -0.125;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivParams {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl PvParams {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        PvParams { a, b, c, d: PV_D }
    }
}

/// `g(x)` with its PIV parameters.
#[derive(Debug, Clone)]
pub struct PivSolution {
    pub g: JetFn,
    pub params: PivParams,
    pub provenance: String,
}

/// `w(z)` with its PV parameters.
#[derive(Debug, Clone)]
pub struct PvSolution {
    pub w: JetFn,
    pub params: PvParams,
    pub provenance: String,
}

/// `a = e2 + e3 - 2 e1 - 1`, `b = -2 (e2 - e3)^2`.
pub fn piv_parameters(e1: f64, e2: f64, e3: f64) -> PivParams {
    PivParams {
        a: e2 + e3 - 2.0 * e1 - 1.0,
        b: -2.0 * (e2 - e3).powi(2),
    }
}

/// `a = (e1-e2)^2/8`, `b = -(e3-e4)^2/8`, `c = (e1+e2-e3-e4)/4 - 1/2`,
/// `d = -1/8`. The slot pairs are sorted first so the result is bitwise
/// symmetric under `e1 <-> e2` and `e3 <-> e4`.
pub fn pv_parameters(e1: f64, e2: f64, e3: f64, e4: f64) -> PvParams {
    let (e1, e2) = (e1.min(e2), e1.max(e2));
    let (e3, e4) = (e3.min(e4), e3.max(e4));
    PvParams::new(
        (e1 - e2).powi(2) / 8.0,
        -(e3 - e4).powi(2) / 8.0,
        (e1 + e2 - e3 - e4) / 4.0 - 0.5,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partner {
    H1,
    H2,
}

impl fmt::Display for Partner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Partner::H1 => "H1",
            Partner::H2 => "H2",
        })
    }
}

/// The six PIV families: `g1..g3` from `H1`, `G1..G3` from `H2`.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PivFamily {
    g1,
    g2,
    g3,
    G1,
    G2,
    G3,
}

impl PivFamily {
    pub const ALL: [PivFamily; 6] = [
        PivFamily::g1,
        PivFamily::g2,
        PivFamily::g3,
        PivFamily::G1,
        PivFamily::G2,
        PivFamily::G3,
    ];

    pub fn partner(self) -> Partner {
        match self {
            PivFamily::g1 | PivFamily::g2 | PivFamily::g3 => Partner::H1,
            _ => Partner::H2,
        }
    }

    /// Position of the state used for `phi` in the extremal triplet.
    pub fn state_index(self) -> usize {
        match self {
            PivFamily::g1 | PivFamily::G1 => 0,
            PivFamily::g2 | PivFamily::G2 => 1,
            PivFamily::g3 | PivFamily::G3 => 2,
        }
    }

    /// Printed parameters, `eps` being `eps` for `H1` and `eps1` for `H2`.
    pub fn params(self, eps: f64) -> PivParams {
        let (a, b) = match self {
            PivFamily::g1 => (0.5 - eps, -2.0 * (eps + 0.5).powi(2)),
            PivFamily::g2 => (-eps - 2.5, -2.0 * (eps - 0.5).powi(2)),
            PivFamily::g3 => (2.0 * eps - 1.0, -2.0),
            PivFamily::G1 => (2.5 - eps, -2.0 * (eps + 0.5).powi(2)),
            PivFamily::G2 => (-eps - 3.5, -2.0 * (eps - 1.5).powi(2)),
            PivFamily::G3 => (2.0 * (eps - 1.0), -8.0),
        };
        PivParams { a, b }
    }
}

impl fmt::Display for PivFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for PivFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PivFamily::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("PIV family {s:?}")))
    }
}

fn triplet_transform(partner: Partner, spec: SeedSpec) -> Transform {
    match partner {
        Partner::H1 => Transform::First(FirstOrderTransform::new(spec)),
        Partner::H2 => Transform::Second(SecondOrderTransform::reduced_step1(spec)),
    }
}

fn quadruplet_transform(partner: Partner, spec: SeedSpec) -> Transform {
    match partner {
        Partner::H1 => Transform::First(FirstOrderTransform::new(spec)),
        Partner::H2 => Transform::Second(SecondOrderTransform::reduced_step2(spec)),
    }
}

pub fn piv_states(partner: Partner, spec: SeedSpec) -> Result<Vec<ExtremalState>> {
    let target = match partner {
        Partner::H1 => ExtremalTarget::H1Piv,
        Partner::H2 => ExtremalTarget::H2Piv,
    };
    extremal_states(target, &triplet_transform(partner, spec))
}

pub fn pv_states(partner: Partner, spec: SeedSpec) -> Result<Vec<ExtremalState>> {
    let target = match partner {
        Partner::H1 => ExtremalTarget::H1Pv,
        Partner::H2 => ExtremalTarget::H2Pv,
    };
    extremal_states(target, &quadruplet_transform(partner, spec))
}

/// `g = -x - (ln phi)'` for `phi = states[which]`, with the chosen eigenvalue
/// rotated into the `e1` slot.
pub fn piv_from_extremal(states: &[ExtremalState], which: usize, grid: &[f64]) -> Result<PivSolution> {
    if states.len() != 3 || which >= 3 {
        return Err(Error::InvalidArgument(format!(
            "need a triplet and an index below 3, got {} states and index {which}",
            states.len()
        )));
    }
    let phi = &states[which];
    if phi.vanishes_on(grid) {
        return Err(Error::Degenerate(format!("{} vanishes identically", phi.label)));
    }
    if let Some(x) = first_sign_change(&phi.state, grid) {
        return Err(Error::NodeInGrid(x));
    }
    let others: Vec<f64> = (0..3).filter(|&i| i != which).map(|i| states[i].eigenvalue).collect();
    let params = piv_parameters(phi.eigenvalue, others[0], others[1]);
    let dlog = phi.state.log_derivative();
    let g = JetFn::new(move |x, k| Ok(-&(&Jet::variable(x, k) + &dlog.eval(x, k)?)));
    Ok(PivSolution {
        g,
        params,
        provenance: format!("-x - (ln {})' at eigenvalue {}", phi.label, phi.eigenvalue),
    })
}

/// Builds `family` from its extremal state and checks `phi` on `grid`.
pub fn piv_extremal(family: PivFamily, spec: SeedSpec, grid: &[f64]) -> Result<PivSolution> {
    let states = piv_states(family.partner(), spec)?;
    let mut s = piv_from_extremal(&states, family.state_index(), grid)?;
    s.provenance = format!("{family} {spec} extremal: {}", s.provenance);
    Ok(s)
}

/// `alpha = u'/u` from the Kummer ratio, without differentiating `u`.
fn alpha_closed(spec: SeedSpec, x: &Jet) -> Result<Jet> {
    let e = spec.epsilon;
    match spec.parity {
        Parity::Odd => {
            let p = (3.0 - 2.0 * e) / 4.0;
            let num = kummer_jet(KummerParams::new(p + 1.0, 2.5)?, x)?;
            let den = kummer_jet(KummerParams::new(p, 1.5)?, x)?;
            let ratio = num.div(&den)?;
            Ok(&(&x.recip()? - x) + &(x * &ratio).scale(1.0 - 2.0 * e / 3.0))
        }
        Parity::Even => {
            let p = (1.0 - 2.0 * e) / 4.0;
            let num = kummer_jet(KummerParams::new(p + 1.0, 1.5)?, x)?;
            let den = kummer_jet(KummerParams::new(p, 0.5)?, x)?;
            let ratio = num.div(&den)?;
            Ok(&-x + &(x * &ratio).scale(1.0 - 2.0 * e))
        }
    }
}

fn closed_domain(x: f64) -> Result<()> {
    if !(x > 0.0 && x <= crate::oscillator::X_MAX) {
        return Err(Error::Domain {
            op: "closed form",
            value: x,
        });
    }
    Ok(())
}

/// Printed `g1`: odd `1/x - 2x + (1 - 2e/3) x F((7-2e)/4; 5/2)/F((3-2e)/4; 3/2)`,
/// even `-2x + (1 - 2e) x F((5-2e)/4; 3/2)/F((1-2e)/4; 1/2)`.
pub fn g1_closed(spec: SeedSpec, x: f64, order: usize) -> Result<Jet> {
    closed_domain(x)?;
    let g0 = alpha_closed(spec, &Jet::variable(x, 0))?.value() - x;
    Ok(riccati_jet(spec.epsilon, x, g0, order))
}

/// Taylor jet of the solution of `g' = -(2eps + 1) - 2xg - g^2` through
/// `g(x0) = g0`. Seeds with `g1` exponentially small keep full relative
/// accuracy in every derivative this way.
fn riccati_jet(eps: f64, x0: f64, g0: f64, order: usize) -> Jet {
    let mut c = vec![0.0; order + 1];
    c[0] = g0;
    for n in 0..order {
        let mut rhs = -2.0 * x0 * c[n] - (0..=n).map(|i| c[i] * c[n - i]).sum::<f64>();
        if n == 0 {
            rhs -= 2.0 * eps + 1.0;
        } else {
            rhs -= 2.0 * c[n - 1];
        }
        c[n + 1] = rhs / (n + 1) as f64;
    }
    Jet::from_taylor(&c)
}

/// The printed form with `s = g1 + x` expanded so the `x^3` terms cancel
/// symbolically:
/// `num = (1 + 2eps)x + (2eps + 2x^2)g1 + 3x g1^2 + g1^3`,
/// `den = -(2eps + 1) - 2x g1 - g1^2`.
fn g2_from_g1(eps: f64, x: &Jet, g1: &Jet) -> Result<Jet> {
    let x2 = x * x;
    let g1sq = g1 * g1;
    let num = &(&(&x.scale(1.0 + 2.0 * eps) + &(&(&x2.scale(2.0) + 2.0 * eps) * g1)) + &(x * &g1sq).scale(3.0))
        + &(&g1sq * g1);
    let den = &(&-&(x * g1).scale(2.0) - &g1sq) - (2.0 * eps + 1.0);
    Ok(&(&-g1 - &x.scale(2.0)) - &num.div(&den)?.scale(2.0))
}

fn g3_from_g1(x: &Jet, g1_hi: &Jet) -> Result<Jet> {
    let k = x.order();
    let num = &g1_hi.derivative()? + 2.0;
    let den = &g1_hi.truncate(k) + &x.scale(2.0);
    Ok(-&num.div(&den)?)
}

/// `D = x^2 + 1 - 2eps1 - alpha^2` and `t = s + G1 = 2s/D` with
/// `s = x + alpha`. `t` stays bounded where `alpha` blows up at a seed node.
fn cap_parts(eps1: f64, x: &Jet, alpha: &Jet) -> Result<(Jet, Jet, Jet)> {
    let s = x + alpha;
    let d = &(&(x * x) + (1.0 - 2.0 * eps1)) - &(alpha * alpha);
    let t = s.scale(2.0).div(&d)?;
    Ok((s, d, t))
}

fn cap_g1(eps1: f64, x: &Jet, alpha: &Jet) -> Result<Jet> {
    let (s, _, t) = cap_parts(eps1, x, alpha)?;
    Ok(&t - &s)
}

/// The printed `G1 + (2alpha^2 - 2x^2 + 2(2eps1 + 1))/(alpha - G1 - x)`
/// rewritten as `t + (st - 2x alpha - 2x^2 + 4eps1 + 2)/(2alpha - t)`.
fn cap_g2(eps1: f64, x: &Jet, alpha: &Jet) -> Result<Jet> {
    let (s, _, t) = cap_parts(eps1, x, alpha)?;
    let num = &(&(&s * &t) - &(&(x * alpha) + &(x * x)).scale(2.0)) + (4.0 * eps1 + 2.0);
    let den = &alpha.scale(2.0) - &t;
    Ok(&t + &num.div(&den)?)
}

/// The printed `[sG1^2 + (2eps1 - 1 + s^2)G1 + (2eps1 - 3)s]/[s^2 + sG1 + 2eps1 - 1]`
/// rewritten as `[st^2 + (2eps1 - 1)t - 2sE/D]/[st + 2eps1 - 1]` with
/// `E = 2x^2 + 2x alpha + 1 - 2eps1`.
fn cap_g3(eps1: f64, x: &Jet, alpha: &Jet) -> Result<Jet> {
    let (s, d, t) = cap_parts(eps1, x, alpha)?;
    let e = &(&(x * x) + &(x * alpha)).scale(2.0) + (1.0 - 2.0 * eps1);
    let num = &(&(&s * &(&t * &t)) + &t.scale(2.0 * eps1 - 1.0)) - &(&s * &e).scale(2.0).div(&d)?;
    let den = &(&s * &t) + (2.0 * eps1 - 1.0);
    num.div(&den)
}

/// Jet of a printed closed form at `x`. For `G*` the seed is `u1` with
/// `eps1 = spec.epsilon`.
pub fn piv_closed_eval(family: PivFamily, spec: SeedSpec, x: f64, order: usize) -> Result<Jet> {
    closed_domain(x)?;
    let e = spec.epsilon;
    let xj = Jet::variable(x, order);
    match family {
        PivFamily::g1 => g1_closed(spec, x, order),
        PivFamily::g2 => g2_from_g1(e, &xj, &g1_closed(spec, x, order)?),
        PivFamily::g3 => g3_from_g1(&xj, &g1_closed(spec, x, order + 1)?),
        PivFamily::G1 | PivFamily::G2 | PivFamily::G3 => {
            let alpha = &g1_closed(spec, x, order)? + &xj;
            match family {
                PivFamily::G1 => cap_g1(e, &xj, &alpha),
                PivFamily::G2 => cap_g2(e, &xj, &alpha),
                _ => cap_g3(e, &xj, &alpha),
            }
        }
    }
}

/// True when `g3 = -(g1' + 2)/(g1 + 2x)` is 0/0 identically, which happens
/// for `g1 = -2x` (even seed, `eps = 1/2`).
pub fn g3_is_degenerate(spec: SeedSpec) -> Result<bool> {
    for x in [0.7, 1.9] {
        let g = g1_closed(spec, x, 1)?;
        if (g.value() + 2.0 * x).abs() > 1e-12 || (g.deriv(1) + 2.0).abs() > 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The printed closed form as a solution with its printed parameters.
pub fn piv_closed(family: PivFamily, spec: SeedSpec) -> Result<PivSolution> {
    if family == PivFamily::g3 && g3_is_degenerate(spec)? {
        return Err(Error::Degenerate(format!(
            "g3 = -(g1' + 2)/(g1 + 2x) is 0/0 for g1 = -2x ({spec})"
        )));
    }
    Ok(PivSolution {
        g: JetFn::new(move |x, k| piv_closed_eval(family, spec, x, k)),
        params: family.params(spec.epsilon),
        provenance: format!("{family} {spec} closed form"),
    })
}

/// The six identifications of `(phi3, phi4)` within the PV quadruplet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PvCase {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl PvCase {
    pub const ALL: [PvCase; 6] = [PvCase::A, PvCase::B, PvCase::C, PvCase::D, PvCase::E, PvCase::F];

    /// Quadruplet indices used as `(phi3, phi4)`; the remaining two states
    /// fill the `e1, e2` slots.
    pub fn pair(self) -> (usize, usize) {
        match self {
            PvCase::A => (0, 1),
            PvCase::B => (2, 1),
            PvCase::C => (3, 1),
            PvCase::D => (0, 3),
            PvCase::E => (0, 2),
            PvCase::F => (2, 3),
        }
    }

    /// Printed `H1` parameters for seed energy `eps`.
    pub fn h1_params(self, eps: f64) -> PvParams {
        match self {
            PvCase::A => PvParams::new(0.125, -0.5, -(eps + 1.0) / 2.0),
            PvCase::B => PvParams::new((eps - 1.5).powi(2) / 8.0, -(eps + 1.5).powi(2) / 8.0, -0.75),
            PvCase::C => PvParams::new((eps - 0.5).powi(2) / 8.0, -(eps + 0.5).powi(2) / 8.0, -1.25),
            PvCase::D => PvParams::new((eps + 1.5).powi(2) / 8.0, -(eps - 1.5).powi(2) / 8.0, -0.25),
            PvCase::E => PvParams::new((eps + 0.5).powi(2) / 8.0, -(eps - 0.5).powi(2) / 8.0, 0.25),
            PvCase::F => PvParams::new(0.5, -0.125, (eps - 1.0) / 2.0),
        }
    }
}

impl fmt::Display for PvCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PvCase::A => "a",
            PvCase::B => "b",
            PvCase::C => "c",
            PvCase::D => "d",
            PvCase::E => "e",
            PvCase::F => "f",
        })
    }
}

impl FromStr for PvCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PvCase::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("PV case {s:?}")))
    }
}

/// Parameters for an identification: `(phi3, phi4)` eigenvalues go to the
/// `e3, e4` slots, the rest to `e1, e2`.
pub fn pv_case_parameters(eigenvalues: &[f64; 4], case: PvCase) -> PvParams {
    let (i, j) = case.pair();
    let rest: Vec<f64> = (0..4).filter(|&k| k != i && k != j).map(|k| eigenvalues[k]).collect();
    pv_parameters(rest[0], rest[1], eigenvalues[i], eigenvalues[j])
}

/// `x = sqrt(z/2)` as a jet in `z`.
fn x_of_z() -> JetFn {
    JetFn::new(|z, k| {
        if !(z > 0.0) {
            return Err(Error::Domain {
                op: "sqrt(z/2)",
                value: z,
            });
        }
        Jet::variable(z, k).scale(0.5).sqrt()
    })
}

/// Re-expresses `f(x)` as a function of `z = 2 x^2`.
pub fn in_z(f: &JetFn) -> JetFn {
    f.compose(&x_of_z())
}

/// `w = 1 + 2x/g(x)`, i.e. `1 + sqrt(2z)/g(sqrt(z/2))`.
pub fn w_from_g(g: &JetFn) -> JetFn {
    let g = g.clone();
    in_z(&JetFn::new(move |x, k| {
        let two_x = Jet::variable(x, k).scale(2.0);
        Ok(&two_x.div(&g.eval(x, k)?)? + 1.0)
    }))
}

/// `w` from `g = -prefactor x - (ln W(phi3, phi4))'`.
pub fn pv_with_prefactor(states: &[ExtremalState], case: PvCase, prefactor: f64) -> Result<PvSolution> {
    if states.len() != 4 {
        return Err(Error::InvalidArgument(format!(
            "need a quadruplet, got {} states",
            states.len()
        )));
    }
    let (i, j) = case.pair();
    let eig = [
        states[0].eigenvalue,
        states[1].eigenvalue,
        states[2].eigenvalue,
        states[3].eigenvalue,
    ];
    let dlog = wronskian_of(&states[i].state, &states[j].state).log_derivative();
    let g = JetFn::new(move |x, k| Ok(-&(&Jet::variable(x, k).scale(prefactor) + &dlog.eval(x, k)?)));
    Ok(PvSolution {
        w: w_from_g(&g),
        params: pv_case_parameters(&eig, case),
        provenance: format!(
            "case {case}: g = -{prefactor}x - (ln W({}, {}))'",
            states[i].label, states[j].label
        ),
    })
}

/// Prefactor printed for each partner: `-x` for `H1`, `-2x` for `H2`.
pub fn printed_prefactor(partner: Partner) -> f64 {
    match partner {
        Partner::H1 => 1.0,
        Partner::H2 => 2.0,
    }
}

/// Builds the case-`case` PV solution from the quadruplet, trying both the
/// `-x` and `-2x` prefactors and keeping the one whose residual is smaller on
/// `z_grid`. Fails if `W(phi3, phi4)` has a node on the matching `x` grid.
pub fn pv_from_pair(partner: Partner, states: &[ExtremalState], case: PvCase, z_grid: &[f64]) -> Result<PvSolution> {
    let (i, j) = case.pair();
    if states.len() != 4 {
        return Err(Error::InvalidArgument("need a quadruplet".into()));
    }
    let x_grid: Vec<f64> = z_grid.iter().map(|z| (z / 2.0).sqrt()).collect();
    for k in [i, j] {
        if states[k].vanishes_on(&x_grid) {
            return Err(Error::Degenerate(format!("{} vanishes identically", states[k].label)));
        }
    }
    let w = wronskian_of(&states[i].state, &states[j].state);
    if let Some(x) = first_sign_change(&w, &x_grid) {
        return Err(Error::NodeInGrid(x));
    }
    let printed = printed_prefactor(partner);
    let mut best: Option<(PvSolution, f64, f64)> = None;
    for p in [1.0, 2.0] {
        let sol = pv_with_prefactor(states, case, p)?;
        let score = match verify_pv(&sol, z_grid, 1e-8) {
            Ok(r) => r.max_rel_residual,
            Err(_) => f64::INFINITY,
        };
        info!("PV {partner} case {case}: prefactor -{p}x gives max relative residual {score:e}");
        if best.as_ref().is_none_or(|(_, s, _)| score < *s) {
            best = Some((sol, score, p));
        }
    }
    let (mut sol, score, chosen) = best.expect("two candidates");
    if chosen != printed {
        warn!(
            "PV {partner} case {case}: residual selects -{chosen}x over the printed -{printed}x \
             (residual {score:e})"
        );
    }
    sol.provenance = format!("{partner} {}; prefactor selected by residual", sol.provenance);
    Ok(sol)
}

/// Convenience: quadruplet from the seed, then [`pv_from_pair`] on the default grid.
pub fn pv_family(partner: Partner, case: PvCase, spec: SeedSpec) -> Result<PvSolution> {
    let states = pv_states(partner, spec)?;
    let mut s = pv_from_pair(partner, &states, case, &default_pv_grid())?;
    s.provenance = format!("w{}{case} {spec}: {}", partner_digit(partner), s.provenance);
    Ok(s)
}

fn partner_digit(p: Partner) -> u8 {
    match p {
        Partner::H1 => 1,
        Partner::H2 => 2,
    }
}

/// Printed `w1a..w1f` as functions of `x = sqrt(z/2)` and `alpha(x)`.
fn w1_in_x(case: PvCase, eps: f64, x: &Jet, al: &Jet) -> Result<Jet> {
    let x2 = x * x;
    let a2 = al * al;
    match case {
        PvCase::A => {
            let num = (&(&(&x2 * -2.0) + (1.0 + 2.0 * eps)) + &(x * al).scale(2.0)).try_mul(x)?;
            let den = &(&(&x.scale(4.0) + &x.powi(3).scale(4.0)) - &(&(&x2 * 2.0) + 1.0).try_mul(al)?.scale(4.0))
                + &(x * &a2).scale(4.0);
            Ok(&num.scale(4.0).div(&den)? + 1.0)
        }
        PvCase::B => {
            let p = &(&(&al.scale(4.0) - &x.scale(8.0 * eps)) + &x.powi(3).scale(4.0)) - &(&a2 * x).scale(4.0);
            let num = &(al + x) * &(&p - &x.scale(8.0));
            let den = &(al - x) * &(&p + &x.scale(8.0));
            num.div(&den)
        }
        PvCase::C => {
            let num = &(&(&(&x2.scale(16.0 * eps) - &x.powi(4).scale(8.0)) + &(&a2 * &x2).scale(8.0))
                + &(x * al).scale(8.0))
                - 16.0;
            let num = (x * &num).scale(2.0);
            let den = &(&(&(&(&al.scale(8.0) - &(&x.powi(3) * &(&a2 + (2.0 * eps - 3.0))).scale(8.0))
                + &(&(al * &x2) * &(&a2 + (2.0 * eps - 1.0))).scale(8.0))
                - &(x * &(&a2 + (eps - 1.0))).scale(16.0))
                + &x.powi(5).scale(8.0))
                - &(al * &x.powi(4)).scale(8.0);
            Ok(&num.div(&den)? + 1.0)
        }
        PvCase::D => {
            let ax = al * x;
            let num = &(&-&ax + 1.0) - &x2;
            let den = &(&-&ax + 1.0) + &x2;
            num.div(&den)
        }
        PvCase::E => (al + x).div(&(al - x)),
        PvCase::F => {
            let num = &(&(&-al + &x.powi(3)) + &(&(&a2 - 1.0) * x)) + &(al * &x2).scale(2.0);
            let den = &(al - &(x * &(&a2 + (2.0 * eps - 2.0)))) + &x.powi(3);
            Ok(-&num.div(&den)?)
        }
    }
}

/// Jet in `z` of the printed `H1` closed form `w1<case>`.
pub fn pv_closed_eval(case: PvCase, spec: SeedSpec, z: f64, order: usize) -> Result<Jet> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            op: "w1 closed form",
            value: z,
        });
    }
    let xz = Jet::variable(z, order).scale(0.5).sqrt()?;
    closed_domain(xz.value())?;
    let x = Jet::variable(xz.value(), order);
    let outer = w1_in_x(case, spec.epsilon, &x, &alpha_closed(spec, &x)?)?;
    Jet::compose(&outer, &xz)
}

/// The printed closed form `w1<case>` with its printed parameters.
pub fn pv_closed_w1(case: PvCase, spec: SeedSpec) -> PvSolution {
    PvSolution {
        w: JetFn::new(move |z, k| pv_closed_eval(case, spec, z, k)),
        params: case.h1_params(spec.epsilon),
        provenance: format!("w1{case} {spec} closed form"),
    }
}

/// The three rational `H2` examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RationalPv {
    /// `-4(z+1)/(z^2 - 2z - 1)`, even seed, `eps1 = -5/2`, case (a).
    W2a,
    /// `(z^3 + 13z^2 + 65z + 105)/(2z^2 + 20z + 30)`, odd, `eps1 = -7/2`, case (d).
    W2d,
    /// `-(z^2 + 2z + 3)/(4(z + 3))`, odd, `eps1 = -3/2`, case (f).
    W2f,
}

impl RationalPv {
    pub const ALL: [RationalPv; 3] = [RationalPv::W2a, RationalPv::W2d, RationalPv::W2f];

    pub fn params(self) -> PvParams {
        match self {
            RationalPv::W2a => PvParams::new(0.125, -2.0, 1.25),
            RationalPv::W2d => PvParams::new(0.5, -49.0 / 8.0, 0.25),
            RationalPv::W2f => PvParams::new(2.0, -0.125, -1.75),
        }
    }

    /// Seed and identification that reproduce it through `H2`.
    pub fn origin(self) -> (SeedSpec, PvCase) {
        match self {
            RationalPv::W2a => (SeedSpec::even(-2.5), PvCase::A),
            RationalPv::W2d => (SeedSpec::odd(-3.5), PvCase::D),
            RationalPv::W2f => (SeedSpec::odd(-1.5), PvCase::F),
        }
    }

    pub fn eval(self, z: f64, order: usize) -> Result<Jet> {
        let zj = Jet::variable(z, order);
        let z2 = &zj * &zj;
        match self {
            RationalPv::W2a => {
                let num = (&zj + 1.0).scale(-4.0);
                num.div(&(&(&z2 - &zj.scale(2.0)) - 1.0))
            }
            RationalPv::W2d => {
                let num = &(&(&(&z2 * &zj) + &z2.scale(13.0)) + &zj.scale(65.0)) + 105.0;
                let den = &(&z2.scale(2.0) + &zj.scale(20.0)) + 30.0;
                num.div(&den)
            }
            RationalPv::W2f => {
                let num = &(&z2 + &zj.scale(2.0)) + 3.0;
                Ok(-&num.div(&(&zj + 3.0).scale(4.0))?)
            }
        }
    }

    pub fn solution(self) -> PvSolution {
        PvSolution {
            w: JetFn::new(move |z, k| self.eval(z, k)),
            params: self.params(),
            provenance: format!("{self:?} rational"),
        }
    }
}

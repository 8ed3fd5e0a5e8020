use std::fmt;

use susy_painleve::jets::Jet;
use susy_painleve::oscillator::{Parity, SeedSpec};
use susy_painleve::painleve::*;
use susy_painleve::residual::{
    infer_piv_params, infer_pv_params, verify_on_grid_at_order, SolutionRef, VerificationReport, VALUE_GUARD,
};
use susy_painleve::Result;

use crate::config::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selector {
    Piv {
        family: PivFamily,
        extremal: bool,
    },
    Pv {
        partner: Partner,
        case: PvCase,
        extremal: bool,
    },
    Rational(RationalPv),
}

impl Selector {
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let (extremal, name) = match s.strip_prefix("ext:") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        if let Ok(family) = name.parse::<PivFamily>() {
            return Ok(Selector::Piv { family, extremal });
        }
        let bad = || format!("unknown family {s:?}; expected g1..g3, G1..G3, w1a..w1f, w2a, w2d, w2f or ext:<name>");
        let rest = name.strip_prefix('w').ok_or_else(bad)?;
        let (digit, letter) = rest.split_at_checked(1).ok_or_else(bad)?;
        let partner = match digit {
            "1" => Partner::H1,
            "2" => Partner::H2,
            _ => return Err(bad()),
        };
        let case: PvCase = letter.parse().map_err(|_| bad())?;
        if partner == Partner::H2 && !extremal {
            return match case {
                PvCase::A => Ok(Selector::Rational(RationalPv::W2a)),
                PvCase::D => Ok(Selector::Rational(RationalPv::W2d)),
                PvCase::F => Ok(Selector::Rational(RationalPv::W2f)),
                _ => Err(format!("w2{case} has no closed form; use ext:w2{case}")),
            };
        }
        Ok(Selector::Pv {
            partner,
            case,
            extremal,
        })
    }

    pub fn partner(&self) -> Partner {
        match self {
            Selector::Piv { family, .. } => family.partner(),
            Selector::Pv { partner, .. } => *partner,
            Selector::Rational(_) => Partner::H2,
        }
    }

    pub fn is_piv(&self) -> bool {
        matches!(self, Selector::Piv { .. })
    }

    pub fn default_grid(&self) -> GridSpec {
        if self.is_piv() {
            GridSpec::X_DEFAULT
        } else {
            GridSpec::Z_DEFAULT
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Piv { family, extremal } => {
                write!(f, "{}{family}", if *extremal { "ext:" } else { "" })
            }
            Selector::Pv {
                partner,
                case,
                extremal,
            } => {
                let n = if *partner == Partner::H1 { 1 } else { 2 };
                write!(f, "{}w{n}{case}", if *extremal { "ext:" } else { "" })
            }
            Selector::Rational(r) => {
                let (_, case) = r.origin();
                write!(f, "w2{case}")
            }
        }
    }
}

/// Seed for `sel` from the command-line energies. Fails when a required
/// energy is missing and for rationals given an energy other than their own.
pub fn resolve_seed(
    sel: Selector,
    epsilon: Option<f64>,
    epsilon1: Option<f64>,
    parity: Option<Parity>,
) -> std::result::Result<SeedSpec, String> {
    if let Selector::Rational(r) = sel {
        let (spec, _) = r.origin();
        let given = epsilon1.or(epsilon);
        if given.is_some_and(|e| e != spec.epsilon) || parity.is_some_and(|p| p != spec.parity) {
            return Err(format!("{sel} is fixed at {spec}"));
        }
        return Ok(spec);
    }
    let parity = parity.unwrap_or(Parity::Odd);
    let eps = match sel.partner() {
        Partner::H1 => epsilon.ok_or_else(|| format!("{sel} needs --epsilon"))?,
        Partner::H2 => epsilon1.or(epsilon).ok_or_else(|| format!("{sel} needs --epsilon1"))?,
    };
    Ok(SeedSpec::new(eps, parity))
}

#[derive(Debug, Clone)]
pub enum Solution {
    Piv(PivSolution),
    Pv(PvSolution),
}

pub fn build(sel: Selector, spec: SeedSpec, grid: &[f64]) -> Result<Solution> {
    Ok(match sel {
        Selector::Piv {
            family,
            extremal: false,
        } => Solution::Piv(piv_closed(family, spec)?),
        Selector::Piv { family, extremal: true } => Solution::Piv(piv_extremal(family, spec, grid)?),
        Selector::Pv {
            case, extremal: false, ..
        } => Solution::Pv(pv_closed_w1(case, spec)),
        Selector::Pv {
            partner,
            case,
            extremal: true,
        } => {
            let states = pv_states(partner, spec)?;
            Solution::Pv(pv_from_pair(partner, &states, case, grid)?)
        }
        Selector::Rational(r) => Solution::Pv(r.solution()),
    })
}

impl Solution {
    pub fn eval(&self, t: f64, order: usize) -> Result<Jet> {
        match self {
            Solution::Piv(s) => s.g.eval(t, order),
            Solution::Pv(s) => s.w.eval(t, order),
        }
    }

    /// Unevaluable or within the value guard of a singular value of the
    /// equation (`g = 0`; `w = 0, 1`).
    pub fn pole_flag(&self, t: f64, order: usize) -> (Option<Jet>, bool) {
        match self.eval(t, order) {
            Ok(j) if j.is_finite() => {
                let v = j.value();
                let flagged = match self {
                    Solution::Piv(_) => v.abs() < VALUE_GUARD,
                    Solution::Pv(_) => v.abs() < VALUE_GUARD || (v - 1.0).abs() < VALUE_GUARD,
                };
                (Some(j), flagged)
            }
            _ => (None, true),
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self {
            Solution::Piv(s) => vec![("a", s.params.a), ("b", s.params.b)],
            Solution::Pv(s) => vec![
                ("a", s.params.a),
                ("b", s.params.b),
                ("c", s.params.c),
                ("d", s.params.d),
            ],
        }
    }

    pub fn provenance(&self) -> &str {
        match self {
            Solution::Piv(s) => &s.provenance,
            Solution::Pv(s) => &s.provenance,
        }
    }

    pub fn variable(&self) -> &'static str {
        match self {
            Solution::Piv(_) => "x",
            Solution::Pv(_) => "z",
        }
    }

    pub fn corrupt_b(&mut self, by: f64) {
        match self {
            Solution::Piv(s) => s.params.b += by,
            Solution::Pv(s) => s.params.b += by,
        }
    }

    pub fn verify(&self, grid: &[f64], tol: f64, order: usize) -> Result<VerificationReport> {
        let r = match self {
            Solution::Piv(s) => SolutionRef::Piv(s),
            Solution::Pv(s) => SolutionRef::Pv(s),
        };
        verify_on_grid_at_order(r, grid, tol, order)
    }

    /// Inferred parameters in the same order as [`Solution::params`], plus
    /// condition number, fit residual and sample count.
    pub fn infer(&self, grid: &[f64]) -> Result<(Vec<(&'static str, f64)>, f64, f64, usize)> {
        match self {
            Solution::Piv(s) => {
                let i = infer_piv_params(&s.g, grid)?;
                Ok((
                    vec![("a", i.params.a), ("b", i.params.b)],
                    i.condition,
                    i.fit_residual,
                    i.samples,
                ))
            }
            Solution::Pv(s) => {
                let i = infer_pv_params(&s.w, grid)?;
                let p = i.params;
                Ok((
                    vec![("a", p.a), ("b", p.b), ("c", p.c), ("d", p.d)],
                    i.condition,
                    i.fit_residual,
                    i.samples,
                ))
            }
        }
    }
}

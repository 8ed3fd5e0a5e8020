//! Kummer's confluent hypergeometric function `1F1(p; q; y)`.
//!
//! Evaluated by the plain Maclaurin series with Neumaier-compensated
//! summation. There is no asymptotic branch: the working range is
//! `|y| <= 36` (`x <= 6` with `y = x^2`), where the series is adequate. Near
//! the top of that range roughly two digits are lost for non-terminating
//! parameters with cancelling terms.

use crate::error::{Error, Result};
use crate::jets::Jet;

/// Largest `|y|` accepted by [`kummer`].
pub const Y_MAX: f64 = 36.0;

/// Series terms allowed before giving up.
pub const MAX_TERMS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerParams {
    p: f64,
    q: f64,
}

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.round()
}

impl KummerParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !q.is_finite() || is_nonpositive_integer(q) {
            return Err(Error::InadmissibleLowerParameter(q));
        }
        if !p.is_finite() {
            return Err(Error::InvalidArgument(format!("upper parameter {p}")));
        }
        Ok(KummerParams { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// True when the series is a polynomial (p a nonpositive integer).
    pub fn terminates(&self) -> bool {
        is_nonpositive_integer(self.p)
    }

    fn shifted(&self, k: usize) -> Self {
        KummerParams {
            p: self.p + k as f64,
            q: self.q + k as f64,
        }
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `1F1(p; q; y)`.
pub fn kummer(params: KummerParams, y: f64) -> Result<f64> {
    let KummerParams { p, q } = params;
    if !y.is_finite() || y.abs() > Y_MAX {
        return Err(Error::Domain { op: "kummer", value: y });
    }
    let mut acc = CompensatedSum::default();
    let mut term = 1.0_f64;
    let mut max_term = 1.0_f64;
    for n in 0..MAX_TERMS {
        acc.add(term);
        let nf = n as f64;
        term *= (p + nf) / (q + nf) * y / (nf + 1.0);
        if term == 0.0 {
            return Ok(acc.total());
        }
        max_term = max_term.max(term.abs());
        // Only stop once the terms are shrinking.
        let ratio = ((p + nf + 1.0) / (q + nf + 1.0) * y / (nf + 2.0)).abs();
        if ratio < 1.0 {
            let total = acc.total().abs();
            if term.abs() <= 1e-17 * total || term.abs() <= 1e-30 * max_term {
                acc.add(term);
                return Ok(acc.total());
            }
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

/// `(a)_k`, the rising factorial.
fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Derivatives `d^k/dy^k 1F1(p; q; y)` for `k = 0..=order`, each obtained from
/// the contiguous function `(p)_k/(q)_k 1F1(p+k; q+k; y)`.
pub fn kummer_y_derivatives(params: KummerParams, y: f64, order: usize) -> Result<Vec<f64>> {
    (0..=order)
        .map(|k| {
            let coeff = pochhammer(params.p, k) / pochhammer(params.q, k);
            if coeff == 0.0 {
                Ok(0.0)
            } else {
                Ok(coeff * kummer(params.shifted(k), y)?)
            }
        })
        .collect()
}

/// Jet of `x -> 1F1(p; q; x^2)` given the jet of `x`.
pub fn kummer_jet(params: KummerParams, xjet: &Jet) -> Result<Jet> {
    if !xjet.is_finite() {
        return Err(Error::InvalidArgument("non-finite jet".into()));
    }
    let y = xjet * xjet;
    let outer = Jet::from_derivatives(kummer_y_derivatives(params, y.value(), y.order())?)?;
    Jet::compose(&outer, &y)
}

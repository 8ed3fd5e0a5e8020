//! PIV and PV residuals evaluated with jets, grid verification reports and
//! linear least-squares inference of the equation parameters.
//!
//! Relative residuals divide by the largest of the six additive terms of the
//! equation at that point.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jets::{Jet, JetFn};
use crate::painleve::{PivParams, PivSolution, PvParams, PvSolution, PV_D};

/// Points where `|g|`, `|w|` or `|w - 1|` falls below this are skipped.
pub const VALUE_GUARD: f64 = 1e-4;

/// Minimum unguarded points for a verification report.
pub const MIN_VALID_POINTS: usize = 20;

/// Minimum samples for parameter inference.
pub const MIN_INFERENCE_SAMPLES: usize = 8;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Above this condition number the inference system counts as singular.
pub const MAX_CONDITION: f64 = 1e12;

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// 40 points on `[0.2, 4]`.
pub fn default_piv_grid() -> Vec<f64> {
    linspace(0.2, 4.0, 40)
}

/// 40 points on `[0.1, 8]`.
pub fn default_pv_grid() -> Vec<f64> {
    linspace(0.1, 8.0, 40)
}

/// Signed terms `g'', -g'^2/(2g), -3g^3/2, -4xg^2, -2(x^2-a)g, -b/g`; the
/// residual is their sum.
pub fn piv_terms(g: &Jet, x: f64, p: PivParams) -> [f64; 6] {
    let (g0, g1, g2) = (g.value(), g.deriv(1), g.deriv(2));
    [
        g2,
        -g1 * g1 / (2.0 * g0),
        -1.5 * g0.powi(3),
        -4.0 * x * g0 * g0,
        -2.0 * (x * x - p.a) * g0,
        -p.b / g0,
    ]
}

/// Signed terms `w''`, `-(1/(2w) + 1/(w-1)) w'^2`, `w'/z`,
/// `-(w-1)^2 (a w + b/w)/z^2`, `-c w/z`, `-d w(w+1)/(w-1)`.
pub fn pv_terms(w: &Jet, z: f64, p: PvParams) -> [f64; 6] {
    let (w0, w1, w2) = (w.value(), w.deriv(1), w.deriv(2));
    [
        w2,
        -(1.0 / (2.0 * w0) + 1.0 / (w0 - 1.0)) * w1 * w1,
        w1 / z,
        -(w0 - 1.0).powi(2) * (p.a * w0 + p.b / w0) / (z * z),
        -p.c * w0 / z,
        -p.d * w0 * (w0 + 1.0) / (w0 - 1.0),
    ]
}

fn sum_and_scale(terms: &[f64]) -> (f64, f64) {
    let r: f64 = terms.iter().sum();
    let s = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    (r, s)
}

fn guard_piv(g: &Jet) -> Result<()> {
    let v = g.value();
    if !(v.abs() >= VALUE_GUARD) {
        return Err(Error::Pole {
            value: v,
            guard: VALUE_GUARD,
        });
    }
    Ok(())
}

fn guard_pv(w: &Jet, z: f64) -> Result<()> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            op: "pv_residual",
            value: z,
        });
    }
    let v = w.value();
    for d in [v, v - 1.0] {
        if !(d.abs() >= VALUE_GUARD) {
            return Err(Error::Pole {
                value: d,
                guard: VALUE_GUARD,
            });
        }
    }
    Ok(())
}

/// Signed residual and term scale of `g` at `x` with jets of order `order`.
pub fn piv_residual_at_order(g: &JetFn, p: PivParams, x: f64, order: usize) -> Result<(f64, f64)> {
    let j = g.eval(x, order.max(2))?;
    guard_piv(&j)?;
    Ok(sum_and_scale(&piv_terms(&j, x, p)))
}

pub fn pv_residual_at_order(w: &JetFn, p: PvParams, z: f64, order: usize) -> Result<(f64, f64)> {
    let j = w.eval(z, order.max(2))?;
    guard_pv(&j, z)?;
    Ok(sum_and_scale(&pv_terms(&j, z, p)))
}

/// `g'' - g'^2/(2g) - 3g^3/2 - 4xg^2 - 2(x^2 - a)g - b/g`.
pub fn piv_residual(s: &PivSolution, x: f64) -> Result<f64> {
    Ok(piv_residual_at_order(&s.g, s.params, x, 2)?.0)
}

pub fn piv_relative_residual(s: &PivSolution, x: f64) -> Result<f64> {
    let (r, sc) = piv_residual_at_order(&s.g, s.params, x, 2)?;
    Ok(relative(r, sc))
}

pub fn pv_residual(s: &PvSolution, z: f64) -> Result<f64> {
    Ok(pv_residual_at_order(&s.w, s.params, z, 2)?.0)
}

pub fn pv_relative_residual(s: &PvSolution, z: f64) -> Result<f64> {
    let (r, sc) = pv_residual_at_order(&s.w, s.params, z, 2)?;
    Ok(relative(r, sc))
}

fn relative(r: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        r.abs()
    } else {
        r.abs() / scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub grid: Vec<f64>,
    /// Relative residual per grid point, NaN where the point was skipped.
    pub residuals: Vec<f64>,
    pub skipped: usize,
    pub max_rel_residual: f64,
    pub pass: bool,
    pub tolerance: f64,
}

impl VerificationReport {
    pub fn valid(&self) -> usize {
        self.grid.len() - self.skipped
    }
}

#[derive(Debug, Clone, Copy)]
pub enum SolutionRef<'a> {
    Piv(&'a PivSolution),
    Pv(&'a PvSolution),
}

fn report(grid: &[f64], tol: f64, f: impl Fn(f64) -> Result<f64>) -> Result<VerificationReport> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    let residuals: Vec<f64> = grid.iter().map(|&t| f(t).unwrap_or(f64::NAN)).collect();
    let skipped = residuals.iter().filter(|r| !r.is_finite()).count();
    let valid = grid.len() - skipped;
    if valid < MIN_VALID_POINTS {
        return Err(Error::TooFewPoints {
            valid,
            required: MIN_VALID_POINTS,
        });
    }
    let max_rel_residual = residuals
        .iter()
        .filter(|r| r.is_finite())
        .fold(0.0_f64, |m, &r| m.max(r));
    Ok(VerificationReport {
        grid: grid.to_vec(),
        residuals,
        skipped,
        max_rel_residual,
        pass: max_rel_residual <= tol,
        tolerance: tol,
    })
}

/// Fails with `Degenerate` when the solution is trivial on `grid` (see
/// [`trivial_solution`]) and `TooFewPoints` when guards leave too few points.
pub fn verify_on_grid(sol: SolutionRef<'_>, grid: &[f64], tol: f64) -> Result<VerificationReport> {
    verify_on_grid_at_order(sol, grid, tol, 2)
}

/// As [`verify_on_grid`] with jets of order `order` (at least 2).
pub fn verify_on_grid_at_order(
    sol: SolutionRef<'_>,
    grid: &[f64],
    tol: f64,
    order: usize,
) -> Result<VerificationReport> {
    let rel = |(r, sc): (f64, f64)| relative(r, sc);
    let r = match sol {
        SolutionRef::Piv(s) => report(grid, tol, |x| piv_residual_at_order(&s.g, s.params, x, order).map(rel)),
        SolutionRef::Pv(s) => report(grid, tol, |z| pv_residual_at_order(&s.w, s.params, z, order).map(rel)),
    };
    match r {
        Err(Error::TooFewPoints { .. }) => match trivial_solution(sol, grid) {
            Some(why) => Err(Error::Degenerate(why)),
            None => r,
        },
        _ => r,
    }
}

/// `Some(reason)` when every grid point that evaluates sits on a guarded
/// value: `g = 0` for PIV, `w = 0` or `w = 1` for PV (the constant
/// solutions the guards exclude), or when nothing evaluates at all.
pub fn trivial_solution(sol: SolutionRef<'_>, grid: &[f64]) -> Option<String> {
    let (f, name) = match sol {
        SolutionRef::Piv(s) => (&s.g, "g"),
        SolutionRef::Pv(s) => (&s.w, "w"),
    };
    let values: Vec<f64> = grid.iter().filter_map(|&t| f.value(t).ok()).collect();
    if values.is_empty() {
        return Some(format!("{name} evaluates at no grid point"));
    }
    let targets: &[f64] = match sol {
        SolutionRef::Piv(_) => &[0.0],
        SolutionRef::Pv(_) => &[0.0, 1.0],
    };
    targets
        .iter()
        .find(|&&c| values.iter().all(|v| (v - c).abs() < VALUE_GUARD))
        .map(|c| format!("{name} = {c} identically on the grid"))
}

pub fn verify_piv(s: &PivSolution, grid: &[f64], tol: f64) -> Result<VerificationReport> {
    verify_on_grid(SolutionRef::Piv(s), grid, tol)
}

pub fn verify_pv(s: &PvSolution, grid: &[f64], tol: f64) -> Result<VerificationReport> {
    verify_on_grid(SolutionRef::Pv(s), grid, tol)
}

/// Largest relative disagreement between residuals computed from jets of
/// order `order` and `order + 1` over `grid` (guarded points ignored).
pub fn piv_order_consistency(s: &PivSolution, grid: &[f64], order: usize) -> f64 {
    order_consistency(grid, |x, k| piv_residual_at_order(&s.g, s.params, x, k), order)
}

pub fn pv_order_consistency(s: &PvSolution, grid: &[f64], order: usize) -> f64 {
    order_consistency(grid, |z, k| pv_residual_at_order(&s.w, s.params, z, k), order)
}

fn order_consistency(grid: &[f64], f: impl Fn(f64, usize) -> Result<(f64, f64)>, k: usize) -> f64 {
    grid.iter()
        .filter_map(|&t| {
            let (r1, s1) = f(t, k).ok()?;
            let (r2, _) = f(t, k + 1).ok()?;
            Some(relative(r1 - r2, s1))
        })
        .fold(0.0, f64::max)
}

/// Least-squares fit of the parameters the residual is linear in.
#[derive(Debug, Clone, PartialEq)]
pub struct Inference<P> {
    pub params: P,
    /// Condition number of the column-equilibrated design matrix.
    pub condition: f64,
    /// Largest relative residual left after the fit.
    pub fit_residual: f64,
    pub samples: usize,
}

/// Rows whose fit residual exceeds this multiple of the median are refitted
/// without; they come from cancellation next to poles.
const OUTLIER_FACTOR: f64 = 20.0;

/// Least squares with repeated trimming of outlying rows. Returns the fit,
/// condition, largest kept misfit and the number of rows kept.
fn robust_least_squares(rows: &[(Vec<f64>, f64)]) -> Result<(Vec<f64>, f64, f64, usize)> {
    let mut kept: Vec<(Vec<f64>, f64)> = rows.to_vec();
    let (mut theta, mut condition, mut fit) = least_squares(&kept)?;
    for _ in 0..5 {
        let misfit = |r: &(Vec<f64>, f64)| (r.0.iter().zip(&theta).map(|(c, t)| c * t).sum::<f64>() - r.1).abs();
        let mut errs: Vec<f64> = kept.iter().map(misfit).collect();
        errs.sort_by(f64::total_cmp);
        let cut = (errs[errs.len() / 2] * OUTLIER_FACTOR).max(1e-12);
        let next: Vec<_> = kept.iter().filter(|r| misfit(r) <= cut).cloned().collect();
        if next.len() == kept.len() || next.len() < MIN_INFERENCE_SAMPLES {
            break;
        }
        kept = next;
        (theta, condition, fit) = least_squares(&kept)?;
    }
    Ok((theta, condition, fit, kept.len()))
}

/// Rows are `coeffs . theta = rhs`, each already divided by its term scale.
fn least_squares(rows: &[(Vec<f64>, f64)]) -> Result<(Vec<f64>, f64, f64)> {
    let n = rows[0].0.len();
    let mut a = DMatrix::from_fn(rows.len(), n, |i, j| rows[i].0[j]);
    let rhs = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    if norms.iter().any(|&v| v == 0.0) {
        return Err(Error::SingularSystem {
            condition: f64::INFINITY,
        });
    }
    for (j, &nj) in norms.iter().enumerate() {
        a.column_mut(j).scale_mut(1.0 / nj);
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularSystem { condition });
    }
    let y = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::InvalidArgument(format!("SVD solve: {e}")))?;
    let fit = (&a * &y - &rhs).amax();
    let theta = (0..n).map(|j| y[j] / norms[j]).collect();
    Ok((theta, condition, fit))
}

fn collect_rows(samples: &[f64], row: impl Fn(f64) -> Result<(Vec<f64>, f64)>) -> Result<Vec<(Vec<f64>, f64)>> {
    let rows: Vec<_> = samples.iter().filter_map(|&t| row(t).ok()).collect();
    if rows.len() < MIN_INFERENCE_SAMPLES {
        return Err(Error::TooFewPoints {
            valid: rows.len(),
            required: MIN_INFERENCE_SAMPLES,
        });
    }
    Ok(rows)
}

/// Infers `(a, b)` from the residual's linearity: coefficient `2g` for `a`,
/// `-1/g` for `b`.
pub fn infer_piv_params(g: &JetFn, samples: &[f64]) -> Result<Inference<PivParams>> {
    let zero = PivParams { a: 0.0, b: 0.0 };
    let rows = collect_rows(samples, |x| {
        let j = g.eval(x, 2)?;
        guard_piv(&j)?;
        let terms = piv_terms(&j, x, zero);
        let g0 = j.value();
        let base: f64 = terms.iter().sum();
        let scale = terms
            .iter()
            .chain([2.0 * g0, 1.0 / g0].iter())
            .fold(0.0_f64, |m, t| m.max(t.abs()));
        Ok((vec![2.0 * g0 / scale, -1.0 / g0 / scale], -base / scale))
    })?;
    let (t, condition, fit_residual, samples) = robust_least_squares(&rows)?;
    Ok(Inference {
        params: PivParams { a: t[0], b: t[1] },
        condition,
        fit_residual,
        samples,
    })
}

/// Infers `(a, b, c)` with `d = -1/8` fixed.
pub fn infer_pv_params(w: &JetFn, samples: &[f64]) -> Result<Inference<PvParams>> {
    let zero = PvParams::new(0.0, 0.0, 0.0);
    let rows = collect_rows(samples, |z| {
        let j = w.eval(z, 2)?;
        guard_pv(&j, z)?;
        let terms = pv_terms(&j, z, zero);
        let w0 = j.value();
        let base: f64 = terms.iter().sum();
        let q = (w0 - 1.0).powi(2) / (z * z);
        let coeffs = [-q * w0, -q / w0, -w0 / z];
        let scale = terms.iter().chain(coeffs.iter()).fold(0.0_f64, |m, t| m.max(t.abs()));
        Ok((coeffs.iter().map(|c| c / scale).collect(), -base / scale))
    })?;
    let (t, condition, fit_residual, samples) = robust_least_squares(&rows)?;
    Ok(Inference {
        params: PvParams {
            a: t[0],
            b: t[1],
            c: t[2],
            d: PV_D,
        },
        condition,
        fit_residual,
        samples,
    })
}

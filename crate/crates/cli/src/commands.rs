use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use susy_painleve::backlund::*;
use susy_painleve::jets::DEFAULT_ORDER;
use susy_painleve::oscillator::{Parity, SeedSpec};
use susy_painleve::painleve::PV_D;
use susy_painleve::residual::{VerificationReport, DEFAULT_TOLERANCE, MIN_VALID_POINTS, VALUE_GUARD};
use susy_painleve::Error;

use crate::config::*;
use crate::output::*;
use crate::select::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Degenerate = 3,
}

#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Numeric(String),
    Io(std::io::Error),
}

impl CmdError {
    pub fn exit(&self) -> Exit {
        match self {
            CmdError::Usage(_) => Exit::Usage,
            CmdError::Numeric(_) | CmdError::Io(_) => Exit::Degenerate,
        }
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Usage(m) => write!(f, "usage: {m}"),
            CmdError::Numeric(m) => write!(f, "numeric: {m}"),
            CmdError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

fn from_core(e: Error) -> CmdError {
    match e {
        Error::InvalidArgument(m) => CmdError::Usage(m),
        other => CmdError::Numeric(other.to_string()),
    }
}

fn write_out(text: &str, out: &Option<PathBuf>) -> Result<(), CmdError> {
    emit(text, out.as_deref()).map_err(CmdError::Io)
}

struct Prepared {
    cfg: RunConfig,
    sel: Selector,
    spec: SeedSpec,
    grid: Vec<f64>,
}

fn prepare(
    a: &SolutionArgs,
    command: &'static str,
    corrupt_b: bool,
    default_format: Format,
) -> Result<Prepared, CmdError> {
    let name = a
        .selector
        .clone()
        .or_else(|| a.family.clone())
        .ok_or_else(|| CmdError::Usage("missing family selector".into()))?;
    let sel = Selector::parse(&name).map_err(CmdError::Usage)?;
    let spec = resolve_seed(sel, a.epsilon, a.epsilon1, a.parity).map_err(CmdError::Usage)?;
    let grid = a.grid.unwrap_or_else(|| sel.default_grid());
    let cfg = RunConfig {
        command,
        family: Some(sel.to_string()),
        epsilon: a.epsilon,
        epsilon1: a.epsilon1,
        parity: a.parity,
        grid: Some(grid),
        tolerance: a.tol,
        jet_order: a.jet_order,
        format: a.output.format.unwrap_or(default_format),
        corrupt_b,
    };
    cfg.validate().map_err(CmdError::Usage)?;
    Ok(Prepared {
        cfg,
        sel,
        spec,
        grid: grid.points(),
    })
}

struct Point {
    var: &'static str,
    t: f64,
    value: f64,
    deriv1: f64,
    pole_flag: bool,
    residual: Option<f64>,
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry(self.var, &Num(self.t))?;
        m.serialize_entry("value", &Num(self.value))?;
        m.serialize_entry("deriv1", &Num(self.deriv1))?;
        m.serialize_entry("pole_flag", &self.pole_flag)?;
        if let Some(r) = self.residual {
            m.serialize_entry("residual", &Num(r))?;
        }
        m.end()
    }
}

#[derive(Serialize)]
struct ReportOut {
    max_rel_residual: Num,
    skipped: usize,
    valid: usize,
    tolerance: Num,
    pass: bool,
}

impl From<&VerificationReport> for ReportOut {
    fn from(r: &VerificationReport) -> Self {
        ReportOut {
            max_rel_residual: Num(r.max_rel_residual),
            skipped: r.skipped,
            valid: r.valid(),
            tolerance: Num(r.tolerance),
            pass: r.pass,
        }
    }
}

#[derive(Serialize)]
struct InferredOut {
    parameters: BTreeMap<&'static str, Num>,
    condition: Num,
    fit_residual: Num,
    samples: usize,
}

#[derive(Serialize)]
struct SolutionReport<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    provenance: &'a str,
    parameters: BTreeMap<&'static str, Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inferred: Option<InferredOut>,
    points: Vec<Point>,
    report: Option<ReportOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn param_map(p: &[(&'static str, f64)]) -> BTreeMap<&'static str, Num> {
    p.iter().map(|&(k, v)| (k, Num(v))).collect()
}

fn points(sol: &Solution, grid: &[f64], order: usize, report: Option<&VerificationReport>) -> Vec<Point> {
    grid.iter()
        .enumerate()
        .map(|(i, &t)| {
            let (jet, pole_flag) = sol.pole_flag(t, order);
            let (value, deriv1) = jet.map_or((f64::NAN, f64::NAN), |j| (j.value(), j.deriv(1)));
            Point {
                var: sol.variable(),
                t,
                value,
                deriv1,
                pole_flag,
                residual: report.map(|r| r.residuals[i]),
            }
        })
        .collect()
}

fn csv_points(sol: &Solution, family: &str, pts: &[Point], extra: &[String]) -> String {
    let params: Vec<String> = sol
        .params()
        .iter()
        .map(|(k, v)| format!("{k}={}", fmt_f64(*v)))
        .collect();
    let mut comments = vec![format!(
        "family={family} {} provenance={}",
        params.join(" "),
        sol.provenance()
    )];
    comments.extend(extra.iter().cloned());
    let rows: Vec<Vec<String>> = pts
        .iter()
        .map(|p| {
            vec![
                fmt_f64(p.t),
                fmt_f64(p.value),
                fmt_f64(p.deriv1),
                u8::from(p.pole_flag).to_string(),
            ]
        })
        .collect();
    csv_block(&comments, &[sol.variable(), "value", "deriv1", "pole_flag"], &rows)
}

pub fn cmd_sample(a: &SolutionArgs) -> Result<Exit, CmdError> {
    let p = prepare(a, "sample", false, Format::Csv)?;
    let sol = build(p.sel, p.spec, &p.grid).map_err(from_core)?;
    let verified = sol.verify(&p.grid, p.cfg.tolerance, p.cfg.jet_order);
    let pts = points(&sol, &p.grid, p.cfg.jet_order, None);
    let all_pole = pts.iter().all(|q| q.pole_flag);
    let text = match p.cfg.format {
        Format::Csv => csv_points(&sol, &p.sel.to_string(), &pts, &[]),
        Format::Json => to_json(&SolutionReport {
            schema_version: SCHEMA_VERSION,
            config: &p.cfg,
            provenance: sol.provenance(),
            parameters: param_map(&sol.params()),
            inferred: None,
            points: pts,
            report: verified.as_ref().ok().map(ReportOut::from),
            error: verified.as_ref().err().map(|e| e.to_string()),
        }),
    };
    write_out(&text, &a.output.out)?;
    if all_pole {
        eprintln!("every grid point is at a pole or guarded value");
        return Ok(Exit::Degenerate);
    }
    Ok(Exit::Pass)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Exit, CmdError> {
    let p = prepare(&a.solution, "verify", a.corrupt_b, Format::Json)?;
    let mut sol = build(p.sel, p.spec, &p.grid).map_err(from_core)?;
    if a.corrupt_b {
        sol.corrupt_b(1.0);
    }
    let verified = sol.verify(&p.grid, p.cfg.tolerance, p.cfg.jet_order);
    let inferred = sol
        .infer(&p.grid)
        .ok()
        .map(|(params, condition, fit, samples)| InferredOut {
            parameters: param_map(&params),
            condition: Num(condition),
            fit_residual: Num(fit),
            samples,
        });
    let exit = match &verified {
        Ok(r) if r.pass => Exit::Pass,
        Ok(_) => Exit::Fail,
        Err(_) => Exit::Degenerate,
    };
    let text = match p.cfg.format {
        Format::Json => to_json(&SolutionReport {
            schema_version: SCHEMA_VERSION,
            config: &p.cfg,
            provenance: sol.provenance(),
            parameters: param_map(&sol.params()),
            inferred,
            points: points(&sol, &p.grid, p.cfg.jet_order, verified.as_ref().ok()),
            report: verified.as_ref().ok().map(ReportOut::from),
            error: verified.as_ref().err().map(|e| e.to_string()),
        }),
        Format::Csv => {
            let mut extra = Vec::new();
            match &verified {
                Ok(r) => extra.push(format!(
                    "max_rel_residual={} skipped={} pass={}",
                    fmt_f64(r.max_rel_residual),
                    r.skipped,
                    r.pass
                )),
                Err(e) => extra.push(format!("error={e}")),
            }
            if let Some(i) = &inferred {
                let s: Vec<String> = i
                    .parameters
                    .iter()
                    .map(|(k, v)| format!("{k}={}", fmt_f64(v.0)))
                    .collect();
                extra.push(format!("inferred {}", s.join(" ")));
            }
            let pts = points(&sol, &p.grid, p.cfg.jet_order, None);
            csv_points(&sol, &p.sel.to_string(), &pts, &extra)
        }
    };
    write_out(&text, &a.solution.output.out)?;
    if let Err(e) = &verified {
        eprintln!("{e}");
    }
    Ok(exit)
}

#[derive(Serialize)]
struct PivParamsOut {
    a: Num,
    b: Num,
}

#[derive(Serialize)]
struct LinkOut {
    link: usize,
    source: String,
    target: String,
    maps: String,
    status: String,
    max_deviation: Num,
    valid_points: usize,
    predicted: Option<PivParamsOut>,
    inferred: Option<PivParamsOut>,
    discrepancy: bool,
    note: String,
}

#[derive(Serialize)]
struct ChainReport<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    seed: String,
    summary: String,
    links: Vec<LinkOut>,
}

fn link_out(i: usize, l: &ChainLink) -> LinkOut {
    let maps = match &l.chosen {
        Some(m) => m.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        None => l.nominal.iter().map(|k| k.to_string()).collect(),
    };
    let res = l.result.as_ref();
    LinkOut {
        link: i + 1,
        source: l.source.to_string(),
        target: l.target.to_string(),
        maps: maps.join(" then "),
        status: l.status.to_string(),
        max_deviation: Num(l.max_deviation),
        valid_points: l.valid_points,
        predicted: res.map(|r| PivParamsOut {
            a: Num(r.predicted.a),
            b: Num(r.predicted.b),
        }),
        inferred: res.and_then(|r| r.inferred.as_ref()).map(|i| PivParamsOut {
            a: Num(i.params.a),
            b: Num(i.params.b),
        }),
        discrepancy: res.is_some_and(|r| r.discrepancy),
        note: l.note.clone(),
    }
}

fn opt_num_str(n: &Option<PivParamsOut>, f: impl Fn(&PivParamsOut) -> f64) -> String {
    n.as_ref().map_or(String::new(), |p| fmt_f64(f(p)))
}

pub fn cmd_chain(a: &ChainArgs) -> Result<Exit, CmdError> {
    let parity = a.parity.unwrap_or(Parity::Odd);
    let grid = a.grid.unwrap_or(GridSpec::X_DEFAULT);
    let cfg = RunConfig {
        command: "chain",
        family: None,
        epsilon: Some(a.epsilon),
        epsilon1: None,
        parity: Some(parity),
        grid: Some(grid),
        tolerance: CHAIN_TOLERANCE,
        jet_order: DEFAULT_ORDER,
        format: a.output.format.unwrap_or(Format::Csv),
        corrupt_b: false,
    };
    cfg.validate().map_err(CmdError::Usage)?;
    let spec = SeedSpec::new(a.epsilon, parity);
    let links = bt_piv_chain_on(spec, &grid.points());
    let count = |s: LinkStatus| links.iter().filter(|l| l.status == s).count();
    let (pass, mismatch, degenerate) = (
        count(LinkStatus::Pass),
        count(LinkStatus::Mismatch),
        count(LinkStatus::Degenerate),
    );
    let summary = format!(
        "{pass}/{} links pass, {mismatch} mismatch, {degenerate} degenerate",
        links.len()
    );
    let outs: Vec<LinkOut> = links.iter().enumerate().map(|(i, l)| link_out(i, l)).collect();
    let text = match cfg.format {
        Format::Json => to_json(&ChainReport {
            schema_version: SCHEMA_VERSION,
            config: &cfg,
            seed: spec.to_string(),
            summary: summary.clone(),
            links: outs,
        }),
        Format::Csv => {
            let rows: Vec<Vec<String>> = outs
                .iter()
                .map(|o| {
                    vec![
                        o.link.to_string(),
                        o.source.clone(),
                        o.target.clone(),
                        o.maps.clone(),
                        o.status.clone(),
                        fmt_f64(o.max_deviation.0),
                        o.valid_points.to_string(),
                        opt_num_str(&o.predicted, |p| p.a.0),
                        opt_num_str(&o.predicted, |p| p.b.0),
                        opt_num_str(&o.inferred, |p| p.a.0),
                        opt_num_str(&o.inferred, |p| p.b.0),
                        o.discrepancy.to_string(),
                        o.note.clone(),
                    ]
                })
                .collect();
            csv_block(
                &[format!("chain seed={spec} grid={grid}"), format!("summary: {summary}")],
                &[
                    "link",
                    "source",
                    "target",
                    "maps",
                    "status",
                    "max_deviation",
                    "valid_points",
                    "predicted_a",
                    "predicted_b",
                    "inferred_a",
                    "inferred_b",
                    "discrepancy",
                    "note",
                ],
                &rows,
            )
        }
    };
    write_out(&text, &a.output.out)?;
    eprintln!("{summary}");
    Ok(if mismatch > 0 { Exit::Fail } else { Exit::Pass })
}

#[derive(Serialize)]
struct CatalogRowOut {
    source: String,
    target: String,
    k: [i8; 3],
    window: &'static str,
    applicable: bool,
    boundary: bool,
    parity: Option<String>,
    status: &'static str,
    max_deviation: Option<Num>,
    valid_points: Option<usize>,
    predicted: Option<[Num; 3]>,
    inferred: Option<[Num; 3]>,
    note: String,
}

#[derive(Serialize)]
struct CatalogReport<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    summary: String,
    rows: Vec<CatalogRowOut>,
}

fn catalog_check(entry: &CatalogEntry, spec: SeedSpec, grid: &[f64]) -> CatalogRowOut {
    let row = &entry.row;
    let mut out = CatalogRowOut {
        source: row.source.to_string(),
        target: row.target.to_string(),
        k: [row.map.k1, row.map.k2, row.map.k3],
        window: row.window.text,
        applicable: entry.applicable,
        boundary: entry.boundary,
        parity: Some(spec.parity.to_string()),
        status: "fail",
        max_deviation: None,
        valid_points: None,
        predicted: None,
        inferred: None,
        note: String::new(),
    };
    match verify_catalog_row(row, spec, grid) {
        Ok(rc) => {
            let pv = |p: susy_painleve::painleve::PvParams| [Num(p.a), Num(p.b), Num(p.c)];
            out.status = if rc.pass { "pass" } else { "fail" };
            out.max_deviation = Some(Num(rc.max_deviation));
            out.valid_points = Some(rc.valid_points);
            out.predicted = Some(pv(rc.result.predicted));
            out.inferred = rc.result.inferred.as_ref().map(|i| pv(i.params));
            if !rc.params_match {
                out.note = "predicted parameters differ from the target's".into();
            }
        }
        Err(e @ (Error::Degenerate(_) | Error::TooFewPoints { .. } | Error::NodeInGrid(_))) => {
            out.status = "degenerate";
            out.note = e.to_string();
        }
        Err(e) => out.note = e.to_string(),
    }
    out
}

pub fn cmd_catalog(a: &CatalogArgs) -> Result<Exit, CmdError> {
    let grid = a.grid.unwrap_or(GridSpec::Z_DEFAULT);
    let cfg = RunConfig {
        command: "catalog",
        family: None,
        epsilon: Some(a.epsilon),
        epsilon1: None,
        parity: a.parity,
        grid: Some(grid),
        tolerance: CATALOG_TOLERANCE,
        jet_order: DEFAULT_ORDER,
        format: a.output.format.unwrap_or(Format::Csv),
        corrupt_b: false,
    };
    cfg.validate().map_err(CmdError::Usage)?;
    let parities = match a.parity {
        Some(p) => vec![p],
        None => vec![Parity::Odd, Parity::Even],
    };
    let pts = grid.points();
    let mut rows = Vec::new();
    for entry in bt_pv_catalog(a.epsilon) {
        if !entry.applicable {
            if a.all_rows {
                let r = &entry.row;
                rows.push(CatalogRowOut {
                    source: r.source.to_string(),
                    target: r.target.to_string(),
                    k: [r.map.k1, r.map.k2, r.map.k3],
                    window: r.window.text,
                    applicable: false,
                    boundary: false,
                    parity: None,
                    status: "n/a",
                    max_deviation: None,
                    valid_points: None,
                    predicted: None,
                    inferred: None,
                    note: String::new(),
                });
            }
            continue;
        }
        for &par in &parities {
            let spec = SeedSpec::new(a.epsilon, par);
            let mut out = catalog_check(&entry, spec, &pts);
            if a.windows_only {
                out = CatalogRowOut {
                    status: "applicable",
                    max_deviation: None,
                    valid_points: None,
                    predicted: None,
                    inferred: None,
                    note: String::new(),
                    ..out
                };
            }
            rows.push(out);
            if a.windows_only {
                break;
            }
        }
    }
    if a.windows_only {
        for r in rows.iter_mut() {
            r.parity = None;
        }
    }
    let tested: Vec<&CatalogRowOut> = rows.iter().filter(|r| r.applicable).collect();
    let n = |s: &str| tested.iter().filter(|r| r.status == s).count();
    let hard = tested.iter().filter(|r| r.status == "fail" && !r.boundary).count();
    let summary = if a.windows_only {
        format!("eps={}: {} applicable rows", a.epsilon, tested.len())
    } else {
        format!(
            "eps={}: {} applicable checks, {} pass, {} fail ({} on boundary rows), {} degenerate",
            a.epsilon,
            tested.len(),
            n("pass"),
            n("fail"),
            n("fail") - hard,
            n("degenerate")
        )
    };
    let text = match cfg.format {
        Format::Json => to_json(&CatalogReport {
            schema_version: SCHEMA_VERSION,
            config: &cfg,
            summary: summary.clone(),
            rows,
        }),
        Format::Csv => {
            let opt = |v: &Option<[Num; 3]>, i: usize| v.map_or(String::new(), |p| fmt_f64(p[i].0));
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.source.clone(),
                        r.target.clone(),
                        r.k[0].to_string(),
                        r.k[1].to_string(),
                        r.k[2].to_string(),
                        r.window.to_string(),
                        r.applicable.to_string(),
                        r.boundary.to_string(),
                        r.parity.clone().unwrap_or_default(),
                        r.status.to_string(),
                        r.max_deviation.map_or(String::new(), |d| fmt_f64(d.0)),
                        r.valid_points.map_or(String::new(), |v| v.to_string()),
                        opt(&r.predicted, 0),
                        opt(&r.predicted, 1),
                        opt(&r.predicted, 2),
                        opt(&r.inferred, 0),
                        opt(&r.inferred, 1),
                        opt(&r.inferred, 2),
                        r.note.clone(),
                    ]
                })
                .collect();
            csv_block(
                &[
                    format!("catalog eps={} grid={grid}", a.epsilon),
                    format!("summary: {summary}"),
                ],
                &[
                    "source",
                    "target",
                    "k1",
                    "k2",
                    "k3",
                    "window",
                    "applicable",
                    "boundary",
                    "parity",
                    "status",
                    "max_deviation",
                    "valid_points",
                    "predicted_a",
                    "predicted_b",
                    "predicted_c",
                    "inferred_a",
                    "inferred_b",
                    "inferred_c",
                    "note",
                ],
                &body,
            )
        }
    };
    write_out(&text, &a.output.out)?;
    eprintln!("{summary}");
    Ok(if hard > 0 { Exit::Fail } else { Exit::Pass })
}

#[derive(Serialize)]
struct Defaults {
    schema_version: u32,
    x_grid: GridSpec,
    z_grid: GridSpec,
    tolerance: Num,
    jet_order: usize,
    parity: &'static str,
    value_guard: Num,
    min_valid_points: usize,
    chain_tolerance: Num,
    catalog_tolerance: Num,
    bt_verify_tolerance: Num,
    param_tolerance: Num,
    pv_d: Num,
}

pub fn cmd_defaults(a: &OutputArgs) -> Result<Exit, CmdError> {
    let d = Defaults {
        schema_version: SCHEMA_VERSION,
        x_grid: GridSpec::X_DEFAULT,
        z_grid: GridSpec::Z_DEFAULT,
        tolerance: Num(DEFAULT_TOLERANCE),
        jet_order: DEFAULT_ORDER,
        parity: "odd",
        value_guard: Num(VALUE_GUARD),
        min_valid_points: MIN_VALID_POINTS,
        chain_tolerance: Num(CHAIN_TOLERANCE),
        catalog_tolerance: Num(CATALOG_TOLERANCE),
        bt_verify_tolerance: Num(BT_VERIFY_TOLERANCE),
        param_tolerance: Num(PARAM_TOLERANCE),
        pv_d: Num(PV_D),
    };
    let text = match a.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&d),
        Format::Csv => {
            let rows: Vec<Vec<String>> = [
                ("schema_version", d.schema_version.to_string()),
                ("x_grid", d.x_grid.to_string()),
                ("z_grid", d.z_grid.to_string()),
                ("tolerance", fmt_f64(d.tolerance.0)),
                ("jet_order", d.jet_order.to_string()),
                ("parity", d.parity.to_string()),
                ("value_guard", fmt_f64(d.value_guard.0)),
                ("min_valid_points", d.min_valid_points.to_string()),
                ("chain_tolerance", fmt_f64(d.chain_tolerance.0)),
                ("catalog_tolerance", fmt_f64(d.catalog_tolerance.0)),
                ("bt_verify_tolerance", fmt_f64(d.bt_verify_tolerance.0)),
                ("param_tolerance", fmt_f64(d.param_tolerance.0)),
                ("pv_d", fmt_f64(d.pv_d.0)),
            ]
            .into_iter()
            .map(|(k, v)| vec![k.to_string(), v])
            .collect();
            csv_block(&[], &["key", "value"], &rows)
        }
    };
    write_out(&text, &a.out)?;
    Ok(Exit::Pass)
}

//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always print, in order.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use susy_painleve::backlund::*;
use susy_painleve::jets::JetFn;
use susy_painleve::oscillator::{Parity, SeedSpec};
use susy_painleve::painleve::*;
use susy_painleve::residual::*;
use susy_painleve::susy::*;
use susy_painleve::Error;

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let mut o = f();
    let dt = t.elapsed();
    if let Some(l) = limit {
        if dt >= l {
            o.pass = false;
            o.detail = format!("{}; runtime {:.2?} over {:.0?}", o.detail, dt, l);
        }
    }
    (o, dt)
}

fn parities() -> [Parity; 2] {
    [Parity::Odd, Parity::Even]
}

fn fmt_params_pv(p: PvParams) -> String {
    format!("({:.6}, {:.6}, {:.6})", p.a, p.b, p.c)
}

// 1
fn rational_exactness() -> Outcome {
    let grid = default_pv_grid();
    let printed = [
        (RationalPv::W2a, (0.125, -2.0, 1.25)),
        (RationalPv::W2d, (0.5, -49.0 / 8.0, 0.25)),
        (RationalPv::W2f, (2.0, -0.125, -1.75)),
    ];
    let mut worst = 0.0_f64;
    let mut pass = true;
    let mut notes = Vec::new();
    for (r, (a, b, c)) in printed {
        let mut s = r.solution();
        s.params = PvParams::new(a, b, c);
        pass &= s.params.d == -0.125;
        match verify_pv(&s, &grid, 1e-10) {
            Ok(rep) => {
                worst = worst.max(rep.max_rel_residual);
                pass &= rep.pass;
                notes.push(format!("{r:?}: {:.2e} on {} points", rep.max_rel_residual, rep.valid()));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{r:?}: {e}"));
            }
        }
    }
    Outcome {
        pass,
        detail: format!("max relative residual {worst:.2e} (tol 1e-10)"),
        notes,
    }
}

// 2
fn reconstruction() -> Outcome {
    let grid = default_pv_grid();
    let mut worst = 0.0_f64;
    let mut fewest = usize::MAX;
    let mut pass = true;
    let mut notes = Vec::new();
    for r in RationalPv::ALL {
        let (spec, case) = r.origin();
        let built = pv_states(Partner::H2, spec).and_then(|st| pv_from_pair(Partner::H2, &st, case, &grid));
        match built {
            Ok(s) => {
                let (dev, n) = max_deviation(&s.w, &r.solution().w, &grid);
                worst = worst.max(dev);
                fewest = fewest.min(n);
                pass &= dev <= 1e-8 && n >= 30;
                notes.push(format!("{r:?} from {spec} case ({case}): {dev:.2e} on {n} points"));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{r:?}: {e}"));
            }
        }
    }
    Outcome {
        pass,
        detail: format!("max deviation {worst:.2e} (tol 1e-8), min points {fewest}"),
        notes,
    }
}

enum Check {
    Pass(f64),
    Fail(String),
    Excluded(String),
}

fn check_piv(s: &PivSolution, grid: &[f64], tol: f64) -> Check {
    match verify_piv(s, grid, tol) {
        Ok(r) if r.pass => Check::Pass(r.max_rel_residual),
        Ok(r) => Check::Fail(format!("residual {:.2e}", r.max_rel_residual)),
        Err(Error::Degenerate(why)) => Check::Excluded(format!("degenerate: {why}")),
        Err(Error::TooFewPoints { valid, .. }) => Check::Excluded(format!("pole-dominated: {valid} valid points")),
        Err(e) => Check::Fail(e.to_string()),
    }
}

fn check_pv(s: &PvSolution, grid: &[f64], tol: f64) -> Check {
    match verify_pv(s, grid, tol) {
        Ok(r) if r.pass => Check::Pass(r.max_rel_residual),
        Ok(r) => Check::Fail(format!("residual {:.2e}", r.max_rel_residual)),
        Err(Error::Degenerate(why)) => Check::Excluded(format!("degenerate: {why}")),
        Err(Error::TooFewPoints { valid, .. }) => Check::Excluded(format!("pole-dominated: {valid} valid points")),
        Err(e) => Check::Fail(e.to_string()),
    }
}

fn tally(checks: Vec<(String, Check)>, tol: f64) -> Outcome {
    let mut worst = 0.0_f64;
    let (mut ok, mut failed, mut excluded) = (0, 0, 0);
    let mut notes = Vec::new();
    for (label, c) in checks {
        match c {
            Check::Pass(r) => {
                ok += 1;
                worst = worst.max(r);
            }
            Check::Fail(why) => {
                failed += 1;
                notes.push(format!("FAIL {label}: {why}"));
            }
            Check::Excluded(why) => {
                excluded += 1;
                notes.push(format!("excluded {label}: {why}"));
            }
        }
    }
    Outcome {
        pass: failed == 0 && ok > 0,
        detail: format!("{ok} pass, {failed} fail, {excluded} excluded; max residual {worst:.2e} (tol {tol:.0e})"),
        notes,
    }
}

// 3
fn piv_families() -> Outcome {
    let grid = default_piv_grid();
    let mut checks = Vec::new();
    for eps in [-1.5, -0.5, 2.5, 3.5] {
        for fam in PivFamily::ALL {
            let pars: &[Parity] = if fam.partner() == Partner::H1 {
                &[Parity::Odd, Parity::Even]
            } else {
                &[Parity::Odd]
            };
            for &par in pars {
                let spec = SeedSpec::new(eps, par);
                let label = format!("{fam} {spec}");
                let c = match piv_closed(fam, spec) {
                    Ok(s) => {
                        assert_eq!(s.params, fam.params(eps));
                        check_piv(&s, &grid, 1e-8)
                    }
                    Err(Error::Degenerate(why)) => Check::Excluded(format!("degenerate: {why}")),
                    Err(e) => Check::Fail(e.to_string()),
                };
                checks.push((label, c));
            }
        }
    }
    tally(checks, 1e-8)
}

// 4
fn pv_closed_forms() -> Outcome {
    let grid = default_pv_grid();
    let mut checks = Vec::new();
    for eps in [-1.5, 0.5, 2.5] {
        for par in parities() {
            let spec = SeedSpec::new(eps, par);
            for case in PvCase::ALL {
                let s = pv_closed_w1(case, spec);
                checks.push((format!("w1{case} {spec}"), check_pv(&s, &grid, 1e-8)));
            }
        }
    }
    tally(checks, 1e-8)
}

// 5
fn chain() -> Outcome {
    let mut pass = true;
    let mut worst = 0.0_f64;
    let mut notes = Vec::new();
    let mut winners = Vec::new();
    for eps in [2.5, 3.5] {
        let spec = SeedSpec::odd(eps);
        let links = bt_piv_chain(spec);
        pass &= links.len() == 5;
        for l in &links {
            let ok = l.status == LinkStatus::Pass && l.max_deviation <= 1e-7 && l.valid_points >= MIN_VALID_POINTS;
            pass &= ok;
            worst = worst.max(l.max_deviation);
            let maps = l
                .chosen
                .as_ref()
                .map(|m| m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" then "))
                .unwrap_or_default();
            notes.push(format!(
                "{spec} {}->{} [{maps}]: {} dev {:.2e} on {}",
                l.source, l.target, l.status, l.max_deviation, l.valid_points
            ));
        }
        // W~+ link: printed map coefficient vs the one that reproduces the target
        let Some(link) = links.iter().find(|l| l.nominal == [PivMapKind::WtildePlus]) else {
            pass = false;
            continue;
        };
        let src = PivFamily::g3.params(eps);
        let r = (-2.0 * src.b).sqrt();
        let candidates = [
            ("(1 - 2a + 3r)/4", (1.0 - 2.0 * src.a + 3.0 * r) / 4.0),
            ("(2 - 2a + 3r)/4", (2.0 - 2.0 * src.a + 3.0 * r) / 4.0),
        ];
        let inferred = link
            .result
            .as_ref()
            .and_then(|res| res.inferred.as_ref())
            .map(|i| i.params);
        match inferred {
            Some(p) => {
                let hits: Vec<_> = candidates
                    .iter()
                    .filter(|(_, a)| (a - p.a).abs() <= PARAM_TOLERANCE)
                    .collect();
                if hits.len() == 1 {
                    winners.push(format!("eps={eps}: {} (a={:.6})", hits[0].0, p.a));
                } else {
                    pass = false;
                    notes.push(format!(
                        "eps={eps}: {} candidates match inferred a={:.6}",
                        hits.len(),
                        p.a
                    ));
                }
            }
            None => {
                pass = false;
                notes.push(format!("eps={eps}: W~+ link has no inferred parameters"));
            }
        }
    }
    notes.extend(winners.iter().map(|w| format!("W~+ winner {w}")));
    Outcome {
        pass,
        detail: format!(
            "10 links, max deviation {worst:.2e} (tol 1e-7); W~+ winners: {}",
            winners.len()
        ),
        notes,
    }
}

/// Independent transcription of the catalog windows, by (source, target, k).
fn window_oracle(label: &str, text: &str, eps: f64) -> Option<bool> {
    let e = eps;
    Some(match label {
        "w1c->w2d T(-1,1,1)" if text == "eps = 1/2" => e == 0.5,
        "w1b->w2a T(-1,1,1)" | "w1b->w2e T(-1,-1,1)" | "w2d->w1c T(1,1,-1)" | "w2d->w1f T(-1,1,-1)" => e < -1.5,
        "w1b->w2a T(-1,-1,1)" | "w1b->w2e T(-1,1,1)" => -1.5 < e && e < 1.5,
        "w1c->w2a T(1,-1,1)" | "w1c->w2d T(1,1,1)" => 0.5 < e,
        "w1c->w2d T(-1,1,1)" => -0.5 < e && e < 0.5,
        "w1c->w2d T(-1,-1,1)" => e < -0.5,
        "w1f->w2d T(-1,-1,1)" | "w1f->w2e T(-1,1,1)" => true,
        "w2d->w1c T(-1,-1,-1)" | "w2d->w1f T(1,-1,-1)" => 3.5 < e,
        "w2d->w1f T(1,1,-1)" => -1.5 < e,
        "w2e->w1b T(1,1,-1)" | "w2e->w1f T(-1,1,-1)" => e <= -0.5,
        "w2e->w1b T(-1,1,-1)" | "w2e->w1f T(1,1,-1)" => -0.5 <= e && e < 2.5,
        "w2e->w1b T(-1,-1,-1)" => 2.5 < e,
        _ => return None,
    })
}

const SWEEP: (f64, f64) = (-4.5, 5.5);

/// Three interior samples of the window clipped to the sweep range; a
/// point window gives its single value.
fn in_window_samples(w: &Window) -> Vec<f64> {
    if let (Some(lo), Some(hi)) = (w.lo, w.hi) {
        if lo.value == hi.value {
            return vec![lo.value];
        }
    }
    let lo = w.lo.map_or(SWEEP.0, |b| b.value.max(SWEEP.0));
    let hi = w.hi.map_or(SWEEP.1, |b| b.value.min(SWEEP.1));
    [0.17, 0.51, 0.83].iter().map(|t| lo + t * (hi - lo)).collect()
}

// 6
fn catalog() -> Outcome {
    let grid = default_pv_grid();
    let rows = catalog_rows();
    let mut pass = rows.len() == 21;
    let (mut ok, mut failed, mut excluded, mut boundary) = (0, 0, 0, 0);
    let mut worst = 0.0_f64;
    let mut notes = Vec::new();
    let probes: Vec<f64> = (0..=40).map(|i| SWEEP.0 + 0.25 * i as f64 + 0.05).collect();
    for (idx, row) in rows.iter().enumerate() {
        let label = format!("{}->{} {}", row.source, row.target, row.map);
        // applicability against the independent transcription, and no
        // function test for out-of-window samples
        for &e in probes.iter().chain(&[-1.5, -0.5, 0.5, 1.5, 2.5, 3.5]) {
            let entry = bt_pv_catalog(e)[idx];
            match window_oracle(&label, row.window.text, e) {
                Some(want) if want == entry.applicable => {}
                _ => {
                    pass = false;
                    notes.push(format!("FAIL {label} [{}]: applicability at eps={e}", row.window.text));
                }
            }
        }
        for eps in in_window_samples(&row.window) {
            let entry = bt_pv_catalog(eps)[idx];
            if !entry.applicable {
                pass = false;
                notes.push(format!("FAIL {label}: sample {eps} not applicable"));
                continue;
            }
            for par in parities() {
                let spec = SeedSpec::new(eps, par);
                let tag = format!("{label} [{}] at {spec}", row.window.text);
                if entry.boundary {
                    boundary += 1;
                }
                match verify_catalog_row(row, spec, &grid) {
                    Ok(rc) => {
                        let target = row.target.build(spec).map(|t| t.params);
                        let inferred = rc.result.inferred.as_ref().map(|i| i.params);
                        let inferred_ok = match (inferred, target) {
                            (Some(i), Ok(t)) => {
                                (i.a - t.a).abs() <= PARAM_TOLERANCE
                                    && (i.b - t.b).abs() <= PARAM_TOLERANCE
                                    && (i.c - t.c).abs() <= PARAM_TOLERANCE
                            }
                            _ => false,
                        };
                        let good = rc.pass && rc.max_deviation <= 1e-7 && inferred_ok;
                        if good {
                            ok += 1;
                            worst = worst.max(rc.max_deviation);
                        } else if entry.boundary {
                            notes.push(format!(
                                "boundary {tag}: dev {:.2e}, inferred {}",
                                rc.max_deviation,
                                inferred.map_or("none".into(), fmt_params_pv)
                            ));
                        } else {
                            failed += 1;
                            notes.push(format!(
                                "FAIL {tag}: dev {:.2e} on {}, predicted {}, inferred {}",
                                rc.max_deviation,
                                rc.valid_points,
                                fmt_params_pv(rc.result.predicted),
                                inferred.map_or("none".into(), fmt_params_pv)
                            ));
                        }
                    }
                    Err(e @ (Error::Degenerate(_) | Error::TooFewPoints { .. })) => {
                        excluded += 1;
                        notes.push(format!("excluded {tag}: {e}"));
                    }
                    Err(e) => {
                        failed += 1;
                        notes.push(format!("FAIL {tag}: {e}"));
                    }
                }
            }
        }
    }
    pass &= failed == 0 && ok > 0;
    Outcome {
        pass,
        detail: format!(
            "{ok} pass, {failed} fail, {excluded} degenerate, {boundary} boundary-flagged; max deviation {worst:.2e} (tol 1e-7)"
        ),
        notes,
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo, hi, n)
}

fn sample_admissible(rng: &mut ChaCha8Rng, p1: Parity, p2: Parity) -> (f64, f64) {
    let (below, start, width) = match (p1, p2) {
        (Parity::Odd, Parity::Odd) => (Some(1.5), 1.5, 2.0),
        (Parity::Odd, Parity::Even) => (None, 0.5, 1.0),
        (Parity::Even, Parity::Odd) => (Some(0.5), 1.5, 1.0),
        (Parity::Even, Parity::Even) => (Some(0.5), 0.5, 2.0),
    };
    let (lo, hi) = match below {
        Some(top) if rng.random_bool(0.5) => (top - 5.0, top),
        _ => {
            let j = rng.random_range(0..2) as f64;
            (start + 2.0 * j, start + 2.0 * j + width)
        }
    };
    loop {
        let a: f64 = rng.random_range(lo + 0.02..hi - 0.02);
        let b: f64 = rng.random_range(lo + 0.01..hi - 0.01);
        if (a - b).abs() >= 0.01 {
            return (a.max(b), a.min(b));
        }
    }
}

// 7
fn structural() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut notes = Vec::new();
    let fail = |notes: &mut Vec<String>, what: String| notes.push(format!("FAIL {what}"));

    let mut schr = 0.0_f64;
    for _ in 0..40 {
        let e: f64 = rng.random_range(-4.0..4.0);
        let par = if rng.random_bool(0.5) {
            Parity::Odd
        } else {
            Parity::Even
        };
        let spec = SeedSpec::new(e, par);
        let f = spec.function();
        for x in grid(0.1, 4.0, 12) {
            let (r, s) = susy_painleve::oscillator::schrodinger_residual_scaled(&f, e, x).unwrap();
            let rel = r.abs() / s.max(f64::MIN_POSITIVE);
            schr = schr.max(rel);
            if rel > 1e-9 {
                fail(&mut notes, format!("Schrodinger {spec} x={x}: {rel:.2e}"));
            }
        }
    }

    let mut wr = 0.0_f64;
    for _ in 0..40 {
        let e1: f64 = rng.random_range(-4.0..2.0);
        let e2 = e1 - rng.random_range(0.1..3.0);
        let p1 = if rng.random_bool(0.5) {
            Parity::Odd
        } else {
            Parity::Even
        };
        let p2 = if rng.random_bool(0.5) {
            Parity::Odd
        } else {
            Parity::Even
        };
        let t = SecondOrderTransform::general(SeedSpec::new(e1, p1), SeedSpec::new(e2, p2)).unwrap();
        for x in grid(0.2, 3.5, 6) {
            let w = t.wronskian(x, 1).unwrap();
            let want = 2.0 * (e1 - e2) * t.u1().value(x).unwrap() * t.u2().value(x).unwrap();
            let rel = (w.deriv(1) - want).abs() / want.abs().max(f64::MIN_POSITIVE);
            wr = wr.max(rel);
            if rel > 1e-10 {
                fail(&mut notes, format!("Wronskian {t:?} x={x}: {rel:.2e}"));
            }
        }
    }

    let mut kern = 0.0_f64;
    let transforms = [
        SecondOrderTransform::general(SeedSpec::odd(1.2), SeedSpec::even(-0.7)).unwrap(),
        SecondOrderTransform::general(SeedSpec::even(2.9), SeedSpec::odd(-2.2)).unwrap(),
        SecondOrderTransform::reduced_step1(SeedSpec::odd(-0.5)),
        SecondOrderTransform::reduced_step1(SeedSpec::even(2.5)),
        SecondOrderTransform::reduced_step2(SeedSpec::even(-1.3)),
        SecondOrderTransform::reduced_step2(SeedSpec::odd(-3.5)),
    ];
    for t in transforms {
        for x in grid(0.3, 3.0, 9) {
            for f in [t.u1(), t.u2()] {
                let v = t.apply_bplus(&f, x, 0).unwrap().value();
                let s = f.eval(x, 2).unwrap();
                let scale = s.derivs().iter().map(|d| d.abs()).sum::<f64>() * (1.0 + x * x);
                kern = kern.max(v.abs() / scale);
                if v.abs() > 1e-9 * scale {
                    fail(&mut notes, format!("B+ kernel {t:?} x={x}: {v:.2e} vs {scale:.2e}"));
                }
            }
        }
    }

    let mut low = 0.0_f64;
    for seed in [
        SeedSpec::even(-0.8),
        SeedSpec::odd(-1.2),
        SeedSpec::even(0.3),
        SeedSpec::odd(2.5),
        SeedSpec::even(-2.7),
    ] {
        let t1 = FirstOrderTransform::new(seed);
        let states = extremal_states(ExtremalTarget::H1Piv, &Transform::First(t1)).unwrap();
        if states.len() != 3 {
            fail(&mut notes, format!("{seed}: {} H1 PIV states", states.len()));
        }
        for s in &states {
            let l = lowering_h1_piv(&t1, &s.state);
            for x in grid(0.3, 3.0, 8) {
                let Ok(alpha) = t1.superpotential_alpha(x, 0) else {
                    continue;
                };
                let scale = operator_scale(&s.state, x, 3, 1.0 + x + alpha.value().abs()).unwrap();
                let v = l.value(x).unwrap();
                low = low.max(v.abs() / scale);
                if v.abs() > 1e-8 * scale {
                    fail(
                        &mut notes,
                        format!("L- {} {seed} x={x}: {v:.2e} vs {scale:.2e}", s.label),
                    );
                }
            }
        }
    }

    let xs = grid(0.1, 4.0, 40);
    let mut violations = 0;
    let mut samples = 0;
    for (p1, p2) in [
        (Parity::Odd, Parity::Odd),
        (Parity::Odd, Parity::Even),
        (Parity::Even, Parity::Odd),
        (Parity::Even, Parity::Even),
    ] {
        for _ in 0..30 {
            let (e1, e2) = sample_admissible(&mut rng, p1, p2);
            samples += 1;
            if !admissible_window(p1, p2, e1, e2).unwrap() {
                violations += 1;
                fail(&mut notes, format!("window rejects {p1}/{p2} {e1} {e2}"));
                continue;
            }
            let t = SecondOrderTransform::general(SeedSpec::new(e1, p1), SeedSpec::new(e2, p2)).unwrap();
            if !nodeless_check(&t.wronskian_fn(), &xs).unwrap() {
                violations += 1;
                fail(&mut notes, format!("node for {p1}/{p2} eps1={e1} eps2={e2}"));
            }
        }
    }
    Outcome {
        pass: notes.is_empty(),
        detail: format!(
            "Schrodinger {schr:.1e}, Wronskian {wr:.1e}, B+ kernel {kern:.1e}, L- {low:.1e}, window sweep {violations}/{samples} violations"
        ),
        notes,
    }
}

enum Generated {
    Piv(PivSolution),
    Pv(PvSolution),
}

fn generated() -> Vec<(String, Generated)> {
    let xg = default_piv_grid();
    let zg = default_pv_grid();
    let mut out = Vec::new();
    for r in RationalPv::ALL {
        out.push((format!("{r:?}"), Generated::Pv(r.solution())));
        let (spec, case) = r.origin();
        if let Ok(s) = pv_family(Partner::H2, case, spec) {
            out.push((format!("{r:?} rebuilt"), Generated::Pv(s)));
        }
    }
    for eps in [-1.5, -0.5, 2.5, 3.5] {
        for fam in PivFamily::ALL {
            for par in parities() {
                let spec = SeedSpec::new(eps, par);
                if let Ok(s) = piv_closed(fam, spec) {
                    if verify_piv(&s, &xg, 1e-8).is_ok_and(|r| r.pass) {
                        out.push((format!("{fam} {spec}"), Generated::Piv(s)));
                    }
                }
            }
        }
    }
    for eps in [-1.5, 0.5, 2.5, -0.7] {
        for par in parities() {
            for case in PvCase::ALL {
                let spec = SeedSpec::new(eps, par);
                let s = pv_closed_w1(case, spec);
                if verify_pv(&s, &zg, 1e-8).is_ok_and(|r| r.pass) {
                    out.push((format!("w1{case} {spec}"), Generated::Pv(s)));
                }
            }
        }
    }
    for l in bt_piv_chain(SeedSpec::odd(2.5)) {
        if let Some(res) = l.result {
            out.push((
                format!("{}->{} transformed", l.source, l.target),
                Generated::Piv(PivSolution {
                    g: res.transformed,
                    params: l.target.params(2.5),
                    provenance: res.map,
                }),
            ));
        }
    }
    out
}

// 8
fn inference() -> Outcome {
    let xg = default_piv_grid();
    let zg = default_pv_grid();
    let mut worst = 0.0_f64;
    let mut weakest_control = f64::INFINITY;
    let mut notes = Vec::new();
    let sols = generated();
    for (label, g) in &sols {
        let (err, control) = match g {
            Generated::Piv(s) => {
                let err = infer_piv_params(&s.g, &xg)
                    .map(|i| (i.params.a - s.params.a).abs().max((i.params.b - s.params.b).abs()));
                let bad = PivSolution {
                    params: PivParams {
                        b: s.params.b + 1.0,
                        ..s.params
                    },
                    ..s.clone()
                };
                (err, verify_piv(&bad, &xg, 1e-8).map(|r| r.max_rel_residual))
            }
            Generated::Pv(s) => {
                let err = infer_pv_params(&s.w, &zg).map(|i| {
                    (i.params.a - s.params.a)
                        .abs()
                        .max((i.params.b - s.params.b).abs())
                        .max((i.params.c - s.params.c).abs())
                });
                let bad = PvSolution {
                    params: PvParams {
                        b: s.params.b + 1.0,
                        ..s.params
                    },
                    ..s.clone()
                };
                (err, verify_pv(&bad, &zg, 1e-8).map(|r| r.max_rel_residual))
            }
        };
        match err {
            Ok(e) => {
                worst = worst.max(e);
                if e > 1e-7 {
                    notes.push(format!("FAIL {label}: inferred off by {e:.2e}"));
                }
            }
            Err(e) => notes.push(format!("FAIL {label}: inference {e}")),
        }
        match control {
            Ok(r) => {
                weakest_control = weakest_control.min(r);
                if r < 1e-2 {
                    notes.push(format!("FAIL {label}: corrupted b still gives {r:.2e}"));
                }
            }
            Err(e) => notes.push(format!("FAIL {label}: control {e}")),
        }
    }
    Outcome {
        pass: notes.is_empty() && !sols.is_empty(),
        detail: format!(
            "{} solutions, max parameter error {worst:.2e} (tol 1e-7), weakest control {weakest_control:.2e} (need >= 1e-2)",
            sols.len()
        ),
        notes,
    }
}

// 9
fn order_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0_f64;
    let mut done = 0;
    let mut attempts = 0;
    let mut notes = Vec::new();
    while done < 100 && attempts < 10_000 {
        attempts += 1;
        let par = if rng.random_bool(0.5) {
            Parity::Odd
        } else {
            Parity::Even
        };
        let eps: f64 = rng.random_range(-3.0..4.0);
        let spec = SeedSpec::new(eps, par);
        let k = rng.random_range(0..3);
        let r = match k {
            0 => {
                let fam = PivFamily::ALL[rng.random_range(0..6)];
                let Ok(s) = piv_closed(fam, spec) else { continue };
                let x: f64 = rng.random_range(0.2..4.0);
                pair(&s.g, x, |g, x, o| piv_residual_at_order(g, s.params, x, o))
            }
            1 => {
                let case = PvCase::ALL[rng.random_range(0..6)];
                let s = pv_closed_w1(case, spec);
                let z: f64 = rng.random_range(0.1..8.0);
                pair(&s.w, z, |w, z, o| pv_residual_at_order(w, s.params, z, o))
            }
            _ => {
                let s = RationalPv::ALL[rng.random_range(0..3)].solution();
                let z: f64 = rng.random_range(0.1..8.0);
                pair(&s.w, z, |w, z, o| pv_residual_at_order(w, s.params, z, o))
            }
        };
        if let Some(rel) = r {
            done += 1;
            worst = worst.max(rel);
            if rel > 1e-12 {
                notes.push(format!("FAIL kind {k} {spec}: {rel:.2e}"));
            }
        }
    }
    Outcome {
        pass: done == 100 && notes.is_empty(),
        detail: format!("{done} evaluations, max K vs K+1 disagreement {worst:.2e} (tol 1e-12)"),
        notes,
    }
}

fn pair(f: &JetFn, t: f64, res: impl Fn(&JetFn, f64, usize) -> susy_painleve::Result<(f64, f64)>) -> Option<f64> {
    let k = susy_painleve::jets::DEFAULT_ORDER;
    let (r1, s1) = res(f, t, k).ok()?;
    let (r2, _) = res(f, t, k + 1).ok()?;
    if !(s1 > 0.0) {
        return None;
    }
    Some((r1 - r2).abs() / s1)
}

fn main() {
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    // libtest flags (--list, filters) are accepted and ignored
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 9] = [
        (
            "rational PV exactness",
            Some(Duration::from_secs(1)),
            rational_exactness,
        ),
        (
            "reconstruction from pairs",
            Some(Duration::from_secs(10)),
            reconstruction,
        ),
        ("PIV family residuals", Some(Duration::from_secs(30)), piv_families),
        ("PV closed forms", None, pv_closed_forms),
        ("Backlund chain", None, chain),
        ("PV catalog", None, catalog),
        ("structural invariants", None, structural),
        ("parameter inference", None, inference),
        ("jet order independence", None, order_independence),
    ];
    let mut failures = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let (o, dt) = timed(*limit, f);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {} ({:.2?})", i + 1, o.detail, dt);
        for n in &o.notes {
            if verbose
                || n.starts_with("FAIL")
                || n.starts_with("W~+")
                || n.starts_with("excluded")
                || n.starts_with("boundary")
            {
                println!("       {n}");
            }
        }
        if !o.pass {
            failures += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}

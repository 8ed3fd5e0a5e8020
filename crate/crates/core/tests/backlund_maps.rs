use susy_painleve::backlund::*;
use susy_painleve::oscillator::SeedSpec;
use susy_painleve::painleve::{piv_closed, PivFamily};
use susy_painleve::residual::{default_piv_grid, default_pv_grid};

fn find_row(src: &str, dst: &str, k: (i8, i8, i8), eps: f64) -> CatalogRow {
    catalog_rows()
        .into_iter()
        .find(|r| {
            r.source.to_string() == src
                && r.target.to_string() == dst
                && (r.map.k1, r.map.k2, r.map.k3) == k
                && r.window.contains(eps)
        })
        .unwrap()
}

#[test]
fn wddag_minus_takes_g2_to_g3() {
    let spec = SeedSpec::odd(2.5);
    let grid = default_piv_grid();
    let g2 = piv_closed(PivFamily::g2, spec).unwrap();
    let g3 = piv_closed(PivFamily::g3, spec).unwrap();
    let r = bt_piv_apply(
        PivMap::principal(PivMapKind::WddagMinus),
        &g2,
        &grid,
        BT_VERIFY_TOLERANCE,
    )
    .unwrap();
    let (dev, n) = max_deviation(&r.transformed, &g3.g, &grid);
    assert!(n >= 20 && dev <= 1e-9, "{dev} on {n}");
    assert!(!r.discrepancy && r.pass);
    assert!((r.predicted.a - 4.0).abs() < 1e-12 && (r.predicted.b + 2.0).abs() < 1e-12);
}

#[test]
fn wrong_map_is_caught() {
    let spec = SeedSpec::odd(2.5);
    let grid = default_piv_grid();
    let g2 = piv_closed(PivFamily::g2, spec).unwrap();
    let g3 = piv_closed(PivFamily::g3, spec).unwrap();
    let wrong = PivMap::principal(PivMapKind::WddagPlus);
    let g = wrong.transform(&g2.g, g2.params).unwrap();
    let (dev, n) = max_deviation(&g, &g3.g, &grid);
    assert!(n >= 20 && dev >= 1e-2, "{dev}");
    // the negative root of W‡+ is W‡- itself
    let g = PivMap::new(PivMapKind::WddagPlus, RootBranch::Negative)
        .transform(&g2.g, g2.params)
        .unwrap();
    assert!(max_deviation(&g, &g3.g, &grid).0 <= 1e-9);
}

#[test]
fn chain_at_odd_five_halves() {
    let links = bt_piv_chain(SeedSpec::odd(2.5));
    assert_eq!(links.len(), 5);
    for l in &links {
        assert_eq!(
            l.status,
            LinkStatus::Pass,
            "{}->{}: {}",
            l.source,
            l.target,
            l.max_deviation
        );
        assert!(l.max_deviation <= CHAIN_TOLERANCE);
        assert!(l.result.as_ref().unwrap().pass, "{}->{}", l.source, l.target);
    }
    let tilde = &links[2];
    let r = tilde.result.as_ref().unwrap();
    assert!(r.discrepancy);
    assert!((r.predicted.a + 0.25).abs() < 1e-12);
    assert!(r.inferred.as_ref().unwrap().params.a.abs() < 1e-7);
}

#[test]
fn chain_uses_negative_root_below_one_half() {
    let links = bt_piv_chain(SeedSpec::odd(-0.7));
    assert!(links.iter().all(|l| l.status == LinkStatus::Pass));
    let link2 = links[1].chosen.as_ref().unwrap();
    assert_eq!(link2[0].branch, RootBranch::Negative);
}

#[test]
fn chain_degenerates_at_even_one_half() {
    let links = bt_piv_chain(SeedSpec::even(0.5));
    assert!(links.iter().all(|l| l.status == LinkStatus::Degenerate));
}

#[test]
fn w1b_to_w2a_at_zero() {
    let grid = default_pv_grid();
    let row = find_row("w1b", "w2a", (-1, -1, 1), 0.0);
    for spec in [SeedSpec::odd(0.0), SeedSpec::even(0.0)] {
        let c = verify_catalog_row(&row, spec, &grid).unwrap();
        assert!(
            c.valid_points >= 20 && c.max_deviation <= 1e-8,
            "{spec}: {}",
            c.max_deviation
        );
        let target = row.target.build(spec).unwrap().params;
        let p = c.result.predicted;
        assert!((p.a - target.a).abs() <= 1e-9 && (p.b - target.b).abs() <= 1e-9 && (p.c - target.c).abs() <= 1e-9);
        assert_eq!(p.d, -0.125);
    }
}

#[test]
fn w1f_to_w2d_at_one() {
    let grid = default_pv_grid();
    let row = find_row("w1f", "w2d", (-1, -1, 1), 1.0);
    for spec in [SeedSpec::odd(1.0), SeedSpec::even(1.0)] {
        let c = verify_catalog_row(&row, spec, &grid).unwrap();
        assert!(c.pass, "{spec}: {}", c.max_deviation);
    }
}

#[test]
fn d_survives_composition() {
    let grid = default_pv_grid();
    let spec = SeedSpec::odd(0.3);
    let mut s = PvFamilyId::new(susy_painleve::painleve::Partner::H1, susy_painleve::painleve::PvCase::F)
        .build(spec)
        .unwrap();
    for k in [(-1, -1, 1), (1, 1, -1), (-1, 1, 1)] {
        let m = PvMap::new(k.0, k.1, k.2).unwrap();
        let r = bt_pv_apply(m, &s, &grid, BT_VERIFY_TOLERANCE).unwrap();
        assert_eq!(r.predicted.d, -0.125);
        s = susy_painleve::painleve::PvSolution {
            w: r.transformed,
            params: r.predicted,
            provenance: m.to_string(),
        };
    }
}

#[test]
fn link_parameters_compose_exactly() {
    for eps in [0.75, 1.0, 2.5, 3.25] {
        let l1 = compose_piv_params(
            &[
                PivMap::principal(PivMapKind::WdaggerPlus),
                PivMap::principal(PivMapKind::WddagPlus),
            ],
            PivFamily::g1.params(eps),
        )
        .unwrap();
        assert_eq!(l1, PivFamily::g2.params(eps));
        let l2 = PivMap::principal(PivMapKind::WddagMinus).predict(l1).unwrap();
        let want = PivFamily::g3.params(eps);
        assert!(
            (l2.a - want.a).abs() < 1e-12 && (l2.b - want.b).abs() < 1e-12,
            "{eps}: {l2:?}"
        );
    }
}

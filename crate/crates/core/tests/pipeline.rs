use equitile::assembler::{generate_plane, plane_squared_edge_budget, PlaneConfig};
use equitile::document::{Parameters, TilingDocument};
use equitile::geom::interiors_disjoint;
use equitile::selector::certify_y0;
use equitile::strip::{alternation_experiment, check_bounds, StripWindow};
use equitile::supertile::supertile_plane_window;
use equitile::svg::{render_svg, SvgOptions};
use equitile::tiling::{TilingWindow, WindowKind};
use equitile::verify::{congruent_pairs_bruteforce, verify_window};
use equitile::{Error, Rational, Scalar};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[test]
fn plane_pipeline_verifies_and_round_trips() {
    let build = generate_plane(&r(3, 5), 3, 4, 11, &PlaneConfig::default()).unwrap();
    let budget = plane_squared_edge_budget(&Scalar::ratio(3, 5)).unwrap();
    let report = verify_window(&build.window, "plane", Some(&budget));
    assert!(report.passed(), "{}", report.to_text());
    assert_eq!(report.tiles, 4 * 26);
    assert!(congruent_pairs_bruteforce(&build.window).is_empty());

    let deltas = build
        .selection
        .choices
        .iter()
        .map(|c| c.delta.clone())
        .collect();
    let doc = TilingDocument::from_window(
        &build.window,
        Parameters {
            deltas,
            horizon: 3,
            ..Default::default()
        },
    );
    let back = TilingDocument::from_json(&doc.to_json().unwrap())
        .unwrap()
        .to_window()
        .unwrap();
    assert_eq!(back.tiles, build.window.tiles);
}

#[test]
fn seeds_change_shears_but_not_validity() {
    let a = generate_plane(&r(3, 5), 2, 3, 1, &PlaneConfig::default()).unwrap();
    let b = generate_plane(&r(3, 5), 2, 3, 2, &PlaneConfig::default()).unwrap();
    let da: Vec<_> = a.selection.choices.iter().map(|c| &c.delta).collect();
    let db: Vec<_> = b.selection.choices.iter().map(|c| &c.delta).collect();
    assert_ne!(da, db);
    assert!(verify_window(&b.window, "b", None).passed());
}

#[test]
fn certified_heights_and_rejected_heights() {
    assert!(certify_y0(&r(3, 5), 4).unwrap().is_certified());
    assert!(matches!(
        certify_y0(&r(1, 2), 4),
        Err(Error::InvalidStartHeight(..))
    ));
    assert!(check_bounds(&Scalar::ratio(2, 3), 6).unwrap().holds());
}

#[test]
fn pentagon_tiles_have_disjoint_interiors() {
    let w = supertile_plane_window(2, 2, 5).unwrap().window;
    for (k, a) in w.tiles.iter().enumerate() {
        for b in &w.tiles[k + 1..] {
            assert!(
                interiors_disjoint(&a.polygon, &b.polygon),
                "{} {}",
                a.label,
                b.label
            );
        }
    }
}

#[test]
fn alternation_below_critical_height() {
    let e = alternation_experiment(&Scalar::ratio(1, 2), 6, 1 << 20).unwrap();
    assert!(e.alternates && !e.stopped_by_budget);
    assert_eq!(e.signs.len(), 7);
}

#[test]
fn strip_svg_is_deterministic() {
    let s = StripWindow::generate(&Scalar::ratio(3, 5), 2).unwrap();
    let w = TilingWindow::from_triangles(WindowKind::Strip, &s.triangles, 2);
    let o = SvgOptions {
        labels: true,
        ..Default::default()
    };
    assert_eq!(render_svg(&w, &o), render_svg(&w, &o));
}

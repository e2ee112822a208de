//! Pentagon path: the house supertile split into six unit-area convex
//! pentagons, perturbed per copy so that no two pentagons are congruent.
//!
//! cargo run --release --example pentagon_supertiles -- 3 3 0

use equitile::geom::signed_area;
use equitile::supertile::{house, supertile_plane_window, Subdivision, VertexTag};
use equitile::verify::verify_window;
use equitile::Scalar;

fn main() -> equitile::Result<()> {
    let mut args = std::env::args().skip(1);
    let rows: usize = args.next().map(|s| s.parse().expect("rows")).unwrap_or(3);
    let cols: usize = args.next().map(|s| s.parse().expect("cols")).unwrap_or(3);
    let seed: u64 = args.next().map(|s| s.parse().expect("seed")).unwrap_or(0);

    println!("house area {}", signed_area(&house()));
    let base = Subdivision::house();
    println!(
        "subdivision: {} faces, {} fixed, {} two-dof, {} one-dof, {} dependent vertices",
        base.faces.len(),
        base.count(VertexTag::Fixed),
        base.count(VertexTag::Free2),
        base.count(VertexTag::Free1),
        base.count(VertexTag::Dependent)
    );
    for (f, p) in base.polygons()?.iter().enumerate() {
        println!("  face {f}: area {}  vertices {}", signed_area(p), p.len());
    }

    let build = supertile_plane_window(rows, cols, seed)?;
    println!(
        "{rows} x {cols} copies, redraws: {} convexity, {} congruence",
        build.rejected_convexity, build.rejected_congruence
    );
    for c in build.copies.iter().take(3) {
        println!(
            "  copy ({}, {}) inverted = {} at {}",
            c.row, c.col, c.inverted, c.translation
        );
    }
    let report = verify_window(&build.window, "pentagons", Some(&Scalar::int(17)));
    print!("{}", report.to_text());
    Ok(())
}

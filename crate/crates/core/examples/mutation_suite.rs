//! Negative controls: each corruption of a valid window is caught by one
//! exact check, with a witness.
//!
//! cargo run --release --example mutation_suite

use equitile::assembler::assemble_plane;
use equitile::strip::{closed_form_star, StripWindow};
use equitile::tiling::{TilingWindow, WindowKind};
use equitile::verify::{mutations, verify_window};
use equitile::Scalar;

fn show(name: &str, w: &TilingWindow) {
    let r = verify_window(w, name, None);
    println!(
        "--- {name}: {}",
        if r.passed() { "accepted" } else { "rejected" }
    );
    for line in r.to_text().lines().filter(|l| l.starts_with("    ")) {
        println!("{line}");
    }
}

fn main() -> equitile::Result<()> {
    let strip = StripWindow::generate(&Scalar::ratio(3, 5), 3)?;
    let base = assemble_plane(&strip, &[Scalar::ratio(1, 7), Scalar::ratio(-2, 9)])?;
    show("valid window", &base);
    show(
        "scaled tile",
        &mutations::scale_tile(&base, 0, &Scalar::ratio(3, 2)),
    );
    show("nudged vertex", &mutations::nudge_vertex(&base, 4, 0));
    show("duplicated shape", &mutations::duplicate_shape(&base, 7));
    show(
        "zero shears",
        &assemble_plane(&strip, &[Scalar::zero(), Scalar::zero()])?,
    );
    let states = (0..=4).map(closed_form_star).collect();
    let star = StripWindow::from_states(Scalar::inv_sqrt3(), states)?;
    show(
        "critical strip",
        &TilingWindow::from_triangles(WindowKind::Strip, &star.triangles, 4),
    );
    Ok(())
}

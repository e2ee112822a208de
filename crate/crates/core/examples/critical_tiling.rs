//! The critical start height 1/sqrt3: the recursion over Q(sqrt3) reaches
//! its closed form, and the window is not incongruent.
//!
//! cargo run --release --example critical_tiling

use equitile::selector::scan_translation_pairs;
use equitile::strip::{closed_form_star, generate_states, StripWindow};
use equitile::tiling::{TilingWindow, WindowKind};
use equitile::verify::check_incongruence;
use equitile::Scalar;

fn main() -> equitile::Result<()> {
    let y0 = Scalar::inv_sqrt3();
    let states = generate_states(&y0, 8, u64::MAX)?;
    for s in &states {
        let closed = s.i == 0 || *s == closed_form_star(s.i);
        println!(
            "i = {}  x = {}  y = {}  a = {}  b = {}  closed form: {closed}",
            s.i, s.x, s.y, s.a, s.b
        );
    }
    let w = StripWindow::from_states(y0, states)?;
    let scan = scan_translation_pairs(&w.triangles);
    println!(
        "translation scan: {} triangles, {} key comparisons, first pair {:?}",
        scan.triangles,
        scan.key_comparisons,
        scan.offending.map(|(a, b)| format!("{a} ~ {b}"))
    );
    let inc = check_incongruence(&TilingWindow::from_triangles(
        WindowKind::Strip,
        &w.triangles,
        8,
    ));
    println!(
        "congruence classes: {}, repeats: {}",
        inc.classes, inc.repeats
    );
    if let Some(p) = inc.offending {
        println!("first congruent pair: {} = {}", p.first, p.second);
    }
    Ok(())
}

//! Distorted strip tiling for a start height: column coordinates, exact
//! areas and the growth of the exact representation.
//!
//! cargo run --release --example strip_tiling -- 3/5 6

use equitile::geom::signed_area;
use equitile::strip::{generate_states_partial, StripWindow, DEFAULT_BIT_BUDGET};
use equitile::Scalar;

fn main() -> equitile::Result<()> {
    let mut args = std::env::args().skip(1);
    let y0: Scalar = args.next().as_deref().unwrap_or("3/5").parse()?;
    let i_max: u64 = args
        .next()
        .map(|s| s.parse().expect("column count"))
        .unwrap_or(6);

    let (states, stop) = generate_states_partial(&y0, i_max, DEFAULT_BIT_BUDGET)?;
    println!(
        "{:>3} {:>12} {:>12} {:>12} {:>12} {:>8}",
        "i", "x_i", "y_i", "a_{i+1}", "b_{i+1}", "bits"
    );
    for s in &states {
        println!(
            "{:>3} {:>12.8} {:>12.3e} {:>12.8} {:>12.8} {:>8}",
            s.i,
            s.x.approx(),
            s.y.approx(),
            s.a.approx(),
            s.b.approx(),
            s.bits()
        );
    }
    if let Some(e) = stop {
        println!("stopped: {e}");
    }

    let w = StripWindow::from_states(y0, states)?;
    let unit = w
        .triangles
        .iter()
        .filter(|t| signed_area(&t.polygon) == Scalar::one())
        .count();
    println!(
        "{} triangles, {unit} with area exactly 1",
        w.triangles.len()
    );
    let t = w.get(1, 1).expect("column 1");
    println!(
        "{}: {:?}",
        t.id,
        t.polygon
            .vertices()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
    );
    Ok(())
}

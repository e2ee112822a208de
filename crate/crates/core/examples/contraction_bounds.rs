//! Exact contraction bounds and the derived edge budget for a start height.
//!
//! cargo run --release --example contraction_bounds -- 3/5 8

use equitile::strip::{check_bounds, perimeter_budget};
use equitile::Scalar;

fn main() -> equitile::Result<()> {
    let mut args = std::env::args().skip(1);
    let y0: Scalar = args.next().as_deref().unwrap_or("3/5").parse()?;
    let i_max: u64 = args
        .next()
        .map(|s| s.parse().expect("column count"))
        .unwrap_or(8);

    let report = check_bounds(&y0, i_max)?;
    println!(
        "y0 = {}: {} exact checks on columns 0..={i_max}, holds: {}",
        report.y0,
        report.checks,
        report.holds()
    );
    for v in &report.violations {
        println!("  column {}: {:?}", v.column, v.kind);
    }
    let b = perimeter_budget(&y0)?;
    println!(
        "C_alpha = {}  C_beta = {}  C_xi = {}",
        b.c_alpha, b.c_beta, b.c_xi
    );
    println!(
        "squared edge budget {}  perimeter bound {:.4}",
        b.squared_edge, b.perimeter_bound
    );
    Ok(())
}

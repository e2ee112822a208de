//! Below the critical height the centre ordinates change sign every column.
//! Runs until the horizon or the bit budget.
//!
//! cargo run --release --example alternating_signs -- 1/2 30

use equitile::strip::{alternation_experiment, DEFAULT_BIT_BUDGET};
use equitile::Scalar;

fn main() -> equitile::Result<()> {
    let mut args = std::env::args().skip(1);
    let y0: Scalar = args.next().as_deref().unwrap_or("1/2").parse()?;
    let i_max: u64 = args
        .next()
        .map(|s| s.parse().expect("column count"))
        .unwrap_or(30);

    let e = alternation_experiment(&y0, i_max, DEFAULT_BIT_BUDGET)?;
    let signs: String = e
        .signs
        .iter()
        .map(|s| match s {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect();
    println!("y0 = {}: signs {signs} for i = 0..={}", e.y0, e.reached);
    println!("alternates: {}", e.alternates);
    if e.stopped_by_budget {
        println!(
            "stopped by the {DEFAULT_BIT_BUDGET}-bit budget before i = {}",
            e.requested
        );
    }
    Ok(())
}

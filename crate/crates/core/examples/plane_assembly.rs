//! Full plane pipeline: certify, choose shears, stack strips, verify and
//! save the window as JSON.
//!
//! cargo run --release --example plane_assembly -- 3 5 0 plane.json

use std::path::PathBuf;

use equitile::assembler::{generate_plane, plane_squared_edge_budget, PlaneConfig};
use equitile::document::{Parameters, TilingDocument};
use equitile::verify::verify_window;
use equitile::{Rational, Scalar};

fn main() -> equitile::Result<()> {
    let mut args = std::env::args().skip(1);
    let i_max: u64 = args
        .next()
        .map(|s| s.parse().expect("column count"))
        .unwrap_or(3);
    let strips: usize = args
        .next()
        .map(|s| s.parse().expect("strip count"))
        .unwrap_or(5);
    let seed: u64 = args.next().map(|s| s.parse().expect("seed")).unwrap_or(0);
    let out = args.next().map(PathBuf::from);

    let y0 = Rational::new(3.into(), 5.into());
    let build = generate_plane(&y0, i_max, strips, seed, &PlaneConfig::default())?;
    for s in &build.window.strips {
        println!(
            "band {:>2}: delta = {:>7}  reflected = {:<5}  offset = {}",
            s.band, s.delta, s.reflected, s.translation
        );
    }
    let budget = plane_squared_edge_budget(&Scalar::Rat(y0.clone()))?;
    let report = verify_window(&build.window, "plane", Some(&budget));
    print!("{}", report.to_text());

    if let Some(path) = out {
        let deltas = build
            .selection
            .choices
            .iter()
            .map(|c| c.delta.clone())
            .collect();
        let params = Parameters {
            y0: Some(Scalar::Rat(y0)),
            deltas,
            seed: Some(seed),
            horizon: i_max,
            edge_budget: Some(budget),
            ..Default::default()
        };
        TilingDocument::from_window(&build.window, params).save(&path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

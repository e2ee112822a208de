//! Certify a strip and draw shears that keep every strip copy incongruent to
//! every other.
//!
//! cargo run --release --example shear_selection -- 4 5

use equitile::selector::{certify_strip, choose_shears, excluded_shears_same, ShearConfig};
use equitile::Rational;

fn main() -> equitile::Result<()> {
    let mut args = std::env::args().skip(1);
    let i_max: u64 = args
        .next()
        .map(|s| s.parse().expect("column count"))
        .unwrap_or(4);
    let strips: usize = args
        .next()
        .map(|s| s.parse().expect("strip count"))
        .unwrap_or(5);
    let y0 = Rational::new(3.into(), 5.into());

    let certified = match certify_strip(&y0, i_max)? {
        Ok(c) => c,
        Err(e) => {
            println!("not certified: {e:?}");
            return Ok(());
        }
    };
    let scan = &certified.certificate.scan;
    println!(
        "certified {} triangles: {} pairs, {} pruned by width, {} by horizontal edge, {} key comparisons",
        scan.triangles, scan.pairs, scan.pruned_by_width, scan.pruned_by_horizontal_edge, scan.key_comparisons
    );

    let t = &certified.window.triangles;
    let e = excluded_shears_same(&t[0], &t[3])?;
    println!(
        "excluded shears for {} vs {}: {:?}",
        t[0].id,
        t[3].id,
        e.approx_roots()
    );

    let sel = choose_shears(&certified, strips, 0, &ShearConfig::default())?;
    println!(
        "set A: {} rational roots, {} irrational quadratics; rejected {} (A), {} (B), {} (scan)",
        sel.same_strip_roots,
        sel.same_strip_algebraic,
        sel.rejected_same,
        sel.rejected_cross,
        sel.rejected_scan
    );
    for c in &sel.choices {
        println!("  strip {}: delta = {}", c.n, c.delta);
    }
    Ok(())
}

//! SVG figures of a strip, the critical strip, a plane window and a
//! pentagon window.
//!
//! cargo run --release --example render_figures -- figures

use std::path::PathBuf;

use equitile::assembler::assemble_plane;
use equitile::strip::{closed_form_star, StripWindow};
use equitile::supertile::supertile_plane_window;
use equitile::svg::{render_svg, SvgOptions};
use equitile::tiling::{TilingWindow, WindowKind};
use equitile::Scalar;

fn main() -> equitile::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    let labels = SvgOptions {
        labels: true,
        ..Default::default()
    };
    let classes = SvgOptions {
        color_by_class: true,
        ..Default::default()
    };

    let strip = StripWindow::generate(&Scalar::ratio(3, 5), 4)?;
    let states = (0..=5).map(closed_form_star).collect();
    let star = StripWindow::from_states(Scalar::inv_sqrt3(), states)?;
    let plane = assemble_plane(
        &strip,
        &[
            Scalar::ratio(1, 7),
            Scalar::ratio(-2, 9),
            Scalar::ratio(3, 11),
        ],
    )?;
    let figures = [
        (
            "strip.svg",
            TilingWindow::from_triangles(WindowKind::Strip, &strip.triangles, 4),
            &labels,
        ),
        (
            "critical.svg",
            TilingWindow::from_triangles(WindowKind::Strip, &star.triangles, 5),
            &classes,
        ),
        ("plane.svg", plane, &SvgOptions::default()),
        (
            "pentagons.svg",
            supertile_plane_window(3, 3, 0)?.window,
            &labels,
        ),
    ];
    for (name, w, opts) in figures {
        let path = dir.join(name);
        std::fs::write(&path, render_svg(&w, opts))?;
        println!("wrote {} ({} tiles)", path.display(), w.len());
    }
    Ok(())
}

//! Radius inversion on the circle, computed by the block Buscher rules and,
//! independently, by the para-Hermitian `ℋ`-matrix route.
//!
//! Run with `cargo run --example circle [R]`.

use gengeom::tduality::{dual_background, para_route};
use gengeom::workbench::circle_document;
use gengeom::Result;

fn main() -> Result<()> {
    let r = std::env::args().nth(1).unwrap_or_else(|| "3/2".to_string());
    let p = circle_document(&r)?.tduality_problem()?;
    let dual = dual_background(&p)?;
    let chart = p.k2().quotient_chart();
    println!("R = {r}: dual metric {}", dual.g.render(chart));
    println!("para-Hermitian route agrees: {}", para_route(&p)? == dual.frame_h);
    Ok(())
}

//! Para-Hermitian Buscher rules for a metric with off-diagonal terms and a
//! `b`-field, by the explicit component formulas and by permuting `ℋ`.
//!
//! Run with `cargo run --example para_buscher`.

use gengeom::para::{para_buscher, para_buscher_h_route, GenParaMetric};
use gengeom::{Chart, PolyMat, Result};

fn main() -> Result<()> {
    let chart = Chart::new(&["x", "y", "z", "xt", "yt", "zt"])?;
    let rows = |r: &[[&str; 3]; 3]| r.iter().map(|row| row.iter().map(|s| s.to_string()).collect()).collect::<Vec<Vec<String>>>();
    let g = PolyMat::parse(&rows(&[["2", "1", "0"], ["1", "3", "x"], ["0", "x", "2/5*x^2 + 1"]]), &chart, "g")?;
    let b = PolyMat::parse(&rows(&[["0", "1/2", "0"], ["-1/2", "0", "0"], ["0", "0", "0"]]), &chart, "b")?;
    let metric = GenParaMetric::new(g, b)?;
    for duality in [vec![0], vec![0, 1]] {
        let explicit = para_buscher(&metric, &duality)?;
        let routed = para_buscher_h_route(&metric, &duality)?;
        println!("duality {duality:?}: routes agree = {}", explicit == routed);
        println!("  g₂₊ =\n{}", explicit.g_plus().render(&chart));
        println!("  b₂₊ =\n{}", explicit.b_plus().render(&chart));
    }
    Ok(())
}

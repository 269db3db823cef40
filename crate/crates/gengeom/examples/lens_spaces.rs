//! T-duality of lens spaces: circle bundles of degree `m` with flux `k`
//! against degree `n`. The dual exists exactly when `n = k` and swaps the
//! degree with the flux; the Hopf fibration is dual to `S² × S¹` with one
//! unit of flux and `L(1,1)` is self-dual.
//!
//! Run with `cargo run --example lens_spaces`.

use gengeom::workbench::{execute, lens_document, Command, RunOptions};
use gengeom::Result;

fn main() -> Result<()> {
    for (m, k, n) in [(1, 0, 0), (1, 1, 1), (2, 3, 3), (1, 2, 3)] {
        let report = execute(&lens_document(m, k, n), Command::Tdualize, &RunOptions::default())?;
        println!("lens (m, k, n) = ({m}, {k}, {n}): {}", if report.passed() { "dual found" } else { "no dual" });
        for v in report.verdicts.iter().filter(|v| !v.passed) {
            println!("  FAIL {}: {}", v.check, v.residuals.join("; "));
        }
        for key in ["K1.H", "K2.H", "dual.g"] {
            if let Some(v) = report.outputs.get(key) {
                println!("  {key} = {v}");
            }
        }
    }
    Ok(())
}

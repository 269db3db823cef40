//! The doubled Heisenberg nilmanifold: fluxes of the left-invariant frame,
//! the admissible duality direction, the swapped frame with its `H`-flux,
//! and the full pipeline to the flat three-torus.
//!
//! Run with `cargo run --example heisenberg [m]`.

use gengeom::workbench::{execute, heisenberg_document, Command, RunOptions};
use gengeom::Result;

fn main() -> Result<()> {
    let m: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let doc = heisenberg_document(m);
    let para = execute(&doc, Command::ParaCheck, &RunOptions::default())?;
    print!("{}", para.render_text());
    println!();
    let dual = execute(&doc, Command::Tdualize, &RunOptions::default())?;
    print!("{}", dual.render_text());
    Ok(())
}

//! Problem and report documents: emit a packaged example as JSON, read it
//! back, run it and round-trip the report.
//!
//! Run with `cargo run --example documents`.

use gengeom::workbench::{execute_document, heisenberg_document, ProblemDocument, ReportDocument, RunOptions};
use gengeom::Result;

fn main() -> Result<()> {
    let json = heisenberg_document(2).to_json();
    println!("{json}");
    let doc = ProblemDocument::from_json(&json)?;
    let report = execute_document(&doc, &RunOptions { seed: Some(3), ..RunOptions::default() })?;
    let back = ReportDocument::from_json(&report.to_json())?;
    println!("report round-trips: {}", back == report);
    print!("{}", report.render_text());
    Ok(())
}

//! Reduction of the `H`-twisted algebroid along a frame-generated foliation:
//! the reducibility test, the reduced flux and basic sections.
//!
//! Run with `cargo run --example foliated_reduction`.

use gengeom::courant::Section;
use gengeom::reduction::{basic_section_check, project_section, reduce_h, reducibility_check};
use gengeom::workbench::lens_document;
use gengeom::Result;

fn main() -> Result<()> {
    let doc = lens_document(1, 2, 2);
    let e = doc.algebroid()?;
    for name in ["K1", "K2"] {
        let k = doc.subbundle(name)?;
        let r = reducibility_check(&e, &k)?;
        println!("{name}: reducible = {}", r.passed());
        let red = reduce_h(&e, &k)?;
        println!("  reduced H on {:?}: {}", red.chart().names(), red.h().render(red.chart()));
    }
    let k1 = doc.subbundle("K1")?;
    let chart = doc.chart()?;
    let s = Section::parse(&["1", "0", "y", "0"], &["0", "x", "0", "0"], &chart)?;
    if basic_section_check(&e, &k1, &s)? {
        let qc = k1.quotient_chart();
        let comps: Vec<String> = project_section(&k1, &s)?.iter().map(|p| p.to_string_with(qc)).collect();
        println!("basic section {} projects to quotient frame components {comps:?}", s.render(&chart));
    }
    Ok(())
}

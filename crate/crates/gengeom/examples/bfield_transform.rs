//! A `B`-field transform `e^B(X + α) = X + α + ι_X B` intertwines the
//! Dorfman bracket up to the defect `ι_Y ι_X dB`; closed `B` fields are
//! symmetries.
//!
//! Run with `cargo run --example bfield_transform`.

use gengeom::courant::{BFieldMap, Section, TwistedCourant};
use gengeom::{Chart, Form, Poly, Result};

fn main() -> Result<()> {
    let chart = Chart::new(&["x", "y", "z"])?;
    let e = TwistedCourant::standard(chart.clone());
    let e1 = Section::parse(&["y", "0", "x*z"], &["0", "z", "1"], &chart)?;
    let e2 = Section::parse(&["1", "x^2", "0"], &["y", "0", "0"], &chart)?;
    for b_coeff in ["x*z", "3"] {
        let b = Form::from_terms(3, 2, vec![(vec![0, 1], Poly::parse(b_coeff, &chart)?)]);
        let map = BFieldMap::new(b.clone())?;
        let defect = map.bracket_defect(&e, &e1, &e2)?;
        let expected = map.expected_defect(&e1, &e2)?;
        println!("B = ({b_coeff}) dx^dy, dB = {}", b.d().render(&chart));
        println!("  defect          = {}", defect.render(&chart));
        println!("  ι_Y ι_X dB      = {}", expected.render(&chart));
        println!("  identity holds  : {}", defect == expected);
    }
    Ok(())
}

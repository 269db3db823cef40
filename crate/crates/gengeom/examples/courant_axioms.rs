//! Checks the Courant algebroid axioms of the `H`-twisted Dorfman bracket on
//! random polynomial sections, for `H = 0` and `H = k dx∧dy∧dz`.
//!
//! Run with `cargo run --example courant_axioms`.

use gengeom::courant::{Section, TwistedCourant};
use gengeom::sampling::RandomSource;
use gengeom::{Chart, Form, Poly, Result};

fn main() -> Result<()> {
    let chart = Chart::new(&["x", "y", "z"])?;
    let mut rs = RandomSource::new(7).with_max_degree(2);
    let mut triples = Vec::new();
    let mut functions = Vec::new();
    for _ in 0..25 {
        let mut s = || Section::new(rs.vector_field(3), rs.form(3, 1));
        triples.push((s()?, s()?, s()?));
        functions.push(rs.poly(3));
    }
    for k in [0, 5] {
        let h = Form::from_terms(3, 3, vec![(vec![0, 1, 2], Poly::from_int(3, k))]);
        let e = TwistedCourant::new(chart.clone(), h)?;
        let report = e.axioms_check(&triples, &functions)?;
        println!("H = {} dx^dy^dz", k);
        for o in &report.outcomes {
            println!("  {:<28} evaluated {:>3}, nonzero residuals {}", o.axiom.name(), o.evaluated, o.nonzero);
        }
    }
    Ok(())
}

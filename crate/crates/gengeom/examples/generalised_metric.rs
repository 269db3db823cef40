//! A generalised metric `(g, b)`: its matrix `𝒢`, the involution `τ`, the
//! eigenbundles `V^±` and a sampled positivity certificate.
//!
//! Run with `cargo run --example generalised_metric`.

use gengeom::genmetric::GeneralisedMetric;
use gengeom::sampling::{SampleBox, SamplePlan};
use gengeom::{Chart, Frame, PolyMat, Result};

fn main() -> Result<()> {
    let chart = Chart::new(&["x", "y"])?;
    let rows = |r: &[&[&str]]| r.iter().map(|row| row.iter().map(|s| s.to_string()).collect()).collect::<Vec<Vec<String>>>();
    let g = PolyMat::parse(&rows(&[&["2", "x"], &["x", "1/2*x^2 + 1/2"]]), &chart, "g")?;
    let b = PolyMat::parse(&rows(&[&["0", "y"], &["-y", "0"]]), &chart, "b")?;
    let m = GeneralisedMetric::new(Frame::coordinate(&chart), g, b)?;
    println!("𝒢 =\n{}", m.gm_matrix().render(&chart));
    let tau = m.tau_matrix();
    println!("τ² = 1: {}", tau.mul(&tau) == PolyMat::identity(4, 2));
    let plan = SamplePlan::generate(2, 10, 1, &SampleBox::default());
    let cert = m.certify_positive(&plan);
    println!("positivity: {:?} at {} points, failures {:?}", cert.kind, cert.points_checked, cert.failures);
    let origin = [gengeom::rational::q(0), gengeom::rational::q(0)];
    println!("V+ at the origin:\n{}", m.vplus_at(&origin));
    println!("V- at the origin:\n{}", m.vminus_at(&origin));
    Ok(())
}

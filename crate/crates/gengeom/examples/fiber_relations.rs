//! Pointwise linear algebra of Courant relations: the relation `Q(K)` of a
//! reduction, its maximal isotropy, composition, and why `Q(K)` alone is
//! never a generalised isometry.
//!
//! Run with `cargo run --example fiber_relations`.

use gengeom::fiber::{compose, drop_indices, isometry_decomposition_check, qk_fiber, FiberSpace, FiberSubspace};
use gengeom::rational::q;
use gengeom::{QMat, Result};

fn graph_rows(h: &[[i64; 2]; 2]) -> Vec<Vec<gengeom::Q>> {
    (0..2).map(|i| (0..4).map(|j| if j < 2 { q((i == j) as i64) } else { q(h[i][j - 2]) }).collect()).collect()
}

fn main() -> Result<()> {
    // K = span{∂_y} in T⊕T* of a 2-dimensional fiber.
    let e = FiberSpace::single(2);
    let k = FiberSubspace::span(e.clone(), vec![vec![q(0), q(1), q(0), q(0)]])?;
    let natural = drop_indices(2, &[1]);
    let qk = qk_fiber(&k, &natural)?;
    println!("K = {k}");
    println!("Q(K) = {qk}  (dim {}, Dirac: {})", qk.dim(), qk.is_dirac());

    let back = qk.transpose()?;
    let c = compose(&back, &qk)?;
    println!("Q(K)ᵀ ∘ Q(K) has dim {} with kernel dim {}", c.composite.dim(), c.kernel.dim());

    let v1 = FiberSubspace::span(e, graph_rows(&[[2, 1], [-1, 3]]))?;
    let v2 = FiberSubspace::from_matrix(FiberSpace::single(1), &QMat::from_rows(2, vec![vec![q(1), q(5)]]))?;
    let d = isometry_decomposition_check(&qk, &v1, &v2)?;
    println!(
        "decomposition of Q(K): dim R∩𝒱⁺ = {}, dim R∩𝒱⁻ = {}, dim R = {} → isometry: {}",
        d.plus_dim,
        d.minus_dim,
        d.relation_dim,
        d.passed()
    );
    Ok(())
}

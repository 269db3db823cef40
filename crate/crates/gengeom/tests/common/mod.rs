//! Random configurations shared by the integration tests.

#![allow(dead_code)]

use gengeom::courant::TwistedCourant;
use gengeom::fiber::{qk_fiber, FiberSpace, FiberSubspace};
use gengeom::genmetric::{rows_at, GeneralisedMetric};
use gengeom::reduction::FoliationSubbundle;
use gengeom::sampling::RandomSource;
use gengeom::tduality::TDualityProblem;
use gengeom::{Chart, Form, Frame, Q};
use rand::Rng;

pub fn chart(n: usize) -> Chart {
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    Chart::new(&names).unwrap()
}

/// Two rank-`k` foliations (`0 < k < n`) of a flat `n`-dimensional chart, the second
/// shifted by a random constant `B`, with the flat metric on the first
/// quotient.
pub fn random_relation_problem(seed: u64) -> TDualityProblem {
    let mut rs = RandomSource::new(seed);
    let n = rs.rng().gen_range(2..=5);
    let k = rs.rng().gen_range(1..n);
    let c = chart(n);
    let f = Frame::coordinate(&c);
    let s1 = rs.subset(n, k);
    let s2 = rs.subset(n, k);
    let b = Form::from_antisymmetric(&rs.constant_antisymmetric(n, n)).unwrap();
    let k1 = FoliationSubbundle::new(c.clone(), f.clone(), s1.clone(), s1).unwrap();
    let k2 = FoliationSubbundle::new(c.clone(), f, s2.clone(), s2).unwrap().with_shift(b).unwrap();
    let qc = k1.quotient_chart().clone();
    let q = qc.dim();
    let metric = GeneralisedMetric::new(
        k1.quotient_frame().unwrap(),
        rs.constant_positive_definite(q, q),
        rs.constant_antisymmetric(q, q),
    )
    .unwrap();
    TDualityProblem::new(TwistedCourant::standard(c), k1, k2, metric, vec![]).unwrap()
}

/// `Q(K)` for a random shifted foliation of rank at least one, together with
/// random generalised metrics `V₁⁺` on `E` and `V₂⁺` on the quotient.
pub fn random_qk_config(seed: u64) -> (FiberSubspace, FiberSubspace, FiberSubspace) {
    let mut rs = RandomSource::new(seed);
    let n = rs.rng().gen_range(2..=5);
    let k = rs.rng().gen_range(1..n);
    let c = chart(n);
    let f = Frame::coordinate(&c);
    let s = rs.subset(n, k);
    let b = Form::from_antisymmetric(&rs.constant_antisymmetric(n, n)).unwrap();
    let kk = FoliationSubbundle::new(c.clone(), f.clone(), s.clone(), s).unwrap().with_shift(b).unwrap();
    let origin = vec![Q::from_integer(0.into()); n];
    let ksub = FiberSubspace::from_matrix(FiberSpace::single(n), &rows_at(&kk.generator_rows().unwrap(), &origin)).unwrap();
    let qk = qk_fiber(&ksub, &kk.natural_matrix().unwrap().eval(&origin)).unwrap();
    let g1 = GeneralisedMetric::new(f, rs.constant_positive_definite(n, n), rs.constant_antisymmetric(n, n)).unwrap();
    let q = n - k;
    let qf = kk.quotient_frame().unwrap();
    let g2 = GeneralisedMetric::new(qf, rs.constant_positive_definite(q, q), rs.constant_antisymmetric(q, q)).unwrap();
    let v1 = FiberSubspace::from_matrix(FiberSpace::single(n), &g1.vplus_at(&origin)).unwrap();
    let v2 = FiberSubspace::from_matrix(FiberSpace::single(q), &g2.vplus_at(&origin[..q])).unwrap();
    (qk, v1, v2)
}

//! Property-based checks of the algebraic identities the crate relies on.

mod common;

use common::{random_qk_config, random_relation_problem};
use gengeom::courant::{pairing, BFieldMap, Section, TwistedCourant};
use gengeom::fiber::{isometry_decomposition_check, FiberSpace, FiberSubspace};
use gengeom::genmetric::GeneralisedMetric;
use gengeom::para::{para_buscher, para_buscher_h_route, GenParaMetric};
use gengeom::sampling::{RandomSource, SampleBox, SamplePlan};
use gengeom::tduality::{b_decomposition_check, relate};
use gengeom::{Chart, Frame, PolyMat, QMat};
use proptest::prelude::*;
use rand::Rng;

fn chart3() -> Chart {
    Chart::new(&["x", "y", "z"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), degree in 0usize..3) {
        let mut rs = RandomSource::new(seed);
        let w = rs.form(3, degree);
        prop_assert!(w.d().d().is_zero());
    }

    #[test]
    fn cartan_magic_formula(seed in any::<u64>(), degree in 1usize..3) {
        let mut rs = RandomSource::new(seed);
        let x = rs.vector_field(3);
        let w = rs.form(3, degree);
        let rhs = &w.d().interior(&x).unwrap() + &w.interior(&x).unwrap().d();
        prop_assert_eq!(w.lie_derivative(&x).unwrap(), rhs);
    }

    #[test]
    fn pairing_is_symmetric(seed in any::<u64>()) {
        let mut rs = RandomSource::new(seed);
        let a = Section::new(rs.vector_field(3), rs.form(3, 1)).unwrap();
        let b = Section::new(rs.vector_field(3), rs.form(3, 1)).unwrap();
        prop_assert_eq!(pairing(&a, &b).unwrap(), pairing(&b, &a).unwrap());
    }

    #[test]
    fn closed_b_fields_are_symmetries(seed in any::<u64>()) {
        let mut rs = RandomSource::new(seed);
        let e = TwistedCourant::standard(chart3());
        let b = rs.form(3, 1).d();
        let map = BFieldMap::new(b).unwrap();
        let e1 = Section::new(rs.vector_field(3), rs.form(3, 1)).unwrap();
        let e2 = Section::new(rs.vector_field(3), rs.form(3, 1)).unwrap();
        prop_assert!(map.bracket_defect(&e, &e1, &e2).unwrap().is_zero());
    }

    #[test]
    fn tau_is_an_involution(seed in any::<u64>(), n in 1usize..4) {
        let mut rs = RandomSource::new(seed);
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let c = Chart::new(&names).unwrap();
        let m = GeneralisedMetric::new(Frame::coordinate(&c), rs.constant_positive_definite(n, n), rs.constant_antisymmetric(n, n)).unwrap();
        let t = m.tau_matrix();
        prop_assert_eq!(t.mul(&t), PolyMat::identity(2 * n, n));
    }

    #[test]
    fn perp_is_an_involution(seed in any::<u64>(), n in 1usize..4, k in 0usize..5) {
        let mut rs = RandomSource::new(seed);
        let space = FiberSpace::single(n);
        let rows = (0..k).map(|_| (0..2 * n).map(|_| rs.rational()).collect()).collect();
        let w = FiberSubspace::span(space, rows).unwrap();
        prop_assert_eq!(w.perp().perp(), w);
    }

    #[test]
    fn para_buscher_routes_agree_and_square_to_one(seed in any::<u64>(), n in 1usize..4) {
        let mut rs = RandomSource::new(seed);
        let g = GenParaMetric::new(rs.constant_positive_definite(n, 1), rs.constant_antisymmetric(n, 1)).unwrap();
        let size = rs.rng().gen_range(0..=n);
        let d = rs.subset(n, size);
        let once = para_buscher(&g, &d).unwrap();
        prop_assert_eq!(&once, &para_buscher_h_route(&g, &d).unwrap());
        prop_assert_eq!(para_buscher(&once, &d).unwrap(), g);
    }
}

/// Whenever the two inclusion conditions hold, the relation has the
/// predicted rank and is isotropic under the pairing of `E × Ē`.
#[test]
fn rank_law_on_random_configurations() {
    let mut successes = 0;
    for seed in 0..200u64 {
        let p = random_relation_problem(seed);
        let n = p.k1().frame().dim();
        let plan = SamplePlan::generate(n, 3, seed, &SampleBox::default());
        let bd = b_decomposition_check(&p, &plan).unwrap();
        if !(bd.condition_i && bd.condition_ii) {
            continue;
        }
        successes += 1;
        let r = relate(&p, &plan).unwrap();
        assert_eq!(r.relation_rank, 2 * n - 2 * p.k1().rank(), "seed {seed}");
        assert!(r.dirac && r.clean && r.composite_agrees, "seed {seed}");
        let q = n - p.k1().rank();
        let space = FiberSpace::product(q, q);
        for (a, b) in &r.generators {
            for (c, d) in &r.generators {
                let u: Vec<_> = a.iter().chain(b).cloned().collect();
                let v: Vec<_> = c.iter().chain(d).cloned().collect();
                assert_eq!(space.pairing(&u, &v), gengeom::rational::q(0), "seed {seed}");
            }
        }
    }
    assert!(successes >= 50, "only {successes} admissible configurations");
}

/// `Q(K)` on its own is never a generalised isometry.
#[test]
fn qk_is_never_an_isometry() {
    for seed in 0..40u64 {
        let (qk, v1, v2) = random_qk_config(seed);
        assert!(qk.is_dirac());
        assert!(!isometry_decomposition_check(&qk, &v1, &v2).unwrap().passed(), "seed {seed}");
    }
}

#[test]
fn fiber_graphs_are_dirac() {
    let mut rs = RandomSource::new(11);
    for n in 1..5 {
        let b = rs.constant_antisymmetric(n, 0).as_constant().unwrap();
        let graph = QMat::identity(n).hstack(&b);
        assert!(FiberSubspace::from_matrix(FiberSpace::single(n), &graph).unwrap().is_dirac());
    }
}

//! Seeded random generation of exact test data and sample-point plans.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::exterior::{increasing_tuples, Form, VectorField};
use crate::poly::Poly;
use crate::polymat::PolyMat;
use crate::rational::{format_rational, parse_rational, qf, Q};

/// Deterministic generator of random rationals, polynomials, fields and forms.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
    max_degree: u32,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_degree: 2,
        }
    }

    /// Caps the total degree of generated monomials.
    pub fn with_max_degree(mut self, max_degree: u32) -> Self {
        self.max_degree = max_degree;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A rational `p/q` with `p ∈ [-9, 9]` and `q ∈ [1, 9]`.
    pub fn rational(&mut self) -> Q {
        let p = self.rng.gen_range(-9..=9);
        let q = self.rng.gen_range(1..=9);
        qf(p, q)
    }

    /// A non-zero rational drawn like [`RandomSource::rational`].
    pub fn nonzero_rational(&mut self) -> Q {
        loop {
            let r = self.rational();
            if r != qf(0, 1) {
                return r;
            }
        }
    }

    /// A polynomial in which each monomial of degree at most the cap is
    /// present with probability one half.
    pub fn poly(&mut self, nvars: usize) -> Poly {
        let mut terms = Vec::new();
        for e in exponents_up_to(nvars, self.max_degree) {
            if self.rng.gen_bool(0.5) {
                terms.push((e, self.rational()));
            }
        }
        Poly::from_terms(nvars, terms)
    }

    pub fn vector_field(&mut self, nvars: usize) -> VectorField {
        VectorField::new((0..nvars).map(|_| self.poly(nvars)).collect())
    }

    pub fn form(&mut self, nvars: usize, degree: usize) -> Form {
        let terms: Vec<(Vec<usize>, Poly)> = increasing_tuples(nvars, degree).into_iter().map(|i| (i, self.poly(nvars))).collect();
        Form::from_terms(nvars, degree, terms)
    }

    /// A constant rational matrix with entries drawn like
    /// [`RandomSource::rational`].
    pub fn constant_matrix(&mut self, rows: usize, cols: usize, nvars: usize) -> PolyMat {
        PolyMat::from_fn(rows, cols, nvars, |_, _| Poly::constant(nvars, self.rational()))
    }

    /// A constant symmetric positive-definite matrix `Lᵀ L + I`.
    pub fn constant_positive_definite(&mut self, n: usize, nvars: usize) -> PolyMat {
        let l = self.constant_matrix(n, n, nvars);
        l.transpose().mul(&l).add(&PolyMat::identity(n, nvars))
    }

    /// A constant antisymmetric matrix.
    pub fn constant_antisymmetric(&mut self, n: usize, nvars: usize) -> PolyMat {
        self.constant_matrix(n, n, nvars).antisym_part()
    }

    /// A uniformly random subset of `0..n` of the given size.
    pub fn subset(&mut self, n: usize, size: usize) -> Vec<usize> {
        let mut all: Vec<usize> = (0..n).collect();
        for i in 0..size.min(n) {
            let j = self.rng.gen_range(i..n);
            all.swap(i, j);
        }
        let mut out = all[..size.min(n)].to_vec();
        out.sort_unstable();
        out
    }
}

/// All exponent vectors in `nvars` variables of total degree at most `d`.
pub fn exponents_up_to(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

/// A coordinate box `[lo, hi]^n` from which sample points are drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleBox {
    pub lo: Q,
    pub hi: Q,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox {
            lo: qf(-1, 1),
            hi: qf(1, 1),
        }
    }
}

impl SampleBox {
    pub fn new(lo: Q, hi: Q) -> Result<Self> {
        if lo >= hi {
            return Err(GeomError::Document(format!("empty sample box [{lo}, {hi}]")));
        }
        Ok(SampleBox { lo, hi })
    }

    /// Parses `"a,b"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| GeomError::parse("box", "expected `a,b`"))?;
        let lo = parse_rational(a.trim()).ok_or_else(|| GeomError::parse("box", format!("bad rational `{a}`")))?;
        let hi = parse_rational(b.trim()).ok_or_else(|| GeomError::parse("box", format!("bad rational `{b}`")))?;
        SampleBox::new(lo, hi)
    }
}

/// Distinct rational sample points together with the seed that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPlan", into = "RawPlan")]
pub struct SamplePlan {
    points: Vec<Vec<Q>>,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct RawPlan {
    seed: u64,
    points: Vec<Vec<String>>,
}

impl TryFrom<RawPlan> for SamplePlan {
    type Error = GeomError;
    fn try_from(raw: RawPlan) -> Result<Self> {
        let points = raw
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|s| parse_rational(s).ok_or_else(|| GeomError::parse("sample plan", format!("bad rational `{s}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SamplePlan::from_points(points, raw.seed)
    }
}

impl From<SamplePlan> for RawPlan {
    fn from(p: SamplePlan) -> Self {
        RawPlan {
            seed: p.seed,
            points: p.points.iter().map(|pt| pt.iter().map(format_rational).collect()).collect(),
        }
    }
}

impl SamplePlan {
    /// Draws `count` distinct points in `bx^nvars`; the origin is always the
    /// first point so that constant-coefficient data are certified there.
    pub fn generate(nvars: usize, count: usize, seed: u64, bx: &SampleBox) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<Vec<Q>> = Vec::with_capacity(count);
        let origin = vec![qf(0, 1); nvars];
        if count > 0 && bx.lo <= origin_coord() && origin_coord() <= bx.hi {
            points.push(origin);
        }
        let width = &bx.hi - &bx.lo;
        let mut attempts = 0usize;
        while points.len() < count && attempts < 100 * count + 100 {
            attempts += 1;
            let pt: Vec<Q> = (0..nvars)
                .map(|_| {
                    let d: i64 = rng.gen_range(1..=9);
                    let k: i64 = rng.gen_range(0..=d);
                    &bx.lo + &(&width * &qf(k, d))
                })
                .collect();
            if !points.contains(&pt) {
                points.push(pt);
            }
        }
        SamplePlan { points, seed }
    }

    pub fn from_points(points: Vec<Vec<Q>>, seed: u64) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(GeomError::Document("sample points must be pairwise distinct".into()));
            }
        }
        Ok(SamplePlan { points, seed })
    }

    pub fn points(&self) -> &[Vec<Q>] {
        &self.points
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn origin_coord() -> Q {
    qf(0, 1)
}

/// How a verdict was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    /// Exact polynomial identity; holds at every point.
    Symbolic,
    /// Exact checks at the points of a [`SamplePlan`] only.
    Sampled,
}

impl CertificateKind {
    /// `Symbolic` only if both inputs are.
    pub fn and(self, other: CertificateKind) -> CertificateKind {
        if self == CertificateKind::Symbolic && other == CertificateKind::Symbolic {
            CertificateKind::Symbolic
        } else {
            CertificateKind::Sampled
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        assert_eq!(a.poly(3), b.poly(3));
        assert_eq!(a.form(3, 2), b.form(3, 2));
    }

    #[test]
    fn degree_is_capped() {
        let mut r = RandomSource::new(1);
        for _ in 0..20 {
            assert!(r.poly(3).degree() <= 2);
        }
    }

    #[test]
    fn plan_points_distinct_and_in_box() {
        let bx = SampleBox::default();
        let plan = SamplePlan::generate(3, 25, 11, &bx);
        assert_eq!(plan.len(), 25);
        for (i, p) in plan.points().iter().enumerate() {
            assert!(!plan.points()[..i].contains(p));
            assert!(p.iter().all(|c| *c >= bx.lo && *c <= bx.hi));
        }
        let json = serde_json::to_string(&plan).unwrap();
        assert_eq!(serde_json::from_str::<SamplePlan>(&json).unwrap(), plan);
    }

    #[test]
    fn box_parsing() {
        assert_eq!(SampleBox::parse("-2,3/2").unwrap().hi, qf(3, 2));
        assert!(SampleBox::parse("1,1").is_err());
    }

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents_up_to(2, 2).len(), 6);
    }
}

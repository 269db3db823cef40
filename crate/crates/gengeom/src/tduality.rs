//! The T-duality pipeline on a doubled chart.
//!
//! Two foliations `K₁ = span{Z_s : s ∈ S₁}` and `K₂ = e^{−B} span{Z_s : s ∈ S₂}`
//! of one frame give the relation `R = Q(K₂) ∘ Q(K₁)ᵀ` between the two
//! quotients. This module builds `R` pointwise, checks the topological and
//! geometric conditions, and computes the dual background by the Buscher
//! block formulas.
//!
//! Frame indices split into four classes: `common = S₁ ∩ S₂`,
//! `v1 = S₂ \ S₁` (duality directions on the first quotient),
//! `v2 = S₁ \ S₂` (duality directions on the second quotient) and the
//! horizontal rest.

use num_traits::Zero;

use crate::courant::TwistedCourant;
use crate::error::{GeomError, Result};
use crate::exterior::{Form, VectorField};
use crate::fiber::{compose, isometry_decomposition_check, qk_fiber, FiberSpace, FiberSubspace};
use crate::genmetric::{lie_derivative_tensor, rows_at, GeneralisedMetric};
use crate::para::{para_buscher_h_route, GenParaMetric};
use crate::linalg::QMat;
use crate::poly::Poly;
use crate::polymat::PolyMat;
use crate::rational::{format_rational, Q};
use crate::reduction::{reduce_h, reducibility_check, FoliationSubbundle, ReducedAlgebroid, ReducibilityReport};
use crate::sampling::{CertificateKind, SamplePlan};

/// The four index classes of a pair of frame-generated foliations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexClasses {
    pub common: Vec<usize>,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub horizontal: Vec<usize>,
}

/// Input of the pipeline: the algebroid on the doubled chart, both
/// foliations, the metric on the first quotient and generators of its
/// isometry algebra along the duality directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDualityProblem {
    algebroid: TwistedCourant,
    k1: FoliationSubbundle,
    k2: FoliationSubbundle,
    metric1: GeneralisedMetric,
    iso1: Vec<VectorField>,
    classes: IndexClasses,
}

impl TDualityProblem {
    pub fn new(
        algebroid: TwistedCourant,
        k1: FoliationSubbundle,
        k2: FoliationSubbundle,
        metric1: GeneralisedMetric,
        iso1: Vec<VectorField>,
    ) -> Result<Self> {
        if k1.chart() != algebroid.chart() || k2.chart() != algebroid.chart() {
            return Err(GeomError::Precondition("both foliations must live on the doubled chart".into()));
        }
        if k1.frame() != k2.frame() {
            return Err(GeomError::Precondition("both foliations must be generated by the same frame".into()));
        }
        if k1.rank() != k2.rank() {
            return Err(GeomError::Precondition(format!("rk K₁ = {} differs from rk K₂ = {}", k1.rank(), k2.rank())));
        }
        if k1.shift().is_some() {
            return Err(GeomError::Precondition("the first foliation must be unshifted".into()));
        }
        let q1 = k1.quotient_chart().dim();
        if metric1.dim() != q1 {
            return Err(GeomError::ChartMismatch {
                expected: q1,
                found: metric1.dim(),
            });
        }
        if let Some(x) = iso1.iter().find(|x| x.dim() != q1) {
            return Err(GeomError::ChartMismatch {
                expected: q1,
                found: x.dim(),
            });
        }
        let n = k1.frame().dim();
        let (s1, s2) = (k1.span(), k2.span());
        let classes = IndexClasses {
            common: (0..n).filter(|i| s1.contains(i) && s2.contains(i)).collect(),
            v1: (0..n).filter(|i| s2.contains(i) && !s1.contains(i)).collect(),
            v2: (0..n).filter(|i| s1.contains(i) && !s2.contains(i)).collect(),
            horizontal: (0..n).filter(|i| !s1.contains(i) && !s2.contains(i)).collect(),
        };
        Ok(TDualityProblem {
            algebroid,
            k1,
            k2,
            metric1,
            iso1,
            classes,
        })
    }

    pub fn algebroid(&self) -> &TwistedCourant {
        &self.algebroid
    }

    pub fn k1(&self) -> &FoliationSubbundle {
        &self.k1
    }

    pub fn k2(&self) -> &FoliationSubbundle {
        &self.k2
    }

    pub fn metric1(&self) -> &GeneralisedMetric {
        &self.metric1
    }

    pub fn iso1(&self) -> &[VectorField] {
        &self.iso1
    }

    pub fn classes(&self) -> &IndexClasses {
        &self.classes
    }

    fn n(&self) -> usize {
        self.k1.frame().dim()
    }

    /// `ϖ₁^*(ḡ₁ + b̄₁)` as frame components `(g, b)` on the doubled chart.
    pub fn lifted_metric1(&self) -> Result<(PolyMat, PolyMat)> {
        let (g, b) = self.metric1.coordinate_tensors()?;
        let frame = self.k1.frame();
        Ok((
            frame.tensor_to_frame(&self.k1.pullback_tensor(&g)),
            frame.tensor_to_frame(&self.k1.pullback_tensor(&b)),
        ))
    }

    /// Whether all pointwise data are constant, so one point certifies all.
    fn is_constant(&self) -> Result<bool> {
        let constant_rows = |rows: Vec<Vec<Poly>>| rows.iter().flatten().all(Poly::is_constant);
        Ok(constant_rows(self.k1.generator_rows()?)
            && constant_rows(self.k2.generator_rows()?)
            && self.k1.natural_matrix()?.as_constant().is_some()
            && self.k2.natural_matrix()?.as_constant().is_some())
    }

    fn points(&self, plan: &SamplePlan) -> Result<(CertificateKind, Vec<Vec<Q>>)> {
        if self.is_constant()? {
            Ok((CertificateKind::Symbolic, vec![vec![Q::zero(); self.n()]]))
        } else if plan.is_empty() {
            Err(GeomError::Precondition("non-constant data need a non-empty sample plan".into()))
        } else {
            Ok((CertificateKind::Sampled, plan.points().to_vec()))
        }
    }
}

/// The relation and its ingredients at one point of the doubled chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFiber {
    pub k1: FiberSubspace,
    pub k2: FiberSubspace,
    /// `{(♮₁e, ♮₂e) : e ∈ K₁^⊥ ∩ K₂^⊥}`.
    pub relation: FiberSubspace,
    /// `dim(Q(K₂) ⋄ Q(K₁)ᵀ)`.
    pub diamond_dim: usize,
    /// Kernel of the composition projection, a subspace of the fiber of `E`.
    pub kernel: FiberSubspace,
    /// Whether the composite `Q(K₂) ∘ Q(K₁)ᵀ` equals the direct construction.
    pub composite_agrees: bool,
}

/// Builds the relation at one point.
pub fn relation_at(p: &TDualityProblem, point: &[Q]) -> Result<RelationFiber> {
    let n = p.n();
    let single = FiberSpace::single(n);
    let k1 = FiberSubspace::from_matrix(single.clone(), &rows_at(&p.k1.generator_rows()?, point).or_empty(2 * n))?;
    let k2 = FiberSubspace::from_matrix(single, &rows_at(&p.k2.generator_rows()?, point).or_empty(2 * n))?;
    let nat1 = p.k1.natural_matrix()?.eval(point);
    let nat2 = p.k2.natural_matrix()?.eval(point);
    let common = k1.perp().intersect(&k2.perp())?;
    let (q1, q2) = (nat1.rows() / 2, nat2.rows() / 2);
    let rows = common
        .basis()
        .row_vecs()
        .iter()
        .map(|e| {
            let mut v = nat1.mul_vec(e);
            v.extend(nat2.mul_vec(e));
            v
        })
        .collect();
    let relation = FiberSubspace::span(FiberSpace::product(q1, q2), rows)?;
    let qk1 = qk_fiber(&k1, &nat1)?;
    let qk2 = qk_fiber(&k2, &nat2)?;
    let comp = compose(&qk1.transpose()?, &qk2)?;
    Ok(RelationFiber {
        composite_agrees: comp.composite == relation,
        k1,
        k2,
        relation,
        diamond_dim: comp.diamond_dim,
        kernel: comp.kernel,
    })
}

trait OrEmpty {
    fn or_empty(self, cols: usize) -> QMat;
}

impl OrEmpty for QMat {
    fn or_empty(self, cols: usize) -> QMat {
        if self.rows() == 0 {
            QMat::zeros(0, cols)
        } else {
            self
        }
    }
}

/// Outcome of [`relate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub certificate: CertificateKind,
    pub points_checked: usize,
    /// `rk(K₁ ∩ K₂)`, constant over the checked points.
    pub intersection_rank: usize,
    pub relation_rank: usize,
    /// `rk(E) − 2 rk(K₁)`.
    pub expected_rank: usize,
    /// `R = R^⊥` at every checked point.
    pub dirac: bool,
    /// The composition kernel equals `K₁ ∩ K₂` and the diamond satisfies the
    /// rank law at every checked point.
    pub clean: bool,
    /// The composite and the direct construction agree at every point.
    pub composite_agrees: bool,
    /// Basis of `R` at the first checked point, as pairs of quotient frame
    /// components.
    pub generators: Vec<(Vec<Q>, Vec<Q>)>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.dirac && self.clean && self.composite_agrees && self.relation_rank == self.expected_rank
    }

    /// Renders the generators as `(a; b)` strings.
    pub fn render_generators(&self) -> Vec<String> {
        let fmt = |v: &[Q]| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
        self.generators.iter().map(|(a, b)| format!("({}; {})", fmt(a), fmt(b))).collect()
    }
}

/// Builds `R` over the sample plan (or once, symbolically, when all data are
/// constant) and certifies its rank and maximal isotropy.
pub fn relate(p: &TDualityProblem, plan: &SamplePlan) -> Result<RelationReport> {
    let (certificate, points) = p.points(plan)?;
    let n = p.n();
    let mut report: Option<RelationReport> = None;
    for pt in &points {
        let f = relation_at(p, pt)?;
        let inter = f.k1.intersect(&f.k2)?;
        let clean = f.kernel == inter && f.relation.dim() + f.kernel.dim() == f.diamond_dim;
        let dirac = f.relation.is_dirac();
        match report.as_mut() {
            None => {
                let q1 = f.relation.space().factors()[0].n;
                report = Some(RelationReport {
                    certificate,
                    points_checked: points.len(),
                    intersection_rank: inter.dim(),
                    relation_rank: f.relation.dim(),
                    expected_rank: 2 * n - 2 * p.k1.rank(),
                    dirac,
                    clean,
                    composite_agrees: f.composite_agrees,
                    generators: f
                        .relation
                        .basis()
                        .row_vecs()
                        .into_iter()
                        .map(|r| (r[..2 * q1].to_vec(), r[2 * q1..].to_vec()))
                        .collect(),
                });
            }
            Some(r) => {
                if inter.dim() != r.intersection_rank {
                    return Err(GeomError::NonConstantRank(format!(
                        "rk(K₁ ∩ K₂) jumps from {} to {}",
                        r.intersection_rank,
                        inter.dim()
                    )));
                }
                r.relation_rank = r.relation_rank.min(f.relation.dim());
                r.dirac &= dirac;
                r.clean &= clean;
                r.composite_agrees &= f.composite_agrees;
            }
        }
    }
    report.ok_or_else(|| GeomError::Precondition("no sample points".into()))
}

/// Outcome of [`b_decomposition_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BDecompositionReport {
    /// Named structural clauses on the frame components of `B`.
    pub clauses: Vec<(String, bool)>,
    /// `K₁ ∩ K₂^⊥ ⊆ K₂` at every checked point.
    pub condition_i: bool,
    /// `K₂ ∩ K₁^⊥ ⊆ K₁` at every checked point.
    pub condition_ii: bool,
}

impl BDecompositionReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|(_, ok)| *ok) && self.condition_i && self.condition_ii
    }
}

/// Checks that `B` has no legs along `K₁ ∩ K₂`, no vertical–horizontal
/// cross terms, and an invertible mixing block between the two sets of
/// duality directions; and checks both inclusion conditions fiberwise.
pub fn b_decomposition_check(p: &TDualityProblem, plan: &SamplePlan) -> Result<BDecompositionReport> {
    let bm = p.k2.shift_matrix()?;
    let c = &p.classes;
    let n = p.n();
    let all: Vec<usize> = (0..n).collect();
    let mixing = bm.select(&c.v2, &c.v1);
    let mixing_ok = mixing.det().as_constant().is_some_and(|d| !d.is_zero());
    let clauses = vec![
        ("B vanishes on K₁ ∩ K₂".to_string(), bm.select(&c.common, &all).is_zero()),
        ("no B between second-quotient duality and horizontal directions".to_string(), bm.select(&c.v2, &c.horizontal).is_zero()),
        ("no B between horizontal and first-quotient duality directions".to_string(), bm.select(&c.horizontal, &c.v1).is_zero()),
        ("mixing block is non-degenerate".to_string(), mixing_ok),
    ];
    let (_, points) = p.points(plan)?;
    let (mut ci, mut cii) = (true, true);
    for pt in &points {
        let f = relation_at(p, pt)?;
        ci &= f.k2.contains_subspace(&f.k1.intersect(&f.k2.perp())?);
        cii &= f.k1.contains_subspace(&f.k2.intersect(&f.k1.perp())?);
    }
    Ok(BDecompositionReport {
        clauses,
        condition_i: ci,
        condition_ii: cii,
    })
}

/// Outcome of [`invariance_checks`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InvarianceReport {
    /// Generators along which `ḡ₁ + b̄₁` is not invariant.
    pub killing_violations: Vec<String>,
    /// Whether brackets of generators stay in their constant span.
    pub closed: bool,
    /// Whether the generators span the duality directions at every point.
    pub spans_duality: bool,
    /// Generators whose horizontal lift is not tangent to the second foliation.
    pub lift_violations: Vec<String>,
    /// Lifted generators along which `£ B ≠ 0`.
    pub splitting_violations: Vec<String>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.killing_violations.is_empty()
            && self.closed
            && self.spans_duality
            && self.lift_violations.is_empty()
            && self.splitting_violations.is_empty()
    }
}

/// Flattens vector fields into rows of rational coefficients over a common
/// set of (component, monomial) columns.
fn flatten(fields: &[VectorField]) -> QMat {
    let mut keys: Vec<(usize, Vec<u32>)> = Vec::new();
    for x in fields {
        for (i, c) in x.components().iter().enumerate() {
            for (m, _) in c.terms() {
                let k = (i, m.exponents().to_vec());
                if !keys.contains(&k) {
                    keys.push(k);
                }
            }
        }
    }
    let rows = fields
        .iter()
        .map(|x| {
            keys.iter()
                .map(|(i, e)| {
                    x.component(*i)
                        .terms()
                        .find(|(m, _)| m.exponents() == e.as_slice())
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(Q::zero)
                })
                .collect()
        })
        .collect();
    QMat::from_rows(keys.len(), rows)
}

/// Checks the isometry generators: Killing for `ḡ₁ + b̄₁`, closed under
/// brackets, spanning the duality directions, and — lifted horizontally to
/// the doubled chart — tangent to `K₂` with `£ B = 0`.
pub fn invariance_checks(p: &TDualityProblem, plan: &SamplePlan) -> Result<InvarianceReport> {
    let (g, b) = p.metric1.coordinate_tensors()?;
    let mut report = InvarianceReport::default();
    let chart1 = p.k1.quotient_chart();
    let describe = |x: &VectorField| format!("[{}]", x.to_strings(chart1).join(", "));
    for x in &p.iso1 {
        if !lie_derivative_tensor(x, &g).is_zero() || !lie_derivative_tensor(x, &b).is_zero() {
            report.killing_violations.push(describe(x));
        }
    }
    // closure under brackets, up to constant linear combinations
    let mut closed = true;
    for (i, x) in p.iso1.iter().enumerate() {
        for y in &p.iso1[i + 1..] {
            let br = x.bracket(y)?;
            let mut all = p.iso1.clone();
            all.push(br);
            let m = flatten(&all);
            let span = m.select(&(0..p.iso1.len()).collect::<Vec<_>>(), &(0..m.cols()).collect::<Vec<_>>());
            closed &= span.rank() == m.rank();
        }
    }
    report.closed = closed;
    // the duality directions on the first quotient
    let qf1 = p.k1.quotient_frame()?;
    let t1 = p.k1.transverse_indices();
    let duality: Vec<&VectorField> = p.classes.v1.iter().map(|v| qf1.field(t1.iter().position(|t| t == v).expect("v1 ⊆ Q₁"))).collect();
    let q1 = chart1.dim();
    let pts: Vec<Vec<Q>> = if plan.is_empty() { vec![vec![Q::zero(); q1]] } else { plan.points().iter().map(|pt| p.k1.base_coords().iter().map(|&i| pt[i].clone()).collect()).collect() };
    let mut spans = true;
    for pt in &pts {
        let iso = QMat::from_rows(q1, p.iso1.iter().map(|x| x.eval(pt)).collect());
        let dual = QMat::from_rows(q1, duality.iter().map(|x| x.eval(pt)).collect());
        let both = iso.vstack(&dual);
        spans &= iso.rank() == dual.rank() && both.rank() == dual.rank();
    }
    report.spans_duality = spans;
    // horizontal lifts on the doubled chart
    let n = p.n();
    let bform = p.k2.shift_form();
    for x in &p.iso1 {
        let mut comps = vec![Poly::zero(n); n];
        for (i, &c) in p.k1.base_coords().iter().enumerate() {
            comps[c] = p.k1.pullback_function(x.component(i));
        }
        let lift = VectorField::new(comps);
        let fc = p.k2.frame().vector_components(&lift)?;
        if fc.iter().enumerate().any(|(i, c)| !p.k2.span().contains(&i) && !c.is_zero()) {
            report.lift_violations.push(describe(x));
        }
        if !bform.lie_derivative(&lift)?.is_zero() {
            report.splitting_violations.push(describe(x));
        }
    }
    Ok(report)
}

/// The dual background on the second quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualBackground {
    /// `ḡ₂` in quotient coordinates.
    pub g: PolyMat,
    /// `b̄₂` in quotient coordinates.
    pub b: PolyMat,
    /// `ḡ₂ + b̄₂` in the quotient frame.
    pub frame_h: PolyMat,
}

impl DualBackground {
    /// The dual as a generalised metric in quotient coordinates.
    pub fn metric(&self, k2: &FoliationSubbundle) -> Result<GeneralisedMetric> {
        GeneralisedMetric::new(crate::exterior::Frame::coordinate(k2.quotient_chart()), self.g.clone(), self.b.clone())
    }
}

/// Buscher block formulas. With `k = (g₁ + b₁)ᵀ` in frame components split
/// into duality (`v`) and horizontal (`h`) blocks, `M = B(v2, v1)` and
/// `P = (k_vv − B(v1, v1))⁻¹`:
///
/// ```text
/// k₂^{v2 v2} = M P Mᵀ − B(v2, v2)
/// k₂^{v2 h}  = M P k_vh
/// k₂^{h v2}  = −k_hv P Mᵀ
/// k₂^{h h}   = k_hh − k_hv P k_vh − B(h, h)
/// ```
///
/// and `h₂ = k₂ᵀ`. The result is descended to the second quotient.
pub fn dual_background(p: &TDualityProblem) -> Result<DualBackground> {
    let c = &p.classes;
    let n = p.n();
    let (g1, b1) = p.lifted_metric1()?;
    let k = g1.add(&b1).transpose();
    let bm = p.k2.shift_matrix()?;
    let (v1, v2, h) = (&c.v1, &c.v2, &c.horizontal);
    let m = bm.select(v2, v1);
    let p_inv = k
        .select(v1, v1)
        .sub(&bm.select(v1, v1))
        .inverse()
        .map_err(|_| GeomError::NotInvertible("the duality block of the metric is not invertible".into()))?;
    let k_vh = k.select(v1, h);
    let k_hv = k.select(h, v1);
    let blocks = [
        (v2, v2, m.mul(&p_inv).mul(&m.transpose()).sub(&bm.select(v2, v2))),
        (v2, h, m.mul(&p_inv).mul(&k_vh)),
        (h, v2, k_hv.mul(&p_inv).mul(&m.transpose()).neg()),
        (h, h, k.select(h, h).sub(&k_hv.mul(&p_inv).mul(&k_vh)).sub(&bm.select(h, h))),
    ];
    let mut k2 = PolyMat::zeros(n, n, n);
    for (rows, cols, blk) in &blocks {
        for (a, &i) in rows.iter().enumerate() {
            for (bb, &j) in cols.iter().enumerate() {
                k2[(i, j)] = blk[(a, bb)].clone();
            }
        }
    }
    let h2 = k2.transpose();
    let t2 = p.k2.transverse_indices();
    let frame_h = h2
        .select(&t2, &t2)
        .restrict(p.k2.base_coords())
        .ok_or_else(|| GeomError::Precondition("the dual metric depends on a fiber coordinate".into()))?;
    let qf2 = p.k2.quotient_frame()?;
    let coords = qf2.tensor_to_coordinates(&frame_h)?;
    Ok(DualBackground {
        g: coords.sym_part(),
        b: coords.antisym_part(),
        frame_h,
    })
}

/// The dual metric in quotient-2 frame components computed along the
/// para-Hermitian route: the `ℋ` matrix of the transverse metric is
/// permuted along the duality directions and read back.
///
/// The para-Hermitian swap identifies `Z̃^v` with the dual direction with
/// the fixed mixing sign `−1`; the result is carried over to the actual
/// shift by the frame change `T = diag(−M, I)` with `M = B(v₂, v₁)`.
/// Requires the shift to have no `v₁v₁`, `v₂v₂` or horizontal part.
pub fn para_route(p: &TDualityProblem) -> Result<PolyMat> {
    let c = &p.classes;
    let n = p.n();
    let bm = p.k2.shift_matrix()?;
    let (v1, v2, h) = (&c.v1, &c.v2, &c.horizontal);
    if !bm.select(v1, v1).is_zero() || !bm.select(v2, v2).is_zero() || !bm.select(h, h).is_zero() {
        return Err(GeomError::Precondition("the para route needs a purely mixing shift".into()));
    }
    let (g1, b1) = p.lifted_metric1()?;
    let q1 = p.k1.transverse_indices();
    let duality: Vec<usize> = v1.iter().map(|i| q1.iter().position(|j| j == i).expect("v₁ is transverse to K₁")).collect();
    let gp = GenParaMetric::new(g1.select(&q1, &q1), b1.select(&q1, &q1))?;
    let dual = para_buscher_h_route(&gp, &duality)?;
    let hp = dual.g_plus().add(dual.b_plus());
    let m = bm.select(v2, v1);
    let q2 = p.k2.transverse_indices();
    let mut t = PolyMat::zeros(q2.len(), q1.len(), n);
    for (row, j) in q2.iter().enumerate() {
        if let Some(a) = v2.iter().position(|v| v == j) {
            for (b, col) in duality.iter().enumerate() {
                t[(row, *col)] = -&m[(a, b)];
            }
        } else {
            let col = q1.iter().position(|i| i == j).expect("horizontal indices are shared");
            t[(row, col)] = Poly::one(n);
        }
    }
    t.mul(&hp)
        .mul(&t.transpose())
        .restrict(p.k2.base_coords())
        .ok_or_else(|| GeomError::Precondition("the dual metric depends on a fiber coordinate".into()))
}

/// Outcome of [`verify_geometric_tduality`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricCertificate {
    pub certificate: CertificateKind,
    pub points_checked: usize,
    /// Sample points (as rendered rationals) where the decomposition fails.
    pub failures: Vec<Vec<String>>,
}

impl GeometricCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.points_checked > 0
    }
}

/// `V⁺ = gr(h)` rows for frame components `h` on the given indices.
fn graph_rows(h: &QMat) -> QMat {
    let q = h.rows();
    QMat::identity(q).hstack(h)
}

/// Checks that `R` decomposes as `(R ∩ 𝒱⁺) ⊕ (R ∩ 𝒱⁻)` for
/// `𝒱^± = V₁^± × V₂^±` at every sample point, with `V₂⁺` built from the
/// proposed dual `(ḡ₂, b̄₂)` in quotient coordinates.
pub fn verify_geometric_tduality(p: &TDualityProblem, g2: &PolyMat, b2: &PolyMat, plan: &SamplePlan) -> Result<GeometricCertificate> {
    let frame = p.k2.frame();
    let (g1, b1) = p.lifted_metric1()?;
    let h1 = g1.add(&b1);
    let h2 = frame.tensor_to_frame(&p.k2.pullback_tensor(&g2.add(b2)));
    let (t1, t2) = (p.k1.transverse_indices(), p.k2.transverse_indices());
    let constant = p.is_constant()? && h1.as_constant().is_some() && h2.as_constant().is_some();
    let (kind, points) = if constant {
        (CertificateKind::Symbolic, vec![vec![Q::zero(); p.n()]])
    } else {
        (CertificateKind::Sampled, plan.points().to_vec())
    };
    let mut failures = Vec::new();
    for pt in &points {
        let r = relation_at(p, pt)?.relation;
        let v1 = FiberSubspace::from_matrix(FiberSpace::single(t1.len()), &graph_rows(&h1.select(&t1, &t1).eval(pt)))?;
        let v2 = FiberSubspace::from_matrix(FiberSpace::single(t2.len()), &graph_rows(&h2.select(&t2, &t2).eval(pt)))?;
        if !isometry_decomposition_check(&r, &v1, &v2)?.passed() {
            failures.push(pt.iter().map(format_rational).collect());
        }
    }
    Ok(GeometricCertificate {
        certificate: kind,
        points_checked: points.len(),
        failures,
    })
}

/// Pairs a doubled-chart section `[X, α]` (frame components) with every
/// generator of a foliation.
fn annihilated_by(k: &FoliationSubbundle, e: &[Poly]) -> Result<bool> {
    let n = e.len() / 2;
    for row in k.generator_rows()? {
        let mut s = Poly::zero(e[0].nvars());
        for i in 0..n {
            s += &(&e[i] * &row[n + i]);
            s += &(&e[n + i] * &row[i]);
        }
        if !s.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn restrict_all(v: &[Poly], keep: &[usize]) -> Result<Vec<Poly>> {
    v.iter()
        .map(|p| p.restrict(keep).ok_or_else(|| GeomError::Precondition("section is not invariant along the fibers".into())))
        .collect()
}

/// Transports a section of the first quotient (frame components in the
/// first quotient frame) to the second: lift to the unique element of
/// `K₁^⊥ ∩ K₂^⊥` with no component along `K₁ ∩ K₂`, then project by `♮₂`.
pub fn lift_project_sections(p: &TDualityProblem, e1: &[Poly]) -> Result<Vec<Poly>> {
    let n = p.n();
    let t1 = p.k1.transverse_indices();
    if e1.len() != 2 * t1.len() {
        return Err(GeomError::Shape("section has the wrong number of components".into()));
    }
    let c = &p.classes;
    let bm = p.k2.shift_matrix()?;
    let mut e = vec![Poly::zero(n); 2 * n];
    for (pos, &i) in t1.iter().enumerate() {
        e[i] = p.k1.pullback_function(&e1[pos]);
        e[n + i] = p.k1.pullback_function(&e1[t1.len() + pos]);
    }
    // α_{v1} = B(v1, ·) X fixes X_{v2}
    let rhs: Vec<Poly> = c
        .v1
        .iter()
        .map(|&r| {
            let mut s = e[n + r].clone();
            for i in (0..n).filter(|i| !c.v2.contains(i)) {
                s -= &(&bm[(r, i)] * &e[i]);
            }
            s
        })
        .collect();
    let xv2 = bm
        .select(&c.v1, &c.v2)
        .inverse()
        .map_err(|_| GeomError::NotInvertible("mixing block of B".into()))?
        .mul_vec(&rhs);
    for (a, &i) in c.v2.iter().enumerate() {
        e[i] = xv2[a].clone();
    }
    if !annihilated_by(&p.k1, &e)? || !annihilated_by(&p.k2, &e)? {
        return Err(GeomError::Precondition("lift does not lie in K₁^⊥ ∩ K₂^⊥".into()));
    }
    restrict_all(&p.k2.natural_matrix()?.mul_vec(&e), p.k2.base_coords())
}

/// The inverse transport, through `Rᵀ`.
pub fn project_back_sections(p: &TDualityProblem, e2: &[Poly]) -> Result<Vec<Poly>> {
    let n = p.n();
    let t2 = p.k2.transverse_indices();
    if e2.len() != 2 * t2.len() {
        return Err(GeomError::Shape("section has the wrong number of components".into()));
    }
    let c = &p.classes;
    let bm = p.k2.shift_matrix()?;
    let mut x = vec![Poly::zero(n); n];
    let mut beta = vec![Poly::zero(n); n];
    for (pos, &i) in t2.iter().enumerate() {
        x[i] = p.k2.pullback_function(&e2[pos]);
        beta[i] = p.k2.pullback_function(&e2[t2.len() + pos]);
    }
    // β_{v2} = Σ_i B(i, v2) X^i fixes X_{v1}
    let rhs: Vec<Poly> = c
        .v2
        .iter()
        .map(|&col| {
            let mut s = beta[col].clone();
            for i in (0..n).filter(|i| !c.v1.contains(i)) {
                s -= &(&bm[(i, col)] * &x[i]);
            }
            s
        })
        .collect();
    let xv1 = bm
        .select(&c.v1, &c.v2)
        .transpose()
        .inverse()
        .map_err(|_| GeomError::NotInvertible("mixing block of B".into()))?
        .mul_vec(&rhs);
    for (a, &i) in c.v1.iter().enumerate() {
        x[i] = xv1[a].clone();
    }
    let bx = bm.mul_vec(&x);
    let btx = bm.transpose().mul_vec(&x);
    let mut alpha = vec![Poly::zero(n); n];
    for i in 0..n {
        alpha[i] = if p.k2.span().contains(&i) {
            bx[i].clone()
        } else if p.k1.span().contains(&i) {
            Poly::zero(n)
        } else {
            &beta[i] - &btx[i]
        };
    }
    let mut e = x;
    e.extend(alpha);
    if !annihilated_by(&p.k1, &e)? || !annihilated_by(&p.k2, &e)? {
        return Err(GeomError::Precondition("lift does not lie in K₁^⊥ ∩ K₂^⊥".into()));
    }
    restrict_all(&p.k1.natural_matrix()?.mul_vec(&e), p.k1.base_coords())
}

/// Everything the pipeline establishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDualityReport {
    pub reducibility1: ReducibilityReport,
    pub reducibility2: ReducibilityReport,
    pub relation: RelationReport,
    pub b_decomposition: BDecompositionReport,
    pub invariance: InvarianceReport,
    pub reduced1: Option<ReducedAlgebroid>,
    pub reduced2: Option<ReducedAlgebroid>,
    /// Present only when every preceding verdict passed.
    pub dual: Option<DualBackground>,
    pub isometry: Option<GeometricCertificate>,
}

impl TDualityReport {
    pub fn passed(&self) -> bool {
        self.isometry.as_ref().is_some_and(GeometricCertificate::passed)
    }
}

/// Runs the whole pipeline.
pub fn run(p: &TDualityProblem, plan: &SamplePlan) -> Result<TDualityReport> {
    let reducibility1 = reducibility_check(&p.algebroid, &p.k1)?;
    let reducibility2 = reducibility_check(&p.algebroid, &p.k2)?;
    let relation = relate(p, plan)?;
    let b_decomposition = b_decomposition_check(p, plan)?;
    let invariance = invariance_checks(p, plan)?;
    let reduced1 = reducibility1.passed().then(|| reduce_h(&p.algebroid, &p.k1)).transpose()?;
    let reduced2 = reducibility2.passed().then(|| reduce_h(&p.algebroid, &p.k2)).transpose()?;
    let ready = reduced1.is_some() && reduced2.is_some() && relation.passed() && b_decomposition.passed() && invariance.passed();
    let (dual, isometry) = if ready {
        let dual = dual_background(p)?;
        let cert = verify_geometric_tduality(p, &dual.g, &dual.b, plan)?;
        (Some(dual), Some(cert))
    } else {
        (None, None)
    };
    Ok(TDualityReport {
        reducibility1,
        reducibility2,
        relation,
        b_decomposition,
        invariance,
        reduced1,
        reduced2,
        dual,
        isometry,
    })
}

/// Convenience: the reduced flux of the second quotient as a form.
pub fn dual_flux(p: &TDualityProblem) -> Result<Form> {
    Ok(reduce_h(&p.algebroid, &p.k2)?.quotient.h().clone())
}

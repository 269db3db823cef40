//! Generalised metrics `(g, b)`: the involution `τ`, the block matrix `𝒢`,
//! the eigenbundles `V^±`, classical isometries, and transverse
//! (degenerate) generalised metrics.
//!
//! Sections are handled through their components `[X^I, α_I]` relative to
//! the metric's frame, where `α_I = α(Z_I)`. In these components the pairing
//! is `⟨(X,α),(Y,β)⟩ = Σ X^I β_I + Y^I α_I`, and `ι_v b` has components
//! `bᵀ v = −b v`.

use num_traits::Zero;

use crate::courant::{CourantIso, Section};
use crate::error::{GeomError, Result};
use crate::exterior::{Form, Frame, VectorField};
use crate::linalg::QMat;
use crate::poly::Poly;
use crate::polymat::PolyMat;
use crate::rational::{is_positive, qf, Q};
use crate::sampling::{CertificateKind, SamplePlan};

/// Outcome of sample-point positivity certification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityCertificate {
    pub kind: CertificateKind,
    pub points_checked: usize,
    /// Indices into the sample plan at which a leading minor was not positive.
    pub failures: Vec<usize>,
}

impl PositivityCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.points_checked > 0
    }
}

/// Leading-principal-minor positivity of a symmetric matrix; exact at a
/// single point when the matrix is constant, otherwise at every plan point.
pub fn certify_positive(g: &PolyMat, plan: &SamplePlan) -> PositivityCertificate {
    let positive_at = |pt: &[Q]| g.leading_minors_at(pt).iter().all(is_positive);
    if g.as_constant().is_some() {
        let origin = vec![Q::zero(); g.nvars()];
        return PositivityCertificate {
            kind: CertificateKind::Symbolic,
            points_checked: 1,
            failures: if positive_at(&origin) { vec![] } else { vec![0] },
        };
    }
    let failures = plan.points().iter().enumerate().filter(|(_, p)| !positive_at(p)).map(|(i, _)| i).collect();
    PositivityCertificate {
        kind: CertificateKind::Sampled,
        points_checked: plan.len(),
        failures,
    }
}

/// A generalised metric given by `g` (symmetric, invertible over the
/// polynomial ring) and `b` (antisymmetric), in the components of a frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralisedMetric {
    frame: Frame,
    g: PolyMat,
    b: PolyMat,
    g_inv: PolyMat,
}

impl GeneralisedMetric {
    pub fn new(frame: Frame, g: PolyMat, b: PolyMat) -> Result<Self> {
        let n = frame.dim();
        if g.rows() != n || g.cols() != n || b.rows() != n || b.cols() != n || g.nvars() != n || b.nvars() != n {
            return Err(GeomError::Shape(format!("metric blocks must be {n}x{n} over the chart")));
        }
        if !g.is_symmetric() {
            return Err(GeomError::InvalidMetric("g is not symmetric".into()));
        }
        if !b.is_antisymmetric() {
            return Err(GeomError::InvalidMetric("b is not antisymmetric".into()));
        }
        let g_inv = g.inverse().map_err(|e| GeomError::InvalidMetric(format!("g has no polynomial inverse: {e}")))?;
        Ok(GeneralisedMetric { frame, g, b, g_inv })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn g(&self) -> &PolyMat {
        &self.g
    }

    pub fn b(&self) -> &PolyMat {
        &self.b
    }

    pub fn g_inv(&self) -> &PolyMat {
        &self.g_inv
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn certify_positive(&self, plan: &SamplePlan) -> PositivityCertificate {
        certify_positive(&self.g, plan)
    }

    /// `𝒢 = [[g − b g⁻¹ b, −b g⁻¹], [g⁻¹ b, g⁻¹]]`, the bilinear form
    /// `⟨·, τ ·⟩`. With `b` read as the matrix of `v ↦ ι_v b` (that is
    /// `bᵀ`) this is the familiar `[[g − b g⁻¹ b, b g⁻¹], [−g⁻¹ b, g⁻¹]]`.
    pub fn gm_matrix(&self) -> PolyMat {
        let (g, b, gi) = (&self.g, &self.b, &self.g_inv);
        let tl = g.sub(&b.mul(gi).mul(b));
        let tr = b.mul(gi).neg();
        let bl = gi.mul(b);
        block(&tl, &tr, &bl, gi)
    }

    /// The involution `τ(X, α) = (u, gX − b u)` with `u = g⁻¹(α + bX)`.
    pub fn tau_matrix(&self) -> PolyMat {
        let (g, b, gi) = (&self.g, &self.b, &self.g_inv);
        let tl = gi.mul(b);
        let br = b.mul(gi).neg();
        let bl = g.sub(&b.mul(gi).mul(b));
        block(&tl, gi, &bl, &br)
    }

    pub fn tau_apply(&self, e: &[Poly]) -> Vec<Poly> {
        self.tau_matrix().mul_vec(e)
    }

    /// Generators `v + ι_v(g + b)` of `V⁺`; the `I`-th has form part equal
    /// to row `I` of `g + b`.
    pub fn vplus_generators(&self) -> Vec<Vec<Poly>> {
        self.graph_generators(&self.g.add(&self.b))
    }

    /// Generators `v + ι_v(−g + b)` of `V⁻`.
    pub fn vminus_generators(&self) -> Vec<Vec<Poly>> {
        self.graph_generators(&self.g.neg().add(&self.b))
    }

    fn graph_generators(&self, m: &PolyMat) -> Vec<Vec<Poly>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut v: Vec<Poly> = (0..n).map(|j| if i == j { Poly::one(n) } else { Poly::zero(n) }).collect();
                v.extend((0..n).map(|j| m[(i, j)].clone()));
                v
            })
            .collect()
    }

    /// `V⁺` generators as sections in coordinates.
    pub fn vplus_sections(&self) -> Result<Vec<Section>> {
        self.vplus_generators().iter().map(|c| section_from_frame_components(&self.frame, c)).collect()
    }

    /// Splits `e = e⁺ + e⁻` with `τ e = e⁺ − e⁻`.
    pub fn decompose(&self, e: &[Poly]) -> (Vec<Poly>, Vec<Poly>) {
        let te = self.tau_apply(e);
        let half = qf(1, 2);
        let plus = e.iter().zip(&te).map(|(a, b)| (a + b).scale(&half)).collect();
        let minus = e.iter().zip(&te).map(|(a, b)| (a - b).scale(&half)).collect();
        (plus, minus)
    }

    /// `g` and `b` as coordinate tensors.
    pub fn coordinate_tensors(&self) -> Result<(PolyMat, PolyMat)> {
        Ok((self.frame.tensor_to_coordinates(&self.g)?, self.frame.tensor_to_coordinates(&self.b)?))
    }

    /// `V⁺` at a point, as rows of component vectors.
    pub fn vplus_at(&self, point: &[Q]) -> QMat {
        rows_at(&self.vplus_generators(), point)
    }

    /// `V⁻` at a point.
    pub fn vminus_at(&self, point: &[Q]) -> QMat {
        rows_at(&self.vminus_generators(), point)
    }
}

/// Assembles `[[a, b], [c, d]]`.
pub fn block(a: &PolyMat, b: &PolyMat, c: &PolyMat, d: &PolyMat) -> PolyMat {
    let (r1, c1) = (a.rows(), a.cols());
    PolyMat::from_fn(r1 + c.rows(), c1 + b.cols(), a.nvars(), |i, j| match (i < r1, j < c1) {
        (true, true) => a[(i, j)].clone(),
        (true, false) => b[(i, j - c1)].clone(),
        (false, true) => c[(i - r1, j)].clone(),
        (false, false) => d[(i - r1, j - c1)].clone(),
    })
}

/// Evaluates polynomial row vectors at a point.
pub fn rows_at(rows: &[Vec<Poly>], point: &[Q]) -> QMat {
    let cols = rows.first().map(Vec::len).unwrap_or(0);
    QMat::from_rows(cols, rows.iter().map(|r| r.iter().map(|p| p.eval(point)).collect()).collect())
}

/// `X + α` from frame components `[X^I, α_I]`.
pub fn section_from_frame_components(frame: &Frame, c: &[Poly]) -> Result<Section> {
    let n = frame.dim();
    let x = frame.vector_from_components(&c[..n]);
    let mut alpha = Form::zero(n, 1);
    for (i, a) in c[n..].iter().enumerate() {
        alpha = &alpha + &frame.coframe_form(i).mul_fn(a);
    }
    Section::new(x, alpha)
}

/// Frame components `[Θ^I(X), α(Z_I)]` of a section.
pub fn frame_components_of(frame: &Frame, e: &Section) -> Result<Vec<Poly>> {
    let mut out = frame.vector_components(e.vector())?;
    for z in frame.fields() {
        out.push(e.form().apply(&[z])?);
    }
    Ok(out)
}

/// Outcome of [`classical_isometry_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryReport {
    /// `φ*g₂ − g₁` in coordinates; zero when the metric condition holds.
    pub metric_residual: PolyMat,
    /// `φ*b₂ − (b₁ + B)` in coordinates.
    pub bfield_residual: PolyMat,
    /// Whether `τ₂ ∘ Φ = Φ ∘ τ₁` holds symbolically.
    pub tau_route: bool,
}

impl IsometryReport {
    pub fn pullback_route(&self) -> bool {
        self.metric_residual.is_zero() && self.bfield_residual.is_zero()
    }

    pub fn passed(&self) -> bool {
        self.pullback_route() && self.tau_route
    }

    /// Whether the two independent routes agree.
    pub fn routes_agree(&self) -> bool {
        self.pullback_route() == self.tau_route
    }
}

/// Decides whether `Φ = φ̄ ∘ e^B` maps `V₁⁺` onto `V₂⁺`, both through the
/// pullback identities `φ*g₂ = g₁`, `φ*b₂ = b₁ + B` and through
/// `τ₂ ∘ Φ = Φ ∘ τ₁`.
pub fn classical_isometry_check(iso: &CourantIso, g1: &GeneralisedMetric, g2: &GeneralisedMetric) -> Result<IsometryReport> {
    let phi = iso.phi();
    let (g1c, b1c) = g1.coordinate_tensors()?;
    let (g2c, b2c) = g2.coordinate_tensors()?;
    let bmat = iso.b().to_matrix()?;
    let metric_residual = phi.pullback_tensor(&g2c).sub(&g1c);
    let bfield_residual = phi.pullback_tensor(&b2c).sub(&b1c.add(&bmat));

    // τ route in coordinate components, as polynomials in source coordinates
    let n = phi.dim();
    let coord1 = GeneralisedMetric::new(Frame::coordinate(phi.source()), g1c, b1c)?;
    let coord2 = GeneralisedMetric::new(Frame::coordinate(phi.target()), g2c, b2c)?;
    let j = phi.jacobian().clone();
    let j_inv = phi.inverted().jacobian().compose(phi.forward());
    let j_inv_t = j_inv.transpose();
    let zero = PolyMat::zeros(n, n, n);
    // Φ(X, α) = (J X, J^{-T}(α − B X)) since ι_X B has components −B X
    let big_phi = block(&j, &zero, &j_inv_t.mul(&bmat).neg(), &j_inv_t);
    let tau1 = coord1.tau_matrix();
    let tau2 = coord2.tau_matrix().compose(phi.forward());
    let tau_route = tau2.mul(&big_phi) == big_phi.mul(&tau1);
    Ok(IsometryReport {
        metric_residual,
        bfield_residual,
        tau_route,
    })
}

/// Lie derivative of a coordinate `(0,2)` tensor:
/// `(£_X T)_ij = X^k ∂_k T_ij + T_kj ∂_i X^k + T_ik ∂_j X^k`.
pub fn lie_derivative_tensor(x: &VectorField, t: &PolyMat) -> PolyMat {
    let n = x.dim();
    PolyMat::from_fn(n, n, n, |i, j| {
        let mut acc = x.apply(&t[(i, j)]);
        for k in 0..n {
            let xk = x.component(k);
            acc += &(&t[(k, j)] * &xk.deriv(i));
            acc += &(&t[(i, k)] * &xk.deriv(j));
        }
        acc
    })
}

/// A degenerate generalised metric whose kernel is the frame-generated
/// foliation `K = span{Z_s : s ∈ S}`; `g` and `b` are frame components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransverseGeneralisedMetric {
    frame: Frame,
    kernel: Vec<usize>,
    g: PolyMat,
    b: PolyMat,
}

impl TransverseGeneralisedMetric {
    /// Validates shapes, symmetry, and that `ker g ⊇ K` with `b` vanishing
    /// on `K` as well.
    pub fn new(frame: Frame, kernel: Vec<usize>, g: PolyMat, b: PolyMat) -> Result<Self> {
        let n = frame.dim();
        if g.rows() != n || g.cols() != n || b.rows() != n || b.cols() != n {
            return Err(GeomError::Shape(format!("transverse metric blocks must be {n}x{n}")));
        }
        if !g.is_symmetric() || !b.is_antisymmetric() {
            return Err(GeomError::InvalidMetric("g must be symmetric and b antisymmetric".into()));
        }
        if kernel.iter().any(|&s| s >= n) {
            return Err(GeomError::InvalidSubbundle("kernel index out of range".into()));
        }
        for &s in &kernel {
            for j in 0..n {
                if !g[(s, j)].is_zero() || !b[(s, j)].is_zero() {
                    return Err(GeomError::InvalidMetric(format!(
                        "g and b must vanish on the kernel direction {}",
                        frame.label(s)
                    )));
                }
            }
        }
        Ok(TransverseGeneralisedMetric { frame, kernel, g, b })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn kernel(&self) -> &[usize] {
        &self.kernel
    }

    pub fn g(&self) -> &PolyMat {
        &self.g
    }

    pub fn b(&self) -> &PolyMat {
        &self.b
    }

    /// Frame indices transverse to `K`.
    pub fn transverse_indices(&self) -> Vec<usize> {
        (0..self.frame.dim()).filter(|i| !self.kernel.contains(i)).collect()
    }

    /// Positivity of `g` on the complement of `K`.
    pub fn certify_positive(&self, plan: &SamplePlan) -> PositivityCertificate {
        let t = self.transverse_indices();
        certify_positive(&self.g.select(&t, &t), plan)
    }

    /// `W = gr(g + b)` at a point, as rows of frame component vectors.
    pub fn w_at(&self, point: &[Q]) -> QMat {
        let n = self.frame.dim();
        let h = self.g.add(&self.b);
        let rows: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                let mut v: Vec<Poly> = (0..n).map(|j| if i == j { Poly::one(n) } else { Poly::zero(n) }).collect();
                v.extend((0..n).map(|j| h[(i, j)].clone()));
                v
            })
            .collect();
        rows_at(&rows, point)
    }
}

/// Outcome of [`transverse_check`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransverseReport {
    /// Human-readable descriptions of each violated condition.
    pub violations: Vec<String>,
}

impl TransverseReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `£_X g = £_X b = 0` and `ι_X H = 0` for every generator `X` of
/// the kernel foliation.
pub fn transverse_check(w: &TransverseGeneralisedMetric, h: &Form) -> Result<TransverseReport> {
    let frame = &w.frame;
    let g = frame.tensor_to_coordinates(&w.g)?;
    let b = frame.tensor_to_coordinates(&w.b)?;
    let bf = Form::from_antisymmetric(&b)?;
    let mut report = TransverseReport::default();
    for &s in &w.kernel {
        let x = frame.field(s);
        if !lie_derivative_tensor(x, &g).is_zero() {
            report.violations.push(format!("£ g ≠ 0 along {}", frame.label(s)));
        }
        if !bf.lie_derivative(x)?.is_zero() {
            report.violations.push(format!("£ b ≠ 0 along {}", frame.label(s)));
        }
        if !h.interior(x)?.is_zero() {
            report.violations.push(format!("ι H ≠ 0 along {}", frame.label(s)));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::courant::TwistedCourant;
    use crate::exterior::DiffeoMap;
    use crate::sampling::SampleBox;

    fn chart2() -> Chart {
        Chart::new(&["x", "y"]).unwrap()
    }

    fn cmat(rows: &[&[i64]], nvars: usize) -> PolyMat {
        PolyMat::from_fn(rows.len(), rows[0].len(), nvars, |i, j| Poly::from_int(nvars, rows[i][j]))
    }

    fn metric(g: &[&[i64]], b: &[&[i64]]) -> GeneralisedMetric {
        let c = chart2();
        GeneralisedMetric::new(Frame::coordinate(&c), cmat(g, 2), cmat(b, 2)).unwrap()
    }

    #[test]
    fn circle_matrix_inverts_radius() {
        let c = Chart::new(&["z"]).unwrap();
        let m = GeneralisedMetric::new(Frame::coordinate(&c), cmat(&[&[4]], 1), cmat(&[&[0]], 1)).unwrap();
        let gm = m.gm_matrix();
        assert_eq!(gm[(0, 0)], Poly::from_int(1, 4));
        assert_eq!(gm[(1, 1)], Poly::constant(1, qf(1, 4)));
        assert!(gm[(0, 1)].is_zero());
    }

    #[test]
    fn gm_matrix_is_pairing_composed_with_tau() {
        let m = metric(&[&[2, 1], &[1, 3]], &[&[0, 5], &[-5, 0]]);
        let n = 2;
        let eta = block(
            &PolyMat::zeros(n, n, 2),
            &PolyMat::identity(n, 2),
            &PolyMat::identity(n, 2),
            &PolyMat::zeros(n, n, 2),
        );
        assert_eq!(eta.mul(&m.tau_matrix()), m.gm_matrix());
        assert!(m.gm_matrix().is_symmetric());
    }

    #[test]
    fn tau_is_an_involution_with_graph_eigenbundles() {
        let m = metric(&[&[1, 0], &[0, 1]], &[&[0, 3], &[-3, 0]]);
        let t = m.tau_matrix();
        assert_eq!(t.mul(&t), PolyMat::identity(4, 2));
        for v in m.vplus_generators() {
            assert_eq!(m.tau_apply(&v), v);
        }
        for v in m.vminus_generators() {
            let neg: Vec<Poly> = v.iter().map(|p| -p).collect();
            assert_eq!(m.tau_apply(&v), neg);
        }
    }

    #[test]
    fn decomposition_reassembles() {
        let m = metric(&[&[2, 1], &[1, 1]], &[&[0, 1], &[-1, 0]]);
        let e: Vec<Poly> = [1, 2, 3, 4].iter().map(|&k| Poly::from_int(2, k)).collect();
        let (p, mi) = m.decompose(&e);
        let sum: Vec<Poly> = p.iter().zip(&mi).map(|(a, b)| a + b).collect();
        assert_eq!(sum, e);
        assert_eq!(m.tau_apply(&p), p);
    }

    #[test]
    fn singular_metric_refused() {
        let c = chart2();
        let r = GeneralisedMetric::new(Frame::coordinate(&c), cmat(&[&[1, 1], &[1, 1]], 2), cmat(&[&[0, 0], &[0, 0]], 2));
        assert!(matches!(r, Err(GeomError::InvalidMetric(_))));
    }

    #[test]
    fn positivity_certificates() {
        let plan = SamplePlan::generate(2, 20, 3, &SampleBox::default());
        let m = metric(&[&[2, 1], &[1, 1]], &[&[0, 0], &[0, 0]]);
        let cert = m.certify_positive(&plan);
        assert!(cert.passed());
        assert_eq!(cert.kind, CertificateKind::Symbolic);
        let c = chart2();
        let g = PolyMat::parse(&[vec!["2 + x".into(), "0".into()], vec!["0".into(), "1".into()]], &c, "g").unwrap();
        let cert = certify_positive(&g, &plan);
        assert_eq!(cert.kind, CertificateKind::Sampled);
        assert!(cert.passed());
    }

    #[test]
    fn classical_isometries() {
        let c = chart2();
        let e = TwistedCourant::standard(c.clone());
        let id = DiffeoMap::identity(&c);
        let g1 = metric(&[&[1, 0], &[0, 2]], &[&[0, 1], &[-1, 0]]);
        let iso = CourantIso::new(id.clone(), Form::zero(2, 2), e.clone(), e.clone()).unwrap();
        let r = classical_isometry_check(&iso, &g1, &g1).unwrap();
        assert!(r.passed());

        let bshift = Form::from_terms(2, 2, vec![(vec![0, 1], Poly::from_int(2, 3))]);
        let iso = CourantIso::new(id.clone(), bshift, e.clone(), e.clone()).unwrap();
        let g2 = metric(&[&[1, 0], &[0, 2]], &[&[0, 4], &[-4, 0]]);
        let r = classical_isometry_check(&iso, &g1, &g2).unwrap();
        assert!(r.passed(), "{r:?}");

        let g3 = metric(&[&[1, 0], &[0, 3]], &[&[0, 4], &[-4, 0]]);
        let r = classical_isometry_check(&iso, &g1, &g3).unwrap();
        assert!(!r.passed());
        assert!(r.routes_agree());
        assert_eq!(r.metric_residual[(1, 1)], Poly::from_int(2, 1));
    }

    #[test]
    fn isometry_under_shear() {
        // φ(x, y) = (x, y + x^2) pulling back a flat metric
        let c = chart2();
        let e = TwistedCourant::standard(c.clone());
        let phi = DiffeoMap::parse(c.clone(), c.clone(), &["x", "y + x^2"], &["x", "y - x^2"]).unwrap();
        let g2 = metric(&[&[1, 0], &[0, 1]], &[&[0, 0], &[0, 0]]);
        let g1c = phi.pullback_tensor(g2.g());
        let g1 = GeneralisedMetric::new(Frame::coordinate(&c), g1c, PolyMat::zeros(2, 2, 2)).unwrap();
        let iso = CourantIso::new(phi, Form::zero(2, 2), e.clone(), e).unwrap();
        let r = classical_isometry_check(&iso, &g1, &g2).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn transverse_metric_checks() {
        let c = Chart::new(&["x", "y", "z"]).unwrap();
        let f = Frame::coordinate(&c);
        let g = PolyMat::parse(
            &[vec!["1".into(), "0".into(), "0".into()], vec!["0".into(), "1 + x^2".into(), "0".into()], vec!["0".into(), "0".into(), "0".into()]],
            &c,
            "g",
        )
        .unwrap();
        let w = TransverseGeneralisedMetric::new(f.clone(), vec![2], g, PolyMat::zeros(3, 3, 3)).unwrap();
        assert!(transverse_check(&w, &Form::zero(3, 3)).unwrap().passed());
        let bad = PolyMat::parse(
            &[vec!["1 + z".into(), "0".into(), "0".into()], vec!["0".into(), "1".into(), "0".into()], vec!["0".into(), "0".into(), "0".into()]],
            &c,
            "g",
        )
        .unwrap();
        let w = TransverseGeneralisedMetric::new(f, vec![2], bad, PolyMat::zeros(3, 3, 3)).unwrap();
        let r = transverse_check(&w, &Form::zero(3, 3)).unwrap();
        assert_eq!(r.violations.len(), 1);
    }
}

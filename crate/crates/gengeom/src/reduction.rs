//! Frame-adapted isotropic reduction.
//!
//! A [`FoliationSubbundle`] is `K = e^{−B}(span{Z_s : s ∈ S} ⊕ 0)` for a
//! subset `S` of a frame whose span is involutive and tangent to a declared
//! set of fiber coordinates. Reduction by `K` drops those coordinates: the
//! quotient chart is made of the remaining (base) coordinates, and basic
//! data descend by restriction.

use num_traits::Zero;

use crate::chart::Chart;
use crate::courant::{Section, TwistedCourant};
use crate::error::{GeomError, Result};
use crate::exterior::{Form, Frame, VectorField};
use crate::genmetric::{block, frame_components_of, TransverseGeneralisedMetric};
use crate::poly::Poly;
use crate::polymat::PolyMat;

/// An isotropic, involutive subbundle generated by frame fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoliationSubbundle {
    chart: Chart,
    frame: Frame,
    span: Vec<usize>,
    shift: Option<Form>,
    fiber: Vec<usize>,
    base: Vec<usize>,
    quotient_chart: Chart,
}

impl FoliationSubbundle {
    /// Validates involutivity of the span, that its fields are tangent to
    /// exactly the fiber coordinates, and that they are independent there.
    pub fn new(chart: Chart, frame: Frame, span: Vec<usize>, fiber: Vec<usize>) -> Result<Self> {
        let n = chart.dim();
        if frame.dim() != n {
            return Err(GeomError::ChartMismatch {
                expected: n,
                found: frame.dim(),
            });
        }
        let distinct = |v: &[usize]| v.iter().enumerate().all(|(i, a)| !v[..i].contains(a));
        if span.iter().any(|&s| s >= n) || !distinct(&span) {
            return Err(GeomError::InvalidSubbundle("span indices must be distinct frame positions".into()));
        }
        if fiber.iter().any(|&s| s >= n) || !distinct(&fiber) {
            return Err(GeomError::InvalidSubbundle("fiber coordinates must be distinct chart positions".into()));
        }
        if span.len() != fiber.len() {
            return Err(GeomError::InvalidSubbundle(format!(
                "rank {} differs from the number of fiber coordinates {}",
                span.len(),
                fiber.len()
            )));
        }
        for &s in &span {
            for &t in &span {
                for k in (0..n).filter(|k| !span.contains(k)) {
                    let c = frame.structure_function(s, t, k);
                    if !c.is_zero() {
                        return Err(GeomError::NotInvolutive(format!(
                            "[{}, {}] has component {} along {}",
                            frame.label(s),
                            frame.label(t),
                            c.to_string_with(&chart),
                            frame.label(k)
                        )));
                    }
                }
            }
        }
        for &s in &span {
            let z = frame.field(s);
            for c in (0..n).filter(|c| !fiber.contains(c)) {
                if !z.component(c).is_zero() {
                    return Err(GeomError::InvalidSubbundle(format!(
                        "{} is not tangent to the fibers: component along {}",
                        frame.label(s),
                        chart.name(c)
                    )));
                }
            }
        }
        let block = PolyMat::from_fn(span.len(), fiber.len(), n, |i, j| frame.field(span[i]).component(fiber[j]).clone());
        match block.det().as_constant() {
            Some(d) if !d.is_zero() => {}
            _ => {
                return Err(GeomError::InvalidSubbundle(
                    "the span does not fill the fiber directions with constant rank".into(),
                ))
            }
        }
        let base: Vec<usize> = (0..n).filter(|c| !fiber.contains(c)).collect();
        let quotient_chart = chart.sub_chart(&base)?;
        Ok(FoliationSubbundle {
            chart,
            frame,
            span,
            shift: None,
            fiber,
            base,
            quotient_chart,
        })
    }

    /// Name-based constructor.
    pub fn from_names<S: AsRef<str>>(chart: Chart, frame: Frame, span: &[S], fiber: &[S]) -> Result<Self> {
        let span = frame.indices_of(span)?;
        let fiber = chart.indices_of(fiber)?;
        FoliationSubbundle::new(chart, frame, span, fiber)
    }

    /// Replaces `K` by `e^{−B} K`.
    pub fn with_shift(mut self, b: Form) -> Result<Self> {
        if b.dim() != self.chart.dim() {
            return Err(GeomError::ChartMismatch {
                expected: self.chart.dim(),
                found: b.dim(),
            });
        }
        b.expect_degree(2)?;
        self.shift = if b.is_zero() { None } else { Some(b) };
        Ok(self)
    }

    /// Chooses the order and names of the quotient coordinates. `order`
    /// lists the base coordinates of the chart in the desired order.
    pub fn with_quotient<S: AsRef<str>, T: AsRef<str>>(mut self, order: &[S], names: &[T]) -> Result<Self> {
        let order = self.chart.indices_of(order)?;
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != self.base {
            return Err(GeomError::InvalidSubbundle("quotient order must list every base coordinate once".into()));
        }
        if names.len() != order.len() {
            return Err(GeomError::Shape("one quotient name per base coordinate".into()));
        }
        self.quotient_chart = Chart::new(names)?;
        self.base = order;
        Ok(self)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn span(&self) -> &[usize] {
        &self.span
    }

    pub fn rank(&self) -> usize {
        self.span.len()
    }

    pub fn shift(&self) -> Option<&Form> {
        self.shift.as_ref()
    }

    pub fn fiber_coords(&self) -> &[usize] {
        &self.fiber
    }

    /// Chart positions of the quotient coordinates, in quotient order.
    pub fn base_coords(&self) -> &[usize] {
        &self.base
    }

    pub fn quotient_chart(&self) -> &Chart {
        &self.quotient_chart
    }

    /// Frame positions complementary to the span.
    pub fn transverse_indices(&self) -> Vec<usize> {
        (0..self.frame.dim()).filter(|i| !self.span.contains(i)).collect()
    }

    /// The shift two-form, or zero.
    pub fn shift_form(&self) -> Form {
        self.shift.clone().unwrap_or_else(|| Form::zero(self.chart.dim(), 2))
    }

    /// Frame components `B(Z_I, Z_J)` of the shift.
    pub fn shift_matrix(&self) -> Result<PolyMat> {
        self.frame.two_form_matrix(&self.shift_form())
    }

    /// The generators `e^{−B} Z_s`.
    pub fn generators(&self) -> Result<Vec<Section>> {
        let b = self.shift_form();
        self.span
            .iter()
            .map(|&s| {
                let z = self.frame.field(s).clone();
                let form = -&b.interior(&z)?;
                Section::new(z, form)
            })
            .collect()
    }

    /// Frame components `[X^I, α_I]` of the generators.
    pub fn generator_rows(&self) -> Result<Vec<Vec<Poly>>> {
        let n = self.frame.dim();
        let bm = self.shift_matrix()?;
        Ok(self
            .span
            .iter()
            .map(|&s| {
                let mut row: Vec<Poly> = (0..n).map(|j| if j == s { Poly::one(n) } else { Poly::zero(n) }).collect();
                row.extend((0..n).map(|j| -&bm[(s, j)]));
                row
            })
            .collect())
    }

    /// `e^{B}` on frame components: `[X, α] ↦ [X, α + ι_X B]`.
    pub fn untwist_matrix(&self) -> Result<PolyMat> {
        let n = self.frame.dim();
        let bm = self.shift_matrix()?;
        Ok(block(
            &PolyMat::identity(n, n),
            &PolyMat::zeros(n, n, n),
            &bm.transpose(),
            &PolyMat::identity(n, n),
        ))
    }

    /// The projection `♮: K^⊥ → E_quotient` in frame components: untwist
    /// by `e^{B}` and drop the span indices.
    pub fn natural_matrix(&self) -> Result<PolyMat> {
        let n = self.frame.dim();
        let t = self.transverse_indices();
        let q = t.len();
        let drop = PolyMat::from_fn(2 * q, 2 * n, n, |i, j| {
            let hit = if i < q { j == t[i] } else { j == n + t[i - q] };
            if hit {
                Poly::one(n)
            } else {
                Poly::zero(n)
            }
        });
        Ok(drop.mul(&self.untwist_matrix()?))
    }

    /// `H − dB`: the flux seen by the unshifted span.
    pub fn effective_flux(&self, h: &Form) -> Form {
        h - &self.shift_form().d()
    }

    /// Whether a section lies in `K`.
    pub fn contains(&self, e: &Section) -> Result<bool> {
        let b = self.shift_form();
        let untwisted = Section::new(e.vector().clone(), e.form() + &b.interior(e.vector())?)?;
        if !untwisted.form().is_zero() {
            return Ok(false);
        }
        let c = self.frame.vector_components(untwisted.vector())?;
        Ok(c.iter().enumerate().all(|(i, p)| self.span.contains(&i) || p.is_zero()))
    }

    /// The quotient frame: the transverse frame fields restricted to the
    /// base coordinates. Fails if they depend on fiber coordinates.
    pub fn quotient_frame(&self) -> Result<Frame> {
        let t = self.transverse_indices();
        let fields = t
            .iter()
            .map(|&i| {
                let z = self.frame.field(i);
                let comps = self
                    .base
                    .iter()
                    .map(|&c| {
                        z.component(c).restrict(&self.base).ok_or_else(|| {
                            GeomError::InvalidSubbundle(format!("{} depends on a fiber coordinate", self.frame.label(i)))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(VectorField::new(comps))
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = t.iter().map(|&i| self.frame.label(i).to_string()).collect();
        Frame::new(labels, fields)
    }

    /// Restricts a form on the chart to the quotient, if it only involves
    /// base coordinates.
    pub fn restrict_form(&self, w: &Form) -> Option<Form> {
        let mut terms = Vec::new();
        for (idx, c) in w.terms() {
            let mapped = idx
                .iter()
                .map(|i| self.base.iter().position(|b| b == i))
                .collect::<Option<Vec<usize>>>()?;
            terms.push((mapped, c.restrict(&self.base)?));
        }
        Some(Form::from_terms(self.base.len(), w.degree(), terms))
    }

    /// `ϖ^*` of a quotient form.
    pub fn pullback_form(&self, w: &Form) -> Form {
        let n = self.chart.dim();
        let terms: Vec<(Vec<usize>, Poly)> = w
            .terms()
            .map(|(idx, c)| (idx.iter().map(|&i| self.base[i]).collect(), c.embed(n, &self.base)))
            .collect();
        Form::from_terms(n, w.degree(), terms)
    }

    /// `ϖ^*` of a quotient function.
    pub fn pullback_function(&self, f: &Poly) -> Poly {
        f.embed(self.chart.dim(), &self.base)
    }

    /// `ϖ^*` of a quotient coordinate tensor.
    pub fn pullback_tensor(&self, m: &PolyMat) -> PolyMat {
        let n = self.chart.dim();
        PolyMat::from_fn(n, n, n, |i, j| {
            match (self.base.iter().position(|&b| b == i), self.base.iter().position(|&b| b == j)) {
                (Some(a), Some(b)) => m[(a, b)].embed(n, &self.base),
                _ => Poly::zero(n),
            }
        })
    }

    /// `σ(ρ(K)) ⊆ K` for the splitting induced by the frame and the shift.
    pub fn adapted_splitting_check(&self) -> Result<bool> {
        let b = self.shift_form();
        for k in self.generators()? {
            let lifted = Section::new(k.vector().clone(), -&b.interior(k.vector())?)?;
            if !self.contains(&lifted)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Outcome of [`reducibility_check`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReducibilityReport {
    /// `(generator label, ι_Z(H − dB))` for every generator where it is nonzero.
    pub interior_violations: Vec<(String, String)>,
    /// Frame components of `H − dB` that depend on a fiber coordinate.
    pub fiber_dependence: Vec<String>,
}

impl ReducibilityReport {
    pub fn passed(&self) -> bool {
        self.interior_violations.is_empty() && self.fiber_dependence.is_empty()
    }
}

/// Whether the flux descends: `ι_Z(H − dB) = 0` for every generator and the
/// frame components of `H − dB` are independent of the fiber coordinates.
pub fn reducibility_check(e: &TwistedCourant, k: &FoliationSubbundle) -> Result<ReducibilityReport> {
    if e.chart() != k.chart() {
        return Err(GeomError::Precondition("algebroid and subbundle live on different charts".into()));
    }
    let heff = k.effective_flux(e.h());
    let mut report = ReducibilityReport::default();
    for &s in k.span() {
        let i = heff.interior(k.frame().field(s))?;
        if !i.is_zero() {
            report.interior_violations.push((k.frame().label(s).to_string(), i.render(k.chart())));
        }
    }
    let comps = k.frame().form_components(&heff)?;
    for (idx, c) in comps.terms() {
        if k.fiber_coords().iter().any(|&f| c.depends_on(f)) {
            let labels: Vec<&str> = idx.iter().map(|&i| k.frame().label(i)).collect();
            report.fiber_dependence.push(format!("({}) = {}", labels.join(","), c.to_string_with(k.chart())));
        }
    }
    Ok(report)
}

/// The reduced exact Courant algebroid on the quotient chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedAlgebroid {
    pub quotient: TwistedCourant,
}

impl ReducedAlgebroid {
    pub fn chart(&self) -> &Chart {
        self.quotient.chart()
    }

    pub fn h(&self) -> &Form {
        self.quotient.h()
    }
}

/// Reduces the flux: `H̄` with `ϖ^* H̄ = H − dB` and `dH̄ = 0`, both verified.
pub fn reduce_h(e: &TwistedCourant, k: &FoliationSubbundle) -> Result<ReducedAlgebroid> {
    let report = reducibility_check(e, k)?;
    if !report.passed() {
        return Err(GeomError::Precondition(format!(
            "flux is not basic: {:?} {:?}",
            report.interior_violations, report.fiber_dependence
        )));
    }
    let heff = k.effective_flux(e.h());
    let hbar = k
        .restrict_form(&heff)
        .ok_or_else(|| GeomError::Precondition("flux has legs or dependence along the fibers".into()))?;
    if k.pullback_form(&hbar) != heff {
        return Err(GeomError::Precondition("pullback of the reduced flux differs from the flux".into()));
    }
    let quotient = TwistedCourant::new(k.quotient_chart().clone(), hbar)?;
    Ok(ReducedAlgebroid { quotient })
}

/// Reduces a transverse generalised metric whose kernel is the span of `K`
/// to coordinate tensors `(ḡ, b̄)` on the quotient chart, verifying that
/// their pullbacks reproduce the input.
pub fn reduce_metric(w: &TransverseGeneralisedMetric, k: &FoliationSubbundle) -> Result<(PolyMat, PolyMat)> {
    if w.frame() != k.frame() || {
        let mut a = w.kernel().to_vec();
        let mut b = k.span().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a != b
    } {
        return Err(GeomError::Precondition("metric kernel and subbundle differ".into()));
    }
    if k.shift().is_some() {
        return Err(GeomError::Precondition("metric reduction needs an unshifted subbundle".into()));
    }
    let frame = k.frame();
    let g = frame.tensor_to_coordinates(w.g())?;
    let b = frame.tensor_to_coordinates(w.b())?;
    let base = k.base_coords();
    let restrict = |m: &PolyMat, what: &str| -> Result<PolyMat> {
        let reduced = m
            .select(base, base)
            .restrict(base)
            .ok_or_else(|| GeomError::Precondition(format!("{what} depends on a fiber coordinate")))?;
        if k.pullback_tensor(&reduced) != *m {
            return Err(GeomError::Precondition(format!("{what} has legs along the fibers")));
        }
        Ok(reduced)
    };
    Ok((restrict(&g, "g")?, restrict(&b, "b")?))
}

/// The transverse generalised metric `(ϖ^*ḡ, ϖ^*b̄)` in frame components.
pub fn pullback_metric(k: &FoliationSubbundle, gbar: &PolyMat, bbar: &PolyMat) -> Result<TransverseGeneralisedMetric> {
    let frame = k.frame();
    let g = frame.tensor_to_frame(&k.pullback_tensor(gbar));
    let b = frame.tensor_to_frame(&k.pullback_tensor(bbar));
    TransverseGeneralisedMetric::new(frame.clone(), k.span().to_vec(), g, b)
}

/// `e` is basic: `e ∈ K^⊥` and `⟦k, e⟧ ∈ K` for every generator `k`.
pub fn basic_section_check(e_alg: &TwistedCourant, k: &FoliationSubbundle, e: &Section) -> Result<bool> {
    for g in k.generators()? {
        if !e_alg.pairing(&g, e)?.is_zero() {
            return Ok(false);
        }
        if !k.contains(&e_alg.dorfman(&g, e)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Frame components of a basic section's image under `♮`, in the quotient
/// frame.
pub fn project_section(k: &FoliationSubbundle, e: &Section) -> Result<Vec<Poly>> {
    let c = frame_components_of(k.frame(), e)?;
    let projected = k.natural_matrix()?.mul_vec(&c);
    projected
        .iter()
        .map(|p| {
            p.restrict(k.base_coords())
                .ok_or_else(|| GeomError::Precondition("section is not basic: depends on a fiber coordinate".into()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lens_chart() -> Chart {
        Chart::new(&["x", "y", "z", "zt"]).unwrap()
    }

    fn lens_frame(c: &Chart, m: i64, n: i64) -> Frame {
        let labels = ["x", "y", "z", "zt"].iter().map(|s| s.to_string()).collect();
        let ys = [
            "0".to_string(),
            "1".to_string(),
            format!("-{m}*x"),
            format!("-{n}*x"),
        ];
        Frame::parse(
            labels,
            &[
                vec!["1", "0", "0", "0"].into_iter().map(String::from).collect(),
                ys.to_vec(),
                vec!["0", "0", "1", "0"].into_iter().map(String::from).collect(),
                vec!["0", "0", "0", "1"].into_iter().map(String::from).collect(),
            ],
            c,
        )
        .unwrap()
    }

    fn kdxdydz(c: &Chart, k: i64) -> Form {
        Form::from_terms(c.dim(), 3, vec![(vec![0, 1, 2], Poly::from_int(c.dim(), k))])
    }

    #[test]
    fn lens_reducibility_along_each_circle() {
        let c = lens_chart();
        let f = lens_frame(&c, 1, 2);
        let e = TwistedCourant::new(c.clone(), kdxdydz(&c, 2)).unwrap();
        let k1 = FoliationSubbundle::from_names(c.clone(), f.clone(), &["zt"], &["zt"]).unwrap();
        assert!(reducibility_check(&e, &k1).unwrap().passed());
        let k = FoliationSubbundle::from_names(c.clone(), f, &["z"], &["z"]).unwrap();
        assert!(!reducibility_check(&e, &k).unwrap().passed());
        let h0 = TwistedCourant::standard(c);
        assert!(reducibility_check(&h0, &k).unwrap().passed());
    }

    #[test]
    fn reduced_flux_pulls_back() {
        let c = lens_chart();
        let e = TwistedCourant::new(c.clone(), kdxdydz(&c, 3)).unwrap();
        let k1 = FoliationSubbundle::from_names(c.clone(), lens_frame(&c, 1, 3), &["zt"], &["zt"]).unwrap();
        let r = reduce_h(&e, &k1).unwrap();
        assert_eq!(r.chart().names(), &["x", "y", "z"]);
        assert_eq!(r.h().component(&[0, 1, 2]), Poly::from_int(3, 3));
    }

    #[test]
    fn non_involutive_span_is_rejected() {
        let c = Chart::new(&["x", "y", "z"]).unwrap();
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let f = Frame::parse(labels, &[vec!["1", "0", "0"], vec!["0", "1", "x"], vec!["0", "0", "1"]], &c).unwrap();
        let err = FoliationSubbundle::new(c, f, vec![0, 1], vec![0, 1]).unwrap_err();
        assert!(matches!(err, GeomError::NotInvolutive(_)));
    }

    #[test]
    fn basic_sections() {
        let c = lens_chart();
        let f = lens_frame(&c, 0, 0);
        let e = TwistedCourant::standard(c.clone());
        let k = FoliationSubbundle::from_names(c.clone(), f, &["zt"], &["zt"]).unwrap();
        let projectable = Section::parse(&["y", "x", "0", "z"], &["0", "0", "0", "0"], &c).unwrap();
        let exact = Section::from_form(Form::function(Poly::parse("x*y + z^2", &c).unwrap()).d()).unwrap();
        assert!(basic_section_check(&e, &k, &(&projectable + &exact)).unwrap());
        assert!(basic_section_check(&e, &k, &k.generators().unwrap()[0]).unwrap());
        let bad = Section::parse(&["0", "0", "0", "0"], &["zt", "0", "0", "0"], &c).unwrap();
        assert!(!basic_section_check(&e, &k, &bad).unwrap());
        assert!(k.adapted_splitting_check().unwrap());
    }

    #[test]
    fn shifted_generators_are_isotropic_and_contained() {
        let c = lens_chart();
        let f = lens_frame(&c, 1, 1);
        let b = Form::from_terms(4, 2, vec![(vec![2, 3], Poly::from_int(4, -1))]);
        let k = FoliationSubbundle::from_names(c.clone(), f, &["z"], &["z"]).unwrap().with_shift(b).unwrap();
        let g = &k.generators().unwrap()[0];
        assert!(crate::courant::pairing(g, g).unwrap().is_zero());
        assert!(k.contains(g).unwrap());
        assert!(!k.contains(&Section::from_vector(VectorField::coord(4, 3))).unwrap());
        assert!(k.adapted_splitting_check().unwrap());
    }

    #[test]
    fn metric_round_trip() {
        let c = lens_chart();
        let f = lens_frame(&c, 1, 1);
        let k = FoliationSubbundle::from_names(c.clone(), f.clone(), &["zt"], &["zt"]).unwrap();
        let g = PolyMat::from_fn(3, 3, 3, |i, j| if i == j { Poly::from_int(3, 2) } else { Poly::zero(3) });
        let b = PolyMat::zeros(3, 3, 3);
        let w = pullback_metric(&k, &g, &b).unwrap();
        let (gb, bb) = reduce_metric(&w, &k).unwrap();
        assert_eq!(gb, g);
        assert_eq!(bb, b);
        // a metric depending on the fiber coordinate is rejected
        let mut bad = w.g().clone();
        bad[(0, 0)] = Poly::parse("2 + zt^2", &c).unwrap();
        let w2 = TransverseGeneralisedMetric::new(f, vec![3], bad, w.b().clone()).unwrap();
        assert!(reduce_metric(&w2, &k).is_err());
    }

    #[test]
    fn quotient_frame_restricts_transverse_fields() {
        let c = lens_chart();
        let k = FoliationSubbundle::from_names(c.clone(), lens_frame(&c, 1, 1), &["zt"], &["zt"]).unwrap();
        let qf = k.quotient_frame().unwrap();
        assert_eq!(qf.labels(), &["x", "y", "z"]);
        assert_eq!(qf.field(1).component(2), &Poly::parse("-x", k.quotient_chart()).unwrap());
    }
}

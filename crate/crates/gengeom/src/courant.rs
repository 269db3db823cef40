//! The `H`-twisted standard Courant algebroid `TM ⊕ T*M` on a chart,
//! `B`-field transformations and classical isomorphisms `φ̄ ∘ e^B`.

use std::ops::{Add, Neg, Sub};

use crate::chart::Chart;
use crate::error::{GeomError, Result};
use crate::exterior::{DiffeoMap, Form, VectorField};
use crate::poly::Poly;
use crate::rational::{qf, Q};

/// A section `X + α` of `TM ⊕ T*M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    vector: VectorField,
    form: Form,
}

impl Section {
    pub fn new(vector: VectorField, form: Form) -> Result<Self> {
        form.expect_degree(1)?;
        if vector.dim() != form.dim() {
            return Err(GeomError::ChartMismatch {
                expected: vector.dim(),
                found: form.dim(),
            });
        }
        Ok(Section { vector, form })
    }

    pub fn zero(dim: usize) -> Self {
        Section {
            vector: VectorField::zero(dim),
            form: Form::zero(dim, 1),
        }
    }

    pub fn from_vector(vector: VectorField) -> Self {
        let dim = vector.dim();
        Section {
            vector,
            form: Form::zero(dim, 1),
        }
    }

    pub fn from_form(form: Form) -> Result<Self> {
        Section::new(VectorField::zero(form.dim()), form)
    }

    /// Parses vector and form components given as polynomial strings.
    pub fn parse<S: AsRef<str>>(vector: &[S], form: &[S], chart: &Chart) -> Result<Self> {
        let v = VectorField::parse(vector, chart)?;
        chart.check_dim(form.len())?;
        let comps = form
            .iter()
            .map(|s| Poly::parse(s.as_ref(), chart))
            .collect::<Result<Vec<_>>>()?;
        Section::new(v, Form::one_form(comps))
    }

    pub fn vector(&self) -> &VectorField {
        &self.vector
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.vector.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero() && self.form.is_zero()
    }

    pub fn mul_fn(&self, f: &Poly) -> Section {
        Section {
            vector: self.vector.mul_fn(f),
            form: self.form.mul_fn(f),
        }
    }

    pub fn scale(&self, c: &Q) -> Section {
        Section {
            vector: self.vector.scale(c),
            form: self.form.scale(c),
        }
    }

    /// Coordinate components `[X^1..X^n, α_1..α_n]` as polynomials.
    pub fn components(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = self.vector.components().to_vec();
        out.extend(self.form.one_form_components().expect("section form is a one-form"));
        out
    }

    /// Builds a section from `[X, α]` coordinate components.
    pub fn from_components(c: &[Poly]) -> Self {
        let n = c.len() / 2;
        Section {
            vector: VectorField::new(c[..n].to_vec()),
            form: Form::one_form(c[n..].to_vec()),
        }
    }

    /// Values of `[X, α]` at a point.
    pub fn eval(&self, point: &[Q]) -> Vec<Q> {
        self.components().iter().map(|p| p.eval(point)).collect()
    }

    /// Human-readable rendering.
    pub fn render(&self, chart: &Chart) -> String {
        format!("({}) + {}", self.vector.to_strings(chart).join(", "), self.form.render(chart))
    }

    fn check_same(&self, other: &Section) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(GeomError::ChartMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }
}

impl<'a> Add<&'a Section> for &'a Section {
    type Output = Section;
    fn add(self, rhs: &Section) -> Section {
        Section {
            vector: &self.vector + &rhs.vector,
            form: &self.form + &rhs.form,
        }
    }
}

impl<'a> Sub<&'a Section> for &'a Section {
    type Output = Section;
    fn sub(self, rhs: &Section) -> Section {
        Section {
            vector: &self.vector - &rhs.vector,
            form: &self.form - &rhs.form,
        }
    }
}

impl<'a> Neg for &'a Section {
    type Output = Section;
    fn neg(self) -> Section {
        Section {
            vector: -&self.vector,
            form: -&self.form,
        }
    }
}

/// Symmetric pairing `⟨X+α, Y+β⟩ = ι_Y α + ι_X β`.
pub fn pairing(e1: &Section, e2: &Section) -> Result<Poly> {
    e1.check_same(e2)?;
    Ok(&e1.form.apply(&[&e2.vector])? + &e2.form.apply(&[&e1.vector])?)
}

/// `(TM ⊕ T*M, H)` with a closed three-form `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedCourant {
    chart: Chart,
    h: Form,
}

impl TwistedCourant {
    /// Validates degree, chart and `dH = 0`.
    pub fn new(chart: Chart, h: Form) -> Result<Self> {
        h.expect_degree(3)?;
        chart.check_dim(h.dim())?;
        let dh = h.d();
        if !dh.is_zero() {
            return Err(GeomError::NotClosed(dh.render(&chart)));
        }
        Ok(TwistedCourant { chart, h })
    }

    /// The untwisted algebroid.
    pub fn standard(chart: Chart) -> Self {
        let n = chart.dim();
        TwistedCourant {
            chart,
            h: Form::zero(n, 3),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn h(&self) -> &Form {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    fn check(&self, e: &Section) -> Result<()> {
        self.chart.check_dim(e.dim())
    }

    /// Dorfman bracket `[X,Y] + £_X β − ι_Y dα + ι_Y ι_X H`.
    pub fn dorfman(&self, e1: &Section, e2: &Section) -> Result<Section> {
        self.check(e1)?;
        self.check(e2)?;
        let (x, a) = (&e1.vector, &e1.form);
        let (y, b) = (&e2.vector, &e2.form);
        let vector = x.bracket(y)?;
        let mut form = b.lie_derivative(x)?;
        form = &form - &a.d().interior(y)?;
        form = &form + &self.h.interior(x)?.interior(y)?;
        Section::new(vector, form)
    }

    pub fn pairing(&self, e1: &Section, e2: &Section) -> Result<Poly> {
        self.check(e1)?;
        pairing(e1, e2)
    }

    /// Anchor `ρ(X + α) = X`.
    pub fn anchor<'a>(&self, e: &'a Section) -> &'a VectorField {
        &e.vector
    }

    /// `𝒟f = (0, df)`.
    pub fn derivation(&self, f: &Poly) -> Result<Section> {
        self.chart.check_dim(f.nvars())?;
        Section::from_form(Form::function(f.clone()).d())
    }

    /// Evaluates every axiom on the supplied section triples and functions,
    /// returning exact residual counts.
    pub fn axioms_check(&self, triples: &[(Section, Section, Section)], functions: &[Poly]) -> Result<AxiomReport> {
        let mut report = AxiomReport::new(triples.len());
        let half = qf(1, 2);
        for (k, (e1, e2, e3)) in triples.iter().enumerate() {
            let f = &functions[k % functions.len().max(1)];
            let b12 = self.dorfman(e1, e2)?;
            let b13 = self.dorfman(e1, e3)?;
            let b23 = self.dorfman(e2, e3)?;

            // metric compatibility
            let lhs = e1.vector.apply(&self.pairing(e2, e3)?);
            let rhs = &self.pairing(&b12, e3)? + &self.pairing(e2, &b13)?;
            report.record(Axiom::MetricCompatibility, Residual::function(&(&lhs - &rhs), &self.chart));

            // ⟦e,e⟧ = ½ 𝒟⟨e,e⟩
            let ee = self.dorfman(e1, e1)?;
            let half_d = self.derivation(&self.pairing(e1, e1)?)?.scale(&half);
            report.record(Axiom::SymmetricPart, Residual::section(&(&ee - &half_d), &self.chart));

            // Jacobi (left Leibniz form)
            let lhs = self.dorfman(e1, &b23)?;
            let rhs = &self.dorfman(&b12, e3)? + &self.dorfman(e2, &b13)?;
            report.record(Axiom::Jacobi, Residual::section(&(&lhs - &rhs), &self.chart));

            // anchor is a bracket homomorphism
            let lhs = b12.vector.clone();
            let rhs = e1.vector.bracket(&e2.vector)?;
            report.record(Axiom::AnchorHomomorphism, Residual::vector(&(&lhs - &rhs), &self.chart));

            // ⟦e1, f e2⟧ = f⟦e1, e2⟧ + (ρ(e1) f) e2
            let lhs = self.dorfman(e1, &e2.mul_fn(f))?;
            let rhs = &b12.mul_fn(f) + &e2.mul_fn(&e1.vector.apply(f));
            report.record(Axiom::AnchoredLeibniz, Residual::section(&(&lhs - &rhs), &self.chart));

            // ⟦f e1, e2⟧ = f⟦e1, e2⟧ − (ρ(e2) f) e1 + ⟨e1, e2⟩ 𝒟f
            let lhs = self.dorfman(&e1.mul_fn(f), e2)?;
            let df = self.derivation(f)?;
            let rhs = &(&b12.mul_fn(f) - &e1.mul_fn(&e2.vector.apply(f))) + &df.mul_fn(&self.pairing(e1, e2)?);
            report.record(Axiom::LeftLeibniz, Residual::section(&(&lhs - &rhs), &self.chart));
        }
        Ok(report)
    }
}

/// The identities checked by [`TwistedCourant::axioms_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    MetricCompatibility,
    SymmetricPart,
    Jacobi,
    AnchorHomomorphism,
    AnchoredLeibniz,
    LeftLeibniz,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::MetricCompatibility,
        Axiom::SymmetricPart,
        Axiom::Jacobi,
        Axiom::AnchorHomomorphism,
        Axiom::AnchoredLeibniz,
        Axiom::LeftLeibniz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::MetricCompatibility => "metric compatibility",
            Axiom::SymmetricPart => "symmetric part equals half the derivation of the pairing",
            Axiom::Jacobi => "Jacobi identity",
            Axiom::AnchorHomomorphism => "anchor is a bracket homomorphism",
            Axiom::AnchoredLeibniz => "anchored Leibniz rule",
            Axiom::LeftLeibniz => "left Leibniz rule",
        }
    }
}

/// An exact residual; `None` when it vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual(Option<String>);

impl Residual {
    fn function(p: &Poly, chart: &Chart) -> Self {
        Residual((!p.is_zero()).then(|| p.to_string_with(chart)))
    }

    fn section(s: &Section, chart: &Chart) -> Self {
        Residual((!s.is_zero()).then(|| s.render(chart)))
    }

    fn vector(v: &VectorField, chart: &Chart) -> Self {
        Residual((!v.is_zero()).then(|| v.to_strings(chart).join(", ")))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_none()
    }

    pub fn witness(&self) -> Option<&str> {
        self.0.as_deref()
    }
}

/// Per-axiom outcome of an axiom check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomOutcome {
    pub axiom: Axiom,
    pub evaluated: usize,
    pub nonzero: usize,
    pub first_witness: Option<String>,
}

/// Aggregated outcome of [`TwistedCourant::axioms_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub samples: usize,
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    fn new(samples: usize) -> Self {
        AxiomReport {
            samples,
            outcomes: Axiom::ALL
                .iter()
                .map(|&axiom| AxiomOutcome {
                    axiom,
                    evaluated: 0,
                    nonzero: 0,
                    first_witness: None,
                })
                .collect(),
        }
    }

    fn record(&mut self, axiom: Axiom, r: Residual) {
        let o = self.outcomes.iter_mut().find(|o| o.axiom == axiom).expect("axiom listed");
        o.evaluated += 1;
        if let Some(w) = r.0 {
            o.nonzero += 1;
            o.first_witness.get_or_insert(w);
        }
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.nonzero == 0)
    }
}

/// The `B`-field transformation `e^B(X + α) = X + α + ι_X B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFieldMap {
    b: Form,
}

impl BFieldMap {
    pub fn new(b: Form) -> Result<Self> {
        b.expect_degree(2)?;
        Ok(BFieldMap { b })
    }

    pub fn b(&self) -> &Form {
        &self.b
    }

    pub fn apply(&self, e: &Section) -> Result<Section> {
        let shift = self.b.interior(&e.vector)?;
        Section::new(e.vector.clone(), &e.form + &shift)
    }

    /// `e^{-B}`.
    pub fn inverse(&self) -> BFieldMap {
        BFieldMap { b: -&self.b }
    }

    /// `⟦e^B e₁, e^B e₂⟧ − e^B ⟦e₁, e₂⟧` in the given algebroid.
    pub fn bracket_defect(&self, e: &TwistedCourant, e1: &Section, e2: &Section) -> Result<Section> {
        let lhs = e.dorfman(&self.apply(e1)?, &self.apply(e2)?)?;
        let rhs = self.apply(&e.dorfman(e1, e2)?)?;
        Ok(&lhs - &rhs)
    }

    /// The predicted defect `(0, ι_Y ι_X dB)`.
    pub fn expected_defect(&self, e1: &Section, e2: &Section) -> Result<Section> {
        Section::from_form(self.b.d().interior(&e1.vector)?.interior(&e2.vector)?)
    }
}

/// A classical isomorphism `Φ = φ̄ ∘ e^B` between twisted algebroids, with
/// `φ*H₂ = H₁ − dB`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CourantIso {
    phi: DiffeoMap,
    b: BFieldMap,
    source: TwistedCourant,
    target: TwistedCourant,
}

impl CourantIso {
    pub fn new(phi: DiffeoMap, b: Form, source: TwistedCourant, target: TwistedCourant) -> Result<Self> {
        if phi.source() != source.chart() || phi.target() != target.chart() {
            return Err(GeomError::IsoCondition("diffeomorphism charts differ from the algebroid charts".into()));
        }
        let b = BFieldMap::new(b)?;
        let residual = &phi.pullback(target.h())? - &(source.h() - &b.b().d());
        if !residual.is_zero() {
            return Err(GeomError::IsoCondition(format!("φ*H₂ − (H₁ − dB) = {}", residual.render(source.chart()))));
        }
        Ok(CourantIso { phi, b, source, target })
    }

    /// The target algebroid determined by `φ` and `B`: `H₂ = (φ⁻¹)*(H₁ − dB)`.
    pub fn induced_target(phi: &DiffeoMap, b: &Form, source: &TwistedCourant) -> Result<TwistedCourant> {
        let h2 = phi.push_form(&(source.h() - &b.d()))?;
        TwistedCourant::new(phi.target().clone(), h2)
    }

    pub fn phi(&self) -> &DiffeoMap {
        &self.phi
    }

    pub fn b(&self) -> &Form {
        self.b.b()
    }

    pub fn source(&self) -> &TwistedCourant {
        &self.source
    }

    pub fn target(&self) -> &TwistedCourant {
        &self.target
    }

    /// `Φ(X + α) = φ_* X + (φ⁻¹)*(α + ι_X B)`.
    pub fn apply(&self, e: &Section) -> Result<Section> {
        let shifted = self.b.apply(e)?;
        Section::new(self.phi.pushforward(&shifted.vector)?, self.phi.push_form(&shifted.form)?)
    }

    /// Checks isometry, anchor compatibility and the bracket homomorphism
    /// property on the sample pairs, plus the flux condition symbolically.
    pub fn check(&self, pairs: &[(Section, Section)]) -> Result<IsoReport> {
        let mut report = IsoReport {
            flux_condition: true,
            isometry_failures: 0,
            anchor_failures: 0,
            bracket_failures: 0,
            samples: pairs.len(),
        };
        let inv = self.phi.inverse();
        for (e1, e2) in pairs {
            let (f1, f2) = (self.apply(e1)?, self.apply(e2)?);
            if pairing(&f1, &f2)? != pairing(e1, e2)?.compose(inv) {
                report.isometry_failures += 1;
            }
            if f1.vector != self.phi.pushforward(&e1.vector)? {
                report.anchor_failures += 1;
            }
            if self.target.dorfman(&f1, &f2)? != self.apply(&self.source.dorfman(e1, e2)?)? {
                report.bracket_failures += 1;
            }
        }
        Ok(report)
    }
}

/// Outcome of [`CourantIso::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub flux_condition: bool,
    pub isometry_failures: usize,
    pub anchor_failures: usize,
    pub bracket_failures: usize,
    pub samples: usize,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.flux_condition && self.isometry_failures == 0 && self.anchor_failures == 0 && self.bracket_failures == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::sampling::RandomSource;

    fn chart() -> Chart {
        Chart::new(&["x", "y", "z"]).unwrap()
    }

    fn volume(k: i64) -> Form {
        Form::from_terms(3, 3, vec![(vec![0, 1, 2], Poly::from_int(3, k))])
    }

    fn sec(v: &[&str], a: &[&str]) -> Section {
        Section::parse(v, a, &chart()).unwrap()
    }

    #[test]
    fn heisenberg_bracket_of_frame_fields() {
        let e = TwistedCourant::standard(chart());
        let zx = sec(&["1", "0", "0"], &["0", "0", "0"]);
        let zz = sec(&["0", "2*x", "1"], &["0", "0", "0"]);
        assert_eq!(e.dorfman(&zx, &zz).unwrap(), sec(&["0", "2", "0"], &["0", "0", "0"]));
    }

    #[test]
    fn twisted_bracket_of_coordinate_fields() {
        let e = TwistedCourant::new(chart(), volume(4)).unwrap();
        let dx = sec(&["1", "0", "0"], &["0", "0", "0"]);
        let dy = sec(&["0", "1", "0"], &["0", "0", "0"]);
        assert_eq!(e.dorfman(&dx, &dy).unwrap(), sec(&["0", "0", "0"], &["0", "0", "4"]));
    }

    #[test]
    fn self_bracket_is_exact() {
        let e = TwistedCourant::new(chart(), volume(1)).unwrap();
        let s = sec(&["y", "x*z", "1"], &["z", "x", "y^2"]);
        let expected = Section::from_form(s.form().apply(&[s.vector()]).map(|f| Form::function(f).d()).unwrap()).unwrap();
        assert_eq!(e.dorfman(&s, &s).unwrap(), expected);
    }

    #[test]
    fn pairing_examples() {
        let a = sec(&["1", "0", "0"], &["0", "1", "0"]);
        let b = sec(&["0", "1", "0"], &["1", "0", "0"]);
        assert_eq!(pairing(&a, &b).unwrap(), Poly::from_int(3, 2));
    }

    #[test]
    fn derivation_examples() {
        let e = TwistedCourant::standard(chart());
        let f = Poly::parse("x*y", &chart()).unwrap();
        assert_eq!(e.derivation(&f).unwrap(), sec(&["0", "0", "0"], &["y", "x", "0"]));
        assert!(e.derivation(&Poly::from_int(3, 5)).unwrap().is_zero());
    }

    #[test]
    fn non_closed_h_rejected() {
        let c = Chart::new(&["x", "y", "z", "w"]).unwrap();
        let h = Form::from_terms(4, 3, vec![(vec![0, 1, 2], Poly::var(4, 3))]);
        assert!(matches!(TwistedCourant::new(c, h), Err(GeomError::NotClosed(_))));
    }

    #[test]
    fn axioms_on_random_sections() {
        let e = TwistedCourant::new(chart(), volume(3)).unwrap();
        let mut r = RandomSource::new(5);
        let mut s = || Section::new(r.vector_field(3), r.form(3, 1)).unwrap();
        let triples: Vec<_> = (0..5).map(|_| (s(), s(), s())).collect();
        let mut r2 = RandomSource::new(6);
        let fs: Vec<Poly> = (0..5).map(|_| r2.poly(3)).collect();
        let report = e.axioms_check(&triples, &fs).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn bfield_defect_example() {
        // B = x dy^dz, e1 = ∂y, e2 = ∂z: defect (0, ι_∂z ι_∂y dx^dy^dz) = (0, dx)
        let e = TwistedCourant::standard(chart());
        let b = BFieldMap::new(Form::from_terms(3, 2, vec![(vec![1, 2], Poly::var(3, 0))])).unwrap();
        let e1 = sec(&["0", "1", "0"], &["0", "0", "0"]);
        let e2 = sec(&["0", "0", "1"], &["0", "0", "0"]);
        let defect = b.bracket_defect(&e, &e1, &e2).unwrap();
        assert_eq!(defect, sec(&["0", "0", "0"], &["1", "0", "0"]));
        assert_eq!(defect, b.expected_defect(&e1, &e2).unwrap());
    }

    #[test]
    fn bfield_is_isometry() {
        let b = BFieldMap::new(Form::from_terms(3, 2, vec![(vec![0, 2], Poly::parse("x*y", &chart()).unwrap())])).unwrap();
        let e1 = sec(&["1", "z", "0"], &["0", "y", "1"]);
        let e2 = sec(&["x", "0", "1"], &["1", "0", "x"]);
        assert_eq!(pairing(&b.apply(&e1).unwrap(), &b.apply(&e2).unwrap()).unwrap(), pairing(&e1, &e2).unwrap());
    }

    #[test]
    fn iso_constructor_enforces_flux_condition() {
        let c = chart();
        let e = TwistedCourant::standard(c.clone());
        let id = DiffeoMap::identity(&c);
        assert!(CourantIso::new(id.clone(), Form::zero(3, 2), e.clone(), e.clone()).is_ok());
        let b = Form::from_terms(3, 2, vec![(vec![1, 2], Poly::var(3, 0).scale(&q(1)))]);
        assert!(matches!(CourantIso::new(id.clone(), b.clone(), e.clone(), e.clone()), Err(GeomError::IsoCondition(_))));
        let target = CourantIso::induced_target(&id, &b, &e).unwrap();
        let iso = CourantIso::new(id, b, e, target).unwrap();
        let pairs = vec![(sec(&["1", "y", "0"], &["z", "0", "1"]), sec(&["0", "1", "x"], &["1", "x", "0"]))];
        assert!(iso.check(&pairs).unwrap().passed());
    }
}

//! JSON problem and report documents, the command drivers behind the
//! `gengeom` binary, and the packaged lens-space, Heisenberg and circle
//! examples.
//!
//! A [`ProblemDocument`] describes a doubled chart, a frame, the flux `H`,
//! named frame-generated subbundles (optionally `B`-shifted), a generalised
//! metric on the first quotient and, optionally, para-Hermitian data.
//! Polynomials are strings in the crate's grammar so that every number stays
//! exact. Commands turn a document into a [`ReportDocument`] of named
//! verdicts and exact outputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chart::Chart;
use crate::courant::{Section, TwistedCourant};
use crate::error::{GeomError, Result};
use crate::exterior::form::IndexRef;
use crate::exterior::{DiffeoMap, Form, Frame, VectorField};
use crate::genmetric::GeneralisedMetric;
use crate::para::{
    para_buscher, para_buscher_h_route, pullback_identity_check, sf_conditions_check, swap_frame, GenParaMetric,
    ParaHermitianFrame,
};
use crate::polymat::PolyMat;
use crate::reduction::{reduce_h, reducibility_check, FoliationSubbundle};
use crate::sampling::{CertificateKind, RandomSource, SampleBox, SamplePlan};
use crate::tduality::{self, TDualityProblem};

/// One serialised form term: coordinate indices (names or positions) and a
/// polynomial coefficient.
pub type FormTerm = (Vec<IndexRef>, String);

/// A frame given by labels and coordinate components of each field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    pub labels: Vec<String>,
    pub fields: Vec<Vec<String>>,
}

/// Names for the coordinates of a quotient chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientDoc {
    /// Base coordinates of the doubled chart in the order they appear on the quotient.
    pub order: Vec<String>,
    pub names: Vec<String>,
}

/// `e^{−B} span{Z_s}` foliated by the listed fiber coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubbundleDoc {
    pub name: String,
    /// Frame labels spanning the subbundle.
    pub span: Vec<String>,
    pub fiber_coords: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shift_b: Vec<FormTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientDoc>,
}

/// `(g, b)` in frame components of the quotient frame of a subbundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricDoc {
    pub subbundle: String,
    pub g: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<String>>>,
}

/// The pair of subbundle names to dualise between.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TDualityDoc {
    pub k1: String,
    pub k2: String,
}

/// A polynomial diffeomorphism with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub target: Vec<String>,
    pub forward: Vec<String>,
    pub inverse: Vec<String>,
}

/// Para-Hermitian data: the document frame read as `{Z_i, Z̃^i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParaDoc {
    /// Labels of `L₊` frame fields along which to dualise.
    pub duality: Vec<String>,
    pub phi: MapDoc,
    pub g_plus: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_plus: Option<Vec<Vec<String>>>,
}

/// Seed, number of points and coordinate box of the sample plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleDoc {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(rename = "box", default = "default_box")]
    pub bx: String,
}

fn default_samples() -> usize {
    20
}

fn default_box() -> String {
    "-1,1".to_string()
}

impl Default for SampleDoc {
    fn default() -> Self {
        SampleDoc {
            seed: 0,
            samples: default_samples(),
            bx: default_box(),
        }
    }
}

/// A complete pipeline input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub chart: Vec<String>,
    /// Defaults to the coordinate frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameDoc>,
    #[serde(rename = "H", default, skip_serializing_if = "Vec::is_empty")]
    pub h: Vec<FormTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subbundles: Vec<SubbundleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricDoc>,
    /// Killing vectors of the metric along the duality directions, as
    /// components on the metric's quotient chart.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub iso: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tduality: Option<TDualityDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub para: Option<ParaDoc>,
    #[serde(default)]
    pub sample: SampleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
}

fn in_field<T>(field: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        GeomError::Parse { field: inner, message } => GeomError::parse(field, format!("{inner}: {message}")),
        other => GeomError::parse(field, other.to_string()),
    })
}

fn parse_matrix(rows: &[Vec<String>], chart: &Chart, field: &str) -> Result<PolyMat> {
    PolyMat::parse(rows, chart, field)
}

impl ProblemDocument {
    /// Parses and validates a document; JSON errors carry line and column,
    /// semantic errors name the offending field.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ProblemDocument = serde_json::from_str(s)
            .map_err(|e| GeomError::Document(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialise")
    }

    /// Checks that every polynomial parses and every name resolves.
    pub fn validate(&self) -> Result<()> {
        let chart = self.chart()?;
        let frame = self.frame()?;
        self.h_form()?;
        for (i, sb) in self.subbundles.iter().enumerate() {
            if self.subbundles[..i].iter().any(|o| o.name == sb.name) {
                return Err(GeomError::parse(format!("subbundles[{i}].name"), format!("duplicate name `{}`", sb.name)));
            }
            in_field(&format!("subbundles[{i}].span"), frame.indices_of(&sb.span))?;
            in_field(&format!("subbundles[{i}].fiber_coords"), chart.indices_of(&sb.fiber_coords))?;
            Form::parse_terms(&sb.shift_b, 2, &chart, &format!("subbundles[{i}].shift_b"))?;
            if let Some(q) = &sb.quotient {
                in_field(&format!("subbundles[{i}].quotient.order"), chart.indices_of(&q.order))?;
                in_field(&format!("subbundles[{i}].quotient.names"), Chart::new(&q.names))?;
            }
        }
        if let Some(m) = &self.metric {
            self.subbundle_doc(&m.subbundle, "metric.subbundle")?;
            self.metric()?;
        }
        if let Some(t) = &self.tduality {
            self.subbundle_doc(&t.k1, "tduality.k1")?;
            self.subbundle_doc(&t.k2, "tduality.k2")?;
        }
        if let Some(p) = &self.para {
            self.para_parts(p)?;
        }
        SampleBox::parse(&self.sample.bx).map_err(|e| in_field::<()>("sample.box", Err(e)).unwrap_err())?;
        if let Some(c) = &self.command {
            c.parse::<Command>()?;
        }
        Ok(())
    }

    pub fn chart(&self) -> Result<Chart> {
        in_field("chart", Chart::new(&self.chart))
    }

    pub fn frame(&self) -> Result<Frame> {
        let chart = self.chart()?;
        match &self.frame {
            None => Ok(Frame::coordinate(&chart)),
            Some(f) => in_field("frame", Frame::parse(f.labels.clone(), &f.fields, &chart)),
        }
    }

    pub fn h_form(&self) -> Result<Form> {
        Form::parse_terms(&self.h, 3, &self.chart()?, "H")
    }

    /// The twisted Courant algebroid; fails with [`GeomError::NotClosed`]
    /// when `dH ≠ 0`.
    pub fn algebroid(&self) -> Result<TwistedCourant> {
        TwistedCourant::new(self.chart()?, self.h_form()?)
    }

    fn subbundle_doc(&self, name: &str, field: &str) -> Result<&SubbundleDoc> {
        self.subbundles
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| GeomError::parse(field, format!("no subbundle named `{name}`")))
    }

    /// Builds a named subbundle; geometric failures (non-involutive span,
    /// bad fiber coordinates) are returned as they are.
    pub fn subbundle(&self, name: &str) -> Result<FoliationSubbundle> {
        let sb = self.subbundle_doc(name, "subbundles")?;
        let chart = self.chart()?;
        let frame = self.frame()?;
        let span = in_field("subbundles.span", frame.indices_of(&sb.span))?;
        let fiber = in_field("subbundles.fiber_coords", chart.indices_of(&sb.fiber_coords))?;
        let b = Form::parse_terms(&sb.shift_b, 2, &chart, "subbundles.shift_b")?;
        let mut k = FoliationSubbundle::new(chart, frame, span, fiber)?.with_shift(b)?;
        if let Some(q) = &sb.quotient {
            k = k.with_quotient(&q.order, &q.names)?;
        }
        Ok(k)
    }

    /// The generalised metric on the quotient of its subbundle.
    pub fn metric(&self) -> Result<GeneralisedMetric> {
        let m = self.metric.as_ref().ok_or_else(|| GeomError::Document("the document has no metric".into()))?;
        let k = self.subbundle(&m.subbundle)?;
        let qc = k.quotient_chart().clone();
        let g = parse_matrix(&m.g, &qc, "metric.g")?;
        let b = match &m.b {
            Some(b) => parse_matrix(b, &qc, "metric.b")?,
            None => PolyMat::zeros(qc.dim(), qc.dim(), qc.dim()),
        };
        GeneralisedMetric::new(k.quotient_frame()?, g, b)
    }

    fn iso_fields(&self, qc: &Chart) -> Result<Vec<VectorField>> {
        self.iso
            .iter()
            .enumerate()
            .map(|(i, x)| in_field(&format!("iso[{i}]"), VectorField::parse(x, qc)))
            .collect()
    }

    /// The T-duality problem named by the `tduality` block.
    pub fn tduality_problem(&self) -> Result<TDualityProblem> {
        let t = self.tduality.as_ref().ok_or_else(|| GeomError::Document("the document has no tduality block".into()))?;
        let k1 = self.subbundle(&t.k1)?;
        let k2 = self.subbundle(&t.k2)?;
        let metric = self.metric()?;
        let iso = self.iso_fields(k1.quotient_chart())?;
        TDualityProblem::new(self.algebroid()?, k1, k2, metric, iso)
    }

    fn para_parts(&self, p: &ParaDoc) -> Result<(Vec<usize>, DiffeoMap, GenParaMetric)> {
        let chart = self.chart()?;
        let frame = self.frame()?;
        let n = chart.dim() / 2;
        let duality = in_field("para.duality", frame.indices_of(&p.duality))?;
        if let Some(&d) = duality.iter().find(|&&d| d >= n) {
            return Err(GeomError::parse("para.duality", format!("`{}` is not an L₊ field", frame.label(d))));
        }
        let target = in_field("para.phi.target", Chart::new(&p.phi.target))?;
        let phi = in_field("para.phi", DiffeoMap::parse(chart.clone(), target, &p.phi.forward, &p.phi.inverse))?;
        let g = parse_matrix(&p.g_plus, &chart, "para.g_plus")?;
        let b = match &p.b_plus {
            Some(b) => parse_matrix(b, &chart, "para.b_plus")?,
            None => PolyMat::zeros(n, n, chart.dim()),
        };
        Ok((duality, phi, in_field("para.g_plus", GenParaMetric::new(g, b))?))
    }

    fn plan(&self, nvars: usize, opts: &RunOptions) -> Result<SamplePlan> {
        let bx = opts.bx.clone().unwrap_or_else(|| self.sample.bx.clone());
        let bx = in_field("sample.box", SampleBox::parse(&bx))?;
        Ok(SamplePlan::generate(nvars, self.samples(opts), self.seed(opts), &bx))
    }

    fn seed(&self, opts: &RunOptions) -> u64 {
        opts.seed.unwrap_or(self.sample.seed)
    }

    fn samples(&self, opts: &RunOptions) -> usize {
        opts.samples.unwrap_or(self.sample.samples)
    }
}

/// Command-line overrides of the document's sample block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    /// `"a,b"`.
    pub bx: Option<String>,
}

/// The pipelines a document can be run through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Reduce,
    Relate,
    Tdualize,
    ParaCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Reduce => "reduce",
            Command::Relate => "relate",
            Command::Tdualize => "tdualize",
            Command::ParaCheck => "para-check",
        }
    }
}

impl FromStr for Command {
    type Err = GeomError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "check" => Ok(Command::Check),
            "reduce" => Ok(Command::Reduce),
            "relate" => Ok(Command::Relate),
            "tdualize" => Ok(Command::Tdualize),
            "para-check" => Ok(Command::ParaCheck),
            other => Err(GeomError::parse("command", format!("unknown command `{other}`"))),
        }
    }
}

/// A named verdict with its certificate and exact residuals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateKind>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<String>,
}

impl Verdict {
    fn new(check: impl Into<String>, passed: bool, certificate: Option<CertificateKind>, residuals: Vec<String>) -> Self {
        Verdict {
            check: check.into(),
            passed,
            certificate,
            residuals,
        }
    }

    fn symbolic(check: impl Into<String>, passed: bool, residuals: Vec<String>) -> Self {
        Verdict::new(check, passed, Some(CertificateKind::Symbolic), residuals)
    }
}

/// The output of a command: verdicts plus exact results keyed by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub seed: u64,
    pub samples: usize,
    pub verdicts: Vec<Verdict>,
    #[serde(default)]
    pub outputs: BTreeMap<String, Value>,
    /// Wall-clock time, recorded only on request since it breaks determinism.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl ReportDocument {
    fn new(command: Command, doc: &ProblemDocument, opts: &RunOptions) -> Self {
        ReportDocument {
            command: command.name().to_string(),
            seed: doc.seed(opts),
            samples: doc.samples(opts),
            verdicts: Vec::new(),
            outputs: BTreeMap::new(),
            elapsed_ms: None,
        }
    }

    /// True when every verdict passed.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialise")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| GeomError::Document(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    /// A human-readable rendering: one line per verdict, then the outputs.
    pub fn render_text(&self) -> String {
        let mut out = format!("{} (seed {}, {} samples)\n", self.command, self.seed, self.samples);
        for v in &self.verdicts {
            let cert = v.certificate.map(|c| format!(" [{}]", cert_name(c))).unwrap_or_default();
            let _ = writeln!(out, "{} {}{cert}", if v.passed { "PASS" } else { "FAIL" }, v.check);
            for r in &v.residuals {
                let _ = writeln!(out, "    {r}");
            }
        }
        for (k, v) in &self.outputs {
            let _ = writeln!(out, "{k}: {v}");
        }
        out
    }

    fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    fn output(&mut self, key: &str, v: Value) {
        self.outputs.insert(key.to_string(), v);
    }
}

fn cert_name(c: CertificateKind) -> &'static str {
    match c {
        CertificateKind::Symbolic => "symbolic",
        CertificateKind::Sampled => "sampled",
    }
}

fn form_json(w: &Form, chart: &Chart) -> Value {
    json!(w.to_terms(chart))
}

fn matrix_json(m: &PolyMat, chart: &Chart) -> Value {
    json!(m.to_strings(chart))
}

/// Runs the command named in the document (default `check`).
pub fn execute_document(doc: &ProblemDocument, opts: &RunOptions) -> Result<ReportDocument> {
    let cmd = doc.command.as_deref().unwrap_or("check").parse()?;
    execute(doc, cmd, opts)
}

/// Runs one command on a validated document.
pub fn execute(doc: &ProblemDocument, cmd: Command, opts: &RunOptions) -> Result<ReportDocument> {
    doc.validate()?;
    let mut report = ReportDocument::new(cmd, doc, opts);
    match cmd {
        Command::Check => cmd_check(doc, opts, &mut report)?,
        Command::Reduce => cmd_reduce(doc, &mut report)?,
        Command::Relate => cmd_relate(doc, opts, &mut report)?,
        Command::Tdualize => cmd_tdualize(doc, opts, &mut report)?,
        Command::ParaCheck => cmd_para_check(doc, &mut report)?,
    }
    Ok(report)
}

/// Builds the algebroid, reporting a non-closed `H` as a failed verdict.
fn algebroid_verdict(doc: &ProblemDocument, report: &mut ReportDocument) -> Result<Option<TwistedCourant>> {
    match doc.algebroid() {
        Ok(e) => {
            report.push(Verdict::symbolic("H is closed", true, vec![]));
            Ok(Some(e))
        }
        Err(GeomError::NotClosed(dh)) => {
            report.push(Verdict::symbolic("H is closed", false, vec![format!("dH = {dh}")]));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn cmd_check(doc: &ProblemDocument, opts: &RunOptions, report: &mut ReportDocument) -> Result<()> {
    let Some(e) = algebroid_verdict(doc, report)? else {
        return Ok(());
    };
    let n = e.dim();
    let mut rs = RandomSource::new(doc.seed(opts)).with_max_degree(2);
    let section = |rs: &mut RandomSource| Section::new(rs.vector_field(n), rs.form(n, 1));
    let count = doc.samples(opts);
    let mut triples = Vec::with_capacity(count);
    let mut functions = Vec::with_capacity(count);
    for _ in 0..count {
        triples.push((section(&mut rs)?, section(&mut rs)?, section(&mut rs)?));
        functions.push(rs.poly(n));
    }
    let axioms = e.axioms_check(&triples, &functions)?;
    for o in &axioms.outcomes {
        report.push(Verdict::new(
            format!("Courant axiom: {}", o.axiom.name()),
            o.nonzero == 0,
            Some(CertificateKind::Sampled),
            o.first_witness.iter().cloned().collect(),
        ));
    }
    for sb in &doc.subbundles {
        let k = doc.subbundle(&sb.name)?;
        let r = reducibility_check(&e, &k)?;
        report.push(Verdict::symbolic(format!("{} is reducible", sb.name), r.passed(), reducibility_residuals(&r)));
    }
    if doc.metric.is_some() {
        let m = doc.metric()?;
        let plan = doc.plan(m.dim(), opts)?;
        let c = m.certify_positive(&plan);
        report.push(Verdict::new(
            "metric is positive definite",
            c.passed(),
            Some(c.kind),
            c.failures.iter().map(|i| format!("sample point {i}")).collect(),
        ));
    }
    if doc.tduality.is_some() {
        let p = doc.tduality_problem()?;
        let plan = doc.plan(n, opts)?;
        push_invariance(report, &tduality::invariance_checks(&p, &plan)?);
    }
    if doc.para.is_some() {
        let ok = ParaHermitianFrame::new(doc.chart()?, doc.frame()?);
        report.push(Verdict::symbolic("para-Hermitian frame", ok.is_ok(), ok.err().map(|e| e.to_string()).into_iter().collect()));
    }
    Ok(())
}

fn reducibility_residuals(r: &crate::reduction::ReducibilityReport) -> Vec<String> {
    r.interior_violations
        .iter()
        .map(|(l, w)| format!("ι_{l}(H − dB) = {w}"))
        .chain(r.fiber_dependence.iter().map(|s| format!("fiber dependence: {s}")))
        .collect()
}

fn push_invariance(report: &mut ReportDocument, inv: &tduality::InvarianceReport) {
    report.push(Verdict::symbolic(
        "isometries are Killing",
        inv.killing_violations.is_empty(),
        inv.killing_violations.clone(),
    ));
    report.push(Verdict::symbolic(
        "isometries close and span the duality directions",
        inv.closed && inv.spans_duality,
        vec![],
    ));
    report.push(Verdict::symbolic(
        "lifted isometries preserve the foliations",
        inv.lift_violations.is_empty() && inv.splitting_violations.is_empty(),
        inv.lift_violations.iter().chain(&inv.splitting_violations).cloned().collect(),
    ));
}

fn cmd_reduce(doc: &ProblemDocument, report: &mut ReportDocument) -> Result<()> {
    let Some(e) = algebroid_verdict(doc, report)? else {
        return Ok(());
    };
    for sb in &doc.subbundles {
        let k = doc.subbundle(&sb.name)?;
        let r = reducibility_check(&e, &k)?;
        report.push(Verdict::symbolic(format!("{} is reducible", sb.name), r.passed(), reducibility_residuals(&r)));
        if r.passed() {
            let red = reduce_h(&e, &k)?;
            report.output(&format!("{}.quotient_chart", sb.name), json!(red.chart().names()));
            report.output(&format!("{}.H", sb.name), form_json(red.h(), red.chart()));
        }
    }
    Ok(())
}

/// Hypotheses of the relation construction that have no finite certificate
/// here; they are declared in every report that builds a relation.
const RELATION_ASSUMPTIONS: [&str; 3] = [
    "the supports of the relation form a surjective submersion (only fibre-wise ranks are checked)",
    "the relation is smooth (declared, not derived)",
    "invariance is checked on the listed generators, not on all invariant sections",
];

fn relation_outputs(report: &mut ReportDocument, r: &tduality::RelationReport) {
    report.output("relation.assumptions", json!(RELATION_ASSUMPTIONS));
    report.push(Verdict::new("relation is a clean Dirac structure", r.passed(), Some(r.certificate), vec![]));
    report.output("relation.rank", json!(r.relation_rank));
    report.output("relation.expected_rank", json!(r.expected_rank));
    report.output("relation.intersection_rank", json!(r.intersection_rank));
    report.output("relation.generators", json!(r.render_generators()));
}

fn cmd_relate(doc: &ProblemDocument, opts: &RunOptions, report: &mut ReportDocument) -> Result<()> {
    let p = doc.tduality_problem()?;
    let plan = doc.plan(p.k1().chart().dim(), opts)?;
    relation_outputs(report, &tduality::relate(&p, &plan)?);
    let bd = tduality::b_decomposition_check(&p, &plan)?;
    push_b_decomposition(report, &bd);
    Ok(())
}

fn push_b_decomposition(report: &mut ReportDocument, bd: &tduality::BDecompositionReport) {
    report.push(Verdict::symbolic(
        "B decomposes along the duality directions",
        bd.passed(),
        bd.clauses
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(c, _)| c.clone())
            .chain((!bd.condition_i).then(|| "K₁ ∩ K₂^⊥ ⊄ K₂".to_string()))
            .chain((!bd.condition_ii).then(|| "K₂ ∩ K₁^⊥ ⊄ K₁".to_string()))
            .collect(),
    ));
}

fn cmd_tdualize(doc: &ProblemDocument, opts: &RunOptions, report: &mut ReportDocument) -> Result<()> {
    let Some(_) = algebroid_verdict(doc, report)? else {
        return Ok(());
    };
    let p = doc.tduality_problem()?;
    let plan = doc.plan(p.k1().chart().dim(), opts)?;
    let r = tduality::run(&p, &plan)?;
    let t = doc.tduality.as_ref().expect("checked by tduality_problem");
    report.push(Verdict::symbolic(format!("{} is reducible", t.k1), r.reducibility1.passed(), reducibility_residuals(&r.reducibility1)));
    report.push(Verdict::symbolic(format!("{} is reducible", t.k2), r.reducibility2.passed(), reducibility_residuals(&r.reducibility2)));
    relation_outputs(report, &r.relation);
    push_b_decomposition(report, &r.b_decomposition);
    push_invariance(report, &r.invariance);
    for (name, red) in [(&t.k1, &r.reduced1), (&t.k2, &r.reduced2)] {
        if let Some(red) = red {
            report.output(&format!("{name}.quotient_chart"), json!(red.chart().names()));
            report.output(&format!("{name}.H"), form_json(red.h(), red.chart()));
        }
    }
    match (&r.dual, &r.isometry) {
        (Some(dual), Some(cert)) => {
            let qc = p.k2().quotient_chart();
            report.output("dual.g", matrix_json(&dual.g, qc));
            report.output("dual.b", matrix_json(&dual.b, qc));
            report.output("dual.frame_components", matrix_json(&dual.frame_h, qc));
            report.push(Verdict::new(
                "dual metric is a generalised isometry",
                cert.passed(),
                Some(cert.certificate),
                cert.failures.iter().map(|pt| format!("at ({})", pt.join(", "))).collect(),
            ));
            match tduality::para_route(&p) {
                Ok(h) => report.push(Verdict::symbolic("para-Hermitian route agrees", h == dual.frame_h, vec![])),
                Err(GeomError::Precondition(why)) => report.output("para_route", json!(format!("not applicable: {why}"))),
                Err(e) => return Err(e),
            }
        }
        _ => report.push(Verdict::new("dual background", false, None, vec!["an earlier condition failed".into()])),
    }
    Ok(())
}

fn cmd_para_check(doc: &ProblemDocument, report: &mut ReportDocument) -> Result<()> {
    let p = doc.para.as_ref().ok_or_else(|| GeomError::Document("the document has no para block".into()))?;
    let chart = doc.chart()?;
    let f1 = match ParaHermitianFrame::new(chart.clone(), doc.frame()?) {
        Ok(f) => {
            report.push(Verdict::symbolic("para-Hermitian frame", true, vec![]));
            f
        }
        Err(e) => {
            report.push(Verdict::symbolic("para-Hermitian frame", false, vec![e.to_string()]));
            return Ok(());
        }
    };
    let (duality, phi, g1) = doc.para_parts(p)?;
    let labels = f1.frame().labels().to_vec();
    let n = f1.n();
    let flux = f1.flux_extract();
    report.output("fluxes", json!(render_fluxes(&flux, &labels, &chart)));
    let sf = sf_conditions_check(&flux, &duality);
    report.push(Verdict::symbolic(
        format!("structure-function conditions along {}", p.duality.join(",")),
        sf.passed(),
        sf.clauses.iter().filter(|(_, ok)| !ok).map(|(c, _)| c.clone()).collect(),
    ));
    let singles: BTreeMap<String, bool> = (0..n).map(|i| (labels[i].clone(), sf_conditions_check(&flux, &[i]).passed())).collect();
    report.output("admissible_directions", json!(singles));
    let f2 = match swap_frame(&f1, &duality, &phi) {
        Ok(f) => {
            report.push(Verdict::symbolic("swapped frame preserves η", true, vec![]));
            f
        }
        Err(e) => {
            report.push(Verdict::symbolic("swapped frame preserves η", false, vec![e.to_string()]));
            return Ok(());
        }
    };
    let target = phi.target().clone();
    report.output(
        "swapped_frame",
        json!(f2.frame().fields().iter().map(|x| x.to_strings(&target)).collect::<Vec<_>>()),
    );
    report.output("swapped_fluxes", json!(render_fluxes(&f2.flux_extract(), &labels, &target)));
    let hc = f2.hcan_flux()?;
    report.output("hcan", form_json(&hc.h, &target));
    report.push(Verdict::symbolic("canonical flux is closed", hc.closed, vec![]));
    report.push(Verdict::symbolic("canonical flux matches the brackets", hc.bracket_cross_check, vec![]));
    let explicit = para_buscher(&g1, &duality)?;
    let routed = para_buscher_h_route(&g1, &duality)?;
    report.push(Verdict::symbolic("Buscher rules agree with the ℋ route", explicit == routed, vec![]));
    let g2 = explicit.push(&phi)?;
    report.output("g2_plus", matrix_json(g2.g_plus(), &target));
    report.output("b2_plus", matrix_json(g2.b_plus(), &target));
    let residual = pullback_identity_check(&f1, &g1, &f2, &g2, &phi)?;
    report.push(Verdict::symbolic(
        "φ^*ℋ₂ = ℋ₁",
        residual.is_zero(),
        if residual.is_zero() { vec![] } else { vec![residual.render(&chart)] },
    ));
    Ok(())
}

fn render_fluxes(flux: &crate::para::FluxData, labels: &[String], chart: &Chart) -> Vec<String> {
    flux.nonzero()
        .into_iter()
        .map(|(block, i, j, k, c)| {
            let l = |a: usize| labels[a].as_str();
            let value = c.to_string_with(chart);
            match block {
                "f" => format!("f_{{{} {}}}^{{{}}} = {value}", l(i), l(j), l(k)),
                "H" => format!("H_{{{} {} {}}} = {value}", l(i), l(j), l(k)),
                "Q" => format!("Q_{{{}}}^{{{} {}}} = {value}", l(k), l(i), l(j)),
                _ => format!("R^{{{} {} {}}} = {value}", l(i), l(j), l(k)),
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Packaged examples
// ---------------------------------------------------------------------------

fn strings<S: AsRef<str>>(v: &[S]) -> Vec<String> {
    v.iter().map(|s| s.as_ref().to_string()).collect()
}

fn identity_strings(n: usize) -> Vec<Vec<String>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { "1" } else { "0" }.to_string()).collect()).collect()
}

fn terms_to_doc(terms: Vec<(Vec<String>, String)>) -> Vec<FormTerm> {
    terms.into_iter().map(|(idx, c)| (idx.into_iter().map(IndexRef::Name).collect(), c)).collect()
}

fn coframe_wedge(frame: &Frame, chart: &Chart, a: &str, b: &str, sign: i64) -> Vec<FormTerm> {
    let ia = frame.index_of(a).expect("preset label");
    let ib = frame.index_of(b).expect("preset label");
    let w = frame.coframe_form(ia).wedge(frame.coframe_form(ib)).expect("same chart");
    let w = w.scale(&crate::rational::q(sign));
    terms_to_doc(w.to_terms(chart))
}

/// The doubled lens space: a circle bundle of degree `m` over the plane
/// with flux `k`, its dual fiber twisted by `n`. The pair is reducible on
/// both sides exactly when `n = k`.
pub fn lens_document(m: i64, k: i64, n: i64) -> ProblemDocument {
    let names = ["x", "y", "z", "zt"];
    let chart = Chart::new(&names).expect("valid names");
    let frame_doc = FrameDoc {
        labels: strings(&names),
        fields: vec![
            strings(&["1", "0", "0", "0"]),
            vec!["0".into(), "1".into(), format!("{}*x", -m), format!("{}*x", -n)],
            strings(&["0", "0", "1", "0"]),
            strings(&["0", "0", "0", "1"]),
        ],
    };
    let frame = Frame::parse(frame_doc.labels.clone(), &frame_doc.fields, &chart).expect("preset frame");
    ProblemDocument {
        chart: strings(&names),
        frame: Some(frame_doc),
        h: if k == 0 { vec![] } else { vec![(vec![IndexRef::Name("x".into()), IndexRef::Name("y".into()), IndexRef::Name("z".into())], k.to_string())] },
        subbundles: vec![
            SubbundleDoc {
                name: "K1".into(),
                span: strings(&["zt"]),
                fiber_coords: strings(&["zt"]),
                shift_b: vec![],
                quotient: None,
            },
            SubbundleDoc {
                name: "K2".into(),
                span: strings(&["z"]),
                fiber_coords: strings(&["z"]),
                shift_b: coframe_wedge(&frame, &chart, "z", "zt", -1),
                quotient: None,
            },
        ],
        metric: Some(MetricDoc {
            subbundle: "K1".into(),
            g: identity_strings(3),
            b: None,
        }),
        iso: vec![strings(&["0", "0", "1"])],
        tduality: Some(TDualityDoc {
            k1: "K1".into(),
            k2: "K2".into(),
        }),
        para: None,
        sample: SampleDoc::default(),
        command: Some("tdualize".into()),
    }
}

/// The doubled Heisenberg nilmanifold with flux parameter `m`, dualised
/// along `y`; the dual quotient has coordinates `(xp, yp, zp)`.
pub fn heisenberg_document(m: i64) -> ProblemDocument {
    let names = ["x", "y", "z", "xt", "yt", "zt"];
    let chart = Chart::new(&names).expect("valid names");
    let frame_doc = FrameDoc {
        labels: strings(&names),
        fields: vec![
            strings(&["1", "0", "0", "0", "0", "0"]),
            strings(&["0", "1", "0", "0", "0", "0"]),
            vec!["0".into(), format!("{m}*x"), "1".into(), "0".into(), "0".into(), "0".into()],
            strings(&["0", "0", "0", "1", "0", "0"]),
            vec!["0".into(), "0".into(), "0".into(), format!("{m}*z"), "1".into(), format!("{}*x", -m)],
            strings(&["0", "0", "0", "0", "0", "1"]),
        ],
    };
    let frame = Frame::parse(frame_doc.labels.clone(), &frame_doc.fields, &chart).expect("preset frame");
    ProblemDocument {
        chart: strings(&names),
        frame: Some(frame_doc),
        h: vec![],
        subbundles: vec![
            SubbundleDoc {
                name: "K1".into(),
                span: strings(&["xt", "yt", "zt"]),
                fiber_coords: strings(&["xt", "yt", "zt"]),
                shift_b: vec![],
                quotient: None,
            },
            SubbundleDoc {
                name: "K2".into(),
                span: strings(&["y", "xt", "zt"]),
                fiber_coords: strings(&["y", "xt", "zt"]),
                shift_b: coframe_wedge(&frame, &chart, "y", "yt", 1),
                quotient: Some(QuotientDoc {
                    order: strings(&["x", "yt", "z"]),
                    names: strings(&["xp", "yp", "zp"]),
                }),
            },
        ],
        metric: Some(MetricDoc {
            subbundle: "K1".into(),
            g: identity_strings(3),
            b: None,
        }),
        iso: vec![strings(&["0", "1", "0"])],
        tduality: Some(TDualityDoc {
            k1: "K1".into(),
            k2: "K2".into(),
        }),
        para: Some(ParaDoc {
            duality: strings(&["y"]),
            phi: MapDoc {
                target: strings(&["xp", "yp", "zp", "xtp", "ytp", "ztp"]),
                forward: vec!["x".into(), "yt".into(), "z".into(), format!("xt - {m}*z*yt"), "y".into(), "zt".into()],
                inverse: vec!["xp".into(), "ytp".into(), "zp".into(), format!("xtp + {m}*zp*yp"), "yp".into(), "ztp".into()],
            },
            g_plus: identity_strings(3),
            b_plus: None,
        }),
        sample: SampleDoc::default(),
        command: Some("tdualize".into()),
    }
}

/// The doubled circle of radius `r` (a rational string such as `"2"` or
/// `"3/2"`), dualised along its fiber.
pub fn circle_document(r: &str) -> Result<ProblemDocument> {
    let r = crate::rational::parse_rational(r).ok_or_else(|| GeomError::parse("R", format!("bad rational `{r}`")))?;
    if r == crate::rational::q(0) {
        return Err(GeomError::parse("R", "the radius must be nonzero"));
    }
    let r2 = crate::rational::format_rational(&(&r * &r));
    Ok(ProblemDocument {
        chart: strings(&["z", "zt"]),
        frame: Some(FrameDoc {
            labels: strings(&["z", "zt"]),
            fields: identity_strings(2),
        }),
        h: vec![],
        subbundles: vec![
            SubbundleDoc {
                name: "K1".into(),
                span: strings(&["zt"]),
                fiber_coords: strings(&["zt"]),
                shift_b: vec![],
                quotient: None,
            },
            SubbundleDoc {
                name: "K2".into(),
                span: strings(&["z"]),
                fiber_coords: strings(&["z"]),
                shift_b: vec![(vec![IndexRef::Name("z".into()), IndexRef::Name("zt".into())], "-1".into())],
                quotient: None,
            },
        ],
        metric: Some(MetricDoc {
            subbundle: "K1".into(),
            g: vec![vec![r2.clone()]],
            b: None,
        }),
        iso: vec![strings(&["1"])],
        tduality: Some(TDualityDoc {
            k1: "K1".into(),
            k2: "K2".into(),
        }),
        para: Some(ParaDoc {
            duality: strings(&["z"]),
            phi: MapDoc {
                target: strings(&["zp", "ztp"]),
                forward: strings(&["zt", "z"]),
                inverse: strings(&["ztp", "zp"]),
            },
            g_plus: vec![vec![r2]],
            b_plus: None,
        }),
        sample: SampleDoc::default(),
        command: Some("tdualize".into()),
    })
}

/// Emits a packaged example by name: `lens` (params `m, k, n`),
/// `heisenberg` (`m`) or `circle` (`R`).
pub fn cmd_example(name: &str, params: &BTreeMap<String, String>) -> Result<ProblemDocument> {
    let int = |key: &str, default: i64| -> Result<i64> {
        params
            .get(key)
            .map(|v| v.parse::<i64>().map_err(|_| GeomError::parse(key, format!("expected an integer, found `{v}`"))))
            .unwrap_or(Ok(default))
    };
    match name {
        "lens" => Ok(lens_document(int("m", 1)?, int("k", 1)?, int("n", 1)?)),
        "heisenberg" => Ok(heisenberg_document(int("m", 1)?)),
        "circle" => circle_document(params.get("R").map(String::as_str).unwrap_or("2")),
        other => Err(GeomError::parse("example", format!("unknown example `{other}` (lens, heisenberg, circle)"))),
    }
}

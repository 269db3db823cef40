//! Almost para-Hermitian structures from diagonalising frames.
//!
//! A frame `{Z_i, Z̃^i}` of a `2n`-dimensional chart, with coframe
//! `{Θ^i, Θ̃_i}`, defines
//!
//! ```text
//! η = Θ^i ⊗ Θ̃_i + Θ̃_i ⊗ Θ^i,   𝒦 = Θ^i ⊗ Z_i − Θ̃_i ⊗ Z̃^i,   ω = Θ^i ∧ Θ̃_i.
//! ```
//!
//! Its structure functions split into the flux blocks `f, H, Q, R`:
//!
//! ```text
//! [Z_i, Z_j]   = f_ij^k Z_k + H_ijk Z̃^k
//! [Z̃^i, Z̃^j] = Q_k^ij Z̃^k + R^ijk Z_k
//! ```
//!
//! Duality directions are positions in the `L₊` block (`0..n`).

use std::collections::BTreeMap;


use crate::chart::Chart;
use crate::error::{GeomError, Result};
use crate::exterior::{DiffeoMap, Form, Frame};
use crate::genmetric::block;
use crate::poly::Poly;
use crate::polymat::PolyMat;

/// A frame whose first half spans `L₊` and second half `L₋`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParaHermitianFrame {
    chart: Chart,
    frame: Frame,
    n: usize,
}

impl ParaHermitianFrame {
    /// Validates the even split and the compatibility identities
    /// `𝒦ᵀ η 𝒦 = −η` and `ω = η(𝒦·, ·)` in coordinates.
    pub fn new(chart: Chart, frame: Frame) -> Result<Self> {
        if frame.dim() != chart.dim() {
            return Err(GeomError::ChartMismatch {
                expected: chart.dim(),
                found: frame.dim(),
            });
        }
        if frame.dim() % 2 != 0 {
            return Err(GeomError::Shape("a para-Hermitian frame needs an even number of fields".into()));
        }
        let pf = ParaHermitianFrame {
            n: frame.dim() / 2,
            chart,
            frame,
        };
        let eta = pf.eta_coords()?;
        let k = pf.k_coords()?;
        if k.transpose().mul(&eta).mul(&k) != eta.neg() {
            return Err(GeomError::InvalidMetric("𝒦 is not anti-isometric for η".into()));
        }
        if pf.omega().to_matrix()? != k.transpose().mul(&eta) {
            return Err(GeomError::InvalidMetric("ω differs from η(𝒦·, ·)".into()));
        }
        Ok(pf)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Rank of `L₊`.
    pub fn n(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        2 * self.n
    }

    /// `η` in frame components: `[[0, I], [I, 0]]`.
    pub fn eta_frame(&self) -> PolyMat {
        let (n, d) = (self.n, self.dim());
        block(&PolyMat::zeros(n, n, d), &PolyMat::identity(n, d), &PolyMat::identity(n, d), &PolyMat::zeros(n, n, d))
    }

    /// `η` as a coordinate tensor.
    pub fn eta_coords(&self) -> Result<PolyMat> {
        self.frame.tensor_to_coordinates(&self.eta_frame())
    }

    /// `𝒦` as an endomorphism of coordinate vectors: `Aᵀ diag(I, −I) A⁻ᵀ`.
    pub fn k_coords(&self) -> Result<PolyMat> {
        let (n, d) = (self.n, self.dim());
        let a = self.frame.matrix();
        let sign = PolyMat::from_fn(d, d, d, |i, j| match (i == j, i < n) {
            (true, true) => Poly::one(d),
            (true, false) => -Poly::one(d),
            _ => Poly::zero(d),
        });
        Ok(a.transpose().mul(&sign).mul(&a.inverse()?.transpose()))
    }

    /// `ω = Θ^i ∧ Θ̃_i`.
    pub fn omega(&self) -> Form {
        let mut w = Form::zero(self.dim(), 2);
        for i in 0..self.n {
            let t = self.frame.coframe_form(i).wedge(self.frame.coframe_form(self.n + i)).expect("same chart");
            w = &w + &t;
        }
        w
    }

    /// Sorts the structure functions into the four flux blocks.
    pub fn flux_extract(&self) -> FluxData {
        let n = self.n;
        let mut flux = FluxData {
            n,
            ..FluxData::default()
        };
        for (i, j, k, c) in self.frame.nonzero_structure() {
            for (a, b, sign) in [(i, j, 1), (j, i, -1)] {
                let c = if sign < 0 { -&c } else { c.clone() };
                match (a < n, b < n, k < n) {
                    (true, true, true) => flux.f.insert((a, b, k), c),
                    (true, true, false) => flux.h.insert((a, b, k - n), c),
                    (false, false, false) => flux.q.insert((a - n, b - n, k - n), c),
                    (false, false, true) => flux.r.insert((a - n, b - n, k), c),
                    _ => flux.mixed.insert((a, b, k), c),
                };
            }
        }
        flux
    }

    /// `dω` projected to its `(+3, −0)` part in the frame grading, together
    /// with a closedness verdict and the cross-check against the bracket
    /// formula `dω(Z_i, Z_j, Z_k) = H_ijk + H_jki + H_kij`.
    pub fn hcan_flux(&self) -> Result<HcanReport> {
        let n = self.n;
        let comps = self.frame.form_components(&self.omega().d())?;
        let plus = Form::from_terms(
            self.dim(),
            3,
            comps.terms().filter(|(idx, _)| idx.iter().all(|&i| i < n)).map(|(i, c)| (i.clone(), c.clone())),
        );
        let h = self.frame.form_from_components(&plus)?;
        let flux = self.flux_extract();
        let mut agrees = true;
        for idx in crate::exterior::increasing_tuples(n, 3) {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            let expected = &(&flux.h_at(i, j, k) + &flux.h_at(j, k, i)) + &flux.h_at(k, i, j);
            agrees &= plus.component(&idx) == expected;
        }
        Ok(HcanReport {
            closed: h.d().is_zero(),
            bracket_cross_check: agrees,
            h,
        })
    }
}

/// The four flux blocks, keyed by ordered index triples (both orders of
/// the antisymmetric pair are stored); missing entries are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FluxData {
    pub n: usize,
    pub f: BTreeMap<(usize, usize, usize), Poly>,
    pub h: BTreeMap<(usize, usize, usize), Poly>,
    pub q: BTreeMap<(usize, usize, usize), Poly>,
    pub r: BTreeMap<(usize, usize, usize), Poly>,
    /// `[Z_i, Z̃^j]` components, kept for completeness.
    pub mixed: BTreeMap<(usize, usize, usize), Poly>,
}

impl FluxData {
    fn get(m: &BTreeMap<(usize, usize, usize), Poly>, key: (usize, usize, usize), nvars: usize) -> Poly {
        m.get(&key).cloned().unwrap_or_else(|| Poly::zero(nvars))
    }

    fn nvars(&self) -> usize {
        self.f
            .values()
            .chain(self.h.values())
            .chain(self.q.values())
            .chain(self.r.values())
            .next()
            .map(Poly::nvars)
            .unwrap_or(2 * self.n)
    }

    pub fn f_at(&self, i: usize, j: usize, k: usize) -> Poly {
        FluxData::get(&self.f, (i, j, k), self.nvars())
    }

    pub fn h_at(&self, i: usize, j: usize, k: usize) -> Poly {
        FluxData::get(&self.h, (i, j, k), self.nvars())
    }

    /// `(block, i, j, k, value)` for every nonzero entry with `i < j`.
    pub fn nonzero(&self) -> Vec<(&'static str, usize, usize, usize, Poly)> {
        let mut out = Vec::new();
        for (name, m) in [("f", &self.f), ("H", &self.h), ("Q", &self.q), ("R", &self.r)] {
            for (&(i, j, k), c) in m {
                if i < j {
                    out.push((name, i, j, k, c.clone()));
                }
            }
        }
        out
    }
}

/// Outcome of [`ParaHermitianFrame::hcan_flux`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HcanReport {
    /// `dω^{+3,−0}` as a coordinate form.
    pub h: Form,
    pub closed: bool,
    pub bracket_cross_check: bool,
}

/// Clause-by-clause admissibility of a set of duality directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfReport {
    pub clauses: Vec<(String, bool)>,
}

impl SfReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|(_, ok)| *ok)
    }
}

/// Evaluates the structure-function conditions for T-duality along the
/// given `L₊` positions (`d`) against the remaining ones (`s`).
pub fn sf_conditions_check(flux: &FluxData, duality: &[usize]) -> SfReport {
    let n = flux.n;
    let d: Vec<usize> = duality.to_vec();
    let s: Vec<usize> = (0..n).filter(|i| !d.contains(i)).collect();
    let all: Vec<usize> = (0..n).collect();
    let triples = |a: &[usize], b: &[usize], c: &[usize]| {
        let mut out = Vec::new();
        for &i in a {
            for &j in b {
                for &k in c {
                    out.push((i, j, k));
                }
            }
        }
        out
    };
    let all_zero = |f: &dyn Fn(usize, usize, usize) -> Poly, t: Vec<(usize, usize, usize)>| t.into_iter().all(|(i, j, k)| f(i, j, k).is_zero());
    let sym = |t: Vec<(usize, usize, usize)>| t.into_iter().all(|(i, j, k)| flux.h_at(i, j, k) == flux.h_at(i, k, j));
    let f = |i, j, k| flux.f_at(i, j, k);
    let h = |i, j, k| flux.h_at(i, j, k);
    let clauses = vec![
        ("R = 0".to_string(), flux.r.is_empty()),
        ("Q = 0".to_string(), flux.q.is_empty()),
        ("f_{dd}^i = 0".to_string(), all_zero(&f, triples(&d, &d, &all))),
        ("f_{ds}^i = 0".to_string(), all_zero(&f, triples(&d, &s, &all))),
        ("H_{ddd} = 0".to_string(), all_zero(&h, triples(&d, &d, &d))),
        ("H_{ids} = H_{isd}".to_string(), sym(triples(&all, &d, &s))),
        ("H_{sdd'} = H_{sd'd}".to_string(), sym(triples(&s, &d, &d))),
        ("H_{sds'} = H_{ss'd}".to_string(), sym(triples(&s, &d, &s))),
        ("H_{dd's} = H_{dsd'} (B invariance)".to_string(), sym(triples(&d, &d, &s))),
    ];
    SfReport { clauses }
}

/// Swaps `Z_d ↔ Z̃^d` for the duality positions and pushes the frame
/// forward along `φ`; verifies `φ^* η₂ = η₁`.
pub fn swap_frame(pf: &ParaHermitianFrame, duality: &[usize], phi: &DiffeoMap) -> Result<ParaHermitianFrame> {
    if phi.source() != pf.chart() {
        return Err(GeomError::Precondition("the map must start on the frame's chart".into()));
    }
    let n = pf.n;
    if duality.iter().any(|&d| d >= n) {
        return Err(GeomError::Shape("duality directions must be L₊ positions".into()));
    }
    let fields = (0..2 * n)
        .map(|i| {
            let src = match (i < n, duality.contains(&(i % n))) {
                (_, false) => i,
                (true, true) => i + n,
                (false, true) => i - n,
            };
            phi.pushforward(pf.frame.field(src))
        })
        .collect::<Result<Vec<_>>>()?;
    let frame = Frame::new(pf.frame.labels().to_vec(), fields)?;
    let swapped = ParaHermitianFrame::new(phi.target().clone(), frame)?;
    if phi.pullback_tensor(&swapped.eta_coords()?) != pf.eta_coords()? {
        return Err(GeomError::IsoCondition("the map does not preserve η".into()));
    }
    Ok(swapped)
}

/// A generalised para-Hermitian metric given by `(g₊, b₊)` in `L₊` frame
/// components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParaMetric {
    g_plus: PolyMat,
    b_plus: PolyMat,
    g_plus_inv: PolyMat,
}

impl GenParaMetric {
    pub fn new(g_plus: PolyMat, b_plus: PolyMat) -> Result<Self> {
        let n = g_plus.rows();
        if !g_plus.is_square() || b_plus.rows() != n || b_plus.cols() != n {
            return Err(GeomError::Shape("g₊ and b₊ must be square of equal size".into()));
        }
        if !g_plus.is_symmetric() || !b_plus.is_antisymmetric() {
            return Err(GeomError::InvalidMetric("g₊ must be symmetric and b₊ antisymmetric".into()));
        }
        let g_plus_inv = g_plus.inverse()?;
        Ok(GenParaMetric {
            g_plus,
            b_plus,
            g_plus_inv,
        })
    }

    pub fn g_plus(&self) -> &PolyMat {
        &self.g_plus
    }

    pub fn b_plus(&self) -> &PolyMat {
        &self.b_plus
    }

    /// `g₋ = g₊⁻¹` on `L₋` frame components.
    pub fn g_minus(&self) -> &PolyMat {
        &self.g_plus_inv
    }

    /// `ℋ = [[g₊ + γᵀ g₋ γ, −γᵀ g₋], [−g₋ γ, g₋]]` with `γ = b₊ᵀ`.
    pub fn h_matrix(&self) -> PolyMat {
        let gamma = self.b_plus.transpose();
        let gm = &self.g_plus_inv;
        block(
            &self.g_plus.add(&gamma.transpose().mul(gm).mul(&gamma)),
            &gamma.transpose().mul(gm).neg(),
            &gm.mul(&gamma).neg(),
            gm,
        )
    }

    /// `ℋ` as a coordinate tensor for the given frame.
    pub fn h_coords(&self, pf: &ParaHermitianFrame) -> Result<PolyMat> {
        pf.frame.tensor_to_coordinates(&self.h_matrix())
    }

    /// Pushes the component functions forward along `φ`.
    pub fn push(&self, phi: &DiffeoMap) -> Result<GenParaMetric> {
        GenParaMetric::new(self.g_plus.compose(phi.inverse()), self.b_plus.compose(phi.inverse()))
    }
}

fn scatter(n: usize, nv: usize, pieces: &[(&[usize], &[usize], PolyMat)]) -> PolyMat {
    let mut out = PolyMat::zeros(n, n, nv);
    for (rows, cols, m) in pieces {
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(i, j)] = m[(a, b)].clone();
            }
        }
    }
    out
}

/// The para-Hermitian Buscher rules in component form. With
/// `k = (g₊ + b₊)ᵀ` split into duality (`d`) and spectator (`s`) blocks and
/// `P = k_dd⁻¹`:
///
/// ```text
/// k₂^{dd} = P,  k₂^{ds} = −P k_ds,  k₂^{sd} = k_sd P,  k₂^{ss} = k_ss − k_sd P k_ds
/// ```
///
/// and `g₂₊ + b₂₊ = k₂ᵀ`. For `b₊ = 0` this is `(g₂₊)_dd = g_dd⁻¹`,
/// `(g₂₊)_ss = g_ss − g_sd g_dd⁻¹ g_ds`, `(b₂₊)_ds = g_dd⁻¹ g_ds`.
pub fn para_buscher(g: &GenParaMetric, duality: &[usize]) -> Result<GenParaMetric> {
    let n = g.g_plus.rows();
    let nv = g.g_plus.nvars();
    let d: Vec<usize> = duality.to_vec();
    let s: Vec<usize> = (0..n).filter(|i| !d.contains(i)).collect();
    let k = g.g_plus.add(&g.b_plus).transpose();
    let p = k
        .select(&d, &d)
        .inverse()
        .map_err(|_| GeomError::NotInvertible("the duality block of g₊ + b₊".into()))?;
    let (k_ds, k_sd) = (k.select(&d, &s), k.select(&s, &d));
    let k2 = scatter(
        n,
        nv,
        &[
            (&d, &d, p.clone()),
            (&d, &s, p.mul(&k_ds).neg()),
            (&s, &d, k_sd.mul(&p)),
            (&s, &s, k.select(&s, &s).sub(&k_sd.mul(&p).mul(&k_ds))),
        ],
    );
    let h2 = k2.transpose();
    GenParaMetric::new(h2.sym_part(), h2.antisym_part())
}

/// The same rules obtained by permuting `ℋ` along the swap `Z_d ↔ Z̃^d` and
/// reading `(g₂₊, b₂₊)` back from the block form: `g₋ = D`, `g₊ = D⁻¹`,
/// `b₊ = −C D⁻¹`, with the remaining block checked for consistency.
pub fn para_buscher_h_route(g: &GenParaMetric, duality: &[usize]) -> Result<GenParaMetric> {
    let n = g.g_plus.rows();
    let h = g.h_matrix();
    let perm: Vec<usize> = (0..2 * n)
        .map(|i| match (i < n, duality.contains(&(i % n))) {
            (_, false) => i,
            (true, true) => i + n,
            (false, true) => i - n,
        })
        .collect();
    let h2 = h.select(&perm, &perm);
    let plus: Vec<usize> = (0..n).collect();
    let minus: Vec<usize> = (n..2 * n).collect();
    let c = h2.select(&plus, &minus);
    let dm = h2.select(&minus, &minus);
    let g2 = dm.inverse().map_err(|_| GeomError::NotInvertible("L₋ block of the permuted ℋ".into()))?;
    let b2 = c.mul(&g2).neg();
    let out = GenParaMetric::new(g2, b2)?;
    if out.h_matrix() != h2 {
        return Err(GeomError::InvalidMetric("permuted ℋ is not of generalised para-Hermitian form".into()));
    }
    Ok(out)
}

/// Residual `φ^*ℋ₂ − ℋ₁` in coordinates of the source chart.
pub fn pullback_identity_check(
    f1: &ParaHermitianFrame,
    g1: &GenParaMetric,
    f2: &ParaHermitianFrame,
    g2: &GenParaMetric,
    phi: &DiffeoMap,
) -> Result<PolyMat> {
    let h1 = g1.h_coords(f1)?;
    let h2 = g2.h_coords(f2)?;
    Ok(phi.pullback_tensor(&h2).sub(&h1))
}

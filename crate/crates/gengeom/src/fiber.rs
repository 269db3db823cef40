//! Pointwise exact linear algebra for Courant algebroid relations.
//!
//! A fiber is a product of split-signature spaces `E_1 × Ē_2 × …`; each
//! factor of rank `2n` stores vectors as `[X^1..X^n, α_1..α_n]` and carries
//! the pairing `sign · (Σ X^i β_i + Y^i α_i)`. Subspaces are kept in reduced
//! row-echelon form so equality is syntactic.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{GeomError, Result};
use crate::linalg::QMat;
use crate::rational::Q;

/// One factor of a product fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    /// Rank of the tangent part; the factor has dimension `2n`.
    pub n: usize,
    /// `+1` for `E`, `−1` for `Ē`.
    pub sign: i8,
}

/// A product of split-signature factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSpace {
    factors: Vec<Factor>,
}

impl FiberSpace {
    pub fn new(factors: Vec<Factor>) -> Self {
        assert!(factors.iter().all(|f| f.sign == 1 || f.sign == -1), "factor signs must be ±1");
        FiberSpace { factors }
    }

    /// A single factor `E` of rank `2n`.
    pub fn single(n: usize) -> Self {
        FiberSpace::new(vec![Factor { n, sign: 1 }])
    }

    /// `E_1 × Ē_2`.
    pub fn product(n1: usize, n2: usize) -> Self {
        FiberSpace::new(vec![Factor { n: n1, sign: 1 }, Factor { n: n2, sign: -1 }])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| 2 * f.n).sum()
    }

    /// Offset of factor `k` in the concatenated vector.
    pub fn offset(&self, k: usize) -> usize {
        self.factors[..k].iter().map(|f| 2 * f.n).sum()
    }

    /// The Gram matrix of the pairing.
    pub fn pairing_matrix(&self) -> QMat {
        let d = self.dim();
        let mut m = QMat::zeros(d, d);
        for (k, f) in self.factors.iter().enumerate() {
            let o = self.offset(k);
            let s = Q::from_integer(f.sign.into());
            for i in 0..f.n {
                m[(o + i, o + f.n + i)] = s.clone();
                m[(o + f.n + i, o + i)] = s.clone();
            }
        }
        m
    }

    pub fn pairing(&self, a: &[Q], b: &[Q]) -> Q {
        let g = self.pairing_matrix();
        let gb = g.mul_vec(b);
        a.iter().zip(&gb).fold(Q::zero(), |acc, (x, y)| acc + x * y)
    }

    /// Half the dimension: the rank of a maximally isotropic subspace.
    pub fn half_dim(&self) -> usize {
        self.dim() / 2
    }
}

/// A subspace of a [`FiberSpace`], stored in canonical (RREF) form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSubspace {
    space: FiberSpace,
    basis: QMat,
}

impl FiberSubspace {
    /// The span of the given rows.
    pub fn span(space: FiberSpace, rows: Vec<Vec<Q>>) -> Result<Self> {
        let d = space.dim();
        if rows.iter().any(|r| r.len() != d) {
            return Err(GeomError::Shape(format!("fiber vectors must have length {d}")));
        }
        let basis = QMat::from_rows(d, rows).row_space();
        Ok(FiberSubspace { space, basis })
    }

    pub fn from_matrix(space: FiberSpace, m: &QMat) -> Result<Self> {
        FiberSubspace::span(space, m.row_vecs())
    }

    pub fn zero(space: FiberSpace) -> Self {
        let d = space.dim();
        FiberSubspace {
            space,
            basis: QMat::zeros(0, d),
        }
    }

    pub fn whole(space: FiberSpace) -> Self {
        let d = space.dim();
        FiberSubspace {
            space,
            basis: QMat::identity(d),
        }
    }

    pub fn space(&self) -> &FiberSpace {
        &self.space
    }

    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.basis.contains_row(v)
    }

    pub fn contains_subspace(&self, other: &FiberSubspace) -> bool {
        other.basis.row_vecs().iter().all(|v| self.contains(v))
    }

    fn check_space(&self, other: &FiberSubspace) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(GeomError::Shape("subspaces live in different fiber spaces".into()))
        }
    }

    /// Annihilator with respect to the pairing.
    pub fn perp(&self) -> FiberSubspace {
        let d = self.space.dim();
        if self.dim() == 0 {
            return FiberSubspace::whole(self.space.clone());
        }
        let constraints = self.basis.mul(&self.space.pairing_matrix());
        let null = constraints.nullspace();
        FiberSubspace {
            space: self.space.clone(),
            basis: if null.rows() == 0 { QMat::zeros(0, d) } else { null.row_space() },
        }
    }

    pub fn intersect(&self, other: &FiberSubspace) -> Result<FiberSubspace> {
        self.check_space(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(FiberSubspace::zero(self.space.clone()));
        }
        Ok(FiberSubspace {
            space: self.space.clone(),
            basis: self.basis.intersect_rows(&other.basis),
        })
    }

    pub fn sum(&self, other: &FiberSubspace) -> Result<FiberSubspace> {
        self.check_space(other)?;
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        FiberSubspace::span(self.space.clone(), rows)
    }

    pub fn is_isotropic(&self) -> bool {
        let g = self.space.pairing_matrix();
        self.basis.mul(&g).mul(&self.basis.transpose()).is_zero()
    }

    /// Maximal isotropy: `S ⊆ S^⊥` and `dim S = dim / 2`.
    pub fn is_dirac(&self) -> bool {
        self.is_isotropic() && self.dim() == self.space.half_dim()
    }

    /// The transpose relation in `E_2 × Ē_1` of a relation in `E_1 × Ē_2`.
    pub fn transpose(&self) -> Result<FiberSubspace> {
        let f = self.space.factors();
        if f.len() != 2 {
            return Err(GeomError::Shape("transpose needs a two-factor fiber".into()));
        }
        let (d1, d2) = (2 * f[0].n, 2 * f[1].n);
        let space = FiberSpace::new(vec![Factor { n: f[1].n, sign: 1 }, Factor { n: f[0].n, sign: -1 }]);
        let rows = self
            .basis
            .row_vecs()
            .into_iter()
            .map(|r| {
                let mut v = r[d1..d1 + d2].to_vec();
                v.extend_from_slice(&r[..d1]);
                v
            })
            .collect();
        FiberSubspace::span(space, rows)
    }

    /// The elements whose components outside factor `k` vanish, projected to
    /// factor `k`.
    pub fn slice_in_factor(&self, k: usize) -> Result<FiberSubspace> {
        let f = self.space.factors().to_vec();
        let o = self.space.offset(k);
        let dk = 2 * f[k].n;
        let outside: Vec<usize> = (0..self.space.dim()).filter(|&c| c < o || c >= o + dk).collect();
        let inside: Vec<usize> = (o..o + dk).collect();
        let all_rows: Vec<usize> = (0..self.dim()).collect();
        // coefficients c with c · basis[:, outside] = 0
        let restricted = self.basis.select(&all_rows, &outside);
        let coeffs = restricted.transpose().nullspace();
        let inner = self.basis.select(&all_rows, &inside);
        let rows = coeffs.row_vecs().iter().map(|c| inner.transpose().mul_vec(c)).collect();
        FiberSubspace::span(FiberSpace::new(vec![Factor { n: f[k].n, sign: 1 }]), rows)
    }

    /// Projection onto factor `k`.
    pub fn project(&self, k: usize) -> Result<FiberSubspace> {
        let f = self.space.factors();
        let o = self.space.offset(k);
        let dk = 2 * f[k].n;
        let all_rows: Vec<usize> = (0..self.dim()).collect();
        let inside: Vec<usize> = (o..o + dk).collect();
        FiberSubspace::from_matrix(FiberSpace::new(vec![Factor { n: f[k].n, sign: 1 }]), &self.basis.select(&all_rows, &inside))
    }
}

impl fmt::Display for FiberSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis)
    }
}

/// `R′ ∘ R` together with the diamond diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    pub composite: FiberSubspace,
    /// `dim(R′ ⋄ R)`.
    pub diamond_dim: usize,
    /// Kernel of the projection `R′ ⋄ R → E_1 × Ē_3`, as a subspace of `E_2`.
    pub kernel: FiberSubspace,
}

/// Composes `R ⊆ E_1 × Ē_2` with `R′ ⊆ E_2 × Ē_3`.
pub fn compose(r: &FiberSubspace, r2: &FiberSubspace) -> Result<Composition> {
    let f1 = r.space().factors();
    let f2 = r2.space().factors();
    if f1.len() != 2 || f2.len() != 2 || f1[1].n != f2[0].n {
        return Err(GeomError::Shape("relations do not share a middle factor".into()));
    }
    let (d1, d2, d3) = (2 * f1[0].n, 2 * f1[1].n, 2 * f2[1].n);
    let u = r.basis();
    let w = r2.basis();
    let (ku, kw) = (u.rows(), w.rows());
    // coefficients (c, c′) with c·U_{E2} = c′·W_{E2}
    let mid_u: Vec<usize> = (d1..d1 + d2).collect();
    let mid_w: Vec<usize> = (0..d2).collect();
    let um = u.select(&(0..ku).collect::<Vec<_>>(), &mid_u);
    let wm = w.select(&(0..kw).collect::<Vec<_>>(), &mid_w);
    let system = um.vstack(&wm.scale(&(-Q::one()))).transpose();
    let null = if ku + kw == 0 { QMat::zeros(0, 0) } else { system.nullspace() };
    let mut diamond = Vec::new();
    let mut image = Vec::new();
    for coef in null.row_vecs() {
        let mut a = vec![Q::zero(); d1];
        let mut b = vec![Q::zero(); d2];
        let mut c = vec![Q::zero(); d3];
        for (i, ci) in coef[..ku].iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for j in 0..d1 {
                a[j] += ci * &u[(i, j)];
            }
            for j in 0..d2 {
                b[j] += ci * &u[(i, d1 + j)];
            }
        }
        for (i, ci) in coef[ku..].iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for j in 0..d3 {
                c[j] += ci * &w[(i, d2 + j)];
            }
        }
        let mut full = a.clone();
        full.extend(b);
        full.extend(c.clone());
        diamond.push(full);
        let mut ac = a;
        ac.extend(c);
        image.push(ac);
    }
    let diamond_dim = if diamond.is_empty() { 0 } else { QMat::from_rows(d1 + d2 + d3, diamond).rank() };
    let space = FiberSpace::new(vec![Factor { n: f1[0].n, sign: 1 }, Factor { n: f2[1].n, sign: -1 }]);
    let composite = FiberSubspace::span(space, image)?;
    let kernel = r.slice_in_factor(1)?.intersect(&r2.slice_in_factor(0)?)?;
    Ok(Composition {
        composite,
        diamond_dim,
        kernel,
    })
}

/// The graph `{(e, A e)}` of a linear map `A: E_1 → E_2` in `E_1 × Ē_2`.
pub fn graph(a: &QMat, n1: usize, n2: usize) -> Result<FiberSubspace> {
    if a.cols() != 2 * n1 || a.rows() != 2 * n2 {
        return Err(GeomError::Shape("graph map has the wrong shape".into()));
    }
    let rows = (0..2 * n1)
        .map(|i| {
            let mut e = vec![Q::zero(); 2 * n1];
            e[i] = Q::one();
            let img = a.mul_vec(&e);
            e.extend(img);
            e
        })
        .collect();
    FiberSubspace::span(FiberSpace::product(n1, n2), rows)
}

/// `Q(K) = {(e, ♮ e) : e ∈ K^⊥}` for a subspace `K` of a single factor and
/// a projection `♮` given as a `2q × 2n` matrix.
pub fn qk_fiber(k: &FiberSubspace, natural: &QMat) -> Result<FiberSubspace> {
    let f = k.space().factors();
    if f.len() != 1 {
        return Err(GeomError::Shape("K must live in a single factor".into()));
    }
    let n = f[0].n;
    if natural.cols() != 2 * n || natural.rows() % 2 != 0 {
        return Err(GeomError::Shape("projection has the wrong shape".into()));
    }
    let q = natural.rows() / 2;
    let rows = k
        .perp()
        .basis()
        .row_vecs()
        .into_iter()
        .map(|e| {
            let img = natural.mul_vec(&e);
            let mut v = e;
            v.extend(img);
            v
        })
        .collect();
    FiberSubspace::span(FiberSpace::product(n, q), rows)
}

/// The projection that drops the listed frame indices from `[X, α]`.
pub fn drop_indices(n: usize, dropped: &[usize]) -> QMat {
    let kept: Vec<usize> = (0..n).filter(|i| !dropped.contains(i)).collect();
    let q = kept.len();
    let mut m = QMat::zeros(2 * q, 2 * n);
    for (r, &i) in kept.iter().enumerate() {
        m[(r, i)] = Q::one();
        m[(q + r, n + i)] = Q::one();
    }
    m
}

/// Verifies `Q(K)^⊥ = K × {0} + Q(K)`.
pub fn qk_perp_decomposition_check(k: &FiberSubspace, qk: &FiberSubspace) -> Result<bool> {
    let q = qk.space().factors()[1].n;
    let rows = k
        .basis()
        .row_vecs()
        .into_iter()
        .map(|mut v| {
            v.extend(std::iter::repeat(Q::zero()).take(2 * q));
            v
        })
        .collect();
    let k0 = FiberSubspace::span(qk.space().clone(), rows)?;
    Ok(qk.perp() == k0.sum(qk)?)
}

/// Embeds single-factor subspaces `A ⊆ E_1`, `B ⊆ E_2` as `A × B ⊆ E_1 × Ē_2`.
pub fn product_subspace(a: &FiberSubspace, b: &FiberSubspace) -> Result<FiberSubspace> {
    let (n1, n2) = (a.space().factors()[0].n, b.space().factors()[0].n);
    let mut rows = Vec::new();
    for r in a.basis().row_vecs() {
        let mut v = r;
        v.extend(std::iter::repeat(Q::zero()).take(2 * n2));
        rows.push(v);
    }
    for r in b.basis().row_vecs() {
        let mut v = vec![Q::zero(); 2 * n1];
        v.extend(r);
        rows.push(v);
    }
    FiberSubspace::span(FiberSpace::product(n1, n2), rows)
}

/// Outcome of an isometry decomposition test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionCheck {
    pub relation_dim: usize,
    pub plus_dim: usize,
    pub minus_dim: usize,
    /// `dim(R ∩ (𝒱⁺ ⊕ 𝒱⁻))`, equal to `dim R` for generalised metrics.
    pub ambient_dim: usize,
}

impl DecompositionCheck {
    pub fn passed(&self) -> bool {
        self.plus_dim + self.minus_dim == self.ambient_dim
    }
}

/// `R = (𝒱⁺ ∩ R) ⊕ (𝒱⁻ ∩ R)` with `𝒱^± = V_1^± × V_2^±` and
/// `V^- = (V^+)^⊥` in each factor.
pub fn isometry_decomposition_check(r: &FiberSubspace, v1: &FiberSubspace, v2: &FiberSubspace) -> Result<DecompositionCheck> {
    let plus = product_subspace(v1, v2)?;
    let minus = product_subspace(&v1.perp(), &v2.perp())?;
    let ambient = plus.sum(&minus)?;
    Ok(DecompositionCheck {
        relation_dim: r.dim(),
        plus_dim: r.intersect(&plus)?.dim(),
        minus_dim: r.intersect(&minus)?.dim(),
        ambient_dim: r.intersect(&ambient)?.dim(),
    })
}

/// Lifts `W̃^±` of `W^± = W/K` and `W^⊥/K` for one factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransverseLifts {
    pub w: FiberSubspace,
    pub k: FiberSubspace,
    pub plus: FiberSubspace,
    pub minus: FiberSubspace,
}

impl TransverseLifts {
    /// Validates `K ⊆ W ⊆ K^⊥`, `W̃⁺ ⊆ W`, `W̃⁻ ⊆ W^⊥`, complementarity to
    /// `K` and the expected dimensions; returns the reason on failure.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let (w, k) = (&self.w, &self.k);
        if !w.contains_subspace(k) || !k.perp().contains_subspace(w) {
            return Err("W must satisfy K ⊆ W ⊆ K^⊥".into());
        }
        let wp = w.perp();
        if !w.contains_subspace(&self.plus) {
            return Err("the positive lift is not contained in W".into());
        }
        if !wp.contains_subspace(&self.minus) {
            return Err("the negative lift is not contained in W^⊥".into());
        }
        let zero_plus = self.plus.intersect(k).map_err(|e| e.to_string())?.dim() == 0;
        let zero_minus = self.minus.intersect(k).map_err(|e| e.to_string())?.dim() == 0;
        if !zero_plus || !zero_minus {
            return Err("a lift meets K".into());
        }
        if self.plus.dim() + k.dim() != w.dim() || self.minus.dim() + k.dim() != wp.dim() {
            return Err("lifts have the wrong dimension".into());
        }
        Ok(())
    }

    /// Lifts for an honest generalised metric (`K = 0`).
    pub fn untwisted(vplus: &FiberSubspace) -> TransverseLifts {
        TransverseLifts {
            w: vplus.clone(),
            k: FiberSubspace::zero(vplus.space().clone()),
            plus: vplus.clone(),
            minus: vplus.perp(),
        }
    }
}

/// Outcome of [`transverse_isometry_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransverseCheck {
    pub lift_problem: Option<String>,
    pub decomposition: Option<DecompositionCheck>,
}

impl TransverseCheck {
    pub fn passed(&self) -> bool {
        self.lift_problem.is_none() && self.decomposition.as_ref().is_some_and(DecompositionCheck::passed)
    }
}

/// `R ∩ (𝒲⁺ ⊕ 𝒲⁻) = (R ∩ 𝒲⁺) ⊕ (R ∩ 𝒲⁻)` with `𝒲^± = W̃_1^± × W̃_2^±`.
pub fn transverse_isometry_check(r: &FiberSubspace, l1: &TransverseLifts, l2: &TransverseLifts) -> Result<TransverseCheck> {
    for l in [l1, l2] {
        if let Err(e) = l.validate() {
            return Ok(TransverseCheck {
                lift_problem: Some(e),
                decomposition: None,
            });
        }
    }
    let plus = product_subspace(&l1.plus, &l2.plus)?;
    let minus = product_subspace(&l1.minus, &l2.minus)?;
    let ambient = plus.sum(&minus)?;
    Ok(TransverseCheck {
        lift_problem: None,
        decomposition: Some(DecompositionCheck {
            relation_dim: r.dim(),
            plus_dim: r.intersect(&plus)?.dim(),
            minus_dim: r.intersect(&minus)?.dim(),
            ambient_dim: r.intersect(&ambient)?.dim(),
        }),
    })
}

/// `pr₁(R₁ ∩ (E₁ × D)) ⊆ K₁` or `pr₂(R₂ ∩ (D × E₃)) ⊆ K₃` where `D` is the
/// image of the difference of two splittings.
pub fn splitting_compat_check(
    r1: &FiberSubspace,
    r2: &FiberSubspace,
    difference: &FiberSubspace,
    k1: &FiberSubspace,
    k3: &FiberSubspace,
) -> Result<bool> {
    let n1 = r1.space().factors()[0].n;
    let n3 = r2.space().factors()[1].n;
    let whole1 = FiberSubspace::whole(FiberSpace::single(n1));
    let whole3 = FiberSubspace::whole(FiberSpace::single(n3));
    let left = r1.intersect(&product_subspace(&whole1, difference)?)?.project(0)?;
    if k1.contains_subspace(&left) {
        return Ok(true);
    }
    let right = r2.intersect(&product_subspace(difference, &whole3)?)?.project(1)?;
    Ok(k3.contains_subspace(&right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn perp_dimensions() {
        let s = FiberSubspace::span(FiberSpace::single(3), vec![v(&[1, 0, 0, 0, 0, 0])]).unwrap();
        assert_eq!(s.perp().dim(), 5);
        assert_eq!(s.perp().perp(), s);
    }

    #[test]
    fn bfield_graph_is_dirac() {
        // gr(B) = {(X, ι_X B)} with B = [[0, 2], [-2, 0]]: ι_X B = -B X
        let rows = vec![v(&[1, 0, 0, 2]), v(&[0, 1, -2, 0])];
        let g = FiberSubspace::span(FiberSpace::single(2), rows).unwrap();
        assert!(g.is_dirac());
        assert_eq!(g.perp(), g);
    }

    #[test]
    fn tangent_factor_is_dirac() {
        let t = FiberSubspace::span(FiberSpace::single(2), vec![v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])]).unwrap();
        assert!(t.is_dirac());
        let half = FiberSubspace::span(FiberSpace::single(2), vec![v(&[1, 0, 0, 0])]).unwrap();
        assert!(!half.is_dirac());
    }

    #[test]
    fn compose_with_identity() {
        let id = graph(&QMat::identity(4), 2, 2).unwrap();
        let r = graph(&QMat::from_rows(4, vec![v(&[0, 1, 0, 0]), v(&[1, 0, 0, 0]), v(&[0, 0, 0, 1]), v(&[0, 0, 1, 0])]), 2, 2).unwrap();
        let c = compose(&r, &id).unwrap();
        assert_eq!(c.composite, r);
        assert_eq!(c.kernel.dim(), 0);
        assert_eq!(c.diamond_dim, 4);
    }

    #[test]
    fn qk_trivial_and_decomposition() {
        let zero = FiberSubspace::zero(FiberSpace::single(2));
        let qk = qk_fiber(&zero, &QMat::identity(4)).unwrap();
        assert_eq!(qk, graph(&QMat::identity(4), 2, 2).unwrap());
        let k = FiberSubspace::span(FiberSpace::single(2), vec![v(&[0, 1, 0, 0])]).unwrap();
        let qk = qk_fiber(&k, &drop_indices(2, &[1])).unwrap();
        assert_eq!(qk.dim(), 3);
        assert!(qk_perp_decomposition_check(&k, &qk).unwrap());
        assert!(qk.is_dirac());
    }

    #[test]
    fn classical_graph_is_isometry() {
        // identity relation between equal metrics g = 1 on a line
        let vp = FiberSubspace::span(FiberSpace::single(1), vec![v(&[1, 1])]).unwrap();
        let id = graph(&QMat::identity(2), 1, 1).unwrap();
        assert!(isometry_decomposition_check(&id, &vp, &vp).unwrap().passed());
        let other = FiberSubspace::span(FiberSpace::single(1), vec![v(&[1, 2])]).unwrap();
        assert!(!isometry_decomposition_check(&id, &vp, &other).unwrap().passed());
    }

    #[test]
    fn broken_lift_is_rejected() {
        let k = FiberSubspace::span(FiberSpace::single(2), vec![v(&[0, 1, 0, 0])]).unwrap();
        let w = FiberSubspace::span(FiberSpace::single(2), vec![v(&[0, 1, 0, 0]), v(&[1, 0, 1, 0])]).unwrap();
        let bad = TransverseLifts {
            w: w.clone(),
            k: k.clone(),
            plus: FiberSubspace::span(FiberSpace::single(2), vec![v(&[0, 0, 0, 1])]).unwrap(),
            minus: FiberSubspace::span(FiberSpace::single(2), vec![v(&[1, 0, -1, 0])]).unwrap(),
        };
        assert!(bad.validate().is_err());
        let good = TransverseLifts {
            plus: FiberSubspace::span(FiberSpace::single(2), vec![v(&[1, 0, 1, 0])]).unwrap(),
            ..bad
        };
        assert!(good.validate().is_ok(), "{:?}", good.validate());
    }

    #[test]
    fn splitting_compat_trivial() {
        let id = graph(&QMat::identity(4), 2, 2).unwrap();
        let zero = FiberSubspace::zero(FiberSpace::single(2));
        assert!(splitting_compat_check(&id, &id, &zero, &zero, &zero).unwrap());
        let d = FiberSubspace::span(FiberSpace::single(2), vec![v(&[1, 0, 0, 0])]).unwrap();
        assert!(!splitting_compat_check(&id, &id, &d, &zero, &zero).unwrap());
    }
}

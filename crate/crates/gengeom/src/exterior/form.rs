//! Differential forms with polynomial coefficients and Cartan calculus.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::chart::Chart;
use crate::error::{GeomError, Result};
use crate::exterior::vector::VectorField;
use crate::poly::Poly;
use crate::polymat::PolyMat;
use crate::rational::Q;

/// A `p`-form `Σ ω_I dx^I` over strictly increasing index tuples `I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Form {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Poly>,
}

/// Sorts `idx` in place, returning the permutation sign, or `None` when an
/// index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Form {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn function(f: Poly) -> Self {
        let mut out = Form::zero(f.nvars(), 0);
        out.add_term(vec![], f);
        out
    }

    /// The coordinate one-form `dx^i`.
    pub fn dx(dim: usize, i: usize) -> Self {
        Form::from_terms(dim, 1, vec![(vec![i], Poly::one(dim))])
    }

    /// The one-form `Σ c_i dx^i`.
    pub fn one_form(components: Vec<Poly>) -> Self {
        let dim = components.len();
        Form::from_terms(dim, 1, components.into_iter().enumerate().map(|(i, c)| (vec![i], c)))
    }

    /// Builds a form from arbitrary (possibly unsorted) index tuples,
    /// antisymmetrising signs and dropping repeated indices.
    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (Vec<usize>, Poly)>) -> Self {
        let mut out = Form::zero(dim, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "index tuple length differs from degree");
            assert!(idx.iter().all(|&i| i < dim), "index out of range");
            out.add_term(idx, c);
        }
        out
    }

    /// The two-form with `ω(∂_i, ∂_j) = m_ij` for an antisymmetric matrix.
    pub fn from_antisymmetric(m: &PolyMat) -> Result<Self> {
        if !m.is_square() || !m.is_antisymmetric() {
            return Err(GeomError::Shape("two-form needs an antisymmetric square matrix".into()));
        }
        let n = m.rows();
        let mut out = Form::zero(n, 2);
        for i in 0..n {
            for j in i + 1..n {
                out.add_term(vec![i, j], m[(i, j)].clone());
            }
        }
        Ok(out)
    }

    fn add_term(&mut self, mut idx: Vec<usize>, c: Poly) {
        assert_eq!(c.nvars(), self.dim, "coefficient chart differs from form chart");
        if c.is_zero() {
            return;
        }
        let Some(sign) = sort_with_sign(&mut idx) else { return };
        let c = if sign < 0 { -c } else { c };
        let entry = self.coeffs.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Non-zero coefficients keyed by increasing index tuples.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.coeffs.iter()
    }

    /// The coefficient on `dx^{idx}` for any ordering of `idx`.
    pub fn component(&self, idx: &[usize]) -> Poly {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => Poly::zero(self.dim),
            Some(sign) => {
                let c = self.coeffs.get(&sorted).cloned().unwrap_or_else(|| Poly::zero(self.dim));
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// The polynomial of a 0-form.
    pub fn as_function(&self) -> Result<Poly> {
        if self.degree != 0 {
            return Err(GeomError::DegreeMismatch {
                expected: 0,
                found: self.degree,
            });
        }
        Ok(self.component(&[]))
    }

    /// Components of a one-form in the coordinate basis.
    pub fn one_form_components(&self) -> Result<Vec<Poly>> {
        self.expect_degree(1)?;
        Ok((0..self.dim).map(|i| self.component(&[i])).collect())
    }

    /// The antisymmetric matrix `ω(∂_i, ∂_j)` of a two-form.
    pub fn to_matrix(&self) -> Result<PolyMat> {
        self.expect_degree(2)?;
        Ok(PolyMat::from_fn(self.dim, self.dim, self.dim, |i, j| self.component(&[i, j])))
    }

    pub fn expect_degree(&self, degree: usize) -> Result<()> {
        if self.degree == degree {
            Ok(())
        } else {
            Err(GeomError::DegreeMismatch {
                expected: degree,
                found: self.degree,
            })
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(GeomError::ChartMismatch {
                expected: self.dim,
                found: dim,
            })
        }
    }

    pub fn scale(&self, c: &Q) -> Form {
        Form::from_terms(self.dim, self.degree, self.coeffs.iter().map(|(i, p)| (i.clone(), p.scale(c))))
    }

    /// Multiplies by a function.
    pub fn mul_fn(&self, f: &Poly) -> Form {
        Form::from_terms(self.dim, self.degree, self.coeffs.iter().map(|(i, p)| (i.clone(), p * f)))
    }

    /// Exterior derivative `d(f dx^I) = Σ_j ∂_j f dx^j ∧ dx^I`.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.dim, self.degree + 1);
        for (idx, c) in &self.coeffs {
            for j in 0..self.dim {
                if idx.contains(&j) {
                    continue;
                }
                let dc = c.deriv(j);
                if dc.is_zero() {
                    continue;
                }
                let mut full = Vec::with_capacity(idx.len() + 1);
                full.push(j);
                full.extend_from_slice(idx);
                out.add_term(full, dc);
            }
        }
        out
    }

    /// Wedge product.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check_dim(other.dim)?;
        let mut out = Form::zero(self.dim, self.degree + other.degree);
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                if i.iter().any(|k| j.contains(k)) {
                    continue;
                }
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                out.add_term(idx, a * b);
            }
        }
        Ok(out)
    }

    /// Interior product `ι_X ω = ω(X, ·, …)`.
    pub fn interior(&self, x: &VectorField) -> Result<Form> {
        self.check_dim(x.dim())?;
        if self.degree == 0 {
            return Ok(Form::zero(self.dim, 0));
        }
        let mut out = Form::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.coeffs {
            for (k, &i) in idx.iter().enumerate() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(k);
                let t = xi * c;
                out.add_term(rest, if k % 2 == 0 { t } else { -t });
            }
        }
        Ok(out)
    }

    /// Lie derivative via Cartan's formula `£_X = ι_X d + d ι_X`.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<Form> {
        let a = self.d().interior(x)?;
        let b = self.interior(x)?.d();
        Ok(&a + &b)
    }

    /// Evaluates `ω(X_1, …, X_p)` as a polynomial.
    pub fn apply(&self, vectors: &[&VectorField]) -> Result<Poly> {
        if vectors.len() != self.degree {
            return Err(GeomError::DegreeMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        let mut cur = self.clone();
        for v in vectors {
            cur = cur.interior(v)?;
        }
        Ok(cur.component(&[]))
    }

    /// True when some coefficient depends on coordinate `i`.
    pub fn depends_on(&self, i: usize) -> bool {
        self.coeffs.values().any(|p| p.depends_on(i))
    }

    /// Values of the coefficients at a point.
    pub fn eval(&self, point: &[Q]) -> BTreeMap<Vec<usize>, Q> {
        self.coeffs
            .iter()
            .map(|(i, p)| (i.clone(), p.eval(point)))
            .filter(|(_, v)| *v != Q::from_integer(0.into()))
            .collect()
    }

    /// Serialised terms `(coordinate names, polynomial)`.
    pub fn to_terms(&self, chart: &Chart) -> Vec<(Vec<String>, String)> {
        self.coeffs
            .iter()
            .map(|(i, p)| (i.iter().map(|&k| chart.name(k).to_string()).collect(), p.to_string_with(chart)))
            .collect()
    }

    /// Parses serialised terms; indices may be names or integers.
    pub fn parse_terms(terms: &[(Vec<IndexRef>, String)], degree: usize, chart: &Chart, field: &str) -> Result<Form> {
        let mut out = Form::zero(chart.dim(), degree);
        for (idx, poly) in terms {
            if idx.len() != degree {
                return Err(GeomError::parse(
                    field,
                    format!("term has {} indices but a {degree}-form was expected", idx.len()),
                ));
            }
            let resolved = idx
                .iter()
                .map(|r| r.resolve(chart).map_err(|e| GeomError::parse(field, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let p = Poly::parse(poly, chart).map_err(|e| GeomError::parse(field, e.to_string()))?;
            out.add_term(resolved, p);
        }
        Ok(out)
    }

    /// Human-readable rendering such as `3*x dx^dy`.
    pub fn render(&self, chart: &Chart) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|(i, p)| {
                let basis: Vec<String> = i.iter().map(|&k| format!("d{}", chart.name(k))).collect();
                if basis.is_empty() {
                    p.to_string_with(chart)
                } else {
                    format!("({}) {}", p.to_string_with(chart), basis.join("^"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A coordinate reference in serialised forms: either a position or a name.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum IndexRef {
    Position(usize),
    Name(String),
}

impl IndexRef {
    pub fn resolve(&self, chart: &Chart) -> Result<usize> {
        match self {
            IndexRef::Position(i) if *i < chart.dim() => Ok(*i),
            IndexRef::Position(i) => Err(GeomError::UnknownName(format!("coordinate index {i}"))),
            IndexRef::Name(n) => chart.index_of(n).ok_or_else(|| GeomError::UnknownName(n.clone())),
        }
    }
}

/// Lie derivative of a vector field, `£_X Y = [X, Y]`.
pub fn lie_derivative_vector(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    x.bracket(y)
}

impl<'a> Add<&'a Form> for &'a Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        assert_eq!(self.dim, rhs.dim, "forms on different charts");
        assert_eq!(self.degree, rhs.degree, "forms of different degree");
        let mut out = self.clone();
        for (i, c) in &rhs.coeffs {
            out.add_term(i.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl<'a> Neg for &'a Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(i, c)| (i.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn chart() -> Chart {
        Chart::new(&["x", "y", "z"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, &chart()).unwrap()
    }

    fn one(a: &str, b: &str, c: &str) -> Form {
        Form::one_form(vec![p(a), p(b), p(c)])
    }

    #[test]
    fn d_of_heisenberg_coframe() {
        // d(dy - m x dz) = -m dx^dz with m = 2
        let theta = one("0", "1", "-2*x");
        assert_eq!(theta.d(), Form::from_terms(3, 2, vec![(vec![0, 2], p("-2"))]));
    }

    #[test]
    fn d_of_constant_and_exact() {
        assert!(Form::function(p("7")).d().is_zero());
        assert!(one("y", "x", "0").d().is_zero());
        assert_eq!(Form::function(p("x*y")).d(), one("y", "x", "0"));
    }

    #[test]
    fn interior_and_wedge_basics() {
        let dxdy = Form::dx(3, 0).wedge(&Form::dx(3, 1)).unwrap();
        assert_eq!(dxdy.interior(&VectorField::coord(3, 0)).unwrap(), Form::dx(3, 1));
        assert_eq!(dxdy.interior(&VectorField::coord(3, 1)).unwrap(), Form::dx(3, 0).scale(&q(-1)));
        assert!(Form::dx(3, 0).wedge(&Form::dx(3, 0)).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_along_leaf() {
        let theta = one("0", "1", "-3*x");
        assert!(theta.lie_derivative(&VectorField::coord(3, 2)).unwrap().is_zero());
    }

    #[test]
    fn component_sign_and_matrix() {
        let b = Form::from_terms(3, 2, vec![(vec![1, 0], p("x"))]);
        assert_eq!(b.component(&[0, 1]), p("-x"));
        let m = b.to_matrix().unwrap();
        assert_eq!(m[(1, 0)], p("x"));
        assert_eq!(Form::from_antisymmetric(&m).unwrap(), b);
    }

    #[test]
    fn apply_matches_determinant() {
        let dxdy = Form::dx(3, 0).wedge(&Form::dx(3, 1)).unwrap();
        let x = VectorField::parse(&["1", "2", "0"], &chart()).unwrap();
        let y = VectorField::parse(&["3", "4", "0"], &chart()).unwrap();
        assert_eq!(dxdy.apply(&[&x, &y]).unwrap(), p("-2"));
    }

    #[test]
    fn terms_round_trip() {
        let c = chart();
        let f = Form::from_terms(3, 3, vec![(vec![0, 1, 2], p("3/2*x^2*z"))]);
        let raw: Vec<(Vec<IndexRef>, String)> = f
            .to_terms(&c)
            .into_iter()
            .map(|(i, s)| (i.into_iter().map(IndexRef::Name).collect(), s))
            .collect();
        assert_eq!(Form::parse_terms(&raw, 3, &c, "H").unwrap(), f);
        let numeric = vec![(vec![IndexRef::Position(2), IndexRef::Position(0), IndexRef::Position(1)], "3/2*x^2*z".to_string())];
        assert_eq!(Form::parse_terms(&numeric, 3, &c, "H").unwrap(), f);
    }

    #[test]
    fn bad_index_is_reported() {
        let raw = vec![(vec![IndexRef::Name("w".into())], "1".to_string())];
        assert!(matches!(Form::parse_terms(&raw, 1, &chart(), "alpha"), Err(GeomError::Parse { .. })));
    }
}

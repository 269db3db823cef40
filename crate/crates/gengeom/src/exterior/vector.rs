//! Polynomial vector fields in a coordinate basis.

use std::ops::{Add, Neg, Sub};

use crate::chart::Chart;
use crate::error::{GeomError, Result};
use crate::poly::Poly;
use crate::rational::Q;

/// `X = X^i ∂_i` with polynomial components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    components: Vec<Poly>,
}

impl VectorField {
    /// Builds a field; every component must live on a chart of dimension
    /// `components.len()`.
    pub fn new(components: Vec<Poly>) -> Self {
        let n = components.len();
        assert!(n > 0, "vector field on an empty chart");
        assert!(components.iter().all(|p| p.nvars() == n), "component arity differs from chart dimension");
        VectorField { components }
    }

    pub fn zero(dim: usize) -> Self {
        VectorField::new(vec![Poly::zero(dim); dim])
    }

    /// The coordinate field `∂_i`.
    pub fn coord(dim: usize, i: usize) -> Self {
        let mut c = vec![Poly::zero(dim); dim];
        c[i] = Poly::one(dim);
        VectorField::new(c)
    }

    /// Parses one polynomial string per coordinate direction.
    pub fn parse<S: AsRef<str>>(components: &[S], chart: &Chart) -> Result<Self> {
        chart.check_dim(components.len())?;
        let comps = components
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Poly::parse(s.as_ref(), chart)
                    .map_err(|e| GeomError::parse(format!("vector component {}", chart.name(i)), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField::new(comps))
    }

    pub fn to_strings(&self, chart: &Chart) -> Vec<String> {
        self.components.iter().map(|p| p.to_string_with(chart)).collect()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub(crate) fn check_same(&self, other: &VectorField) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(GeomError::ChartMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }

    /// Directional derivative `X(f) = X^i ∂_i f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero(self.dim());
        for (i, c) in self.components.iter().enumerate() {
            if !c.is_zero() {
                let df = f.deriv(i);
                if !df.is_zero() {
                    acc += &(c * &df);
                }
            }
        }
        acc
    }

    /// Lie bracket `[X, Y]^i = X(Y^i) - Y(X^i)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.check_same(other)?;
        Ok(VectorField::new(
            (0..self.dim())
                .map(|i| &self.apply(&other.components[i]) - &other.apply(&self.components[i]))
                .collect(),
        ))
    }

    /// Multiplies by a function.
    pub fn mul_fn(&self, f: &Poly) -> VectorField {
        VectorField::new(self.components.iter().map(|c| c * f).collect())
    }

    pub fn scale(&self, c: &Q) -> VectorField {
        VectorField::new(self.components.iter().map(|p| p.scale(c)).collect())
    }

    pub fn eval(&self, point: &[Q]) -> Vec<Q> {
        self.components.iter().map(|p| p.eval(point)).collect()
    }

    /// Linear combination `Σ c_k X_k` with function coefficients.
    pub fn combination(dim: usize, terms: &[(Poly, &VectorField)]) -> VectorField {
        let mut acc = VectorField::zero(dim);
        for (c, x) in terms {
            acc = &acc + &x.mul_fn(c);
        }
        acc
    }
}

impl<'a> Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.dim(), rhs.dim(), "vector fields on different charts");
        VectorField::new(self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.dim(), rhs.dim(), "vector fields on different charts");
        VectorField::new(self.components.iter().zip(&rhs.components).map(|(a, b)| a - b).collect())
    }
}

impl<'a> Neg for &'a VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField::new(self.components.iter().map(|a| -a).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new(&["x", "y", "z"]).unwrap()
    }

    fn v(s: &[&str]) -> VectorField {
        VectorField::parse(s, &chart()).unwrap()
    }

    #[test]
    fn heisenberg_bracket() {
        // [∂x, ∂z + m x ∂y] = m ∂y with m = 3
        let zx = v(&["1", "0", "0"]);
        let zz = v(&["0", "3*x", "1"]);
        assert_eq!(zx.bracket(&zz).unwrap(), v(&["0", "3", "0"]));
    }

    #[test]
    fn self_bracket_vanishes() {
        let x = v(&["x*y", "z^2", "1 + x"]);
        assert!(x.bracket(&x).unwrap().is_zero());
    }

    #[test]
    fn hand_differentiated_bracket() {
        // [∂x, x^2 ∂y] = 2x ∂y
        assert_eq!(v(&["1", "0", "0"]).bracket(&v(&["0", "x^2", "0"])).unwrap(), v(&["0", "2*x", "0"]));
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let a = VectorField::coord(2, 0);
        let b = VectorField::coord(3, 0);
        assert!(matches!(a.bracket(&b), Err(GeomError::ChartMismatch { .. })));
    }
}

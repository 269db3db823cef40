//! Polynomial coordinate diffeomorphisms with polynomial inverses.

use crate::chart::Chart;
use crate::error::{GeomError, Result};
use crate::exterior::form::Form;
use crate::exterior::vector::VectorField;
use crate::poly::Poly;
use crate::polymat::PolyMat;

/// `φ: source → target`, given by target coordinates as polynomials in the
/// source coordinates, together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffeoMap {
    source: Chart,
    target: Chart,
    forward: Vec<Poly>,
    inverse: Vec<Poly>,
    jacobian: PolyMat,
}

impl DiffeoMap {
    /// Builds the map and verifies both round trips symbolically.
    pub fn new(source: Chart, target: Chart, forward: Vec<Poly>, inverse: Vec<Poly>) -> Result<Self> {
        let n = source.dim();
        if target.dim() != n {
            return Err(GeomError::ChartMismatch {
                expected: n,
                found: target.dim(),
            });
        }
        if forward.len() != n || forward.iter().any(|p| p.nvars() != n) {
            return Err(GeomError::InvalidDiffeo("forward map must give one polynomial in the source coordinates per target coordinate".into()));
        }
        if inverse.len() != n || inverse.iter().any(|p| p.nvars() != n) {
            return Err(GeomError::InvalidDiffeo("inverse map must give one polynomial in the target coordinates per source coordinate".into()));
        }
        for i in 0..n {
            if forward[i].compose(&inverse) != Poly::var(n, i) {
                return Err(GeomError::InvalidDiffeo(format!("forward∘inverse differs from the identity in {}", target.name(i))));
            }
            if inverse[i].compose(&forward) != Poly::var(n, i) {
                return Err(GeomError::InvalidDiffeo(format!("inverse∘forward differs from the identity in {}", source.name(i))));
            }
        }
        let jacobian = PolyMat::from_fn(n, n, n, |i, j| forward[i].deriv(j));
        Ok(DiffeoMap {
            source,
            target,
            forward,
            inverse,
            jacobian,
        })
    }

    /// Parses forward and inverse component strings.
    pub fn parse<S: AsRef<str>>(source: Chart, target: Chart, forward: &[S], inverse: &[S]) -> Result<Self> {
        let fwd = forward
            .iter()
            .map(|s| Poly::parse(s.as_ref(), &source).map_err(|e| GeomError::parse("phi.forward", e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let inv = inverse
            .iter()
            .map(|s| Poly::parse(s.as_ref(), &target).map_err(|e| GeomError::parse("phi.inverse", e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        DiffeoMap::new(source, target, fwd, inv)
    }

    pub fn identity(chart: &Chart) -> Self {
        let n = chart.dim();
        let id: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        DiffeoMap::new(chart.clone(), chart.clone(), id.clone(), id).expect("identity is a diffeomorphism")
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn forward(&self) -> &[Poly] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Poly] {
        &self.inverse
    }

    pub fn jacobian(&self) -> &PolyMat {
        &self.jacobian
    }

    pub fn dim(&self) -> usize {
        self.forward.len()
    }

    /// The inverse diffeomorphism `φ⁻¹: target → source`.
    pub fn inverted(&self) -> DiffeoMap {
        DiffeoMap::new(self.target.clone(), self.source.clone(), self.inverse.clone(), self.forward.clone())
            .expect("inverse of a validated diffeomorphism")
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DiffeoMap) -> Result<DiffeoMap> {
        if other.source != self.target {
            return Err(GeomError::InvalidDiffeo("composition charts do not match".into()));
        }
        let fwd: Vec<Poly> = other.forward.iter().map(|p| p.compose(&self.forward)).collect();
        let inv: Vec<Poly> = self.inverse.iter().map(|p| p.compose(&other.inverse)).collect();
        DiffeoMap::new(self.source.clone(), other.target.clone(), fwd, inv)
    }

    /// Pushforward `φ_* X`, a vector field on the target chart.
    pub fn pushforward(&self, x: &VectorField) -> Result<VectorField> {
        if x.dim() != self.dim() {
            return Err(GeomError::ChartMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let jx = self.jacobian.mul_vec(x.components());
        Ok(VectorField::new(jx.iter().map(|p| p.compose(&self.inverse)).collect()))
    }

    /// Pullback `φ* ω` of a form on the target chart.
    pub fn pullback(&self, w: &Form) -> Result<Form> {
        let n = self.dim();
        if w.dim() != n {
            return Err(GeomError::ChartMismatch {
                expected: n,
                found: w.dim(),
            });
        }
        let differentials: Vec<Form> = self.forward.iter().map(|f| Form::function(f.clone()).d()).collect();
        let mut out = Form::zero(n, w.degree());
        for (idx, c) in w.terms() {
            let mut t = Form::function(c.compose(&self.forward));
            for &i in idx {
                t = t.wedge(&differentials[i])?;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Pushforward of a form, `(φ⁻¹)* ω`.
    pub fn push_form(&self, w: &Form) -> Result<Form> {
        self.inverted().pullback(w)
    }

    /// Pullback of a symmetric or antisymmetric `(0,2)` tensor given as a
    /// coordinate matrix on the target: `Jᵀ (m∘φ) J`.
    pub fn pullback_tensor(&self, m: &PolyMat) -> PolyMat {
        self.jacobian.transpose().mul(&m.compose(&self.forward)).mul(&self.jacobian)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(names: &[&str]) -> Chart {
        Chart::new(names).unwrap()
    }

    #[test]
    fn round_trip_is_enforced() {
        let c = chart(&["x", "y"]);
        let ok = DiffeoMap::parse(c.clone(), c.clone(), &["x", "y + x^2"], &["x", "y - x^2"]);
        assert!(ok.is_ok());
        let bad = DiffeoMap::parse(c.clone(), c, &["x", "y + x^2"], &["x", "y"]);
        assert!(matches!(bad, Err(GeomError::InvalidDiffeo(_))));
    }

    #[test]
    fn pullback_of_coordinate_differential() {
        let c = chart(&["x", "y"]);
        let phi = DiffeoMap::parse(c.clone(), c.clone(), &["x", "y + x^2"], &["x", "y - x^2"]).unwrap();
        let pulled = phi.pullback(&Form::dx(2, 1)).unwrap();
        assert_eq!(pulled, Form::function(phi.forward()[1].clone()).d());
    }

    #[test]
    fn identity_pushforward() {
        let c = chart(&["x", "y"]);
        let x = VectorField::parse(&["x*y", "1"], &c).unwrap();
        assert_eq!(DiffeoMap::identity(&c).pushforward(&x).unwrap(), x);
    }

    #[test]
    fn pairing_is_natural() {
        // (φ⁻¹)*α (φ_* X) = α(X)∘φ⁻¹
        let c = chart(&["x", "y"]);
        let phi = DiffeoMap::parse(c.clone(), c.clone(), &["x", "y + x^2"], &["x", "y - x^2"]).unwrap();
        let x = VectorField::parse(&["1", "x"], &c).unwrap();
        let a = Form::one_form(vec![Poly::parse("y", &c).unwrap(), Poly::parse("1", &c).unwrap()]);
        let lhs = phi.push_form(&a).unwrap().apply(&[&phi.pushforward(&x).unwrap()]).unwrap();
        let rhs = a.apply(&[&x]).unwrap().compose(phi.inverse());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_with_inverse_is_identity() {
        let c = chart(&["x", "y"]);
        let phi = DiffeoMap::parse(c.clone(), c.clone(), &["x + y^2", "y"], &["x - y^2", "y"]).unwrap();
        assert_eq!(phi.then(&phi.inverted()).unwrap(), DiffeoMap::identity(&c));
    }
}

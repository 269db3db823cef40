//! Polynomial frames with constant determinant, their coframes and
//! structure functions.

use crate::chart::Chart;
use crate::error::{GeomError, Result};
use crate::exterior::form::Form;
use crate::exterior::vector::VectorField;
use crate::poly::Poly;
use crate::polymat::PolyMat;
use num_traits::Zero;

/// A frame `Z_I = A_I^J ∂_J` whose dual coframe is polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    labels: Vec<String>,
    fields: Vec<VectorField>,
    /// Row `I` holds the components of `Z_I`.
    matrix: PolyMat,
    coframe: Vec<Form>,
    /// `structure[I][J][K] = C_IJ^K`.
    structure: Vec<Vec<Vec<Poly>>>,
}

impl Frame {
    /// Validates the fields (constant non-zero determinant), computes the
    /// coframe and the structure functions, and checks duality and the
    /// bracket expansion symbolically.
    pub fn new(labels: Vec<String>, fields: Vec<VectorField>) -> Result<Self> {
        let n = fields.len();
        if n == 0 || labels.len() != n {
            return Err(GeomError::InvalidSubbundle(format!("frame needs one label per field ({} labels, {n} fields)", labels.len())));
        }
        for f in &fields {
            if f.dim() != n {
                return Err(GeomError::ChartMismatch {
                    expected: n,
                    found: f.dim(),
                });
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        if !labels.iter().all(|l| seen.insert(l.clone())) {
            return Err(GeomError::InvalidChart("frame labels must be distinct".into()));
        }
        let matrix = PolyMat::from_fn(n, n, n, |i, j| fields[i].component(j).clone());
        let det = matrix.det();
        match det.as_constant() {
            Some(c) if !c.is_zero() => {}
            _ => return Err(GeomError::NonConstantDeterminant(det.to_string())),
        }
        let inv = matrix.inverse()?;
        // Θ^I_K = (A^{-1})_{K I}
        let coframe: Vec<Form> = (0..n).map(|i| Form::one_form((0..n).map(|k| inv[(k, i)].clone()).collect())).collect();
        let mut structure = vec![vec![vec![Poly::zero(n); n]; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let br = fields[i].bracket(&fields[j])?;
                for k in 0..n {
                    let c = coframe[k].apply(&[&br])?;
                    structure[j][i][k] = -&c;
                    structure[i][j][k] = c;
                }
            }
        }
        let frame = Frame {
            labels,
            fields,
            matrix,
            coframe,
            structure,
        };
        frame.verify()?;
        Ok(frame)
    }

    /// The coordinate frame `{∂_i}` labelled by the chart names.
    pub fn coordinate(chart: &Chart) -> Self {
        let n = chart.dim();
        Frame::new(chart.names().to_vec(), (0..n).map(|i| VectorField::coord(n, i)).collect()).expect("coordinate frame is valid")
    }

    /// Parses fields given as component strings.
    pub fn parse<S: AsRef<str>>(labels: Vec<String>, fields: &[Vec<S>], chart: &Chart) -> Result<Self> {
        let fs = fields.iter().map(|f| VectorField::parse(f, chart)).collect::<Result<Vec<_>>>()?;
        Frame::new(labels, fs)
    }

    fn verify(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let v = self.coframe[i].apply(&[&self.fields[j]])?;
                let expected = if i == j { Poly::one(n) } else { Poly::zero(n) };
                if v != expected {
                    return Err(GeomError::InvalidSubbundle(format!("coframe duality fails at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let br = self.fields[i].bracket(&self.fields[j])?;
                let terms: Vec<(Poly, &VectorField)> = (0..n).map(|k| (self.structure[i][j][k].clone(), &self.fields[k])).collect();
                if VectorField::combination(n, &terms) != br {
                    return Err(GeomError::InvalidSubbundle(format!("bracket [Z_{i}, Z_{j}] is not expanded by the structure functions")));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.fields.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| self.index_of(l.as_ref()).ok_or_else(|| GeomError::UnknownName(l.as_ref().to_string())))
            .collect()
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn field(&self, i: usize) -> &VectorField {
        &self.fields[i]
    }

    pub fn coframe(&self) -> &[Form] {
        &self.coframe
    }

    pub fn coframe_form(&self, i: usize) -> &Form {
        &self.coframe[i]
    }

    /// The coefficient matrix `A` (row `I` = components of `Z_I`).
    pub fn matrix(&self) -> &PolyMat {
        &self.matrix
    }

    /// `C_IJ^K`.
    pub fn structure_function(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.structure[i][j][k]
    }

    /// All non-zero structure functions `(I, J, K, C_IJ^K)` with `I < J`.
    pub fn nonzero_structure(&self) -> Vec<(usize, usize, usize, Poly)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let c = &self.structure[i][j][k];
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Frame components `X^I = Θ^I(X)`.
    pub fn vector_components(&self, x: &VectorField) -> Result<Vec<Poly>> {
        self.coframe.iter().map(|t| t.apply(&[x])).collect()
    }

    /// `Σ c_I Z_I`.
    pub fn vector_from_components(&self, c: &[Poly]) -> VectorField {
        let terms: Vec<(Poly, &VectorField)> = c.iter().cloned().zip(self.fields.iter()).collect();
        VectorField::combination(self.dim(), &terms)
    }

    /// The form whose coefficient on index tuple `I` is `ω(Z_{I_1}, …)`;
    /// the indices refer to frame positions rather than coordinates.
    pub fn form_components(&self, w: &Form) -> Result<Form> {
        let n = self.dim();
        let p = w.degree();
        let mut terms = Vec::new();
        for idx in increasing_tuples(n, p) {
            let vs: Vec<&VectorField> = idx.iter().map(|&i| &self.fields[i]).collect();
            let c = w.apply(&vs)?;
            if !c.is_zero() {
                terms.push((idx, c));
            }
        }
        Ok(Form::from_terms(n, p, terms))
    }

    /// Inverse of [`Frame::form_components`]: `Σ c_I Θ^{I_1} ∧ …`.
    pub fn form_from_components(&self, c: &Form) -> Result<Form> {
        let n = self.dim();
        let mut out = Form::zero(n, c.degree());
        for (idx, coef) in c.terms() {
            let mut t = Form::function(coef.clone());
            for &i in idx {
                t = t.wedge(&self.coframe[i])?;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Matrix `M_IJ = B(Z_I, Z_J)` of a two-form.
    pub fn two_form_matrix(&self, b: &Form) -> Result<PolyMat> {
        let m = b.to_matrix()?;
        Ok(self.matrix.mul(&m).mul(&self.matrix.transpose()))
    }

    /// Symmetric tensor `Σ g_IJ Θ^I ⊗ Θ^J` in coordinates: `Aᵀ⁻¹ g A⁻¹`.
    pub fn tensor_to_coordinates(&self, g: &PolyMat) -> Result<PolyMat> {
        let inv = self.matrix.inverse()?;
        Ok(inv.mul(g).mul(&inv.transpose()))
    }

    /// Coordinate tensor to frame components `A g Aᵀ`.
    pub fn tensor_to_frame(&self, g: &PolyMat) -> PolyMat {
        self.matrix.mul(g).mul(&self.matrix.transpose())
    }
}

/// All strictly increasing `p`-tuples from `0..n`.
pub fn increasing_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new(&["x", "y", "z"]).unwrap()
    }

    fn labels() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    #[test]
    fn heisenberg_structure() {
        let f = Frame::parse(labels(), &[vec!["1", "0", "0"], vec!["0", "1", "0"], vec!["0", "5*x", "1"]], &chart()).unwrap();
        let nz = f.nonzero_structure();
        assert_eq!(nz, vec![(0, 2, 1, Poly::from_int(3, 5))]);
        // Θ^y = dy - 5x dz
        assert_eq!(f.coframe_form(1).one_form_components().unwrap()[2], Poly::parse("-5*x", &chart()).unwrap());
    }

    #[test]
    fn coordinate_frame_is_flat() {
        assert!(Frame::coordinate(&chart()).nonzero_structure().is_empty());
    }

    #[test]
    fn shear_frame() {
        // {∂x, ∂y + x∂z, ∂z}: C_12^3 = 1 — [∂x, ∂y + x ∂z] = ∂z
        let f = Frame::parse(labels(), &[vec!["1", "0", "0"], vec!["0", "1", "x"], vec!["0", "0", "1"]], &chart()).unwrap();
        assert_eq!(f.nonzero_structure(), vec![(0, 1, 2, Poly::one(3))]);
    }

    #[test]
    fn degenerate_frame_rejected() {
        let r = Frame::parse(labels(), &[vec!["1", "0", "0"], vec!["0", "x", "0"], vec!["0", "0", "1"]], &chart());
        assert!(matches!(r, Err(GeomError::NonConstantDeterminant(_))));
    }

    #[test]
    fn form_components_round_trip() {
        let f = Frame::parse(labels(), &[vec!["1", "0", "0"], vec!["0", "1", "0"], vec!["0", "2*x", "1"]], &chart()).unwrap();
        let w = Form::dx(3, 1).wedge(&Form::dx(3, 2)).unwrap().mul_fn(&Poly::parse("x*y", &chart()).unwrap());
        let c = f.form_components(&w).unwrap();
        assert_eq!(f.form_from_components(&c).unwrap(), w);
    }

    #[test]
    fn tuples() {
        assert_eq!(increasing_tuples(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(increasing_tuples(2, 0), vec![Vec::<usize>::new()]);
    }
}

//! Matrices with polynomial entries.

use num_traits::Zero;

use crate::chart::Chart;
use crate::error::{GeomError, Result};
use crate::linalg::QMat;
use crate::poly::Poly;
use crate::rational::{format_rational, Q};

/// A dense matrix of polynomials sharing one chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMat {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<Poly>,
}

impl PolyMat {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMat {
            rows,
            cols,
            nvars,
            data: vec![Poly::zero(nvars); rows * cols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = PolyMat::zeros(n, n, nvars);
        for i in 0..n {
            m[(i, i)] = Poly::one(nvars);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, nvars: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = f(i, j);
                assert_eq!(p.nvars(), nvars, "entry lives on another chart");
                data.push(p);
            }
        }
        PolyMat { rows, cols, nvars, data }
    }

    /// Constant matrix on a chart of `nvars` coordinates.
    pub fn from_qmat(m: &QMat, nvars: usize) -> Self {
        PolyMat::from_fn(m.rows(), m.cols(), nvars, |i, j| Poly::constant(nvars, m[(i, j)].clone()))
    }

    /// Parses a matrix of polynomial strings.
    pub fn parse(rows: &[Vec<String>], chart: &Chart, field: &str) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(GeomError::parse(field, format!("row {i} has {} entries, expected {ncols}", r.len())));
            }
            for (j, s) in r.iter().enumerate() {
                let p = Poly::parse(s, chart).map_err(|e| GeomError::parse(format!("{field}[{i}][{j}]"), e.to_string()))?;
                data.push(p);
            }
        }
        Ok(PolyMat {
            rows: nrows,
            cols: ncols,
            nvars: chart.dim(),
            data,
        })
    }

    pub fn to_strings(&self, chart: &Chart) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_string_with(chart)).collect())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> PolyMat {
        PolyMat::from_fn(self.cols, self.rows, self.nvars, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        PolyMat::from_fn(self.rows, other.cols, self.nvars, |i, j| {
            let mut acc = Poly::zero(self.nvars);
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                    acc += &(&self[(i, k)] * &other[(k, j)]);
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMat::from_fn(self.rows, self.cols, self.nvars, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &PolyMat) -> PolyMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMat::from_fn(self.rows, self.cols, self.nvars, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn neg(&self) -> PolyMat {
        PolyMat::from_fn(self.rows, self.cols, self.nvars, |i, j| -&self[(i, j)])
    }

    pub fn scale(&self, c: &Q) -> PolyMat {
        PolyMat::from_fn(self.rows, self.cols, self.nvars, |i, j| self[(i, j)].scale(c))
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (j, x) in v.iter().enumerate() {
                    if !self[(i, j)].is_zero() && !x.is_zero() {
                        acc += &(&self[(i, j)] * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -&self[(j, i)]))
    }

    /// Symmetric part `(M + M^T)/2`.
    pub fn sym_part(&self) -> PolyMat {
        self.add(&self.transpose()).scale(&crate::rational::qf(1, 2))
    }

    /// Antisymmetric part `(M - M^T)/2`.
    pub fn antisym_part(&self) -> PolyMat {
        self.sub(&self.transpose()).scale(&crate::rational::qf(1, 2))
    }

    pub fn eval(&self, point: &[Q]) -> QMat {
        let rows = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].eval(point)).collect())
            .collect();
        QMat::from_rows(self.cols, rows)
    }

    /// Constant value if every entry is constant.
    pub fn as_constant(&self) -> Option<QMat> {
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut r = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                r.push(self[(i, j)].as_constant()?);
            }
            rows.push(r);
        }
        Some(QMat::from_rows(self.cols, rows))
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMat {
        PolyMat::from_fn(rows.len(), cols.len(), self.nvars, |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Substitutes coordinates in every entry.
    pub fn compose(&self, subs: &[Poly]) -> PolyMat {
        let nv = subs.first().map(|p| p.nvars()).unwrap_or(0);
        PolyMat::from_fn(self.rows, self.cols, nv, |i, j| self[(i, j)].compose(subs))
    }

    /// Re-embeds every entry into a larger chart.
    pub fn embed(&self, new_nvars: usize, mapping: &[usize]) -> PolyMat {
        PolyMat::from_fn(self.rows, self.cols, new_nvars, |i, j| self[(i, j)].embed(new_nvars, mapping))
    }

    /// Restricts every entry to the listed variables.
    pub fn restrict(&self, keep: &[usize]) -> Option<PolyMat> {
        let mut data = Vec::with_capacity(self.data.len());
        for p in &self.data {
            data.push(p.restrict(keep)?);
        }
        Some(PolyMat {
            rows: self.rows,
            cols: self.cols,
            nvars: keep.len(),
            data,
        })
    }

    /// Determinant by expansion over column subsets (exact, polynomial).
    pub fn det(&self) -> Poly {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Poly::one(self.nvars);
        }
        // dp[mask] = signed sum over assignments of the first popcount(mask)
        // rows to the columns in mask
        let size = 1usize << n;
        let mut dp: Vec<Option<Poly>> = vec![None; size];
        dp[0] = Some(Poly::one(self.nvars));
        for mask in 0..size {
            let Some(cur) = dp[mask].take() else { continue };
            if cur.is_zero() {
                continue;
            }
            let row = mask.count_ones() as usize;
            if row == n {
                dp[mask] = Some(cur);
                continue;
            }
            for col in 0..n {
                if mask & (1 << col) != 0 || self[(row, col)].is_zero() {
                    continue;
                }
                // sign: number of already-used columns greater than col
                let higher = (mask >> (col + 1)).count_ones();
                let mut term = &cur * &self[(row, col)];
                if higher % 2 == 1 {
                    term = -term;
                }
                let next = mask | (1 << col);
                match &mut dp[next] {
                    Some(p) => *p += &term,
                    slot @ None => *slot = Some(term),
                }
            }
            dp[mask] = Some(cur);
        }
        dp[size - 1].take().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// Inverse via the adjugate, available when the determinant is a non-zero
    /// rational constant.
    pub fn inverse(&self) -> Result<PolyMat> {
        if !self.is_square() {
            return Err(GeomError::Shape(format!("cannot invert a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let det = self.det();
        let d = match det.as_constant() {
            Some(c) if !c.is_zero() => c,
            Some(_) => return Err(GeomError::NotInvertible("determinant is zero".into())),
            None => return Err(GeomError::NotInvertible(format!("determinant {det} is not constant"))),
        };
        if n == 1 {
            return Ok(PolyMat::from_fn(1, 1, self.nvars, |_, _| Poly::constant(self.nvars, Q::from_integer(1.into()) / &d)));
        }
        let dinv = Q::from_integer(1.into()) / &d;
        let all: Vec<usize> = (0..n).collect();
        Ok(PolyMat::from_fn(n, n, self.nvars, |i, j| {
            // (A^{-1})_{ij} = (-1)^{i+j} M_{ji} / det
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
            let minor = self.select(&rows, &cols).det();
            let signed = if (i + j) % 2 == 0 { minor } else { -minor };
            signed.scale(&dinv)
        }))
    }

    /// Leading principal minors evaluated at a point.
    pub fn leading_minors_at(&self, point: &[Q]) -> Vec<Q> {
        let m = self.eval(point);
        (1..=self.rows)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                m.select(&idx, &idx).det()
            })
            .collect()
    }

    /// Text rendering for reports.
    pub fn render(&self, chart: &Chart) -> String {
        self.to_strings(chart)
            .into_iter()
            .map(|r| format!("[{}]", r.join(", ")))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl std::ops::Index<(usize, usize)> for PolyMat {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

/// Renders a rational matrix as nested strings (used in reports).
pub fn qmat_strings(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format_rational(&m[(i, j)])).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn chart() -> Chart {
        Chart::new(&["x", "y"]).unwrap()
    }

    fn pm(rows: &[&[&str]]) -> PolyMat {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        PolyMat::parse(&rows, &chart(), "m").unwrap()
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        let a = pm(&[&["1", "x", "y"], &["0", "1", "x^2"], &["2", "y", "1"]]);
        // cofactor expansion along the first row
        let oracle = Poly::parse("1*(1 - x^2*y) - x*(0 - 2*x^2) + y*(0 - 2)", &chart()).unwrap();
        assert_eq!(a.det(), oracle);
    }

    #[test]
    fn unipotent_inverse() {
        let a = pm(&[&["1", "x", "0"], &["0", "1", "y"], &["0", "0", "1"]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), PolyMat::identity(3, 2));
        assert_eq!(inv.mul(&a), PolyMat::identity(3, 2));
    }

    #[test]
    fn non_constant_determinant_refused() {
        let a = pm(&[&["x", "0"], &["0", "1"]]);
        assert!(matches!(a.inverse(), Err(GeomError::NotInvertible(_))));
        let c = pm(&[&["2", "0"], &["0", "3"]]);
        assert_eq!(c.inverse().unwrap().eval(&[q(0), q(0)])[(0, 0)], crate::rational::qf(1, 2));
    }

    #[test]
    fn symmetry_predicates() {
        assert!(pm(&[&["1", "x"], &["x", "2"]]).is_symmetric());
        assert!(pm(&[&["0", "x"], &["-x", "0"]]).is_antisymmetric());
        assert!(!pm(&[&["1", "x"], &["-x", "0"]]).is_antisymmetric());
    }
}

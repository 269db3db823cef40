//! Named coordinate charts.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// An ordered list of distinct coordinate names.
///
/// Polynomials, vector fields and forms only store the chart dimension; the
/// chart supplies names for parsing and printing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Chart {
    names: Vec<String>,
}

impl Chart {
    /// Builds a chart, rejecting empty charts, duplicate names and names
    /// that clash with the polynomial grammar.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(GeomError::InvalidChart("a chart needs at least one coordinate".into()));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim().to_string();
            if !is_identifier(&n) {
                return Err(GeomError::InvalidChart(format!("`{n}` is not a valid coordinate name")));
            }
            if out.contains(&n) {
                return Err(GeomError::InvalidChart(format!("duplicate coordinate `{n}`")));
            }
            out.push(n);
        }
        Ok(Chart { names: out })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Position of a coordinate name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Resolves a list of coordinate names to indices.
    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.index_of(n.as_ref())
                    .ok_or_else(|| GeomError::UnknownName(format!("coordinate `{}`", n.as_ref())))
            })
            .collect()
    }

    /// Sub-chart made of the listed coordinates, in the given order.
    pub fn sub_chart(&self, indices: &[usize]) -> Result<Chart> {
        let names: Vec<&str> = indices.iter().map(|&i| self.name(i)).collect();
        Chart::new(&names)
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(GeomError::ChartMismatch {
                expected: self.dim(),
                found,
            })
        }
    }
}

impl TryFrom<Vec<String>> for Chart {
    type Error = GeomError;
    fn try_from(v: Vec<String>) -> Result<Self> {
        Chart::new(&v)
    }
}

impl From<Chart> for Vec<String> {
    fn from(c: Chart) -> Self {
        c.names
    }
}

/// Identifier rule shared with the polynomial grammar: no operator
/// characters, no whitespace, and not starting with a digit.
pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        None => false,
        Some(c) if c.is_ascii_digit() => false,
        Some(c) if is_reserved(c) => false,
        Some(_) => chars.all(|c| !is_reserved(c)),
    }
}

pub(crate) fn is_reserved(c: char) -> bool {
    c.is_whitespace() || matches!(c, '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' | '[' | ']' | '"')
}

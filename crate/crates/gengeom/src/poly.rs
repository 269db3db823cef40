//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a map keyed by exponent vectors under graded
//! lexicographic order (total degree first, then lexicographic by
//! coordinate index), so equality is structural and printing is canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use crate::chart::{is_reserved, Chart};
use crate::error::{GeomError, Result};
use crate::rational::{format_rational, parse_rational, q, Q};

/// Exponent vector under graded lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables over the rationals.
///
/// Arithmetic between polynomials in different numbers of variables is a
/// programming error and panics; the public geometric operations check
/// chart compatibility before reaching this layer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Poly::constant(nvars, q(c))
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Q::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut p = Poly::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Q::one());
        p
    }

    /// Single term `c * x^e`.
    pub fn monomial(c: Q, exps: Vec<u32>) -> Self {
        let nvars = exps.len();
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    /// Builds a polynomial from possibly repeated or zero terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector has wrong length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map(|m| m.degree()).unwrap_or(0)
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Whether any term involves variable `i`.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomials live on different charts");
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn deriv(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                out.add_term(m2, c * q(e as i64));
            }
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars, "point has wrong dimension");
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Integer power.
    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Substitutes `x_i -> subs[i]`; the result lives on the chart of `subs`.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars, "substitution has wrong length");
        let target = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Poly::zero(target);
        // cache powers per variable
        let mut powers: Vec<Vec<Poly>> = subs.iter().map(|s| vec![Poly::one(s.nvars), s.clone()]).collect();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out += &t;
        }
        out
    }

    /// Re-embeds into a chart of dimension `new_nvars`, sending variable `i`
    /// to variable `mapping[i]`.
    pub fn embed(&self, new_nvars: usize, mapping: &[usize]) -> Poly {
        assert_eq!(mapping.len(), self.nvars);
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; new_nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[mapping[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Restricts to the listed variables (in order), failing if the
    /// polynomial depends on any other variable.
    pub fn restrict(&self, keep: &[usize]) -> Option<Poly> {
        let mut out = Poly::zero(keep.len());
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !keep.contains(&i) {
                    return None;
                }
            }
            let e: Vec<u32> = keep.iter().map(|&i| m.0[i]).collect();
            out.add_term(Monomial(e), c.clone());
        }
        Some(out)
    }

    /// Canonical text form using the chart's coordinate names.
    pub fn to_string_with(&self, chart: &Chart) -> String {
        assert_eq!(chart.dim(), self.nvars, "chart does not match polynomial");
        self.render(|i| chart.name(i).to_string())
    }

    fn render(&self, name: impl Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(format_rational(&abs));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(name(i)),
                    _ => factors.push(format!("{}^{}", name(i), e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the grammar `[sign] term {(+|-) term}` where a term is a
    /// `*`-separated product of rationals `p` / `p/q` and powers `name^k`.
    pub fn parse(s: &str, chart: &Chart) -> Result<Poly> {
        Parser::new(s, chart).parse_all()
    }
}

impl fmt::Display for Poly {
    /// Prints with generic names `x0, x1, ...`; use [`Poly::to_string_with`]
    /// for chart names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|i| format!("x{i}")))
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    chart: &'a Chart,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, chart: &'a Chart) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            chart,
            src,
        }
    }

    fn err(&self, msg: impl Into<String>) -> GeomError {
        GeomError::parse(format!("polynomial `{}`", self.src), format!("{} at position {}", msg.into(), self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Poly> {
        let n = self.chart.dim();
        let mut acc = Poly::zero(n);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return Err(self.err("empty polynomial")),
                None => break,
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(c) => return Err(self.err(format!("expected `+` or `-`, found `{c}`"))),
            };
            first = false;
            let t = self.parse_term()?;
            if sign < 0 {
                acc -= &t;
            } else {
                acc += &t;
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Poly> {
        let n = self.chart.dim();
        let mut t = self.parse_factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.parse_factor()?;
            t = &t * &f;
        }
        if t.nvars() != n {
            return Err(self.err("internal arity error"));
        }
        Ok(t)
    }

    fn parse_factor(&mut self) -> Result<Poly> {
        let n = self.chart.dim();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let mut text: String = self.chars[start..self.pos].iter().collect();
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    let dstart = self.pos;
                    while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if dstart == self.pos {
                        return Err(self.err("expected denominator"));
                    }
                    text.push('/');
                    text.extend(&self.chars[dstart..self.pos]);
                }
                let c = parse_rational(&text).ok_or_else(|| self.err(format!("bad rational `{text}`")))?;
                let mut p = Poly::constant(n, c);
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let e = self.parse_exponent()?;
                    p = p.pow(e);
                }
                Ok(p)
            }
            Some('(') => {
                self.pos += 1;
                let start = self.pos;
                let mut depth = 1;
                while self.pos < self.chars.len() {
                    match self.chars[self.pos] {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    self.pos += 1;
                }
                if depth != 0 {
                    return Err(self.err("unbalanced parenthesis"));
                }
                let inner: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                let mut p = Poly::parse(&inner, self.chart)?;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let e = self.parse_exponent()?;
                    p = p.pow(e);
                }
                Ok(p)
            }
            Some(c) if !is_reserved(c) => {
                let start = self.pos;
                while self.pos < self.chars.len() && !is_reserved(self.chars[self.pos]) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let i = self
                    .chart
                    .index_of(&name)
                    .ok_or_else(|| self.err(format!("unknown coordinate `{name}`")))?;
                let mut e = 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    e = self.parse_exponent()?;
                }
                let mut exps = vec![0; n];
                exps[i] = e;
                Ok(Poly::monomial(Q::one(), exps))
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn parse_exponent(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| self.err("expected a non-negative integer exponent"))
    }
}

impl Zero for Poly {
    /// Zero-variable zero; prefer [`Poly::zero`] with an explicit arity.
    fn zero() -> Self {
        Poly::zero(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> AddAssign<&'a Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.nvars == 0 && self.terms.is_empty() {
            self.nvars = rhs.nvars;
        }
        self.check_same(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        *self += &rhs;
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> SubAssign<&'a Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        self.check_same(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        *self -= &rhs;
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<'a> Neg for &'a Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.clone().neg()
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_same(rhs);
        let mut out = Poly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Q> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Q) -> Poly {
        self.scale(rhs)
    }
}

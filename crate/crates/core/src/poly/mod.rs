//! Sparse exact multivariate polynomials on the ruled ambient.
//!
//! Variables are ordered `t0, t1, x0, .., x4`; indices from 7 on are free
//! coefficient indeterminates used for symbolic identity checks. Under scroll
//! weights `a` the grading is `deg tj = (1, 0)` and `deg xi = (-ai, 1)`;
//! extra indeterminates have degree `(0, 0)`.
//!
//! Terms are kept sorted by the canonical monomial order: x-degree, then
//! t-degree, then total degree of extra indeterminates, then lexicographic on
//! exponents (earlier variables dominate).

mod parse;

pub use parse::{parse, ParseError, ParseErrorKind};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::linalg::FieldMatrix;
use crate::scalar::{FieldMode, Scalar, ScalarError};
use crate::unipoly::UniPoly;

pub const T0: usize = 0;
pub const T1: usize = 1;
/// Index of `x0`; `xi` lives at `X0 + i`.
pub const X0: usize = 2;
pub const AMBIENT_VARS: usize = 7;

pub fn var_name(i: usize) -> String {
    match i {
        T0 => "t0".into(),
        T1 => "t1".into(),
        i if i < AMBIENT_VARS => alloc::format!("x{}", i - X0),
        i => alloc::format!("c{}", i - AMBIENT_VARS),
    }
}

/// Weighted bidegree `(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bidegree {
    pub t: i64,
    pub x: i64,
}

impl Bidegree {
    pub const fn new(t: i64, x: i64) -> Self {
        Bidegree { t, x }
    }

    pub fn scale(self, k: i64) -> Self {
        Bidegree::new(self.t * k, self.x * k)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.t + o.t, self.x + o.x)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.t - o.t, self.x - o.x)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.t, -self.x)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.t, self.x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightsError {
    #[error("scroll twists must be nonnegative, got {0:?}")]
    Negative([i64; 5]),
}

/// Scroll twists `(a0, .., a4)`; all zero is `P^1 x P^4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AmbientWeights(pub [i64; 5]);

impl AmbientWeights {
    pub fn new(a: [i64; 5]) -> Result<Self, WeightsError> {
        if a.iter().any(|&v| v < 0) {
            return Err(WeightsError::Negative(a));
        }
        Ok(AmbientWeights(a))
    }

    pub const fn zero() -> Self {
        AmbientWeights([0; 5])
    }

    pub fn is_product(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Degree of `xi`.
    pub fn x_degree(&self, i: usize) -> Bidegree {
        Bidegree::new(-self.0[i], 1)
    }

    /// Weighted dot product `a . alpha`.
    pub fn dot(&self, alpha: &[u32; 5]) -> i64 {
        self.0.iter().zip(alpha).map(|(a, e)| a * *e as i64).sum()
    }
}

impl fmt::Display for AmbientWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.0;
        write!(f, "{} {} {} {} {}", a[0], a[1], a[2], a[3], a[4])
    }
}

/// Exponent vector. Trailing zeros are never stored, so a monomial compares
/// equal regardless of how many indeterminates the surrounding ring has.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut v = exps.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        Monomial(v)
    }

    pub fn var(i: usize) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = 1;
        Monomial(v)
    }

    /// Monomial `t0^e0 t1^e1 x^alpha`.
    pub fn ambient(e: [u32; 2], alpha: [u32; 5]) -> Self {
        let mut v = Vec::with_capacity(AMBIENT_VARS);
        v.extend_from_slice(&e);
        v.extend_from_slice(&alpha);
        Monomial::from_exponents(&v)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn t_exponents(&self) -> [u32; 2] {
        [self.exp(T0), self.exp(T1)]
    }

    pub fn x_exponents(&self) -> [u32; 5] {
        core::array::from_fn(|i| self.exp(X0 + i))
    }

    pub fn x_degree(&self) -> u32 {
        (X0..AMBIENT_VARS).map(|i| self.exp(i)).sum()
    }

    pub fn t_degree(&self) -> u32 {
        self.exp(T0) + self.exp(T1)
    }

    fn extra_degree(&self) -> u32 {
        self.0.iter().skip(AMBIENT_VARS).sum()
    }

    pub fn has_extra(&self) -> bool {
        self.0.len() > AMBIENT_VARS
    }

    pub fn bidegree(&self, w: &AmbientWeights) -> Bidegree {
        let alpha = self.x_exponents();
        Bidegree::new(self.t_degree() as i64 - w.dot(&alpha), self.x_degree() as i64)
    }

    /// The x-only part.
    pub fn x_part(&self) -> Monomial {
        let mut v = self.0.clone();
        if !v.is_empty() {
            v[T0] = 0;
        }
        if v.len() > 1 {
            v[T1] = 0;
        }
        Monomial::from_exponents(&v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v: Vec<u32> = (0..n).map(|i| self.exp(i) + other.exp(i)).collect();
        Monomial(v)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.exp(i).checked_sub(other.exp(i))?);
        }
        Some(Monomial::from_exponents(&v))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x_degree()
            .cmp(&other.x_degree())
            .then(self.t_degree().cmp(&other.t_degree()))
            .then(self.extra_degree().cmp(&other.extra_degree()))
            .then_with(|| {
                let n = self.0.len().max(other.0.len());
                for i in 0..n {
                    match self.exp(i).cmp(&other.exp(i)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&var_name(i))?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All monomials in `t0, t1, x0..x4` of weighted bidegree `d`, ascending.
pub fn monomial_basis(d: Bidegree, w: &AmbientWeights) -> Vec<Monomial> {
    let mut out = Vec::new();
    if d.x < 0 {
        return out;
    }
    for alpha in x_monomials(d.x as u32) {
        let total = d.t + w.dot(&alpha);
        if total < 0 {
            continue;
        }
        let total = total as u32;
        for e1 in 0..=total {
            out.push(Monomial::ambient([total - e1, e1], alpha));
        }
    }
    out.sort();
    out
}

/// Exponent vectors of all degree-`d` monomials in `x0..x4`, in canonical
/// (ascending) order.
pub fn x_monomials(d: u32) -> Vec<[u32; 5]> {
    let mut out = Vec::new();
    let mut cur = [0u32; 5];
    fn rec(i: usize, left: u32, cur: &mut [u32; 5], out: &mut Vec<[u32; 5]>) {
        if i == 4 {
            cur[4] = left;
            out.push(*cur);
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort_by(|a, b| Monomial::ambient([0, 0], *a).cmp(&Monomial::ambient([0, 0], *b)));
    out
}

/// Position of an x-exponent vector of degree `d` in [`x_monomials`]`(d)`.
pub fn x_monomial_index(d: u32) -> BTreeMap<[u32; 5], usize> {
    x_monomials(d).into_iter().enumerate().map(|(i, a)| (a, i)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BidegreeError {
    #[error("the zero polynomial has no bidegree")]
    Zero,
    #[error("inhomogeneous: terms of bidegrees {}", list_bidegrees(.0))]
    Inhomogeneous(Vec<Bidegree>),
}

fn list_bidegrees(v: &[Bidegree]) -> String {
    let parts: Vec<String> = v.iter().map(|b| alloc::format!("{}", b)).collect();
    parts.join(", ")
}

/// Chart of the base `P^1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chart {
    /// `t0 = 1`, local coordinate `t1`; contains every point but `(0:1)`.
    T0,
    /// `t1 = 1`, local coordinate `t0`; contains every point but `(1:0)`.
    T1,
}

impl Chart {
    pub fn local_var(self) -> usize {
        match self {
            Chart::T0 => T1,
            Chart::T1 => T0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Chart::T0 => "t0=1",
            Chart::T1 => "t1=1",
        }
    }
}

/// A polynomial: sorted nonzero terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn one(mode: FieldMode) -> Self {
        Self::constant(Scalar::one(mode))
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial {
                terms: vec![(m, c)],
            }
        }
    }

    pub fn var(i: usize, mode: FieldMode) -> Self {
        Self::term(Monomial::var(i), Scalar::one(mode))
    }

    pub fn x(i: usize, mode: FieldMode) -> Self {
        Self::var(X0 + i, mode)
    }

    pub fn t0(mode: FieldMode) -> Self {
        Self::var(T0, mode)
    }

    pub fn t1(mode: FieldMode) -> Self {
        Self::var(T1, mode)
    }

    /// Canonicalize arbitrary terms: merge duplicates, drop zeros, sort.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(it: I) -> Self {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in it {
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Field of the coefficients; `None` for the zero polynomial.
    pub fn mode(&self) -> Option<FieldMode> {
        self.terms.first().map(|(_, c)| c.mode())
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(m))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// Largest term in the canonical order.
    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.last()
    }

    fn check_modes(&self, other: &Self) -> Result<(), ScalarError> {
        match (self.mode(), other.mode()) {
            (Some(a), Some(b)) if a != b => Err(ScalarError::MixedFieldModes(a, b)),
            _ => Ok(()),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_modes(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_modes(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_modes(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        // The canonical order is a monomial order, so no re-sort is needed.
        Polynomial {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        match self.mode() {
            None => {
                if e == 0 {
                    panic!("0^0 of a mode-less zero polynomial")
                }
                Self::zero()
            }
            Some(mode) => {
                let mut acc = Self::one(mode);
                for _ in 0..e {
                    acc = &acc * self;
                }
                acc
            }
        }
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Weighted bidegree, if all terms agree.
    pub fn bidegree(&self, w: &AmbientWeights) -> Result<Bidegree, BidegreeError> {
        let degs = self.term_bidegrees(w);
        match degs.len() {
            0 => Err(BidegreeError::Zero),
            1 => Ok(*degs.iter().next().unwrap()),
            _ => Err(BidegreeError::Inhomogeneous(degs.into_iter().collect())),
        }
    }

    pub fn term_bidegrees(&self, w: &AmbientWeights) -> BTreeSet<Bidegree> {
        self.terms.iter().map(|(m, _)| m.bidegree(w)).collect()
    }

    pub fn is_x_homogeneous(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(|(m, _)| m.x_degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn involves_t(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.t_degree() > 0)
    }

    pub fn max_var(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.exponents().len()).max().unwrap_or(0)
    }

    /// Evaluate `t0, t1` at `(tau0, tau1)`; the result involves only `x`
    /// (and any extra indeterminates).
    pub fn substitute_t(&self, tau0: &Scalar, tau1: &Scalar) -> Self {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| {
            let [e0, e1] = m.t_exponents();
            (m.x_part(), c * &(&tau0.pow(e0) * &tau1.pow(e1)))
        }))
    }

    /// Set one `t` variable to 1 and read the result as a `k[s]`-combination
    /// of x-monomials, where `s` is the chart's local coordinate.
    pub fn chart_coefficients(&self, chart: Chart) -> BTreeMap<Monomial, UniPoly> {
        let mut out: BTreeMap<Monomial, Vec<(usize, Scalar)>> = BTreeMap::new();
        let local = chart.local_var();
        for (m, c) in &self.terms {
            out.entry(m.x_part())
                .or_default()
                .push((m.exp(local) as usize, c.clone()));
        }
        out.into_iter()
            .map(|(k, v)| (k, UniPoly::from_sparse(v)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    /// Evaluate at a full point (`point[i]` is the value of variable `i`).
    pub fn eval(&self, point: &[Scalar]) -> Option<Scalar> {
        let mut acc: Option<Scalar> = None;
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v = &v * &point.get(i)?.pow(e);
                }
            }
            acc = Some(match acc {
                None => v,
                Some(a) => &a + &v,
            });
        }
        match acc {
            Some(a) => Some(a),
            None => point.first().map(|p| Scalar::zero(p.mode())),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        Polynomial::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(var);
            if e == 0 {
                return None;
            }
            let mut v = m.exponents().to_vec();
            v[var] -= 1;
            Some((
                Monomial::from_exponents(&v),
                c * &Scalar::from_i64(c.mode(), e as i64),
            ))
        }))
    }

    /// Replace variable `i` by `images[i]` (variables beyond `images` are kept).
    pub fn compose(&self, images: &[Polynomial]) -> Self {
        let mut acc = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            let mut rest = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if i < images.len() {
                    term = &term * &images[i].pow(e);
                } else {
                    rest.resize(i + 1, 0);
                    rest[i] = e;
                }
            }
            if !rest.is_empty() {
                term = term.mul_monomial(&Monomial::from_exponents(&rest));
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Multiply every term by `t0` or `t1` powers; convenience for builders.
    pub fn times_t(&self, e0: u32, e1: u32) -> Self {
        self.mul_monomial(&Monomial::ambient([e0, e1], [0; 5]))
    }

    /// Reduce rational coefficients into a prime field.
    pub fn reduce(&self, mode: FieldMode) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), c.reduce(mode)?));
        }
        Some(Polynomial::from_terms(terms))
    }
}

/// Jacobian of `fs` with respect to the given variables, evaluated at `point`.
pub fn jacobian(fs: &[Polynomial], vars: &[usize], point: &[Scalar]) -> FieldMatrix {
    let mode = point[0].mode();
    let mut m = FieldMatrix::zeros(mode, fs.len(), vars.len());
    for (i, f) in fs.iter().enumerate() {
        for (j, &v) in vars.iter().enumerate() {
            let d = f.derivative(v);
            m[(i, j)] = d.eval(point).unwrap_or_else(|| Scalar::zero(mode));
        }
    }
    m
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &a[i].1 + &b[j].1;
                    if !s.is_zero() {
                        out.push((a[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Polynomial { terms: out }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_poly {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_poly!(Add, add);
forward_poly!(Sub, sub);
forward_poly!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Canonical printer; output is accepted by [`parse`].
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let is_const = m.exponents().is_empty();
            if is_const {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const Q: FieldMode = FieldMode::Rational;

    fn p(s: &str) -> Polynomial {
        parse(s, Q).unwrap()
    }

    fn binom(n: i64, k: i64) -> i64 {
        if k < 0 || n < k {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn difference_of_squares() {
        let a = p("x0 + x1");
        let b = p("x0 - x1");
        assert_eq!(&a * &b, p("x0^2 - x1^2"));
    }

    #[test]
    fn bidegree_examples() {
        let w = AmbientWeights::zero();
        assert_eq!(p("x2*x4").bidegree(&w), Ok(Bidegree::new(0, 2)));
        let q3 = p("x0^2 + 3*x1*x4 - x2^2");
        let n = 4;
        let f = &p("x1").times_t(n, 0) * &q3;
        assert_eq!(f.bidegree(&w), Ok(Bidegree::new(n as i64, 3)));
        let w1 = AmbientWeights::new([1, 0, 0, 0, 0]).unwrap();
        assert!(matches!(p("t0 + x0").bidegree(&w1), Err(BidegreeError::Inhomogeneous(_))));
        assert_eq!(Polynomial::zero().bidegree(&w), Err(BidegreeError::Zero));
    }

    #[test]
    fn monomial_basis_small_cases() {
        let w = AmbientWeights::zero();
        assert_eq!(monomial_basis(Bidegree::new(0, 2), &w).len(), 15);
        assert_eq!(monomial_basis(Bidegree::new(1, 1), &w).len(), 10);
        assert!(monomial_basis(Bidegree::new(-1, 1), &w).is_empty());
    }

    #[test]
    fn monomial_basis_matches_closed_form() {
        let w = AmbientWeights::zero();
        for dt in 0..=12i64 {
            for dx in 0..=12i64 {
                let got = monomial_basis(Bidegree::new(dt, dx), &w).len() as i64;
                assert_eq!(got, (dt + 1) * binom(dx + 4, 4), "({dt},{dx})");
            }
        }
    }

    #[test]
    fn monomial_basis_count_by_enumeration() {
        // (2kn, k) with n = 1, k = 2: count monomials by brute force over
        // bounded exponents and compare with the generated basis.
        let w = AmbientWeights::zero();
        let (n, k) = (1u32, 2u32);
        let dt = 2 * k * n;
        let mut brute = 0usize;
        for e0 in 0..=dt {
            for a in 0..=k {
                for b in 0..=k {
                    for c in 0..=k {
                        for d in 0..=k {
                            for e in 0..=k {
                                if a + b + c + d + e == k && e0 <= dt {
                                    brute += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(brute, 75);
        assert_eq!(monomial_basis(Bidegree::new(dt as i64, k as i64), &w).len(), brute);
    }

    #[test]
    fn weighted_basis_is_homogeneous() {
        let w = AmbientWeights::new([2, 1, 0, 0, 0]).unwrap();
        let d = Bidegree::new(-1, 2);
        let basis = monomial_basis(d, &w);
        assert!(!basis.is_empty());
        assert!(basis.iter().all(|m| m.bidegree(&w) == d));
    }

    #[test]
    fn substitute_t_of_family_a_generators() {
        let q1 = p("x0^2 + x1*x2");
        let q2 = p("x3^2 - 2*x0*x4");
        let q3 = p("x1^2 + x2*x4 + 5*x0*x3");
        let one = Scalar::one(Q);
        let zero = Scalar::zero(Q);
        let c1 = (&(&(&p("x1") * &q3) - &(&p("x3") * &q2)) + &(&p("x4") * &q1)).times_t(1, 0);
        let expect = &(&(&p("x1") * &q3) - &(&p("x3") * &q2)) + &(&p("x4") * &q1);
        assert_eq!(c1.substitute_t(&one, &zero), expect);
        let p1 = &q3.times_t(0, 1) + &p("-x2*x4 + x3^2").times_t(1, 0);
        assert_eq!(p1.substitute_t(&zero, &one), q3);
        let h = c1.substitute_t(&Scalar::from_i64(Q, 3), &Scalar::from_i64(Q, 7));
        assert_eq!(h.is_x_homogeneous(), Some(3));
        assert!(!h.involves_t());
    }

    #[test]
    fn printer_round_trip_and_order() {
        let f = p("t0^2*x1 - x3^2");
        assert_eq!(f.len(), 2);
        assert_eq!(f.to_string(), "-x3^2 + t0^2*x1");
        assert_eq!(p(&f.to_string()), f);
        let g = p("x1*x3 - x0*x4");
        assert_eq!(g.to_string(), "-x0*x4 + x1*x3");
        assert_eq!(p(&g.to_string()), g);
        assert_eq!(p("x0 + t0").len(), 2);
        assert_eq!(p("1/2*x0 - 3").to_string(), "1/2*x0 - 3");
    }

    #[test]
    fn jacobian_of_quadric() {
        let f = p("x0*x1 + t1*x2^2");
        let pt: Vec<Scalar> = [1, 2, 3, 4, 5, 6, 7].iter().map(|&v| Scalar::from_i64(Q, v)).collect();
        let j = jacobian(&[f], &[T1, X0, X0 + 2], &pt);
        assert_eq!(j[(0, 0)], Scalar::from_i64(Q, 25));
        assert_eq!(j[(0, 1)], Scalar::from_i64(Q, 4));
        assert_eq!(j[(0, 2)], Scalar::from_i64(Q, 2 * 2 * 5));
    }

    #[test]
    fn mixed_mode_arithmetic_is_an_error() {
        let a = p("x0 + 1");
        let b = parse("x0 + 1", FieldMode::default_prime()).unwrap();
        assert!(a.checked_mul(&b).is_err());
        assert!(a.checked_add(&Polynomial::zero()).is_ok());
    }

    #[test]
    fn compose_linear_change() {
        let f = p("x0^2 - x1");
        let images: Vec<Polynomial> = (0..AMBIENT_VARS)
            .map(|i| if i == X0 { p("x0 + x1") } else { Polynomial::var(i, Q) })
            .collect();
        assert_eq!(f.compose(&images), p("x0^2 + 2*x0*x1 + x1^2 - x1"));
    }
}

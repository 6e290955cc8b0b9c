//! Univariate polynomials over [`Scalar`]: the coordinate ring of one chart
//! of the base line.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::{FieldMode, Scalar};

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

/// A closed point of the affine line, or an irreducible (or unsplit) factor
/// that has no root in the coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Place {
    Point(Scalar),
    Higher(UniPoly),
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Point(_) => 1,
            Place::Higher(p) => p.degree().unwrap_or(0),
        }
    }
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one(mode: FieldMode) -> Self {
        Self::constant(Scalar::one(mode))
    }

    /// The local coordinate `s`.
    pub fn x(mode: FieldMode) -> Self {
        Self::monomial(Scalar::one(mode), 1)
    }

    pub fn monomial(c: Scalar, e: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Scalar::zero(c.mode()); e + 1];
        v[e] = c;
        UniPoly { coeffs: v }
    }

    /// `s - c`.
    pub fn linear(c: &Scalar) -> Self {
        Self::from_coeffs(vec![-c, Scalar::one(c.mode())])
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// From `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_sparse(terms: Vec<(usize, Scalar)>) -> Self {
        let Some(mode) = terms.first().map(|(_, c)| c.mode()) else {
            return Self::zero();
        };
        let n = terms.iter().map(|(e, _)| *e).max().unwrap() + 1;
        let mut v = vec![Scalar::zero(mode); n];
        for (e, c) in terms {
            v[e] = &v[e] + &c;
        }
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&Scalar> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial sent to `usize::MAX` (for pivoting).
    pub fn degree_or_max(&self) -> usize {
        self.degree().unwrap_or(usize::MAX)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn mode(&self) -> Option<FieldMode> {
        self.coeffs.first().map(|c| c.mode())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|l| l.is_one())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(x.mode());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from_i64(c.mode(), i as i64))
                .collect(),
        )
    }

    /// Multiply by `s^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mode = self.mode().unwrap();
        let mut v = vec![Scalar::zero(mode); k];
        v.extend_from_slice(&self.coeffs);
        UniPoly { coeffs: v }
    }

    /// Order of vanishing at `s = 0`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `s^d p(1/s)` for `d >= deg p`.
    pub fn reversed(&self, d: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mode = self.mode().unwrap();
        let mut v = vec![Scalar::zero(mode); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[d - i] = c.clone();
        }
        Self::from_coeffs(v)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let Some(n) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if n < dd {
            return (Self::zero(), self.clone());
        }
        let mode = d.mode().unwrap();
        let inv = d.leading().unwrap().inv().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![Scalar::zero(mode); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = &r[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * dc);
            }
            q[i] = c;
        }
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    /// `self / d` when `d` divides `self`.
    pub fn exact_div(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mode = self.mode().expect("power of zero polynomial");
        let mut acc = UniPoly::one(mode);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mode = m.mode().unwrap();
        let mut acc = UniPoly::one(mode).div_rem(m).1;
        let mut base = self.div_rem(m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).div_rem(m).1;
            }
            base = (&base * &base).div_rem(m).1;
            e >>= 1;
        }
        acc
    }

    /// Multiplicity of the root `c`.
    pub fn multiplicity_at(&self, c: &Scalar) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = UniPoly::linear(c);
        let mut f = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = f.div_rem(&lin);
            if !r.is_zero() {
                return k;
            }
            f = q;
            k += 1;
        }
    }

    /// Multiplicity of an arbitrary monic factor.
    pub fn multiplicity_of(&self, g: &UniPoly) -> usize {
        if self.is_zero() || g.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut f = self.clone();
        let mut k = 0;
        while let Some(q) = f.exact_div(g) {
            f = q;
            k += 1;
        }
        k
    }

    /// Square-free decomposition: `self = lc * prod_i a_i^i` (Yun). Valid in
    /// characteristic zero and for characteristic exceeding the degree.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.exact_div(&a).unwrap();
        let mut c = df.exact_div(&a).unwrap();
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).unwrap();
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.exact_div(&a).unwrap();
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Roots in the coefficient field of a square-free polynomial. `None` when
    /// the search is not attempted (rational coefficients too large to factor
    /// by trial division).
    pub fn roots(&self) -> Option<Vec<Scalar>> {
        let mode = self.mode()?;
        let mut roots = match mode {
            FieldMode::Prime(p) => self.prime_roots(p),
            FieldMode::Rational => self.rational_roots()?,
        };
        roots.sort();
        roots.dedup();
        Some(roots)
    }

    fn prime_roots(&self, p: u64) -> Vec<Scalar> {
        let mode = FieldMode::Prime(p);
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let x = UniPoly::x(mode);
        let xp = x.pow_mod(p, &f);
        let lin = f.gcd(&(&xp - &x));
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        split_linear(&lin, p, &mut rng, &mut out);
        out
    }

    fn rational_roots(&self) -> Option<Vec<Scalar>> {
        const LIMIT: u64 = 1_000_000_000_000;
        let mode = FieldMode::Rational;
        let mut out = Vec::new();
        let v = self.valuation()?;
        if v > 0 {
            out.push(Scalar::zero(mode));
        }
        let core_coeffs: Vec<_> = self.coeffs[v..].to_vec();
        if core_coeffs.len() <= 1 {
            return Some(out);
        }
        // clear denominators
        let mut lcm = BigInt::one();
        for c in &core_coeffs {
            lcm = lcm.lcm(c.as_rational().unwrap().denom());
        }
        let ints: Vec<BigInt> = core_coeffs
            .iter()
            .map(|c| {
                let r = c.as_rational().unwrap();
                r.numer() * (&lcm / r.denom())
            })
            .collect();
        let a0 = ints[0].abs().to_u64()?;
        let an = ints.last().unwrap().abs().to_u64()?;
        if a0 > LIMIT || an > LIMIT {
            return None;
        }
        let f = UniPoly::from_coeffs(core_coeffs);
        for num in divisors(a0) {
            for den in divisors(an) {
                if num.gcd(&den) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let r = Scalar::from_ratio(
                        mode,
                        &BigInt::from(sign * num as i64),
                        &BigInt::from(den),
                    )
                    .unwrap();
                    if f.eval(&r).is_zero() {
                        out.push(r);
                    }
                }
            }
        }
        Some(out)
    }

    /// Interpolating polynomial through `(xs[i], ys[i])`; the `xs` must be
    /// distinct.
    pub fn interpolate(xs: &[Scalar], ys: &[Scalar]) -> UniPoly {
        assert_eq!(xs.len(), ys.len());
        if xs.is_empty() {
            return UniPoly::zero();
        }
        // Newton divided differences
        let n = xs.len();
        let mut coef: Vec<Scalar> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = &coef[i] - &coef[i - 1];
                let den = (&xs[i] - &xs[i - j]).inv().expect("distinct nodes");
                coef[i] = &num * &den;
            }
        }
        let mut acc = UniPoly::constant(coef[n - 1].clone());
        for i in (0..n - 1).rev() {
            acc = &(&acc * &UniPoly::linear(&xs[i])) + &UniPoly::constant(coef[i].clone());
        }
        acc
    }

    /// Resultant of `self` and `other` read with formal degrees `df`, `dg`
    /// (leading coefficients may vanish), via the Sylvester determinant.
    pub fn resultant_formal(&self, other: &UniPoly, df: usize, dg: usize, mode: FieldMode) -> Scalar {
        let n = df + dg;
        if n == 0 {
            return Scalar::one(mode);
        }
        let zero = Scalar::zero(mode);
        let mut m = crate::linalg::FieldMatrix::zeros(mode, n, n);
        for r in 0..dg {
            for i in 0..=df {
                m[(r, r + i)] = self.coeff(df - i).cloned().unwrap_or_else(|| zero.clone());
            }
        }
        for r in 0..df {
            for i in 0..=dg {
                m[(dg + r, r + i)] = other.coeff(dg - i).cloned().unwrap_or_else(|| zero.clone());
            }
        }
        m.determinant()
    }

    /// Decompose into places with multiplicities: linear factors become
    /// points, whatever is left of each square-free layer is reported as a
    /// single higher-degree place.
    pub fn places(&self) -> Vec<(Place, usize)> {
        let mut out = Vec::new();
        for (layer, mult) in self.squarefree_decomposition() {
            let roots = layer.roots().unwrap_or_default();
            let mut rest = layer.clone();
            for r in roots {
                rest = rest.exact_div(&UniPoly::linear(&r)).unwrap();
                out.push((Place::Point(r), mult));
            }
            if rest.degree().unwrap_or(0) > 0 {
                out.push((Place::Higher(rest.monic()), mult));
            }
        }
        out.sort();
        out
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Equal-degree splitting of a product of distinct linear factors.
fn split_linear(f: &UniPoly, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Scalar>) {
    use rand::Rng;
    let mode = FieldMode::Prime(p);
    match f.degree() {
        None | Some(0) => {}
        Some(1) => {
            let f = f.monic();
            out.push(-&f.coeffs[0]);
        }
        Some(deg) => loop {
            let a = Scalar::Prime {
                value: rng.gen_range(0..p),
                modulus: p,
            };
            let base = &UniPoly::x(mode) + &UniPoly::constant(a);
            let h = &base.pow_mod((p - 1) / 2, f) - &UniPoly::one(mode);
            let g = f.gcd(&h);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < deg {
                let other = f.exact_div(&g).unwrap();
                split_linear(&g, p, rng, out);
                split_linear(&other, p, rng, out);
                return;
            }
        },
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UniPoly::from_coeffs(v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mode = self.mode().unwrap();
        let mut v = vec![Scalar::zero(mode); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        UniPoly::from_coeffs(v)
    }
}

macro_rules! forward_uni {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_uni!(Add, add);
forward_uni!(Sub, sub);
forward_uni!(Mul, mul);

impl PartialOrd for UniPoly {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UniPoly {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", abs)?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{}*", abs)?;
                    }
                    f.write_str("t")?;
                    if i > 1 {
                        write!(f, "^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(mode: FieldMode, c: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(c.iter().map(|&v| Scalar::from_i64(mode, v)).collect())
    }

    #[test]
    fn division_identity() {
        let m = FieldMode::Rational;
        let a = up(m, &[1, 2, 3, 4, 5]);
        let b = up(m, &[-1, 0, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let m = FieldMode::default_prime();
        let common = up(m, &[3, 1]);
        let a = &common * &up(m, &[1, 0, 1]);
        let b = &common * &up(m, &[5, 2]);
        assert_eq!(a.gcd(&b), common.monic());
    }

    #[test]
    fn squarefree_layers() {
        let m = FieldMode::Rational;
        let f = &up(m, &[0, 1]).pow(3) * &up(m, &[-2, 1]);
        let sq = f.squarefree_decomposition();
        assert_eq!(sq, vec![(up(m, &[-2, 1]), 1), (up(m, &[0, 1]), 3)]);
    }

    #[test]
    fn prime_root_finding() {
        let m = FieldMode::default_prime();
        let f = &(&up(m, &[-3, 1]) * &up(m, &[7, 1])) * &up(m, &[1, 0, 1]);
        let mut roots = f.roots().unwrap();
        roots.sort();
        let mut expect = vec![Scalar::from_i64(m, 3), Scalar::from_i64(m, -7)];
        expect.sort();
        // x^2 + 1 splits iff p = 1 mod 4; 2^31 - 1 = 3 mod 4, so it does not.
        assert_eq!(roots, expect);
    }

    #[test]
    fn places_with_multiplicity() {
        let m = FieldMode::Rational;
        let f = &(&up(m, &[0, 1]).pow(2) * &up(m, &[1, 0, 1])) * &up(m, &[3, -2]);
        let places = f.places();
        assert_eq!(
            places,
            vec![
                (Place::Point(Scalar::zero(m)), 2),
                (
                    Place::Point(Scalar::from_ratio(m, &3.into(), &2.into()).unwrap()),
                    1
                ),
                (Place::Higher(up(m, &[1, 0, 1])), 1),
            ]
        );
        assert_eq!(f.multiplicity_at(&Scalar::zero(m)), 2);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let m = FieldMode::default_prime();
        let f = up(m, &[4, -1, 0, 7]);
        let xs: Vec<Scalar> = (0..4).map(|i| Scalar::from_i64(m, 3 * i + 1)).collect();
        let ys: Vec<Scalar> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), f);
    }

    #[test]
    fn resultant_detects_common_root() {
        let q = FieldMode::Rational;
        let f = &up(q, &[-2, 1]) * &up(q, &[1, 1]);
        let g = &up(q, &[-2, 1]) * &up(q, &[5, 1]);
        assert!(f.resultant_formal(&g, 2, 2, q).is_zero());
        // res(x - a, x - b) = b - a up to sign
        let r = up(q, &[-1, 1]).resultant_formal(&up(q, &[-4, 1]), 1, 1, q);
        assert_eq!(r, Scalar::from_i64(q, -3));
    }

    #[test]
    fn reversal_moves_roots_to_infinity() {
        let m = FieldMode::Rational;
        let f = up(m, &[2, 0, 1]);
        assert_eq!(f.reversed(4), up(m, &[0, 0, 1, 0, 2]));
        assert_eq!(f.reversed(4).valuation(), Some(2));
    }
}

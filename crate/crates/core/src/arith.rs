//! Exact scalars, polynomials in one formal variable, and the q-numbers
//! built from them (Stirling numbers, q-factorials, q-multinomials and the
//! flag counts `F_r^(n)`, `G_r^(n)`).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Discrepancy, Error};

/// Arbitrary precision rational, always in lowest terms.
pub type BigRat = BigRational;

pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn rat_int(n: BigInt) -> BigRat {
    BigRat::from_integer(n)
}

/// `p/q` or `p` for integers.
pub fn fmt_rat(r: &BigRat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<BigRat, Error> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRat::new(p, q))
        }
        None => Ok(rat_int(s.parse().map_err(|_| bad())?)),
    }
}

/// Dense polynomial in one variable with rational coefficients.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and `degree()` returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<BigRat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, BigRat::one())
    }

    pub fn constant(a: BigRat) -> Self {
        Self::from_coeffs(vec![a])
    }

    pub fn from_int(a: i64) -> Self {
        Self::constant(rat(a))
    }

    /// `a * q^k`
    pub fn monomial(k: usize, a: BigRat) -> Self {
        let mut c = vec![BigRat::zero(); k + 1];
        c[k] = a;
        Self::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<BigRat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| rat(x)).collect())
    }

    /// Builds a polynomial with natural number coefficients from counts.
    pub fn from_counts(c: &[u64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| rat_int(BigInt::from(x))).collect())
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> BigRat {
        self.c.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn scale(&self, a: &BigRat) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        QPoly { c: self.c.iter().map(|x| x * a).collect() }
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigRat::zero(); k];
        c.extend(self.c.iter().cloned());
        QPoly { c }
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> BigRat {
        self.c.iter().fold(BigRat::zero(), |s, a| s + a)
    }

    /// `q^degq * p(1/q)`; fails if `degq` is below the actual degree.
    pub fn reverse(&self, degq: usize) -> Result<Self, Error> {
        match self.degree() {
            None => Ok(Self::zero()),
            Some(d) if d > degq => Err(Error::QDegree { found: d, bound: degq }),
            Some(_) => {
                let mut c = vec![BigRat::zero(); degq + 1];
                for (i, a) in self.c.iter().enumerate() {
                    c[degq - i] = a.clone();
                }
                Ok(Self::from_coeffs(c))
            }
        }
    }

    /// Long division, returning quotient and remainder.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = &d.c[dd];
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quo = vec![BigRat::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let t = &r[k + dd] / lead;
            if t.is_zero() {
                continue;
            }
            for (i, b) in d.c.iter().enumerate() {
                r[k + i] -= &t * b;
            }
            quo[k] = t;
        }
        r.truncate(dd);
        (Self::from_coeffs(quo), Self::from_coeffs(r))
    }

    /// Division that must leave no remainder.
    pub fn div_exact(&self, d: &QPoly) -> Result<QPoly, Error> {
        let (quo, rem) = self.div_rem(d);
        if rem.is_zero() {
            Ok(quo)
        } else {
            Err(Error::InexactDivision { num: self.to_string(), den: d.to_string() })
        }
    }

    /// True if every coefficient is a nonnegative integer.
    pub fn is_natural(&self) -> bool {
        self.c.iter().all(|a| a.is_integer() && !a.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|a| a.is_integer())
    }

    pub fn pow(&self, k: u32) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl fmt::Display for QPoly {
    /// Renders like `1 + 2q - 1/2q^3`; zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let num = if k > 0 && mag.is_one() { String::new() } else { fmt_rat(&mag) };
            match k {
                0 => write!(f, "{num}")?,
                1 => write!(f, "{num}q")?,
                _ => write!(f, "{num}q^{k}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for QPoly {
    type Err = Error;

    /// Parses the `Display` form, e.g. `2 + 5q + 2q^2` or `-q^3`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Invalid(format!("bad polynomial `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut acc = QPoly::zero();
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(&t)),
            };
            let (coef, k) = match body.find('q') {
                None => (parse_rat(body)?, 0usize),
                Some(p) => {
                    let c = if p == 0 { BigRat::one() } else { parse_rat(&body[..p])? };
                    let rest = &body[p + 1..];
                    let k = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                    };
                    (c, k)
                }
            };
            let coef = if neg { -coef } else { coef };
            acc += &QPoly::monomial(k, coef);
        }
        Ok(acc)
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, o: &QPoly) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), BigRat::zero());
        }
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, o: &QPoly) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), BigRat::zero());
        }
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a -= b;
        }
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }
}

impl Add<&QPoly> for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub<&QPoly> for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Mul<&QPoly> for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![BigRat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(c)
    }
}

impl MulAssign<&QPoly> for QPoly {
    fn mul_assign(&mut self, o: &QPoly) {
        *self = &*self * o;
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Add for QPoly {
    type Output = QPoly;
    fn add(mut self, o: QPoly) -> QPoly {
        self += &o;
        self
    }
}

impl Sub for QPoly {
    type Output = QPoly;
    fn sub(mut self, o: QPoly) -> QPoly {
        self -= &o;
        self
    }
}

impl Mul for QPoly {
    type Output = QPoly;
    fn mul(self, o: QPoly) -> QPoly {
        &self * &o
    }
}

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

fn stirling_table() -> &'static Mutex<Vec<Vec<BigInt>>> {
    static T: OnceLock<Mutex<Vec<Vec<BigInt>>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(vec![vec![BigInt::one()]]))
}

/// Stirling number of the second kind `{r brace n}`.
pub fn stirling2(r: usize, n: usize) -> BigInt {
    if n > r {
        return BigInt::zero();
    }
    let mut t = stirling_table().lock().unwrap_or_else(|e| e.into_inner());
    while t.len() <= r {
        let prev = t.last().unwrap().clone();
        let m = t.len();
        let mut row = vec![BigInt::zero(); m + 1];
        for k in 1..=m {
            let a = prev.get(k).cloned().unwrap_or_default() * BigInt::from(k);
            let b = prev.get(k - 1).cloned().unwrap_or_default();
            row[k] = a + b;
        }
        t.push(row);
    }
    t[r][n].clone()
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// Ordinary multinomial coefficient; zero if the parts do not sum to `r`.
pub fn multinomial(r: usize, parts: &[usize]) -> BigInt {
    if parts.iter().sum::<usize>() != r {
        return BigInt::zero();
    }
    let mut acc = factorial(r);
    for &k in parts {
        acc = acc.div_floor(&factorial(k));
    }
    acc
}

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_int(n: usize) -> QPoly {
    QPoly::from_coeffs(vec![BigRat::one(); n])
}

/// `[n]_q!`
pub fn q_factorial(n: usize) -> QPoly {
    (1..=n).fold(QPoly::one(), |acc, i| &acc * &q_int(i))
}

/// `(q)_n = (1-q)(1-q^2)...(1-q^n)`.
pub fn q_pochhammer(n: usize) -> QPoly {
    let mut acc = QPoly::one();
    for i in 1..=n {
        let mut f = QPoly::one();
        f -= &QPoly::monomial(i, BigRat::one());
        acc = &acc * &f;
    }
    acc
}

/// Gaussian multinomial `(q)_r / ((q)_{k_1} ... (q)_{k_n})`.
pub fn q_multinomial(r: usize, parts: &[usize]) -> Result<QPoly, Error> {
    let sum: usize = parts.iter().sum();
    if sum != r {
        return Err(Error::PartsSum { r, sum });
    }
    let mut acc = q_pochhammer(r);
    for &k in parts {
        if k > 0 {
            acc = acc.div_exact(&q_pochhammer(k))?;
        }
    }
    Ok(acc)
}

fn compositions_exact(r: usize, n: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(left: usize, slots: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if slots == 0 {
            if left == 0 {
                f(cur);
            }
            return;
        }
        for k in 1..=left.saturating_sub(slots - 1) {
            cur.push(k);
            go(left - k, slots - 1, cur, f);
            cur.pop();
        }
    }
    go(r, n, &mut Vec::new(), f);
}

/// `F_r^(n)`: the sum of q-multinomials over compositions of `r` into `n` positive parts.
pub fn flag_f(r: usize, n: usize) -> QPoly {
    if n == 0 {
        return if r == 0 { QPoly::one() } else { QPoly::zero() };
    }
    let mut acc = QPoly::zero();
    compositions_exact(r, n, &mut |parts| {
        acc += &q_multinomial(r, parts).expect("composition sums to r");
    });
    acc
}

/// `G_r^(n) = sum_i binom(n,i) F_r^(i)`.
pub fn flag_g(r: usize, n: usize) -> QPoly {
    let mut acc = QPoly::zero();
    for i in 0..=n {
        acc += &flag_f(r, i).scale(&rat_int(binomial(n, i)));
    }
    acc
}

/// Memoizing table of `F`, `G` and `(q)_r / (q)_{r-i}`.
#[derive(Default)]
struct FlagCache {
    f: HashMap<(usize, usize), QPoly>,
    g: HashMap<(usize, usize), QPoly>,
    ratio: HashMap<(usize, usize), QPoly>,
}

impl FlagCache {
    fn f(&mut self, r: usize, n: usize) -> QPoly {
        self.f.entry((r, n)).or_insert_with(|| flag_f(r, n)).clone()
    }

    fn g(&mut self, r: usize, n: usize) -> QPoly {
        if let Some(p) = self.g.get(&(r, n)) {
            return p.clone();
        }
        let mut acc = QPoly::zero();
        for i in 0..=n {
            acc += &self.f(r, i).scale(&rat_int(binomial(n, i)));
        }
        self.g.insert((r, n), acc.clone());
        acc
    }

    fn ratio(&mut self, r: usize, i: usize) -> Result<QPoly, Error> {
        if let Some(p) = self.ratio.get(&(r, i)) {
            return Ok(p.clone());
        }
        let p = q_pochhammer(r).div_exact(&q_pochhammer(r - i))?;
        self.ratio.insert((r, i), p.clone());
        Ok(p)
    }
}

fn sign(i: usize) -> BigRat {
    if i % 2 == 0 {
        BigRat::one()
    } else {
        -BigRat::one()
    }
}

/// Verifies, for every `r <= r_max`, the three-term recurrence for `F_{r+1}^(n)`,
/// the recurrence for `G_{r+1}^(n)`, and the inversion
/// `F_r^(n) = sum_i (-1)^(n-i) binom(n,i) G_r^(i)`.
pub fn check_f_recurrence(n: usize, r_max: usize) -> Result<(), Discrepancy> {
    let mut cache = FlagCache::default();
    let arith = |e: Error| Discrepancy::internal(e.to_string());
    for r in 0..=r_max {
        let mut rhs = QPoly::zero();
        for i in 0..n {
            if i > r {
                continue;
            }
            let ratio = cache.ratio(r, i).map_err(arith)?;
            for j in (n - 1 - i)..=n {
                let c = rat_int(binomial(n, j) * binomial(j, n - 1 - i)) * sign(i);
                rhs += &(&ratio * &cache.f(r - i, j)).scale(&c);
            }
        }
        let lhs = cache.f(r + 1, n);
        if lhs != rhs {
            return Err(Discrepancy::value(format!("F recurrence n={n} r={r}"), "", &lhs, &rhs));
        }

        let mut rhs = QPoly::zero();
        for i in 0..n {
            if i > r {
                continue;
            }
            let ratio = cache.ratio(r, i).map_err(arith)?;
            let c = rat_int(binomial(n, i + 1)) * sign(i);
            rhs += &(&ratio * &cache.g(r - i, n)).scale(&c);
        }
        let lhs = cache.g(r + 1, n);
        if lhs != rhs {
            return Err(Discrepancy::value(format!("G recurrence n={n} r={r}"), "", &lhs, &rhs));
        }

        let mut inv = QPoly::zero();
        for i in 0..=n {
            inv += &cache.g(r, i).scale(&(rat_int(binomial(n, i)) * sign(n - i)));
        }
        let f = cache.f(r, n);
        if f != inv {
            return Err(Discrepancy::value(format!("F/G inversion n={n} r={r}"), "", &f, &inv));
        }
    }
    Ok(())
}

/// Converts a nonnegative integer rational to `u64` if it fits.
pub fn rat_to_u64(r: &BigRat) -> Option<u64> {
    if r.is_integer() {
        r.numer().to_u64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    // Independent oracle: Pascal recurrence for the q-binomial,
    // [n k] = [n-1 k-1] + q^k [n-1 k].
    fn qbinom_pascal(n: usize, k: usize) -> QPoly {
        if k == 0 || k == n {
            return QPoly::one();
        }
        if k > n {
            return QPoly::zero();
        }
        &qbinom_pascal(n - 1, k - 1) + &qbinom_pascal(n - 1, k).shift(k)
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(0, 0), BigInt::from(1));
        assert_eq!(stirling2(3, 0), BigInt::from(0));
        assert_eq!(stirling2(2, 2), BigInt::from(1));
        assert_eq!(stirling2(3, 2), BigInt::from(3));
        assert_eq!(stirling2(9, 4), BigInt::from(7770));
    }

    #[test]
    fn q_factorials() {
        assert_eq!(q_factorial(0), QPoly::one());
        assert_eq!(q_factorial(2), p("1 + q"));
        assert_eq!(q_factorial(3), p("1 + 2q + 2q^2 + q^3"));
    }

    #[test]
    fn q_multinomials() {
        assert_eq!(q_multinomial(2, &[1, 1]).unwrap(), p("1+q"));
        assert_eq!(q_multinomial(3, &[3]).unwrap(), QPoly::one());
        assert_eq!(q_multinomial(4, &[2, 2]).unwrap(), p("1+q+2q^2+q^3+q^4"));
        assert!(matches!(q_multinomial(4, &[1, 1]), Err(Error::PartsSum { r: 4, sum: 2 })));
        for n in 0..8 {
            for k in 0..=n {
                assert_eq!(q_multinomial(n, &[k, n - k]).unwrap(), qbinom_pascal(n, k));
            }
        }
    }

    #[test]
    fn flags() {
        assert_eq!(flag_f(2, 2), p("1+q"));
        assert_eq!(flag_f(0, 0), QPoly::one());
        assert_eq!(flag_f(3, 2), p("2+2q+2q^2"));
        assert!(flag_f(1, 2).is_zero());
        assert!(flag_f(2, 0).is_zero());
        assert_eq!(flag_g(2, 2), p("3+q"));
        assert!(flag_g(3, 0).is_zero());
        assert_eq!(flag_g(1, 3), QPoly::from_int(3));
    }

    #[test]
    fn recurrences() {
        check_f_recurrence(2, 6).unwrap();
        check_f_recurrence(1, 6).unwrap();
        check_f_recurrence(5, 10).unwrap();
    }

    #[test]
    fn poly_text_roundtrip() {
        for s in ["0", "1", "-q^3", "2 + 5q + 2q^2", "1/2 - 3/4q"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("q + q"), p("2q"));
    }

    #[test]
    fn reverse_and_division() {
        assert_eq!(p("1+2q").reverse(2).unwrap(), p("q^2+2q"));
        assert!(p("q^3").reverse(2).is_err());
        let (quo, rem) = p("q^2 + 1").div_rem(&p("q + 1"));
        assert_eq!(quo, p("q - 1"));
        assert_eq!(rem, QPoly::from_int(2));
        assert!(p("q^2+1").div_exact(&p("q+1")).is_err());
    }
}

//! Exact scalars in ℚ or a cyclotomic field ℚ(ζ_N).
//!
//! An element of ℚ(ζ_N) is stored as its coefficient vector in the power
//! basis `1, ζ, …, ζ^{φ(N)-1}`, i.e. reduced modulo the cyclotomic
//! polynomial Φ_N. Within one ambient order the representation is unique,
//! so structural equality is field equality. Rational values always carry
//! order 1. Values built in different ambient orders are not brought to a
//! common one, so one computation should draw all its roots of unity from
//! a single `ℚ(ζ_N)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

fn cyclo_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients (low degree first) of the N-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = cyclo_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num: Vec<i64> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_poly(d);
            num = exact_div_monic(&num, &div);
        }
    }
    let p = Arc::new(num);
    cyclo_cache().write().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn euler_phi(n: u32) -> usize {
    cyclotomic_poly(n).len() - 1
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { order: 1, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::normalized(1, vec![r])
    }

    /// `ζ_N^k` for any integer k.
    pub fn zeta(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::reduce(order, poly)
    }

    /// Builds an element from an arbitrary polynomial in ζ_N.
    pub fn from_poly(order: u32, poly: Vec<BigRational>) -> Self {
        Self::reduce(order, poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.order != 1 {
            return None;
        }
        Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
    }

    fn normalized(order: u32, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let order = if coeffs.len() <= 1 { 1 } else { order };
        Scalar { order, coeffs }
    }

    fn reduce(order: u32, mut poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        while poly.len() > deg {
            let top = poly.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = poly.len() - deg;
            // x^{base+deg} = -Σ_{j<deg} φ_j x^{base+j}
            for (j, &pj) in phi.iter().take(deg).enumerate() {
                if pj != 0 {
                    poly[base + j] -= &top * BigRational::from_integer(BigInt::from(pj));
                }
            }
        }
        Self::normalized(order, poly)
    }

    /// Re-expresses `self` as a polynomial in ζ_target (target must be a multiple).
    fn lifted(&self, target: u32) -> Vec<BigRational> {
        if self.order == target || self.order == 1 {
            return self.coeffs.clone();
        }
        let step = (target / self.order) as usize;
        let mut out = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k * step] = c.clone();
        }
        out
    }

    fn common_order(&self, other: &Scalar) -> u32 {
        match (self.order, other.order) {
            (1, b) => b,
            (a, 1) => a,
            (a, b) if a == b => a,
            (a, b) => a / gcd_u32(a, b) * b,
        }
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Some(acc)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order == 1 {
            return Some(Self::from_rational(self.coeffs[0].recip()));
        }
        // Solve M·x = e_0 where M is multiplication by self in the power basis.
        let n = euler_phi(self.order);
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        for k in 0..n {
            let prod = self * &Scalar::zeta(self.order, k as i64);
            let mut col = prod.lifted(self.order);
            col.resize(n, BigRational::zero());
            cols.push(col);
        }
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..n).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        let sol = solve_augmented(&mut m)?;
        Some(Self::normalized(self.order, sol))
    }

    /// Complex conjugate (ζ ↦ ζ^{-1}).
    pub fn conj(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as i64;
        let mut acc = Scalar::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += &(&Scalar::zeta(self.order, (n - k as i64) % n) * &Scalar::from_rational(c.clone()));
            }
        }
        acc
    }

    /// Parses `"a"`, `"a/b"` or a bracketed coefficient list `"[c0, c1, …]"`
    /// (the latter requires the field order).
    pub fn parse(text: &str, order: u32) -> Result<Self> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let parts: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let coeffs = parts.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>>>()?;
            return Ok(Self::reduce(order, coeffs));
        }
        Ok(Self::from_rational(parse_rational(t)?))
    }

    /// Canonical exact string: `a/b` for rationals, coefficient list otherwise.
    pub fn to_exact_string(&self) -> String {
        if self.order == 1 {
            return fmt_rational(&self.as_rational().unwrap());
        }
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        format!("[{}]", parts.join(", "))
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse { line: 0, msg: format!("bad rational '{s}'") };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Gauss–Jordan on an n×(n+1) augmented matrix; `None` if singular.
fn solve_augmented(m: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return write!(f, "{}", fmt_rational(&self.as_rational().unwrap()));
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let mono = match k {
                0 => String::new(),
                1 => format!("z{}", self.order),
                _ => format!("z{}^{}", self.order, k),
            };
            let body = if k == 0 {
                fmt_rational(&a)
            } else if a.is_one() {
                mono
            } else {
                format!("{}*{}", fmt_rational(&a), mono)
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let order = self.common_order(rhs);
        let mut a = self.lifted(order);
        let b = rhs.lifted(order);
        if b.len() > a.len() {
            a.resize(b.len(), BigRational::zero());
        }
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        if self.order == rhs.order || self.order == 1 || rhs.order == 1 {
            Scalar::normalized(order, a)
        } else {
            Scalar::reduce(order, a)
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.order == 1 {
            let c = &self.coeffs[0];
            return Scalar::normalized(rhs.order, rhs.coeffs.iter().map(|x| x * c).collect());
        }
        if rhs.order == 1 {
            return rhs * self;
        }
        let order = self.common_order(rhs);
        let a = self.lifted(order);
        let b = rhs.lifted(order);
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Scalar::reduce(order, prod)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

/// Small helper used by linear algebra code that wants an integer view.
pub fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(8), 4);
    }

    #[test]
    fn roots_of_unity_multiply() {
        let z = Scalar::zeta(8, 1);
        assert_eq!(z.pow(8).unwrap(), Scalar::one());
        assert_eq!(z.pow(4).unwrap(), Scalar::from_int(-1));
        assert_eq!(Scalar::zeta(4, 1).pow(2).unwrap(), Scalar::from_int(-1));
        assert_eq!(Scalar::zeta(2, 1), Scalar::from_int(-1));
        assert_eq!(Scalar::zeta(8, -3), z.pow(-3).unwrap());
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = &(&Scalar::one() + &Scalar::zeta(3, 1)) + &Scalar::zeta(3, 2);
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let x = &Scalar::from_int(2) + &Scalar::zeta(5, 2);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Scalar::one());
        assert!(Scalar::zero().inv().is_none());
        assert_eq!(Scalar::from_ratio(3, 4).inv().unwrap(), Scalar::from_ratio(4, 3));
    }

    #[test]
    fn mixed_orders_embed() {
        let i = Scalar::zeta(4, 1);
        let w = Scalar::zeta(3, 1);
        let p = &i * &w;
        assert_eq!(p.order(), 12);
        assert_eq!(p.pow(12).unwrap(), Scalar::one());
    }

    #[test]
    fn exact_strings_roundtrip() {
        let x = &Scalar::from_ratio(-1, 2) + &Scalar::zeta(8, 3);
        let s = x.to_exact_string();
        assert_eq!(Scalar::parse(&s, 8).unwrap(), x);
        assert_eq!(Scalar::parse("7/14", 1).unwrap(), Scalar::from_ratio(1, 2));
        assert_eq!(Scalar::from_ratio(1, 2).to_string(), "1/2");
        assert_eq!(Scalar::zeta(4, 1).to_string(), "z4");
    }

    #[test]
    fn conjugation() {
        let i = Scalar::zeta(4, 1);
        assert_eq!(i.conj(), Scalar::zeta(4, 3));
        let g = &i * &i.conj();
        assert!(g.is_one());
    }
}

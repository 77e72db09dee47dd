//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(m)-1}` and every
//! result is reduced modulo the cyclotomic polynomial `Φ_m`. The generator
//! `ζ_m` of order `m` is the residue class of `x`; for `n = c·m` the
//! embedding sends `ζ_m` to `ζ_n^c`, which makes the family of generators a
//! compatible system of primitive roots of unity.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Integer polynomial, coefficients in ascending degree.
pub type IntPoly = Vec<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),
    #[error("cannot embed Q(zeta_{from}) into Q(zeta_{to}): {from} does not divide {to}")]
    NotDivisible { from: u32, to: u32 },
    #[error("order must be positive")]
    ZeroOrder,
    #[error("expected {expected} coefficients for order {order}, got {got}")]
    BadLength { order: u32, expected: usize, got: usize },
    #[error("malformed rational coefficient {0:?}")]
    BadCoefficient(String),
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Exact quotient of `num` by a monic integer polynomial.
fn div_monic(num: &[BigInt], den: &[BigInt]) -> IntPoly {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        quot[k - dd] = c.clone();
        for (i, d) in den.iter().enumerate() {
            rem[k - dd + i] -= &c * d;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// The `m`-th cyclotomic polynomial `Φ_m`, computed as `(x^m − 1)` divided by
/// `Φ_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_polynomial(m: u32) -> IntPoly {
    assert!(m >= 1, "cyclotomic_polynomial: m must be positive");
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = -BigInt::one();
    poly[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d < m {
            poly = div_monic(&poly, &modulus(d));
        }
    }
    poly
}

fn modulus_cache() -> &'static RwLock<HashMap<u32, Arc<IntPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Cached `Φ_m`.
pub fn modulus(m: u32) -> Arc<IntPoly> {
    if let Some(p) = modulus_cache().read().unwrap().get(&m) {
        return p.clone();
    }
    let poly = Arc::new(cyclotomic_polynomial(m));
    modulus_cache()
        .write()
        .unwrap()
        .entry(m)
        .or_insert(poly)
        .clone()
}

/// Euler's totient, the degree of `Φ_m`.
pub fn totient(m: u32) -> usize {
    modulus(m).len() - 1
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Parse a rational written as `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational, CycloError> {
    let bad = || CycloError::BadCoefficient(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Element of `Q(ζ_order)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CycloRepr", into = "CycloRepr")]
pub struct CycloNum {
    order: u32,
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    order: u32,
    coeffs: Vec<String>,
}

impl TryFrom<CycloRepr> for CycloNum {
    type Error = CycloError;

    fn try_from(r: CycloRepr) -> Result<Self, Self::Error> {
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        CycloNum::from_coeffs(r.order, coeffs)
    }
}

impl From<CycloNum> for CycloRepr {
    fn from(c: CycloNum) -> Self {
        CycloRepr {
            order: c.order,
            coeffs: c.coeffs.iter().map(format_rational).collect(),
        }
    }
}

fn reduce(order: u32, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = modulus(order);
    let d = phi.len() - 1;
    if poly.len() > d {
        for k in (d..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[k], BigRational::zero());
            for (i, p) in phi[..d].iter().enumerate() {
                if !p.is_zero() {
                    poly[k - d + i] -= &c * BigRational::from_integer(p.clone());
                }
            }
        }
    }
    poly.resize(d, BigRational::zero());
    poly
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Division with remainder over `Q[x]`; `den` must be nonzero and trimmed.
fn poly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let dd = den.len() - 1;
    let lead = &den[dd];
    let mut rem = num.to_vec();
    trim(&mut rem);
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        if rem[k].is_zero() {
            continue;
        }
        let c = &rem[k] / lead;
        for (i, d) in den.iter().enumerate() {
            rem[k - dd + i] -= &c * d;
        }
        quot[k - dd] = c;
    }
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

impl CycloNum {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CycloNum {
            order,
            coeffs: vec![BigRational::zero(); totient(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u32, q: BigRational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(n.into()))
    }

    pub fn from_frac(order: u32, p: i64, q: i64) -> Self {
        Self::from_rational(order, BigRational::new(p.into(), q.into()))
    }

    /// Build from power-basis coefficients; the length must be `φ(order)`.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Result<Self, CycloError> {
        if order == 0 {
            return Err(CycloError::ZeroOrder);
        }
        let expected = totient(order);
        if coeffs.len() != expected {
            return Err(CycloError::BadLength {
                order,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(CycloNum { order, coeffs })
    }

    /// Reduce an arbitrary polynomial in `ζ` modulo `Φ_order`.
    pub fn from_poly(order: u32, poly: Vec<BigRational>) -> Self {
        CycloNum {
            order,
            coeffs: reduce(order, poly),
        }
    }

    pub fn from_int_coeffs(order: u32, coeffs: &[i64]) -> Self {
        Self::from_poly(
            order,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// `ζ_m^e`, with `e` taken modulo `m`.
    pub fn zeta_power(m: u32, e: i64) -> Self {
        let k = e.rem_euclid(m as i64) as usize;
        let mut poly = vec![BigRational::zero(); k + 1];
        poly[k] = BigRational::one();
        Self::from_poly(m, poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), CycloError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(CycloError::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloNum {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloNum {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        if self.coeffs.len() == 1 {
            return Ok(CycloNum {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        Ok(CycloNum::from_poly(
            self.order,
            poly_mul(&self.coeffs, &other.coeffs),
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_m`.
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero(self.order));
        }
        if self.coeffs.len() == 1 {
            return Ok(CycloNum {
                order: self.order,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        let phi: Vec<BigRational> = modulus(self.order)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        let (mut r0, mut r1) = (phi, a);
        let (mut t0, mut t1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let t = poly_sub(&t0, &poly_mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        // Φ_m is irreducible, so the gcd r0 is a nonzero constant.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        Ok(CycloNum::from_poly(
            self.order,
            t0.into_iter().map(|x| x * &c).collect(),
        ))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// `self += a * b`, all of the same order.
    pub fn add_mul(&mut self, a: &CycloNum, b: &CycloNum) {
        assert_eq!(a.order, b.order, "cyclotomic order mismatch");
        assert_eq!(self.order, a.order, "cyclotomic order mismatch");
        if self.coeffs.len() == 1 {
            self.coeffs[0] += &a.coeffs[0] * &b.coeffs[0];
            return;
        }
        if a.is_zero() || b.is_zero() {
            return;
        }
        let prod = a.checked_mul(b).expect("orders checked");
        for (x, y) in self.coeffs.iter_mut().zip(prod.coeffs) {
            *x += y;
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self, CycloError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Image under `ζ_m ↦ ζ_n^{n/m}`; requires `m | n`.
    pub fn embed(&self, n: u32) -> Result<Self, CycloError> {
        if n == 0 || !n.is_multiple_of(self.order) {
            return Err(CycloError::NotDivisible {
                from: self.order,
                to: n,
            });
        }
        if n == self.order {
            return Ok(self.clone());
        }
        let c = (n / self.order) as usize;
        let mut poly = vec![BigRational::zero(); c * (self.coeffs.len() - 1) + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            poly[k * c] = a.clone();
        }
        Ok(CycloNum::from_poly(n, poly))
    }

    /// Evaluate an integer polynomial at this element.
    pub fn eval_poly(&self, poly: &[BigInt]) -> Self {
        let mut acc = Self::zero(self.order);
        for c in poly.iter().rev() {
            acc = &(&acc * self) + &Self::from_rational(self.order, BigRational::from_integer(c.clone()));
        }
        acc
    }
}

/// Arithmetic operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(a: &CycloNum, b: &CycloNum, op: FieldOp) -> Result<CycloNum, CycloError> {
    match op {
        FieldOp::Add => a.checked_add(b),
        FieldOp::Sub => a.checked_sub(b),
        FieldOp::Mul => a.checked_mul(b),
        FieldOp::Div => a.checked_div(b),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = format_rational(&abs);
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "z{}", self.order)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &[i64]) -> IntPoly {
        p.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    /// Schoolbook integer polynomial long division, used as an independent check.
    fn long_div(num: &[i64], den: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let mut rem = num.to_vec();
        let dd = den.len() - 1;
        let mut quot = vec![0; num.len().saturating_sub(dd)];
        for k in (dd..num.len()).rev() {
            let c = rem[k] / den[dd];
            quot[k - dd] = c;
            for i in 0..=dd {
                rem[k - dd + i] -= c * den[i];
            }
        }
        (quot, rem)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
    }

    #[test]
    fn phi_12_matches_long_division() {
        // x^12 - 1 divided by Φ1 Φ2 Φ3 Φ4 Φ6 = (x-1)(x+1)(x^2+x+1)(x^2+1)(x^2-x+1)
        let mut den = vec![1i64];
        for f in [&[-1, 1][..], &[1, 1], &[1, 1, 1], &[1, 0, 1], &[1, -1, 1]] {
            let mut out = vec![0; den.len() + f.len() - 1];
            for (i, a) in den.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            den = out;
        }
        let mut num = vec![0i64; 13];
        num[0] = -1;
        num[12] = 1;
        let (quot, rem) = long_div(&num, &den);
        assert!(rem.iter().all(|&r| r == 0));
        assert_eq!(quot, vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), ints(&quot));
    }

    #[test]
    fn degrees_are_totients() {
        let phi = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4, 12, 6, 8, 8, 16, 6, 18, 8];
        for (m, &p) in (1..=20).zip(phi.iter()) {
            assert_eq!(totient(m), p, "m = {m}");
        }
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(CycloNum::zeta_power(2, 1), CycloNum::from_int(2, -1));
        assert_eq!(CycloNum::zeta_power(4, 6), CycloNum::from_int(4, -1));
        assert_eq!(
            CycloNum::zeta_power(3, 2),
            CycloNum::from_int_coeffs(3, &[-1, -1])
        );
        let z3 = CycloNum::zeta_power(3, 1);
        let z3sq = CycloNum::zeta_power(3, 2);
        assert!((&z3 * &z3sq).is_one());
        assert_eq!(z3.inv().unwrap(), CycloNum::from_int_coeffs(3, &[-1, -1]));
    }

    #[test]
    fn gaussian_product() {
        let i = CycloNum::zeta_power(4, 1);
        let one = CycloNum::one(4);
        assert_eq!(&(&one + &i) * &(&one - &i), CycloNum::from_int(4, 2));
    }

    #[test]
    fn inverse_of_two_plus_zeta5_solves_linear_system() {
        // Oracle: the multiplication-by-(2+ζ) matrix in the power basis, solved for
        // c with (2+ζ)c = 1 by Gaussian elimination over Q.
        let a = CycloNum::from_int_coeffs(5, &[2, 1]);
        let mut cols = Vec::new();
        for k in 0..4 {
            let basis = CycloNum::zeta_power(5, k);
            cols.push((&a * &basis).coeffs().to_vec());
        }
        let mut aug: Vec<Vec<BigRational>> = (0..4)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..4).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { q(1, 1) } else { q(0, 1) });
                row
            })
            .collect();
        for col in 0..4 {
            let p = (col..4).find(|&r| !aug[r][col].is_zero()).unwrap();
            aug.swap(col, p);
            let piv = aug[col][col].clone();
            for x in aug[col].iter_mut() {
                *x = &*x / &piv;
            }
            for r in 0..4 {
                if r != col {
                    let f = aug[r][col].clone();
                    for c in 0..5 {
                        let v = &f * &aug[col][c];
                        aug[r][c] -= v;
                    }
                }
            }
        }
        let expected: Vec<BigRational> = aug.iter().map(|row| row[4].clone()).collect();
        let inv = a.inv().unwrap();
        assert_eq!(inv.coeffs(), &expected[..]);
        assert!((&inv * &a).is_one());
    }

    #[test]
    fn errors() {
        let a = CycloNum::one(3);
        let b = CycloNum::one(4);
        assert_eq!(
            field_arith(&a, &b, FieldOp::Add),
            Err(CycloError::OrderMismatch { left: 3, right: 4 })
        );
        assert_eq!(
            field_arith(&a, &CycloNum::zero(3), FieldOp::Div),
            Err(CycloError::DivisionByZero(3))
        );
        assert!(matches!(a.embed(4), Err(CycloError::NotDivisible { .. })));
    }

    #[test]
    fn embedding_examples() {
        let z3 = CycloNum::zeta_power(3, 1);
        assert_eq!(z3.embed(6).unwrap(), CycloNum::zeta_power(6, 2));
        let half = CycloNum::from_frac(1, 5, 2);
        for n in [1, 2, 5, 12] {
            assert_eq!(half.embed(n).unwrap(), CycloNum::from_frac(n, 5, 2));
        }
        let z2 = CycloNum::zeta_power(2, 1);
        let z6_cubed = CycloNum::from_poly(6, vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]);
        assert_eq!(z2.embed(6).unwrap(), z6_cubed);
        assert_eq!(z6_cubed, CycloNum::from_int(6, -1));
    }

    #[test]
    fn primitivity_and_phi_vanishing() {
        for m in 1..=24 {
            let z = CycloNum::zeta_power(m, 1);
            assert!(z.eval_poly(&modulus(m)).is_zero(), "m = {m}");
            assert!(CycloNum::zeta_power(m, m as i64).is_one());
            for i in 1..m {
                assert!(!CycloNum::zeta_power(m, i as i64).is_one(), "m = {m}, i = {i}");
            }
        }
    }

    #[test]
    fn serialization_is_exact() {
        let a = CycloNum::from_poly(3, vec![q(-3, 4), q(5, 1)]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"order":3,"coeffs":["-3/4","5"]}"#);
        let back: CycloNum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<CycloNum>(r#"{"order":3,"coeffs":["1"]}"#).is_err());
        assert!(serde_json::from_str::<CycloNum>(r#"{"order":3,"coeffs":["1/0","0"]}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(CycloNum::from_int_coeffs(3, &[-1, -1]).to_string(), "-1 - z3");
        assert_eq!(CycloNum::zero(5).to_string(), "0");
        assert_eq!(
            CycloNum::from_poly(5, vec![q(0, 1), q(1, 2), q(0, 1), q(2, 1)]).to_string(),
            "1/2*z5 + 2*z5^3"
        );
    }
}

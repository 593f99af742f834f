//! Exact arithmetic in GF(p^e).
//!
//! Elements are stored as the integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}` of their
//! coefficient vector in the polynomial basis `1, x, ..., x^{e-1}`, reduced modulo a fixed
//! monic irreducible polynomial. The addition and multiplication tables are computed once
//! from polynomial arithmetic and then used as the fast path everywhere else.
//!
//! The moduli are Conway polynomials, so coordinates and therefore point labels are
//! reproducible across runs:
//!
//! | q  | modulus                 |
//! |----|-------------------------|
//! | 4  | x^2 + x + 1             |
//! | 8  | x^3 + x + 1             |
//! | 16 | x^4 + x + 1             |
//! | 32 | x^5 + x^2 + 1           |
//! | 64 | x^6 + x^4 + x^3 + x + 1 |
//! | 9  | x^2 + 2x + 2            |
//! | 27 | x^3 + 2x + 1            |
//! | 25 | x^2 + 4x + 2            |
//! | 49 | x^2 + 6x + 3            |
//! | 121| x^2 + 7x + 2            |
//!
//! Prime fields up to 127 use plain arithmetic modulo p.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u32 = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("GF({p}^{e}) is not in the supported modulus table")]
    Unsupported { p: u32, e: u32 },
    #[error("{0} is not a supported prime power")]
    NotPrimePower(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields (GF({0}) and GF({1}))")]
    MixedFields(u32, u32),
}

/// Conway moduli, coefficients listed from the constant term up to the leading 1.
const MODULUS_TABLE: &[(u32, u32, &[u16])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
];

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// A field element, identified by its packed coefficient vector.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// GF(p^e) with precomputed operation tables.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u16>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    primitive: Fe,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec").field("p", &self.p).field("e", &self.e).field("modulus", &self.modulus).finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    pub fn new(p: u32, e: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::Unsupported { p, e });
        }
        let q = p.checked_pow(e).ok_or(FieldError::Unsupported { p, e })?;
        if q > MAX_FIELD_ORDER {
            return Err(FieldError::Unsupported { p, e });
        }
        let modulus: Vec<u16> = if e == 1 {
            vec![0, 1]
        } else {
            MODULUS_TABLE
                .iter()
                .find(|(mp, me, _)| *mp == p && *me == e)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(FieldError::Unsupported { p, e })?
        };
        Ok(Self::with_modulus(p, e, modulus))
    }

    /// Field of order `q`, which must be a supported prime power.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, e)
    }

    fn with_modulus(p: u32, e: u32, modulus: Vec<u16>) -> Self {
        let q = p.pow(e);
        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..q {
            let ca = unpack(a, p, e);
            for b in 0..q {
                let cb = unpack(b, p, e);
                let sum: Vec<u16> = ca.iter().zip(&cb).map(|(x, y)| ((*x as u32 + *y as u32) % p) as u16).collect();
                add[a as usize * qs + b as usize] = pack(&sum, p) as u16;
                mul[a as usize * qs + b as usize] = pack(&poly_mulmod(&ca, &cb, &modulus, p), p) as u16;
            }
        }
        let mut neg = vec![0u16; qs];
        let mut inv = vec![0u16; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u16;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u16;
                }
            }
        }
        let mut field = FieldSpec { p, e, q, modulus, add, mul, neg, inv, primitive: Fe::ONE };
        field.primitive = (1..q as u16).map(Fe).find(|&a| field.multiplicative_order(a) == q - 1).unwrap_or(Fe::ONE);
        field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, constant term first. For prime fields this is `x`.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    /// Least element (in packed order) generating the multiplicative group.
    pub fn primitive(&self) -> Fe {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q as u16).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q as u16).map(Fe)
    }

    /// Coefficient vector of `a` in the polynomial basis.
    pub fn coeffs(&self, a: Fe) -> Vec<u16> {
        unpack(a.0 as u32, self.p, self.e)
    }

    pub fn from_coeffs(&self, coeffs: &[u16]) -> Fe {
        let reduced: Vec<u16> = coeffs.iter().map(|&c| (c as u32 % self.p) as u16).collect();
        Fe(pack(&reduced, self.p) as u16)
    }

    /// Image of an integer under the prime-subfield embedding.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u16)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.index() * self.q as usize + b.index()])
    }

    /// Multiplicative inverse; zero maps to zero.
    #[inline]
    pub fn inv_unchecked(&self, a: Fe) -> Fe {
        Fe(self.inv[a.index()])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv_unchecked(a))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut n: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// `a^(p^i)`; `i` is taken modulo the extension degree.
    pub fn frobenius(&self, a: Fe, i: u32) -> Fe {
        let mut x = a;
        for _ in 0..(i % self.e) {
            x = self.pow(x, self.p as u64);
        }
        x
    }

    pub fn multiplicative_order(&self, a: Fe) -> u32 {
        if a.is_zero() {
            return 0;
        }
        let mut x = a;
        let mut k = 1;
        while x != Fe::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.nonzero().any(|b| self.mul(b, b) == a)
    }

    /// Checked arithmetic over tagged elements.
    pub fn element(&self, a: Fe) -> FieldElement<'_> {
        FieldElement { field: self, value: a }
    }

    pub fn arith(&self, a: Fe, b: Fe, op: ArithOp) -> Result<Fe, FieldError> {
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
        })
    }
}

/// An element bound to its field, for callers that want mixed-field misuse reported.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f FieldSpec,
    value: Fe,
}

impl<'f> FieldElement<'f> {
    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> Vec<u16> {
        self.field.coeffs(self.value)
    }

    pub fn arith(&self, other: &FieldElement<'_>, op: ArithOp) -> Result<FieldElement<'f>, FieldError> {
        if !std::ptr::eq(self.field, other.field) && self.field != other.field {
            return Err(FieldError::MixedFields(self.field.q, other.field.q));
        }
        Ok(FieldElement { field: self.field, value: self.field.arith(self.value, other.value, op)? })
    }

    pub fn frobenius(&self, i: u32) -> FieldElement<'f> {
        FieldElement { field: self.field, value: self.field.frobenius(self.value, i) }
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}):{:?}", self.field.q, self.coeffs())
    }
}

fn unpack(mut a: u32, p: u32, e: u32) -> Vec<u16> {
    (0..e)
        .map(|_| {
            let c = (a % p) as u16;
            a /= p;
            c
        })
        .collect()
}

fn pack(coeffs: &[u16], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c as u32)
}

/// Product of two polynomials of degree < e reduced by the monic `modulus` of degree e.
fn poly_mulmod(a: &[u16], b: &[u16], modulus: &[u16], p: u32) -> Vec<u16> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u32 * y as u32) % p;
        }
    }
    for deg in (e..2 * e).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        // x^deg = x^(deg-e) * x^e and x^e = -(m_0 + ... + m_{e-1} x^{e-1})
        for k in 0..e {
            let sub = c * modulus[k] as u32 % p;
            prod[deg - e + k] = (prod[deg - e + k] + p - sub) % p;
        }
        prod[deg] = 0;
    }
    prod.truncate(e);
    prod.into_iter().map(|c| c as u16).collect()
}

//! Exact integer, rational and `Z/p^s` arithmetic together with the p-adic
//! helpers used throughout the crate: valuations, Teichmüller lifts,
//! generators of `F_p^×`, Pochhammer symbols and rational binomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// The rational exponent `ω = r/q`, kept in lowest terms with `0 < ω ≤ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OmegaParam {
    r: u64,
    q: u64,
}

impl OmegaParam {
    pub fn new(r: u64, q: u64) -> Result<Self> {
        if r == 0 || q == 0 {
            return Err(invalid("omega = r/q needs positive r and q"));
        }
        if 2 * r > q {
            return Err(invalid(format!("omega = {r}/{q} exceeds 1/2")));
        }
        let g = r.gcd(&q);
        Ok(Self { r: r / g, q: q / g })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.r), BigInt::from(self.q))
    }
}

impl fmt::Display for OmegaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.r, self.q)
    }
}

/// An odd prime `p = ℓq + 1` together with a precision exponent `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeData {
    p: u64,
    s: u32,
    ell: u64,
}

impl PrimeData {
    pub fn new(p: u64, s: u32, omega: &OmegaParam) -> Result<Self> {
        if p < 3 || !is_prime(p) || (p - 1) % omega.q() != 0 {
            return Err(invalid("p must be an odd prime with p ≡ 1 mod q"));
        }
        if s == 0 {
            return Err(invalid("precision s must be at least 1"));
        }
        if checked_pow(p, s).is_none() {
            return Err(invalid(format!("{p}^{s} does not fit in 64 bits")));
        }
        Ok(Self {
            p,
            s,
            ell: (p - 1) / omega.q(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// `p^s` as a machine integer; guaranteed to fit by construction.
    pub fn p_pow(&self) -> u64 {
        self.p.pow(self.s)
    }

    pub fn with_precision(&self, s: u32, omega: &OmegaParam) -> Result<Self> {
        Self::new(self.p, s, omega)
    }
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Deterministic primality test by trial division; adequate for desk-scale primes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn mod_pow_u64(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base as u128) % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// The ring `Z/p^s`. Elements are canonical representatives in `[0, p^s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Zmod {
    p: u64,
    s: u32,
    modulus: BigInt,
}

impl Zmod {
    pub fn new(p: u64, s: u32) -> Self {
        Self {
            p,
            s,
            modulus: BigInt::from(p).pow(s),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    pub fn elem(&self, x: impl Into<BigInt>) -> Residue {
        Residue {
            value: self.reduce(&x.into()),
            ring: self.clone(),
        }
    }

    pub fn inv(&self, x: &BigInt) -> Option<BigInt> {
        let e = x.extended_gcd(&self.modulus);
        if e.gcd.is_one() {
            Some(self.reduce(&e.x))
        } else {
            None
        }
    }
}

impl fmt::Display for Zmod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.s)
    }
}

/// An element of `Z/p^s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigInt,
    ring: Zmod,
}

impl Residue {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn ring(&self) -> &Zmod {
        &self.ring
    }

    fn check(&self, other: &Residue) {
        assert_eq!(self.ring, other.ring, "residues from different rings");
    }

    pub fn add(&self, other: &Residue) -> Residue {
        self.check(other);
        self.ring.elem(&self.value + &other.value)
    }

    pub fn sub(&self, other: &Residue) -> Residue {
        self.check(other);
        self.ring.elem(&self.value - &other.value)
    }

    pub fn mul(&self, other: &Residue) -> Residue {
        self.check(other);
        self.ring.elem(&self.value * &other.value)
    }

    pub fn pow(&self, exp: u64) -> Residue {
        Residue {
            value: self.value.modpow(&BigInt::from(exp), &self.ring.modulus),
            ring: self.ring.clone(),
        }
    }

    pub fn inv(&self) -> Result<Residue> {
        self.ring
            .inv(&self.value)
            .map(|value| Residue {
                value,
                ring: self.ring.clone(),
            })
            .ok_or_else(|| Error::NonUnit {
                value: self.value.to_string(),
                modulus: self.ring.modulus.to_string(),
            })
    }

    pub fn is_unit(&self) -> bool {
        !(&self.value % self.ring.p).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `v_p` of the representative, capped at the precision `s` for zero.
    pub fn valuation(&self) -> u32 {
        if self.value.is_zero() {
            return self.ring.s;
        }
        int_valuation(&self.value, self.ring.p) as u32
    }

    /// Reinterpret at a lower precision.
    pub fn truncate(&self, s: u32) -> Residue {
        Zmod::new(self.ring.p, s).elem(self.value.clone())
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.ring.modulus)
    }
}

/// `v_p(x)` for a nonzero integer.
pub fn int_valuation(x: &BigInt, p: u64) -> u64 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.abs();
    loop {
        let (quot, rem) = x.div_rem(&p);
        if !rem.is_zero() {
            return v;
        }
        x = quot;
        v += 1;
    }
}

pub fn padic_valuation(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    Ok(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// Reduce `x` into `Z/p^a`; fails when `p` divides the denominator.
pub fn reduce_rational_mod(x: &BigRational, p: u64, a: u32) -> Result<Residue> {
    let ring = Zmod::new(p, a);
    let den = ring.reduce(x.denom());
    let inv = ring.inv(&den).ok_or_else(|| Error::NotIntegral {
        value: x.to_string(),
        p,
    })?;
    Ok(ring.elem(x.numer() * inv))
}

/// Teichmüller lift of `u ∈ F_p` to `Z/p^s` by Frobenius iteration `t ← t^p`.
pub fn teichmuller_lift(u: u64, p: u64, s: u32) -> Result<Residue> {
    if u >= p {
        return Err(invalid(format!("{u} is not a residue modulo {p}")));
    }
    let ring = Zmod::new(p, s);
    let mut t = ring.elem(u);
    for _ in 1..s {
        t = t.pow(p);
    }
    Ok(t)
}

/// The smallest generator of `F_p^×`.
pub fn find_generator(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(invalid(format!("{p} is not an odd prime")));
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&f| mod_pow_u64(g, (p - 1) / f, p) != 1))
        .ok_or_else(|| Error::Invariant(format!("no generator modulo {p}")))
}

/// Values usable as the argument of a Pochhammer symbol.
pub trait PochhammerField:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
}

impl<T> PochhammerField for T where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Div<Output = T>
{
}

/// Pochhammer symbol `(x)_d` with step `step`, for any integer `d`.
pub fn pochhammer<T: PochhammerField>(x: &T, d: i64, step: &T) -> Result<T> {
    let mut acc = T::one();
    if d >= 0 {
        let mut cur = x.clone();
        for _ in 0..d {
            acc = acc * cur.clone();
            cur = cur + step.clone();
        }
        return Ok(acc);
    }
    let mut cur = x.clone() - step.clone();
    for _ in 0..(-d) {
        if cur.is_zero() {
            return Err(Error::DivisionByZero(
                "vanishing factor in negative-index Pochhammer symbol".into(),
            ));
        }
        acc = acc * cur.clone();
        cur = cur - step.clone();
    }
    Ok(T::one() / acc)
}

/// `binom(a, d) = a(a-1)…(a-d+1)/d!` for rational `a`.
pub fn rational_binomial(a: &BigRational, d: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut top = a.clone();
    for i in 1..=d {
        acc = acc * &top / BigRational::from_integer(BigInt::from(i));
        top -= BigRational::one();
    }
    acc
}

/// Row `binom(n, 0..=n)` of Pascal's triangle.
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut cur = BigInt::one();
    row.push(cur.clone());
    for j in 0..n {
        cur = cur * BigInt::from(n - j) / BigInt::from(j + 1);
        row.push(cur.clone());
    }
    row
}

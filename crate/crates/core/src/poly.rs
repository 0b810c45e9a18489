//! Dense univariate polynomials and truncated power series over `Z`, `Z/p^s`
//! and `Q`, plus reduced rational functions in one auxiliary variable.

use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::Zmod;

/// A commutative coefficient ring.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn from_int(&self, a: &BigInt) -> Self::Elem;
    /// Multiplicative inverse, if `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn name(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn from_int(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        (a.is_one() || (-a).is_one()).then(|| a.clone())
    }
    fn name(&self) -> String {
        "Z".into()
    }
}

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn from_int(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn name(&self) -> String {
        "Q".into()
    }
}

impl Ring for Zmod {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        self.reduce(&BigInt::one())
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a + b))
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a - b))
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        self.reduce(&-a)
    }
    fn from_int(&self, a: &BigInt) -> BigInt {
        self.reduce(a)
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        Zmod::inv(self, a)
    }
    fn name(&self) -> String {
        self.to_string()
    }
}

/// Dense polynomial; trailing zeros are always trimmed so the zero
/// polynomial has an empty coefficient vector and degree `None`.
#[derive(Clone, PartialEq)]
pub struct UniPoly<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

pub type ZPoly = UniPoly<Integers>;
pub type QPoly = UniPoly<Rationals>;
pub type ModPoly = UniPoly<Zmod>;

impl<R: Ring> Debug for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[{}]{:?}", self.ring.name(), self.coeffs)
    }
}

impl<R: Ring> UniPoly<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Self {
        let coeffs = coeffs.iter().map(|c| ring.add(&ring.zero(), c)).collect();
        let mut p = Self { ring, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(ring: R, coeffs: &[i64]) -> Self {
        let cs = coeffs.iter().map(|&c| ring.from_int(&BigInt::from(c))).collect();
        Self::new(ring, cs)
    }

    pub fn zero(ring: R) -> Self {
        Self {
            ring,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ring: R) -> Self {
        let one = ring.one();
        Self::new(ring, vec![one])
    }

    pub fn monomial(ring: R, c: R::Elem, deg: usize) -> Self {
        let mut coeffs = vec![ring.zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(ring, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| self.ring.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    /// Degree, with `None` standing for `-∞`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring.name(), other.ring.name()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let cs = (0..n)
            .map(|i| self.ring.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Ok(Self::new(self.ring.clone(), cs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let cs = (0..n)
            .map(|i| self.ring.sub(&self.coeff(i), &other.coeff(i)))
            .collect();
        Ok(Self::new(self.ring.clone(), cs))
    }

    pub fn neg(&self) -> Self {
        let cs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        Self::new(self.ring.clone(), cs)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let cs = self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect();
        Self::new(self.ring.clone(), cs)
    }

    /// Exact product. Zero coefficients are skipped, which keeps products
    /// with substituted polynomials `f(z^e)` cheap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.mul_truncated(other, usize::MAX))
    }

    /// Product keeping only degrees `< len`.
    pub(crate) fn mul_truncated(&self, other: &Self, len: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring.clone());
        }
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let n = full.min(len);
        let mut out = vec![self.ring.zero(); n];
        let rhs: Vec<(usize, &R::Elem)> = other
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(a) || i >= n {
                continue;
            }
            for &(j, b) in &rhs {
                if i + j >= n {
                    break;
                }
                out[i + j] = self.ring.add(&out[i + j], &self.ring.mul(a, b));
            }
        }
        Self::new(self.ring.clone(), out)
    }

    /// `a(z^e)`.
    pub fn substitute_power(&self, e: usize) -> Self {
        assert!(e >= 1, "substitution exponent must be positive");
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![self.ring.zero(); (self.coeffs.len() - 1) * e + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * e] = c.clone();
        }
        Self::new(self.ring.clone(), out)
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// `z^deg a(1/z) = -a(z)`.
    pub fn is_antipalindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n).all(|i| self.coeffs[i] == self.ring.neg(&self.coeffs[n - 1 - i]))
    }

    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(self.ring.zero(), |acc, c| self.ring.add(&self.ring.mul(&acc, x), c))
    }

    pub fn truncate(&self, len: usize) -> Self {
        Self::new(
            self.ring.clone(),
            self.coeffs.iter().take(len).cloned().collect(),
        )
    }

    /// Coefficient-wise map into another ring.
    pub fn map_into<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> UniPoly<S> {
        UniPoly::new(ring, self.coeffs.iter().map(f).collect())
    }
}

impl ZPoly {
    pub fn reduce(&self, ring: &Zmod) -> ModPoly {
        self.map_into(ring.clone(), |c| ring.reduce(c))
    }

    pub fn to_rational(&self) -> QPoly {
        self.map_into(Rationals, |c| BigRational::from_integer(c.clone()))
    }
}

/// A power series known up to (and including) degree `cap`.
#[derive(Clone, PartialEq)]
pub struct TruncSeries<R: Ring> {
    poly: UniPoly<R>,
    cap: usize,
}

impl<R: Ring> Debug for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(z^{})", self.poly, self.cap + 1)
    }
}

impl<R: Ring> TruncSeries<R> {
    pub fn new(poly: UniPoly<R>, cap: usize) -> Self {
        Self {
            poly: poly.truncate(cap + 1),
            cap,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn poly(&self) -> &UniPoly<R> {
        &self.poly
    }

    pub fn coeff(&self, i: usize) -> R::Elem {
        assert!(i <= self.cap, "coefficient {i} beyond series cap {}", self.cap);
        self.poly.coeff(i)
    }

    pub fn coeffs(&self) -> Vec<R::Elem> {
        (0..=self.cap).map(|i| self.poly.coeff(i)).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.poly.same_ring(&other.poly)?;
        let cap = self.cap.min(other.cap);
        Ok(Self {
            poly: self.poly.mul_truncated(&other.poly, cap + 1),
            cap,
        })
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn inverse(&self) -> Result<Self> {
        let ring = self.poly.ring.clone();
        let c0 = self.poly.coeff(0);
        let inv0 = ring.inv(&c0).ok_or_else(|| Error::NonUnit {
            value: format!("{c0:?}"),
            modulus: ring.name(),
        })?;
        let mut out: Vec<R::Elem> = Vec::with_capacity(self.cap + 1);
        out.push(inv0.clone());
        for n in 1..=self.cap {
            let mut acc = ring.zero();
            for (i, b) in out.iter().enumerate() {
                let a = self.poly.coeff(n - i);
                if !ring.is_zero(&a) {
                    acc = ring.add(&acc, &ring.mul(&a, b));
                }
            }
            out.push(ring.neg(&ring.mul(&acc, &inv0)));
        }
        Ok(Self {
            poly: UniPoly::new(ring, out),
            cap: self.cap,
        })
    }
}

impl QPoly {
    pub fn monic(&self) -> QPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => self.scale(&lead.recip()),
        }
    }

    pub fn div_rem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::DivisionByZero("polynomial division by zero".into()))?;
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    let idx = top - dd + i;
                    rem[idx] = &rem[idx] - &c * d;
                }
                quot[top - dd] = c;
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((QPoly::new(Rationals, quot), QPoly::new(Rationals, rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// A rational function `num(t)/den(t)` over `Q`, always in lowest terms
/// with monic denominator.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFun {
    num: QPoly,
    den: QPoly,
}

impl RatFun {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        let lead = den.coeffs.last().expect("nonzero").recip();
        Ok(Self {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn constant(c: BigRational) -> Self {
        Self {
            num: QPoly::new(Rationals, vec![c]),
            den: QPoly::one(Rationals),
        }
    }

    /// `a + b·t`.
    pub fn linear(a: BigRational, b: BigRational) -> Self {
        Self {
            num: QPoly::new(Rationals, vec![a, b]),
            den: QPoly::one(Rationals),
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    /// Value at `t = 0` of the reduced representation.
    pub fn eval_at_zero(&self) -> Result<BigRational> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::PoleAtZero);
        }
        Ok(self.num.coeff(0) / d0)
    }

    pub fn eval(&self, t: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::DivisionByZero(format!("pole at t = {t}")));
        }
        Ok(self.num.eval(t) / d)
    }

    fn combine(num: QPoly, den: QPoly) -> Self {
        Self::new(num, den).expect("denominators of nonzero rational functions are nonzero")
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        Self {
            num: QPoly::zero(Rationals),
            den: QPoly::one(Rationals),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFun {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        let num = self
            .num
            .mul(&rhs.den)
            .and_then(|a| a.add(&rhs.num.mul(&self.den)?))
            .expect("same ring");
        let den = self.den.mul(&rhs.den).expect("same ring");
        Self::combine(num, den)
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        Self {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: RatFun) -> RatFun {
        self + (-rhs)
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: RatFun) -> RatFun {
        let num = self.num.mul(&rhs.num).expect("same ring");
        let den = self.den.mul(&rhs.den).expect("same ring");
        Self::combine(num, den)
    }
}

impl Div for RatFun {
    type Output = RatFun;
    /// Panics on division by the zero function; callers test `is_zero` first.
    fn div(self, rhs: RatFun) -> RatFun {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        let num = self.num.mul(&rhs.den).expect("same ring");
        let den = self.den.mul(&rhs.num).expect("same ring");
        Self::combine(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{pochhammer, Zmod};
    use proptest::prelude::*;

    fn z(cs: &[i64]) -> ZPoly {
        ZPoly::from_ints(Integers, cs)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn mul_examples() {
        assert_eq!(z(&[1, 1]).mul(&z(&[1, 0, 0, 1])).unwrap(), z(&[1, 1, 0, 1, 1]));
        assert!(z(&[]).mul(&z(&[3, 4])).unwrap().is_zero());
        let r4 = Zmod::new(2, 2);
        let a = ModPoly::from_ints(r4.clone(), &[1, 1]);
        assert_eq!(a.mul(&a).unwrap(), ModPoly::from_ints(r4, &[1, 2, 1]));
    }

    #[test]
    fn mul_rejects_ring_mismatch() {
        let a = ModPoly::from_ints(Zmod::new(3, 1), &[1, 1]);
        let b = ModPoly::from_ints(Zmod::new(3, 2), &[1, 1]);
        assert!(matches!(a.mul(&b), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn substitute_power_examples() {
        assert_eq!(z(&[1, 1]).substitute_power(3), z(&[1, 0, 0, 1]));
        assert_eq!(z(&[2, 5, 7]).substitute_power(1), z(&[2, 5, 7]));
        assert_eq!(
            z(&[1, 4, 1]).substitute_power(5),
            z(&[1, 0, 0, 0, 0, 4, 0, 0, 0, 0, 1])
        );
    }

    #[test]
    fn palindrome_examples() {
        assert!(z(&[1, 4, 1]).is_palindromic());
        assert!(z(&[1, 1]).is_palindromic());
        assert!(!z(&[1, 2]).is_palindromic());
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(z(&[0, 0]).degree(), None);
        assert_eq!(z(&[0, 3]).degree(), Some(1));
    }

    #[test]
    fn series_inverse_mod_prime_power() {
        let ring = Zmod::new(3, 2);
        let s = TruncSeries::new(ModPoly::from_ints(ring.clone(), &[1, 1, 0, 1, 1]), 8);
        let inv = s.inverse().unwrap();
        let prod = s.mul(&inv).unwrap();
        assert_eq!(prod.coeffs()[0], BigInt::one());
        assert!(prod.coeffs()[1..].iter().all(|c| c.is_zero()));
        let bad = TruncSeries::new(ModPoly::from_ints(ring, &[3, 1]), 4);
        assert!(bad.inverse().is_err());
    }

    #[test]
    fn ratfun_zero_evaluation() {
        let t = RatFun::linear(q(0, 1), q(1, 1));
        let f = (t.clone() * t.clone() + t.clone()) / t.clone();
        assert_eq!(f.eval_at_zero().unwrap(), q(1, 1));
        assert_eq!(RatFun::constant(q(5, 7)).eval_at_zero().unwrap(), q(5, 7));
        let pole = RatFun::one() / t;
        assert_eq!(pole.eval_at_zero(), Err(Error::PoleAtZero));
    }

    #[test]
    fn ratfun_vertex_first_coefficient() {
        // c_1 of the k=1, n=2 vertex along u_j = j t: (ω)(ω+t) / ((1)(1+t)).
        let w = q(1, 3);
        let t = RatFun::linear(q(0, 1), q(1, 1));
        let one = RatFun::one();
        let num = pochhammer(&RatFun::constant(w.clone()), 1, &one).unwrap()
            * pochhammer(&(RatFun::constant(w.clone()) + t.clone()), 1, &one).unwrap();
        let den = pochhammer(&one, 1, &one).unwrap()
            * pochhammer(&(one.clone() + t), 1, &one).unwrap();
        assert_eq!((num / den).eval_at_zero().unwrap(), w.clone() * w);
    }

    fn small_poly() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-9i64..10, 0..6)
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_homomorphism(a in small_poly(), b in small_poly(), e in 1usize..4, s in 1u32..3) {
            let ring = Zmod::new(5, s);
            let (a, b) = (z(&a), z(&b));
            prop_assert_eq!(a.mul(&b).unwrap().reduce(&ring), a.reduce(&ring).mul(&b.reduce(&ring)).unwrap());
            prop_assert_eq!(a.substitute_power(e).reduce(&ring), a.reduce(&ring).substitute_power(e));
        }

        #[test]
        fn substitution_composes(a in small_poly(), e in 1usize..4, f in 1usize..4) {
            let a = z(&a);
            prop_assert_eq!(a.substitute_power(e).substitute_power(f), a.substitute_power(e * f));
        }

        #[test]
        fn ratfun_field_axioms_match_pointwise(
            n1 in small_poly(), d1 in small_poly(), n2 in small_poly(), d2 in small_poly(), pt in -20i64..20
        ) {
            let mk = |c: &[i64]| QPoly::from_ints(Rationals, c);
            prop_assume!(!mk(&d1).is_zero() && !mk(&d2).is_zero());
            let f = RatFun::new(mk(&n1), mk(&d1)).unwrap();
            let g = RatFun::new(mk(&n2), mk(&d2)).unwrap();
            let t = q(pt, 7);
            let (fv, gv) = match (f.eval(&t), g.eval(&t)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return Ok(()),
            };
            prop_assert_eq!((f.clone() + g.clone()).eval(&t).unwrap(), &fv + &gv);
            prop_assert_eq!((f.clone() * g.clone()).eval(&t).unwrap(), &fv * &gv);
            prop_assert_eq!((f.clone() - g.clone()).eval(&t).unwrap(), &fv - &gv);
            if !g.is_zero() && !gv.is_zero() {
                if let Ok(v) = (f.clone() / g.clone()).eval(&t) {
                    prop_assert_eq!(v, &fv / &gv);
                }
            }
            // reduced form: gcd(num, den) = 1
            prop_assert!(f.num().is_zero() || f.num().gcd(f.den()).degree() == Some(0));
        }
    }
}

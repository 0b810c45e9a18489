//! Dense-by-monomial multivariate integer polynomials in `x_1, …, x_N, z`.
//!
//! This is the straightforward expansion used to cross-check the elimination
//! engine and to form products such as `Φ_{s-1}·Φ̄_1(x^{p^{s-1}}, z^{p^{s-1}})`
//! whose coefficients are not single binomial extractions.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::padic::binomial_row;
use crate::poly::{Integers, ZPoly};
use crate::quiver::{FactorList, Operand, Shape};

/// Exponent vector layout: `[x_1, …, x_N, z]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    num_vars: usize,
    terms: HashMap<Vec<u32>, BigInt>,
}

impl SparsePoly {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: HashMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        let mut p = Self::zero(num_vars);
        p.terms.insert(vec![0; num_vars + 1], BigInt::one());
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    fn operand_index(&self, o: Operand) -> Option<usize> {
        match o {
            Operand::Var(i) => Some(i),
            Operand::Z => Some(self.num_vars),
            Operand::One => None,
        }
    }

    fn monomial(&self, idx: Option<usize>, e: u32) -> Vec<u32> {
        let mut m = vec![0; self.num_vars + 1];
        if let Some(i) = idx {
            m[i] = e;
        }
        m
    }

    /// `(a - b)^e` fully expanded.
    pub fn binomial(num_vars: usize, a: Operand, b: Operand, e: u64) -> Self {
        let mut out = Self::zero(num_vars);
        let (ia, ib) = (out.operand_index(a), out.operand_index(b));
        for (j, c) in binomial_row(e).into_iter().enumerate() {
            let mut m = out.monomial(ia, (e - j as u64) as u32);
            if let Some(i) = ib {
                m[i] += j as u32;
            }
            let c = if j % 2 == 1 { -c } else { c };
            *out.terms.entry(m).or_insert_with(BigInt::zero) += c;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Product of all factors in the list.
    pub fn from_factors(fl: &FactorList<u64>) -> Self {
        let mut acc = Self::one(fl.num_vars);
        for f in &fl.factors {
            let term = match f.shape {
                Shape::Monomial(v) => {
                    let mut m = Self::zero(fl.num_vars);
                    let mono = m.monomial(Some(v), f.exponent as u32);
                    m.terms.insert(mono, BigInt::one());
                    m
                }
                Shape::Binomial(a, b) => Self::binomial(fl.num_vars, a, b, f.exponent),
            };
            acc = acc.mul(&term);
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                *out.entry(m).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Self {
            num_vars: self.num_vars,
            terms: out,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.terms.clone();
        for (m, c) in &other.terms {
            *out.entry(m.clone()).or_insert_with(BigInt::zero) -= c;
        }
        out.retain(|_, c| !c.is_zero());
        Self {
            num_vars: self.num_vars,
            terms: out,
        }
    }

    /// `P(x^e, z^e)`.
    pub fn substitute_power(&self, e: u32) -> Self {
        Self {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().map(|x| x * e).collect(), c.clone()))
                .collect(),
        }
    }

    /// The coefficient of `x^target` as a polynomial in `z`.
    pub fn coefficient_in_z(&self, target: &[u64]) -> ZPoly {
        assert_eq!(target.len(), self.num_vars);
        let mut dense: Vec<BigInt> = Vec::new();
        for (m, c) in &self.terms {
            if m[..self.num_vars].iter().zip(target).all(|(&a, &b)| u64::from(a) == b) {
                let d = m[self.num_vars] as usize;
                if dense.len() <= d {
                    dense.resize(d + 1, BigInt::zero());
                }
                dense[d] += c;
            }
        }
        ZPoly::new(Integers, dense)
    }

    /// Every coefficient is divisible by `m`.
    pub fn divisible_by(&self, m: &BigInt) -> bool {
        self.terms.values().all(|c| (c % m).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_square() {
        let p = SparsePoly::binomial(1, Operand::Var(0), Operand::Z, 2);
        assert_eq!(p.term_count(), 3);
        assert_eq!(p.coefficient_in_z(&[1]), ZPoly::from_ints(Integers, &[0, -2]));
        assert_eq!(p.coefficient_in_z(&[0]), ZPoly::from_ints(Integers, &[0, 0, 1]));
    }

    #[test]
    fn frobenius_substitution_and_subtraction() {
        let p = SparsePoly::binomial(1, Operand::Var(0), Operand::One, 3);
        let q = p.substitute_power(2);
        assert_eq!(q.coefficient_in_z(&[6]), ZPoly::one(Integers));
        assert!(p.sub(&p).term_count() == 0);
        let three = BigInt::from(3);
        // (x - 1)^3 - (x^3 - 1) is divisible by 3
        let frob = SparsePoly::binomial(1, Operand::Var(0), Operand::One, 1).substitute_power(3);
        assert!(p.sub(&frob).divisible_by(&three));
    }
}

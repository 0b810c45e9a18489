//! Dwork-type congruences, ghost polynomials and the infinite product,
//! all checked coefficient by coefficient in division-free form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::engine::{TsParams, TsPolynomial};
use crate::error::{invalid, Result};
use crate::multipoly::SparsePoly;
use crate::padic::{int_valuation, reduce_rational_mod, OmegaParam, PrimeData, Zmod};
use crate::poly::{Integers, ModPoly, ZPoly};
use crate::quiver::{polynomial_factors, QuiverModel, TargetMonomial};
use crate::report::TheoremReport;

/// Which normalization of `T_s` a check runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Signed,
    Unsigned,
}

fn pick(t: &TsPolynomial, c: Convention) -> &ZPoly {
    match c {
        Convention::Signed => &t.signed,
        Convention::Unsigned => &t.unsigned,
    }
}

fn family_params(ts: &[TsPolynomial]) -> Result<TsParams> {
    let first = ts.first().ok_or_else(|| invalid("empty T_s sequence"))?;
    for (i, t) in ts.iter().enumerate() {
        let q = &t.params;
        let f = &first.params;
        if (q.k, q.n, q.r, q.q, q.p) != (f.k, f.n, f.r, f.q, f.p) {
            return Err(invalid("T_s sequence mixes parameter sets"));
        }
        if q.s as usize != i {
            return Err(invalid("T_s sequence must be T_0, T_1, … in order"));
        }
    }
    Ok(first.params)
}

fn labelled(report: TheoremReport, p: &TsParams) -> TheoremReport {
    report
        .param("k", p.k)
        .param("n", p.n)
        .param("omega", format!("{}/{}", p.r, p.q))
        .param("p", p.p)
}

/// Compare two polynomials modulo the ring's modulus, recording the first
/// differing degree.
fn compare(report: &mut TheoremReport, lhs: &ModPoly, rhs: &ModPoly, max_degree: usize) {
    for d in 0..=max_degree {
        let (a, b) = (lhs.coeff(d), rhs.coeff(d));
        if a != b {
            report.fail(d, a, b);
            return;
        }
    }
}

fn degree_or_zero(p: &ModPoly) -> usize {
    p.degree().unwrap_or(0)
}

/// `T_{s+1}(z)·T_{s-1}(z^p) ≡ T_s(z)·T_s(z^p) mod p^s`.
///
/// `ts` must hold `T_0, …, T_{s+1}` of one family.
pub fn dwork_check(ts: &[TsPolynomial], s: u32, convention: Convention) -> Result<TheoremReport> {
    let params = family_params(ts)?;
    if s == 0 || ts.len() < s as usize + 2 {
        return Err(invalid(format!("Dwork check at level {s} needs T_0..T_{}", s + 1)));
    }
    let p = params.p;
    let ring = Zmod::new(p, s);
    let red = |i: usize| pick(&ts[i], convention).reduce(&ring);
    let s_ = s as usize;
    let lhs = red(s_ + 1).mul(&red(s_ - 1).substitute_power(p as usize))?;
    let rhs = red(s_).mul(&red(s_).substitute_power(p as usize))?;
    let deg = degree_or_zero(&lhs).max(degree_or_zero(&rhs));
    let mut report = labelled(TheoremReport::new("dwork", ring.modulus(), deg as u64), &params)
        .param("s", s)
        .param("convention", format!("{convention:?}").to_lowercase());
    compare(&mut report, &lhs, &rhs, deg);
    Ok(report)
}

/// `G_1, …, G_s` with `T_s = Σ_m G_m(z)·T_{s-m}(z^{p^m})`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostSequence {
    pub p: u64,
    /// `ghosts[m - 1] = G_m`.
    pub ghosts: Vec<ZPoly>,
}

impl GhostSequence {
    pub fn get(&self, m: usize) -> Option<&ZPoly> {
        m.checked_sub(1).and_then(|i| self.ghosts.get(i))
    }
}

fn frobenius_term(g: &ZPoly, t: &ZPoly, p: u64, m: usize) -> ZPoly {
    let e = (p as usize).pow(m as u32);
    g.mul(&t.substitute_power(e)).expect("integer polynomials")
}

/// Triangular inversion of the ghost expansion. `unsigned` holds
/// `T_0, …, T_s` in the unsigned convention.
pub fn ghost_sequence(unsigned: &[ZPoly], p: u64) -> GhostSequence {
    let mut ghosts: Vec<ZPoly> = Vec::new();
    for s in 1..unsigned.len() {
        let mut g = unsigned[s].clone();
        for m in 1..s {
            let term = frobenius_term(&ghosts[m - 1], &unsigned[s - m], p, m);
            g = g.sub(&term).expect("integer polynomials");
        }
        ghosts.push(g);
    }
    GhostSequence { p, ghosts }
}

/// Exact identity `T_s = Σ_{m=1}^s G_m·T_{s-m}(z^{p^m})` for every `s`.
pub fn ghost_reconstruction_check(gs: &GhostSequence, unsigned: &[ZPoly]) -> TheoremReport {
    let mut report = TheoremReport::new("ghost_expansion", "exact", 0).param("p", gs.p);
    for s in 1..unsigned.len().min(gs.ghosts.len() + 1) {
        let mut sum = ZPoly::zero(Integers);
        for m in 1..=s {
            sum = sum
                .add(&frobenius_term(&gs.ghosts[m - 1], &unsigned[s - m], gs.p, m))
                .expect("integer polynomials");
        }
        report.degree_checked = report.degree_checked.max(unsigned[s].degree().unwrap_or(0) as u64);
        if sum != unsigned[s] {
            let d = (0..)
                .find(|&d| sum.coeff(d) != unsigned[s].coeff(d))
                .expect("polynomials differ somewhere");
            report.fail(format!("s={s}, z^{d}"), sum.coeff(d), unsigned[s].coeff(d));
        }
    }
    report
}

/// `p^{m-1}` divides every coefficient of `G_m`.
pub fn ghost_vanishing_check(gs: &GhostSequence) -> TheoremReport {
    let mut report = TheoremReport::new("ghost_vanishing", format!("p^(m-1), p={}", gs.p), 0).param("p", gs.p);
    for (i, g) in gs.ghosts.iter().enumerate() {
        let m = i as u64 + 1;
        report.degree_checked = report.degree_checked.max(g.degree().unwrap_or(0) as u64);
        for (d, c) in g.coeffs().iter().enumerate() {
            if !c.is_zero() && int_valuation(c, gs.p) < m - 1 {
                report.fail(format!("G_{m}, z^{d}"), c, format!("multiple of {}^{}", gs.p, m - 1));
            }
        }
    }
    report
}

/// `T_s(z)·Π_{i=1}^m T_{s-m-1}(z^{p^i}) ≡ Π_{i=0}^m T_{s-m}(z^{p^i}) mod p^{s-m}`.
pub fn telescoping_check(ts: &[TsPolynomial], s: u32, m: u32, convention: Convention) -> Result<TheoremReport> {
    let params = family_params(ts)?;
    if s == 0 || m >= s || ts.len() <= s as usize {
        return Err(invalid(format!("telescoping needs 0 ≤ m < s and T_0..T_s (s={s}, m={m})")));
    }
    let p = params.p as usize;
    let ring = Zmod::new(params.p, s - m);
    let red = |i: u32| pick(&ts[i as usize], convention).reduce(&ring);
    let mut lhs = red(s);
    let low = red(s - m - 1);
    for i in 1..=m {
        lhs = lhs.mul(&low.substitute_power(p.pow(i)))?;
    }
    let high = red(s - m);
    let mut rhs = high.clone();
    for i in 1..=m {
        rhs = rhs.mul(&high.substitute_power(p.pow(i)))?;
    }
    let deg = degree_or_zero(&lhs).max(degree_or_zero(&rhs));
    let mut report = labelled(TheoremReport::new("telescoping", ring.modulus(), deg as u64), &params)
        .param("s", s)
        .param("m", m);
    compare(&mut report, &lhs, &rhs, deg);
    Ok(report)
}

/// `V(z)·Π_i T_{a-1}(z^{p^{i+1}}) ≡ Π_i T_a(z^{p^i}) mod p^a` through degree
/// `d_max`, with `i` running until `p^i > d_max`. `ts` holds signed
/// `T_0, …, T_a` (or longer).
pub fn infinite_product_check(
    a: u32,
    d_max: usize,
    vertex: &[BigRational],
    ts: &[TsPolynomial],
) -> Result<TheoremReport> {
    let params = family_params(ts)?;
    if a == 0 || ts.len() <= a as usize {
        return Err(invalid("infinite product check needs a ≥ 1 and T_0..T_a"));
    }
    if vertex.len() <= d_max {
        return Err(invalid("not enough vertex coefficients for the requested degree"));
    }
    let p = params.p;
    let ring = Zmod::new(p, a);
    let v_coeffs = vertex[..=d_max]
        .iter()
        .map(|c| reduce_rational_mod(c, p, a).map(|r| r.value().clone()))
        .collect::<Result<Vec<_>>>()?;
    let v = ModPoly::new(ring.clone(), v_coeffs);
    let len = d_max + 1;
    let ta = ts[a as usize].signed.reduce(&ring);
    let tb = ts[a as usize - 1].signed.reduce(&ring);
    let mut lhs = v;
    let mut rhs = ModPoly::one(ring.clone());
    let mut pi = 1usize;
    loop {
        rhs = rhs.mul_truncated(&ta.truncate(len).substitute_power(pi).truncate(len), len);
        let next = pi * p as usize;
        lhs = lhs.mul_truncated(&tb.truncate(len).substitute_power(next).truncate(len), len);
        if pi > d_max {
            break;
        }
        pi = next;
    }
    let mut report = labelled(TheoremReport::new("infinite_product", ring.modulus(), d_max as u64), &params)
        .param("a", a);
    compare(&mut report, &lhs, &rhs, d_max);
    Ok(report)
}

/// `G_2` read off directly from `L_1 = Φ_2 - Φ_1·Φ̄_1(x^p, z^p)` by full
/// multivariate expansion. Only feasible for tiny parameters.
pub fn ghost_g2_direct(k: usize, n: usize, omega: &OmegaParam, p: u64) -> Result<ZPoly> {
    let model = QuiverModel::new(k, n)?;
    let p1 = PrimeData::new(p, 1, omega)?;
    let p2 = PrimeData::new(p, 2, omega)?;
    let phi2 = SparsePoly::from_factors(&polynomial_factors(&model, omega, p2.p_pow(), true)?);
    let phi1 = SparsePoly::from_factors(&polynomial_factors(&model, omega, p1.p_pow(), true)?);
    let bar1 = SparsePoly::from_factors(&polynomial_factors(&model, omega, p1.p_pow(), false)?);
    let l1 = phi2.sub(&phi1.mul(&bar1.substitute_power(p as u32)));
    if !l1.divisible_by(&BigInt::from(p)) {
        return Err(crate::error::Error::Invariant("L_1 is not divisible by p".into()));
    }
    Ok(l1.coefficient_in_z(&TargetMonomial::standard(&model, p2.p_pow()).exponents))
}

/// Exact comparison helper used by reports over the integers.
pub fn exact_equal_report(identity: &str, lhs: &ZPoly, rhs: &ZPoly) -> TheoremReport {
    let deg = lhs.degree().unwrap_or(0).max(rhs.degree().unwrap_or(0));
    let mut report = TheoremReport::new(identity, "exact", deg as u64);
    for d in 0..=deg {
        if lhs.coeff(d) != rhs.coeff(d) {
            report.fail(d, lhs.coeff(d), rhs.coeff(d));
            break;
        }
    }
    report
}

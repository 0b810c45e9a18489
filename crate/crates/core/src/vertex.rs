//! The specialized vertex function `V(z) = Σ c_d z^d`, computed by
//! independent routes that are compared against each other.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::engine::{run_plan, ts_sequence, ExpandedFactor, ExtractionPlan, TsPolynomial};
use crate::error::{invalid, Error, Result};
use crate::padic::{padic_valuation, rational_binomial, reduce_rational_mod, OmegaParam, Zmod};
use crate::poly::{ModPoly, QPoly, Rationals, RatFun, TruncSeries};
use crate::quiver::{factor_list_phi_rational, Operand, QuiverModel};
use crate::report::TheoremReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Localization,
    Residue,
}

fn ser_rationals<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

/// Exact rational coefficients `c_0, …, c_{D}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexSeries {
    pub k: usize,
    pub n: usize,
    pub omega: String,
    pub provenance: Provenance,
    #[serde(serialize_with = "ser_rationals")]
    pub coeffs: Vec<BigRational>,
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `c_d = (-1)^{nd} binom(-ω, d)^n`.
pub fn vertex_closed_form_k1(n: usize, omega: &OmegaParam, d_max: usize) -> Result<VertexSeries> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    let w = omega.to_rational();
    let coeffs = (0..=d_max)
        .map(|d| {
            let b = rational_binomial(&-w.clone(), d as u64);
            let mut c = num_traits::pow(b, n);
            if (n * d) % 2 == 1 {
                c = -c;
            }
            c
        })
        .collect();
    Ok(VertexSeries {
        k: 1,
        n,
        omega: omega.to_string(),
        provenance: Provenance::ClosedForm,
        coeffs,
    })
}

/// Running product of linear factors kept as separate numerator and
/// denominator polynomials in `t`.
struct Fraction {
    num: QPoly,
    den: QPoly,
}

impl Fraction {
    fn one() -> Self {
        Self {
            num: QPoly::one(Rationals),
            den: QPoly::one(Rationals),
        }
    }

    /// Multiply by `(x)_m` (step 1) where `x = a + b·t`.
    fn pochhammer(&mut self, a: &BigRational, b: &BigRational, m: i64) {
        let lin = |shift: i64| QPoly::new(Rationals, vec![a + q(shift), b.clone()]);
        if m >= 0 {
            for i in 0..m {
                self.num = self.num.mul(&lin(i)).expect("same ring");
            }
        } else {
            for i in 1..=(-m) {
                self.den = self.den.mul(&lin(-i)).expect("same ring");
            }
        }
    }

    /// Multiply by `1/(x)_m`.
    fn inv_pochhammer(&mut self, a: &BigRational, b: &BigRational, m: i64) {
        std::mem::swap(&mut self.num, &mut self.den);
        self.pochhammer(a, b, m);
        std::mem::swap(&mut self.num, &mut self.den);
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// `c_d` from the fixed-point sum with `ε = 1`, `ħ = ω`, `u_j = j·t`,
/// evaluated at `t = 0`.
fn localization_coefficient(k: usize, n: usize, w: &BigRational, d: usize) -> Result<BigRational> {
    let mut total = RatFun::zero();
    let u = |j: usize| q(j as i64);
    for comp in compositions(d, k) {
        let mut f = Fraction::one();
        for i in 1..=k {
            for j in 1..=k {
                let m = comp[i - 1] as i64 - comp[j - 1] as i64;
                let b = u(j) - u(i);
                f.pochhammer(&q(1), &b, m);
                f.inv_pochhammer(w, &b, m);
            }
        }
        for j in 1..=n {
            for i in 1..=k {
                let m = comp[i - 1] as i64;
                let b = u(j) - u(i);
                f.pochhammer(w, &b, m);
                f.inv_pochhammer(&q(1), &b, m);
            }
        }
        if f.den.is_zero() {
            return Err(Error::DivisionByZero("degenerate fixed-point term".into()));
        }
        total = total + RatFun::new(f.num, f.den)?;
    }
    total.eval_at_zero()
}

/// Fixed-point sum over compositions `d_1 + … + d_k = d`, degrees in parallel.
pub fn vertex_localization(k: usize, n: usize, omega: &OmegaParam, d_max: usize) -> Result<VertexSeries> {
    QuiverModel::new(k, n)?;
    let w = omega.to_rational();
    let coeffs = (0..=d_max)
        .into_par_iter()
        .map(|d| localization_coefficient(k, n, &w, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(VertexSeries {
        k,
        n,
        omega: omega.to_string(),
        provenance: Provenance::Localization,
        coeffs,
    })
}

fn residue_run(model: &QuiverModel, omega: &OmegaParam, d_max: usize, cap: usize) -> Result<Vec<BigRational>> {
    let factors: Vec<ExpandedFactor<BigRational>> = factor_list_phi_rational(model, omega)
        .into_iter()
        .map(|bf| {
            // (1 - small/large)^e = Σ binom(e, m) (-1)^m small^m large^{-m}
            let mut terms = Vec::with_capacity(cap + 1);
            let mut c = BigRational::one();
            for m in 0..=cap as i64 {
                if m > 0 {
                    c = -c * (&bf.exponent - q(m - 1)) / q(m);
                }
                let m_small = if bf.small == Operand::One { 0 } else { m };
                let m_large = if bf.large == Operand::One { 0 } else { -m };
                terms.push((m_small, m_large, c.clone()));
            }
            ExpandedFactor {
                a: bf.small,
                b: bf.large,
                terms,
            }
        })
        .collect();
    let order = model.eps_order_positions();
    let plan = ExtractionPlan::new(&factors, &order, vec![0; model.num_vars()], d_max as i64)?;
    let out = run_plan(&plan, &factors, BigRational::one());
    Ok((0..=d_max as i64)
        .map(|d| out.get(&d).cloned().unwrap_or_else(BigRational::zero))
        .collect())
}

/// Coefficients from the constant term of the branch-expanded rational
/// superpotential; series truncation doubles until two runs agree.
pub fn vertex_residue(k: usize, n: usize, omega: &OmegaParam, d_max: usize) -> Result<VertexSeries> {
    let model = QuiverModel::new(k, n)?;
    let incidence = (0..model.num_vars())
        .map(|v| {
            factor_list_phi_rational(&model, omega)
                .iter()
                .filter(|f| f.small == Operand::Var(v) || f.large == Operand::Var(v))
                .count()
        })
        .max()
        .unwrap_or(1);
    let mut cap = (2 * d_max * incidence).max(1);
    let mut prev = residue_run(&model, omega, d_max, cap)?;
    for _ in 0..4 {
        cap *= 2;
        let next = residue_run(&model, omega, d_max, cap)?;
        if next == prev {
            return Ok(VertexSeries {
                k,
                n,
                omega: omega.to_string(),
                provenance: Provenance::Residue,
                coeffs: next,
            });
        }
        prev = next;
    }
    Err(Error::NotStabilized { cap })
}

/// Coefficients of `V mod p^a` from the truncated infinite product of
/// ratios `T_a(z^{p^i}) / T_{a-1}(z^{p^{i+1}})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PadicVertexSeries {
    pub k: usize,
    pub n: usize,
    pub omega: String,
    pub p: u64,
    pub a: u32,
    #[serde(serialize_with = "ser_ints")]
    pub coeffs: Vec<BigInt>,
}

fn ser_ints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

pub fn vertex_padic_limit(
    k: usize,
    n: usize,
    omega: &OmegaParam,
    p: u64,
    a: u32,
    d_max: usize,
) -> Result<PadicVertexSeries> {
    if a == 0 {
        return Err(invalid("precision a must be at least 1"));
    }
    let ts = ts_sequence(k, n, omega, p, a)?;
    padic_limit_from(&ts, a, d_max)
}

/// Same as [`vertex_padic_limit`] with precomputed signed `T_0..T_a`.
pub fn padic_limit_from(ts: &[TsPolynomial], a: u32, d_max: usize) -> Result<PadicVertexSeries> {
    let params = ts.get(a as usize).ok_or_else(|| invalid("missing T_a"))?.params;
    let p = params.p;
    let ring = Zmod::new(p, a);
    let len = d_max + 1;
    let ta = ts[a as usize].signed.reduce(&ring);
    let tb = ts[a as usize - 1].signed.reduce(&ring);
    let mut num = ModPoly::one(ring.clone());
    let mut den = ModPoly::one(ring.clone());
    let mut pi = 1usize;
    loop {
        num = num.mul_truncated(&ta.truncate(len).substitute_power(pi).truncate(len), len);
        let next = pi * p as usize;
        den = den.mul_truncated(&tb.truncate(len).substitute_power(next).truncate(len), len);
        if pi > d_max {
            break;
        }
        pi = next;
    }
    let inv = TruncSeries::new(den, d_max).inverse()?;
    let prod = TruncSeries::new(num, d_max).mul(&inv)?;
    Ok(PadicVertexSeries {
        k: params.k,
        n: params.n,
        omega: format!("{}/{}", params.r, params.q),
        p,
        a,
        coeffs: prod.coeffs(),
    })
}

/// Reduce exact rational coefficients modulo `p^a`.
pub fn reduce_series(coeffs: &[BigRational], p: u64, a: u32) -> Result<Vec<BigInt>> {
    coeffs
        .iter()
        .map(|c| reduce_rational_mod(c, p, a).map(|r| r.value().clone()))
        .collect()
}

/// Table of `v_p(c_{s,m} - c_m)` for `s = 1..`, `m = 0..=m_max`; `None`
/// marks an exact match.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub p: u64,
    pub valuations: Vec<Vec<Option<i64>>>,
}

pub fn coefficient_convergence(
    ts: &[TsPolynomial],
    vertex: &[BigRational],
    m_max: usize,
) -> Result<ConvergenceTable> {
    let p = ts.first().ok_or_else(|| invalid("empty T_s sequence"))?.params.p;
    if vertex.len() <= m_max {
        return Err(invalid("not enough vertex coefficients"));
    }
    let valuations = ts[1..]
        .iter()
        .map(|t| {
            (0..=m_max)
                .map(|m| {
                    let diff = BigRational::from_integer(t.signed.coeff(m)) - &vertex[m];
                    if diff.is_zero() {
                        Ok(None)
                    } else {
                        padic_valuation(&diff, p).map(Some)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable { p, valuations })
}

impl ConvergenceTable {
    /// Nondecreasing valuations in `s` for every `m` (an exact match counts
    /// as `+∞`).
    pub fn monotone_report(&self) -> TheoremReport {
        let s_max = self.valuations.len();
        let m_max = self.valuations.first().map_or(0, |r| r.len());
        let mut report = TheoremReport::new("padic_limit_monotone", format!("v_{}", self.p), m_max.saturating_sub(1) as u64)
            .param("p", self.p)
            .param("s_max", s_max);
        let key = |v: Option<i64>| v.unwrap_or(i64::MAX);
        for m in 0..m_max {
            for s in 1..s_max {
                let (prev, cur) = (self.valuations[s - 1][m], self.valuations[s][m]);
                if key(cur) < key(prev) {
                    let show = |v: Option<i64>| v.map_or("inf".to_string(), |x| x.to_string());
                    report.fail(format!("m={m}, s={}", s + 1), show(cur), format!(">= {}", show(prev)));
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn half() -> OmegaParam {
        OmegaParam::new(1, 2).unwrap()
    }

    #[test]
    fn closed_form_projective_line() {
        let v = vertex_closed_form_k1(2, &half(), 4).unwrap();
        assert_eq!(v.coeffs, vec![rat(1, 1), rat(1, 4), rat(9, 64), rat(25, 256), rat(1225, 16384)]);
        let w = OmegaParam::new(1, 3).unwrap();
        let v3 = vertex_closed_form_k1(3, &w, 1).unwrap();
        assert_eq!(v3.coeffs[1], rat(1, 27));
    }

    #[test]
    fn localization_single_term() {
        let w = OmegaParam::new(1, 3).unwrap();
        let v = vertex_localization(1, 2, &w, 1).unwrap();
        assert_eq!(v.coeffs[1], rat(1, 9));
        assert_eq!(vertex_localization(2, 4, &half(), 0).unwrap().coeffs, vec![rat(1, 1)]);
    }

    #[test]
    fn localization_matches_closed_form() {
        for w in [half(), OmegaParam::new(1, 3).unwrap(), OmegaParam::new(2, 5).unwrap()] {
            for n in 2..=3 {
                let a = vertex_closed_form_k1(n, &w, 5).unwrap();
                let b = vertex_localization(1, n, &w, 5).unwrap();
                assert_eq!(a.coeffs, b.coeffs, "n={n} w={w}");
            }
        }
    }

    #[test]
    fn residue_matches_closed_form() {
        for n in 2..=3 {
            let a = vertex_closed_form_k1(n, &half(), 4).unwrap();
            let b = vertex_residue(1, n, &half(), 4).unwrap();
            assert_eq!(a.coeffs, b.coeffs, "n={n}");
        }
    }

    #[test]
    fn residue_matches_localization_gr24() {
        let a = vertex_localization(2, 4, &half(), 2).unwrap();
        let b = vertex_residue(2, 4, &half(), 2).unwrap();
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn padic_limit_mod_three() {
        let v = vertex_closed_form_k1(2, &half(), 12).unwrap();
        for a in 1..=2 {
            let lim = vertex_padic_limit(1, 2, &half(), 3, a, 12).unwrap();
            assert_eq!(lim.coeffs, reduce_series(&v.coeffs, 3, a).unwrap(), "a={a}");
        }
    }

    #[test]
    fn monotone_convergence_example() {
        let v = vertex_closed_form_k1(2, &half(), 5).unwrap();
        let ts = ts_sequence(1, 2, &half(), 3, 3).unwrap();
        let table = coefficient_convergence(&ts, &v.coeffs, 5).unwrap();
        assert_eq!(table.valuations[0][1], Some(1));
        assert_eq!(table.valuations[0][0], None);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
    }
}

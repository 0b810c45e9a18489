//! The ratio functions `I_s(z) = T_{s+1}(z) / T_s(z^p)` on the unit domain
//! `𝔇 = {z : |T_1(z)|_p = 1}` and their reflection symmetry.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{predicted_reflection_sign, ts_sequence, TsPolynomial};
use crate::error::{invalid, Error, Result};
use crate::padic::{int_valuation, teichmuller_lift, OmegaParam, Zmod};
use crate::report::TheoremReport;

/// Residues `u ∈ F_p` with `T_1(u) ≢ 0 mod p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainD {
    pub p: u64,
    pub units: Vec<u64>,
    pub excluded: Vec<u64>,
}

impl DomainD {
    pub fn contains(&self, u: u64) -> bool {
        self.units.binary_search(&(u % self.p)).is_ok()
    }
}

/// `I_s(a)` in `Z/p^precision`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IRatioValue {
    pub point: String,
    pub s: u32,
    pub modulus: String,
    pub value: String,
    pub unit: bool,
    #[serde(skip)]
    pub raw: BigInt,
}

/// One row of the reflection table over `u ∈ F_p^×`.
#[derive(Debug, Clone, Serialize)]
pub struct ModularRow {
    pub u: u64,
    pub u_inv: u64,
    pub i_at_t: String,
    pub i_at_t_inv: String,
    pub prefactor: String,
    /// `t^{(p-1)rk/q}` is `±1` when `q = 2`; recorded as the sign then.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefactor_sign: Option<i8>,
    pub verdict: crate::report::Verdict,
}

/// Signed `T_0, …, T_{s_max+1}` of one family, shared by all evaluations.
#[derive(Debug, Clone)]
pub struct Continuation {
    k: usize,
    n: usize,
    omega: OmegaParam,
    p: u64,
    ts: Vec<TsPolynomial>,
}

impl Continuation {
    /// Precompute what is needed for `I_1, …, I_{s_max}`.
    pub fn new(k: usize, n: usize, omega: &OmegaParam, p: u64, s_max: u32) -> Result<Self> {
        if s_max == 0 {
            return Err(invalid("s must be at least 1"));
        }
        let ts = ts_sequence(k, n, omega, p, s_max + 1)?;
        Ok(Self {
            k,
            n,
            omega: *omega,
            p,
            ts,
        })
    }

    pub fn s_max(&self) -> u32 {
        self.ts.len() as u32 - 2
    }

    pub fn ts(&self) -> &[TsPolynomial] {
        &self.ts
    }

    pub fn domain(&self) -> DomainD {
        domain_from_t1(&self.ts[1], self.p)
    }

    fn eval(&self, i: usize, a: &BigInt, ring: &Zmod) -> BigInt {
        self.ts[i].signed.reduce(ring).eval(&ring.reduce(a))
    }

    /// `I_s(a) = T_{s+1}(a)·T_s(a^p)^{-1}` in `Z/p^precision`.
    pub fn i_value(&self, a: &BigInt, s: u32, precision: u32) -> Result<IRatioValue> {
        if s == 0 || s > self.s_max() {
            return Err(invalid(format!("I_s is available for 1 ≤ s ≤ {}", self.s_max())));
        }
        let ring = Zmod::new(self.p, precision);
        let num = self.eval(s as usize + 1, a, &ring);
        let a_p = ring.reduce(&num_traits::pow(a.clone(), self.p as usize));
        let den = self.eval(s as usize, &a_p, &ring);
        let inv = ring.inv(&den).ok_or_else(|| Error::DomainViolation(format!("{a} (T_{s}(a^p) = {den} is not a unit)")))?;
        let value = ring.reduce(&(num * inv));
        let unit = !(&value % BigInt::from(self.p)).is_zero();
        Ok(IRatioValue {
            point: ring.reduce(a).to_string(),
            s,
            modulus: ring.modulus().to_string(),
            value: value.to_string(),
            unit,
            raw: value,
        })
    }

    /// `I_s(a)` at its natural precision `p^s`.
    pub fn i_eval(&self, a: &BigInt, s: u32) -> Result<IRatioValue> {
        self.i_value(a, s, s)
    }

    /// `v_p(I_{s+1}(a) - I_s(a))` for `s = 1..s_max-1`, computed modulo
    /// `p^{s_max}` (a vanishing difference reports `s_max`).
    pub fn convergence_profile(&self, a: &BigInt) -> Result<Vec<u64>> {
        let top = self.s_max();
        let values = (1..=top)
            .map(|s| self.i_value(a, s, top).map(|v| v.raw))
            .collect::<Result<Vec<_>>>()?;
        Ok(values
            .windows(2)
            .map(|w| {
                let d = &w[1] - &w[0];
                if (&d % Zmod::new(self.p, top).modulus()).is_zero() {
                    top as u64
                } else {
                    int_valuation(&d, self.p)
                }
            })
            .collect())
    }

    /// Cauchy bound `v_p(I_{s+1}(a) - I_s(a)) ≥ s` at every domain point's
    /// Teichmüller lift.
    pub fn cauchy_report(&self) -> Result<TheoremReport> {
        let top = self.s_max();
        let mut report = self.label(TheoremReport::new("cauchy", format!("{}^{}", self.p, top), 0));
        for u in self.domain().units {
            let t = teichmuller_lift(u, self.p, top)?;
            for (i, v) in self.convergence_profile(t.value())?.into_iter().enumerate() {
                let s = i as u64 + 1;
                if v < s {
                    report.fail(format!("u={u}, s={s}"), v, format!(">= {s}"));
                }
            }
        }
        Ok(report)
    }

    /// `|I_s(a)|_p = 1` at every Teichmüller point of the domain, all `s`.
    pub fn unit_report(&self) -> Result<TheoremReport> {
        let mut report = self.label(TheoremReport::new("unit_values", self.p, 0));
        for s in 1..=self.s_max() {
            for u in self.domain().units {
                let t = teichmuller_lift(u, self.p, s)?;
                let v = self.i_eval(t.value(), s)?;
                if !v.unit {
                    report.fail(format!("u={u}, s={s}"), v.value, "unit");
                }
            }
        }
        Ok(report)
    }

    /// Reflection sign `ρ` in `t^{(p-1)rk/q}·I(1/t) = ρ·I(t)`; it is `1`
    /// whenever the quiver has an even number of arrows times `C_1`.
    pub fn reflection_sign(&self) -> i8 {
        predicted_reflection_sign(&self.ts[1].params)
    }

    /// Check `t^{(p-1)rk/q}·I_s(t^{-1}) ≡ ρ·I_s(t) mod p^s` for the
    /// Teichmüller lift `t` of `u`.
    pub fn modular_row(&self, u: u64, s: u32) -> Result<ModularRow> {
        let u = u % self.p;
        if u == 0 {
            return Err(Error::DomainViolation("0 has no inverse".into()));
        }
        let domain = self.domain();
        let ring = Zmod::new(self.p, s);
        let u_inv = ring_inverse_small(u, self.p);
        if !domain.contains(u) || !domain.contains(u_inv) {
            return Err(Error::DomainViolation(format!("u = {u} (needs u and 1/u in the domain)")));
        }
        let t = teichmuller_lift(u, self.p, s)?;
        let t_inv = t.inv()?;
        let i_t = self.i_eval(t.value(), s)?;
        let i_ti = self.i_eval(t_inv.value(), s)?;
        let e = (self.p - 1) * self.omega.r() * self.k as u64 / self.omega.q();
        let pre = t.pow(e);
        let rho = BigInt::from(self.reflection_sign());
        let lhs = ring.reduce(&(pre.value() * &i_ti.raw));
        let rhs = ring.reduce(&(rho * &i_t.raw));
        let prefactor_sign = if pre.value() == &BigInt::from(1) {
            Some(1)
        } else if pre.value() == &(ring.modulus() - 1) {
            Some(-1)
        } else {
            None
        };
        Ok(ModularRow {
            u,
            u_inv,
            i_at_t: i_t.value,
            i_at_t_inv: i_ti.value,
            prefactor: pre.value().to_string(),
            prefactor_sign: if self.omega.q() == 2 { prefactor_sign } else { None },
            verdict: if lhs == rhs {
                crate::report::Verdict::Pass
            } else {
                crate::report::Verdict::Fail
            },
        })
    }

    /// The reflection table over all admissible `u` plus its report.
    pub fn modular_identity_check(&self, s: u32) -> Result<(Vec<ModularRow>, TheoremReport)> {
        let domain = self.domain();
        let admissible: Vec<u64> = domain
            .units
            .iter()
            .copied()
            .filter(|&u| u != 0 && domain.contains(ring_inverse_small(u, self.p)))
            .collect();
        let rows = admissible
            .par_iter()
            .map(|&u| self.modular_row(u, s))
            .collect::<Result<Vec<_>>>()?;
        let mut report = self
            .label(TheoremReport::new("modular_identity", format!("{}^{}", self.p, s), 0))
            .param("s", s)
            .param("points", rows.len())
            .param("reflection_sign", self.reflection_sign());
        for r in &rows {
            if r.verdict != crate::report::Verdict::Pass {
                report.fail(format!("u={}", r.u), &r.i_at_t, &r.i_at_t_inv);
            }
        }
        Ok((rows, report))
    }

    fn label(&self, r: TheoremReport) -> TheoremReport {
        r.param("k", self.k)
            .param("n", self.n)
            .param("omega", self.omega)
            .param("p", self.p)
    }
}

fn ring_inverse_small(u: u64, p: u64) -> u64 {
    crate::padic::mod_pow_u64(u, p - 2, p)
}

fn domain_from_t1(t1: &TsPolynomial, p: u64) -> DomainD {
    let ring = Zmod::new(p, 1);
    let bar = t1.signed.reduce(&ring);
    let (units, excluded): (Vec<u64>, Vec<u64>) =
        (0..p).partition(|&u| !bar.eval(&BigInt::from(u)).is_zero());
    DomainD { p, units, excluded }
}

/// Residues where the signed `T_1` is a unit.
pub fn domain_units(k: usize, n: usize, omega: &OmegaParam, p: u64) -> Result<DomainD> {
    let ts = ts_sequence(k, n, omega, p, 1)?;
    Ok(domain_from_t1(&ts[1], p))
}

//! The full verification grid, run in a fixed order so the output is
//! byte-for-byte reproducible at any worker count.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::{
    dwork_check, ghost_g2_direct, ghost_reconstruction_check, ghost_sequence, ghost_vanishing_check,
    infinite_product_check, Convention,
};
use crate::continuation::Continuation;
use crate::engine::{ts_sequence, TsPolynomial};
use crate::error::Result;
use crate::padic::{binomial_row, is_prime, OmegaParam};
use crate::points::{census_curve, census_hypersurface};
use crate::poly::{Integers, ZPoly};
use crate::report::{TheoremReport, Verdict};
use crate::vertex::{coefficient_convergence, vertex_closed_form_k1, vertex_localization, vertex_residue};

/// Shapes `(k, n)` in the verification grid.
pub const SHAPES: [(usize, usize); 3] = [(1, 2), (1, 3), (2, 4)];
/// `ω = r/q` values in the verification grid.
pub const OMEGAS: [(u64, u64); 4] = [(1, 2), (1, 3), (1, 4), (2, 5)];
/// Largest `p^s` for the shape checks.
pub const SHAPE_BOUND: u64 = 25;

/// One `(k, n, ω, p)` family of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FamilyKey {
    pub k: usize,
    pub n: usize,
    pub r: u64,
    pub q: u64,
    pub p: u64,
}

impl FamilyKey {
    pub fn omega(&self) -> OmegaParam {
        OmegaParam::new(self.r, self.q).expect("grid values are valid")
    }

    /// Largest `s` with `p^s ≤ 25`.
    pub fn shape_levels(&self) -> u32 {
        (1..).take_while(|&s| self.p.pow(s) <= SHAPE_BOUND).last().unwrap_or(0)
    }

    /// Dwork/ghost levels checked: `s ≤ 3` for `k = 1` and `s ≤ 2` for
    /// `k = 2`, with levels above 1 limited to where `T_{s+1}` stays cheap to
    /// extract (`p^{s+1} ≤ 30000` resp. `≤ 343`).
    pub fn congruence_levels(&self) -> u32 {
        let (cap, bound) = if self.k == 1 { (3, 30_000) } else { (2, 343) };
        (2..=cap).take_while(|&s| self.p.pow(s + 1) <= bound).last().unwrap_or(1)
    }
}

/// All families with `p ≡ 1 mod q` and `p ≤ 25`, in sorted order.
pub fn grid() -> Vec<FamilyKey> {
    let mut out = Vec::new();
    for &(k, n) in &SHAPES {
        for &(r, q) in &OMEGAS {
            for p in (3..=SHAPE_BOUND).filter(|&p| is_prime(p) && (p - 1) % q == 0) {
                out.push(FamilyKey { k, n, r, q, p });
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub verdict: Verdict,
    pub checks: usize,
    pub failed: usize,
    /// One-line summaries of the failing checks.
    pub failures: Vec<String>,
}

impl CriterionResult {
    fn from_reports(id: u32, title: &str, reports: &[TheoremReport]) -> Self {
        let failures: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.summary()).collect();
        Self {
            id,
            title: title.into(),
            verdict: if failures.is_empty() { Verdict::Pass } else { Verdict::Fail },
            checks: reports.len(),
            failed: failures.len(),
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}: {} ({} checks, {} failed)",
            self.id,
            self.title,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks,
            self.failed
        )
    }
}

/// Signed/unsigned `T_0..T_{max}` for each grid family.
pub struct GridData {
    pub families: Vec<(FamilyKey, Vec<TsPolynomial>)>,
}

impl GridData {
    pub fn compute() -> Result<Self> {
        let keys = grid();
        let families = keys
            .par_iter()
            .map(|key| {
                let top = key.shape_levels().max(key.congruence_levels() + 1);
                ts_sequence(key.k, key.n, &key.omega(), key.p, top).map(|ts| (*key, ts))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { families })
    }
}

fn label(r: TheoremReport, key: &FamilyKey) -> TheoremReport {
    r.param("k", key.k)
        .param("n", key.n)
        .param("omega", format!("{}/{}", key.r, key.q))
        .param("p", key.p)
}

pub fn criterion_closed_form() -> Result<CriterionResult> {
    let w = OmegaParam::new(1, 2)?;
    let mut reports = Vec::new();
    for p in [3u64, 5, 7, 13] {
        let ts = ts_sequence(1, 2, &w, p, 2)?;
        for t in &ts[1..] {
            let c = (p.pow(t.params.s) - 1) / 2;
            let expected = ZPoly::new(Integers, binomial_row(c).into_iter().map(|b| &b * &b).collect());
            let mut r = TheoremReport::new("closed_form_t", "exact", c).param("p", p).param("s", t.params.s);
            if t.signed != expected {
                let d = (0..).find(|&d| t.signed.coeff(d) != expected.coeff(d)).unwrap_or(0);
                r.fail(d, t.signed.coeff(d), expected.coeff(d));
            }
            reports.push(r);
        }
    }
    Ok(CriterionResult::from_reports(1, "closed-form T_s", &reports))
}

pub fn criterion_shape(data: &GridData) -> CriterionResult {
    let mut reports = Vec::new();
    for (key, ts) in &data.families {
        for s in 1..=key.shape_levels() {
            let t = &ts[s as usize];
            let expected = t.params.expected_degree();
            let mut r = label(TheoremReport::new("normalization_and_shape", "exact", expected), key).param("s", s);
            if t.signed.coeff(0) != BigInt::from(1) {
                r.fail("T_s(0)", t.signed.coeff(0), 1);
            }
            if t.degree() != Some(expected as usize) {
                r.fail("degree", format!("{:?}", t.degree()), expected);
            }
            if !t.signed.is_palindromic() {
                let d = t.degree().unwrap_or(0);
                let i = (0..=d).find(|&i| t.signed.coeff(i) != t.signed.coeff(d - i)).unwrap_or(0);
                r.fail(format!("palindrome z^{i} vs z^{}", d - i), t.signed.coeff(i), t.signed.coeff(d - i));
            }
            reports.push(r);
        }
    }
    CriterionResult::from_reports(2, "normalization, degree and palindromy", &reports)
}

pub fn criterion_dwork(data: &GridData) -> Result<CriterionResult> {
    let mut reports = Vec::new();
    for (key, ts) in &data.families {
        for s in 1..=key.congruence_levels() {
            for c in [Convention::Signed, Convention::Unsigned] {
                reports.push(dwork_check(&ts[..s as usize + 2], s, c)?);
            }
        }
    }
    Ok(CriterionResult::from_reports(3, "Dwork congruences", &reports))
}

pub fn criterion_ghosts(data: &GridData) -> Result<CriterionResult> {
    let mut reports = Vec::new();
    for (key, ts) in &data.families {
        let top = key.congruence_levels() as usize + 1;
        let unsigned: Vec<ZPoly> = ts[..=top].iter().map(|t| t.unsigned.clone()).collect();
        let gs = ghost_sequence(&unsigned, key.p);
        reports.push(label(ghost_reconstruction_check(&gs, &unsigned), key));
        reports.push(label(ghost_vanishing_check(&gs), key));
    }
    let w = OmegaParam::new(1, 2)?;
    let ts = ts_sequence(1, 2, &w, 3, 2)?;
    let unsigned: Vec<ZPoly> = ts.iter().map(|t| t.unsigned.clone()).collect();
    let inverted = ghost_sequence(&unsigned, 3).ghosts[1].clone();
    let direct = ghost_g2_direct(1, 2, &w, 3)?;
    reports.push(crate::congruence::exact_equal_report("ghost_g2_direct", &direct, &inverted));
    Ok(CriterionResult::from_reports(4, "ghost expansion and vanishing", &reports))
}

fn rational_report(identity: &str, lhs: &[BigRational], rhs: &[BigRational]) -> TheoremReport {
    let mut r = TheoremReport::new(identity, "exact", lhs.len().saturating_sub(1) as u64);
    if lhs.len() != rhs.len() {
        r.fail("length", lhs.len(), rhs.len());
    }
    if let Some(d) = (0..lhs.len().min(rhs.len())).find(|&d| lhs[d] != rhs[d]) {
        r.fail(d, &lhs[d], &rhs[d]);
    }
    r
}

pub fn criterion_vertex_values() -> Result<CriterionResult> {
    let v = vertex_closed_form_k1(2, &OmegaParam::new(1, 2)?, 4)?;
    let expected: Vec<BigRational> = [(1, 1), (1, 4), (9, 64), (25, 256), (1225, 16384)]
        .iter()
        .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
        .collect();
    let r = rational_report("vertex_closed_form", &v.coeffs, &expected);
    Ok(CriterionResult::from_reports(5, "vertex coefficients", &[r]))
}

pub fn criterion_vertex_oracles() -> Result<CriterionResult> {
    let mut jobs: Vec<(usize, usize, u64, u64)> = Vec::new();
    for n in 2..=3 {
        for &(r, q) in &OMEGAS {
            jobs.push((1, n, r, q));
        }
    }
    let mut reports = jobs
        .par_iter()
        .map(|&(k, n, r, q)| {
            let w = OmegaParam::new(r, q)?;
            let a = vertex_closed_form_k1(n, &w, 6)?;
            let b = vertex_localization(k, n, &w, 6)?;
            Ok(rational_report("localization_vs_closed_form", &b.coeffs, &a.coeffs)
                .param("k", k)
                .param("n", n)
                .param("omega", w))
        })
        .collect::<Result<Vec<_>>>()?;
    let w = OmegaParam::new(1, 2)?;
    let a = vertex_localization(2, 4, &w, 3)?;
    let b = vertex_residue(2, 4, &w, 3)?;
    reports.push(
        rational_report("localization_vs_residue", &a.coeffs, &b.coeffs)
            .param("k", 2)
            .param("n", 4)
            .param("omega", w),
    );
    Ok(CriterionResult::from_reports(6, "vertex oracle equivalence", &reports))
}

pub fn criterion_infinite_product() -> Result<CriterionResult> {
    let w = OmegaParam::new(1, 2)?;
    let v = vertex_closed_form_k1(2, &w, 8)?;
    let ts = ts_sequence(1, 2, &w, 3, 2)?;
    let reports = vec![
        infinite_product_check(1, 8, &v.coeffs, &ts)?,
        infinite_product_check(2, 8, &v.coeffs, &ts)?,
    ];
    Ok(CriterionResult::from_reports(7, "infinite product", &reports))
}

pub fn criterion_padic_limit() -> Result<CriterionResult> {
    let w = OmegaParam::new(1, 2)?;
    let v = vertex_closed_form_k1(2, &w, 5)?;
    let mut reports = Vec::new();
    for p in [3u64, 5] {
        let ts = ts_sequence(1, 2, &w, p, 3)?;
        reports.push(coefficient_convergence(&ts, &v.coeffs, 5)?.monotone_report());
    }
    Ok(CriterionResult::from_reports(8, "p-adic limit", &reports))
}

pub fn criterion_continuation() -> Result<CriterionResult> {
    let mut reports = Vec::new();
    for (r, q, p) in [(1u64, 2u64, 5u64), (1, 3, 7)] {
        let c = Continuation::new(1, 2, &OmegaParam::new(r, q)?, p, 2)?;
        reports.push(c.modular_identity_check(2)?.1);
        reports.push(c.unit_report()?);
        reports.push(c.cauchy_report()?);
    }
    Ok(CriterionResult::from_reports(9, "analytic continuation", &reports))
}

pub fn criterion_hypersurface() -> Result<CriterionResult> {
    let mut reports = Vec::new();
    for (n, p) in [(2usize, 3u64), (2, 5), (2, 7), (2, 11), (3, 5), (3, 7)] {
        for rep in census_hypersurface(n, p)? {
            let mut r = TheoremReport::new("hypersurface_count", p, 0)
                .param("n", n)
                .param("p", p)
                .param("z0", rep.z0);
            for (name, v) in &rep.checks {
                if *v != Verdict::Pass {
                    r.fail(name, rep.points, rep.t1_tilde);
                }
            }
            reports.push(r);
        }
    }
    Ok(CriterionResult::from_reports(10, "hypersurface point counts", &reports))
}

pub fn criterion_curve() -> Result<CriterionResult> {
    let mut reports = Vec::new();
    for (r, q, p) in [(1u64, 3u64, 7u64), (1, 3, 13), (2, 5, 11)] {
        for rep in census_curve(r, q, p)? {
            let mut t = TheoremReport::new("curve_count", p, 0)
                .param("r", r)
                .param("q", q)
                .param("p", p)
                .param("z0", rep.z0);
            for (name, v) in &rep.checks {
                if *v != Verdict::Pass {
                    t.fail(name, rep.points, format!("{:?}", rep.a));
                }
            }
            reports.push(t);
        }
    }
    Ok(CriterionResult::from_reports(11, "curve point counts", &reports))
}

/// Every criterion, in order.
pub fn run_selftest() -> Result<Vec<CriterionResult>> {
    let data = GridData::compute()?;
    Ok(vec![
        criterion_closed_form()?,
        criterion_shape(&data),
        criterion_dwork(&data)?,
        criterion_ghosts(&data)?,
        criterion_vertex_values()?,
        criterion_vertex_oracles()?,
        criterion_infinite_product()?,
        criterion_padic_limit()?,
        criterion_continuation()?,
        criterion_hypersurface()?,
        criterion_curve()?,
    ])
}

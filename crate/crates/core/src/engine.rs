//! Coefficient extraction from products of binomial powers.
//!
//! A product `Π (a_f - b_f)^{e_f}` (or a product of truncated branch series)
//! is never expanded. Variables are eliminated one at a time: the factors
//! incident to a variable are multiplied into a sparse state keyed by the
//! exponent vector `(x_1, …, x_N, z)`, and every partial term that can no
//! longer reach the target exponents is discarded as soon as it appears.
//! Bounds come from the exponent ranges of the factors not yet consumed, so
//! the last factor touching a variable only ever contributes a single term
//! per state entry.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::padic::{binomial_row, mod_pow_u64, OmegaParam, PrimeData};
use crate::poly::{Integers, ZPoly};
use crate::quiver::{
    factor_list_phi_s, FactorList, Operand, QuiverModel, Shape, TargetMonomial,
};

/// Coefficient type of the sparse elimination state.
pub trait Coefficient: Clone + Zero + Send + Sync {
    fn mul_ref(&self, other: &Self) -> Self;
}

impl Coefficient for BigInt {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

impl Coefficient for BigRational {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

/// `Σ c · a^{da} · b^{db}` with `da` strictly increasing and `db` strictly
/// decreasing along `terms`.
#[derive(Debug, Clone)]
pub(crate) struct ExpandedFactor<C> {
    pub a: Operand,
    pub b: Operand,
    pub terms: Vec<(i64, i64, C)>,
}

impl ExpandedFactor<BigInt> {
    /// `(a - b)^e`.
    pub fn binomial(a: Operand, b: Operand, e: u64) -> Self {
        let row = binomial_row(e);
        let terms = row
            .into_iter()
            .enumerate()
            .rev()
            .map(|(j, c)| {
                let c = if j % 2 == 1 { -c } else { c };
                ((e - j as u64) as i64, j as i64, c)
            })
            .collect();
        Self { a, b, terms }
    }
}

#[derive(Debug, Clone, Copy)]
struct Span {
    min: i64,
    max: i64,
}

impl<C> ExpandedFactor<C> {
    fn span_a(&self) -> Span {
        Span {
            min: self.terms.first().map_or(0, |t| t.0),
            max: self.terms.last().map_or(0, |t| t.0),
        }
    }
    fn span_b(&self) -> Span {
        Span {
            min: self.terms.last().map_or(0, |t| t.1),
            max: self.terms.first().map_or(0, |t| t.1),
        }
    }
}

/// Elimination schedule: the order in which variables are closed and the
/// factor consumption sequence it induces.
#[derive(Debug, Clone, Serialize)]
pub struct ExtractionPlan {
    /// Variable positions in elimination order.
    pub order: Vec<usize>,
    /// For each eliminated variable, the factor indices consumed with it.
    pub incident: Vec<Vec<usize>>,
    /// Residual target exponent per variable (after monomial shifts).
    pub targets: Vec<i64>,
    /// Largest z-degree kept.
    pub z_cap: i64,
}

impl ExtractionPlan {
    pub(crate) fn new<C>(
        factors: &[ExpandedFactor<C>],
        order: &[usize],
        targets: Vec<i64>,
        z_cap: i64,
    ) -> Result<Self> {
        let nv = targets.len();
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..nv).collect::<Vec<_>>() {
            return Err(invalid("elimination order must be a permutation of the variables"));
        }
        let mut used = vec![false; factors.len()];
        let mut incident = Vec::with_capacity(nv);
        for &v in order {
            let mut group = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                if !used[i] && (f.a == Operand::Var(v) || f.b == Operand::Var(v)) {
                    used[i] = true;
                    group.push(i);
                }
            }
            incident.push(group);
        }
        if let Some(last) = incident.last_mut() {
            last.extend((0..factors.len()).filter(|&i| !used[i]));
        }
        Ok(Self {
            order: order.to_vec(),
            incident,
            targets,
            z_cap,
        })
    }

    fn schedule(&self) -> Vec<usize> {
        self.incident.iter().flatten().copied().collect()
    }
}

fn coord(o: Operand, nv: usize) -> Option<usize> {
    match o {
        Operand::Var(i) => Some(i),
        Operand::Z => Some(nv),
        Operand::One => None,
    }
}

/// Run the elimination; returns the coefficient of each z-degree of the
/// target x-monomial.
pub(crate) fn run_plan<C: Coefficient>(
    plan: &ExtractionPlan,
    factors: &[ExpandedFactor<C>],
    one: C,
) -> BTreeMap<i64, C> {
    let nv = plan.targets.len();
    let schedule = plan.schedule();
    let ncoord = nv + 1;

    // rem[t][c] = (min, max) total contribution to coordinate c of factors schedule[t..]
    let mut rem = vec![vec![(0i64, 0i64); ncoord]; schedule.len() + 1];
    for t in (0..schedule.len()).rev() {
        rem[t] = rem[t + 1].clone();
        let f = &factors[schedule[t]];
        if let Some(c) = coord(f.a, nv) {
            let s = f.span_a();
            rem[t][c].0 += s.min;
            rem[t][c].1 += s.max;
        }
        if let Some(c) = coord(f.b, nv) {
            let s = f.span_b();
            rem[t][c].0 += s.min;
            rem[t][c].1 += s.max;
        }
    }
    let bounds = |t: usize, c: usize| -> (i64, i64) {
        let (rmin, rmax) = rem[t][c];
        if c == nv {
            (i64::MIN / 4, plan.z_cap - rmin)
        } else {
            (plan.targets[c] - rmax, plan.targets[c] - rmin)
        }
    };

    let mut state: HashMap<Vec<i64>, C> = HashMap::new();
    let start = vec![0i64; ncoord];
    if (0..ncoord).all(|c| {
        let (lo, hi) = bounds(0, c);
        lo <= 0 && 0 <= hi
    }) {
        state.insert(start, one);
    }

    for (t, &fi) in schedule.iter().enumerate() {
        let f = &factors[fi];
        let ca = coord(f.a, nv);
        let cb = coord(f.b, nv);
        let ba = ca.map(|c| bounds(t + 1, c));
        let bb = cb.map(|c| bounds(t + 1, c));
        let mut next: HashMap<Vec<i64>, C> = HashMap::with_capacity(state.len());
        for (key, c) in state {
            let mut lo = 0usize;
            let mut hi = f.terms.len();
            if let (Some(ca), Some((l, h))) = (ca, ba) {
                let (l, h) = (l - key[ca], h - key[ca]);
                lo = lo.max(f.terms.partition_point(|x| x.0 < l));
                hi = hi.min(f.terms.partition_point(|x| x.0 <= h));
            }
            if let (Some(cb), Some((l, h))) = (cb, bb) {
                let (l, h) = (l - key[cb], h - key[cb]);
                lo = lo.max(f.terms.partition_point(|x| x.1 > h));
                hi = hi.min(f.terms.partition_point(|x| x.1 >= l));
            }
            for (da, db, fc) in f.terms.get(lo..hi).unwrap_or(&[]) {
                let mut nk = key.clone();
                if let Some(ca) = ca {
                    nk[ca] += da;
                }
                if let Some(cb) = cb {
                    nk[cb] += db;
                }
                let term = c.mul_ref(fc);
                match next.get_mut(&nk) {
                    Some(acc) => *acc = acc.clone() + term,
                    None => {
                        next.insert(nk, term);
                    }
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        state = next;
    }

    let mut out = BTreeMap::new();
    for (key, c) in state {
        if (0..nv).all(|v| key[v] == plan.targets[v]) {
            let e: &mut C = out.entry(key[nv]).or_insert_with(C::zero);
            *e = e.clone() + c;
        }
    }
    out.retain(|_, c: &mut C| !c.is_zero());
    out
}

fn prepare(fl: &FactorList<u64>, target: &TargetMonomial) -> Option<(Vec<ExpandedFactor<BigInt>>, Vec<i64>)> {
    assert_eq!(target.exponents.len(), fl.num_vars, "target/factor arity mismatch");
    let mut targets: Vec<i64> = target.exponents.iter().map(|&e| e as i64).collect();
    let mut expanded = Vec::new();
    for f in &fl.factors {
        match f.shape {
            Shape::Monomial(v) => targets[v] -= f.exponent as i64,
            Shape::Binomial(a, b) => expanded.push(ExpandedFactor::binomial(a, b, f.exponent)),
        }
    }
    targets.iter().all(|&t| t >= 0).then_some((expanded, targets))
}

/// Greedy minimum-degree elimination order: repeatedly close the variable
/// with the fewest open variable neighbours, then the fewest incident
/// factors, ties broken by position in `prefer`. On the quiver this peels the
/// outer vertices first, which keeps the sparse state narrow.
pub fn low_fill_order(fl: &FactorList<u64>, prefer: &[usize]) -> Vec<usize> {
    let nv = fl.num_vars;
    let mut neighbours = vec![std::collections::BTreeSet::new(); nv];
    let mut incidence = vec![0usize; nv];
    for f in &fl.factors {
        if let Shape::Binomial(a, b) = f.shape {
            for o in [a, b] {
                if let Operand::Var(v) = o {
                    incidence[v] += 1;
                }
            }
            if let (Operand::Var(a), Operand::Var(b)) = (a, b) {
                neighbours[a].insert(b);
                neighbours[b].insert(a);
            }
        }
    }
    let mut closed = vec![false; nv];
    let mut order = Vec::with_capacity(nv);
    for _ in 0..nv {
        let v = prefer
            .iter()
            .enumerate()
            .filter(|&(_, &v)| !closed[v])
            .min_by_key(|&(rank, &v)| {
                let open = neighbours[v].iter().filter(|&&u| !closed[u]).count();
                (open, incidence[v], rank)
            })
            .map(|(_, &v)| v)
            .expect("an open variable remains");
        closed[v] = true;
        order.push(v);
    }
    order
}

fn z_degree_bound(fl: &FactorList<u64>) -> i64 {
    fl.factors
        .iter()
        .filter(|f| matches!(f.shape, Shape::Binomial(Operand::Z, _) | Shape::Binomial(_, Operand::Z)))
        .map(|f| f.exponent as i64)
        .sum()
}

/// Coefficient of `x^target` in the product, as a polynomial in `z`, using
/// the given elimination order (positions into the variable list).
pub fn extract_coefficient_with_order(
    fl: &FactorList<u64>,
    target: &TargetMonomial,
    order: &[usize],
) -> Result<ZPoly> {
    extract_capped(fl, target, order, z_degree_bound(fl))
}

/// Coefficient of `x^target`, eliminating variables in their listed order.
pub fn extract_coefficient(fl: &FactorList<u64>, target: &TargetMonomial) -> Result<ZPoly> {
    let order: Vec<usize> = (0..fl.num_vars).collect();
    extract_coefficient_with_order(fl, target, &order)
}

fn extract_capped(fl: &FactorList<u64>, target: &TargetMonomial, order: &[usize], z_cap: i64) -> Result<ZPoly> {
    let Some((expanded, targets)) = prepare(fl, target) else {
        return Ok(ZPoly::zero(Integers));
    };
    let plan = ExtractionPlan::new(&expanded, order, targets, z_cap)?;
    let coeffs = run_plan(&plan, &expanded, BigInt::one());
    let deg = coeffs.keys().next_back().copied().unwrap_or(-1);
    let mut dense = vec![BigInt::zero(); (deg + 1) as usize];
    for (d, c) in coeffs {
        dense[d as usize] = c;
    }
    Ok(ZPoly::new(Integers, dense))
}

/// Parameters of one p-adic approximation `T_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TsParams {
    pub k: usize,
    pub n: usize,
    pub r: u64,
    pub q: u64,
    pub p: u64,
    pub s: u32,
}

impl TsParams {
    pub fn omega(&self) -> OmegaParam {
        OmegaParam::new(self.r, self.q).expect("validated on construction")
    }

    /// `(p^s - 1) k r / q`.
    pub fn expected_degree(&self) -> u64 {
        (self.p.pow(self.s) - 1) * self.k as u64 * self.r / self.q
    }
}

/// The polynomial `T_s(z)` in both sign conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct TsPolynomial {
    pub params: TsParams,
    /// Normalized so that `T_s(0) = 1`.
    pub signed: ZPoly,
    /// The raw coefficient of `x^{d p^s - 1}` in `Φ_s`.
    pub unsigned: ZPoly,
    /// `σ_s` with `signed = σ_s · unsigned`.
    pub sign: i8,
}

impl TsPolynomial {
    pub fn one(k: usize, n: usize, omega: &OmegaParam, p: u64) -> Self {
        let one = ZPoly::one(Integers);
        Self {
            params: TsParams {
                k,
                n,
                r: omega.r(),
                q: omega.q(),
                p,
                s: 0,
            },
            signed: one.clone(),
            unsigned: one,
            sign: 1,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.signed.degree()
    }

    /// The sign `ρ` with `z^D T_s(1/z) = ρ·T_s(z)`, if the coefficient vector
    /// is palindromic (`1`) or antipalindromic (`-1`).
    pub fn reflection_sign(&self) -> Option<i8> {
        if self.signed.is_palindromic() {
            Some(1)
        } else if self.signed.is_antipalindromic() {
            Some(-1)
        } else {
            None
        }
    }
}

/// `(-1)^{C_s·E}` where `C_s = (p^s - 1) r / q` and `E = Σ v_i v_{i+1}` counts
/// chain arrows: reversing the quiver swaps `z ↔ 1` and flips every chain
/// binomial, so this is the sign relating `T_s(z)` to its reciprocal.
pub fn predicted_reflection_sign(params: &TsParams) -> i8 {
    let dims = crate::quiver::QuiverModel::new(params.k, params.n)
        .map(|m| m.dims().to_vec())
        .unwrap_or_default();
    let arrows: u64 = dims.windows(2).map(|w| (w[0] * w[1]) as u64).sum();
    let c = (params.p.pow(params.s) - 1) * params.r / params.q;
    if (c * arrows) % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TsReport {
    pub params: TsParams,
    pub coeffs: Vec<String>,
    pub unsigned_coeffs: Vec<String>,
    pub sign: i8,
    pub degree: i64,
}

impl From<&TsPolynomial> for TsReport {
    fn from(t: &TsPolynomial) -> Self {
        Self {
            params: t.params,
            coeffs: t.signed.coeffs().iter().map(|c| c.to_string()).collect(),
            unsigned_coeffs: t.unsigned.coeffs().iter().map(|c| c.to_string()).collect(),
            sign: t.sign,
            degree: t.degree().map_or(-1, |d| d as i64),
        }
    }
}

/// `T_s(z)` for `T*Gr(k, n)`, sign fixed by a separate `z = 0` extraction.
pub fn compute_ts(k: usize, n: usize, omega: &OmegaParam, prime: &PrimeData) -> Result<TsPolynomial> {
    let model = QuiverModel::new(k, n)?;
    let fl = factor_list_phi_s(&model, omega, prime)?;
    let target = TargetMonomial::standard(&model, prime.p_pow());
    let order = low_fill_order(&fl, &model.eps_order_positions());
    let unsigned = extract_coefficient_with_order(&fl, &target, &order)?;
    let at_zero = extract_capped(&fl, &target, &order, 0)?;
    let sign: i8 = match at_zero.coeffs() {
        [c] if c.is_one() => 1,
        [c] if (-c).is_one() => -1,
        other => {
            return Err(Error::Invariant(format!(
                "coefficient at z = 0 is {other:?}, expected ±1"
            )))
        }
    };
    if unsigned.coeff(0) != at_zero.coeff(0) {
        return Err(Error::Invariant("z = 0 extraction disagrees with T_s(0)".into()));
    }
    let signed = if sign == 1 { unsigned.clone() } else { unsigned.neg() };
    Ok(TsPolynomial {
        params: TsParams {
            k,
            n,
            r: omega.r(),
            q: omega.q(),
            p: prime.p(),
            s: prime.s(),
        },
        signed,
        unsigned,
        sign,
    })
}

/// `T_0 = 1, T_1, …, T_{s_max}` computed in parallel.
pub fn ts_sequence(k: usize, n: usize, omega: &OmegaParam, p: u64, s_max: u32) -> Result<Vec<TsPolynomial>> {
    let mut rest: Vec<TsPolynomial> = (1..=s_max)
        .into_par_iter()
        .map(|s| compute_ts(k, n, omega, &PrimeData::new(p, s, omega)?))
        .collect::<Result<_>>()?;
    let mut out = vec![TsPolynomial::one(k, n, omega, p)];
    out.append(&mut rest);
    Ok(out)
}

/// `-Σ_{t ∈ F_p^{n-1}} Φ_1(t, z0) mod p` for the `k = 1` family.
pub fn fp_sum_oracle(k: usize, n: usize, omega: &OmegaParam, p: u64, z0: u64) -> Result<u64> {
    if k != 1 {
        return Err(invalid("the point-sum identity is available for k = 1 only"));
    }
    let model = QuiverModel::new(1, n)?;
    let prime = PrimeData::new(p, 1, omega)?;
    let fl = factor_list_phi_s(&model, omega, &prime)?;
    let z0 = z0 % p;
    let nv = model.num_vars();
    let value = |o: Operand, t: &[u64]| match o {
        Operand::Var(i) => t[i],
        Operand::Z => z0,
        Operand::One => 1,
    };
    let mut total = 0u64;
    let mut t = vec![0u64; nv];
    loop {
        let mut prod = 1u64;
        for f in &fl.factors {
            let base = match f.shape {
                Shape::Monomial(v) => t[v],
                Shape::Binomial(a, b) => (value(a, &t) + p - value(b, &t)) % p,
            };
            prod = prod * mod_pow_u64(base, f.exponent, p) % p;
        }
        total = (total + prod) % p;
        // odometer over F_p^{n-1}
        let mut i = 0;
        while i < nv {
            t[i] += 1;
            if t[i] < p {
                break;
            }
            t[i] = 0;
            i += 1;
        }
        if i == nv {
            break;
        }
    }
    Ok((p - total) % p)
}

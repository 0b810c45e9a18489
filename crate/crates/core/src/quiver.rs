//! Combinatorics of the framed `A_{n-1}` quiver mirror to `T*Gr(k, n)`:
//! dimension vector, variables `x_{i,j}`, their ε-ranking, and the factor
//! tables of the rational superpotential `Φ` and its polynomial
//! truncations `Φ_s`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::padic::{OmegaParam, PrimeData};

/// The variable `x_{vertex, slot}` (both 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VarIndex {
    pub vertex: usize,
    pub slot: usize,
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{},{}", self.vertex, self.slot)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuiverModel {
    k: usize,
    n: usize,
    dims: Vec<usize>,
    variables: Vec<VarIndex>,
}

impl QuiverModel {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || n < 2 * k {
            return Err(invalid(format!("need n >= 2k >= 2, got k = {k}, n = {n}")));
        }
        let dims: Vec<usize> = (1..n)
            .map(|i| {
                if i < k {
                    i
                } else if i <= n - k {
                    k
                } else {
                    n - i
                }
            })
            .collect();
        let variables = dims
            .iter()
            .enumerate()
            .flat_map(|(i, &v)| (1..=v).map(move |slot| VarIndex { vertex: i + 1, slot }))
            .collect();
        Ok(Self {
            k,
            n,
            dims,
            variables,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimensions `v_1, …, v_{n-1}`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn variables(&self) -> &[VarIndex] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_position(&self, v: VarIndex) -> Option<usize> {
        self.variables.iter().position(|&w| w == v)
    }

    /// `|i - k| + 2j - 1`.
    pub fn eps_rank(&self, v: VarIndex) -> usize {
        v.vertex.abs_diff(self.k) + 2 * v.slot - 1
    }

    /// Variables by ascending ε-rank, ties broken by the smaller vertex.
    pub fn eps_order(&self) -> Vec<VarIndex> {
        let mut vs = self.variables.clone();
        vs.sort_by_key(|&v| (self.eps_rank(v), v.vertex));
        vs
    }

    /// Positions (into [`variables`](Self::variables)) in ε-order.
    pub fn eps_order_positions(&self) -> Vec<usize> {
        self.eps_order()
            .into_iter()
            .map(|v| self.var_position(v).expect("own variable"))
            .collect()
    }

    fn pos(&self, vertex: usize, slot: usize) -> usize {
        self.var_position(VarIndex { vertex, slot }).expect("variable in range")
    }

    /// Sign-free factor skeleton shared by `Φ` and `Φ_s`, in the orientation
    /// `(x_{m,j} - x_{m,i})`, `(x_{i,a} - x_{i+1,b})`, `(z - x_{k,i})`,
    /// `(1 - x_{n-k,i})`.
    fn skeleton(&self) -> Vec<(FactorKind, Shape)> {
        let mut out = Vec::new();
        for (idx, _) in self.variables.iter().enumerate() {
            out.push((FactorKind::Monomial, Shape::Monomial(idx)));
        }
        for (m, &dim) in self.dims.iter().enumerate() {
            for i in 1..=dim {
                for j in (i + 1)..=dim {
                    out.push((
                        FactorKind::Vandermonde,
                        Shape::Binomial(Operand::Var(self.pos(m + 1, j)), Operand::Var(self.pos(m + 1, i))),
                    ));
                }
            }
        }
        for i in 1..self.dims.len() {
            for a in 1..=self.dims[i - 1] {
                for b in 1..=self.dims[i] {
                    out.push((
                        FactorKind::Chain,
                        Shape::Binomial(Operand::Var(self.pos(i, a)), Operand::Var(self.pos(i + 1, b))),
                    ));
                }
            }
        }
        for i in 1..=self.k {
            out.push((
                FactorKind::FramingZ,
                Shape::Binomial(Operand::Z, Operand::Var(self.pos(self.k, i))),
            ));
        }
        for i in 1..=self.k {
            out.push((
                FactorKind::FramingOne,
                Shape::Binomial(Operand::One, Operand::Var(self.pos(self.n - self.k, i))),
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Monomial,
    Vandermonde,
    Chain,
    FramingZ,
    FramingOne,
}

/// One side of a binomial factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Operand {
    /// Position into the model's variable list.
    Var(usize),
    Z,
    One,
}

/// `x^e` or `(lhs - rhs)^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Monomial(usize),
    Binomial(Operand, Operand),
}

impl Shape {
    pub fn involves(&self, var: usize) -> bool {
        match *self {
            Shape::Monomial(v) => v == var,
            Shape::Binomial(a, b) => a == Operand::Var(var) || b == Operand::Var(var),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor<E> {
    pub kind: FactorKind,
    pub shape: Shape,
    pub exponent: E,
}

/// Integer exponents of `Φ_s = Δ·Φ̄_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PolyExponents {
    /// `(p^s - 1)(q - r)/q` on every variable.
    pub monomial: u64,
    /// `(p^s - 1)(q - 2r)/q`, always even.
    pub vandermonde_bar: u64,
    /// `(p^s - 1) r / q` on chain and framing binomials.
    pub binomial: u64,
}

impl PolyExponents {
    pub fn new(omega: &OmegaParam, p_pow: u64) -> Result<Self> {
        let m = p_pow - 1;
        if m % omega.q() != 0 {
            return Err(invalid("p must be an odd prime with p ≡ 1 mod q"));
        }
        let unit = m / omega.q();
        Ok(Self {
            monomial: unit * (omega.q() - omega.r()),
            vandermonde_bar: unit * (omega.q() - 2 * omega.r()),
            binomial: unit * omega.r(),
        })
    }
}

/// A product of powers of monomials and binomials in `x` and `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorList<E> {
    pub num_vars: usize,
    pub factors: Vec<Factor<E>>,
}

/// Factors of `Φ_s(x, z)` (with `Δ` when `include_delta`, i.e. Vandermonde
/// exponent `B + 1`; otherwise `Φ̄_s` with exponent `B`).
pub fn polynomial_factors(
    model: &QuiverModel,
    omega: &OmegaParam,
    p_pow: u64,
    include_delta: bool,
) -> Result<FactorList<u64>> {
    let e = PolyExponents::new(omega, p_pow)?;
    let factors = model
        .skeleton()
        .into_iter()
        .map(|(kind, shape)| {
            let exponent = match kind {
                FactorKind::Monomial => e.monomial,
                FactorKind::Vandermonde => e.vandermonde_bar + u64::from(include_delta),
                _ => e.binomial,
            };
            Factor {
                kind,
                shape,
                exponent,
            }
        })
        .filter(|f| f.exponent > 0)
        .collect();
    Ok(FactorList {
        num_vars: model.num_vars(),
        factors,
    })
}

/// Factors of `Φ_s = Δ(x) Φ̄(x,z)^{1-p^s}`.
pub fn factor_list_phi_s(
    model: &QuiverModel,
    omega: &OmegaParam,
    prime: &PrimeData,
) -> Result<FactorList<u64>> {
    polynomial_factors(model, omega, prime.p_pow(), true)
}

/// The exponent vector `j·p^s - 1` of the target monomial `x^{d p^s - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetMonomial {
    pub exponents: Vec<u64>,
}

impl TargetMonomial {
    pub fn standard(model: &QuiverModel, p_pow: u64) -> Self {
        Self {
            exponents: model.variables().iter().map(|v| v.slot as u64 * p_pow - 1).collect(),
        }
    }

    /// Exponents `u·p^s - 1` for an arbitrary degree vector `u ≥ 1`.
    pub fn from_degrees(u: &[u64], p_pow: u64) -> Self {
        Self {
            exponents: u.iter().map(|&x| x * p_pow - 1).collect(),
        }
    }
}

/// How a branch factor is expanded on the torus `|x_{i,j}| = ε_{i,j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `(1 - small/large)^e`.
    Direct,
    /// `(small/large - 1)^e`, i.e. the first operand is the smaller one.
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchFactor {
    pub kind: FactorKind,
    pub small: Operand,
    pub large: Operand,
    #[serde(serialize_with = "ser_rational")]
    pub exponent: BigRational,
    pub branch: Branch,
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Branch data of the rational superpotential `Φ(x, z)` with `z_{k,1} = z`
/// and `z_{n-k,1} = 1`. The monomial prefactor `Π x^{-1+ω}` combines with the
/// homogeneity of the binomials into `Π x^{-1}` and is not listed.
pub fn factor_list_phi_rational(model: &QuiverModel, omega: &OmegaParam) -> Vec<BranchFactor> {
    let w = omega.to_rational();
    // modulus on the torus: z below every ε, 1 above every ε
    let size = |o: Operand| -> i64 {
        match o {
            Operand::Z => 0,
            Operand::One => i64::MAX,
            Operand::Var(i) => model.eps_rank(model.variables()[i]) as i64,
        }
    };
    model
        .skeleton()
        .into_iter()
        .filter_map(|(kind, shape)| {
            let Shape::Binomial(a, b) = shape else {
                return None;
            };
            let exponent = match kind {
                FactorKind::Vandermonde => &w * BigRational::from_integer(BigInt::from(2)),
                _ => -w.clone(),
            };
            let (small, large, branch) = if size(a) < size(b) {
                (a, b, Branch::Reversed)
            } else {
                (b, a, Branch::Direct)
            };
            Some(BranchFactor {
                kind,
                small,
                large,
                exponent,
                branch,
            })
        })
        .collect()
}

/// Number of reversed-branch factors (the integer `N` in the sign `(-1)^{CN}`).
pub fn reversed_count(factors: &[BranchFactor]) -> usize {
    factors.iter().filter(|f| f.branch == Branch::Reversed).count()
}

#[derive(Debug, Clone, Serialize)]
pub struct VariableDescription {
    pub vertex: usize,
    pub slot: usize,
    pub eps_rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorDescription {
    pub kind: FactorKind,
    pub operands: Vec<String>,
    pub exponent: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
}

/// JSON view of a quiver model and its factor table.
#[derive(Debug, Clone, Serialize)]
pub struct QuiverDescription {
    pub k: usize,
    pub n: usize,
    pub vertices: usize,
    pub dims: Vec<usize>,
    pub variables: Vec<VariableDescription>,
    pub eps_order: Vec<String>,
    pub omega: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    pub factors: Vec<FactorDescription>,
}

fn operand_name(model: &QuiverModel, o: Operand) -> String {
    match o {
        Operand::Var(i) => model.variables()[i].to_string(),
        Operand::Z => "z".into(),
        Operand::One => "1".into(),
    }
}

impl QuiverDescription {
    /// Describe `Φ_s` when `prime` is given, the rational `Φ` otherwise.
    pub fn new(model: &QuiverModel, omega: &OmegaParam, prime: Option<&PrimeData>) -> Result<Self> {
        let factors = match prime {
            Some(pd) => factor_list_phi_s(model, omega, pd)?
                .factors
                .iter()
                .map(|f| FactorDescription {
                    kind: f.kind,
                    operands: match f.shape {
                        Shape::Monomial(v) => vec![operand_name(model, Operand::Var(v))],
                        Shape::Binomial(a, b) => vec![operand_name(model, a), operand_name(model, b)],
                    },
                    exponent: f.exponent.to_string(),
                    branch: None,
                })
                .collect(),
            None => factor_list_phi_rational(model, omega)
                .iter()
                .map(|f| FactorDescription {
                    kind: f.kind,
                    operands: vec![operand_name(model, f.small), operand_name(model, f.large)],
                    exponent: f.exponent.to_string(),
                    branch: Some(f.branch),
                })
                .collect(),
        };
        Ok(Self {
            k: model.k(),
            n: model.n(),
            vertices: model.dims().len(),
            dims: model.dims().to_vec(),
            variables: model
                .variables()
                .iter()
                .map(|&v| VariableDescription {
                    vertex: v.vertex,
                    slot: v.slot,
                    eps_rank: model.eps_rank(v),
                })
                .collect(),
            eps_order: model.eps_order().iter().map(|v| v.to_string()).collect(),
            omega: omega.to_string(),
            p: prime.map(|pd| pd.p()),
            s: prime.map(|pd| pd.s()),
            factors,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(vertex: usize, slot: usize) -> VarIndex {
        VarIndex { vertex, slot }
    }

    fn half() -> OmegaParam {
        OmegaParam::new(1, 2).unwrap()
    }

    #[test]
    fn builds_dimension_vectors() {
        let m = QuiverModel::new(2, 4).unwrap();
        assert_eq!(m.dims(), &[1, 2, 1]);
        assert_eq!(m.variables(), &[v(1, 1), v(2, 1), v(2, 2), v(3, 1)]);
        assert_eq!(QuiverModel::new(1, 2).unwrap().dims(), &[1]);
        assert_eq!(QuiverModel::new(1, 3).unwrap().dims(), &[1, 1]);
        assert!(QuiverModel::new(2, 3).is_err());
        assert!(QuiverModel::new(0, 3).is_err());
    }

    #[test]
    fn variable_count_is_grassmannian_dimension() {
        for n in 2..9 {
            for k in 1..=n / 2 {
                assert_eq!(QuiverModel::new(k, n).unwrap().num_vars(), k * (n - k));
            }
        }
    }

    #[test]
    fn eps_order_examples() {
        let m = QuiverModel::new(2, 4).unwrap();
        let order = m.eps_order();
        assert_eq!(order, vec![v(2, 1), v(1, 1), v(3, 1), v(2, 2)]);
        let ranks: Vec<usize> = order.iter().map(|&x| m.eps_rank(x)).collect();
        assert_eq!(ranks, vec![1, 2, 2, 3]);
        let m = QuiverModel::new(1, 3).unwrap();
        assert_eq!(m.eps_order(), vec![v(1, 1), v(2, 1)]);
        assert_eq!(QuiverModel::new(1, 2).unwrap().eps_order(), vec![v(1, 1)]);
    }

    #[test]
    fn eps_rank_extremes() {
        for (k, n) in [(1, 2), (1, 5), (2, 4), (2, 7), (3, 6), (3, 8)] {
            let m = QuiverModel::new(k, n).unwrap();
            let ranks: Vec<usize> = m.variables().iter().map(|&x| m.eps_rank(x)).collect();
            assert_eq!(*ranks.iter().min().unwrap(), 1);
            assert_eq!(*ranks.iter().max().unwrap(), n - 1);
            assert_eq!(m.eps_rank(v(k, 1)), 1);
            assert_eq!(m.eps_rank(v(n - k, k)), n - 1);
        }
    }

    #[test]
    fn phi_s_for_projective_line() {
        let m = QuiverModel::new(1, 2).unwrap();
        let w = half();
        let pd = PrimeData::new(3, 1, &w).unwrap();
        let fl = factor_list_phi_s(&m, &w, &pd).unwrap();
        let got: Vec<(FactorKind, u64)> = fl.factors.iter().map(|f| (f.kind, f.exponent)).collect();
        assert_eq!(
            got,
            vec![
                (FactorKind::Monomial, 1),
                (FactorKind::FramingZ, 1),
                (FactorKind::FramingOne, 1)
            ]
        );
    }

    #[test]
    fn phi_s_for_gr24_counts() {
        let m = QuiverModel::new(2, 4).unwrap();
        let w = half();
        let pd = PrimeData::new(3, 1, &w).unwrap();
        let e = PolyExponents::new(&w, 3).unwrap();
        assert_eq!((e.monomial, e.vandermonde_bar, e.binomial), (1, 0, 1));
        let fl = factor_list_phi_s(&m, &w, &pd).unwrap();
        let count = |k: FactorKind| fl.factors.iter().filter(|f| f.kind == k).count();
        assert_eq!(count(FactorKind::Monomial), 4);
        assert_eq!(count(FactorKind::Vandermonde), 1);
        assert_eq!(count(FactorKind::Chain), 4);
        assert_eq!(count(FactorKind::FramingZ) + count(FactorKind::FramingOne), 4);
        let vdm = fl.factors.iter().find(|f| f.kind == FactorKind::Vandermonde).unwrap();
        assert_eq!(vdm.exponent, 1);
        // both framings sit on vertex k when n = 2k
        for f in fl.factors.iter().filter(|f| matches!(f.kind, FactorKind::FramingZ | FactorKind::FramingOne)) {
            let Shape::Binomial(_, Operand::Var(i)) = f.shape else { panic!() };
            assert_eq!(m.variables()[i].vertex, 2);
        }
    }

    #[test]
    fn rejects_incompatible_prime() {
        let m = QuiverModel::new(1, 2).unwrap();
        let w = OmegaParam::new(1, 3).unwrap();
        assert!(polynomial_factors(&m, &w, 5, true).is_err());
    }

    #[test]
    fn exponents_are_integral_and_vandermonde_even() {
        for (r, q) in [(1, 2), (1, 3), (1, 4), (2, 5), (1, 6), (3, 7)] {
            let w = OmegaParam::new(r, q).unwrap();
            for p in (3..200u64).filter(|&p| crate::padic::is_prime(p) && (p - 1) % q == 0) {
                for s in 1..4 {
                    let e = PolyExponents::new(&w, p.pow(s)).unwrap();
                    assert_eq!(e.vandermonde_bar % 2, 0);
                    assert_eq!(e.monomial + e.binomial, p.pow(s) - 1);
                }
            }
        }
    }

    #[test]
    fn framing_z_degree_matches_claimed_degree() {
        let w = OmegaParam::new(1, 3).unwrap();
        for (k, n) in [(1, 2), (1, 4), (2, 4), (2, 5), (3, 6)] {
            let m = QuiverModel::new(k, n).unwrap();
            let fl = polynomial_factors(&m, &w, 49, true).unwrap();
            let zdeg: u64 = fl
                .factors
                .iter()
                .filter(|f| f.kind == FactorKind::FramingZ)
                .map(|f| f.exponent)
                .sum();
            assert_eq!(zdeg, 48 * k as u64 / 3);
        }
    }

    #[test]
    fn branch_forms_for_k1() {
        let w = half();
        let m = QuiverModel::new(1, 2).unwrap();
        let fl = factor_list_phi_rational(&m, &w);
        assert_eq!(fl.len(), 2);
        assert_eq!((fl[0].kind, fl[0].branch), (FactorKind::FramingZ, Branch::Reversed));
        assert_eq!((fl[0].small, fl[0].large), (Operand::Z, Operand::Var(0)));
        assert_eq!((fl[1].kind, fl[1].branch), (FactorKind::FramingOne, Branch::Direct));
        for n in 2..9 {
            let m = QuiverModel::new(1, n).unwrap();
            assert_eq!(reversed_count(&factor_list_phi_rational(&m, &w)), n - 1);
        }
        let m = QuiverModel::new(1, 3).unwrap();
        let chain = factor_list_phi_rational(&m, &w)
            .into_iter()
            .find(|f| f.kind == FactorKind::Chain)
            .unwrap();
        assert_eq!(chain.branch, Branch::Reversed);
        assert_eq!((chain.small, chain.large), (Operand::Var(0), Operand::Var(1)));
    }

    #[test]
    fn branch_exponents() {
        let w = OmegaParam::new(1, 3).unwrap();
        let m = QuiverModel::new(2, 4).unwrap();
        for f in factor_list_phi_rational(&m, &w) {
            let expected = if f.kind == FactorKind::Vandermonde {
                BigRational::new(2.into(), 3.into())
            } else {
                BigRational::new((-1).into(), 3.into())
            };
            assert_eq!(f.exponent, expected);
        }
    }

    #[test]
    fn description_serializes() {
        let w = half();
        let m = QuiverModel::new(2, 4).unwrap();
        let pd = PrimeData::new(3, 1, &w).unwrap();
        let d = serde_json::to_value(QuiverDescription::new(&m, &w, Some(&pd)).unwrap()).unwrap();
        assert_eq!(d["dims"], serde_json::json!([1, 2, 1]));
        assert_eq!(d["eps_order"][0], "x2,1");
        assert_eq!(d["factors"].as_array().unwrap().len(), 13);
    }
}

//! Independent reference computations for the integration tests. Nothing
//! here calls into the library except for the types it returns.
#![allow(dead_code)]

use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(big(a), big(b))
}

/// Write a line that survives libtest's output capture.
pub fn report_line(line: &str) {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let _ = writeln!(lock, "{line}");
    let _ = lock.flush();
}

pub fn criterion_line(id: u32, title: &str, checks: usize, failures: &[String], tolerance: &str) -> String {
    format!(
        "criterion {id:>2} {title}: {} ({checks} checks, {} failed, tolerance {tolerance})",
        if failures.is_empty() { "PASS" } else { "FAIL" },
        failures.len()
    )
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * big((n - i) as i64) / big((i + 1) as i64);
    }
    acc
}

/// `(-1)^{nd} binom(-ω, d)^n` for `d = 0..=d_max`.
pub fn closed_form_vertex(n: usize, r: i64, q: i64, d_max: usize) -> Vec<BigRational> {
    let w = rat(r, q);
    let mut b = BigRational::one();
    let mut out = Vec::with_capacity(d_max + 1);
    for d in 0..=d_max {
        if d > 0 {
            b = b * (-&w - rat(d as i64 - 1, 1)) / rat(d as i64, 1);
        }
        let mut c = num_traits::pow(b.clone(), n);
        if (n * d) % 2 == 1 {
            c = -c;
        }
        out.push(c);
    }
    out
}

pub fn modulus(p: u64, a: u32) -> BigInt {
    num_traits::pow(big(p as i64), a as usize)
}

pub fn modinv(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = x.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

pub fn rational_mod(c: &BigRational, m: &BigInt) -> BigInt {
    let inv = modinv(c.denom(), m).expect("p-integral rational");
    (c.numer() * inv).mod_floor(m)
}

/// `v_p(x)` of a nonzero rational.
pub fn vp(x: &BigRational, p: u64) -> i64 {
    assert!(!x.is_zero());
    let pb = big(p as i64);
    let mut v = 0;
    let mut num = x.numer().abs();
    while (&num % &pb).is_zero() {
        num /= &pb;
        v += 1;
    }
    let mut den = x.denom().abs();
    while (&den % &pb).is_zero() {
        den /= &pb;
        v -= 1;
    }
    v
}

pub fn reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter().map(|c| c.mod_floor(m)).collect()
}

/// Product truncated to `len` coefficients (`None` keeps everything).
pub fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt, len: Option<usize>) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let full = a.len() + b.len() - 1;
    let n = len.map_or(full, |l| l.min(full));
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

/// `f(z^e)`.
pub fn subst(a: &[BigInt], e: usize) -> Vec<BigInt> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); (a.len() - 1) * e + 1];
    for (i, c) in a.iter().enumerate() {
        out[i * e] = c.clone();
    }
    out
}

pub fn trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn eval_mod(a: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    a.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

pub fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = (b % p) as u128;
    let p = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc as u64
}

/// Smallest generator of `F_p^×` by exhaustive order computation.
pub fn smallest_generator(p: u64) -> u64 {
    (2..p)
        .find(|&g| {
            let mut x = 1u64;
            (1..p - 1).all(|_| {
                x = x * g % p;
                x != 1
            })
        })
        .expect("F_p^× is cyclic")
}

/// `#{(x, y) ∈ F_p^{n-1} × F_p : y^2 = Π x_i Π (x_{i+1} - x_i) (1 - x_1)(z0 - x_{n-1})}`.
pub fn brute_hypersurface(n: usize, p: u64, z0: u64) -> u64 {
    let dim = n - 1;
    let mut count = 0;
    let mut x = vec![0u64; dim];
    loop {
        let mut v = 1u64;
        for &xi in &x {
            v = v * xi % p;
        }
        for i in 0..dim - 1 {
            v = v * ((x[i + 1] + p - x[i]) % p) % p;
        }
        v = v * ((1 + p - x[0]) % p) % p * ((z0 + p - x[dim - 1]) % p) % p;
        count += (0..p).filter(|y| y * y % p == v).count() as u64;
        let mut i = 0;
        while i < dim {
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == dim {
            return count;
        }
    }
}

pub fn curve_value(x: u64, z0: u64, r: u64, q: u64, p: u64) -> u64 {
    pow_mod(x, q - r, p) * pow_mod((1 + p - x) % p, r, p) % p * pow_mod((z0 + p - x) % p, r, p) % p
}

/// `#{(x, y) ∈ F_p^2 : y^q = x^{q-r}(1-x)^r(z0-x)^r}`.
pub fn brute_curve(r: u64, q: u64, p: u64, z0: u64) -> u64 {
    let mut count = 0;
    for x in 0..p {
        let v = curve_value(x, z0, r, q, p);
        for y in 0..p {
            if pow_mod(y, q, p) == v {
                count += 1;
            }
        }
    }
    count
}

/// Minimal JSON-schema validator covering the keywords used by
/// `schema/reports.v1.json`: `$ref` (local), `oneOf`, `type`, `const`,
/// `enum`, `pattern`, `minimum`, `required`, `properties`,
/// `additionalProperties` and `items`.
pub struct Validator {
    root: Value,
}

impl Validator {
    pub fn load() -> Self {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/reports.v1.json");
        let text = std::fs::read_to_string(path).expect("schema file");
        Self {
            root: serde_json::from_str(&text).expect("schema parses"),
        }
    }

    pub fn validate(&self, v: &Value) -> Result<(), String> {
        self.check(&self.root, v, "$")
    }

    fn resolve<'a>(&'a self, reference: &str) -> &'a Value {
        let path = reference.strip_prefix("#/").expect("local reference");
        path.split('/').fold(&self.root, |node, key| &node[key])
    }

    fn check(&self, schema: &Value, v: &Value, at: &str) -> Result<(), String> {
        let s = schema.as_object().ok_or_else(|| format!("{at}: schema is not an object"))?;
        if let Some(r) = s.get("$ref").and_then(Value::as_str) {
            return self.check(self.resolve(r), v, at);
        }
        if let Some(alts) = s.get("oneOf").and_then(Value::as_array) {
            let ok = alts.iter().filter(|a| self.check(a, v, at).is_ok()).count();
            if ok != 1 {
                let reasons: Vec<String> = alts.iter().filter_map(|a| self.check(a, v, at).err()).collect();
                return Err(format!("{at}: {ok} alternatives match ({})", reasons.join("; ")));
            }
        }
        if let Some(t) = s.get("type").and_then(Value::as_str) {
            let ok = match t {
                "object" => v.is_object(),
                "array" => v.is_array(),
                "string" => v.is_string(),
                "integer" => v.is_i64() || v.is_u64(),
                "number" => v.is_number(),
                "boolean" => v.is_boolean(),
                "null" => v.is_null(),
                other => return Err(format!("{at}: unsupported type {other}")),
            };
            if !ok {
                return Err(format!("{at}: expected {t}, got {v}"));
            }
        }
        if let Some(c) = s.get("const") {
            if c != v {
                return Err(format!("{at}: expected {c}, got {v}"));
            }
        }
        if let Some(e) = s.get("enum").and_then(Value::as_array) {
            if !e.contains(v) {
                return Err(format!("{at}: {v} not in {e:?}"));
            }
        }
        if let (Some(pat), Some(text)) = (s.get("pattern").and_then(Value::as_str), v.as_str()) {
            if !regex::Regex::new(pat).expect("schema pattern").is_match(text) {
                return Err(format!("{at}: {text:?} does not match {pat}"));
            }
        }
        if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_i64), v.as_i64()) {
            if x < min {
                return Err(format!("{at}: {x} < {min}"));
            }
        }
        if let Some(obj) = v.as_object() {
            if let Some(req) = s.get("required").and_then(Value::as_array) {
                for key in req.iter().filter_map(Value::as_str) {
                    if !obj.contains_key(key) {
                        return Err(format!("{at}: missing {key}"));
                    }
                }
            }
            let props = s.get("properties").and_then(Value::as_object);
            for (key, val) in obj {
                let here = format!("{at}.{key}");
                match props.and_then(|p| p.get(key)) {
                    Some(sub) => self.check(sub, val, &here)?,
                    None => match s.get("additionalProperties") {
                        Some(Value::Bool(false)) => return Err(format!("{here}: unexpected property")),
                        Some(sub @ Value::Object(_)) => self.check(sub, val, &here)?,
                        _ => {}
                    },
                }
            }
        }
        if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
            for (i, x) in arr.iter().enumerate() {
                self.check(items, x, &format!("{at}[{i}]"))?;
            }
        }
        Ok(())
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, inv_mod, is_prime, poly};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceKind {
    /// `x -> e(f1(x)/f2(x) / p)`, zero at poles.
    AdditiveRational { f1: Vec<i64>, f2: Vec<i64> },
    /// `x -> e(r ind_g f(x) / (p-1))`, zero where `p | f(x)`.
    MultiplicativeChar { r: i64, f: Vec<i64> },
    /// Normalised hyper-Kloosterman sum `Kl_k(x, p)`.
    HyperKloosterman { k: u32 },
    /// Explicit values, `values[x]` for `x = 0..p`.
    Table { values: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSpec {
    pub kind: TraceKind,
    /// `None` stands for "amiable of every order".
    pub amiability_hint: Option<u32>,
    pub conductor_bound: u64,
}

impl TraceSpec {
    pub fn additive(f1: Vec<i64>, f2: Vec<i64>) -> Self {
        let d = poly::degree(&f1).unwrap_or(0) + poly::degree(&f2).unwrap_or(0);
        Self::with_kind(TraceKind::AdditiveRational { f1, f2 }, 1 + d as u64)
    }

    /// `x -> e(a x / p)`.
    pub fn linear_phase(a: i64) -> Self {
        Self::additive(vec![0, a], vec![1])
    }

    pub fn multiplicative(r: i64, f: Vec<i64>) -> Self {
        let d = poly::degree(&f).unwrap_or(0);
        Self::with_kind(TraceKind::MultiplicativeChar { r, f }, 1 + d as u64)
    }

    pub fn kloosterman(k: u32) -> Self {
        Self::with_kind(TraceKind::HyperKloosterman { k }, k as u64 + 3)
    }

    pub fn table(values: Vec<Complex64>) -> Self {
        Self::with_kind(TraceKind::Table { values }, 1)
    }

    fn with_kind(kind: TraceKind, conductor_bound: u64) -> Self {
        Self { kind, amiability_hint: None, conductor_bound }
    }

    pub fn with_conductor(mut self, c: u64) -> Self {
        self.conductor_bound = c;
        self
    }

    pub fn with_amiability(mut self, d: Option<u32>) -> Self {
        self.amiability_hint = d;
        self
    }

    /// Parses `addrat:f1=..;f2=..`, `mult:r=..;f=..`, `kloo:k=..` or
    /// `table:v=..`, each optionally followed by `;cond=..` and `;amiable=..`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::Parse(format!("{m} in trace spec {s:?}"));
        let (head, rest) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for tok in rest.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = tok.split_once('=').ok_or_else(|| bad("field without '='"))?;
            fields.insert(k.trim(), v.trim());
        }
        let field = |k: &str| fields.get(k).copied().ok_or_else(|| bad(&format!("missing field {k}")));
        let int = |k: &str| -> Result<i64> { field(k)?.parse().map_err(|_| bad(&format!("bad {k}"))) };
        let mut spec = match head.trim() {
            "addrat" => Self::additive(
                poly::parse(field("f1")?)?,
                fields.get("f2").map(|v| poly::parse(v)).transpose()?.unwrap_or_else(|| vec![1]),
            ),
            "mult" => Self::multiplicative(int("r")?, poly::parse(field("f")?)?),
            "kloo" => {
                let k = int("k")?;
                if !(1..=8).contains(&k) {
                    return Err(bad("k must be in 1..=8"));
                }
                Self::kloosterman(k as u32)
            }
            "table" => {
                let values = field("v")?
                    .split(',')
                    .map(|t| t.trim().parse::<Complex64>().map_err(|_| bad("bad table value")))
                    .collect::<Result<Vec<_>>>()?;
                Self::table(values)
            }
            other => return Err(bad(&format!("unknown kind {other:?}"))),
        };
        if let Some(c) = fields.get("cond") {
            spec.conductor_bound = c.parse().map_err(|_| bad("bad cond"))?;
        }
        if let Some(a) = fields.get("amiable") {
            spec.amiability_hint = match *a {
                "inf" => None,
                v => Some(v.parse().map_err(|_| bad("bad amiable"))?),
            };
        }
        Ok(spec)
    }
}

impl fmt::Display for TraceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TraceKind::AdditiveRational { f1, f2 } => {
                write!(f, "addrat:f1={};f2={}", poly::format(f1), poly::format(f2))
            }
            TraceKind::MultiplicativeChar { r, f: g } => write!(f, "mult:r={r};f={}", poly::format(g)),
            TraceKind::HyperKloosterman { k } => write!(f, "kloo:k={k}"),
            TraceKind::Table { values } => {
                let v: Vec<String> = values.iter().map(|z| z.to_string()).collect();
                write!(f, "table:v={}", v.join(","))
            }
        }
    }
}

/// `K(n) = prod_p K_p(n mod p)` over distinct primes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeTraceSpec {
    per_prime: BTreeMap<u64, TraceSpec>,
}

impl CompositeTraceSpec {
    /// `q = 1`, `K = 1`.
    pub fn trivial() -> Self {
        Self { per_prime: BTreeMap::new() }
    }

    pub fn new(parts: Vec<(u64, TraceSpec)>) -> Result<Self> {
        let mut per_prime = BTreeMap::new();
        for (p, s) in parts {
            if !is_prime(p) {
                return Err(crate::error::precondition(format!("{p} is not prime")));
            }
            if per_prime.insert(p, s).is_some() {
                return Err(crate::error::precondition(format!("prime {p} repeated")));
            }
        }
        Ok(Self { per_prime })
    }

    /// The same spec at every prime factor of a squarefree `q`.
    pub fn uniform(q: u64, spec: &TraceSpec) -> Result<Self> {
        let f = squarefree_factors(q)?;
        Self::new(f.into_iter().map(|p| (p, spec.clone())).collect())
    }

    /// `n -> e(h f1(n)/f2(n) / q)` split across the primes of `q` by
    /// `1/q = sum_p inv(q/p, p)/p mod 1`.
    pub fn additive_over(q: u64, h: i64, f1: &[i64], f2: &[i64]) -> Result<Self> {
        let f = squarefree_factors(q)?;
        let mut parts = Vec::with_capacity(f.len());
        for p in f {
            let c = inv_mod((q / p) % p, p).expect("coprime cofactor") as i128;
            let t = (h as i128).rem_euclid(p as i128) * c % p as i128;
            let f1p: Vec<i64> = f1.iter().map(|&a| ((a as i128 * t).rem_euclid(p as i128)) as i64).collect();
            parts.push((p, TraceSpec::additive(f1p, f2.to_vec())));
        }
        Self::new(parts)
    }

    /// `n -> e(h inv(n) / q)`, zero when `(n, q) > 1`.
    pub fn inverse_phase(q: u64, h: i64) -> Result<Self> {
        Self::additive_over(q, h, &[1], &[0, 1])
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.per_prime.keys().copied()
    }

    pub fn parts(&self) -> impl Iterator<Item = (u64, &TraceSpec)> {
        self.per_prime.iter().map(|(p, s)| (*p, s))
    }

    pub fn spec_at(&self, p: u64) -> Option<&TraceSpec> {
        self.per_prime.get(&p)
    }

    pub fn modulus(&self) -> u64 {
        self.per_prime.keys().product()
    }

    /// `q=p1*p2*...;p1=<spec>;p2=<spec>`; `*=<spec>` sets every unset prime.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::Parse(format!("{m} in composite spec {s:?}"));
        let mut toks = s.split(';').map(str::trim);
        let head = toks.next().unwrap_or_default();
        let qs = head.strip_prefix("q=").ok_or_else(|| bad("expected leading q="))?;
        let primes = qs
            .split('*')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad("bad prime")))
            .collect::<Result<Vec<_>>>()?;
        let q: u64 = primes.iter().product();
        if q == 1 && primes.iter().all(|&p| p == 1) {
            return Ok(Self::trivial());
        }
        let mut chunks: Vec<(String, String)> = Vec::new();
        for tok in toks.filter(|t| !t.is_empty()) {
            let starts_part = tok.split_once('=').filter(|(k, v)| {
                (k.trim() == "*" || k.trim().parse::<u64>().is_ok()) && v.contains(':')
            });
            match starts_part {
                Some((k, v)) => chunks.push((k.trim().to_string(), v.to_string())),
                None => {
                    let last = chunks.last_mut().ok_or_else(|| bad("field before any prime"))?;
                    last.1.push(';');
                    last.1.push_str(tok);
                }
            }
        }
        let mut default = None;
        let mut given: BTreeMap<u64, TraceSpec> = BTreeMap::new();
        for (k, v) in chunks {
            let spec = TraceSpec::parse(&v)?;
            if k == "*" {
                default = Some(spec);
            } else {
                let p: u64 = k.parse().map_err(|_| bad("bad prime key"))?;
                if !primes.contains(&p) {
                    return Err(bad(&format!("{p} does not divide q")));
                }
                given.insert(p, spec);
            }
        }
        let mut parts = Vec::new();
        for p in primes {
            let spec = match given.remove(&p) {
                Some(s) => s,
                None => default.clone().ok_or_else(|| bad(&format!("no spec for prime {p}")))?,
            };
            parts.push((p, spec));
        }
        Self::new(parts)
    }
}

impl fmt::Display for CompositeTraceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.per_prime.keys().map(|p| p.to_string()).collect();
        write!(f, "q={}", if ps.is_empty() { "1".into() } else { ps.join("*") })?;
        for (p, s) in &self.per_prime {
            write!(f, ";{p}={s}")?;
        }
        Ok(())
    }
}

fn squarefree_factors(q: u64) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(crate::error::precondition("modulus must be positive"));
    }
    let f = factorize(q);
    if !f.is_squarefree() {
        return Err(crate::error::precondition(format!("{q} is not squarefree")));
    }
    Ok(f.primes().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_grammar() {
        let s = TraceSpec::parse("addrat:f1=0,1;f2=1").unwrap();
        assert_eq!(s.kind, TraceKind::AdditiveRational { f1: vec![0, 1], f2: vec![1] });
        assert_eq!(s.conductor_bound, 2);
        assert_eq!(TraceSpec::parse("kloo:k=2").unwrap().conductor_bound, 5);
        let m = TraceSpec::parse("mult:r=1;f=1,0,1;cond=9").unwrap();
        assert_eq!(m.conductor_bound, 9);
        assert_eq!(TraceSpec::parse(&m.to_string()).unwrap().kind, m.kind);
        assert!(TraceSpec::parse("kloo:k=0").is_err());
        assert!(TraceSpec::parse("bogus:k=1").is_err());
    }

    #[test]
    fn composite_grammar() {
        let c = CompositeTraceSpec::parse("q=3*5;3=kloo:k=2;5=addrat:f1=1;f2=0,1").unwrap();
        assert_eq!(c.modulus(), 15);
        assert_eq!(
            c.spec_at(5).unwrap().kind,
            TraceKind::AdditiveRational { f1: vec![1], f2: vec![0, 1] }
        );
        let u = CompositeTraceSpec::parse("q=3*5*7;*=kloo:k=2").unwrap();
        assert_eq!(u.modulus(), 105);
        assert_eq!(CompositeTraceSpec::parse(&u.to_string()).unwrap(), u);
        assert!(CompositeTraceSpec::parse("q=3*3;*=kloo:k=2").is_err());
        assert!(CompositeTraceSpec::parse("q=3*5;3=kloo:k=2").is_err());
        assert_eq!(CompositeTraceSpec::parse("q=1").unwrap().modulus(), 1);
    }

    #[test]
    fn inverse_phase_split() {
        let c = CompositeTraceSpec::inverse_phase(15, 1).unwrap();
        // 1/15 = 2/3 + 2/5 - 1, so the per-prime scalars are inv(5,3)=2 and inv(3,5)=2
        for p in [3u64, 5] {
            assert_eq!(
                c.spec_at(p).unwrap().kind,
                TraceKind::AdditiveRational { f1: vec![2], f2: vec![0, 1] }
            );
        }
        assert!(CompositeTraceSpec::inverse_phase(12, 1).is_err());
    }
}

//! The two-variable level program: maximise `gamma = alpha + beta` subject to
//!
//! ```text
//! alpha >= 0, beta >= 0, alpha + beta + theta <= 3/2, alpha + theta <= 1,
//! (k + 1)(alpha + 2 beta) + theta (l + 3)/2 [+ alpha] <= 2,
//! (1 - 2k)(alpha + 2 beta) >= (l - 1/2) theta          (family Ak)
//! 2 (1 - l)(alpha + 2 beta) >= k theta                  (family BAk)
//! ```
//!
//! The bracketed `+ alpha` is present only in [`LpVariant::AsStated`]. Strict
//! inequalities are relaxed to `<=`, so results are suprema.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::pairs::{ExponentTriple, Family, ProcessWord};
use crate::rational::{half, int, ratio, serde_pq, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpVariant {
    /// Bilinear constraint with the standalone `+ alpha` term.
    AsStated,
    /// Bilinear constraint without it; reproduces the tabulated ranges.
    #[default]
    #[serde(rename = "table2")]
    Tabulated,
}

impl LpVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "as-stated" | "asstated" => Ok(LpVariant::AsStated),
            "table2" | "table-2" => Ok(LpVariant::Tabulated),
            _ => Err(Error::Parse(format!("unknown LP variant {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LpVariant::AsStated => "as-stated",
            LpVariant::Tabulated => "table2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintId {
    AlphaNonneg,
    BetaNonneg,
    Length,
    AlphaTheta,
    Bilinear,
    Family,
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintId::AlphaNonneg => "alpha>=0",
            ConstraintId::BetaNonneg => "beta>=0",
            ConstraintId::Length => "alpha+beta+theta<=3/2",
            ConstraintId::AlphaTheta => "alpha+theta<=1",
            ConstraintId::Bilinear => "bilinear",
            ConstraintId::Family => "family",
        })
    }
}

/// `a alpha + b beta <= c0 + c1 theta`.
#[derive(Debug, Clone)]
struct Constraint {
    id: ConstraintId,
    a: Rational,
    b: Rational,
    c0: Rational,
    c1: Rational,
}

impl Constraint {
    fn new(id: ConstraintId, a: Rational, b: Rational, c0: Rational, c1: Rational) -> Self {
        Self { id, a, b, c0, c1 }
    }

    fn rhs(&self, theta: &Rational) -> Rational {
        &self.c0 + &self.c1 * theta
    }

    fn slack(&self, alpha: &Rational, beta: &Rational, theta: &Rational) -> Rational {
        self.rhs(theta) - &self.a * alpha - &self.b * beta
    }
}

fn constraints(pair: &ExponentTriple, variant: LpVariant, family: Option<Family>) -> Vec<Constraint> {
    use ConstraintId::*;
    let (k, l) = (&pair.kappa, &pair.lambda);
    let z = Rational::zero;
    let o = Rational::one;
    let k1 = k + o();
    let bil_a = match variant {
        LpVariant::AsStated => &k1 + o(),
        LpVariant::Tabulated => k1.clone(),
    };
    let mut out = vec![
        Constraint::new(AlphaNonneg, -o(), z(), z(), z()),
        Constraint::new(BetaNonneg, z(), -o(), z(), z()),
        Constraint::new(Length, o(), o(), ratio(3, 2), -o()),
        Constraint::new(AlphaTheta, o(), z(), o(), -o()),
        Constraint::new(Bilinear, bil_a, &k1 * int(2), int(2), -(l + int(3)) / int(2)),
    ];
    match family {
        Some(crate::pairs::Family::Ak) => {
            let m = o() - k * int(2);
            out.push(Constraint::new(Family, -m.clone(), -m * int(2), z(), half() - l));
        }
        Some(crate::pairs::Family::BAk) => {
            let m = (o() - l) * int(2);
            out.push(Constraint::new(Family, -m.clone(), -m * int(2), z(), -k.clone()));
        }
        None => {}
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelProblem {
    #[serde(with = "serde_pq")]
    pub theta: Rational,
    pub pair: ExponentTriple,
    pub variant: LpVariant,
    pub family: Family,
}

impl LevelProblem {
    pub fn new(theta: Rational, pair: ExponentTriple, variant: LpVariant, family: Family) -> Self {
        Self { theta, pair, variant, family }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelResult {
    #[serde(with = "serde_pq")]
    pub gamma: Rational,
    #[serde(with = "serde_pq")]
    pub alpha: Rational,
    #[serde(with = "serde_pq")]
    pub beta: Rational,
    pub binding: Vec<ConstraintId>,
}

/// A vertex as an affine function of theta: `alpha = a0 + a1 t`, `beta = b0 + b1 t`.
#[derive(Debug, Clone, PartialEq)]
struct AffineVertex {
    lines: (usize, usize),
    a0: Rational,
    a1: Rational,
    b0: Rational,
    b1: Rational,
}

impl AffineVertex {
    fn at(&self, t: &Rational) -> (Rational, Rational) {
        (&self.a0 + &self.a1 * t, &self.b0 + &self.b1 * t)
    }

    fn gamma(&self) -> (Rational, Rational) {
        (&self.a0 + &self.b0, &self.a1 + &self.b1)
    }

    /// Slack of `c` along this vertex, as `s0 + s1 t`.
    fn slack(&self, c: &Constraint) -> (Rational, Rational) {
        (
            &c.c0 - &c.a * &self.a0 - &c.b * &self.b0,
            &c.c1 - &c.a * &self.a1 - &c.b * &self.b1,
        )
    }
}

fn vertices(cons: &[Constraint]) -> Vec<AffineVertex> {
    let mut out = Vec::new();
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            let (ci, cj) = (&cons[i], &cons[j]);
            let det = &ci.a * &cj.b - &cj.a * &ci.b;
            if det.is_zero() {
                continue;
            }
            // Cramer's rule, separately for the constant and the theta part of the rhs
            out.push(AffineVertex {
                lines: (i, j),
                a0: (&ci.c0 * &cj.b - &cj.c0 * &ci.b) / &det,
                a1: (&ci.c1 * &cj.b - &cj.c1 * &ci.b) / &det,
                b0: (&ci.a * &cj.c0 - &cj.a * &ci.c0) / &det,
                b1: (&ci.a * &cj.c1 - &cj.a * &ci.c1) / &det,
            });
        }
    }
    out
}

fn optimum_at(cons: &[Constraint], verts: &[AffineVertex], theta: &Rational) -> Option<(usize, LevelResult)> {
    let mut best: Option<(usize, Rational, Rational, Rational)> = None;
    for (idx, v) in verts.iter().enumerate() {
        let (alpha, beta) = v.at(theta);
        if cons.iter().any(|c| c.slack(&alpha, &beta, theta).is_negative()) {
            continue;
        }
        let gamma = &alpha + &beta;
        let better = match &best {
            None => true,
            Some((_, g, a, _)) => gamma > *g || (gamma == *g && alpha > *a),
        };
        if better {
            best = Some((idx, gamma, alpha, beta));
        }
    }
    best.map(|(idx, gamma, alpha, beta)| {
        let mut binding: Vec<ConstraintId> = cons
            .iter()
            .filter(|c| c.slack(&alpha, &beta, theta).is_zero())
            .map(|c| c.id)
            .collect();
        binding.sort();
        binding.dedup();
        (idx, LevelResult { gamma, alpha, beta, binding })
    })
}

fn check_problem(p: &LevelProblem) -> Result<()> {
    if p.pair.is_seed() {
        return Err(crate::error::domain("the level program excludes the seed pair"));
    }
    if !(p.theta.is_positive() && p.theta < Rational::one()) {
        return Err(crate::error::domain("theta must lie in (0, 1)"));
    }
    Ok(())
}

/// Exact optimum by vertex enumeration. `Err(Error::Infeasible)` when empty.
pub fn level_max_gamma(p: &LevelProblem) -> Result<LevelResult> {
    check_problem(p)?;
    let cons = constraints(&p.pair, p.variant, Some(p.family));
    let verts = vertices(&cons);
    optimum_at(&cons, &verts, &p.theta).map(|(_, r)| r).ok_or(Error::Infeasible)
}

/// Slack of every constraint at `(alpha, beta)`, in exact rationals.
pub fn constraint_slacks(p: &LevelProblem, alpha: &Rational, beta: &Rational) -> Vec<(ConstraintId, Rational)> {
    constraints(&p.pair, p.variant, Some(p.family))
        .iter()
        .map(|c| (c.id, c.slack(alpha, beta, &p.theta)))
        .collect()
}

/// Theta values in `(lo, hi)` where the optimal basis may change.
fn breakpoints(cons: &[Constraint], verts: &[AffineVertex], lo: &Rational, hi: &Rational) -> Vec<Rational> {
    let mut pts = vec![lo.clone(), hi.clone()];
    let mut push_root = |s0: Rational, s1: Rational| {
        if !s1.is_zero() {
            let t = -s0 / s1;
            if &t > lo && &t < hi {
                pts.push(t);
            }
        }
    };
    for v in verts {
        for c in cons {
            let (s0, s1) = v.slack(c);
            push_root(s0, s1);
        }
    }
    for (i, v) in verts.iter().enumerate() {
        let (g0, g1) = v.gamma();
        for w in &verts[i + 1..] {
            let (h0, h1) = w.gamma();
            push_root(&g0 - h0, &g1 - h1);
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// `gamma = c0 + c1 theta` on `[from, to]`, the vertex formed by `basis`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaPiece {
    #[serde(with = "serde_pq")]
    pub from: Rational,
    #[serde(with = "serde_pq")]
    pub to: Rational,
    #[serde(with = "serde_pq")]
    pub c0: Rational,
    #[serde(with = "serde_pq")]
    pub c1: Rational,
    pub basis: (ConstraintId, ConstraintId),
}

impl GammaPiece {
    pub fn eval(&self, theta: &Rational) -> Rational {
        &self.c0 + &self.c1 * theta
    }
}

/// Optimal value of the program as a piecewise affine function of theta on
/// `[lo, hi]`. Infeasible stretches are omitted.
pub fn gamma_pieces(
    pair: &ExponentTriple,
    variant: LpVariant,
    family: Family,
    lo: &Rational,
    hi: &Rational,
) -> Vec<GammaPiece> {
    let cons = constraints(pair, variant, Some(family));
    let verts = vertices(&cons);
    let pts = breakpoints(&cons, &verts, lo, hi);
    let mut out: Vec<GammaPiece> = Vec::new();
    for w in pts.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let Some((idx, _)) = optimum_at(&cons, &verts, &mid) else { continue };
        let v = &verts[idx];
        let (c0, c1) = v.gamma();
        let basis = (cons[v.lines.0].id, cons[v.lines.1].id);
        match out.last_mut() {
            Some(last) if last.c0 == c0 && last.c1 == c1 && last.to == w[0] => last.to = w[1].clone(),
            _ => out.push(GammaPiece { from: w[0].clone(), to: w[1].clone(), c0, c1, basis }),
        }
    }
    out
}

/// Supremum of theta up to which the family condition holds at the optimum of
/// the program without it. Returns 1 if it never fails on `(0, 1)`.
pub fn validity_range(pair: &ExponentTriple, variant: LpVariant, family: Family) -> Result<Rational> {
    if pair.is_seed() {
        return Err(crate::error::domain("the level program excludes the seed pair"));
    }
    let cons = constraints(pair, variant, None);
    let fam = constraints(pair, variant, Some(family)).pop().expect("family constraint");
    let verts = vertices(&cons);
    let (lo, hi) = (Rational::zero(), Rational::one());
    let pts = breakpoints(&cons, &verts, &lo, &hi);
    for w in pts.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let Some((idx, _)) = optimum_at(&cons, &verts, &mid) else {
            return Ok(w[0].clone());
        };
        let (s0, s1) = verts[idx].slack(&fam);
        let at = |t: &Rational| &s0 + &s1 * t;
        if at(&w[0]).is_negative() {
            return Ok(w[0].clone());
        }
        if at(&w[1]).is_negative() {
            return Ok(-&s0 / &s1);
        }
    }
    Ok(hi)
}

/// `[1/2, 16/17)`, the domain of `gamma_of_theta`.
pub const GAMMA_DOMAIN: ((i64, i64), (i64, i64)) = ((1, 2), (16, 17));

fn gamma_domain() -> (Rational, Rational) {
    let ((a, b), (c, d)) = GAMMA_DOMAIN;
    (ratio(a, b), ratio(c, d))
}

fn curve_pairs() -> Vec<(ProcessWord, ExponentTriple, Rational)> {
    ["A", "A2", "A3"]
        .iter()
        .map(|w| {
            let word = ProcessWord::parse(w).expect("literal word");
            let pair = word.apply(&ExponentTriple::seed());
            let v = validity_range(&pair, LpVariant::Tabulated, Family::Ak).expect("non-seed pair");
            (word, pair, v)
        })
        .collect()
}

fn best_level(theta: &Rational, inclusive: bool) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for (_, pair, valid) in curve_pairs() {
        let ok = if inclusive { theta <= &valid } else { theta < &valid };
        if !ok {
            continue;
        }
        let r = level_max_gamma(&LevelProblem::new(theta.clone(), pair, LpVariant::Tabulated, Family::Ak))?;
        if best.as_ref().is_none_or(|b| r.gamma > *b) {
            best = Some(r.gamma);
        }
    }
    best.ok_or(Error::Infeasible)
}

/// Best level over the pairs `A, A^2, A^3` applied to the seed, each used
/// only inside its validity range.
pub fn gamma_of_theta(theta: &Rational) -> Result<Rational> {
    let (lo, hi) = gamma_domain();
    if theta < &lo || theta >= &hi {
        return Err(crate::error::domain("gamma(theta) is defined for theta in [1/2, 16/17)"));
    }
    best_level(theta, false)
}

/// `lim_{t -> theta-} gamma(t)` for `theta` in `(1/2, 16/17]`.
pub fn gamma_left_limit(theta: &Rational) -> Result<Rational> {
    let (lo, hi) = gamma_domain();
    if theta <= &lo || theta > &hi {
        return Err(crate::error::domain("left limits are taken for theta in (1/2, 16/17]"));
    }
    best_level(theta, true)
}

/// `2 / gamma(theta)`.
pub fn bt_constant(theta: &Rational) -> Result<Rational> {
    Ok(int(2) / gamma_of_theta(theta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::word_on_seed;

    fn problem(theta: Rational, w: &str, variant: LpVariant) -> LevelProblem {
        LevelProblem::new(theta, word_on_seed(w).unwrap(), variant, Family::Ak)
    }

    #[test]
    fn half_level() {
        let r = level_max_gamma(&problem(half(), "A3", LpVariant::Tabulated)).unwrap();
        assert_eq!(r.gamma, ratio(3, 4));
        let r = level_max_gamma(&problem(half(), "A", LpVariant::Tabulated)).unwrap();
        assert_eq!(r.gamma, ratio(5, 7));
        assert_eq!((r.alpha.clone(), r.beta.clone()), (half(), ratio(3, 14)));
        assert!(r.binding.contains(&ConstraintId::AlphaTheta));
        assert!(r.binding.contains(&ConstraintId::Bilinear));
    }

    #[test]
    fn validity() {
        let v = |w: &str| validity_range(&word_on_seed(w).unwrap(), LpVariant::Tabulated, Family::Ak).unwrap();
        assert_eq!(v("A"), ratio(16, 17));
        assert_eq!(v("A2"), ratio(8, 9));
        assert_eq!(v("A3"), ratio(112, 131));
    }

    #[test]
    fn curve_labels() {
        assert_eq!(gamma_of_theta(&half()).unwrap(), ratio(3, 4));
        assert_eq!(gamma_of_theta(&ratio(64, 97)).unwrap(), ratio(101, 194));
        assert_eq!(gamma_of_theta(&ratio(32, 41)).unwrap(), ratio(29, 82));
        assert_eq!(gamma_left_limit(&ratio(16, 17)).unwrap(), ratio(5, 34));
        assert!(gamma_of_theta(&ratio(16, 17)).is_err());
        assert!(gamma_of_theta(&ratio(1, 3)).is_err());
        assert_eq!(bt_constant(&half()).unwrap(), ratio(8, 3));
        assert_eq!(bt_constant(&ratio(64, 97)).unwrap(), ratio(388, 101));
        assert_eq!(bt_constant(&ratio(32, 41)).unwrap(), ratio(164, 29));
    }

    #[test]
    fn pieces_are_the_tabulated_lines() {
        let (lo, hi) = (half(), ratio(16, 17));
        for (w, c0, c1) in [("A", (19, 14), (-18, 14)), ("A2", (86, 60), (-83, 60)), ("A3", (91, 62), (-89, 62))] {
            let pieces = gamma_pieces(&word_on_seed(w).unwrap(), LpVariant::Tabulated, Family::Ak, &lo, &hi);
            let first = &pieces[0];
            assert_eq!((first.c0.clone(), first.c1.clone()), (ratio(c0.0, c0.1), ratio(c1.0, c1.1)), "{w}");
        }
    }

    #[test]
    fn as_stated_differs() {
        let t = level_max_gamma(&problem(half(), "A3", LpVariant::AsStated)).unwrap();
        assert!(t.gamma < ratio(3, 4));
    }

    #[test]
    fn rejects_seed_and_range() {
        let p = LevelProblem::new(half(), ExponentTriple::seed(), LpVariant::Tabulated, Family::Ak);
        assert!(level_max_gamma(&p).is_err());
        assert!(level_max_gamma(&problem(int(1), "A", LpVariant::Tabulated)).is_err());
    }
}

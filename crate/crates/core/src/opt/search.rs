//! Branch-and-bound over process words.
//!
//! Triples are handled projectively: `(k, l)` is the point `(x : y : z)` with
//! `k = x/z`, `l = y/z`, on which the processes act linearly:
//!
//! ```text
//! A(x, y, z) = (x, x + y + z, 2x + 2z)
//! B(x, y, z) = (2y - z, 2x + z, 2z)
//! ```
//!
//! A word `w = L1 L2 ... Ld` therefore acts through the integer matrix
//! `M(L1) ... M(Ld)`, and every completion `w u` sends the seed somewhere inside
//! `M(w) . box`, where `box = [0, 1/2] x [1/2, 1]` is mapped into itself by both
//! letters. All objectives are linear-fractional in `(x, y, z)`, so their
//! extremes over `M(w) . box` sit at the images of the four corners.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::pairs::{ExponentTriple, Letter, ProcessWord};
use crate::rational::{serde_pq, Rational};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Minimise `k + l`.
    MinKappaPlusLambda,
    /// Maximise `(2 - k - 3l) / (6(k + 1))`.
    MaxDivisorLevel,
    /// Maximise `1/2 - (k + l)/2`.
    MaxSubconvexDelta,
}

impl Objective {
    pub fn parse(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rankin" | "min-kappa-plus-lambda" => Ok(Objective::MinKappaPlusLambda),
            "divisor" | "max-divisor-level" => Ok(Objective::MaxDivisorLevel),
            "subconvex" | "max-subconvex-delta" => Ok(Objective::MaxSubconvexDelta),
            _ => Err(Error::Parse(format!("unknown objective {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::MinKappaPlusLambda => "rankin",
            Objective::MaxDivisorLevel => "divisor",
            Objective::MaxSubconvexDelta => "subconvex",
        }
    }

    pub fn value(self, t: &ExponentTriple) -> Rational {
        match self {
            Objective::MinKappaPlusLambda => &t.kappa + &t.lambda,
            Objective::MaxDivisorLevel => super::divisor_level(t),
            Objective::MaxSubconvexDelta => super::subconvex_delta(t),
        }
    }

    /// `a` strictly better than `b`.
    pub fn improves(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Objective::MinKappaPlusLambda => a < b,
            _ => a > b,
        }
    }

    /// Score to maximise as `num . v / den . v`.
    fn score_form(self) -> ([i128; 3], [i128; 3]) {
        match self {
            Objective::MinKappaPlusLambda => ([-1, -1, 0], [0, 0, 1]),
            Objective::MaxDivisorLevel => ([-1, -3, 2], [6, 0, 6]),
            Objective::MaxSubconvexDelta => ([-1, -1, 1], [0, 0, 2]),
        }
    }

    fn from_score(self, s: Rational) -> Rational {
        match self {
            Objective::MinKappaPlusLambda => -s,
            _ => s,
        }
    }
}

type Mat = [[i128; 3]; 3];

const IDENTITY: Mat = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
const MAT_A: Mat = [[1, 0, 0], [1, 1, 1], [2, 0, 2]];
const MAT_B: Mat = [[0, 2, -1], [2, 0, 1], [0, 0, 2]];
const SEED: [i128; 3] = [1, 1, 2];
const CORNERS: [[i128; 3]; 4] = [[0, 1, 2], [0, 1, 1], [1, 1, 2], [1, 2, 2]];

fn letter_mat(l: Letter) -> &'static Mat {
    match l {
        Letter::A => &MAT_A,
        Letter::B => &MAT_B,
    }
}

fn mat_mul(p: &Mat, q: &Mat) -> Option<Mat> {
    let mut out = [[0i128; 3]; 3];
    let mut g = 0i128;
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0i128;
            for k in 0..3 {
                s = s.checked_add(p[i][k].checked_mul(q[k][j])?)?;
            }
            out[i][j] = s;
            g = gcd_i128(g, s);
        }
    }
    if g > 1 {
        out.iter_mut().flatten().for_each(|e| *e /= g);
    }
    Some(out)
}

fn mat_vec(p: &Mat, v: &[i128; 3]) -> Option<[i128; 3]> {
    let mut out = [0i128; 3];
    for i in 0..3 {
        let mut s = 0i128;
        for k in 0..3 {
            s = s.checked_add(p[i][k].checked_mul(v[k])?)?;
        }
        out[i] = s;
    }
    Some(out)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `n / d` with `d > 0`, compared without building big rationals.
#[derive(Debug, Clone, Copy)]
struct Frac {
    n: i128,
    d: i128,
}

impl Frac {
    fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.n), BigInt::from(self.d))
    }

    fn cmp(&self, o: &Frac) -> Ordering {
        match (self.n.checked_mul(o.d), o.n.checked_mul(self.d)) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => (BigInt::from(self.n) * o.d).cmp(&(BigInt::from(o.n) * self.d)),
        }
    }
}

fn dot(a: &[i128; 3], v: &[i128; 3]) -> Option<i128> {
    a[0].checked_mul(v[0])?
        .checked_add(a[1].checked_mul(v[1])?)?
        .checked_add(a[2].checked_mul(v[2])?)
}

fn score(form: &([i128; 3], [i128; 3]), v: &[i128; 3]) -> Option<Frac> {
    let (mut n, mut d) = (dot(&form.0, v)?, dot(&form.1, v)?);
    if d < 0 {
        (n, d) = (-n, -d);
    }
    debug_assert!(d > 0);
    Some(Frac { n, d })
}

fn box_bound(form: &([i128; 3], [i128; 3]), p: &Mat) -> Option<Frac> {
    let mut best: Option<Frac> = None;
    for c in &CORNERS {
        let s = score(form, &mat_vec(p, c)?)?;
        if best.is_none_or(|b| s.cmp(&b) == Ordering::Greater) {
            best = Some(s);
        }
    }
    best
}

fn word_mat(w: &ProcessWord) -> Option<Mat> {
    w.letters().iter().try_fold(IDENTITY, |acc, &l| mat_mul(&acc, letter_mat(l)))
}

/// Best objective value reachable from any extension `w u` of `w`, in the
/// objective's own units (a lower bound for `rankin`, an upper bound otherwise).
pub fn word_bound(obj: Objective, w: &ProcessWord) -> Option<Rational> {
    let form = obj.score_form();
    let s = box_bound(&form, &word_mat(w)?)?;
    Some(obj.from_score(s.to_rational()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrunedNode {
    pub word: ProcessWord,
    #[serde(with = "serde_pq")]
    pub bound: Rational,
    #[serde(with = "serde_pq")]
    pub incumbent: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub objective: Objective,
    pub best_word: ProcessWord,
    #[serde(with = "serde_pq")]
    pub best_value: Rational,
    pub best_triple: ExponentTriple,
    pub nodes_expanded: u64,
    pub nodes_pruned: u64,
    pub depth_cap: usize,
    /// `false` if the time cap stopped the search early.
    pub exhaustive: bool,
    pub elapsed_ms: u64,
    pub pruned_sample: Vec<PrunedNode>,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub time_cap: Duration,
    pub sample_size: usize,
    pub sample_seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { time_cap: Duration::from_secs(60), sample_size: 64, sample_seed: 0x5eed }
    }
}

struct State {
    form: ([i128; 3], [i128; 3]),
    cap: usize,
    best: Frac,
    best_word: Vec<Letter>,
    expanded: u64,
    pruned: u64,
    start: Instant,
    time_cap: Duration,
    timed_out: bool,
    sample: Vec<(Vec<Letter>, Frac, Frac)>,
    sample_size: usize,
    rng: ChaCha8Rng,
}

impl State {
    fn offer(&mut self, word: &[Letter], v: Frac) {
        let better = match v.cmp(&self.best) {
            Ordering::Greater => true,
            Ordering::Equal => (word.len(), word) < (self.best_word.len(), &self.best_word[..]),
            Ordering::Less => false,
        };
        if better {
            self.best = v;
            self.best_word = word.to_vec();
        }
    }

    fn record_prune(&mut self, word: &[Letter], bound: Frac) {
        self.pruned += 1;
        // reservoir sampling
        let entry = (word.to_vec(), bound, self.best);
        if self.sample.len() < self.sample_size {
            self.sample.push(entry);
        } else if self.sample_size > 0 {
            let j = self.rng.gen_range(0..self.pruned);
            if (j as usize) < self.sample_size {
                self.sample[j as usize] = entry;
            }
        }
    }

    fn visit(&mut self, p: &Mat, word: &mut Vec<Letter>) {
        self.expanded += 1;
        if self.expanded % 4096 == 0 && self.start.elapsed() > self.time_cap {
            self.timed_out = true;
        }
        if self.timed_out {
            return;
        }
        if let Some(v) = mat_vec(p, &SEED).and_then(|u| score(&self.form, &u)) {
            self.offer(word, v);
        }
        if word.len() >= self.cap {
            return;
        }
        let mut kids: Vec<(Letter, Mat, Frac)> = Vec::with_capacity(2);
        for l in [Letter::A, Letter::B] {
            if l == Letter::B && word.last() == Some(&Letter::B) {
                continue;
            }
            let Some(m) = mat_mul(p, letter_mat(l)) else { continue };
            let Some(b) = box_bound(&self.form, &m) else { continue };
            kids.push((l, m, b));
        }
        // more promising child first
        kids.sort_by(|a, b| b.2.cmp(&a.2));
        for (l, m, b) in kids {
            word.push(l);
            if b.cmp(&self.best) == Ordering::Less {
                self.record_prune(word, b);
            } else {
                self.visit(&m, word);
            }
            word.pop();
            if self.timed_out {
                return;
            }
        }
    }
}

/// Searches BB-free words of length at most `depth_cap` with default options.
pub fn optimize_word(obj: Objective, depth_cap: usize, time_cap: Duration) -> SearchReport {
    optimize_word_with(obj, depth_cap, SearchOptions { time_cap, ..SearchOptions::default() })
}

pub fn optimize_word_with(obj: Objective, depth_cap: usize, opts: SearchOptions) -> SearchReport {
    let form = obj.score_form();
    let seed_score = score(&form, &SEED).expect("seed score");
    let mut st = State {
        form,
        cap: depth_cap,
        best: seed_score,
        best_word: Vec::new(),
        expanded: 0,
        pruned: 0,
        start: Instant::now(),
        time_cap: opts.time_cap,
        timed_out: false,
        sample: Vec::new(),
        sample_size: opts.sample_size,
        rng: ChaCha8Rng::seed_from_u64(opts.sample_seed),
    };
    let mut word = Vec::with_capacity(depth_cap);
    st.visit(&IDENTITY, &mut word);
    let best_word = ProcessWord::from_letters(st.best_word.clone());
    let best_triple = best_word.apply(&ExponentTriple::seed());
    let best_value = obj.value(&best_triple);
    debug_assert_eq!(best_value, obj.from_score(st.best.to_rational()));
    SearchReport {
        objective: obj,
        best_word,
        best_value,
        best_triple,
        nodes_expanded: st.expanded,
        nodes_pruned: st.pruned,
        depth_cap,
        exhaustive: !st.timed_out,
        elapsed_ms: st.start.elapsed().as_millis() as u64,
        pruned_sample: st
            .sample
            .into_iter()
            .map(|(w, b, inc)| PrunedNode {
                word: ProcessWord::from_letters(w),
                bound: obj.from_score(b.to_rational()),
                incumbent: obj.from_score(inc.to_rational()),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, to_f64};

    #[test]
    fn matrices_match_exact_maps() {
        for w in ProcessWord::all_of_length(6, true) {
            let m = word_mat(&w).unwrap();
            let u = mat_vec(&m, &SEED).unwrap();
            let t = w.apply(&ExponentTriple::seed());
            assert_eq!(Rational::new(u[0].into(), u[2].into()), t.kappa, "{w}");
            assert_eq!(Rational::new(u[1].into(), u[2].into()), t.lambda, "{w}");
        }
    }

    #[test]
    fn depth_zero_is_seed() {
        let r = optimize_word(Objective::MinKappaPlusLambda, 0, Duration::from_secs(1));
        assert!(r.best_word.is_empty());
        assert_eq!(r.best_value, ratio(1, 1));
    }

    #[test]
    fn divisor_search_finds_long_word() {
        let r = optimize_word(Objective::MaxDivisorLevel, 14, Duration::from_secs(60));
        assert!(r.best_value >= ratio(55, 12756), "{}", r.best_value);
        assert!(r.exhaustive);
    }

    #[test]
    fn rankin_shallow() {
        let r = optimize_word(Objective::MinKappaPlusLambda, 12, Duration::from_secs(60));
        assert!(to_f64(&r.best_value) < 0.83);
        assert_eq!(Objective::MinKappaPlusLambda.value(&r.best_triple), r.best_value);
        for node in &r.pruned_sample {
            assert!(Objective::MinKappaPlusLambda.improves(&node.incumbent, &node.bound));
        }
    }
}

//! Periodic auto- and cross-correlation and the family correlation Cor(S).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitSeq;
use crate::curve::serre_constant;
use crate::error::{Error, Result};

/// `A_u(s) = sum_j (-1)^(s_j + s_{j+u})` for `1 <= u <= N-1`.
pub fn autocorrelation(s: &BitSeq, u: usize) -> Result<i64> {
    if u == 0 || u >= s.len() {
        return Err(Error::DelayOutOfRange { delay: u, len: s.len() });
    }
    Ok(signed_agreement(s, &s.rotated(u)))
}

/// `C_t(a, b) = sum_j (-1)^(a_j + b_{j+t})` for `0 <= t <= N-1`.
pub fn crosscorrelation(a: &BitSeq, b: &BitSeq, t: usize) -> Result<i64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if t >= a.len() {
        return Err(Error::DelayOutOfRange { delay: t, len: a.len() });
    }
    Ok(signed_agreement(a, &b.rotated(t)))
}

fn signed_agreement(a: &BitSeq, b: &BitSeq) -> i64 {
    a.len() as i64 - 2 * a.xor_count(b) as i64
}

/// `(2d + 1) floor(2 sqrt q) + |t|`
pub fn corr_bound(q: u64, t: i64, d: u32) -> u64 {
    (2 * d as u64 + 1) * serre_constant(q) + t.unsigned_abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AutoWitness {
    /// 1-based sequence index
    pub i: usize,
    pub u: usize,
    pub value: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CrossWitness {
    pub i: usize,
    pub j: usize,
    pub u: usize,
    pub value: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HistogramBin {
    pub value: i64,
    pub count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalysisMode {
    Exhaustive,
    Sampled { probes: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub mode: String,
    /// sampled results only bound Cor(S) from below
    pub lower_estimate: bool,
    pub probes: Option<u64>,
    pub seed: Option<u64>,
    pub length: usize,
    pub size: usize,
    pub max_auto: Option<i64>,
    pub auto_witness: Option<AutoWitness>,
    pub max_cross: Option<i64>,
    pub cross_witness: Option<CrossWitness>,
    pub cor: i64,
    pub bound: u64,
    pub within_bound: bool,
    pub parity_ok: bool,
    /// signed values over all ordered pairs i != j and delays, plus autocorrelations
    pub histogram: Vec<HistogramBin>,
}

/// Running maxima and a dense histogram indexed by `value + N`. Within one
/// worker indices are visited in increasing order, so a strict comparison
/// keeps the smallest index tuple; [`Extremes::merge`] applies the same rule
/// across workers, making the result independent of how the work was split.
#[derive(Clone, Debug)]
struct Extremes {
    auto: Option<AutoWitness>,
    cross: Option<CrossWitness>,
    auto_abs: i64,
    cross_abs: i64,
    hist: Vec<u64>,
    len: i64,
}

fn prefer<W: Copy + Ord>(cur: Option<W>, new: W, abs: impl Fn(&W) -> i64) -> Option<W> {
    match cur {
        None => Some(new),
        Some(c) => {
            let (ac, an) = (abs(&c), abs(&new));
            if an > ac || (an == ac && new < c) {
                Some(new)
            } else {
                Some(c)
            }
        }
    }
}

impl Extremes {
    fn new(len: usize) -> Self {
        Extremes {
            auto: None,
            cross: None,
            auto_abs: -1,
            cross_abs: -1,
            hist: vec![0; 2 * len + 1],
            len: len as i64,
        }
    }

    #[inline]
    fn auto(&mut self, i: usize, u: usize, value: i64) {
        self.hist[(value + self.len) as usize] += 1;
        if value.abs() > self.auto_abs {
            self.auto_abs = value.abs();
            self.auto = Some(AutoWitness { i, u, value });
        }
    }

    #[inline]
    fn cross(&mut self, i: usize, j: usize, u: usize, value: i64, weight: u64) {
        self.hist[(value + self.len) as usize] += weight;
        if value.abs() > self.cross_abs {
            self.cross_abs = value.abs();
            self.cross = Some(CrossWitness { i, j, u, value });
        }
    }

    fn merge(mut self, other: Extremes) -> Extremes {
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            *a += b;
        }
        if let Some(a) = other.auto {
            self.auto = prefer(self.auto, a, |w| w.value.abs());
            self.auto_abs = self.auto_abs.max(other.auto_abs);
        }
        if let Some(c) = other.cross {
            self.cross = prefer(self.cross, c, |w| w.value.abs());
            self.cross_abs = self.cross_abs.max(other.cross_abs);
        }
        self
    }

    fn histogram(&self) -> Vec<HistogramBin> {
        self.hist
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &count)| HistogramBin {
                value: k as i64 - self.len,
                count,
            })
            .collect()
    }
}

/// Rows and all their rotations in contiguous word arrays.
struct Packed {
    len: usize,
    words: usize,
    rows: Vec<u64>,
    /// row j rotated by u at `(j * len + u) * words`
    rotations: Vec<u64>,
}

impl Packed {
    fn new(rows: &[BitSeq], with_rotations: bool) -> Self {
        let len = rows.first().map_or(0, |r| r.len());
        let words = len.div_ceil(64);
        let flat = rows.iter().flat_map(|r| r.words().iter().copied()).collect();
        let rotations = if with_rotations {
            rows.par_iter()
                .flat_map_iter(|r| (0..len).flat_map(move |u| r.rotated(u).words().to_vec()))
                .collect()
        } else {
            Vec::new()
        };
        Packed {
            len,
            words,
            rows: flat,
            rotations,
        }
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    /// all `len` rotations of row j, back to back
    #[inline]
    fn rotations_of(&self, j: usize) -> &[u64] {
        let stride = self.len * self.words;
        &self.rotations[j * stride..(j + 1) * stride]
    }

    #[inline]
    fn rotation(&self, j: usize, u: usize) -> &[u64] {
        let at = (j * self.len + u) * self.words;
        &self.rotations[at..at + self.words]
    }
}

#[inline]
fn agreement(a: &[u64], b: &[u64], len: usize) -> i64 {
    let h: u32 = a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum();
    len as i64 - 2 * h as i64
}

/// Word operations per millisecond assumed when converting a time budget
/// into a work limit.
pub const WORD_OPS_PER_MS: u64 = 200_000;

/// Word-level XOR-popcounts for an exhaustive sweep of `m` rows of length `n`.
pub fn exhaustive_work(m: u64, n: u64) -> u64 {
    let words = n.div_ceil(64);
    (m * m.saturating_sub(1) / 2 + m) * n * words
}

/// Exhaustive analysis runs for q <= 256 at d = 2 and q <= 64 at d = 3
/// (other d: no more work than q = 64, d = 3). A millisecond budget, when
/// given, replaces this rule by `work / WORD_OPS_PER_MS <= budget`.
pub fn check_exhaustive_budget(q: u64, d: u32, m: u64, n: u64, budget_ms: Option<u64>) -> Result<()> {
    let work = exhaustive_work(m, n);
    let ok = match budget_ms {
        Some(ms) => work / WORD_OPS_PER_MS <= ms,
        None => match d {
            2 => q <= 256,
            3 => q <= 64,
            _ => work <= exhaustive_work(64 * 64 - 1, 64 + 1 + 16),
        },
    };
    if ok {
        Ok(())
    } else {
        Err(Error::BudgetExceeded(format!(
            "about {} word operations for M={m}, N={n} (q={q}, d={d}); use sampled mode",
            work
        )))
    }
}

fn all_autocorrelations(rows: &[BitSeq]) -> Extremes {
    let len = rows.first().map_or(0, |r| r.len());
    rows.par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut e = Extremes::new(len);
            for u in 1..len {
                e.auto(i + 1, u, agreement(s.words(), s.rotated(u).words(), len));
            }
            e
        })
        .reduce(|| Extremes::new(len), Extremes::merge)
}

fn exhaustive(rows: &[BitSeq]) -> Extremes {
    let p = Packed::new(rows, true);
    let (len, m) = (p.len, rows.len());
    let cross = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut e = Extremes::new(len);
            let a = p.row(i);
            for j in i + 1..m {
                // C_u(s_i, s_j) = C_{N-u}(s_j, s_i) covers the mirrored pair
                for (u, r) in p.rotations_of(j).chunks_exact(p.words).enumerate() {
                    e.cross(i + 1, j + 1, u, agreement(a, r, len), 2);
                }
            }
            for u in 1..len {
                e.auto(i + 1, u, agreement(a, p.rotation(i, u), len));
            }
            e
        })
        .reduce(|| Extremes::new(len), Extremes::merge);
    cross
}

fn sampled(rows: &[BitSeq], probes: u64, seed: u64) -> Extremes {
    let len = rows.first().map_or(0, |r| r.len());
    let m = rows.len();
    let e = all_autocorrelations(rows);
    if m < 2 {
        return e;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<(usize, usize, usize)> = (0..probes)
        .map(|_| {
            let i = rng.random_range(0..m);
            let mut j = rng.random_range(0..m - 1);
            if j >= i {
                j += 1;
            }
            (i, j, rng.random_range(0..len))
        })
        .collect();
    let cross = triples
        .par_chunks(4096)
        .map(|chunk| {
            let mut e = Extremes::new(len);
            for &(i, j, u) in chunk {
                let v = signed_agreement(&rows[i], &rows[j].rotated(u));
                let before = e.cross;
                e.cross(i + 1, j + 1, u, v, 1);
                // probes arrive in random order; keep the smallest tuple on ties
                if let (Some(b), Some(now)) = (before, e.cross) {
                    e.cross = prefer(Some(b), now, |w| w.value.abs());
                }
            }
            e
        })
        .reduce(|| Extremes::new(len), Extremes::merge);
    e.merge(cross)
}

/// Cor(S) for the rows of a family with parameters `(q, t, d)`.
pub fn family_correlation(
    rows: &[BitSeq],
    q: u64,
    t: i64,
    d: u32,
    mode: AnalysisMode,
    budget_ms: Option<u64>,
) -> Result<CorrelationReport> {
    let len = rows.first().map_or(0, |r| r.len());
    if let Some(r) = rows.iter().find(|r| r.len() != len) {
        return Err(Error::LengthMismatch(len, r.len()));
    }
    let e = match mode {
        AnalysisMode::Exhaustive => {
            check_exhaustive_budget(q, d, rows.len() as u64, len as u64, budget_ms)?;
            exhaustive(rows)
        }
        AnalysisMode::Sampled { probes, seed } => sampled(rows, probes, seed),
    };
    let histogram = e.histogram();
    let max_auto = e.auto.map(|w| w.value.abs());
    let max_cross = e.cross.map(|w| w.value.abs());
    let cor = max_auto.unwrap_or(0).max(max_cross.unwrap_or(0));
    let bound = corr_bound(q, t, d);
    let (mode_name, probes, seed) = match mode {
        AnalysisMode::Exhaustive => ("exhaustive", None, None),
        AnalysisMode::Sampled { probes, seed } => ("sampled", Some(probes), Some(seed)),
    };
    Ok(CorrelationReport {
        mode: mode_name.into(),
        lower_estimate: matches!(mode, AnalysisMode::Sampled { .. }),
        probes,
        seed,
        length: len,
        size: rows.len(),
        max_auto,
        auto_witness: e.auto,
        max_cross,
        cross_witness: e.cross,
        cor,
        bound,
        within_bound: cor as u64 <= bound,
        parity_ok: histogram.iter().all(|b| (b.value - len as i64) % 2 == 0),
        histogram,
    })
}

//! End-to-end commands: generate, analyze, table reproduction, place counts
//! and the admissible parameter list.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{
    counting_identity_check, family_correlation, family_linear_complexity, AnalysisMode,
    CorrelationReport, CountingReport, LinearComplexityReport,
};
use crate::curve::{admissible_t, gcd, search_cyclic_curve, CurveSearchSpec, PointJson};
use crate::error::{Error, Result};
use crate::field::make_ext;
use crate::format::{family_from_bytes, family_to_bytes, to_sorted_json_pretty};
use crate::place::{count_places_formula, enumerate_places_deg_d, PlaceCountReport, MAX_PLACE_FIELD_BITS};
use crate::sequence::{Construction, Provenance, SequenceFamily};

pub const BUDGET_ENV: &str = "ECSEQ_BUDGET_MS";
pub const DEFAULT_SEED: u64 = 0;
/// Probe count used when a table row falls back to sampling.
pub const DEFAULT_PROBES: u64 = 1_000_000;
/// Sampled (sequence, delay) pairs for the counting identity on long families.
pub const IDENTITY_SAMPLES: u64 = 10_000;

/// Exhaustive-mode budget from the environment, if set.
pub fn budget_from_env() -> Result<Option<u64>> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Unsupported(format!("{BUDGET_ENV} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerateSummary {
    pub n: u32,
    pub t: i64,
    pub d: u32,
    pub q: u64,
    #[serde(rename = "N")]
    pub length: usize,
    #[serde(rename = "M")]
    pub size: usize,
    pub curve: crate::curve::CurveJson,
    pub generator: PointJson,
    pub place_dpoly: Vec<String>,
    pub digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Steps from curve search to the serialized family file.
pub fn cmd_generate(n: u32, t: i64, d: u32) -> Result<(Vec<u8>, GenerateSummary)> {
    let c = Construction::build(n, t, d)?;
    let family = c.family()?;
    let bytes = family_to_bytes(&family)?;
    let p = c.provenance();
    let summary = GenerateSummary {
        n,
        t,
        d,
        q: family.q(),
        length: family.len(),
        size: family.size(),
        curve: p.curve,
        generator: p.generator,
        place_dpoly: p.place.dpoly,
        digest: sha256_hex(&bytes),
    };
    Ok((bytes, summary))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub n: u32,
    pub t: i64,
    pub d: u32,
    pub q: u64,
    #[serde(rename = "N")]
    pub length: usize,
    #[serde(rename = "M")]
    pub size: usize,
    pub mode: String,
    pub probes: Option<u64>,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertions {
    pub correlation_bound: bool,
    pub linear_complexity_bound: bool,
    pub counting_identity: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisBundle {
    pub config: ConfigEcho,
    pub family_digest: String,
    pub provenance: Option<Provenance>,
    pub correlation: CorrelationReport,
    pub linear_complexity: LinearComplexityReport,
    pub counting_identity: Option<CountingReport>,
    pub assertions: Assertions,
    pub timings_ms: BTreeMap<String, f64>,
}

impl AnalysisBundle {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let a = &self.assertions;
        if !a.correlation_bound {
            v.push(format!(
                "correlation {} exceeds the bound {}",
                self.correlation.cor, self.correlation.bound
            ));
        }
        if !a.linear_complexity_bound {
            v.push(format!(
                "minimum linear complexity {} is below the bound {:.4}",
                self.linear_complexity.lc_min, self.linear_complexity.bound_approx
            ));
        }
        if a.counting_identity == Some(false) {
            v.push("counting identity failed".into());
        }
        v
    }

    pub fn to_json(&self) -> Result<String> {
        to_sorted_json_pretty(self)
    }

    /// The report with timings cleared, for comparisons across runs.
    pub fn to_json_without_timings(&self) -> Result<String> {
        let mut b = self.clone();
        b.timings_ms.clear();
        b.to_json()
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Analysis of a family file: correlation, linear complexity and, when the
/// provenance is present, the counting identity.
pub fn cmd_analyze(bytes: &[u8], mode: AnalysisMode, seed: u64, budget_ms: Option<u64>) -> Result<AnalysisBundle> {
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let family = family_from_bytes(bytes)?;
    timings.insert("parse".to_string(), elapsed_ms(start));
    analyze_family(&family, sha256_hex(bytes), mode, seed, budget_ms, timings)
}

pub fn analyze_family(
    family: &SequenceFamily,
    digest: String,
    mode: AnalysisMode,
    seed: u64,
    budget_ms: Option<u64>,
    mut timings: BTreeMap<String, f64>,
) -> Result<AnalysisBundle> {
    if family.rows.iter().any(|r| r.is_zero()) {
        return Err(Error::ZeroSequence);
    }
    let (q, t, d) = (family.q(), family.t, family.d);

    let start = Instant::now();
    let correlation = family_correlation(&family.rows, q, t, d, mode, budget_ms)?;
    timings.insert("correlation".to_string(), elapsed_ms(start));

    let start = Instant::now();
    let linear_complexity = family_linear_complexity(&family.rows, q, t, d)?;
    timings.insert("linear_complexity".to_string(), elapsed_ms(start));

    let counting_identity = match family.provenance {
        Some(_) => {
            let start = Instant::now();
            let r = counting_identity_check(&family.rows, q, t, d, IDENTITY_SAMPLES, seed)?;
            timings.insert("counting_identity".to_string(), elapsed_ms(start));
            Some(r)
        }
        None => None,
    };

    let (mode_name, probes) = match mode {
        AnalysisMode::Exhaustive => ("exhaustive", None),
        AnalysisMode::Sampled { probes, .. } => ("sampled", Some(probes)),
    };
    Ok(AnalysisBundle {
        config: ConfigEcho {
            n: family.n,
            t,
            d,
            q,
            length: family.len(),
            size: family.size(),
            mode: mode_name.into(),
            probes,
            seed,
        },
        family_digest: digest,
        provenance: family.provenance.clone(),
        assertions: Assertions {
            correlation_bound: correlation.within_bound,
            linear_complexity_bound: linear_complexity.satisfied,
            counting_identity: counting_identity.as_ref().map(|c| c.passed),
        },
        correlation,
        linear_complexity,
        counting_identity,
        timings_ms: timings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PublishedRow {
    pub length: u64,
    pub size: u64,
    pub max_correlation: u64,
}

/// Length-q families (t = -1, d = 3), indexed by n = 6..=12.
pub const TABLE2_REFERENCE: [(u32, PublishedRow); 7] = [
    (6, PublishedRow { length: 64, size: 63, max_correlation: 38 }),
    (7, PublishedRow { length: 128, size: 127, max_correlation: 60 }),
    (8, PublishedRow { length: 256, size: 255, max_correlation: 86 }),
    (9, PublishedRow { length: 512, size: 511, max_correlation: 124 }),
    (10, PublishedRow { length: 1024, size: 31, max_correlation: 184 }),
    (11, PublishedRow { length: 2048, size: 63, max_correlation: 276 }),
    (12, PublishedRow { length: 4096, size: 127, max_correlation: 416 }),
];

/// Odd-length families (t = sqrt q or sqrt 2q, d = 2), indexed by n = 6..=10.
pub const TABLE3_REFERENCE: [(u32, PublishedRow); 5] = [
    (6, PublishedRow { length: 73, size: 63, max_correlation: 39 }),
    (7, PublishedRow { length: 145, size: 127, max_correlation: 57 }),
    (8, PublishedRow { length: 273, size: 255, max_correlation: 89 }),
    (9, PublishedRow { length: 545, size: 511, max_correlation: 137 }),
    (10, PublishedRow { length: 1057, size: 1023, max_correlation: 191 }),
];

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub n: u32,
    pub q: u64,
    pub t: i64,
    pub d: u32,
    #[serde(rename = "N")]
    pub length: usize,
    #[serde(rename = "M")]
    pub size: usize,
    pub observed_cor: i64,
    pub mode: String,
    pub lower_estimate: bool,
    pub bound: u64,
    pub within_bound: bool,
    pub reference: Option<PublishedRow>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: u32,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{:>6} {:>6} {:>7} {:>9} {:>6} {:>6} {:>10} {:>9}  note\n",
            "q", "N", "M", "Cor", "bound", "ok", "ref N/M", "ref Cor"
        );
        for r in &self.rows {
            let cor = if r.lower_estimate {
                format!(">={}", r.observed_cor)
            } else {
                r.observed_cor.to_string()
            };
            let (rl, rc) = match r.reference {
                Some(p) => (format!("{}/{}", p.length, p.size), p.max_correlation.to_string()),
                None => ("-".into(), "-".into()),
            };
            out.push_str(&format!(
                "{:>6} {:>6} {:>7} {:>9} {:>6} {:>6} {:>10} {:>9}  {}\n",
                r.q,
                r.length,
                r.size,
                cor,
                r.bound,
                if r.within_bound { "yes" } else { "NO" },
                rl,
                rc,
                r.note.as_deref().unwrap_or("")
            ));
        }
        out
    }

    pub fn all_within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.within_bound)
    }
}

pub fn table_params(table: u32, n: u32) -> Result<(i64, u32)> {
    match table {
        2 => Ok((-1, 3)),
        3 => {
            let t = if n.is_multiple_of(2) {
                1i64 << (n / 2)
            } else {
                1i64 << n.div_ceil(2)
            };
            Ok((t, 2))
        }
        _ => Err(Error::Unsupported(format!("no table {table}; choose 2 or 3"))),
    }
}

/// Rows reproduced when no range is given: the desk-scale part of either table.
pub const DEFAULT_TABLE_RANGE: (u32, u32) = (6, 8);

/// Runs each row through the whole pipeline. Rows within the exhaustive
/// budget are analyzed exactly, the rest by sampling.
pub fn cmd_reproduce_table(table: u32, n_from: u32, n_to: u32, seed: u64, budget_ms: Option<u64>) -> Result<TableReport> {
    let reference: &[(u32, PublishedRow)] = match table {
        2 => &TABLE2_REFERENCE,
        3 => &TABLE3_REFERENCE,
        _ => return Err(Error::Unsupported(format!("no table {table}; choose 2 or 3"))),
    };
    let mut rows = Vec::new();
    for n in n_from..=n_to {
        let (t, d) = table_params(table, n)?;
        let c = Construction::build(n, t, d)?;
        let family = c.family()?;
        let q = family.q();
        let mode = if crate::analysis::correlation::check_exhaustive_budget(
            q,
            d,
            family.size() as u64,
            family.len() as u64,
            budget_ms,
        )
        .is_ok()
        {
            AnalysisMode::Exhaustive
        } else {
            AnalysisMode::Sampled {
                probes: DEFAULT_PROBES,
                seed,
            }
        };
        let report = family_correlation(&family.rows, q, t, d, mode, budget_ms)?;
        let published = reference.iter().find(|(rn, _)| *rn == n).map(|&(_, p)| p);
        let note = published.and_then(|p| {
            (p.size != family.size() as u64).then(|| {
                format!(
                    "reference size {} differs from the full family q^{}-1 = {}; the subset used for it is not specified",
                    p.size,
                    d - 1,
                    family.size()
                )
            })
        });
        rows.push(TableRow {
            n,
            q,
            t,
            d,
            length: family.len(),
            size: family.size(),
            observed_cor: report.cor,
            mode: report.mode.clone(),
            lower_estimate: report.lower_estimate,
            bound: report.bound,
            within_bound: report.within_bound,
            reference: published,
            note,
        });
    }
    Ok(TableReport { table, rows })
}

/// Formula count, with `verify` also enumerating orbits (q^d <= 2^20).
pub fn cmd_count_places(n: u32, t: i64, d: u32, verify: bool) -> Result<PlaceCountReport> {
    let spec = CurveSearchSpec::new(n, t)?;
    let q = 1u64 << n;
    let b_d_formula = count_places_formula(q, t, d)?;
    let b_d_enumerated = if verify {
        if n * d > MAX_PLACE_FIELD_BITS {
            return Err(Error::Unsupported(format!(
                "verification needs q^d <= 2^{MAX_PLACE_FIELD_BITS}"
            )));
        }
        let (curve, _) = search_cyclic_curve(&spec)?;
        Some(if d == 1 {
            curve.count_points()
        } else {
            let ext = make_ext(curve.field(), d)?;
            enumerate_places_deg_d(&curve, &ext)?.len() as u64
        })
    } else {
        None
    };
    let report = PlaceCountReport {
        d,
        q,
        t,
        b_d_formula,
        b_d_enumerated,
    };
    if !report.consistent() {
        return Err(Error::BoundViolation(format!(
            "formula gives {b_d_formula} places but enumeration found {}",
            b_d_enumerated.unwrap_or(0)
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleRow {
    pub t: i64,
    #[serde(rename = "N")]
    pub order: u64,
    pub coprime_d: Vec<u32>,
}

pub fn cmd_admissible(n: u32) -> Result<Vec<AdmissibleRow>> {
    crate::field::make_field(n)?;
    Ok(admissible_t(n)
        .into_iter()
        .map(|t| {
            let order = ((1i64 << n) + 1 + t) as u64;
            AdmissibleRow {
                t,
                order,
                coprime_d: [2u32, 3].into_iter().filter(|&d| gcd(d as u64, order) == 1).collect(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_examples() {
        let rows = cmd_admissible(6).unwrap();
        let find = |t: i64| rows.iter().find(|r| r.t == t).cloned();
        assert_eq!(find(8).unwrap().coprime_d, vec![2, 3]);
        assert!(find(-1).unwrap().coprime_d.contains(&3));
        assert!(find(7).unwrap().coprime_d.is_empty());
        assert!(cmd_admissible(3).unwrap().iter().any(|r| r.t == 4 && r.coprime_d.contains(&2)));
        assert!(cmd_admissible(13).is_err());
    }

    #[test]
    fn count_places_examples() {
        assert_eq!(cmd_count_places(3, 4, 2, true).unwrap().b_d_enumerated, Some(26));
        assert_eq!(cmd_count_places(3, 4, 1, true).unwrap().b_d_formula, 13);
        let (q, t) = (64i64, 8i64);
        let closed = (q.pow(3) - q + t.pow(3) - 3 * q * t - t) / 3;
        assert_eq!(cmd_count_places(6, 8, 3, false).unwrap().b_d_formula, closed as u64);
        assert!(cmd_count_places(6, 8, 4, true).is_err());
    }

    #[test]
    fn generate_and_analyze_small() {
        let (bytes, s) = cmd_generate(3, 4, 2).unwrap();
        assert_eq!((s.length, s.size), (13, 7));
        let b = cmd_analyze(&bytes, AnalysisMode::Exhaustive, 0, None).unwrap();
        assert!(b.violations().is_empty());
        assert_eq!(b.family_digest, s.digest);
        let again = cmd_analyze(&bytes, AnalysisMode::Exhaustive, 0, None).unwrap();
        assert_eq!(b.to_json_without_timings().unwrap(), again.to_json_without_timings().unwrap());
    }

    #[test]
    fn zero_rows_rejected() {
        let text = "ECSEQ v1 n=3 t=4 d=2 N=13 M=2\n{}\n0000\n0000\n";
        assert!(matches!(
            cmd_analyze(text.as_bytes(), AnalysisMode::Exhaustive, 0, None),
            Err(Error::ZeroSequence)
        ));
    }

    #[test]
    fn table_parameters() {
        assert_eq!(table_params(3, 6).unwrap(), (8, 2));
        assert_eq!(table_params(3, 7).unwrap(), (16, 2));
        assert_eq!(table_params(2, 9).unwrap(), (-1, 3));
        assert!(table_params(4, 6).is_err());
    }
}

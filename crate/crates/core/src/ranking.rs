//! Percentile ranking within (SDS, academic rank) strata and performance
//! band classification.
//!
//! Percentiles use midrank tie handling: with `n` stratum members, `L`
//! members strictly below the subject and `E` ties (excluding the subject),
//! the rank is `100 * (L + E/2) / (n - 1)`. A singleton stratum scores 50.
//! The scale is 0-100, worst to best; cross-stratum comparisons are never
//! made.

use crate::ingest::{Rank, Researcher};
use crate::metrics::ScoreCard;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RankingError {
    #[error("subject index {index} out of range for {len} values")]
    SubjectOutOfRange { index: usize, len: usize },
    #[error("empty value list")]
    EmptyValues,
}

/// The two productivity indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Indicator {
    O,
    FssIf,
}

impl Indicator {
    pub fn as_str(self) -> &'static str {
        match self {
            Indicator::O => "O",
            Indicator::FssIf => "FSS_IF",
        }
    }

    pub fn value(self, card: &ScoreCard) -> f64 {
        match self {
            Indicator::O => card.o,
            Indicator::FssIf => card.fss_if,
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Percentile ranks for one indicator, keyed by researcher.
#[derive(Debug, Clone, PartialEq)]
pub struct PercentileTable {
    pub indicator: Indicator,
    pub percentiles: BTreeMap<String, f64>,
}

/// Performance bands used by the audit tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Band {
    /// N = 0 in the window.
    NoPublications,
    /// FSS_IF = 0: no publications, or publications only in journals with no
    /// impact factor. Always a superset of `NoPublications`.
    NoImpact,
    /// Percentile < 20.
    Bottom20,
    /// Percentile < 50.
    BelowMedian,
    /// Percentile >= 80.
    Top20,
    /// Percentile >= 90.
    Top10,
}

impl Band {
    pub fn as_str(self) -> &'static str {
        match self {
            Band::NoPublications => "no_publications",
            Band::NoImpact => "no_impact",
            Band::Bottom20 => "bottom20",
            Band::BelowMedian => "below_median",
            Band::Top20 => "top20",
            Band::Top10 => "top10",
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Midrank percentile of `values[subject_index]` within `values`, on the
/// 0-100 scale.
pub fn percentile_rank(values: &[f64], subject_index: usize) -> Result<f64, RankingError> {
    if values.is_empty() {
        return Err(RankingError::EmptyValues);
    }
    if subject_index >= values.len() {
        return Err(RankingError::SubjectOutOfRange {
            index: subject_index,
            len: values.len(),
        });
    }
    let n = values.len();
    if n == 1 {
        return Ok(50.0);
    }
    let subject = values[subject_index];
    let mut below = 0usize;
    let mut equal = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if i == subject_index {
            continue;
        }
        if v < subject {
            below += 1;
        } else if v == subject {
            equal += 1;
        }
    }
    Ok(100.0 * (below as f64 + equal as f64 / 2.0) / (n as f64 - 1.0))
}

/// Result of a full ranking run.
#[derive(Debug, Clone)]
pub struct RankingOutcome {
    pub o: PercentileTable,
    pub fss_if: PercentileTable,
    /// (sds, rank) strata with exactly one member; ranked 50, flagged for
    /// the run log.
    pub singleton_strata: Vec<(String, Rank)>,
}

/// Ranks every scored researcher within its (SDS, rank) stratum, for both
/// indicators. External candidates never enter strata.
pub fn rank_all(
    scorecards: &BTreeMap<String, ScoreCard>,
    roster: &BTreeMap<String, Researcher>,
) -> RankingOutcome {
    let mut strata: BTreeMap<(String, Rank), Vec<&ScoreCard>> = BTreeMap::new();
    for card in scorecards.values() {
        let rank = roster
            .get(&card.researcher_id)
            .map(|r| r.rank)
            .unwrap_or(card.rank);
        if rank == Rank::External {
            continue;
        }
        strata
            .entry((card.sds.clone(), rank))
            .or_default()
            .push(card);
    }

    let mut o = BTreeMap::new();
    let mut fss = BTreeMap::new();
    let mut singleton_strata = Vec::new();
    for ((sds, rank), members) in &strata {
        if members.len() == 1 {
            singleton_strata.push((sds.clone(), *rank));
        }
        for indicator in [Indicator::O, Indicator::FssIf] {
            let values: Vec<f64> = members.iter().map(|c| indicator.value(c)).collect();
            for (i, card) in members.iter().enumerate() {
                let pct = percentile_rank(&values, i).expect("stratum is non-empty");
                match indicator {
                    Indicator::O => o.insert(card.researcher_id.clone(), pct),
                    Indicator::FssIf => fss.insert(card.researcher_id.clone(), pct),
                };
            }
        }
    }
    RankingOutcome {
        o: PercentileTable {
            indicator: Indicator::O,
            percentiles: o,
        },
        fss_if: PercentileTable {
            indicator: Indicator::FssIf,
            percentiles: fss,
        },
        singleton_strata,
    }
}

/// Bands for one indicator given its percentile. `NoPublications` and
/// `NoImpact` depend only on the scorecard.
pub fn indicator_bands(card: &ScoreCard, percentile: f64) -> BTreeSet<Band> {
    let mut bands = BTreeSet::new();
    if card.n == 0 {
        bands.insert(Band::NoPublications);
    }
    if card.fss_if == 0.0 {
        bands.insert(Band::NoImpact);
    }
    if percentile < 20.0 {
        bands.insert(Band::Bottom20);
    }
    if percentile < 50.0 {
        bands.insert(Band::BelowMedian);
    }
    if percentile >= 80.0 {
        bands.insert(Band::Top20);
    }
    if percentile >= 90.0 {
        bands.insert(Band::Top10);
    }
    bands
}

/// Band sets for both indicators of one researcher.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub o: BTreeSet<Band>,
    pub fss_if: BTreeSet<Band>,
}

pub fn classify(card: &ScoreCard, percentile_fss: f64, percentile_o: f64) -> Classification {
    Classification {
        o: indicator_bands(card, percentile_o),
        fss_if: indicator_bands(card, percentile_fss),
    }
}

//! Per-researcher productivity indicators.
//!
//! Two indicators are computed over the observation window:
//!
//! * `O` (output): publication count divided by fractional staff years.
//! * `FSS_IF` (fractional scientific strength, impact-factor variant):
//!   `(1/t) * sum_i (IF_i / mean_IF_i) * f_i`, where `IF_i / mean_IF_i` is the
//!   journal impact factor normalized by the mean impact factor of its
//!   subject categories in the same year, and `f_i` is the researcher's
//!   fractional contribution to publication `i`.

use crate::ingest::{
    Authorship, Corpus, JournalYearMetric, Publication, Rank, Researcher, Scheme,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("no IF data for category/year ({category}, {year})")]
    NoCategoryData { category: String, year: i32 },
    #[error("researcher {researcher_id} not on byline of publication {pub_id}")]
    NotOnByline {
        researcher_id: String,
        pub_id: String,
    },
    #[error("researcher {researcher_id} not on staff in window")]
    NotOnStaff { researcher_id: String },
}

/// Field-normalized journal impact of one publication.
///
/// The value is `0` exactly when the journal-year impact factor is absent,
/// zero, or the journal-year is unknown; otherwise it is the arithmetic mean
/// of `IF / mean_IF_category` over the journal's subject categories.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedImpact {
    pub pub_id: String,
    pub value: f64,
}

/// Per-researcher indicator values over the observation window.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreCard {
    pub researcher_id: String,
    pub sds: String,
    pub rank: Rank,
    /// Attributed publications inside the window.
    pub n: u32,
    /// Fractional staff years inside the window (always > 0 for scored
    /// researchers).
    pub t: f64,
    /// Output: `n / t`.
    pub o: f64,
    pub fss_if: f64,
}

/// Arithmetic mean of the present impact factors over all journal-years in
/// `(category, year)`.
pub fn category_mean_if(
    journal_metrics: &BTreeMap<(String, i32), JournalYearMetric>,
    category: &str,
    year: i32,
) -> Result<f64, MetricsError> {
    let mut sum = 0.0;
    let mut count = 0u64;
    for metric in journal_metrics.values() {
        if metric.year != year {
            continue;
        }
        if let Some(impact) = metric.impact_factor {
            if metric.categories.iter().any(|c| c == category) {
                sum += impact;
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(MetricsError::NoCategoryData {
            category: category.to_owned(),
            year,
        });
    }
    Ok(sum / count as f64)
}

/// Precomputed category means, shared across a scoring run.
pub struct ImpactNormalizer<'a> {
    metrics: &'a BTreeMap<(String, i32), JournalYearMetric>,
    means: BTreeMap<(String, i32), f64>,
}

impl<'a> ImpactNormalizer<'a> {
    pub fn new(metrics: &'a BTreeMap<(String, i32), JournalYearMetric>) -> Self {
        let mut sums: BTreeMap<(String, i32), (f64, u64)> = BTreeMap::new();
        for metric in metrics.values() {
            if let Some(impact) = metric.impact_factor {
                for category in &metric.categories {
                    let slot = sums.entry((category.clone(), metric.year)).or_insert((0.0, 0));
                    slot.0 += impact;
                    slot.1 += 1;
                }
            }
        }
        let means = sums
            .into_iter()
            .map(|(key, (sum, count))| (key, sum / count as f64))
            .collect();
        ImpactNormalizer { metrics, means }
    }

    pub fn normalized_impact(&self, publication: &Publication) -> NormalizedImpact {
        let key = (publication.journal_id.clone(), publication.year);
        let value = match self.metrics.get(&key).and_then(|m| m.impact_factor) {
            None => 0.0,
            Some(0.0) => 0.0,
            Some(impact) => {
                let metric = &self.metrics[&key];
                let mut sum = 0.0;
                for category in &metric.categories {
                    // The journal itself contributes to the mean, so the
                    // denominator is always positive here.
                    let mean = self.means[&(category.clone(), metric.year)];
                    sum += impact / mean;
                }
                sum / metric.categories.len() as f64
            }
        };
        NormalizedImpact {
            pub_id: publication.pub_id.clone(),
            value,
        }
    }
}

/// One-off variant of [`ImpactNormalizer::normalized_impact`].
pub fn normalized_impact(
    publication: &Publication,
    journal_metrics: &BTreeMap<(String, i32), JournalYearMetric>,
) -> NormalizedImpact {
    ImpactNormalizer::new(journal_metrics).normalized_impact(publication)
}

/// Contribution weights for a whole byline; weights sum to 1.
///
/// Position-weighted rules:
/// * 1 author: 1.0; 2 authors: 0.50 each; 3 authors: 0.40 / 0.20 / 0.40.
/// * First and last share an institution: 0.40 each, remaining 0.20 split
///   equally among the middle authors.
/// * First and last from different institutions (4+ authors): 0.30 to first
///   and last, 0.15 to second and second-to-last, remaining 0.10 split
///   equally among the rest. With exactly 4 authors there is no "rest", so
///   the 0.10 is split between the two middle authors.
pub fn byline_weights(byline: &[Authorship], scheme: Scheme) -> Vec<f64> {
    let n = byline.len();
    if n == 0 {
        return Vec::new();
    }
    match scheme {
        Scheme::Alphabetical => vec![1.0 / n as f64; n],
        Scheme::PositionWeighted => match n {
            1 => vec![1.0],
            2 => vec![0.5, 0.5],
            3 => vec![0.4, 0.2, 0.4],
            _ => {
                let mut weights = vec![0.0; n];
                if byline[0].institution_id == byline[n - 1].institution_id {
                    weights[0] = 0.40;
                    weights[n - 1] = 0.40;
                    let middle = 0.20 / (n - 2) as f64;
                    for w in &mut weights[1..n - 1] {
                        *w = middle;
                    }
                } else {
                    weights[0] = 0.30;
                    weights[n - 1] = 0.30;
                    weights[1] = 0.15;
                    weights[n - 2] = 0.15;
                    if n == 4 {
                        weights[1] += 0.05;
                        weights[2] += 0.05;
                    } else {
                        let rest = 0.10 / (n - 4) as f64;
                        for w in &mut weights[2..n - 2] {
                            *w = rest;
                        }
                    }
                }
                weights
            }
        },
    }
}

/// The researcher's share of one publication, in `(0, 1]`.
pub fn fractional_contribution(
    publication: &Publication,
    researcher_id: &str,
    scheme: Scheme,
) -> Result<f64, MetricsError> {
    let index = publication
        .byline
        .iter()
        .position(|a| a.researcher_id.as_deref() == Some(researcher_id))
        .ok_or_else(|| MetricsError::NotOnByline {
            researcher_id: researcher_id.to_owned(),
            pub_id: publication.pub_id.clone(),
        })?;
    Ok(byline_weights(&publication.byline, scheme)[index])
}

fn score_with(
    researcher: &Researcher,
    publications: &[&Publication],
    normalizer: &ImpactNormalizer<'_>,
    window: crate::ingest::Window,
) -> Result<ScoreCard, MetricsError> {
    let t = researcher.staff_years_in_window(window);
    if t <= 0.0 {
        return Err(MetricsError::NotOnStaff {
            researcher_id: researcher.researcher_id.clone(),
        });
    }
    let mut n = 0u32;
    let mut weighted_impact = 0.0;
    // publications arrive sorted by pub_id, which fixes the summation order.
    for publication in publications {
        if !window.contains_year(publication.year) {
            continue;
        }
        n += 1;
        let impact = normalizer.normalized_impact(publication).value;
        if impact > 0.0 {
            let f = fractional_contribution(
                publication,
                &researcher.researcher_id,
                researcher.scheme,
            )?;
            weighted_impact += impact * f;
        }
    }
    Ok(ScoreCard {
        researcher_id: researcher.researcher_id.clone(),
        sds: researcher.sds.clone(),
        rank: researcher.rank,
        n,
        t,
        o: n as f64 / t,
        fss_if: weighted_impact / t,
    })
}

/// Scores a single researcher against the corpus.
pub fn score_researcher(
    researcher: &Researcher,
    corpus: &Corpus,
) -> Result<ScoreCard, MetricsError> {
    let normalizer = ImpactNormalizer::new(&corpus.journal_metrics);
    let publications: Vec<&Publication> = corpus
        .publications
        .iter()
        .filter(|p| {
            p.byline
                .iter()
                .any(|a| a.researcher_id.as_deref() == Some(researcher.researcher_id.as_str()))
        })
        .collect();
    score_with(researcher, &publications, &normalizer, corpus.window)
}

/// Outcome of a batch scoring run.
#[derive(Debug, Clone, Default)]
pub struct ScoreOutcome {
    pub scorecards: BTreeMap<String, ScoreCard>,
    /// Researchers skipped because they have no staff presence in the window.
    pub skipped: Vec<String>,
}

/// Scores every roster researcher with positive staff presence in the
/// window. Deterministic regardless of input iteration order.
pub fn score_all(corpus: &Corpus) -> Result<ScoreOutcome, MetricsError> {
    let normalizer = ImpactNormalizer::new(&corpus.journal_metrics);
    let mut attributed: BTreeMap<&str, Vec<&Publication>> = BTreeMap::new();
    for publication in &corpus.publications {
        for authorship in &publication.byline {
            if let Some(id) = &authorship.researcher_id {
                attributed.entry(id).or_default().push(publication);
            }
        }
    }
    let mut outcome = ScoreOutcome::default();
    for researcher in corpus.roster.values() {
        if researcher.staff_years_in_window(corpus.window) <= 0.0 {
            outcome.skipped.push(researcher.researcher_id.clone());
            continue;
        }
        let publications = attributed
            .get(researcher.researcher_id.as_str())
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        let card = score_with(researcher, publications, &normalizer, corpus.window)?;
        outcome.scorecards.insert(card.researcher_id.clone(), card);
    }
    Ok(outcome)
}

//! Recruitment-efficiency audits.
//!
//! Three analyses over scored and ranked researchers:
//!
//! * winners vs incumbents: cohort statistics with two-sample t-tests on
//!   mean percentiles, overall and broken down by UDA;
//! * per-competition winner quality: unproductive / bottom-20% /
//!   below-median flags and winner-pair patterns;
//! * winners vs non-winner candidates: outperformance counts on raw
//!   indicator values, with the supporting histogram.

use crate::ingest::{Corpus, Rank};
use crate::metrics::ScoreCard;
use crate::ranking::{indicator_bands, Band, RankingOutcome};
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CohortError {
    #[error("zero variance with unequal means")]
    ZeroVariance,
    #[error("each sample needs at least 2 observations")]
    TooFewObservations,
}

/// Filters that gate which fields and researchers enter the audits.
/// Defaults reproduce the reference analysis: fields where at least half of
/// the professors published, researchers on staff for the whole window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EligibilityConfig {
    pub min_publishing_share: f64,
    pub require_continuous_staff: bool,
}

impl Default for EligibilityConfig {
    fn default() -> Self {
        EligibilityConfig {
            min_publishing_share: 0.5,
            require_continuous_staff: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TTestVariant {
    Pooled,
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    /// Two-tailed p-value.
    pub p: f64,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sample_variance(values: &[f64], mean: f64) -> f64 {
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64
}

/// Two-sample t-test for a difference in means, two-tailed.
pub fn t_test_two_sample(
    a: &[f64],
    b: &[f64],
    variant: TTestVariant,
) -> Result<TTest, CohortError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(CohortError::TooFewObservations);
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (sample_variance(a, ma), sample_variance(b, mb));
    let (se2, df) = match variant {
        TTestVariant::Pooled => {
            let df = na + nb - 2.0;
            let pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
            (pooled * (1.0 / na + 1.0 / nb), df)
        }
        TTestVariant::Welch => {
            let se2 = va / na + vb / nb;
            let df = if se2 == 0.0 {
                na + nb - 2.0
            } else {
                se2 * se2 / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0))
            };
            (se2, df)
        }
    };
    if se2 == 0.0 {
        return if ma == mb {
            Ok(TTest { t: 0.0, df, p: 1.0 })
        } else {
            Err(CohortError::ZeroVariance)
        };
    }
    let t = (ma - mb) / se2.sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 2");
    let p = (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0);
    Ok(TTest { t, df, p })
}

/// Result of the field-eligibility filter.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SdsEligibility {
    pub eligible: BTreeSet<String>,
    /// Excluded SDS -> reason, for the run log.
    pub excluded: BTreeMap<String, String>,
}

/// Retains each SDS iff at least `min_publishing_share` of its professors
/// (non-external roster members) have at least one publication in the
/// window. The boundary is inclusive.
pub fn filter_eligible_sds(
    corpus: &Corpus,
    scorecards: &BTreeMap<String, ScoreCard>,
    config: &EligibilityConfig,
) -> SdsEligibility {
    let mut totals: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for researcher in corpus.roster.values() {
        if researcher.rank == Rank::External {
            continue;
        }
        let slot = totals.entry(researcher.sds.as_str()).or_insert((0, 0));
        slot.0 += 1;
        let published = scorecards
            .get(&researcher.researcher_id)
            .map(|c| c.n >= 1)
            .unwrap_or(false);
        if published {
            slot.1 += 1;
        }
    }
    // SDSs referenced only by competitions have zero professors.
    let mut universe: BTreeSet<&str> = totals.keys().copied().collect();
    for competition in &corpus.competitions {
        universe.insert(competition.sds.as_str());
    }

    let mut result = SdsEligibility::default();
    for sds in universe {
        match totals.get(sds) {
            None | Some((0, _)) => {
                result
                    .excluded
                    .insert(sds.to_owned(), "no rostered professors".to_owned());
            }
            Some(&(professors, publishing)) => {
                let share = publishing as f64 / professors as f64;
                if share >= config.min_publishing_share {
                    result.eligible.insert(sds.to_owned());
                } else {
                    result.excluded.insert(
                        sds.to_owned(),
                        format!(
                            "publishing share {publishing}/{professors} below threshold"
                        ),
                    );
                }
            }
        }
    }
    result
}

/// Retains the ids whose staff intervals jointly cover the whole window.
pub fn filter_continuous_staff<'a, I>(ids: I, corpus: &Corpus) -> BTreeSet<String>
where
    I: IntoIterator<Item = &'a String>,
{
    ids.into_iter()
        .filter(|id| {
            corpus
                .roster
                .get(*id)
                .map(|r| r.covers_window(corpus.window))
                .unwrap_or(false)
        })
        .cloned()
        .collect()
}

/// Descriptive statistics for one cohort. Shares are percentages in
/// `[0, 100]`; band shares are computed on the FSS_IF percentile.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CohortStats {
    pub observations: usize,
    pub mean_percentile_o: Option<f64>,
    pub mean_percentile_fss: Option<f64>,
    pub share_no_publications: f64,
    pub share_no_impact: f64,
    pub share_bottom20: f64,
    pub share_below_median: f64,
    pub share_top20: f64,
    pub share_top10: f64,
}

fn cohort_stats(
    ids: &BTreeSet<String>,
    scorecards: &BTreeMap<String, ScoreCard>,
    ranking: &RankingOutcome,
) -> CohortStats {
    let mut stats = CohortStats {
        observations: ids.len(),
        ..CohortStats::default()
    };
    if ids.is_empty() {
        return stats;
    }
    let mut sum_o = 0.0;
    let mut sum_fss = 0.0;
    let mut band_counts: BTreeMap<Band, usize> = BTreeMap::new();
    for id in ids {
        let card = &scorecards[id];
        let p_o = ranking.o.percentiles[id];
        let p_fss = ranking.fss_if.percentiles[id];
        sum_o += p_o;
        sum_fss += p_fss;
        for band in indicator_bands(card, p_fss) {
            *band_counts.entry(band).or_insert(0) += 1;
        }
    }
    let n = ids.len() as f64;
    let share = |band: Band| 100.0 * band_counts.get(&band).copied().unwrap_or(0) as f64 / n;
    stats.mean_percentile_o = Some(sum_o / n);
    stats.mean_percentile_fss = Some(sum_fss / n);
    stats.share_no_publications = share(Band::NoPublications);
    stats.share_no_impact = share(Band::NoImpact);
    stats.share_bottom20 = share(Band::Bottom20);
    stats.share_below_median = share(Band::BelowMedian);
    stats.share_top20 = share(Band::Top20);
    stats.share_top10 = share(Band::Top10);
    stats
}

/// Winners vs incumbents, overall.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortComparison {
    pub winners: CohortStats,
    pub incumbents: CohortStats,
    /// `None` when either cohort has fewer than 2 members or the t-test is
    /// degenerate.
    pub t_test_o: Option<TTest>,
    pub t_test_fss: Option<TTest>,
}

/// Winners vs incumbents within one UDA.
#[derive(Debug, Clone, PartialEq)]
pub struct UdaComparison {
    pub uda: String,
    pub winners: CohortStats,
    pub incumbents: CohortStats,
    pub t_test_fss: Option<TTest>,
}

/// Full winners-vs-incumbents report.
#[derive(Debug, Clone, PartialEq)]
pub struct WinnersVsIncumbents {
    pub comparison: CohortComparison,
    pub per_uda: Vec<UdaComparison>,
    pub winner_ids: BTreeSet<String>,
    pub incumbent_ids: BTreeSet<String>,
}

fn percentile_samples(
    ids: &BTreeSet<String>,
    table: &BTreeMap<String, f64>,
) -> Vec<f64> {
    ids.iter().map(|id| table[id]).collect()
}

fn run_t_test(a: &[f64], b: &[f64], variant: TTestVariant) -> Option<TTest> {
    if a.len() < 2 || b.len() < 2 {
        return None;
    }
    t_test_two_sample(a, b, variant).ok()
}

/// Compares deduplicated competition winners against incumbent associate
/// professors, overall and per UDA. A researcher winning two competitions
/// is counted once. Both cohorts are restricted to eligible SDSs and, by
/// default, to researchers on staff for the whole window.
pub fn compare_winners_vs_incumbents(
    corpus: &Corpus,
    scorecards: &BTreeMap<String, ScoreCard>,
    ranking: &RankingOutcome,
    config: &EligibilityConfig,
    variant: TTestVariant,
) -> WinnersVsIncumbents {
    let eligibility = filter_eligible_sds(corpus, scorecards, config);

    let mut winner_ids: BTreeSet<String> = corpus
        .competitions
        .iter()
        .filter(|c| eligibility.eligible.contains(&c.sds))
        .flat_map(|c| c.winner_ids.iter().cloned())
        .collect();
    if config.require_continuous_staff {
        winner_ids = filter_continuous_staff(&winner_ids, corpus);
    }
    winner_ids.retain(|id| {
        scorecards.contains_key(id) && ranking.fss_if.percentiles.contains_key(id)
    });

    let incumbent_ids: BTreeSet<String> = corpus
        .roster
        .values()
        .filter(|r| {
            r.rank == Rank::Associate
                && eligibility.eligible.contains(&r.sds)
                && !winner_ids.contains(&r.researcher_id)
                && (!config.require_continuous_staff || r.covers_window(corpus.window))
                && scorecards.contains_key(&r.researcher_id)
                && ranking.fss_if.percentiles.contains_key(&r.researcher_id)
        })
        .map(|r| r.researcher_id.clone())
        .collect();

    let comparison = CohortComparison {
        winners: cohort_stats(&winner_ids, scorecards, ranking),
        incumbents: cohort_stats(&incumbent_ids, scorecards, ranking),
        t_test_o: run_t_test(
            &percentile_samples(&winner_ids, &ranking.o.percentiles),
            &percentile_samples(&incumbent_ids, &ranking.o.percentiles),
            variant,
        ),
        t_test_fss: run_t_test(
            &percentile_samples(&winner_ids, &ranking.fss_if.percentiles),
            &percentile_samples(&incumbent_ids, &ranking.fss_if.percentiles),
            variant,
        ),
    };

    let mut udas: BTreeSet<&str> = BTreeSet::new();
    for id in winner_ids.iter().chain(&incumbent_ids) {
        udas.insert(corpus.roster[id].uda.as_str());
    }
    let per_uda = udas
        .into_iter()
        .map(|uda| {
            let w: BTreeSet<String> = winner_ids
                .iter()
                .filter(|id| corpus.roster[*id].uda == uda)
                .cloned()
                .collect();
            let i: BTreeSet<String> = incumbent_ids
                .iter()
                .filter(|id| corpus.roster[*id].uda == uda)
                .cloned()
                .collect();
            UdaComparison {
                uda: uda.to_owned(),
                winners: cohort_stats(&w, scorecards, ranking),
                incumbents: cohort_stats(&i, scorecards, ranking),
                t_test_fss: run_t_test(
                    &percentile_samples(&w, &ranking.fss_if.percentiles),
                    &percentile_samples(&i, &ranking.fss_if.percentiles),
                    variant,
                ),
            }
        })
        .collect();

    WinnersVsIncumbents {
        comparison,
        per_uda,
        winner_ids,
        incumbent_ids,
    }
}

/// Per-indicator winner-quality flags for one competition. Pair-pattern
/// flags are `None` for single-winner competitions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndicatorFlags {
    pub at_least_one_unproductive: bool,
    pub both_unproductive: bool,
    pub at_least_one_bottom20: bool,
    pub both_bottom20: bool,
    pub at_least_one_below_median: bool,
    pub both_below_median: bool,
    pub avg_below_median: Option<bool>,
    pub one_bottom20_one_top20: Option<bool>,
    pub one_below_median_one_top20: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompetitionAudit {
    pub competition_id: String,
    pub winner_count: usize,
    pub o: IndicatorFlags,
    pub fss_if: IndicatorFlags,
}

/// Aggregate counters over all audited competitions, per indicator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlagCounts {
    pub at_least_one_unproductive: usize,
    pub both_unproductive: usize,
    pub at_least_one_bottom20: usize,
    pub both_bottom20: usize,
    pub at_least_one_below_median: usize,
    pub both_below_median: usize,
    pub avg_below_median: usize,
    pub one_bottom20_one_top20: usize,
    pub one_below_median_one_top20: usize,
}

impl FlagCounts {
    fn add(&mut self, flags: &IndicatorFlags) {
        self.at_least_one_unproductive += flags.at_least_one_unproductive as usize;
        self.both_unproductive += flags.both_unproductive as usize;
        self.at_least_one_bottom20 += flags.at_least_one_bottom20 as usize;
        self.both_bottom20 += flags.both_bottom20 as usize;
        self.at_least_one_below_median += flags.at_least_one_below_median as usize;
        self.both_below_median += flags.both_below_median as usize;
        self.avg_below_median += flags.avg_below_median.unwrap_or(false) as usize;
        self.one_bottom20_one_top20 += flags.one_bottom20_one_top20.unwrap_or(false) as usize;
        self.one_below_median_one_top20 +=
            flags.one_below_median_one_top20.unwrap_or(false) as usize;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompetitionAuditReport {
    pub audits: Vec<CompetitionAudit>,
    /// Competitions included in the audit (winners scored and, by default,
    /// on staff for the whole window; SDS eligible).
    pub competitions: usize,
    /// Subset with two winners (denominator of pair-pattern counters).
    pub pair_competitions: usize,
    pub o: FlagCounts,
    pub fss_if: FlagCounts,
    /// Competitions skipped and why, for the run log.
    pub skipped: Vec<(String, String)>,
}

fn indicator_flags(unproductive: &[bool], percentiles: &[f64]) -> IndicatorFlags {
    let bottom20: Vec<bool> = percentiles.iter().map(|&p| p < 20.0).collect();
    let below_median: Vec<bool> = percentiles.iter().map(|&p| p < 50.0).collect();
    let top20: Vec<bool> = percentiles.iter().map(|&p| p >= 80.0).collect();
    let pair = percentiles.len() == 2;
    IndicatorFlags {
        at_least_one_unproductive: unproductive.iter().any(|&b| b),
        both_unproductive: unproductive.iter().all(|&b| b),
        at_least_one_bottom20: bottom20.iter().any(|&b| b),
        both_bottom20: bottom20.iter().all(|&b| b),
        at_least_one_below_median: below_median.iter().any(|&b| b),
        both_below_median: below_median.iter().all(|&b| b),
        avg_below_median: pair.then(|| mean(percentiles) < 50.0),
        one_bottom20_one_top20: pair
            .then(|| (bottom20[0] && top20[1]) || (bottom20[1] && top20[0])),
        one_below_median_one_top20: pair
            .then(|| (below_median[0] && top20[1]) || (below_median[1] && top20[0])),
    }
}

/// Audits winner quality per competition. Restricted to eligible SDSs and
/// to competitions whose winners all have scorecards (and, by default, were
/// on staff for the whole window).
pub fn audit_competitions(
    corpus: &Corpus,
    scorecards: &BTreeMap<String, ScoreCard>,
    ranking: &RankingOutcome,
    config: &EligibilityConfig,
) -> CompetitionAuditReport {
    let eligibility = filter_eligible_sds(corpus, scorecards, config);
    let mut report = CompetitionAuditReport::default();

    for competition in &corpus.competitions {
        if !eligibility.eligible.contains(&competition.sds) {
            report.skipped.push((
                competition.competition_id.clone(),
                "sds not eligible".to_owned(),
            ));
            continue;
        }
        let all_winners_qualify = competition.winner_ids.iter().all(|id| {
            scorecards.contains_key(id)
                && ranking.fss_if.percentiles.contains_key(id)
                && (!config.require_continuous_staff
                    || corpus
                        .roster
                        .get(id)
                        .map(|r| r.covers_window(corpus.window))
                        .unwrap_or(false))
        });
        if !all_winners_qualify {
            report.skipped.push((
                competition.competition_id.clone(),
                "winner without full-window staff presence or scorecard".to_owned(),
            ));
            continue;
        }

        let winners: Vec<&ScoreCard> = competition
            .winner_ids
            .iter()
            .map(|id| &scorecards[id])
            .collect();
        let unproductive_o: Vec<bool> = winners.iter().map(|c| c.n == 0).collect();
        let unproductive_fss: Vec<bool> = winners.iter().map(|c| c.fss_if == 0.0).collect();
        let p_o: Vec<f64> = competition
            .winner_ids
            .iter()
            .map(|id| ranking.o.percentiles[id])
            .collect();
        let p_fss: Vec<f64> = competition
            .winner_ids
            .iter()
            .map(|id| ranking.fss_if.percentiles[id])
            .collect();

        let audit = CompetitionAudit {
            competition_id: competition.competition_id.clone(),
            winner_count: winners.len(),
            o: indicator_flags(&unproductive_o, &p_o),
            fss_if: indicator_flags(&unproductive_fss, &p_fss),
        };
        report.competitions += 1;
        if winners.len() == 2 {
            report.pair_competitions += 1;
        }
        report.o.add(&audit.o);
        report.fss_if.add(&audit.fss_if);
        report.audits.push(audit);
    }
    report
}

/// Outperforming-non-winner counts for one indicator (or the conjunction of
/// both) in one competition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutperformanceCounts {
    /// Eligible non-winners strictly exceeding at least one winner.
    pub over_at_least_one: usize,
    /// Eligible non-winners strictly exceeding every winner.
    pub over_both: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompetitionOutperformance {
    pub competition_id: String,
    pub eligible_non_winners: usize,
    pub o: OutperformanceCounts,
    pub fss_if: OutperformanceCounts,
    /// Strict dominance on both indicators against the same winner.
    pub both: OutperformanceCounts,
}

/// Aggregate competition counts at the four thresholds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ThresholdCounts {
    /// >= 1 non-winner over >= 1 winner.
    pub one_over_one: usize,
    /// >= 2 non-winners over >= 1 winner.
    pub two_over_one: usize,
    /// >= 1 non-winner over both winners.
    pub one_over_both: usize,
    /// >= 2 non-winners over both winners.
    pub two_over_both: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HistogramEntry {
    pub above_one: usize,
    pub above_both: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutperformanceResult {
    pub per_competition: Vec<CompetitionOutperformance>,
    /// Competitions with at least one eligible non-winner.
    pub denominator_at_least_one: usize,
    /// Competitions with at least two eligible non-winners.
    pub denominator_at_least_two: usize,
    pub o: ThresholdCounts,
    pub fss_if: ThresholdCounts,
    pub both: ThresholdCounts,
    /// FSS_IF histogram: exactly `k` outperforming non-winners -> number of
    /// competitions, split into the above-one-winner and above-both-winners
    /// series (`k >= 1`).
    pub histogram: BTreeMap<usize, HistogramEntry>,
    /// Competitions skipped and why, for the run log.
    pub skipped: Vec<(String, String)>,
}

/// Compares non-winner candidates against the winners on raw indicator
/// values with strict inequality. Eligible non-winners are academics of
/// assistant rank with at least one staff year inside the window.
pub fn outperformance_analysis(
    corpus: &Corpus,
    scorecards: &BTreeMap<String, ScoreCard>,
    config: &EligibilityConfig,
) -> OutperformanceResult {
    let eligibility = filter_eligible_sds(corpus, scorecards, config);
    let mut result = OutperformanceResult::default();

    for competition in &corpus.competitions {
        if !eligibility.eligible.contains(&competition.sds) {
            result.skipped.push((
                competition.competition_id.clone(),
                "sds not eligible".to_owned(),
            ));
            continue;
        }
        if !competition
            .winner_ids
            .iter()
            .all(|id| scorecards.contains_key(id))
        {
            result.skipped.push((
                competition.competition_id.clone(),
                "winner without scorecard".to_owned(),
            ));
            continue;
        }
        let winners: Vec<&ScoreCard> = competition
            .winner_ids
            .iter()
            .map(|id| &scorecards[id])
            .collect();

        let non_winners: Vec<&ScoreCard> = competition
            .candidate_ids
            .iter()
            .filter(|id| !competition.winner_ids.contains(*id))
            .filter(|id| {
                corpus
                    .roster
                    .get(*id)
                    .map(|r| {
                        r.rank == Rank::Assistant
                            && r.staff_years_in_window(corpus.window) >= 1.0
                    })
                    .unwrap_or(false)
            })
            .filter_map(|id| scorecards.get(id))
            .collect();
        if non_winners.is_empty() {
            result.skipped.push((
                competition.competition_id.clone(),
                "no eligible non-winners".to_owned(),
            ));
            continue;
        }

        let mut entry = CompetitionOutperformance {
            competition_id: competition.competition_id.clone(),
            eligible_non_winners: non_winners.len(),
            o: OutperformanceCounts::default(),
            fss_if: OutperformanceCounts::default(),
            both: OutperformanceCounts::default(),
        };
        for nv in &non_winners {
            let beats_o: Vec<bool> = winners.iter().map(|w| nv.o > w.o).collect();
            let beats_fss: Vec<bool> = winners.iter().map(|w| nv.fss_if > w.fss_if).collect();
            let beats_both: Vec<bool> = beats_o
                .iter()
                .zip(&beats_fss)
                .map(|(&a, &b)| a && b)
                .collect();
            entry.o.over_at_least_one += beats_o.iter().any(|&b| b) as usize;
            entry.o.over_both += beats_o.iter().all(|&b| b) as usize;
            entry.fss_if.over_at_least_one += beats_fss.iter().any(|&b| b) as usize;
            entry.fss_if.over_both += beats_fss.iter().all(|&b| b) as usize;
            entry.both.over_at_least_one += beats_both.iter().any(|&b| b) as usize;
            entry.both.over_both += beats_both.iter().all(|&b| b) as usize;
        }

        result.denominator_at_least_one += 1;
        let at_least_two = non_winners.len() >= 2;
        if at_least_two {
            result.denominator_at_least_two += 1;
        }
        for (counts, totals) in [
            (&entry.o, &mut result.o),
            (&entry.fss_if, &mut result.fss_if),
            (&entry.both, &mut result.both),
        ] {
            totals.one_over_one += (counts.over_at_least_one >= 1) as usize;
            totals.one_over_both += (counts.over_both >= 1) as usize;
            if at_least_two {
                totals.two_over_one += (counts.over_at_least_one >= 2) as usize;
                totals.two_over_both += (counts.over_both >= 2) as usize;
            }
        }
        let k = entry.fss_if.over_at_least_one;
        if k >= 1 {
            result.histogram.entry(k).or_default().above_one += 1;
        }
        let k = entry.fss_if.over_both;
        if k >= 1 {
            result.histogram.entry(k).or_default().above_both += 1;
        }
        result.per_competition.push(entry);
    }
    result
}

#[cfg(test)]
mod tests;

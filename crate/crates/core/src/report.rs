//! Pipeline orchestration and output emission.
//!
//! `run_pipeline` sequences ingest -> metrics -> ranking -> cohort and
//! collects everything into a [`ReportBundle`]; the emit functions render
//! the bundle as CSV, JSON, and markdown. Identical inputs and config yield
//! byte-identical outputs.

use crate::cohort::{
    self, CompetitionAuditReport, EligibilityConfig, FlagCounts, OutperformanceResult,
    ThresholdCounts, TTest, TTestVariant, WinnersVsIncumbents,
};
use crate::ingest::{self, Corpus, CorpusPaths, Scheme, ValidationReport, Window};
use crate::metrics::{self, ScoreCard, ScoreOutcome};
use crate::ranking::{self, indicator_bands, RankingOutcome};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputFormat {
    Csv,
    Json,
    Markdown,
}

/// Everything a full run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub paths: CorpusPaths,
    pub window: Window,
    pub eligibility: EligibilityConfig,
    pub ttest: TTestVariant,
    pub default_scheme: Scheme,
    pub out_dir: PathBuf,
    pub formats: BTreeSet<OutputFormat>,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {message}")]
    Config { message: String },
    #[error("validation failed with {} error(s)", report.errors.len())]
    Validation { report: ValidationReport },
    #[error("error in stage {stage}: {message}")]
    Stage { stage: &'static str, message: String },
}

fn stage_err(stage: &'static str, message: impl ToString) -> PipelineError {
    PipelineError::Stage {
        stage,
        message: message.to_string(),
    }
}

/// All computed outputs of one pipeline run.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub validation: ValidationReport,
    pub scores: ScoreOutcome,
    pub ranking: RankingOutcome,
    pub cohorts: WinnersVsIncumbents,
    pub audit: CompetitionAuditReport,
    pub outperformance: OutperformanceResult,
    pub run_log: Vec<String>,
}

/// Runs the full pipeline over already-loaded data.
pub fn run_pipeline_on(
    corpus: &Corpus,
    eligibility: &EligibilityConfig,
    ttest: TTestVariant,
) -> Result<ReportBundle, PipelineError> {
    let validation = ingest::validate_corpus(corpus);
    if !validation.accepted() {
        return Err(PipelineError::Validation { report: validation });
    }

    let scores = metrics::score_all(corpus).map_err(|e| stage_err("metrics", e))?;
    let ranking = ranking::rank_all(&scores.scorecards, &corpus.roster);
    let cohorts = cohort::compare_winners_vs_incumbents(
        corpus,
        &scores.scorecards,
        &ranking,
        eligibility,
        ttest,
    );
    let audit = cohort::audit_competitions(corpus, &scores.scorecards, &ranking, eligibility);
    let outperformance =
        cohort::outperformance_analysis(corpus, &scores.scorecards, eligibility);

    let sds = cohort::filter_eligible_sds(corpus, &scores.scorecards, eligibility);
    let mut run_log = Vec::new();
    for warning in &validation.warnings {
        run_log.push(format!("warning [{}]: {}", warning.code, warning.message));
    }
    for (sds, reason) in &sds.excluded {
        run_log.push(format!("excluded sds {sds}: {reason}"));
    }
    for (sds, rank) in &ranking.singleton_strata {
        run_log.push(format!("singleton stratum: ({sds}, {rank})"));
    }
    for id in &scores.skipped {
        run_log.push(format!("skipped researcher {id}: no staff presence in window"));
    }
    for (id, reason) in &audit.skipped {
        run_log.push(format!("audit skipped competition {id}: {reason}"));
    }
    for (id, reason) in &outperformance.skipped {
        run_log.push(format!("outperformance skipped competition {id}: {reason}"));
    }

    Ok(ReportBundle {
        validation,
        scores,
        ranking,
        cohorts,
        audit,
        outperformance,
        run_log,
    })
}

/// Loads the corpus and runs the full pipeline.
pub fn run_pipeline(config: &RunConfig) -> Result<ReportBundle, PipelineError> {
    let corpus = ingest::load_corpus(&config.paths, config.window, config.default_scheme)
        .map_err(|e| stage_err("ingest", e))?;
    run_pipeline_on(&corpus, &config.eligibility, config.ttest)
}

fn fmt6(value: f64) -> String {
    format!("{value:.6}")
}

fn fmt1(value: f64) -> String {
    format!("{value:.1}")
}

fn round_to(value: f64, decimals: i32) -> f64 {
    let factor = 10f64.powi(decimals);
    (value * factor).round() / factor
}

/// scorecards.csv: one row per scored researcher, floats with 6 decimals.
pub fn render_scorecards_csv(scorecards: &BTreeMap<String, ScoreCard>) -> String {
    let mut out = String::from("researcher_id,sds,rank,N,t,O,fss_if\n");
    for card in scorecards.values() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            card.researcher_id,
            card.sds,
            card.rank,
            card.n,
            fmt6(card.t),
            fmt6(card.o),
            fmt6(card.fss_if),
        ));
    }
    out
}

/// percentiles.csv: two rows (O, FSS_IF) per researcher with band names.
pub fn render_percentiles_csv(
    scorecards: &BTreeMap<String, ScoreCard>,
    ranking: &RankingOutcome,
) -> String {
    let mut out = String::from("researcher_id,sds,rank,indicator,percentile,bands\n");
    for card in scorecards.values() {
        let tables = [
            ("O", &ranking.o.percentiles),
            ("FSS_IF", &ranking.fss_if.percentiles),
        ];
        for (name, table) in tables {
            let Some(&percentile) = table.get(&card.researcher_id) else {
                continue;
            };
            let bands: Vec<&str> = indicator_bands(card, percentile)
                .into_iter()
                .map(|b| b.as_str())
                .collect();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                card.researcher_id,
                card.sds,
                card.rank,
                name,
                fmt6(percentile),
                bands.join(";"),
            ));
        }
    }
    out
}

fn scorecard_json(card: &ScoreCard) -> Value {
    json!({
        "researcher_id": card.researcher_id,
        "sds": card.sds,
        "rank": card.rank.as_str(),
        "N": card.n,
        "t": round_to(card.t, 6),
        "O": round_to(card.o, 6),
        "fss_if": round_to(card.fss_if, 6),
    })
}

/// JSON mirror of scorecards.csv.
pub fn render_scorecards_json(scorecards: &BTreeMap<String, ScoreCard>) -> String {
    let rows: Vec<Value> = scorecards.values().map(scorecard_json).collect();
    serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
}

/// JSON mirror of percentiles.csv.
pub fn render_percentiles_json(
    scorecards: &BTreeMap<String, ScoreCard>,
    ranking: &RankingOutcome,
) -> String {
    let mut rows = Vec::new();
    for card in scorecards.values() {
        let tables = [
            ("O", &ranking.o.percentiles),
            ("FSS_IF", &ranking.fss_if.percentiles),
        ];
        for (name, table) in tables {
            let Some(&percentile) = table.get(&card.researcher_id) else {
                continue;
            };
            let bands: Vec<&str> = indicator_bands(card, percentile)
                .into_iter()
                .map(|b| b.as_str())
                .collect();
            rows.push(json!({
                "researcher_id": card.researcher_id,
                "sds": card.sds,
                "rank": card.rank.as_str(),
                "indicator": name,
                "percentile": round_to(percentile, 6),
                "bands": bands,
            }));
        }
    }
    serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
}

fn stats_json(stats: &cohort::CohortStats) -> Value {
    json!({
        "observations": stats.observations,
        "mean_percentile_o": stats.mean_percentile_o.map(|v| round_to(v, 6)),
        "mean_percentile_fss": stats.mean_percentile_fss.map(|v| round_to(v, 6)),
        "share_no_publications": round_to(stats.share_no_publications, 1),
        "share_no_impact": round_to(stats.share_no_impact, 1),
        "share_bottom20": round_to(stats.share_bottom20, 1),
        "share_below_median": round_to(stats.share_below_median, 1),
        "share_top20": round_to(stats.share_top20, 1),
        "share_top10": round_to(stats.share_top10, 1),
    })
}

fn t_test_json(test: &Option<TTest>) -> Value {
    match test {
        None => Value::Null,
        Some(t) => json!({
            "t": round_to(t.t, 6),
            "df": round_to(t.df, 6),
            "p": round_to(t.p, 4),
        }),
    }
}

fn flag_counts_json(counts: &FlagCounts) -> Value {
    json!({
        "at_least_one_unproductive": counts.at_least_one_unproductive,
        "both_unproductive": counts.both_unproductive,
        "at_least_one_bottom20": counts.at_least_one_bottom20,
        "both_bottom20": counts.both_bottom20,
        "at_least_one_below_median": counts.at_least_one_below_median,
        "both_below_median": counts.both_below_median,
        "avg_below_median": counts.avg_below_median,
        "one_bottom20_one_top20": counts.one_bottom20_one_top20,
        "one_below_median_one_top20": counts.one_below_median_one_top20,
    })
}

fn threshold_counts_json(counts: &ThresholdCounts) -> Value {
    json!({
        "one_over_one": counts.one_over_one,
        "two_over_one": counts.two_over_one,
        "one_over_both": counts.one_over_both,
        "two_over_both": counts.two_over_both,
    })
}

fn histogram_series(bundle: &ReportBundle, above_both: bool) -> Vec<Value> {
    bundle
        .outperformance
        .histogram
        .iter()
        .filter_map(|(k, entry)| {
            let competitions = if above_both {
                entry.above_both
            } else {
                entry.above_one
            };
            (competitions > 0).then(|| json!({ "k": k, "competitions": competitions }))
        })
        .collect()
}

/// audit.json: the full audit bundle.
pub fn render_audit_json(bundle: &ReportBundle) -> String {
    let per_uda: Vec<Value> = bundle
        .cohorts
        .per_uda
        .iter()
        .map(|u| {
            json!({
                "uda": u.uda,
                "winners": stats_json(&u.winners),
                "incumbents": stats_json(&u.incumbents),
                "t_test_fss": t_test_json(&u.t_test_fss),
            })
        })
        .collect();

    let audits: Vec<Value> = bundle
        .audit
        .audits
        .iter()
        .map(|a| {
            let flags = |f: &cohort::IndicatorFlags| {
                json!({
                    "at_least_one_unproductive": f.at_least_one_unproductive,
                    "both_unproductive": f.both_unproductive,
                    "at_least_one_bottom20": f.at_least_one_bottom20,
                    "both_bottom20": f.both_bottom20,
                    "at_least_one_below_median": f.at_least_one_below_median,
                    "both_below_median": f.both_below_median,
                    "avg_below_median": f.avg_below_median,
                    "one_bottom20_one_top20": f.one_bottom20_one_top20,
                    "one_below_median_one_top20": f.one_below_median_one_top20,
                })
            };
            json!({
                "competition_id": a.competition_id,
                "winner_count": a.winner_count,
                "o": flags(&a.o),
                "fss_if": flags(&a.fss_if),
            })
        })
        .collect();

    let per_competition: Vec<Value> = bundle
        .outperformance
        .per_competition
        .iter()
        .map(|c| {
            json!({
                "competition_id": c.competition_id,
                "eligible_non_winners": c.eligible_non_winners,
                "o": { "over_at_least_one": c.o.over_at_least_one, "over_both": c.o.over_both },
                "fss_if": { "over_at_least_one": c.fss_if.over_at_least_one, "over_both": c.fss_if.over_both },
                "both": { "over_at_least_one": c.both.over_at_least_one, "over_both": c.both.over_both },
            })
        })
        .collect();

    let value = json!({
        "cohort_comparison": {
            "winners": stats_json(&bundle.cohorts.comparison.winners),
            "incumbents": stats_json(&bundle.cohorts.comparison.incumbents),
            "t_test_o": t_test_json(&bundle.cohorts.comparison.t_test_o),
            "t_test_fss": t_test_json(&bundle.cohorts.comparison.t_test_fss),
        },
        "per_uda": per_uda,
        "competition_audits": {
            "competitions": bundle.audit.competitions,
            "pair_competitions": bundle.audit.pair_competitions,
            "totals": {
                "o": flag_counts_json(&bundle.audit.o),
                "fss_if": flag_counts_json(&bundle.audit.fss_if),
            },
            "per_competition": audits,
        },
        "outperformance": {
            "denominator_at_least_one": bundle.outperformance.denominator_at_least_one,
            "denominator_at_least_two": bundle.outperformance.denominator_at_least_two,
            "counters": {
                "o": threshold_counts_json(&bundle.outperformance.o),
                "fss_if": threshold_counts_json(&bundle.outperformance.fss_if),
                "both": threshold_counts_json(&bundle.outperformance.both),
            },
            "per_competition": per_competition,
            "histogram_above_one": histogram_series(bundle, false),
            "histogram_above_both": histogram_series(bundle, true),
        },
    });
    serde_json::to_string_pretty(&value).expect("serializable") + "\n"
}

/// histogram.csv: the two FSS_IF series keyed by k.
pub fn render_histogram_csv(outperformance: &OutperformanceResult) -> String {
    let mut out = String::from("k,above_one,above_both\n");
    for (k, entry) in &outperformance.histogram {
        out.push_str(&format!("{k},{},{}\n", entry.above_one, entry.above_both));
    }
    out
}

fn opt_pct(value: Option<f64>) -> String {
    value.map(fmt1).unwrap_or_else(|| "-".to_owned())
}

fn t_test_line(name: &str, test: &Option<TTest>) -> String {
    match test {
        None => format!("t-test ({name}): not applicable\n"),
        Some(t) => format!(
            "t-test ({name}): t = {}, df = {}, p = {:.4}{}\n",
            fmt6(t.t),
            fmt6(t.df),
            t.p,
            if t.p < 0.01 { " (significant at 0.01)" } else { "" }
        ),
    }
}

/// report.md: the audit tables in human-readable form. Every number shown
/// here equals the corresponding audit.json value.
pub fn render_markdown(bundle: &ReportBundle) -> String {
    let mut out = String::new();
    let comparison = &bundle.cohorts.comparison;
    let (w, i) = (&comparison.winners, &comparison.incumbents);

    out.push_str("# Recruitment audit report\n\n");
    out.push_str("## Winners vs incumbents\n\n");
    out.push_str("| Statistic | Winners | Incumbents |\n|---|---|---|\n");
    out.push_str(&format!(
        "| Observations | {} | {} |\n",
        w.observations, i.observations
    ));
    out.push_str(&format!(
        "| Average percentile rank for O | {} | {} |\n",
        opt_pct(w.mean_percentile_o.map(|v| round_to(v, 6))),
        opt_pct(i.mean_percentile_o.map(|v| round_to(v, 6))),
    ));
    out.push_str(&format!(
        "| Average percentile rank for FSS_IF | {} | {} |\n",
        opt_pct(w.mean_percentile_fss.map(|v| round_to(v, 6))),
        opt_pct(i.mean_percentile_fss.map(|v| round_to(v, 6))),
    ));
    let rows = [
        ("Professors with no publications (%)", w.share_no_publications, i.share_no_publications),
        ("Professors with no impact (%)", w.share_no_impact, i.share_no_impact),
        ("Bottom 20% scientists for FSS_IF (%)", w.share_bottom20, i.share_bottom20),
        ("Below median for FSS_IF (%)", w.share_below_median, i.share_below_median),
        ("Top 20% scientists for FSS_IF (%)", w.share_top20, i.share_top20),
        ("Top 10% scientists for FSS_IF (%)", w.share_top10, i.share_top10),
    ];
    for (label, winner_share, incumbent_share) in rows {
        out.push_str(&format!(
            "| {label} | {} | {} |\n",
            fmt1(winner_share),
            fmt1(incumbent_share)
        ));
    }
    out.push('\n');
    out.push_str(&t_test_line("O percentiles", &comparison.t_test_o));
    out.push_str(&t_test_line("FSS_IF percentiles", &comparison.t_test_fss));

    out.push_str("\n## Winners (W) vs incumbents (I) by UDA\n\n");
    out.push_str("| UDA | Obs W | Obs I | Avg FSS_IF pct W | Avg FSS_IF pct I | No pubs % W | No pubs % I | No impact % W | No impact % I | Below median % W | Below median % I | Top 20% W | Top 20% I | p (FSS_IF) |\n");
    out.push_str("|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n");
    for uda in &bundle.cohorts.per_uda {
        let (w, i) = (&uda.winners, &uda.incumbents);
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
            uda.uda,
            w.observations,
            i.observations,
            opt_pct(w.mean_percentile_fss.map(|v| round_to(v, 6))),
            opt_pct(i.mean_percentile_fss.map(|v| round_to(v, 6))),
            fmt1(w.share_no_publications),
            fmt1(i.share_no_publications),
            fmt1(w.share_no_impact),
            fmt1(i.share_no_impact),
            fmt1(w.share_below_median),
            fmt1(i.share_below_median),
            fmt1(w.share_top20),
            fmt1(i.share_top20),
            uda.t_test_fss
                .map(|t| format!("{:.4}", t.p))
                .unwrap_or_else(|| "-".to_owned()),
        ));
    }

    let total = bundle.audit.competitions;
    let pct_of = |count: usize, denom: usize| {
        if denom == 0 {
            format!("{count} of {denom}")
        } else {
            format!("{count} of {denom} ({}%)", fmt1(100.0 * count as f64 / denom as f64))
        }
    };
    out.push_str("\n## Winner quality per competition\n\n");
    out.push_str(&format!("Audited competitions: {total}\n\n"));
    out.push_str("| Competitions | O: at least one | O: both | FSS_IF: at least one | FSS_IF: both |\n|---|---|---|---|---|\n");
    let quality_rows = [
        (
            "With unproductive winners",
            bundle.audit.o.at_least_one_unproductive,
            bundle.audit.o.both_unproductive,
            bundle.audit.fss_if.at_least_one_unproductive,
            bundle.audit.fss_if.both_unproductive,
        ),
        (
            "With winners in bottom 20%",
            bundle.audit.o.at_least_one_bottom20,
            bundle.audit.o.both_bottom20,
            bundle.audit.fss_if.at_least_one_bottom20,
            bundle.audit.fss_if.both_bottom20,
        ),
        (
            "With winners below the median",
            bundle.audit.o.at_least_one_below_median,
            bundle.audit.o.both_below_median,
            bundle.audit.fss_if.at_least_one_below_median,
            bundle.audit.fss_if.both_below_median,
        ),
    ];
    for (label, o_one, o_both, f_one, f_both) in quality_rows {
        out.push_str(&format!(
            "| {label} | {} | {} | {} | {} |\n",
            pct_of(o_one, total),
            pct_of(o_both, total),
            pct_of(f_one, total),
            pct_of(f_both, total),
        ));
    }

    out.push_str("\n## Winner-pair patterns\n\n");
    out.push_str(&format!(
        "Two-winner competitions: {}\n\n",
        bundle.audit.pair_competitions
    ));
    out.push_str("| Competitions | O | FSS_IF |\n|---|---|---|\n");
    let pair_rows = [
        (
            "Where average performance of the winners is below the median",
            bundle.audit.o.avg_below_median,
            bundle.audit.fss_if.avg_below_median,
        ),
        (
            "With one winner in bottom 20% and the other top 20%",
            bundle.audit.o.one_bottom20_one_top20,
            bundle.audit.fss_if.one_bottom20_one_top20,
        ),
        (
            "With one winner below median the other in top 20%",
            bundle.audit.o.one_below_median_one_top20,
            bundle.audit.fss_if.one_below_median_one_top20,
        ),
    ];
    for (label, o_count, f_count) in pair_rows {
        out.push_str(&format!(
            "| {label} | {} | {} |\n",
            pct_of(o_count, total),
            pct_of(f_count, total),
        ));
    }

    let outperf = &bundle.outperformance;
    let (d1, d2) = (
        outperf.denominator_at_least_one,
        outperf.denominator_at_least_two,
    );
    out.push_str("\n## Non-winners outperforming winners\n\n");
    out.push_str("| Competitions | O | FSS_IF | Both O and FSS_IF |\n|---|---|---|---|\n");
    let outperf_rows = [
        (
            "Where at least one participant had performance greater than at least one winner",
            outperf.o.one_over_one, outperf.fss_if.one_over_one, outperf.both.one_over_one, d1,
        ),
        (
            "Where at least two participants had performance greater than at least one winner",
            outperf.o.two_over_one, outperf.fss_if.two_over_one, outperf.both.two_over_one, d2,
        ),
        (
            "Where at least one participant had performance greater than both winners",
            outperf.o.one_over_both, outperf.fss_if.one_over_both, outperf.both.one_over_both, d1,
        ),
        (
            "Where at least two participants had performance greater than both winners",
            outperf.o.two_over_both, outperf.fss_if.two_over_both, outperf.both.two_over_both, d2,
        ),
    ];
    for (label, o_count, f_count, b_count, denom) in outperf_rows {
        out.push_str(&format!(
            "| {label} | {} | {} | {} |\n",
            pct_of(o_count, denom),
            pct_of(f_count, denom),
            pct_of(b_count, denom),
        ));
    }

    out.push_str("\n## Outperforming non-winner histogram (FSS_IF)\n\n");
    out.push_str("| k | Competitions (above one winner) | Competitions (above both winners) |\n|---|---|---|\n");
    for (k, entry) in &outperf.histogram {
        out.push_str(&format!("| {k} | {} | {} |\n", entry.above_one, entry.above_both));
    }
    out
}

/// run.log: one decision per line, stable ordering.
pub fn render_run_log(bundle: &ReportBundle) -> String {
    let mut out = String::new();
    for line in &bundle.run_log {
        out.push_str(line);
        out.push('\n');
    }
    out
}

/// Writes every enabled output file under `config.out_dir`.
pub fn write_bundle(bundle: &ReportBundle, config: &RunConfig) -> Result<(), PipelineError> {
    std::fs::create_dir_all(&config.out_dir).map_err(|e| PipelineError::Config {
        message: format!("cannot create output directory {}: {e}", config.out_dir.display()),
    })?;
    let write = |name: &str, contents: String| -> Result<(), PipelineError> {
        std::fs::write(config.out_dir.join(name), contents).map_err(|e| PipelineError::Config {
            message: format!("cannot write {name}: {e}"),
        })
    };
    if config.formats.contains(&OutputFormat::Csv) {
        write("scorecards.csv", render_scorecards_csv(&bundle.scores.scorecards))?;
        write(
            "percentiles.csv",
            render_percentiles_csv(&bundle.scores.scorecards, &bundle.ranking),
        )?;
        write("histogram.csv", render_histogram_csv(&bundle.outperformance))?;
    }
    if config.formats.contains(&OutputFormat::Json) {
        write("scorecards.json", render_scorecards_json(&bundle.scores.scorecards))?;
        write(
            "percentiles.json",
            render_percentiles_json(&bundle.scores.scorecards, &bundle.ranking),
        )?;
        write("audit.json", render_audit_json(bundle))?;
    }
    if config.formats.contains(&OutputFormat::Markdown) {
        write("report.md", render_markdown(bundle))?;
    }
    write("run.log", render_run_log(bundle))?;
    Ok(())
}

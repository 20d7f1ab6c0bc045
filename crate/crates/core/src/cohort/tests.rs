use super::*;
use crate::ingest::{Competition, Researcher, Scheme, Window};
use crate::ranking::{Indicator, PercentileTable};
use chrono::NaiveDate;

fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn researcher(id: &str, sds: &str, rank: Rank, intervals: &[(NaiveDate, NaiveDate)]) -> Researcher {
    Researcher {
        researcher_id: id.to_owned(),
        sds: sds.to_owned(),
        uda: "uda1".to_owned(),
        rank,
        scheme: Scheme::Alphabetical,
        staff_intervals: intervals.to_vec(),
    }
}

fn full_window() -> Vec<(NaiveDate, NaiveDate)> {
    vec![(date(2009, 1, 1), date(2012, 1, 1))]
}

fn card(id: &str, sds: &str, rank: Rank, n: u32, o: f64, fss: f64) -> ScoreCard {
    ScoreCard {
        researcher_id: id.to_owned(),
        sds: sds.to_owned(),
        rank,
        n,
        t: 3.0,
        o,
        fss_if: fss,
    }
}

fn empty_corpus() -> Corpus {
    Corpus {
        roster: BTreeMap::new(),
        publications: vec![],
        journal_metrics: BTreeMap::new(),
        competitions: vec![],
        window: Window::new(2009, 2011).unwrap(),
    }
}

mod t_test {
    use super::*;

    #[test]
    fn identical_samples() {
        let a = [1.0, 2.0, 3.0];
        let result = t_test_two_sample(&a, &a, TTestVariant::Pooled).unwrap();
        assert_eq!(result.t, 0.0);
        assert_eq!(result.p, 1.0);
    }

    #[test]
    fn pooled_reference_case() {
        let a = [1.0, 2.0, 3.0];
        let b = [2.0, 3.0, 4.0];
        let result = t_test_two_sample(&a, &b, TTestVariant::Pooled).unwrap();
        assert!((result.t - (-1.224745)).abs() < 1e-6, "t = {}", result.t);
        assert_eq!(result.df, 4.0);
        assert!((result.p - 0.287864).abs() < 5e-4, "p = {}", result.p);
    }

    #[test]
    fn welch_equal_variances_matches_pooled() {
        let a = [1.0, 2.0, 3.0];
        let b = [2.0, 3.0, 4.0];
        let pooled = t_test_two_sample(&a, &b, TTestVariant::Pooled).unwrap();
        let welch = t_test_two_sample(&a, &b, TTestVariant::Welch).unwrap();
        assert!((pooled.t - welch.t).abs() < 1e-12);
        assert!((pooled.p - welch.p).abs() < 1e-9);
    }

    #[test]
    fn zero_variance_unequal_means() {
        let a = [0.0, 0.0, 0.0, 0.0];
        let b = [1.0, 1.0, 1.0, 1.0];
        assert_eq!(
            t_test_two_sample(&a, &b, TTestVariant::Pooled),
            Err(CohortError::ZeroVariance)
        );
    }

    #[test]
    fn zero_variance_equal_means() {
        let a = [2.0, 2.0];
        let b = [2.0, 2.0, 2.0];
        let result = t_test_two_sample(&a, &b, TTestVariant::Pooled).unwrap();
        assert_eq!((result.t, result.p), (0.0, 1.0));
    }

    #[test]
    fn too_few_observations() {
        assert_eq!(
            t_test_two_sample(&[1.0], &[1.0, 2.0], TTestVariant::Pooled),
            Err(CohortError::TooFewObservations)
        );
    }
}

mod eligibility {
    use super::*;

    fn corpus_with_publishing(total: usize, publishing: usize) -> (Corpus, BTreeMap<String, ScoreCard>) {
        let mut corpus = empty_corpus();
        let mut cards = BTreeMap::new();
        for i in 0..total {
            let id = format!("r{i}");
            corpus.roster.insert(
                id.clone(),
                researcher(&id, "SDS/01", Rank::Assistant, &full_window()),
            );
            let n = if i < publishing { 1 } else { 0 };
            cards.insert(
                id.clone(),
                card(&id, "SDS/01", Rank::Assistant, n, n as f64 / 3.0, 0.0),
            );
        }
        (corpus, cards)
    }

    #[test]
    fn below_threshold_excluded() {
        let (corpus, cards) = corpus_with_publishing(10, 4);
        let result = filter_eligible_sds(&corpus, &cards, &EligibilityConfig::default());
        assert!(result.eligible.is_empty());
        assert!(result.excluded.contains_key("SDS/01"));
    }

    #[test]
    fn boundary_is_inclusive() {
        let (corpus, cards) = corpus_with_publishing(10, 5);
        let result = filter_eligible_sds(&corpus, &cards, &EligibilityConfig::default());
        assert!(result.eligible.contains("SDS/01"));
    }

    #[test]
    fn zero_threshold_retains_all_non_empty() {
        let (corpus, cards) = corpus_with_publishing(3, 0);
        let config = EligibilityConfig {
            min_publishing_share: 0.0,
            ..EligibilityConfig::default()
        };
        let result = filter_eligible_sds(&corpus, &cards, &config);
        assert!(result.eligible.contains("SDS/01"));
    }

    #[test]
    fn competition_only_sds_excluded_with_warning() {
        let (mut corpus, cards) = corpus_with_publishing(2, 2);
        corpus.competitions.push(Competition {
            competition_id: "c1".to_owned(),
            sds: "GHOST/99".to_owned(),
            university_id: "u1".to_owned(),
            candidate_ids: ["r0".to_owned()].into(),
            winner_ids: ["r0".to_owned()].into(),
        });
        let result = filter_eligible_sds(&corpus, &cards, &EligibilityConfig::default());
        assert_eq!(
            result.excluded.get("GHOST/99").map(String::as_str),
            Some("no rostered professors")
        );
    }

    #[test]
    fn continuous_staff_filter() {
        let mut corpus = empty_corpus();
        corpus.roster.insert(
            "covered".to_owned(),
            researcher("covered", "S", Rank::Assistant, &full_window()),
        );
        corpus.roster.insert(
            "late".to_owned(),
            researcher(
                "late",
                "S",
                Rank::Assistant,
                &[(date(2010, 1, 1), date(2012, 1, 1))],
            ),
        );
        // Two adjacent intervals jointly covering the window.
        corpus.roster.insert(
            "pieced".to_owned(),
            researcher(
                "pieced",
                "S",
                Rank::Assistant,
                &[
                    (date(2008, 6, 1), date(2010, 6, 1)),
                    (date(2010, 6, 1), date(2012, 2, 1)),
                ],
            ),
        );
        let ids: Vec<String> = corpus.roster.keys().cloned().collect();
        let kept = filter_continuous_staff(&ids, &corpus);
        assert!(kept.contains("covered"));
        assert!(kept.contains("pieced"));
        assert!(!kept.contains("late"));
    }
}

mod comparison {
    use super::*;

    /// Three winners with FSS percentiles [80, 90, 70] and three incumbents
    /// with [40, 50, 60]: means 80 vs 50, winner top20 share 66.7%.
    fn hand_corpus() -> (Corpus, BTreeMap<String, ScoreCard>, RankingOutcome) {
        let mut corpus = empty_corpus();
        let mut cards = BTreeMap::new();
        let mut fss = BTreeMap::new();
        let mut o = BTreeMap::new();
        let winners = [("w1", 80.0), ("w2", 90.0), ("w3", 70.0)];
        let incumbents = [("i1", 40.0), ("i2", 50.0), ("i3", 60.0)];
        for (id, pct) in winners {
            corpus.roster.insert(
                id.to_owned(),
                researcher(id, "S", Rank::Assistant, &full_window()),
            );
            cards.insert(id.to_owned(), card(id, "S", Rank::Assistant, 2, 1.0, 1.0));
            fss.insert(id.to_owned(), pct);
            o.insert(id.to_owned(), pct);
        }
        for (id, pct) in incumbents {
            corpus.roster.insert(
                id.to_owned(),
                researcher(id, "S", Rank::Associate, &full_window()),
            );
            cards.insert(id.to_owned(), card(id, "S", Rank::Associate, 2, 1.0, 1.0));
            fss.insert(id.to_owned(), pct);
            o.insert(id.to_owned(), pct);
        }
        corpus.competitions.push(Competition {
            competition_id: "c1".to_owned(),
            sds: "S".to_owned(),
            university_id: "u1".to_owned(),
            candidate_ids: ["w1", "w2", "w3"].iter().map(|s| s.to_string()).collect(),
            winner_ids: ["w1", "w2"].iter().map(|s| s.to_string()).collect(),
        });
        corpus.competitions.push(Competition {
            competition_id: "c2".to_owned(),
            sds: "S".to_owned(),
            university_id: "u1".to_owned(),
            candidate_ids: ["w2", "w3"].iter().map(|s| s.to_string()).collect(),
            winner_ids: ["w2", "w3"].iter().map(|s| s.to_string()).collect(),
        });
        let ranking = RankingOutcome {
            o: PercentileTable {
                indicator: Indicator::O,
                percentiles: o,
            },
            fss_if: PercentileTable {
                indicator: Indicator::FssIf,
                percentiles: fss,
            },
            singleton_strata: vec![],
        };
        (corpus, cards, ranking)
    }

    #[test]
    fn hand_counted_statistics() {
        let (corpus, cards, ranking) = hand_corpus();
        let result = compare_winners_vs_incumbents(
            &corpus,
            &cards,
            &ranking,
            &EligibilityConfig::default(),
            TTestVariant::Pooled,
        );
        // w2 won two competitions: counted once.
        assert_eq!(result.winner_ids.len(), 3);
        assert_eq!(result.comparison.winners.observations, 3);
        assert_eq!(result.comparison.incumbents.observations, 3);
        assert_eq!(result.comparison.winners.mean_percentile_fss, Some(80.0));
        assert_eq!(result.comparison.incumbents.mean_percentile_fss, Some(50.0));
        assert!((result.comparison.winners.share_top20 - 200.0 / 3.0).abs() < 1e-9);
        assert_eq!(result.comparison.incumbents.share_top20, 0.0);
        assert!(result.comparison.t_test_fss.is_some());
    }

    #[test]
    fn empty_winner_set() {
        let (mut corpus, cards, ranking) = hand_corpus();
        corpus.competitions.clear();
        let result = compare_winners_vs_incumbents(
            &corpus,
            &cards,
            &ranking,
            &EligibilityConfig::default(),
            TTestVariant::Pooled,
        );
        assert_eq!(result.comparison.winners.observations, 0);
        assert!(result.comparison.t_test_fss.is_none());
        assert!(result.comparison.t_test_o.is_none());
    }

    #[test]
    fn identical_cohorts_give_null_test() {
        let samples = [50.0, 60.0, 70.0];
        let result = t_test_two_sample(&samples, &samples, TTestVariant::Pooled).unwrap();
        assert_eq!((result.t, result.p), (0.0, 1.0));
    }
}

mod audits {
    use super::*;

    fn audit_corpus(
        winner_percentiles: &[(&str, f64, u32, f64)],
    ) -> (Corpus, BTreeMap<String, ScoreCard>, RankingOutcome) {
        // (id, percentile, n, fss value)
        let mut corpus = empty_corpus();
        let mut cards = BTreeMap::new();
        let mut table = BTreeMap::new();
        for (id, pct, n, fss) in winner_percentiles {
            corpus.roster.insert(
                id.to_string(),
                researcher(id, "S", Rank::Assistant, &full_window()),
            );
            cards.insert(
                id.to_string(),
                card(id, "S", Rank::Assistant, *n, *n as f64 / 3.0, *fss),
            );
            table.insert(id.to_string(), *pct);
        }
        // Two publishing fillers keep the SDS share at >= 0.5 even when
        // both winners are non-publishing.
        for filler in ["filler_a", "filler_b"] {
            corpus.roster.insert(
                filler.to_owned(),
                researcher(filler, "S", Rank::Full, &full_window()),
            );
            cards.insert(
                filler.to_owned(),
                card(filler, "S", Rank::Full, 1, 0.33, 0.5),
            );
            table.insert(filler.to_owned(), 50.0);
        }
        corpus.competitions.push(Competition {
            competition_id: "c1".to_owned(),
            sds: "S".to_owned(),
            university_id: "u1".to_owned(),
            candidate_ids: winner_percentiles.iter().map(|w| w.0.to_string()).collect(),
            winner_ids: winner_percentiles.iter().map(|w| w.0.to_string()).collect(),
        });
        let ranking = RankingOutcome {
            o: PercentileTable {
                indicator: Indicator::O,
                percentiles: table.clone(),
            },
            fss_if: PercentileTable {
                indicator: Indicator::FssIf,
                percentiles: table,
            },
            singleton_strata: vec![],
        };
        (corpus, cards, ranking)
    }

    #[test]
    fn bottom20_and_pair_pattern() {
        let (corpus, cards, ranking) =
            audit_corpus(&[("w1", 10.0, 1, 0.1), ("w2", 85.0, 3, 2.0)]);
        let report = audit_competitions(&corpus, &cards, &ranking, &EligibilityConfig::default());
        assert_eq!(report.competitions, 1);
        let flags = &report.audits[0].fss_if;
        assert!(flags.at_least_one_bottom20);
        assert!(!flags.both_bottom20);
        assert_eq!(flags.one_bottom20_one_top20, Some(true));
        assert_eq!(flags.one_below_median_one_top20, Some(true));
        // avg of 10 and 85 is 47.5 -> below median
        assert_eq!(flags.avg_below_median, Some(true));
    }

    #[test]
    fn avg_below_median_from_sixty_thirty() {
        let (corpus, cards, ranking) =
            audit_corpus(&[("w1", 60.0, 2, 1.0), ("w2", 30.0, 1, 0.4)]);
        let report = audit_competitions(&corpus, &cards, &ranking, &EligibilityConfig::default());
        let flags = &report.audits[0].fss_if;
        assert_eq!(flags.avg_below_median, Some(true));
        assert_eq!(flags.one_bottom20_one_top20, Some(false));
    }

    #[test]
    fn both_unproductive_under_o() {
        let (corpus, cards, ranking) = audit_corpus(&[("w1", 0.0, 0, 0.0), ("w2", 5.0, 0, 0.0)]);
        let report = audit_competitions(&corpus, &cards, &ranking, &EligibilityConfig::default());
        let flags = &report.audits[0].o;
        assert!(flags.at_least_one_unproductive);
        assert!(flags.both_unproductive);
        assert_eq!(report.o.both_unproductive, 1);
    }

    #[test]
    fn single_winner_has_no_pair_flags() {
        let (corpus, cards, ranking) = audit_corpus(&[("w1", 10.0, 0, 0.0)]);
        let report = audit_competitions(&corpus, &cards, &ranking, &EligibilityConfig::default());
        let flags = &report.audits[0].fss_if;
        assert!(flags.at_least_one_bottom20);
        assert_eq!(flags.avg_below_median, None);
        assert_eq!(flags.one_bottom20_one_top20, None);
        assert_eq!(report.pair_competitions, 0);
    }

    #[test]
    fn off_staff_winner_skips_competition() {
        let (mut corpus, cards, ranking) =
            audit_corpus(&[("w1", 10.0, 1, 0.1), ("w2", 85.0, 3, 2.0)]);
        corpus.roster.get_mut("w1").unwrap().staff_intervals =
            vec![(date(2010, 1, 1), date(2012, 1, 1))];
        let report = audit_competitions(&corpus, &cards, &ranking, &EligibilityConfig::default());
        assert_eq!(report.competitions, 0);
        assert_eq!(report.skipped.len(), 1);
    }
}

mod outperformance {
    use super::*;

    fn outperf_corpus(
        winners: &[(&str, f64, f64)],
        non_winners: &[(&str, f64, f64)],
    ) -> (Corpus, BTreeMap<String, ScoreCard>) {
        // (id, o value, fss value)
        let mut corpus = empty_corpus();
        let mut cards = BTreeMap::new();
        for (id, o, fss) in winners.iter().chain(non_winners) {
            corpus.roster.insert(
                id.to_string(),
                researcher(id, "S", Rank::Assistant, &full_window()),
            );
            cards.insert(
                id.to_string(),
                card(id, "S", Rank::Assistant, 1, *o, *fss),
            );
        }
        corpus.competitions.push(Competition {
            competition_id: "c1".to_owned(),
            sds: "S".to_owned(),
            university_id: "u1".to_owned(),
            candidate_ids: winners
                .iter()
                .chain(non_winners)
                .map(|w| w.0.to_string())
                .collect(),
            winner_ids: winners.iter().map(|w| w.0.to_string()).collect(),
        });
        (corpus, cards)
    }

    #[test]
    fn hand_checked_example() {
        // winners fss {0.5, 0.8}, non-winners {0.6, 0.9}
        let (corpus, cards) = outperf_corpus(
            &[("w1", 0.5, 0.5), ("w2", 0.8, 0.8)],
            &[("n1", 0.6, 0.6), ("n2", 0.9, 0.9)],
        );
        let result = outperformance_analysis(&corpus, &cards, &EligibilityConfig::default());
        let entry = &result.per_competition[0];
        assert_eq!(entry.fss_if.over_at_least_one, 2);
        assert_eq!(entry.fss_if.over_both, 1);
        assert_eq!(result.fss_if.one_over_one, 1);
        assert_eq!(result.fss_if.one_over_both, 1);
        assert_eq!(result.fss_if.two_over_one, 1);
        assert_eq!(result.fss_if.two_over_both, 0);
    }

    #[test]
    fn ties_do_not_count() {
        let (corpus, cards) = outperf_corpus(
            &[("w1", 0.5, 0.5)],
            &[("n1", 0.5, 0.5)],
        );
        let result = outperformance_analysis(&corpus, &cards, &EligibilityConfig::default());
        let entry = &result.per_competition[0];
        assert_eq!(entry.fss_if.over_at_least_one, 0);
        assert_eq!(entry.o.over_at_least_one, 0);
    }

    #[test]
    fn no_eligible_non_winners_excluded() {
        let (mut corpus, cards) = outperf_corpus(
            &[("w1", 0.5, 0.5)],
            &[("n1", 0.9, 0.9)],
        );
        // Non-winner is an associate: not eligible.
        corpus.roster.get_mut("n1").unwrap().rank = Rank::Associate;
        let result = outperformance_analysis(&corpus, &cards, &EligibilityConfig::default());
        assert_eq!(result.denominator_at_least_one, 0);
        assert!(result.per_competition.is_empty());
    }

    #[test]
    fn external_candidates_never_eligible() {
        let (mut corpus, cards) = outperf_corpus(
            &[("w1", 0.5, 0.5)],
            &[("n1", 0.9, 0.9)],
        );
        let nv = corpus.roster.get_mut("n1").unwrap();
        nv.rank = Rank::External;
        nv.staff_intervals.clear();
        let result = outperformance_analysis(&corpus, &cards, &EligibilityConfig::default());
        assert_eq!(result.denominator_at_least_one, 0);
    }

    #[test]
    fn histogram_matches_counters() {
        let (corpus, cards) = outperf_corpus(
            &[("w1", 0.5, 0.5), ("w2", 0.8, 0.8)],
            &[("n1", 0.6, 0.6), ("n2", 0.9, 0.9), ("n3", 0.1, 0.1)],
        );
        let result = outperformance_analysis(&corpus, &cards, &EligibilityConfig::default());
        let above_one_total: usize = result.histogram.values().map(|h| h.above_one).sum();
        assert_eq!(above_one_total, result.fss_if.one_over_one);
    }

    #[test]
    fn conjunction_never_exceeds_single_indicator() {
        // n1 beats w1 on O only; n2 beats on both.
        let (corpus, cards) = outperf_corpus(
            &[("w1", 0.5, 0.9)],
            &[("n1", 0.7, 0.1), ("n2", 0.8, 1.0)],
        );
        let result = outperformance_analysis(&corpus, &cards, &EligibilityConfig::default());
        let entry = &result.per_competition[0];
        assert_eq!(entry.o.over_at_least_one, 2);
        assert_eq!(entry.both.over_at_least_one, 1);
        assert!(entry.both.over_at_least_one <= entry.o.over_at_least_one);
        assert!(entry.both.over_at_least_one <= entry.fss_if.over_at_least_one);
    }
}

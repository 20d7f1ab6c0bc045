//! Shared support for the integration suite: a seeded random corpus
//! generator and a deliberately naive re-implementation of the scoring
//! rules, kept structurally independent from the library code so the two
//! can cross-check each other.

// Each integration target compiles this module separately and uses a
// different subset of it.
#![allow(dead_code)]

use fss_audit::ingest::{
    Authorship, Competition, Corpus, DocType, JournalYearMetric, Publication, Rank, Researcher,
    Scheme, Window,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

const CATEGORIES: &[&str] = &["CA", "CB", "CC"];
const INSTITUTIONS: &[&str] = &["inst1", "inst2", "inst3", "inst4", "inst5"];
const UNIVERSITIES: &[&str] = &["uniA", "uniB", "uniC"];

/// Tunable sizes for [`gen_corpus`].
#[derive(Clone, Copy)]
pub struct GenLimits {
    pub max_researchers: usize,
    pub max_publications: usize,
    pub max_sds: usize,
    pub max_competitions: usize,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits {
            max_researchers: 50,
            max_publications: 200,
            max_sds: 5,
            max_competitions: 6,
        }
    }
}

/// Builds a structurally valid random corpus for the 2009-2011 window.
/// Identical seeds yield identical corpora.
pub fn gen_corpus(seed: u64, limits: GenLimits) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let window = Window::new(2009, 2011).unwrap();
    let lo = window.start_date();
    let hi = window.end_date_exclusive();

    let n_sds = rng.random_range(1..=limits.max_sds);
    let sds_pool: Vec<String> = (1..=n_sds).map(|i| format!("SDS{i:02}")).collect();

    let mut roster = BTreeMap::new();
    let n_researchers = rng.random_range(3..=limits.max_researchers.max(3));
    for i in 0..n_researchers {
        let id = format!("r{i:04}");
        let rank = match rng.random_range(0..10) {
            0..=3 => Rank::Assistant,
            4..=6 => Rank::Associate,
            7..=8 => Rank::Full,
            _ => Rank::External,
        };
        let staff_intervals = if rank == Rank::External {
            Vec::new()
        } else if rng.random_bool(0.6) {
            // Full-window presence, possibly with slack on both sides.
            vec![(
                lo - chrono::Days::new(rng.random_range(0..400)),
                hi + chrono::Days::new(rng.random_range(0..400)),
            )]
        } else {
            // Partial presence: one or two disjoint intervals.
            let mut intervals = Vec::new();
            let mut cursor = lo - chrono::Days::new(rng.random_range(0..600));
            for _ in 0..rng.random_range(1..=2usize) {
                let start = cursor + chrono::Days::new(rng.random_range(0..300));
                let end = start + chrono::Days::new(rng.random_range(30..900));
                intervals.push((start, end));
                cursor = end + chrono::Days::new(1);
            }
            intervals
        };
        roster.insert(
            id.clone(),
            Researcher {
                researcher_id: id,
                sds: sds_pool.choose(&mut rng).unwrap().clone(),
                uda: format!("UDA{}", rng.random_range(1..=2)),
                rank,
                scheme: if rng.random_bool(0.5) {
                    Scheme::Alphabetical
                } else {
                    Scheme::PositionWeighted
                },
                staff_intervals,
            },
        );
    }
    let internal_ids: Vec<String> = roster
        .values()
        .filter(|r| r.rank != Rank::External)
        .map(|r| r.researcher_id.clone())
        .collect();

    let mut journal_metrics = BTreeMap::new();
    let n_journals = rng.random_range(3..=12usize);
    for j in 0..n_journals {
        let journal_id = format!("jrnl{j:02}");
        let n_cats = rng.random_range(1..=2);
        let mut cats: Vec<String> = CATEGORIES
            .choose_multiple(&mut rng, n_cats)
            .map(|s| s.to_string())
            .collect();
        cats.sort();
        for year in 2008..=2012 {
            if rng.random_bool(0.2) {
                continue; // journal-year absent from the registry
            }
            let impact_factor = if rng.random_bool(0.15) {
                None
            } else {
                Some((rng.random_range(0..100) as f64) / 10.0)
            };
            journal_metrics.insert(
                (journal_id.clone(), year),
                JournalYearMetric {
                    journal_id: journal_id.clone(),
                    year,
                    impact_factor,
                    categories: if impact_factor.is_some() {
                        cats.clone()
                    } else {
                        Vec::new()
                    },
                },
            );
        }
    }

    let mut publications = Vec::new();
    let n_pubs = rng.random_range(0..=limits.max_publications);
    for p in 0..n_pubs {
        let byline_len = rng.random_range(1..=8usize);
        let mut matched: Vec<Option<String>> = Vec::with_capacity(byline_len);
        let mut pool = internal_ids.clone();
        pool.shuffle(&mut rng);
        for _ in 0..byline_len {
            if rng.random_bool(0.6) {
                matched.push(pool.pop());
            } else {
                matched.push(None);
            }
        }
        let byline = matched
            .into_iter()
            .enumerate()
            .map(|(i, researcher_id)| Authorship {
                position: i + 1,
                researcher_id,
                institution_id: INSTITUTIONS.choose(&mut rng).unwrap().to_string(),
            })
            .collect();
        publications.push(Publication {
            pub_id: format!("pub{p:05}"),
            year: rng.random_range(2008..=2012),
            doc_type: match rng.random_range(0..3) {
                0 => DocType::Article,
                1 => DocType::Review,
                _ => DocType::Proceedings,
            },
            journal_id: format!("jrnl{:02}", rng.random_range(0..n_journals)),
            byline,
        });
    }
    publications.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));

    let mut competitions = Vec::new();
    if !internal_ids.is_empty() {
        for c in 0..rng.random_range(0..=limits.max_competitions) {
            let all_ids: Vec<&String> = roster.keys().collect();
            let n_candidates = rng.random_range(2..=6usize).min(all_ids.len());
            let candidate_ids: BTreeSet<String> = all_ids
                .choose_multiple(&mut rng, n_candidates)
                .map(|s| (*s).clone())
                .collect();
            let n_winners = if candidate_ids.len() >= 2 && rng.random_bool(0.5) {
                2
            } else {
                1
            };
            let winner_ids: BTreeSet<String> = candidate_ids
                .iter()
                .cloned()
                .collect::<Vec<_>>()
                .choose_multiple(&mut rng, n_winners)
                .cloned()
                .collect();
            competitions.push(Competition {
                competition_id: format!("comp{c:03}"),
                sds: sds_pool.choose(&mut rng).unwrap().clone(),
                university_id: UNIVERSITIES.choose(&mut rng).unwrap().to_string(),
                candidate_ids,
                winner_ids,
            });
        }
    }

    Corpus {
        roster,
        publications,
        journal_metrics,
        competitions,
        window,
    }
}

/// Brute-force scorecard; all quantities recomputed from first principles.
pub struct NaiveCard {
    pub n: u32,
    pub t: f64,
    pub o: f64,
    pub fss_if: f64,
}

fn naive_days_on_staff(researcher: &Researcher, window: Window) -> i64 {
    // Walk day by day would be O(days); instead clamp each interval, which
    // is still independent of the library's implementation details.
    let lo = window.start_date();
    let hi = window.end_date_exclusive();
    researcher
        .staff_intervals
        .iter()
        .map(|&(s, e)| {
            let s = if s < lo { lo } else { s };
            let e = if e > hi { hi } else { e };
            if e > s {
                (e - s).num_days()
            } else {
                0
            }
        })
        .sum()
}

fn naive_category_mean(corpus: &Corpus, category: &str, year: i32) -> Option<f64> {
    let values: Vec<f64> = corpus
        .journal_metrics
        .values()
        .filter(|m| m.year == year && m.categories.iter().any(|c| c == category))
        .filter_map(|m| m.impact_factor)
        .collect();
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

pub fn naive_impact(corpus: &Corpus, publication: &Publication) -> f64 {
    let Some(metric) = corpus
        .journal_metrics
        .get(&(publication.journal_id.clone(), publication.year))
    else {
        return 0.0;
    };
    let Some(impact) = metric.impact_factor else {
        return 0.0;
    };
    if impact == 0.0 {
        return 0.0;
    }
    let ratios: Vec<f64> = metric
        .categories
        .iter()
        .map(|c| impact / naive_category_mean(corpus, c, metric.year).expect("journal present"))
        .collect();
    ratios.iter().sum::<f64>() / ratios.len() as f64
}

/// Closed-form weight of byline position `pos` (0-based), computed without
/// materializing the whole weight vector.
pub fn naive_weight(byline: &[Authorship], pos: usize, scheme: Scheme) -> f64 {
    let n = byline.len();
    if scheme == Scheme::Alphabetical {
        return 1.0 / n as f64;
    }
    match n {
        1 => 1.0,
        2 => 0.5,
        3 => [0.4, 0.2, 0.4][pos],
        _ if byline[0].institution_id == byline[n - 1].institution_id => {
            if pos == 0 || pos == n - 1 {
                0.40
            } else {
                0.20 / (n - 2) as f64
            }
        }
        4 => [0.30, 0.20, 0.20, 0.30][pos],
        _ => {
            if pos == 0 || pos == n - 1 {
                0.30
            } else if pos == 1 || pos == n - 2 {
                0.15
            } else {
                0.10 / (n - 4) as f64
            }
        }
    }
}

/// Independent evaluation of one researcher. `None` when the researcher has
/// no staff presence inside the window.
pub fn naive_score(corpus: &Corpus, researcher_id: &str) -> Option<NaiveCard> {
    let researcher = corpus.roster.get(researcher_id)?;
    let days = naive_days_on_staff(researcher, corpus.window);
    if days <= 0 {
        return None;
    }
    let t = days as f64 / 365.25;
    let mut n = 0u32;
    let mut weighted = 0.0;
    for publication in &corpus.publications {
        if publication.year < corpus.window.start_year
            || publication.year > corpus.window.end_year
        {
            continue;
        }
        let Some(pos) = publication
            .byline
            .iter()
            .position(|a| a.researcher_id.as_deref() == Some(researcher_id))
        else {
            continue;
        };
        n += 1;
        let impact = naive_impact(corpus, publication);
        if impact > 0.0 {
            weighted += impact * naive_weight(&publication.byline, pos, researcher.scheme);
        }
    }
    Some(NaiveCard {
        n,
        t,
        o: n as f64 / t,
        fss_if: weighted / t,
    })
}

/// Midrank percentile computed by sorting, unlike the library's counting
/// implementation.
pub fn naive_percentile(values: &[f64], subject_index: usize) -> f64 {
    let n = values.len();
    if n == 1 {
        return 50.0;
    }
    let subject = values[subject_index];
    let mut sorted: Vec<(f64, bool)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i == subject_index))
        .collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let first = sorted.iter().position(|&(v, _)| v == subject).unwrap();
    let last = sorted.iter().rposition(|&(v, _)| v == subject).unwrap();
    // Average rank over the tie block, excluding the subject's own slot.
    100.0 * ((first + last) as f64 / 2.0) / (n as f64 - 1.0)
}

pub fn relative_error(actual: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        actual.abs()
    } else {
        ((actual - expected) / expected).abs()
    }
}

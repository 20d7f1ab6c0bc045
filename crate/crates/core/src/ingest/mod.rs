//! Corpus ingestion: loading, validation, and cross-linking of the four
//! input tables (roster, publications + authorships, journal metrics,
//! competitions).
//!
//! Input files are UTF-8 CSV with header rows (RFC-4180 quoting) or a JSON
//! mirror (array of records with the same field names); the format is
//! auto-detected from the file extension.

mod load;
mod serialize;

pub use load::{load_corpus, CorpusPaths};
pub use serialize::write_corpus;

use chrono::NaiveDate;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Academic rank. `External` marks competition candidates from outside
/// academia; they never appear in percentile strata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rank {
    Assistant,
    Associate,
    Full,
    External,
}

impl Rank {
    pub fn as_str(self) -> &'static str {
        match self {
            Rank::Assistant => "assistant",
            Rank::Associate => "associate",
            Rank::Full => "full",
            Rank::External => "external",
        }
    }

    pub fn parse(s: &str) -> Option<Rank> {
        match s {
            "assistant" => Some(Rank::Assistant),
            "associate" => Some(Rank::Associate),
            "full" => Some(Rank::Full),
            "external" => Some(Rank::External),
            _ => None,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fractional-counting scheme applied to a researcher's publications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scheme {
    /// Equal split: 1 / (number of authors).
    Alphabetical,
    /// Byline-position weighting used in the life sciences.
    PositionWeighted,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Alphabetical => "alphabetical",
            Scheme::PositionWeighted => "position_weighted",
        }
    }

    pub fn parse(s: &str) -> Option<Scheme> {
        match s {
            "alphabetical" => Some(Scheme::Alphabetical),
            "position_weighted" => Some(Scheme::PositionWeighted),
            _ => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Document kinds counted as research output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DocType {
    Article,
    Review,
    Proceedings,
}

impl DocType {
    pub fn as_str(self) -> &'static str {
        match self {
            DocType::Article => "article",
            DocType::Review => "review",
            DocType::Proceedings => "proceedings",
        }
    }

    pub fn parse(s: &str) -> Option<DocType> {
        match s {
            "article" => Some(DocType::Article),
            "review" => Some(DocType::Review),
            "proceedings" => Some(DocType::Proceedings),
            _ => None,
        }
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inclusive observation window, e.g. `(2009, 2011)` spans three full years.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start_year: i32,
    pub end_year: i32,
}

impl Window {
    pub fn new(start_year: i32, end_year: i32) -> Option<Window> {
        if start_year <= end_year {
            Some(Window { start_year, end_year })
        } else {
            None
        }
    }

    pub fn contains_year(&self, year: i32) -> bool {
        (self.start_year..=self.end_year).contains(&year)
    }

    /// First calendar day of the window.
    pub fn start_date(&self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.start_year, 1, 1).expect("valid year")
    }

    /// First calendar day after the window (half-open upper bound).
    pub fn end_date_exclusive(&self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.end_year + 1, 1, 1).expect("valid year")
    }
}

/// A rostered researcher (or an external competition candidate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Researcher {
    pub researcher_id: String,
    /// Fine-grained field code (SDS), e.g. "MAT/03". Exactly one per researcher.
    pub sds: String,
    /// Coarse discipline group (UDA).
    pub uda: String,
    pub rank: Rank,
    pub scheme: Scheme,
    /// Half-open `[start, end)` staff presence intervals, chronologically
    /// ordered and non-overlapping.
    pub staff_intervals: Vec<(NaiveDate, NaiveDate)>,
}

impl Researcher {
    /// Fractional years of staff presence inside `window` (days / 365.25).
    pub fn staff_years_in_window(&self, window: Window) -> f64 {
        let lo = window.start_date();
        let hi = window.end_date_exclusive();
        let mut days: i64 = 0;
        for &(start, end) in &self.staff_intervals {
            let s = start.max(lo);
            let e = end.min(hi);
            if s < e {
                days += (e - s).num_days();
            }
        }
        days as f64 / 365.25
    }

    /// True when the union of staff intervals covers the whole window.
    pub fn covers_window(&self, window: Window) -> bool {
        let mut cursor = window.start_date();
        let hi = window.end_date_exclusive();
        for &(start, end) in &self.staff_intervals {
            if start > cursor {
                break;
            }
            if end > cursor {
                cursor = end;
            }
            if cursor >= hi {
                return true;
            }
        }
        cursor >= hi
    }
}

/// One byline entry of a publication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Authorship {
    /// 1-based byline position.
    pub position: usize,
    /// Present when the author was matched to a rostered researcher.
    pub researcher_id: Option<String>,
    pub institution_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publication {
    pub pub_id: String,
    pub year: i32,
    pub doc_type: DocType,
    pub journal_id: String,
    /// Ordered byline; positions are `1..=len` contiguous.
    pub byline: Vec<Authorship>,
}

impl Publication {
    /// Journal-year key used to look up impact metrics.
    pub fn journal_ref(&self) -> (&str, i32) {
        (&self.journal_id, self.year)
    }
}

/// Impact-factor record for one journal in one year.
#[derive(Debug, Clone, PartialEq)]
pub struct JournalYearMetric {
    pub journal_id: String,
    pub year: i32,
    /// `None` when no impact factor was published for this journal-year.
    pub impact_factor: Option<f64>,
    /// Subject-category codes; non-empty whenever `impact_factor` is present.
    pub categories: Vec<String>,
}

/// One recruitment competition with its candidate and winner sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Competition {
    pub competition_id: String,
    pub sds: String,
    pub university_id: String,
    pub candidate_ids: BTreeSet<String>,
    /// Size 1 or 2, always a subset of `candidate_ids`.
    pub winner_ids: BTreeSet<String>,
}

/// The cross-linked, immutable input corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub roster: BTreeMap<String, Researcher>,
    /// Sorted by `pub_id` so downstream sums are order-independent.
    pub publications: Vec<Publication>,
    pub journal_metrics: BTreeMap<(String, i32), JournalYearMetric>,
    /// Sorted by `competition_id`.
    pub competitions: Vec<Competition>,
    pub window: Window,
}

/// Errors raised while loading input files.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: u64,
        message: String,
    },
    #[error("{file}: duplicate key `{key}`")]
    DuplicateKey { file: String, key: String },
    #[error("{path}: unsupported file extension (expected .csv or .json)")]
    UnsupportedFormat { path: String },
}

/// A single validation finding. Findings are sorted and deduplicated so the
/// report is independent of input row order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    /// A corpus is accepted iff it produced zero errors (warnings permitted).
    pub fn accepted(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Cross-reference and invariant checks over a loaded corpus.
///
/// Errors: winners outside their candidate set, candidates or byline authors
/// missing from the roster, external researchers with staff presence.
/// Warnings: publications citing unknown journal-years (scored as no-impact),
/// researchers with zero staff overlap with the window, publications dated
/// outside the window, competition SDSs absent from the roster.
pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();

    let roster_sds: BTreeSet<&str> = corpus.roster.values().map(|r| r.sds.as_str()).collect();

    for competition in &corpus.competitions {
        for winner in &competition.winner_ids {
            if !competition.candidate_ids.contains(winner) {
                errors.push(Finding {
                    code: "winner_outside_candidate_set",
                    message: format!(
                        "competition {}: winner {winner} outside candidate set",
                        competition.competition_id
                    ),
                });
            }
        }
        for candidate in &competition.candidate_ids {
            if !corpus.roster.contains_key(candidate) {
                errors.push(Finding {
                    code: "unknown_candidate",
                    message: format!(
                        "competition {}: candidate {candidate} not in roster",
                        competition.competition_id
                    ),
                });
            }
        }
        if !roster_sds.contains(competition.sds.as_str()) {
            warnings.push(Finding {
                code: "unknown_competition_sds",
                message: format!(
                    "competition {}: sds {} has no rostered researchers",
                    competition.competition_id, competition.sds
                ),
            });
        }
    }

    for publication in &corpus.publications {
        let key = (publication.journal_id.clone(), publication.year);
        if !corpus.journal_metrics.contains_key(&key) {
            warnings.push(Finding {
                code: "unknown_journal_year",
                message: format!(
                    "publication {}: journal-year ({}, {}) not in journal metrics; scored as no-impact",
                    publication.pub_id, publication.journal_id, publication.year
                ),
            });
        }
        if !corpus.window.contains_year(publication.year) {
            warnings.push(Finding {
                code: "publication_outside_window",
                message: format!(
                    "publication {}: year {} outside observation window",
                    publication.pub_id, publication.year
                ),
            });
        }
        for authorship in &publication.byline {
            if let Some(id) = &authorship.researcher_id {
                if !corpus.roster.contains_key(id) {
                    errors.push(Finding {
                        code: "unknown_author",
                        message: format!(
                            "publication {}: byline researcher {id} not in roster",
                            publication.pub_id
                        ),
                    });
                }
            }
        }
    }

    for researcher in corpus.roster.values() {
        if researcher.rank == Rank::External {
            if !researcher.staff_intervals.is_empty() {
                errors.push(Finding {
                    code: "external_on_staff",
                    message: format!(
                        "researcher {}: rank external but has staff intervals",
                        researcher.researcher_id
                    ),
                });
            }
        } else if researcher.staff_years_in_window(corpus.window) <= 0.0 {
            warnings.push(Finding {
                code: "no_staff_overlap",
                message: format!(
                    "researcher {}: no staff overlap with observation window",
                    researcher.researcher_id
                ),
            });
        }
    }

    errors.sort();
    errors.dedup();
    warnings.sort();
    warnings.dedup();
    ValidationReport { errors, warnings }
}

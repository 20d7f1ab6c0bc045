//! File loading and record assembly.

use super::*;
use chrono::NaiveDate;
use serde::Deserialize;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Paths to the input tables. `authorships` is the byline companion of
/// `publications`.
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub roster: PathBuf,
    pub publications: PathBuf,
    pub authorships: PathBuf,
    pub journals: PathBuf,
    pub competitions: PathBuf,
}

#[derive(Debug, Deserialize)]
struct RosterRow {
    researcher_id: String,
    sds: String,
    uda: String,
    rank: String,
    #[serde(default)]
    scheme: Option<String>,
    #[serde(default)]
    staff_start: Option<String>,
    #[serde(default)]
    staff_end: Option<String>,
}

#[derive(Debug, Deserialize)]
struct PublicationRow {
    pub_id: String,
    year: i32,
    doc_type: String,
    journal_id: String,
}

#[derive(Debug, Deserialize)]
struct AuthorshipRow {
    pub_id: String,
    position: usize,
    #[serde(default)]
    researcher_id: Option<String>,
    institution_id: String,
}

#[derive(Debug, Deserialize)]
struct JournalRow {
    journal_id: String,
    year: i32,
    #[serde(default)]
    impact_factor: Option<f64>,
    categories: String,
}

#[derive(Debug, Deserialize)]
struct CompetitionRow {
    competition_id: String,
    sds: String,
    university_id: String,
    candidate_id: String,
    is_winner: String,
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn malformed(file: &Path, line: u64, message: impl Into<String>) -> LoadError {
    LoadError::Malformed {
        file: file_name(file),
        line,
        message: message.into(),
    }
}

/// Reads a CSV or JSON table into `(line, row)` pairs. For JSON the "line"
/// is the 1-based record index, which keeps diagnostics usable.
fn read_rows<R: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<(u64, R)>, LoadError> {
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase());
    match ext.as_deref() {
        Some("csv") => read_csv_rows(path),
        Some("json") => read_json_rows(path),
        _ => Err(LoadError::UnsupportedFormat {
            path: path.display().to_string(),
        }),
    }
}

fn read_csv_rows<R: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<(u64, R)>, LoadError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => LoadError::Io {
                path: path.display().to_string(),
                source,
            },
            other => malformed(path, 0, format!("{other:?}")),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| malformed(path, 1, e.to_string()))?
        .clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            malformed(path, line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row: R = record
            .deserialize(Some(&headers))
            .map_err(|e| malformed(path, line, e.to_string()))?;
        rows.push((line, row));
    }
    Ok(rows)
}

fn read_json_rows<R: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<(u64, R)>, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let rows: Vec<R> = serde_json::from_str(&text)
        .map_err(|e| malformed(path, e.line() as u64, e.to_string()))?;
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| (i as u64 + 1, r))
        .collect())
}

fn non_empty(value: &str, field: &str, file: &Path, line: u64) -> Result<(), LoadError> {
    if value.is_empty() {
        Err(malformed(file, line, format!("missing {field} at line {line}")))
    } else {
        Ok(())
    }
}

fn parse_date(s: &str, field: &str, file: &Path, line: u64) -> Result<NaiveDate, LoadError> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|e| malformed(file, line, format!("field `{field}`: {e}")))
}

fn load_roster(
    path: &Path,
    default_scheme: Scheme,
) -> Result<BTreeMap<String, Researcher>, LoadError> {
    let rows: Vec<(u64, RosterRow)> = read_rows(path)?;
    let mut roster: BTreeMap<String, Researcher> = BTreeMap::new();
    for (line, row) in rows {
        non_empty(&row.researcher_id, "researcher_id", path, line)?;
        non_empty(&row.sds, "sds", path, line)?;
        non_empty(&row.uda, "uda", path, line)?;
        let rank = Rank::parse(&row.rank)
            .ok_or_else(|| malformed(path, line, format!("unknown rank `{}`", row.rank)))?;
        let scheme = match row.scheme.as_deref() {
            None | Some("") => default_scheme,
            Some(s) => Scheme::parse(s)
                .ok_or_else(|| malformed(path, line, format!("unknown scheme `{s}`")))?,
        };
        let interval = match (row.staff_start.as_deref(), row.staff_end.as_deref()) {
            (None | Some(""), None | Some("")) => None,
            (Some(start), Some(end)) if !start.is_empty() && !end.is_empty() => {
                let start = parse_date(start, "staff_start", path, line)?;
                let end = parse_date(end, "staff_end", path, line)?;
                if start >= end {
                    return Err(malformed(
                        path,
                        line,
                        format!("staff interval {start}..{end} is empty or inverted"),
                    ));
                }
                Some((start, end))
            }
            _ => {
                return Err(malformed(
                    path,
                    line,
                    "staff_start and staff_end must both be present or both blank",
                ))
            }
        };
        match roster.entry(row.researcher_id.clone()) {
            Entry::Vacant(slot) => {
                slot.insert(Researcher {
                    researcher_id: row.researcher_id,
                    sds: row.sds,
                    uda: row.uda,
                    rank,
                    scheme,
                    staff_intervals: interval.into_iter().collect(),
                });
            }
            Entry::Occupied(mut slot) => {
                let existing = slot.get_mut();
                let consistent = existing.sds == row.sds
                    && existing.uda == row.uda
                    && existing.rank == rank
                    && existing.scheme == scheme;
                let interval = interval.ok_or_else(|| LoadError::DuplicateKey {
                    file: file_name(path),
                    key: row.researcher_id.clone(),
                })?;
                if !consistent || existing.staff_intervals.contains(&interval) {
                    return Err(LoadError::DuplicateKey {
                        file: file_name(path),
                        key: row.researcher_id,
                    });
                }
                existing.staff_intervals.push(interval);
            }
        }
    }
    for researcher in roster.values_mut() {
        researcher.staff_intervals.sort();
        for pair in researcher.staff_intervals.windows(2) {
            if pair[1].0 < pair[0].1 {
                return Err(malformed(
                    path,
                    0,
                    format!(
                        "researcher {}: overlapping staff intervals",
                        researcher.researcher_id
                    ),
                ));
            }
        }
    }
    Ok(roster)
}

fn load_publications(
    pubs_path: &Path,
    authorships_path: &Path,
) -> Result<Vec<Publication>, LoadError> {
    let rows: Vec<(u64, PublicationRow)> = read_rows(pubs_path)?;
    let mut publications: BTreeMap<String, Publication> = BTreeMap::new();
    for (line, row) in rows {
        non_empty(&row.pub_id, "pub_id", pubs_path, line)?;
        non_empty(&row.journal_id, "journal_id", pubs_path, line)?;
        let doc_type = DocType::parse(&row.doc_type).ok_or_else(|| {
            malformed(pubs_path, line, format!("unknown doc_type `{}`", row.doc_type))
        })?;
        let previous = publications.insert(
            row.pub_id.clone(),
            Publication {
                pub_id: row.pub_id.clone(),
                year: row.year,
                doc_type,
                journal_id: row.journal_id,
                byline: Vec::new(),
            },
        );
        if previous.is_some() {
            return Err(LoadError::DuplicateKey {
                file: file_name(pubs_path),
                key: row.pub_id,
            });
        }
    }

    let rows: Vec<(u64, AuthorshipRow)> = read_rows(authorships_path)?;
    for (line, row) in rows {
        non_empty(&row.pub_id, "pub_id", authorships_path, line)?;
        non_empty(&row.institution_id, "institution_id", authorships_path, line)?;
        let publication = publications.get_mut(&row.pub_id).ok_or_else(|| {
            malformed(
                authorships_path,
                line,
                format!("authorship references unknown publication `{}`", row.pub_id),
            )
        })?;
        publication.byline.push(Authorship {
            position: row.position,
            researcher_id: row.researcher_id.filter(|s| !s.is_empty()),
            institution_id: row.institution_id,
        });
    }

    for publication in publications.values_mut() {
        publication.byline.sort_by_key(|a| a.position);
        if publication.byline.is_empty() {
            return Err(malformed(
                pubs_path,
                0,
                format!("publication {}: empty byline", publication.pub_id),
            ));
        }
        for (i, authorship) in publication.byline.iter().enumerate() {
            if authorship.position != i + 1 {
                return Err(malformed(
                    authorships_path,
                    0,
                    format!(
                        "publication {}: byline positions are not contiguous 1..{}",
                        publication.pub_id,
                        publication.byline.len()
                    ),
                ));
            }
        }
        let mut seen = BTreeSet::new();
        for authorship in &publication.byline {
            if let Some(id) = &authorship.researcher_id {
                if !seen.insert(id.clone()) {
                    return Err(malformed(
                        authorships_path,
                        0,
                        format!(
                            "publication {}: researcher {id} appears twice in byline",
                            publication.pub_id
                        ),
                    ));
                }
            }
        }
    }
    Ok(publications.into_values().collect())
}

fn load_journals(path: &Path) -> Result<BTreeMap<(String, i32), JournalYearMetric>, LoadError> {
    let rows: Vec<(u64, JournalRow)> = read_rows(path)?;
    let mut metrics = BTreeMap::new();
    for (line, row) in rows {
        non_empty(&row.journal_id, "journal_id", path, line)?;
        let categories: Vec<String> = row
            .categories
            .split(';')
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        if let Some(impact_factor) = row.impact_factor {
            if !impact_factor.is_finite() || impact_factor < 0.0 {
                return Err(malformed(
                    path,
                    line,
                    format!("impact_factor must be a non-negative real, got {impact_factor}"),
                ));
            }
            if categories.is_empty() {
                return Err(malformed(
                    path,
                    line,
                    "categories must be non-empty when impact_factor is present",
                ));
            }
        }
        let key = (row.journal_id.clone(), row.year);
        let previous = metrics.insert(
            key,
            JournalYearMetric {
                journal_id: row.journal_id.clone(),
                year: row.year,
                impact_factor: row.impact_factor,
                categories,
            },
        );
        if previous.is_some() {
            return Err(LoadError::DuplicateKey {
                file: file_name(path),
                key: format!("({}, {})", row.journal_id, row.year),
            });
        }
    }
    Ok(metrics)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

fn load_competitions(path: &Path) -> Result<Vec<Competition>, LoadError> {
    let rows: Vec<(u64, CompetitionRow)> = read_rows(path)?;
    let mut competitions: BTreeMap<String, Competition> = BTreeMap::new();
    for (line, row) in rows {
        non_empty(&row.competition_id, "competition_id", path, line)?;
        non_empty(&row.sds, "sds", path, line)?;
        non_empty(&row.candidate_id, "candidate_id", path, line)?;
        let is_winner = parse_bool(&row.is_winner).ok_or_else(|| {
            malformed(path, line, format!("unknown is_winner value `{}`", row.is_winner))
        })?;
        let competition = competitions
            .entry(row.competition_id.clone())
            .or_insert_with(|| Competition {
                competition_id: row.competition_id.clone(),
                sds: row.sds.clone(),
                university_id: row.university_id.clone(),
                candidate_ids: BTreeSet::new(),
                winner_ids: BTreeSet::new(),
            });
        if competition.sds != row.sds || competition.university_id != row.university_id {
            return Err(malformed(
                path,
                line,
                format!(
                    "competition {}: inconsistent sds or university across rows",
                    row.competition_id
                ),
            ));
        }
        if !competition.candidate_ids.insert(row.candidate_id.clone()) {
            return Err(LoadError::DuplicateKey {
                file: file_name(path),
                key: format!("({}, {})", row.competition_id, row.candidate_id),
            });
        }
        if is_winner {
            competition.winner_ids.insert(row.candidate_id);
        }
    }
    for competition in competitions.values() {
        let winners = competition.winner_ids.len();
        if winners == 0 || winners > 2 {
            return Err(malformed(
                path,
                0,
                format!(
                    "competition {}: must name 1 or 2 winners, found {winners}",
                    competition.competition_id
                ),
            ));
        }
    }
    Ok(competitions.into_values().collect())
}

/// Loads and assembles the corpus from the five input files. Cross-reference
/// checks are deferred to [`validate_corpus`].
pub fn load_corpus(
    paths: &CorpusPaths,
    window: Window,
    default_scheme: Scheme,
) -> Result<Corpus, LoadError> {
    let roster = load_roster(&paths.roster, default_scheme)?;
    let publications = load_publications(&paths.publications, &paths.authorships)?;
    let journal_metrics = load_journals(&paths.journals)?;
    let competitions = load_competitions(&paths.competitions)?;
    Ok(Corpus {
        roster,
        publications,
        journal_metrics,
        competitions,
        window,
    })
}

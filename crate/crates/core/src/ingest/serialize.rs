//! Corpus serialization back to the CSV input formats. Used for golden
//! fixtures and round-trip checks; `load_corpus` of a written corpus yields
//! the original.

use super::*;
use std::io::Write;
use std::path::Path;

fn io_err(path: &Path, source: std::io::Error) -> LoadError {
    LoadError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), LoadError> {
    let mut file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    file.write_all(contents.as_bytes()).map_err(|e| io_err(path, e))
}

fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_owned()
    }
}

/// Writes the corpus as the five CSV tables under `dir` (roster.csv,
/// publications.csv, authorships.csv, journals.csv, competitions.csv) and
/// returns the corresponding [`CorpusPaths`].
pub fn write_corpus(corpus: &Corpus, dir: &Path) -> Result<CorpusPaths, LoadError> {
    let paths = CorpusPaths {
        roster: dir.join("roster.csv"),
        publications: dir.join("publications.csv"),
        authorships: dir.join("authorships.csv"),
        journals: dir.join("journals.csv"),
        competitions: dir.join("competitions.csv"),
    };

    let mut out = String::from("researcher_id,sds,uda,rank,scheme,staff_start,staff_end\n");
    for researcher in corpus.roster.values() {
        if researcher.staff_intervals.is_empty() {
            out.push_str(&format!(
                "{},{},{},{},{},,\n",
                csv_field(&researcher.researcher_id),
                csv_field(&researcher.sds),
                csv_field(&researcher.uda),
                researcher.rank,
                researcher.scheme,
            ));
        }
        for (start, end) in &researcher.staff_intervals {
            out.push_str(&format!(
                "{},{},{},{},{},{start},{end}\n",
                csv_field(&researcher.researcher_id),
                csv_field(&researcher.sds),
                csv_field(&researcher.uda),
                researcher.rank,
                researcher.scheme,
            ));
        }
    }
    write_file(&paths.roster, &out)?;

    let mut pubs = String::from("pub_id,year,doc_type,journal_id\n");
    let mut authorships = String::from("pub_id,position,researcher_id,institution_id\n");
    for publication in &corpus.publications {
        pubs.push_str(&format!(
            "{},{},{},{}\n",
            csv_field(&publication.pub_id),
            publication.year,
            publication.doc_type,
            csv_field(&publication.journal_id),
        ));
        for authorship in &publication.byline {
            authorships.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&publication.pub_id),
                authorship.position,
                csv_field(authorship.researcher_id.as_deref().unwrap_or("")),
                csv_field(&authorship.institution_id),
            ));
        }
    }
    write_file(&paths.publications, &pubs)?;
    write_file(&paths.authorships, &authorships)?;

    let mut out = String::from("journal_id,year,impact_factor,categories\n");
    for metric in corpus.journal_metrics.values() {
        let impact = metric
            .impact_factor
            .map(|v| v.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{impact},{}\n",
            csv_field(&metric.journal_id),
            metric.year,
            csv_field(&metric.categories.join(";")),
        ));
    }
    write_file(&paths.journals, &out)?;

    let mut out = String::from("competition_id,sds,university_id,candidate_id,is_winner\n");
    for competition in &corpus.competitions {
        for candidate in &competition.candidate_ids {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&competition.competition_id),
                csv_field(&competition.sds),
                csv_field(&competition.university_id),
                csv_field(candidate),
                competition.winner_ids.contains(candidate),
            ));
        }
    }
    write_file(&paths.competitions, &out)?;

    Ok(paths)
}

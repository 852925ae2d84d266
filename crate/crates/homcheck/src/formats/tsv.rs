//! Tab-separated input files.
//!
//! Every reader skips blank lines and lines starting with `#`, and reports
//! errors with the 1-based line number.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use homcheck_core::corpus::IdMapTable;
use homcheck_core::lexicon::{normalize_lemma, SenseMapRow};
use homcheck_core::stats::{AdjudicationRecord, ErrorCategory, Verdict};
use homcheck_core::{
    AlignmentSet, AnnotatedCorpus, HomonymEntry, Hypothesis, Lexicon, Pos, SenseCluster, SenseClustering, SenseKey,
    SenseMap, Word,
};

use crate::error::{Error, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-comment, non-blank lines with their line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn fields<'a>(path: &Path, line: usize, text: &'a str, expected: usize) -> Result<Vec<&'a str>> {
    let f: Vec<&str> = text.split('\t').collect();
    if f.len() != expected {
        return Err(Error::parse(
            path,
            line,
            format!("expected {expected} tab-separated fields, found {}", f.len()),
        ));
    }
    Ok(f)
}

fn parse_pos_list(path: &Path, line: usize, raw: &str) -> Result<std::collections::BTreeSet<Pos>> {
    raw.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.parse::<Pos>().map_err(|e| Error::parse(path, line, e.to_string())))
        .collect()
}

pub fn parse_lexicon(path: &Path, text: &str) -> Result<Lexicon> {
    let mut entries = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (line, l) in data_lines(text) {
        let f = fields(path, line, l, 7)?;
        let pos_set = parse_pos_list(path, line, f[2])?;
        if pos_set.is_empty() {
            return Err(Error::parse(path, line, "empty POS list"));
        }
        if let Some(first) = seen.insert(f[0].to_string(), line) {
            return Err(Error::parse(
                path,
                line,
                format!("duplicate homonym id {} (first defined on line {first})", f[0]),
            ));
        }
        entries.push(HomonymEntry {
            homonym_id: f[0].trim().to_string(),
            lemma: f[1].to_string(),
            pos_set,
            origin_language: f[3].to_string(),
            origin_form: f[4].to_string(),
            gloss: f[5].to_string(),
            translation_hint: f[6].to_string(),
        });
    }
    Lexicon::from_entries(entries).map_err(|source| Error::Lexicon {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon> {
    parse_lexicon(path, &read_text(path)?)
}

/// Canonical dump of the homonym resource, sorted by lemma, POS list and id.
pub fn dump_lexicon(lexicon: &Lexicon) -> String {
    let mut out = String::new();
    for e in lexicon.canonical_entries() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            e.homonym_id,
            e.lemma,
            e.pos_list(),
            e.origin_language,
            e.origin_form,
            e.gloss,
            e.translation_hint
        );
    }
    out
}

/// Sense map header comment declaring the SHA-256 of the clustering file
/// the map was derived from.
pub const PROVENANCE_PREFIX: &str = "# provenance-sha256:";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SenseMapFile {
    pub rows: Vec<SenseMapRow>,
    pub provenance_sha256: Vec<String>,
}

pub fn parse_sense_map(path: &Path, text: &str) -> Result<SenseMapFile> {
    let mut out = SenseMapFile::default();
    for l in text.lines() {
        if let Some(rest) = l.strip_prefix(PROVENANCE_PREFIX) {
            out.provenance_sha256.push(rest.trim().to_ascii_lowercase());
        }
    }
    for (line, l) in data_lines(text) {
        let f = fields(path, line, l, 2)?;
        out.rows.push(SenseMapRow {
            key: f[0].trim().to_string(),
            homonym_id: f[1].trim().to_string(),
            line,
        });
    }
    Ok(out)
}

pub fn load_sense_map(path: &Path, lexicon: &Lexicon) -> Result<(SenseMap, SenseMapFile)> {
    let file = parse_sense_map(path, &read_text(path)?)?;
    let map = SenseMap::build(file.rows.clone(), lexicon);
    Ok((map, file))
}

pub fn parse_alignment_rows(path: &Path, text: &str) -> Result<Vec<(String, String)>> {
    data_lines(text)
        .map(|(line, l)| {
            let f = fields(path, line, l, 2)?;
            let (id, target) = (f[0].trim(), f[1].trim());
            if id.is_empty() || target.is_empty() {
                return Err(Error::parse(path, line, "empty instance id or target lemma"));
            }
            Ok((id.to_string(), target.to_string()))
        })
        .collect()
}

pub fn load_alignments(path: &Path, corpus: &AnnotatedCorpus) -> Result<AlignmentSet> {
    let rows = parse_alignment_rows(path, &read_text(path)?)?;
    Ok(AlignmentSet::build(rows, corpus))
}

pub fn parse_clustering(path: &Path, text: &str) -> Result<SenseClustering> {
    let mut clusters = Vec::new();
    for (line, l) in data_lines(text) {
        let f = fields(path, line, l, 4)?;
        let pos: Pos = f[2]
            .parse()
            .map_err(|e: homcheck_core::LexiconError| Error::parse(path, line, e.to_string()))?;
        let word = Word::new(f[1], pos).map_err(|e| Error::parse(path, line, e.to_string()))?;
        let keys = f[3]
            .split(',')
            .map(str::trim)
            .filter(|k| !k.is_empty())
            .map(|k| SenseKey::parse(k).map_err(|e| Error::parse(path, line, format!("sense key {k:?}: {e}"))))
            .collect::<Result<_>>()?;
        clusters.push(SenseCluster {
            id: f[0].trim().to_string(),
            word,
            keys,
        });
    }
    SenseClustering::from_clusters(clusters).map_err(|source| Error::Corpus {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_clustering(path: &Path) -> Result<SenseClustering> {
    parse_clustering(path, &read_text(path)?)
}

pub fn dump_clustering(clustering: &SenseClustering) -> String {
    let mut out = String::new();
    for c in clustering.clusters() {
        let keys: Vec<&str> = c.keys.iter().map(SenseKey::as_str).collect();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            c.id,
            c.word.lemma(),
            c.word.pos(),
            keys.join(",")
        );
    }
    out
}

pub fn parse_id_map(path: &Path, text: &str) -> Result<IdMapTable> {
    let mut rows = Vec::new();
    for (line, l) in data_lines(text) {
        let f: Vec<&str> = l.split('\t').collect();
        if f.len() > 2 || f[0].trim().is_empty() {
            return Err(Error::parse(path, line, "expected `old<TAB>new`"));
        }
        let new = f.get(1).map(|s| s.trim()).filter(|s| !s.is_empty());
        rows.push((f[0].trim().to_string(), new.map(str::to_string)));
    }
    IdMapTable::from_rows(rows).map_err(|source| Error::Corpus {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_id_map(path: &Path) -> Result<IdMapTable> {
    parse_id_map(path, &read_text(path)?)
}

pub fn parse_adjudication(path: &Path, text: &str) -> Result<Vec<AdjudicationRecord>> {
    data_lines(text)
        .map(|(line, l)| {
            let f: Vec<&str> = l.split('\t').collect();
            if f.len() != 4 && f.len() != 5 {
                return Err(Error::parse(
                    path,
                    line,
                    format!("expected 4 or 5 tab-separated fields, found {}", f.len()),
                ));
            }
            let err = |e: homcheck_core::StatsError| Error::parse(path, line, e.to_string());
            Ok(AdjudicationRecord {
                hypothesis: f[0].parse::<Hypothesis>().map_err(err)?,
                instance_key: f[1].trim().to_string(),
                verdict: f[2].parse::<Verdict>().map_err(err)?,
                category: f[3].parse::<ErrorCategory>().map_err(err)?,
                note: f.get(4).map(|s| s.to_string()).unwrap_or_default(),
            })
        })
        .collect()
}

pub fn load_adjudication(path: &Path) -> Result<Vec<AdjudicationRecord>> {
    parse_adjudication(path, &read_text(path)?)
}

/// Gold key file: `instance_id key1 [key2 ...]` per line.
pub fn parse_gold(path: &Path, text: &str) -> Result<BTreeMap<String, Vec<String>>> {
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (line, l) in data_lines(text) {
        let mut f = l.split_whitespace();
        let id = f.next().ok_or_else(|| Error::parse(path, line, "empty line"))?;
        let keys: Vec<String> = f.map(str::to_string).collect();
        if out.insert(id.to_string(), keys).is_some() {
            return Err(Error::parse(path, line, format!("duplicate gold line for {id}")));
        }
    }
    Ok(out)
}

pub fn load_gold(path: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    parse_gold(path, &read_text(path)?)
}

/// Parses `lemma#pos`.
pub fn parse_word(raw: &str) -> Result<Word> {
    let (lemma, pos) = raw
        .rsplit_once('#')
        .ok_or_else(|| Error::Usage(format!("expected lemma#pos, got {raw:?}")))?;
    let pos: Pos = pos
        .parse()
        .map_err(|e: homcheck_core::LexiconError| Error::Usage(e.to_string()))?;
    Word::new(&normalize_lemma(lemma), pos).map_err(|e| Error::Usage(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test.tsv")
    }

    #[test]
    fn span_entry() {
        let lex = parse_lexicon(
            p(),
            "# comment\nspan_nv_1\tspan\tn,v\tOld French\tespan\tdistance\tportée\n",
        )
        .unwrap();
        let e = lex.entry("span_nv_1").unwrap();
        assert_eq!(e.pos_list(), "n,v");
        assert_eq!(e.gloss, "distance");
        assert_eq!(e.translation_hint, "portée");
    }

    #[test]
    fn empty_lexicon_file() {
        let lex = parse_lexicon(p(), "").unwrap();
        assert!(lex.is_empty());
    }

    #[test]
    fn malformed_lines_name_the_line() {
        let err = parse_lexicon(p(), "# c\n\nspan\tspan\tn\n").unwrap_err();
        assert_eq!(err.to_string(), "test.tsv:3: expected 7 tab-separated fields, found 3");
        let err = parse_lexicon(p(), "a\tx\tq\t\t\t\t\n").unwrap_err();
        assert!(err.to_string().starts_with("test.tsv:1:"));
        let dup = "a\tx\tn\t\t\t\t\na\tx\tv\t\t\t\t\n";
        assert!(parse_lexicon(p(), dup).unwrap_err().to_string().contains("line 1"));
    }

    #[test]
    fn dump_is_idempotent() {
        let text = "b2\tbank\tn\tOld Norse\tbanki\tslope\trive\n\
                    b1\tbank\tn\tItalian\tbanca\tfinance\tbanque\n\
                    s1\tspan\tn,v\tOld French\tespan\tdistance\tportée\n";
        let lex = parse_lexicon(p(), text).unwrap();
        let dump = dump_lexicon(&lex);
        assert!(dump.starts_with("b1\t"));
        let again = parse_lexicon(p(), &dump).unwrap();
        assert_eq!(again, lex);
        assert_eq!(dump_lexicon(&again), dump);
    }

    #[test]
    fn sense_map_provenance() {
        let f = parse_sense_map(p(), "# provenance-sha256: ABCD\nbank%1:14:00::\tb1\n").unwrap();
        assert_eq!(f.provenance_sha256, vec!["abcd".to_string()]);
        assert_eq!(f.rows.len(), 1);
        assert_eq!(f.rows[0].line, 2);
    }

    #[test]
    fn alignment_rows() {
        let rows = parse_alignment_rows(p(), "d000.s000.t000\tgioco\n").unwrap();
        assert_eq!(rows, vec![("d000.s000.t000".into(), "gioco".into())]);
        assert!(parse_alignment_rows(p(), "").unwrap().is_empty());
        let err = parse_alignment_rows(p(), "ok\tx\nbad\n").unwrap_err();
        assert!(err.to_string().starts_with("test.tsv:2:"));
    }

    #[test]
    fn clustering_file() {
        let c = parse_clustering(
            p(),
            "c1\ttap\tn\ttap%1:11:00::\nc2\ttap\tn\ttap%1:06:00::,tap%1:04:00::\n",
        )
        .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(parse_clustering(p(), &dump_clustering(&c)).unwrap(), c);
        let err = parse_clustering(p(), "c1\ttap\tn\ttap%1:11:00::\nc2\ttap\tn\ttap%1:11:00::\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("c1") && msg.contains("c2"), "{msg}");
        assert!(parse_clustering(p(), "c1\ttap\tn\tnot-a-key\n").is_err());
    }

    #[test]
    fn id_map_file() {
        let t = parse_id_map(p(), "a\tb\nc\t\nd\n").unwrap();
        assert_eq!(t.lookup("a"), Ok("b"));
        assert_eq!(t.lookup("c"), Err(homcheck_core::corpus::IdExclusion::Unmapped));
        assert_eq!(t.lookup("d"), Err(homcheck_core::corpus::IdExclusion::Unmapped));
    }

    #[test]
    fn adjudication_file() {
        let r = parse_adjudication(
            p(),
            "OHPT\tband#n#banda\tactual\tparallel-homonymy\tring vs group\nOHPD\tbow#n#d001\tdata-error\tsense-annotation\n",
        )
        .unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].verdict, Verdict::DataError);
        assert!(parse_adjudication(p(), "OHPX\tk\tactual\tother\t\n").is_err());
    }

    #[test]
    fn gold_file() {
        let g = parse_gold(p(), "d000.s000.t000 bank%1:14:00:: bank%1:14:01::\n").unwrap();
        assert_eq!(g["d000.s000.t000"].len(), 2);
        assert!(parse_gold(p(), "a x%1:00:00::\na y%1:00:00::\n").is_err());
    }
}

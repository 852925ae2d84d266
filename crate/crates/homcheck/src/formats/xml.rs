//! Sense-annotated corpus XML (`corpus/text/sentence/wf|instance`) and its
//! gold key file.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use homcheck_core::corpus::{CorpusDiagnostics, IdMapOutcome, RawDocument, RawSentence, RawToken};
use homcheck_core::{AnnotatedCorpus, IdMapTable};
use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::tsv::{load_gold, read_text};
use crate::error::{Error, Result};

fn line_at(text: &str, offset: usize) -> usize {
    let end = offset.min(text.len());
    text.as_bytes()[..end].iter().filter(|&&b| b == b'\n').count() + 1
}

struct Attrs {
    id: Option<String>,
    lemma: Option<String>,
    pos: Option<String>,
}

fn attrs(e: &BytesStart<'_>) -> std::result::Result<Attrs, String> {
    let mut out = Attrs {
        id: None,
        lemma: None,
        pos: None,
    };
    for a in e.attributes() {
        let a = a.map_err(|e| e.to_string())?;
        let value = a.unescape_value().map_err(|e| e.to_string())?.into_owned();
        match a.key.as_ref() {
            b"id" => out.id = Some(value),
            b"lemma" => out.lemma = Some(value),
            b"pos" => out.pos = Some(value),
            _ => {}
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Level {
    Root,
    Corpus,
    Text,
    Sentence,
    Token,
}

/// Parses the corpus XML into raw documents. Structural errors carry the
/// line they were found on.
pub fn parse_corpus_xml(path: &Path, text: &str) -> Result<Vec<RawDocument>> {
    let mut reader = Reader::from_str(text);
    let mut docs: Vec<RawDocument> = Vec::new();
    let mut level = Level::Root;
    let mut seen_corpus = false;
    let mut surface = String::new();
    let mut pending: Option<RawToken> = None;

    loop {
        let offset = reader.buffer_position() as usize;
        let err = |msg: String| Error::parse(path, line_at(text, offset), msg);
        let event = reader
            .read_event()
            .map_err(|e| Error::parse(path, line_at(text, reader.error_position() as usize), e.to_string()))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let empty = matches!(event, Event::Empty(_));
                let name = e.name();
                let a = attrs(e).map_err(&err)?;
                let require = |v: Option<String>, what: &str| {
                    v.filter(|s| !s.is_empty()).ok_or_else(|| {
                        err(format!(
                            "<{}> without {what} attribute",
                            String::from_utf8_lossy(name.as_ref())
                        ))
                    })
                };
                match (level, name.as_ref()) {
                    (Level::Root, b"corpus") if !seen_corpus => {
                        seen_corpus = true;
                        if !empty {
                            level = Level::Corpus;
                        }
                    }
                    (Level::Corpus, b"text") => {
                        docs.push(RawDocument {
                            id: require(a.id, "id")?,
                            sentences: Vec::new(),
                        });
                        if !empty {
                            level = Level::Text;
                        }
                    }
                    (Level::Text, b"sentence") => {
                        let doc = docs.last_mut().expect("inside <text>");
                        doc.sentences.push(RawSentence {
                            id: require(a.id, "id")?,
                            tokens: Vec::new(),
                        });
                        if !empty {
                            level = Level::Sentence;
                        }
                    }
                    (Level::Sentence, tag @ (b"wf" | b"instance")) => {
                        let instance_id = if tag == b"instance" {
                            Some(require(a.id, "id")?)
                        } else {
                            None
                        };
                        let token = RawToken {
                            surface: String::new(),
                            lemma: require(a.lemma, "lemma")?,
                            pos_tag: require(a.pos, "pos")?,
                            instance_id,
                        };
                        surface.clear();
                        if empty {
                            push_token(&mut docs, token);
                        } else {
                            pending = Some(token);
                            level = Level::Token;
                        }
                    }
                    _ => {
                        return Err(err(format!(
                            "unexpected element <{}>",
                            String::from_utf8_lossy(name.as_ref())
                        )))
                    }
                }
            }
            Event::End(_) => {
                level = match level {
                    Level::Token => {
                        let mut token = pending.take().expect("open token");
                        token.surface = std::mem::take(&mut surface);
                        push_token(&mut docs, token);
                        Level::Sentence
                    }
                    Level::Sentence => Level::Text,
                    Level::Text => Level::Corpus,
                    Level::Corpus | Level::Root => Level::Root,
                };
            }
            Event::Text(t) => {
                let s = t.unescape().map_err(|e| err(e.to_string()))?;
                if level == Level::Token {
                    surface.push_str(&s);
                } else if !s.trim().is_empty() {
                    return Err(err(format!("unexpected text {:?}", s.trim())));
                }
            }
            Event::CData(t) if level == Level::Token => {
                surface.push_str(&String::from_utf8_lossy(&t.into_inner()));
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !seen_corpus {
        return Err(Error::parse(path, 1, "missing <corpus> root element"));
    }
    if level != Level::Root {
        return Err(Error::parse(path, line_at(text, text.len()), "unexpected end of file"));
    }
    Ok(docs)
}

fn push_token(docs: &mut [RawDocument], token: RawToken) {
    let sentence = docs
        .last_mut()
        .and_then(|d| d.sentences.last_mut())
        .expect("inside <sentence>");
    sentence.tokens.push(token);
}

/// A loaded corpus with everything that was dropped or flagged on the way.
#[derive(Debug)]
pub struct LoadedCorpus {
    pub corpus: AnnotatedCorpus,
    pub diagnostics: CorpusDiagnostics,
    /// Outcome of re-identifying gold keys, when an id map was given.
    pub id_map: Option<IdMapOutcome>,
}

/// Rewrites every gold key through `table`; keys the table excludes are
/// removed.
pub fn remap_gold(gold: &mut BTreeMap<String, Vec<String>>, table: &IdMapTable) -> IdMapOutcome {
    let all: BTreeSet<&str> = gold.values().flatten().map(String::as_str).collect();
    let outcome = table.apply(all);
    for keys in gold.values_mut() {
        let mut renamed: Vec<String> = keys
            .iter()
            .filter_map(|k| table.lookup(k).ok().map(str::to_owned))
            .collect();
        renamed.dedup();
        *keys = renamed;
    }
    outcome
}

pub fn assemble(
    path: &Path,
    docs: Vec<RawDocument>,
    mut gold: BTreeMap<String, Vec<String>>,
    id_map: Option<&IdMapTable>,
) -> Result<LoadedCorpus> {
    let id_map = id_map.map(|t| remap_gold(&mut gold, t));
    let (corpus, diagnostics) = AnnotatedCorpus::assemble(docs, &gold).map_err(|source| Error::Corpus {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(LoadedCorpus {
        corpus,
        diagnostics,
        id_map,
    })
}

pub fn load_corpus(xml: &Path, gold: &Path, id_map: Option<&IdMapTable>) -> Result<LoadedCorpus> {
    let docs = parse_corpus_xml(xml, &read_text(xml)?)?;
    assemble(xml, docs, load_gold(gold)?, id_map)
}

/// Loads several corpora and concatenates them in order. Document ids must
/// stay distinct across the parts.
pub fn load_corpora(parts: &[(&Path, &Path)], id_map: Option<&IdMapTable>) -> Result<LoadedCorpus> {
    let mut docs = Vec::new();
    let mut gold = BTreeMap::new();
    for (xml, key) in parts {
        docs.extend(parse_corpus_xml(xml, &read_text(xml)?)?);
        for (id, keys) in load_gold(key)? {
            if gold.insert(id.clone(), keys).is_some() {
                return Err(Error::Usage(format!(
                    "{}: instance {id} appears in more than one gold file",
                    key.display()
                )));
            }
        }
    }
    let first = parts.first().map(|p| p.0).unwrap_or(Path::new("-"));
    assemble(first, docs, gold, id_map)
}

fn attr(out: &mut String, name: &str, value: &str) {
    let _ = write!(out, " {name}=\"{}\"", escape(value));
}

pub fn write_corpus_xml(docs: &[RawDocument]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<corpus lang=\"en\">\n");
    for d in docs {
        out.push_str("<text");
        attr(&mut out, "id", &d.id);
        out.push_str(">\n");
        for s in &d.sentences {
            out.push_str("<sentence");
            attr(&mut out, "id", &s.id);
            out.push_str(">\n");
            for t in &s.tokens {
                let tag = if t.instance_id.is_some() { "instance" } else { "wf" };
                let _ = write!(out, "<{tag}");
                if let Some(id) = &t.instance_id {
                    attr(&mut out, "id", id);
                }
                attr(&mut out, "lemma", &t.lemma);
                attr(&mut out, "pos", &t.pos_tag);
                let _ = writeln!(out, ">{}</{tag}>", escape(t.surface.as_str()));
            }
            out.push_str("</sentence>\n");
        }
        out.push_str("</text>\n");
    }
    out.push_str("</corpus>\n");
    out
}

pub fn write_gold(gold: &BTreeMap<String, Vec<String>>) -> String {
    let mut out = String::new();
    for (id, keys) in gold {
        let _ = writeln!(out, "{id} {}", keys.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"<?xml version="1.0" encoding="UTF-8" ?>
<corpus lang="en" source="test">
<text id="d000">
<sentence id="d000.s000">
<wf lemma="the" pos="DET">The</wf>
<instance id="d000.s000.t000" lemma="bank" pos="NOUN">bank</instance>
<wf lemma="be" pos="VERB">was</wf>
<wf lemma="&amp;" pos=".">&amp;</wf>
</sentence>
</text>
</corpus>
"#;

    #[test]
    fn minimal_corpus() {
        let docs = parse_corpus_xml(Path::new("c.xml"), SAMPLE).unwrap();
        assert_eq!(docs.len(), 1);
        let toks = &docs[0].sentences[0].tokens;
        assert_eq!(toks.len(), 4);
        assert_eq!(toks[1].instance_id.as_deref(), Some("d000.s000.t000"));
        assert_eq!(toks[3].surface, "&");
        let gold: BTreeMap<_, _> = [("d000.s000.t000".to_string(), vec!["bank%1:14:00::".to_string()])].into();
        let loaded = assemble(Path::new("c.xml"), docs, gold, None).unwrap();
        let s = loaded.corpus.stats();
        assert_eq!((s.word_tokens, s.word_types, s.senses), (1, 1, 1));
    }

    #[test]
    fn round_trip() {
        let docs = parse_corpus_xml(Path::new("c.xml"), SAMPLE).unwrap();
        let again = parse_corpus_xml(Path::new("c.xml"), &write_corpus_xml(&docs)).unwrap();
        assert_eq!(docs, again);
    }

    #[test]
    fn structural_errors_have_lines() {
        let bad = "<corpus>\n<text id=\"d\">\n<wf lemma=\"x\" pos=\"X\">x</wf>\n</text>\n</corpus>\n";
        let e = parse_corpus_xml(Path::new("c.xml"), bad).unwrap_err().to_string();
        assert!(e.starts_with("c.xml:3:"), "{e}");
        let unclosed = "<corpus>\n<text id=\"d\">\n";
        assert!(parse_corpus_xml(Path::new("c.xml"), unclosed).is_err());
        let mismatched = "<corpus>\n<text id=\"d\">\n</corpus>\n";
        let e = parse_corpus_xml(Path::new("c.xml"), mismatched)
            .unwrap_err()
            .to_string();
        assert!(e.starts_with("c.xml:3:"), "{e}");
        let missing = "<corpus><text><sentence id=\"s\"/></text></corpus>";
        assert!(parse_corpus_xml(Path::new("c.xml"), missing)
            .unwrap_err()
            .to_string()
            .contains("id"));
    }

    #[test]
    fn id_map_on_gold() {
        let mut gold: BTreeMap<String, Vec<String>> = BTreeMap::new();
        gold.insert("a".into(), vec!["k1".into(), "k2".into()]);
        gold.insert("b".into(), vec!["k3".into()]);
        let table = IdMapTable::from_rows(vec![
            ("k1".to_string(), Some("n1".to_string())),
            ("k2".to_string(), None),
        ])
        .unwrap();
        let outcome = remap_gold(&mut gold, &table);
        assert_eq!(outcome.renamed.len(), 1);
        assert_eq!(outcome.excluded.len(), 2);
        assert_eq!(gold["a"], vec!["n1".to_string()]);
        assert!(gold["b"].is_empty());
    }
}

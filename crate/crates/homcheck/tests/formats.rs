use std::collections::BTreeMap;
use std::path::Path;

use homcheck::formats::tsv::{
    dump_clustering, dump_lexicon, parse_adjudication, parse_clustering, parse_gold, parse_lexicon, parse_sense_map,
};
use homcheck::formats::xml::parse_corpus_xml;
use homcheck::formats::{write_corpus_xml, write_gold};
use homcheck_core::corpus::{RawDocument, RawSentence, RawToken};
use proptest::prelude::*;

fn p() -> &'static Path {
    Path::new("input")
}

fn token() -> impl Strategy<Value = RawToken> {
    (
        "[a-z&<>\"'é]{1,6}",
        "[a-z&<>\"'é]{1,6}",
        prop::sample::select(vec!["NOUN", "VERB", "ADJ", "DET", "."]),
        any::<bool>(),
    )
        .prop_map(|(surface, lemma, tag, annotated)| RawToken {
            surface,
            lemma,
            pos_tag: tag.to_owned(),
            instance_id: annotated.then(String::new),
        })
}

fn documents() -> impl Strategy<Value = Vec<RawDocument>> {
    prop::collection::vec(prop::collection::vec(prop::collection::vec(token(), 1..6), 1..4), 1..4).prop_map(|docs| {
        docs.into_iter()
            .enumerate()
            .map(|(d, sentences)| RawDocument {
                id: format!("d{d:03}"),
                sentences: sentences
                    .into_iter()
                    .enumerate()
                    .map(|(s, tokens)| {
                        let sid = format!("d{d:03}.s{s:03}");
                        RawSentence {
                            tokens: tokens
                                .into_iter()
                                .enumerate()
                                .map(|(t, mut tok)| {
                                    if tok.instance_id.is_some() {
                                        tok.instance_id = Some(format!("{sid}.t{t:03}"));
                                    }
                                    tok
                                })
                                .collect(),
                            id: sid,
                        }
                    })
                    .collect(),
            })
            .collect()
    })
}

fn lexicon_rows() -> impl Strategy<Value = Vec<(usize, String, String)>> {
    prop::collection::vec(
        (
            0..4usize,
            prop::sample::select(vec!["n", "v", "n,v", "a", "r"]).prop_map(str::to_owned),
            "[A-Za-z ]{0,10}",
        ),
        1..10,
    )
}

proptest! {
    #[test]
    fn corpus_xml_round_trips(docs in documents()) {
        let text = write_corpus_xml(&docs);
        prop_assert_eq!(parse_corpus_xml(p(), &text).unwrap(), docs);
    }

    #[test]
    fn gold_round_trips(gold in prop::collection::btree_map("[a-z0-9.]{1,8}", prop::collection::vec("[a-z]{1,5}%1:0[0-9]:00::", 1..3), 0..10)) {
        prop_assert_eq!(parse_gold(p(), &write_gold(&gold)).unwrap(), gold);
    }

    #[test]
    fn lexicon_dump_is_a_fixed_point(rows in lexicon_rows()) {
        let lemmas = ["bank", "bat", "lead", "pitch"];
        let text: String = rows
            .iter()
            .enumerate()
            .map(|(i, (w, pos, gloss))| format!("h{i}\t{}\t{pos}\tLatin\tx\t{gloss}\thint\n", lemmas[*w]))
            .collect();
        let lex = parse_lexicon(p(), &text).unwrap();
        let dump = dump_lexicon(&lex);
        let again = parse_lexicon(p(), &dump).unwrap();
        prop_assert_eq!(&again, &lex);
        prop_assert_eq!(dump_lexicon(&again), dump);
    }

    #[test]
    fn clustering_dump_round_trips(groups in prop::collection::vec(prop::collection::btree_set(0..6u32, 1..4), 1..5)) {
        // disjoint key sets per cluster
        let mut used = std::collections::BTreeSet::new();
        let mut text = String::new();
        for (i, g) in groups.iter().enumerate() {
            let keys: Vec<String> = g
                .iter()
                .filter(|k| used.insert(**k))
                .map(|k| format!("bank%1:{:02}:00::", 10 + k))
                .collect();
            if !keys.is_empty() {
                text.push_str(&format!("c{i}\tbank\tn\t{}\n", keys.join(",")));
            }
        }
        prop_assume!(!text.is_empty());
        let c = parse_clustering(p(), &text).unwrap();
        let dump = dump_clustering(&c);
        prop_assert_eq!(parse_clustering(p(), &dump).unwrap(), c);
    }
}

fn error_text(r: homcheck::Result<impl std::fmt::Debug>) -> String {
    r.unwrap_err().to_string()
}

#[test]
fn errors_name_file_and_line() {
    let lex = "# header\nbank_1\tbank\tn\tOld Norse\tbanki\tland\triva\nbank_2\tbank\tn\tItalian\n";
    assert_eq!(
        error_text(parse_lexicon(p(), lex)),
        "input:3: expected 7 tab-separated fields, found 4"
    );

    let dup = "bank_1\tbank\tn\ta\tb\tc\td\n\nbank_1\tbank\tv\ta\tb\tc\td\n";
    let e = error_text(parse_lexicon(p(), dup));
    assert!(e.starts_with("input:3:"), "{e}");
    assert!(e.contains("line 1"), "{e}");

    let xml = "<corpus>\n<text id=\"d1\">\n<sentence id=\"d1.s1\">\n<instance lemma=\"bank\" pos=\"NOUN\">bank</instance>\n</sentence>\n</text>\n</corpus>\n";
    let e = error_text(parse_corpus_xml(p(), xml));
    assert!(e.starts_with("input:4:"), "{e}");

    let unclosed =
        "<corpus>\n<text id=\"d1\">\n<sentence id=\"d1.s1\">\n<wf lemma=\"a\" pos=\"DET\">a</wf>\n</text>\n</corpus>\n";
    assert!(parse_corpus_xml(p(), unclosed).is_err());

    let adj = "OHPT\tbank#n#riva\tmaybe\tother\n";
    assert!(error_text(parse_adjudication(p(), adj)).starts_with("input:1:"));
}

#[test]
fn sense_map_provenance_header() {
    let text = "# provenance-sha256: ABCDEF\nbank%1:10:00::\tbank_1\n";
    let f = parse_sense_map(p(), text).unwrap();
    assert_eq!(f.provenance_sha256, vec!["abcdef".to_owned()]);
    assert_eq!(f.rows.len(), 1);
    assert_eq!(f.rows[0].line, 2);
}

#[test]
fn gold_rejects_duplicate_ids() {
    let text = "d1.s1.t1 bank%1:10:00::\nd1.s1.t1 bank%1:10:01::\n";
    assert!(error_text(parse_gold(p(), text)).starts_with("input:2:"));
    let ok: BTreeMap<String, Vec<String>> = parse_gold(p(), "a x y\n").unwrap();
    assert_eq!(ok["a"], vec!["x".to_owned(), "y".to_owned()]);
}

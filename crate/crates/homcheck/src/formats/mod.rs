//! Input and output file formats.

pub mod tsv;
pub mod xml;

pub use tsv::{
    dump_clustering, dump_lexicon, load_adjudication, load_alignments, load_clustering, load_gold, load_id_map,
    load_lexicon, load_sense_map, parse_word, SenseMapFile,
};
pub use xml::{load_corpora, load_corpus, write_corpus_xml, write_gold, LoadedCorpus};

/// Writes `text` to `path`, creating missing parent directories.
pub fn write_file(path: &std::path::Path, text: &str) -> crate::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| crate::Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| crate::Error::io(path, e))
}

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use homcheck::error::{Error, Result};
use homcheck::fixtures::{self, FixtureConfig, Rates};
use homcheck::formats::{self, LoadedCorpus};
use homcheck::report::{self, Format, RunReport};
use homcheck::{models, parallel, run};
use homcheck_core::ohpc::{FeatureConfig, TrainScope};
use homcheck_core::ohpt::{CompareOptions, HomonymGrouping};
use homcheck_core::stats::AdjudicationRecord;
use homcheck_core::{IdMapTable, Lexicon, SenseMap, Word};

#[derive(Parser)]
#[command(
    name = "homcheck",
    version,
    about = "Check one-homonym-per-X hypotheses against sense-annotated corpora"
)]
struct Cli {
    /// Print report notes to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One homonym per translation.
    Ohpt(OhptArgs),
    /// Merge senses that share translations.
    OhptMerge(MergeArgs),
    /// Compare how often two sense groupings partition translations.
    OhptCompare(CompareArgs),
    /// One homonym per discourse.
    Ohpd(OhpdArgs),
    /// One homonym per collocation.
    #[command(subcommand)]
    Ohpc(OhpcCommand),
    /// One homonym per sense cluster.
    Ohpsc(OhpscArgs),
    /// Combine run reports into one table.
    Report(ReportArgs),
    /// Generate a synthetic fixture with planted violations.
    Fixtures(FixtureArgs),
    /// Check that input files parse.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct Output {
    /// Output file; format follows its extension unless --format is given.
    #[arg(long)]
    out: Option<PathBuf>,
    /// text, json or csv.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    /// Two-column TSV mapping old sense keys to current ones.
    #[arg(long)]
    id_map: Option<PathBuf>,
    /// Corpus label in summaries; defaults to the corpus file stem.
    #[arg(long)]
    corpus_name: Option<String>,
}

#[derive(Args)]
struct SenseArgs {
    #[arg(long)]
    resource: PathBuf,
    #[arg(long)]
    sense_map: PathBuf,
}

#[derive(Args)]
struct OhptArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    align: PathBuf,
    #[command(flatten)]
    senses: SenseArgs,
    #[arg(long)]
    adjudication: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct MergeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    align: PathBuf,
    /// Translations two senses must share to be merged.
    #[arg(long, default_value_t = 1)]
    min_shared: usize,
    /// Restrict to homonymous words and label groups with homonyms.
    #[arg(long, requires = "sense_map")]
    resource: Option<PathBuf>,
    #[arg(long, requires = "resource")]
    sense_map: Option<PathBuf>,
    /// Words to merge, as lemma#pos; repeatable.
    #[arg(long)]
    word: Vec<String>,
    /// Write the derived clustering as TSV.
    #[arg(long)]
    clusters_out: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    align: PathBuf,
    #[command(flatten)]
    senses: SenseArgs,
    /// `resource` for homonyms, or a clustering TSV.
    #[arg(long)]
    groups_a: String,
    #[arg(long)]
    groups_b: String,
    #[arg(long, default_value_t = 20)]
    sample: usize,
    #[arg(long)]
    seed: u64,
    /// Never sample grouping B words that appear in the resource.
    #[arg(long)]
    exclude_overlap: bool,
    /// Apply the Yates continuity correction.
    #[arg(long)]
    yates: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OhpdArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    senses: SenseArgs,
    #[arg(long)]
    adjudication: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum OhpcCommand {
    /// Train per-word models.
    Train(TrainArgs),
    /// Evaluate models on test corpora.
    Eval(EvalArgs),
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    id_map: Option<PathBuf>,
    #[arg(long)]
    resource: PathBuf,
    /// Train on every annotated word, not only homonymous ones.
    #[arg(long)]
    all_words: bool,
    #[arg(long, default_value_t = 2)]
    positional: usize,
    #[arg(long, default_value_t = 3)]
    pos_window: usize,
    /// Drop bag-of-words features.
    #[arg(long)]
    no_bag: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    models: PathBuf,
    /// Test corpus XML; repeatable, paired with --test-gold.
    #[arg(long, required = true)]
    test: Vec<PathBuf>,
    #[arg(long, required = true)]
    test_gold: Vec<PathBuf>,
    #[arg(long)]
    id_map: Option<PathBuf>,
    #[arg(long)]
    corpus_name: Option<String>,
    #[command(flatten)]
    senses: SenseArgs,
    #[arg(long)]
    adjudication: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OhpscArgs {
    #[arg(long)]
    clusters: PathBuf,
    #[command(flatten)]
    senses: SenseArgs,
    #[arg(long)]
    adjudication: Option<PathBuf>,
    /// Clustering the sense map was derived from.
    #[arg(long)]
    map_source: Option<PathBuf>,
    /// Evaluate even when the clustering produced the sense map.
    #[arg(long)]
    allow_circular: bool,
    /// Label in summaries; defaults to the clustering file stem.
    #[arg(long)]
    corpus_name: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory of JSON run reports.
    #[arg(long)]
    runs: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FixtureArgs {
    #[arg(long)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Violation rate for every hypothesis.
    #[arg(long, default_value_t = 0.05)]
    rate: f64,
    #[arg(long)]
    ohpt_rate: Option<f64>,
    #[arg(long)]
    ohpd_rate: Option<f64>,
    #[arg(long)]
    ohpc_rate: Option<f64>,
    #[arg(long)]
    ohpsc_rate: Option<f64>,
    #[arg(long, default_value_t = 12)]
    words: usize,
    #[arg(long, default_value_t = 8)]
    documents: usize,
    #[arg(long, default_value_t = 6)]
    unattested: usize,
    #[arg(long, default_value_t = 4)]
    monosemous: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, requires = "gold")]
    corpus: Option<PathBuf>,
    #[arg(long, requires = "corpus")]
    gold: Option<PathBuf>,
    #[arg(long, requires = "corpus")]
    align: Option<PathBuf>,
    #[arg(long)]
    resource: Option<PathBuf>,
    #[arg(long, requires = "resource")]
    sense_map: Option<PathBuf>,
    #[arg(long)]
    clusters: Option<PathBuf>,
    #[arg(long)]
    adjudication: Option<PathBuf>,
    #[arg(long)]
    id_map: Option<PathBuf>,
    #[arg(long)]
    models: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    // fail early on a bad thread cap
    parallel::thread_cap()?;
    let verbose = cli.verbose;
    match cli.command {
        Command::Ohpt(a) => ohpt(a, verbose),
        Command::OhptMerge(a) => merge(a),
        Command::OhptCompare(a) => compare(a),
        Command::Ohpd(a) => ohpd(a, verbose),
        Command::Ohpc(OhpcCommand::Train(a)) => train(a),
        Command::Ohpc(OhpcCommand::Eval(a)) => eval(a, verbose),
        Command::Ohpsc(a) => ohpsc(a, verbose),
        Command::Report(a) => combine(a),
        Command::Fixtures(a) => generate(a),
        Command::Validate(a) => validate(a),
    }
}

fn output_format(output: &Output) -> Format {
    output
        .format
        .or_else(|| output.out.as_deref().and_then(Format::from_extension))
        .unwrap_or(Format::Text)
}

fn write_output(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => formats::write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_run(report: &RunReport, output: &Output, verbose: bool) -> Result<()> {
    let format = output_format(output);
    // text reports already end with their notes
    if verbose && (format != Format::Text || output.out.is_some()) {
        for n in &report.notes {
            eprintln!("note: {n}");
        }
    }
    write_output(output, &report.emit(format))
}

fn id_map(path: Option<&Path>) -> Result<Option<IdMapTable>> {
    path.map(formats::load_id_map).transpose()
}

fn load_corpus(args: &CorpusArgs) -> Result<(LoadedCorpus, String)> {
    let map = id_map(args.id_map.as_deref())?;
    let loaded = formats::load_corpus(&args.corpus, &args.gold, map.as_ref())?;
    let name = args
        .corpus_name
        .clone()
        .unwrap_or_else(|| run::corpus_label(&args.corpus));
    Ok((loaded, name))
}

fn load_senses(args: &SenseArgs) -> Result<(Lexicon, SenseMap, formats::SenseMapFile)> {
    let lexicon = formats::load_lexicon(&args.resource)?;
    let (map, file) = formats::load_sense_map(&args.sense_map, &lexicon)?;
    Ok((lexicon, map, file))
}

fn adjudication(path: Option<&Path>) -> Result<Vec<AdjudicationRecord>> {
    Ok(path.map(formats::load_adjudication).transpose()?.unwrap_or_default())
}

fn ohpt(a: OhptArgs, verbose: bool) -> Result<()> {
    let (loaded, name) = load_corpus(&a.corpus)?;
    let (lexicon, map, _) = load_senses(&a.senses)?;
    let alignments = formats::load_alignments(&a.align, &loaded.corpus)?;
    let records = adjudication(a.adjudication.as_deref())?;
    let report = run::run_ohpt(&name, &loaded, &alignments, &map, &lexicon, &records)?;
    emit_run(&report, &a.output, verbose)
}

fn merge(a: MergeArgs) -> Result<()> {
    let (loaded, _) = load_corpus(&a.corpus)?;
    let alignments = formats::load_alignments(&a.align, &loaded.corpus)?;
    let senses = match (&a.resource, &a.sense_map) {
        (Some(resource), Some(sense_map)) => Some(load_senses(&SenseArgs {
            resource: resource.clone(),
            sense_map: sense_map.clone(),
        })?),
        _ => None,
    };
    let mut words: BTreeSet<Word> = a.word.iter().map(|w| formats::parse_word(w)).collect::<Result<_>>()?;
    if words.is_empty() {
        words = match &senses {
            Some((lexicon, _, _)) => lexicon.homonymous_words(),
            None => loaded.corpus.words().map(|(w, _)| w.clone()).collect(),
        };
    }
    let (report, derived) = run::run_merge(
        &loaded.corpus,
        &alignments,
        &words,
        a.min_shared,
        senses.as_ref().map(|s| &s.1),
    );
    if let Some(path) = &a.clusters_out {
        let text = formats::dump_clustering(&derived.to_clustering());
        formats::write_file(path, &text)?;
    }
    let text = match output_format(&a.output) {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report).expect("merge report serializes") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Usage(format!("csv: {e}"));
            w.write_record(["word", "group", "keys", "homonyms"]).map_err(io)?;
            for mw in &report.words {
                for (i, g) in mw.groups.iter().enumerate() {
                    w.write_record([
                        mw.word.to_string(),
                        (i + 1).to_string(),
                        g.keys.join(" "),
                        g.homonyms.join(" "),
                    ])
                    .map_err(io)?;
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
        }
    };
    write_output(&a.output, &text)
}

fn grouping<'a>(source: &str, lexicon: &'a Lexicon, map: &'a SenseMap) -> Result<run::Grouping<'a>> {
    if source == "resource" {
        Ok(run::Grouping::Homonyms(HomonymGrouping {
            sense_map: map,
            lexicon,
        }))
    } else {
        Ok(run::Grouping::Clusters(formats::load_clustering(Path::new(source))?))
    }
}

fn grouping_name(source: &str) -> String {
    if source == "resource" {
        "homonyms".to_owned()
    } else {
        run::corpus_label(Path::new(source))
    }
}

fn compare(a: CompareArgs) -> Result<()> {
    let (loaded, _) = load_corpus(&a.corpus)?;
    let (lexicon, map, _) = load_senses(&a.senses)?;
    let alignments = formats::load_alignments(&a.align, &loaded.corpus)?;
    let ga = grouping(&a.groups_a, &lexicon, &map)?;
    let gb = grouping(&a.groups_b, &lexicon, &map)?;
    let exclude_from_b = if a.exclude_overlap {
        loaded
            .corpus
            .words()
            .map(|(w, _)| w)
            .filter(|w| lexicon.contains_word(w))
            .cloned()
            .collect()
    } else {
        BTreeSet::new()
    };
    let options = CompareOptions {
        sample_size: a.sample,
        seed: a.seed,
        yates: a.yates,
        exclude_from_b,
    };
    let (name_a, mut name_b) = (grouping_name(&a.groups_a), grouping_name(&a.groups_b));
    if name_a == name_b {
        name_b.push_str("-b");
    }
    let report = run::run_compare((&name_a, &ga), (&name_b, &gb), &loaded.corpus, &alignments, &options)?;
    let text = match output_format(&a.output) {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report).expect("compare report serializes") + "\n",
        Format::Csv => return Err(Error::Usage("ohpt-compare writes text or json".to_owned())),
    };
    write_output(&a.output, &text)
}

fn ohpd(a: OhpdArgs, verbose: bool) -> Result<()> {
    let (loaded, name) = load_corpus(&a.corpus)?;
    let (lexicon, map, _) = load_senses(&a.senses)?;
    let records = adjudication(a.adjudication.as_deref())?;
    let report = run::run_ohpd(&name, &loaded, &map, &lexicon, &records)?;
    emit_run(&report, &a.output, verbose)
}

fn train(a: TrainArgs) -> Result<()> {
    let map = id_map(a.id_map.as_deref())?;
    let loaded = formats::load_corpus(&a.corpus, &a.gold, map.as_ref())?;
    let lexicon = formats::load_lexicon(&a.resource)?;
    let config = FeatureConfig {
        positional: a.positional,
        pos_window: a.pos_window,
        bag_of_words: !a.no_bag,
    };
    let scope = if a.all_words {
        TrainScope::All
    } else {
        TrainScope::Homonymous
    };
    let models = parallel::with_pool(|| parallel::train(&loaded.corpus, &lexicon, &config, scope))?;
    models::save(&a.out, &models)
}

fn eval(a: EvalArgs, verbose: bool) -> Result<()> {
    if a.test.len() != a.test_gold.len() {
        return Err(Error::Usage(format!(
            "{} --test files but {} --test-gold files",
            a.test.len(),
            a.test_gold.len()
        )));
    }
    let models = models::load(&a.models)?;
    let (lexicon, map, _) = load_senses(&a.senses)?;
    let table = id_map(a.id_map.as_deref())?;
    let parts: Vec<(&Path, &Path)> = a
        .test
        .iter()
        .map(PathBuf::as_path)
        .zip(a.test_gold.iter().map(PathBuf::as_path))
        .collect();
    let loaded = formats::load_corpora(&parts, table.as_ref())?;
    let name = a.corpus_name.clone().unwrap_or_else(|| {
        a.test
            .iter()
            .map(|p| run::corpus_label(p))
            .collect::<Vec<_>>()
            .join("+")
    });
    let records = adjudication(a.adjudication.as_deref())?;
    let report = run::run_ohpc_eval(&name, &models, &loaded, &map, &lexicon, &records)?;
    emit_run(&report, &a.output, verbose)
}

fn ohpsc(a: OhpscArgs, verbose: bool) -> Result<()> {
    let bytes = std::fs::read(&a.clusters).map_err(|e| Error::io(&a.clusters, e))?;
    let (lexicon, map, file) = load_senses(&a.senses)?;
    let source = a
        .map_source
        .as_ref()
        .map(|p| std::fs::read(p).map_err(|e| Error::io(p, e)))
        .transpose()?;
    if let Some(reason) = run::circularity(&bytes, &file, source.as_deref()) {
        if !a.allow_circular {
            return Err(Error::Circular {
                path: a.clusters.clone(),
                reason,
            });
        }
        eprintln!("warning: {}: {reason}", a.clusters.display());
    }
    let clustering = formats::load_clustering(&a.clusters)?;
    let name = a.corpus_name.clone().unwrap_or_else(|| run::corpus_label(&a.clusters));
    let records = adjudication(a.adjudication.as_deref())?;
    let report = run::run_ohpsc(&name, &clustering, &map, &lexicon, &records)?;
    emit_run(&report, &a.output, verbose)
}

fn combine(a: ReportArgs) -> Result<()> {
    let (runs, skipped) = run::collect_runs(&a.runs)?;
    for s in &skipped {
        eprintln!("warning: {s}: not a run report, skipped");
    }
    if runs.is_empty() {
        return Err(Error::Usage(format!("no run reports in {}", a.runs.display())));
    }
    let summaries: Vec<_> = runs.iter().map(|r| r.summary.clone()).collect();
    let exceptions: Vec<_> = runs.iter().flat_map(|r| r.exceptions.iter().cloned()).collect();
    write_output(
        &a.output,
        &report::emit(&summaries, &exceptions, output_format(&a.output)),
    )
}

fn generate(a: FixtureArgs) -> Result<()> {
    let config = FixtureConfig {
        seed: a.seed,
        words: a.words,
        documents: a.documents,
        unattested: a.unattested,
        monosemous: a.monosemous,
        rates: Rates {
            ohpt: a.ohpt_rate.unwrap_or(a.rate),
            ohpd: a.ohpd_rate.unwrap_or(a.rate),
            ohpc: a.ohpc_rate.unwrap_or(a.rate),
            ohpsc: a.ohpsc_rate.unwrap_or(a.rate),
        },
    };
    let fixture = fixtures::generate(&config)?;
    fixture.write(&a.out)?;
    let p = &fixture.manifest.planted;
    println!(
        "wrote {}: planted ohpt {}, ohpd {}, ohpc {}, ohpsc {}",
        a.out.display(),
        p.ohpt.len(),
        p.ohpd.len(),
        p.ohpc.len(),
        p.ohpsc.len()
    );
    Ok(())
}

fn validate(a: ValidateArgs) -> Result<()> {
    let table = id_map(a.id_map.as_deref())?;
    if let (Some(path), Some(_)) = (&a.id_map, &table) {
        println!("{}: ok", path.display());
    }
    let mut corpus = None;
    if let (Some(xml), Some(gold)) = (&a.corpus, &a.gold) {
        let loaded = formats::load_corpus(xml, gold, table.as_ref())?;
        let s = loaded.corpus.stats();
        println!(
            "{}: ok, {} documents, {} sentences, {} annotated tokens",
            xml.display(),
            s.documents,
            s.sentences,
            loaded.corpus.instances().len()
        );
        let d = &loaded.diagnostics;
        if !d.instances_without_gold.is_empty() || !d.gold_for_unknown_instances.is_empty() {
            println!(
                "  {} instances without gold, {} gold ids without an instance",
                d.instances_without_gold.len(),
                d.gold_for_unknown_instances.len()
            );
        }
        corpus = Some(loaded);
    }
    if let (Some(path), Some(loaded)) = (&a.align, &corpus) {
        let set = formats::load_alignments(path, &loaded.corpus)?;
        println!(
            "{}: ok, {} links, {} dropped",
            path.display(),
            set.len(),
            set.dropped().len()
        );
    }
    if let Some(path) = &a.resource {
        let lexicon = formats::load_lexicon(path)?;
        println!(
            "{}: ok, {} entries, {} homonymous words",
            path.display(),
            lexicon.len(),
            lexicon.homonymous_words().len()
        );
        if let Some(path) = &a.sense_map {
            let (map, _) = formats::load_sense_map(path, &lexicon)?;
            println!("{}: ok, {} keys mapped", path.display(), map.len());
            for (reason, n) in map.exclusion_counts() {
                println!("  {n} rows excluded: {}", reason.as_str());
            }
        }
    }
    if let Some(path) = &a.clusters {
        let c = formats::load_clustering(path)?;
        println!("{}: ok, {} clusters", path.display(), c.len());
    }
    if let Some(path) = &a.adjudication {
        let r = formats::load_adjudication(path)?;
        println!("{}: ok, {} records", path.display(), r.len());
    }
    if let Some(path) = &a.models {
        let m = models::load(path)?;
        println!("{}: ok, {} word models", path.display(), m.len());
    }
    Ok(())
}

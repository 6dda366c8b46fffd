//! The `khtext` command line.
//!
//! Settings resolve as command-line flag, then the `--config` TOML file,
//! then the built-in default. `--threads` also reads `KHTEXT_THREADS`.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use khtext_core::baseline::{Baseline, SvmConfig};
use khtext_core::classifiers::{
    evaluate, holdout_split, train_classifier, ClassifierConfig, Optimizer, VALIDATION_FRACTION,
};
use khtext_core::embedding::{pca_project, EmbeddingHyper, Mode, NeighborIndex};
use khtext_core::evalkit::MetricsReport;
use khtext_core::nn::{ArchSpec, ConvSpec};
use khtext_core::textproc::{kcc_split, Document, SubwordConfig, Unit};
use khtext_core::Task;
use serde::Deserialize;
use serde_json::json;

use crate::dataset::{load_dataset, load_dataset_with, read_corpus, write_dataset};
use crate::formats::{
    export_vectors, load_baseline, load_classifier, load_embedding, save_baseline, save_classifier, save_embedding,
};
use crate::hogwild::train_parallel;
use crate::synth::{synth_dataset, SynthConfig};

#[derive(Debug, Parser)]
#[command(name = "khtext", version, about = "Subword embeddings and text classification for Khmer")]
pub struct Cli {
    /// TOML file with default settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for embedding training.
    #[arg(long, global = true, env = "KHTEXT_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Report style.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split each line into Khmer character clusters, tab-separated.
    Kcc { file: PathBuf },
    #[command(subcommand)]
    Embed(EmbedCmd),
    #[command(subcommand)]
    Classify(ClassifyCmd),
    #[command(subcommand)]
    Baseline(BaselineCmd),
    /// Generate a labelled JSONL dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Subcommand)]
pub enum EmbedCmd {
    /// Train subword embeddings on a corpus with one sentence per line.
    Train(EmbedTrainArgs),
    /// Nearest neighbours of a token by cosine similarity.
    Nn {
        #[arg(long)]
        model: PathBuf,
        token: String,
        #[arg(short = 'k', default_value_t = 10)]
        k: usize,
    },
    /// 2-D PCA coordinates of the tokens in a file, as TSV.
    Pca {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        tokens_file: PathBuf,
    },
    /// Write word vectors in text form.
    Export {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct EmbedTrainArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub neg: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f32>,
    #[arg(long)]
    pub minn: Option<usize>,
    #[arg(long)]
    pub maxn: Option<usize>,
    #[arg(long)]
    pub buckets: Option<u64>,
    #[arg(long)]
    pub unit: Option<Unit>,
    #[arg(long)]
    pub min_count: Option<u64>,
    /// Frequent-word subsampling threshold.
    #[arg(long)]
    pub subsample: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum ClassifyCmd {
    Train(ClassifyTrainArgs),
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
    /// Emit one JSON line per input document with labels and probabilities.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ClassifyTrainArgs {
    #[arg(long)]
    pub arch: Option<String>,
    #[arg(long)]
    pub task: Option<Task>,
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub train: PathBuf,
    /// Validation set; without it a share of the training set is held out.
    #[arg(long)]
    pub valid: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub dropout: Option<f64>,
    #[arg(long)]
    pub lr: Option<f64>,
    /// Hidden units (linear) or units per direction (birnn).
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub filters: Option<usize>,
    /// Comma-separated convolution window sizes.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub fine_tune: bool,
}

#[derive(Debug, Subcommand)]
pub enum BaselineCmd {
    Train {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        task: Option<Task>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        output: PathBuf,
    },
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub docs_per_class: Option<usize>,
    #[arg(long)]
    pub vocab_per_class: Option<usize>,
    #[arg(long)]
    pub overlap: Option<f64>,
    #[arg(long)]
    pub task: Option<Task>,
    #[arg(long)]
    pub doc_len: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Documents per class for a held-out set sharing the vocabularies.
    #[arg(long, requires = "holdout_output")]
    pub holdout: Option<usize>,
    #[arg(long, requires = "holdout")]
    pub holdout_output: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub format: Option<Format>,
    pub embed: EmbedSection,
    pub classify: ClassifySection,
    pub baseline: BaselineSection,
    pub synth: SynthSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbedSection {
    pub mode: Option<Mode>,
    pub dim: Option<usize>,
    pub window: Option<usize>,
    pub neg: Option<usize>,
    pub epochs: Option<usize>,
    pub lr: Option<f32>,
    pub minn: Option<usize>,
    pub maxn: Option<usize>,
    pub buckets: Option<u64>,
    pub unit: Option<Unit>,
    pub min_count: Option<u64>,
    pub subsample: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifySection {
    pub arch: Option<String>,
    pub task: Option<Task>,
    pub epochs: Option<usize>,
    pub batch: Option<usize>,
    pub dropout: Option<f64>,
    pub lr: Option<f64>,
    pub hidden: Option<usize>,
    pub filters: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub max_len: Option<usize>,
    pub fine_tune: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineSection {
    pub task: Option<Task>,
    pub lambda: Option<f64>,
    pub epochs: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub k: Option<usize>,
    pub docs_per_class: Option<usize>,
    pub vocab_per_class: Option<usize>,
    pub overlap: Option<f64>,
    pub task: Option<Task>,
    pub doc_len: Option<usize>,
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn read_config(path: Option<&Path>) -> anyhow::Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("{}", p.display()))?;
            toml::from_str(&text).map_err(|e| anyhow::anyhow!("{}: {}", p.display(), e.message()))
        }
    }
}

/// Runs a parsed command, writing reports to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    let file = read_config(cli.config.as_deref())?;
    let seed = pick(cli.seed, file.seed, 0);
    let threads = pick(cli.threads, file.threads, 1);
    let format = pick(cli.format, file.format, Format::Table);
    if threads == 0 {
        bail!("--threads must be at least 1");
    }
    match cli.command {
        Command::Kcc { file: path } => kcc(&path, out),
        Command::Embed(cmd) => embed(cmd, &file.embed, seed, threads, format, out),
        Command::Classify(cmd) => classify(cmd, &file.classify, seed, format, out),
        Command::Baseline(cmd) => baseline(cmd, &file.baseline, seed, format, out),
        Command::Synth(args) => synth(args, &file.synth, seed, out),
    }
}

fn kcc(path: &Path, out: &mut dyn Write) -> anyhow::Result<()> {
    let f = std::fs::File::open(path).with_context(|| format!("{}", path.display()))?;
    for line in BufReader::new(f).lines() {
        let line = line.with_context(|| format!("{}", path.display()))?;
        writeln!(out, "{}", kcc_split(&line).join("\t"))?;
    }
    Ok(())
}

fn embed(
    cmd: EmbedCmd,
    file: &EmbedSection,
    seed: u64,
    threads: usize,
    format: Format,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    match cmd {
        EmbedCmd::Train(a) => {
            let mode = pick(a.mode, file.mode, Mode::Cbow);
            let mut h = EmbeddingHyper::new(mode);
            let unit = pick(a.unit, file.unit, h.subword.unit);
            let sub = SubwordConfig::for_unit(unit);
            h.dim = pick(a.dim, file.dim, h.dim);
            h.window = pick(a.window, file.window, h.window);
            h.negatives = pick(a.neg, file.neg, h.negatives);
            h.epochs = pick(a.epochs, file.epochs, h.epochs);
            h.lr0 = pick(a.lr, file.lr, h.lr0);
            h.subword = SubwordConfig {
                minn: pick(a.minn, file.minn, sub.minn),
                maxn: pick(a.maxn, file.maxn, sub.maxn),
                buckets: pick(a.buckets, file.buckets, sub.buckets),
                unit,
            };
            h.min_count = pick(a.min_count, file.min_count, h.min_count);
            h.subsample = a.subsample.or(file.subsample);
            h.seed = seed;
            h.validate()?;
            let corpus = read_corpus(&a.input)?;
            let (model, report) = train_parallel(&corpus, &h, threads)?;
            save_embedding(&model, &a.output)?;
            match format {
                Format::Table => {
                    writeln!(out, "vocabulary {} words, {} tokens", model.vocab().len(), model.vocab().total_tokens())?;
                    writeln!(out, "epoch\tloss")?;
                    for (i, l) in report.epoch_loss.iter().enumerate() {
                        writeln!(out, "{}\t{:.6}", i + 1, l)?;
                    }
                }
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({
                        "vocabulary": model.vocab().len(),
                        "tokens": model.vocab().total_tokens(),
                        "epoch_loss": report.epoch_loss,
                    })
                )?,
            }
        }
        EmbedCmd::Nn { model, token, k } => {
            let model = load_embedding(&model)?;
            let hits = NeighborIndex::new(&model).query(&token, k)?;
            match format {
                Format::Table => {
                    for (t, c) in hits {
                        writeln!(out, "{t}\t{c:.6}")?;
                    }
                }
                Format::Json => {
                    let rows: Vec<_> = hits.iter().map(|(t, c)| json!({"token": t, "cosine": c})).collect();
                    writeln!(out, "{}", serde_json::Value::from(rows))?;
                }
            }
        }
        EmbedCmd::Pca { model, tokens_file } => {
            let model = load_embedding(&model)?;
            let text = std::fs::read_to_string(&tokens_file).with_context(|| format!("{}", tokens_file.display()))?;
            let tokens: Vec<&str> = text.split_whitespace().collect();
            let coords = pca_project(&model, &tokens)?;
            writeln!(out, "token\tpc1\tpc2")?;
            for (t, x, y) in coords {
                writeln!(out, "{t}\t{x}\t{y}")?;
            }
        }
        EmbedCmd::Export { model, output } => {
            let model = load_embedding(&model)?;
            match output {
                Some(p) => {
                    let f = std::fs::File::create(&p).with_context(|| format!("{}", p.display()))?;
                    let mut w = std::io::BufWriter::new(f);
                    export_vectors(&model, &mut w)?;
                    w.flush()?;
                }
                None => export_vectors(&model, out)?,
            }
        }
    }
    Ok(())
}

fn print_report(report: &MetricsReport, names: &[String], format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
    match format {
        Format::Table => write!(out, "{}", report.to_table(names))?,
        Format::Json => {
            let mut v = serde_json::to_value(report)?;
            v["labels"] = json!(names);
            writeln!(out, "{v}")?;
        }
    }
    Ok(())
}

fn arch_spec(name: &str, hidden: Option<usize>, filters: Option<usize>, sizes: Option<Vec<usize>>) -> anyhow::Result<ArchSpec> {
    let Some(spec) = ArchSpec::default_for(name) else {
        bail!("unknown architecture {name:?} (expected linear, birnn or cnn)");
    };
    Ok(match spec {
        ArchSpec::Linear { hidden: h } => ArchSpec::Linear { hidden: hidden.unwrap_or(h) },
        ArchSpec::Birnn { hidden: h } => ArchSpec::Birnn { hidden: hidden.unwrap_or(h) },
        ArchSpec::Cnn(c) => ArchSpec::Cnn(ConvSpec::new(sizes.unwrap_or(c.sizes), filters.unwrap_or(c.filters))?),
    })
}

fn classify(cmd: ClassifyCmd, file: &ClassifySection, seed: u64, format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
    match cmd {
        ClassifyCmd::Train(a) => {
            let emb = load_embedding(&a.embeddings)?;
            let data = load_dataset(&a.train)?;
            let (train, valid) = match &a.valid {
                Some(p) => (data.docs.clone(), load_dataset_with(p, &data.labels)?),
                None => holdout_split(&data.docs, VALIDATION_FRACTION, seed),
            };
            let name = a.arch.clone().or_else(|| file.arch.clone()).unwrap_or_else(|| "linear".into());
            let arch = arch_spec(
                &name,
                a.hidden.or(file.hidden),
                a.filters.or(file.filters),
                a.sizes.clone().or_else(|| file.sizes.clone()),
            )?;
            let task = pick(a.task, file.task, Task::Multiclass);
            let mut cfg = ClassifierConfig::new(arch, task, data.labels.len(), emb.dim());
            cfg.epochs = pick(a.epochs, file.epochs, cfg.epochs);
            cfg.batch_size = pick(a.batch, file.batch, cfg.batch_size);
            cfg.dropout = pick(a.dropout, file.dropout, cfg.dropout);
            if let Some(lr) = a.lr.or(file.lr) {
                cfg.optimizer = Optimizer::adam(lr);
            }
            cfg.max_len = pick(a.max_len, file.max_len, cfg.max_len);
            cfg.fine_tune = a.fine_tune || file.fine_tune.unwrap_or(false);
            cfg.seed = seed;
            let (model, history) = train_classifier(&train, &valid, &data.labels, &emb, &cfg)?;
            save_classifier(&model, &a.output)?;
            match format {
                Format::Table => {
                    writeln!(out, "{} classifier, {} parameters", name, model.num_parameters())?;
                    writeln!(out, "epoch\tloss\tvalid macro-F1\tvalid micro-F1")?;
                    let opt = |v: Option<f64>| v.map_or_else(|| "-".into(), |x| format!("{x:.4}"));
                    for e in &history.epochs {
                        writeln!(out, "{}\t{:.6}\t{}\t{}", e.epoch, e.train_loss, opt(e.valid_macro_f1), opt(e.valid_micro_f1))?;
                    }
                    if let Some(b) = history.best_epoch {
                        writeln!(out, "kept epoch {b}")?;
                    }
                }
                Format::Json => {
                    let epochs: Vec<_> = history
                        .epochs
                        .iter()
                        .map(|e| {
                            json!({"epoch": e.epoch, "loss": e.train_loss,
                                   "valid_macro_f1": e.valid_macro_f1, "valid_micro_f1": e.valid_micro_f1})
                        })
                        .collect();
                    writeln!(
                        out,
                        "{}",
                        json!({"arch": name, "parameters": model.num_parameters(),
                               "epochs": epochs, "best_epoch": history.best_epoch})
                    )?;
                }
            }
        }
        ClassifyCmd::Eval { model, embeddings, test } => {
            let model = load_classifier(&model)?;
            let emb = load_embedding(&embeddings)?;
            let docs = load_dataset_with(&test, &model.labels)?;
            let report = evaluate(&model, &docs, &emb)?;
            print_report(&report, model.labels.names(), format, out)?;
        }
        ClassifyCmd::Predict { model, embeddings, input } => {
            let model = load_classifier(&model)?;
            let emb = load_embedding(&embeddings)?;
            model.check_embedding(&emb)?;
            let f = std::fs::File::open(&input).with_context(|| format!("{}", input.display()))?;
            for (i, line) in BufReader::new(f).lines().enumerate() {
                let line = line.with_context(|| format!("{}", input.display()))?;
                if line.trim().is_empty() {
                    continue;
                }
                let ctx = || format!("{}: line {}", input.display(), i + 1);
                let rec: TextRecord = serde_json::from_str(&line).with_context(ctx)?;
                let doc = Document::new(&rec.text, Vec::new()).with_context(ctx)?;
                let p = model.predict(&doc, &emb).with_context(ctx)?;
                let names = model.labels.names();
                let labels: Vec<&str> = p.labels.iter().map(|&l| names[l].as_str()).collect();
                let probs: serde_json::Map<String, serde_json::Value> =
                    names.iter().cloned().zip(p.probabilities.iter().map(|&x| json!(x))).collect();
                writeln!(out, "{}", json!({"labels": labels, "probabilities": probs}))?;
            }
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct TextRecord {
    text: String,
}

fn baseline(cmd: BaselineCmd, file: &BaselineSection, seed: u64, format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
    match cmd {
        BaselineCmd::Train { train, task, lambda, epochs, output } => {
            let data = load_dataset(&train)?;
            let defaults = SvmConfig::default();
            let cfg = SvmConfig {
                lambda: pick(lambda, file.lambda, defaults.lambda),
                epochs: pick(epochs, file.epochs, defaults.epochs),
                seed,
            };
            let task = pick(task, file.task, Task::Multiclass);
            let (model, history) = Baseline::fit(&data.docs, task, data.labels.len(), &cfg)?;
            save_baseline(&model, &data.labels, &output)?;
            match format {
                Format::Table => {
                    writeln!(out, "{} features, {} labels", model.vectorizer.dim(), data.labels.len())?;
                    writeln!(out, "epoch\tobjective")?;
                    for (i, o) in history.objective.iter().enumerate() {
                        writeln!(out, "{}\t{:.6}", i + 1, o)?;
                    }
                }
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({"features": model.vectorizer.dim(), "objective": history.objective})
                )?,
            }
        }
        BaselineCmd::Eval { model, test } => {
            let (model, labels) = load_baseline(&model)?;
            let docs = load_dataset_with(&test, &labels)?;
            let report = model.evaluate(&docs)?;
            print_report(&report, labels.names(), format, out)?;
        }
    }
    Ok(())
}

fn synth(a: SynthArgs, file: &SynthSection, seed: u64, out: &mut dyn Write) -> anyhow::Result<()> {
    let d = SynthConfig::default();
    let cfg = SynthConfig {
        k: pick(a.k, file.k, d.k),
        docs_per_class: pick(a.docs_per_class, file.docs_per_class, d.docs_per_class),
        vocab_per_class: pick(a.vocab_per_class, file.vocab_per_class, d.vocab_per_class),
        overlap_ratio: pick(a.overlap, file.overlap, d.overlap_ratio),
        task: pick(a.task, file.task, d.task),
        seed,
        doc_len: pick(a.doc_len, file.doc_len, d.doc_len),
        holdout_per_class: a.holdout.unwrap_or(0),
    };
    let (data, holdout) = synth_dataset(&cfg)?;
    match a.output {
        Some(p) => write_jsonl(&p, &data)?,
        None => write_dataset(&data.docs, &data.labels, out)?,
    }
    if let Some(p) = a.holdout_output {
        write_jsonl(&p, &holdout)?;
    }
    Ok(())
}

fn write_jsonl(path: &Path, data: &crate::dataset::Dataset) -> anyhow::Result<()> {
    let f = std::fs::File::create(path).with_context(|| format!("{}", path.display()))?;
    let mut w = std::io::BufWriter::new(f);
    write_dataset(&data.docs, &data.labels, &mut w)?;
    w.flush()?;
    Ok(())
}

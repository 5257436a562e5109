//! Command-line front end. [`run`] parses arguments and returns the text
//! that would be printed, so every command can be driven in-process.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset_file::{ingest, serialize, IngestOptions};
use crate::error::{Error, Result};
use crate::geometry::GeometryConfig;
use crate::labeling::{label, FiveClassRule};
use crate::ml::{evaluate, split_indices, subset_table, train_tree, KnnModel, LabeledUsers, Schema, SplitSpec, TreeParams};
use crate::model::{Dataset, Scheme, Timestamp};
use crate::prep::{compute_stats, CanonTable};
use crate::recommend::{build_reports, reports_to_csv, PipelineConfig};
use crate::synth::{generate, SynthConfig};

#[derive(Debug, Parser)]
#[command(name = "facetag", version, about = "Privacy behaviour analysis of tagged photo albums")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Face box expansion for the tag-on-face test, as a fraction of the face size.
    #[arg(long, global = true, default_value_t = GeometryConfig::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Reading of the 5-class "faces in fewer than half the photos" clause.
    #[arg(long, global = true, default_value = "photo_fraction", value_parser = parse_rule)]
    five_class_rule: FiveClassRule,
    /// Canonicalization table (attribute<TAB>raw<TAB>canonical); the built-in table by default.
    #[arg(long, global = true)]
    canon: Option<PathBuf>,
    /// Albums kept per user; 0 keeps all.
    #[arg(long, global = true, default_value_t = IngestOptions::DEFAULT_MAX_ALBUMS)]
    max_albums: usize,
    /// Photos kept per album; 0 keeps all.
    #[arg(long, global = true, default_value_t = IngestOptions::DEFAULT_MAX_PHOTOS)]
    max_photos: usize,
    /// Drop albums and photos created before this date.
    #[arg(long, global = true)]
    since: Option<String>,
    /// Write output to this file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate and normalize a dataset file.
    Ingest { input: PathBuf },
    /// Per-attribute disclosure and per-gender exposure statistics.
    Stats {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Label every user under one scheme.
    Label {
        input: PathBuf,
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
    },
    /// Train a decision tree and evaluate it on a held-out split.
    TrainTree {
        input: PathBuf,
        #[arg(long, value_parser = parse_scheme, default_value = "7")]
        scheme: Scheme,
        /// Comma-separated feature list; all profile attributes by default.
        #[arg(long)]
        features: Option<String>,
        /// Add n_faces, n_tags and n_photos to the features.
        #[arg(long)]
        exposure_features: bool,
        #[arg(long, default_value_t = TreeParams::default().min_leaf)]
        min_leaf: usize,
        #[arg(long, default_value_t = SplitSpec::DEFAULT_TRAIN_FRACTION)]
        split: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the trained tree as JSON.
        #[arg(long)]
        tree_json: Option<PathBuf>,
        /// Reserved for confidence-based pruning (e.g. `confidence=0.25`);
        /// not implemented, trees are always unpruned.
        #[arg(long)]
        prune: Option<String>,
    },
    /// KNN accuracy per feature subset and labeling scheme.
    KnnEval {
        input: PathBuf,
        #[arg(long, default_value_t = KnnModel::DEFAULT_K)]
        k: usize,
        #[arg(long, default_value_t = SplitSpec::DEFAULT_TRAIN_FRACTION)]
        split: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// A comma-separated feature subset; repeat for several subsets.
        /// Defaults to education, location and relationship separately.
        #[arg(long)]
        features: Vec<String>,
        /// Restrict to one scheme; all three by default.
        #[arg(long, value_parser = parse_scheme)]
        scheme: Option<Scheme>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Album setting recommendations for every user.
    Recommend {
        input: PathBuf,
        #[arg(long, default_value_t = KnnModel::DEFAULT_K)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Full privacy report per user.
    Report {
        input: PathBuf,
        #[arg(long, default_value_t = KnnModel::DEFAULT_K)]
        k: usize,
        /// Only this user.
        #[arg(long)]
        user: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate a seeded synthetic dataset.
    Synth {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = SynthConfig::default().n_users)]
        users: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rule(s: &str) -> std::result::Result<FiveClassRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Common {
    fn geometry(&self) -> Result<GeometryConfig> {
        GeometryConfig::new(self.epsilon)
    }

    fn load(&self, input: &Path) -> Result<Dataset> {
        let table = match &self.canon {
            Some(p) => CanonTable::load(p)?,
            None => CanonTable::builtin(),
        };
        let cap = |n: usize| (n > 0).then_some(n);
        let since = self
            .since
            .as_deref()
            .map(|s| s.parse::<Timestamp>().map_err(|e| Error::Usage(format!("--since: {e}"))))
            .transpose()?;
        let opts = IngestOptions {
            max_albums: cap(self.max_albums),
            max_photos_per_album: cap(self.max_photos),
            since,
        };
        ingest(input, &opts, &table)
    }

    fn pipeline(&self, k: usize) -> Result<PipelineConfig> {
        Ok(PipelineConfig {
            geometry: self.geometry()?,
            rule: self.five_class_rule,
            k: Some(k),
            ..PipelineConfig::default()
        })
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn no_csv(command: &str) -> Error {
    Error::Usage(format!("{command} has no csv output"))
}

/// Runs one command line (including the program name) and returns its
/// output. With `--output`, the output is written to the file and a one-line
/// note is returned instead.
pub fn run<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Ok(e.to_string()),
                _ => Err(Error::Usage(e.to_string())),
            }
        }
    };
    let text = execute(&cli)?;
    match &cli.common.output {
        None => Ok(text),
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Error::io(path.display().to_string(), e))?;
            Ok(format!("wrote {}\n", path.display()))
        }
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let common = &cli.common;
    match &cli.command {
        Command::Ingest { input } => Ok(serialize(&common.load(input)?)),
        Command::Stats { input, format } => {
            let stats = compute_stats(common.load(input)?.users())?;
            match format {
                Format::Text => Ok(stats.render()),
                Format::Json => Ok(to_json(&stats)),
                Format::Csv => Err(no_csv("stats")),
            }
        }
        Command::Label { input, scheme } => {
            let dataset = common.load(input)?;
            let geometry = common.geometry()?;
            let data = LabeledUsers::new(&dataset, &geometry, common.five_class_rule);
            let mut out = String::from("user_id\tlabel\n");
            for (u, e) in data.users.iter().zip(&data.exposures) {
                out.push_str(&format!("{}\t{}\n", u.user_id(), label(e, *scheme, common.five_class_rule)));
            }
            Ok(out)
        }
        Command::TrainTree {
            input,
            scheme,
            features,
            exposure_features,
            min_leaf,
            split,
            seed,
            tree_json,
            prune,
        } => {
            if let Some(p) = prune {
                return Err(Error::config(format!("--prune {p}: pruning is not implemented")));
            }
            let dataset = common.load(input)?;
            let mut schema = match features {
                Some(list) => Schema::parse_list(list)?,
                None => Schema::profile(),
            };
            if *exposure_features {
                schema = schema.with_exposure();
            }
            let data = LabeledUsers::new(&dataset, &common.geometry()?, common.five_class_rule);
            let examples = data.examples(&schema, *scheme);
            let (train_idx, test_idx) = split_indices(examples.len(), &SplitSpec::new(*split, *seed)?)?;
            let pick = |idx: &[usize]| idx.iter().map(|&i| examples[i].clone()).collect::<Vec<_>>();
            let tree = train_tree(&schema, &pick(&train_idx), TreeParams { min_leaf: *min_leaf })?;
            if let Some(path) = tree_json {
                std::fs::write(path, tree.to_json()).map_err(|e| Error::io(path.display().to_string(), e))?;
            }
            let report = evaluate(&tree, &pick(&test_idx))?;
            Ok(format!(
                "decision tree, {} training / {} test records\n\n{}\n{}",
                train_idx.len(),
                test_idx.len(),
                tree.render(),
                report.render()
            ))
        }
        Command::KnnEval {
            input,
            k,
            split,
            seed,
            features,
            scheme,
            format,
        } => {
            let dataset = common.load(input)?;
            let subsets = if features.is_empty() {
                ["education", "location", "relationship"]
                    .iter()
                    .map(|f| Schema::parse_list(f))
                    .collect::<Result<Vec<_>>>()?
            } else {
                features.iter().map(|f| Schema::parse_list(f)).collect::<Result<Vec<_>>>()?
            };
            let schemes: Vec<Scheme> = scheme.map_or_else(|| Scheme::ALL.to_vec(), |s| vec![s]);
            let data = LabeledUsers::new(&dataset, &common.geometry()?, common.five_class_rule);
            let table = subset_table(&data, &subsets, &schemes, *k, &SplitSpec::new(*split, *seed)?)?;
            match format {
                Format::Text => Ok(table.render()),
                Format::Json => Ok(to_json(&table)),
                Format::Csv => Err(no_csv("knn-eval")),
            }
        }
        Command::Recommend { input, k, format } => {
            let reports = build_reports(&common.load(input)?, &common.pipeline(*k)?)?;
            match format {
                Format::Text => Ok(reports.iter().map(|r| r.recommendation.render()).collect()),
                Format::Json => Ok(to_json(&reports.iter().map(|r| &r.recommendation).collect::<Vec<_>>())),
                Format::Csv => reports_to_csv(&reports),
            }
        }
        Command::Report { input, k, user, format } => {
            let mut reports = build_reports(&common.load(input)?, &common.pipeline(*k)?)?;
            if let Some(id) = user {
                reports.retain(|r| &r.user_id == id);
                if reports.is_empty() {
                    return Err(Error::validation(format!("no user `{id}` in the dataset")));
                }
            }
            match format {
                Format::Text => Ok(reports.iter().map(|r| r.render() + "\n").collect()),
                Format::Json => Ok(to_json(&reports)),
                Format::Csv => reports_to_csv(&reports),
            }
        }
        Command::Synth { seed, users } => {
            let out = generate(&SynthConfig::default().with_seed(*seed).with_users(*users))?;
            Ok(out.file.to_json())
        }
    }
}

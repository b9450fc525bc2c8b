//! Command-line driver: ingest and validate corpora, compute indicator score
//! tables, run the fairness analysis, produce descriptive statistics,
//! generate synthetic corpora, and publish citation-potential baselines.
//!
//! Exit codes: 0 success, 1 input error, 2 configuration error, 3 internal
//! invariant failure.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bibnorm::citing::ZeroRefCitations;
use bibnorm::classify::{build_overlapping_scheme, load_evaluation_scheme};
use bibnorm::corpus::{Corpus, IngestOptions, IngestSummary};
use bibnorm::csncr::{
    citation_potentials, csncr_scores_with_potentials, potentials_to_rows, read_baselines,
    rows_to_potentials, write_baselines, BaselineRow,
};
use bibnorm::descriptives::{reference_count_summary, reference_trend, reference_year_summary};
use bibnorm::error::{Error, ErrorKind, Result};
use bibnorm::fairness::{fairness_suite, CutRounding, FairnessConfig, TieRule};
use bibnorm::indicators::{compute_indicator, Indicator, RunSettings, ALL_INDICATORS};
use bibnorm::report::{
    self, config_hash, write_fairness_by_year_tsv, write_fairness_summary_tsv, write_json,
    write_rows_tsv, write_scores_tsv, ReportHeader,
};
use bibnorm::windows::{WindowSpec, YearInterval};

const TOOL: &str = "bibnorm";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = TOOL, version = VERSION, about = "Citation indicator engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a corpus and print the ingestion summary
    Validate(ValidateArgs),
    /// Per-group referencing-pattern statistics
    Describe(DescribeArgs),
    /// Compute indicator score tables
    Compute(ComputeArgs),
    /// Top-share fairness analysis over an evaluation scheme
    Fairness(FairnessArgs),
    /// Write a synthetic corpus from a generator config
    Generate(GenerateArgs),
    /// Compute and publish citation-potential baselines
    Baselines(BaselinesArgs),
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus file, one JSON record per line
    #[arg(long)]
    corpus: PathBuf,
    /// Last complete year for citation counting
    #[arg(long)]
    census_year: i32,
    /// Analyzed document type ("all" disables the filter)
    #[arg(long, default_value = "article")]
    doc_type: String,
    /// Drop papers of other document types entirely so they stop citing
    #[arg(long)]
    restrict_citing: bool,
}

impl CorpusArgs {
    fn doc_type_filter(&self) -> Option<String> {
        if self.doc_type == "all" {
            None
        } else {
            Some(self.doc_type.clone())
        }
    }

    fn load(&self) -> Result<(Corpus, IngestSummary)> {
        let file = open(&self.corpus)?;
        Corpus::read_jsonl(
            BufReader::new(file),
            self.census_year,
            IngestOptions {
                doc_type: self.doc_type_filter(),
                restrict_citing: self.restrict_citing,
            },
        )
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    /// Tab-separated tables with presentation rounding
    Delimited,
    /// JSON with full precision
    Structured,
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory (overridden by BIBNORM_OUT_DIR)
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Delimited)]
    format: Format,
}

impl OutputArgs {
    fn dir(&self) -> PathBuf {
        match std::env::var_os("BIBNORM_OUT_DIR") {
            Some(dir) => PathBuf::from(dir),
            None => self.out_dir.clone(),
        }
    }
}

#[derive(Args)]
struct WindowArgs {
    /// Window applied to every indicator (fixedN or full)
    #[arg(long, default_value = "fixed3")]
    window: String,
    /// Per-indicator override, e.g. --indicator-window ncs=full
    #[arg(long = "indicator-window")]
    indicator_window: Vec<String>,
    /// Minimum papers per overlapping category combination
    #[arg(long, default_value_t = 10)]
    min_size: usize,
    /// Weight of citations whose normalization denominator is zero
    #[arg(long, value_enum, default_value_t = ZeroRule::Ignore)]
    zero_ref_rule: ZeroRule,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ZeroRule {
    Ignore,
    UnitWeight,
}

impl From<ZeroRule> for ZeroRefCitations {
    fn from(rule: ZeroRule) -> Self {
        match rule {
            ZeroRule::Ignore => ZeroRefCitations::Ignore,
            ZeroRule::UnitWeight => ZeroRefCitations::UnitWeight,
        }
    }
}

impl WindowArgs {
    fn settings(&self) -> Result<RunSettings> {
        let window: WindowSpec = self.window.parse()?;
        let mut overrides = BTreeMap::new();
        for entry in &self.indicator_window {
            let (name, spec) = entry.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("expected indicator=window, got {entry:?}"))
            })?;
            overrides.insert(name.parse::<Indicator>()?, spec.parse::<WindowSpec>()?);
        }
        if self.min_size < 1 {
            return Err(Error::InvalidConfig("min_size must be at least 1".into()));
        }
        Ok(RunSettings {
            window,
            window_overrides: overrides,
            min_size: self.min_size,
            zero_ref_rule: self.zero_ref_rule.into(),
        })
    }
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_enum, default_value_t = Format::Delimited)]
    format: Format,
}

#[derive(Args)]
struct DescribeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Publication year to summarize
    #[arg(long)]
    year: i32,
    /// Grouping file (paper_id<TAB>group); alternative to --group-by
    #[arg(long, conflicts_with = "group_by")]
    grouping: Option<PathBuf>,
    /// Derive groups from the corpus itself
    #[arg(long, value_enum, default_value_t = GroupBy::Combination)]
    group_by: GroupBy,
    /// Restrict the reference-year distribution to linked references
    #[arg(long)]
    linked_only: bool,
    /// Also emit the per-year reference trend over this range (A:B)
    #[arg(long)]
    trend_years: Option<String>,
    /// Reference window length of the trend
    #[arg(long, default_value_t = 3)]
    trend_window: u32,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum GroupBy {
    /// One group per journal
    Journal,
    /// One group per exact category combination
    Combination,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Publication years to score
    #[arg(long, value_delimiter = ',', required = true)]
    years: Vec<i32>,
    /// Indicators to compute
    #[arg(long, value_delimiter = ',', default_value = "csncr")]
    indicators: Vec<String>,
    /// Reuse citation potentials from a published baseline file
    #[arg(long)]
    baselines: Option<PathBuf>,
}

#[derive(Args)]
struct FairnessArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Publication years to test
    #[arg(long, value_delimiter = ',', required = true)]
    years: Vec<i32>,
    /// Indicators to test (default: all)
    #[arg(long, value_delimiter = ',')]
    indicators: Vec<String>,
    /// Evaluation scheme file (paper_id<TAB>category)
    #[arg(long)]
    evaluation: PathBuf,
    /// Fraction of scored papers marked as top
    #[arg(long, default_value_t = 0.10)]
    share: f64,
    #[arg(long, value_enum, default_value_t = TieArg::ThresholdTies)]
    tie_rule: TieArg,
    #[arg(long, value_enum, default_value_t = RoundingArg::HalfEven)]
    cut_rounding: RoundingArg,
    /// Keep unscored papers in the category denominators (as unmarked)
    #[arg(long)]
    include_unscored: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum TieArg {
    /// Mark every paper tied with the cut-off value
    ThresholdTies,
    /// Mark exactly the nominal count, ties broken by paper id
    StrictCount,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum RoundingArg {
    HalfEven,
    HalfUp,
    Floor,
    Ceil,
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator config (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output corpus file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BaselinesArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Publication years to cover
    #[arg(long, value_delimiter = ',', required = true)]
    years: Vec<i32>,
    /// Output baseline file
    #[arg(long)]
    out: PathBuf,
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?))
}

fn parse_indicators(names: &[String], default_all: bool) -> Result<Vec<Indicator>> {
    if names.is_empty() {
        if default_all {
            return Ok(ALL_INDICATORS.to_vec());
        }
        return Err(Error::InvalidConfig("no indicators requested".into()));
    }
    names.iter().map(|name| name.parse()).collect()
}

fn parse_year_range(text: &str) -> Result<YearInterval> {
    let (first, last) = text
        .split_once(':')
        .ok_or_else(|| Error::InvalidConfig(format!("expected FIRST:LAST years, got {text:?}")))?;
    let parse = |s: &str| {
        s.parse::<i32>()
            .map_err(|_| Error::InvalidConfig(format!("bad year {s:?}")))
    };
    YearInterval::new(parse(first)?, parse(last)?)
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        let code = match err.kind() {
            ErrorKind::Input => 1,
            ErrorKind::Config => 2,
            ErrorKind::Internal => 3,
        };
        std::process::exit(code);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Validate(args) => validate(args),
        Command::Describe(args) => describe(args),
        Command::Compute(args) => compute(args),
        Command::Fairness(args) => fairness(args),
        Command::Generate(args) => generate(args),
        Command::Baselines(args) => baselines(args),
    }
}

fn validate(args: ValidateArgs) -> Result<()> {
    let (corpus, summary) = args.corpus.load()?;
    match args.format {
        Format::Structured => {
            let header = ReportHeader::new(TOOL, VERSION, "-", corpus.content_hash());
            let stdout = std::io::stdout();
            write_json(stdout.lock(), &header, &summary)?;
        }
        Format::Delimited => {
            println!("corpus_hash: {}", corpus.content_hash());
            println!("papers_read: {}", summary.papers_read);
            println!("papers_kept: {}", summary.papers_kept);
            println!("papers_dropped: {}", summary.papers_dropped);
            println!("analyzed_papers: {}", summary.analyzed_papers);
            println!("links_resolved: {}", summary.links_resolved);
            println!("links_demoted: {}", summary.links_demoted);
            println!("ref_years_corrected: {}", summary.ref_years_corrected);
            println!("census_year: {}", summary.census_year);
        }
    }
    Ok(())
}

fn build_grouping(
    corpus: &Corpus,
    args: &DescribeArgs,
    all_years: bool,
) -> Result<BTreeMap<String, String>> {
    if let Some(path) = &args.grouping {
        let scheme = load_evaluation_scheme(BufReader::new(open(path)?), corpus)?;
        return Ok(corpus
            .papers()
            .filter_map(|p| {
                scheme
                    .category_of(&p.paper_id)
                    .map(|g| (p.paper_id.clone(), g.to_string()))
            })
            .collect());
    }
    let mut grouping = BTreeMap::new();
    for paper in corpus.papers() {
        if !corpus.is_analyzed(paper) || (!all_years && paper.pub_year != args.year) {
            continue;
        }
        let group = match args.group_by {
            GroupBy::Journal => Some(paper.journal_id.clone()),
            GroupBy::Combination => {
                if paper.categories.is_empty() {
                    None
                } else {
                    Some(
                        paper
                            .categories
                            .iter()
                            .cloned()
                            .collect::<Vec<_>>()
                            .join("+"),
                    )
                }
            }
        };
        if let Some(group) = group {
            grouping.insert(paper.paper_id.clone(), group);
        }
    }
    Ok(grouping)
}

#[derive(Serialize)]
struct DescribeReport<'a> {
    year: i32,
    linked_only: bool,
    reference_counts: &'a bibnorm::descriptives::SummaryReport,
    reference_years: &'a bibnorm::descriptives::SummaryReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    trend: &'a Option<bibnorm::descriptives::TrendReport>,
}

fn describe(args: DescribeArgs) -> Result<()> {
    let (corpus, _) = args.corpus.load()?;
    let trend_range = args
        .trend_years
        .as_deref()
        .map(parse_year_range)
        .transpose()?;

    #[derive(Serialize)]
    struct Hashed<'a> {
        command: &'static str,
        census_year: i32,
        doc_type: &'a str,
        restrict_citing: bool,
        year: i32,
        group_by: GroupBy,
        grouping_file: bool,
        linked_only: bool,
        trend_years: Option<String>,
        trend_window: u32,
        format: Format,
    }
    let header = ReportHeader::new(
        TOOL,
        VERSION,
        config_hash(&Hashed {
            command: "describe",
            census_year: args.corpus.census_year,
            doc_type: &args.corpus.doc_type,
            restrict_citing: args.corpus.restrict_citing,
            year: args.year,
            group_by: args.group_by,
            grouping_file: args.grouping.is_some(),
            linked_only: args.linked_only,
            trend_years: args.trend_years.clone(),
            trend_window: args.trend_window,
            format: args.output.format,
        }),
        corpus.content_hash(),
    );

    let year_grouping = build_grouping(&corpus, &args, false)?;
    let counts = reference_count_summary(&corpus, &year_grouping, args.year)?;
    let years = reference_year_summary(&corpus, &year_grouping, args.year, args.linked_only)?;
    let trend = match trend_range {
        Some(range) => {
            let full_grouping = build_grouping(&corpus, &args, true)?;
            Some(reference_trend(
                &corpus,
                &full_grouping,
                range,
                args.trend_window,
            )?)
        }
        None => None,
    };

    let dir = args.output.dir();
    match args.output.format {
        Format::Delimited => {
            let columns = ["group", "mean", "median", "q1", "q3", "n"];
            let path = dir.join(format!("ref_counts_{}.tsv", args.year));
            write_rows_tsv(
                create(&path)?,
                &header,
                &columns,
                &report::summary_rows(&counts.groups),
            )?;
            println!("wrote {}", path.display());
            let path = dir.join(format!("ref_years_{}.tsv", args.year));
            write_rows_tsv(
                create(&path)?,
                &header,
                &columns,
                &report::summary_rows(&years.groups),
            )?;
            println!("wrote {}", path.display());
            if let Some(trend) = &trend {
                let path = dir.join(format!(
                    "ref_trend_{}_{}.tsv",
                    trend_range.expect("set with trend").first(),
                    trend_range.expect("set with trend").last()
                ));
                write_rows_tsv(
                    create(&path)?,
                    &header,
                    &["group", "pub_year", "mean_linked_refs"],
                    &report::trend_rows(&trend.series),
                )?;
                println!("wrote {}", path.display());
            }
        }
        Format::Structured => {
            let path = dir.join(format!("describe_{}.json", args.year));
            write_json(
                create(&path)?,
                &header,
                &DescribeReport {
                    year: args.year,
                    linked_only: args.linked_only,
                    reference_counts: &counts,
                    reference_years: &years,
                    trend: &trend,
                },
            )?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn compute(args: ComputeArgs) -> Result<()> {
    let (corpus, _) = args.corpus.load()?;
    let settings = args.window.settings()?;
    let indicators = parse_indicators(&args.indicators, false)?;
    let baseline_rows: Option<Vec<BaselineRow>> = match &args.baselines {
        Some(path) => Some(read_baselines(BufReader::new(open(path)?))?),
        None => None,
    };

    #[derive(Serialize)]
    struct Hashed<'a> {
        command: &'static str,
        census_year: i32,
        doc_type: &'a str,
        restrict_citing: bool,
        years: &'a [i32],
        indicators: Vec<&'static str>,
        settings: &'a RunSettings,
        baselines: bool,
        format: Format,
    }
    let header = ReportHeader::new(
        TOOL,
        VERSION,
        config_hash(&Hashed {
            command: "compute",
            census_year: args.corpus.census_year,
            doc_type: &args.corpus.doc_type,
            restrict_citing: args.corpus.restrict_citing,
            years: &args.years,
            indicators: indicators.iter().map(|i| i.name()).collect(),
            settings: &settings,
            baselines: baseline_rows.is_some(),
            format: args.output.format,
        }),
        corpus.content_hash(),
    );

    let dir = args.output.dir();
    for &year in &args.years {
        for &indicator in &indicators {
            let table = match (&baseline_rows, indicator) {
                (Some(rows), Indicator::Csncr) => {
                    let window = settings.window_for(indicator);
                    let (scheme, _) = build_overlapping_scheme(&corpus, year, settings.min_size)?;
                    let potentials = rows_to_potentials(rows, year, window);
                    csncr_scores_with_potentials(&corpus, &scheme, &potentials, window, year)?
                }
                _ => compute_indicator(&corpus, indicator, year, &settings)?,
            };
            let stem = format!("{}_{}", indicator.name(), year);
            let path = match args.output.format {
                Format::Delimited => {
                    let path = dir.join(format!("{stem}.tsv"));
                    write_scores_tsv(create(&path)?, &header, &table)?;
                    path
                }
                Format::Structured => {
                    let path = dir.join(format!("{stem}.json"));
                    write_json(create(&path)?, &header, &table)?;
                    path
                }
            };
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn fairness(args: FairnessArgs) -> Result<()> {
    let (corpus, _) = args.corpus.load()?;
    let settings = args.window.settings()?;
    let indicators = parse_indicators(&args.indicators, true)?;
    let evaluation = load_evaluation_scheme(BufReader::new(open(&args.evaluation)?), &corpus)?;
    if evaluation.is_empty() {
        eprintln!("warning: evaluation scheme is empty");
    }
    let config = FairnessConfig {
        share: args.share,
        tie_rule: match args.tie_rule {
            TieArg::ThresholdTies => TieRule::MarkThresholdTies,
            TieArg::StrictCount => TieRule::StrictCount,
        },
        rounding: match args.cut_rounding {
            RoundingArg::HalfEven => CutRounding::HalfEven,
            RoundingArg::HalfUp => CutRounding::HalfUp,
            RoundingArg::Floor => CutRounding::Floor,
            RoundingArg::Ceil => CutRounding::Ceil,
        },
        include_unscored: args.include_unscored,
    };

    #[derive(Serialize)]
    struct Hashed<'a> {
        command: &'static str,
        census_year: i32,
        doc_type: &'a str,
        restrict_citing: bool,
        years: &'a [i32],
        indicators: Vec<&'static str>,
        settings: &'a RunSettings,
        fairness: &'a FairnessConfig,
        format: Format,
    }
    let header = ReportHeader::new(
        TOOL,
        VERSION,
        config_hash(&Hashed {
            command: "fairness",
            census_year: args.corpus.census_year,
            doc_type: &args.corpus.doc_type,
            restrict_citing: args.corpus.restrict_citing,
            years: &args.years,
            indicators: indicators.iter().map(|i| i.name()).collect(),
            settings: &settings,
            fairness: &config,
            format: args.output.format,
        }),
        corpus.content_hash(),
    );

    let report = fairness_suite(
        &corpus,
        &indicators,
        &args.years,
        &evaluation,
        &settings,
        &config,
    )?;
    let dir = args.output.dir();
    match args.output.format {
        Format::Delimited => {
            let path = dir.join("fairness_by_year.tsv");
            write_fairness_by_year_tsv(create(&path)?, &header, &report)?;
            println!("wrote {}", path.display());
            let path = dir.join("fairness_summary.tsv");
            write_fairness_summary_tsv(create(&path)?, &header, &report)?;
            println!("wrote {}", path.display());
        }
        Format::Structured => {
            let path = dir.join("fairness.json");
            write_json(create(&path)?, &header, &report)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", args.config.display()),
        ))
    })?;
    let config = bibnorm::synthgen::GeneratorConfig::from_toml_str(&text)?;
    let corpus = bibnorm::synthgen::generate_corpus(&config)?;
    let mut writer = create(&args.out)?;
    corpus.write_jsonl(&mut writer)?;
    writer.flush()?;
    println!(
        "generated {} papers with {} citation edges into {}",
        corpus.len(),
        corpus.total_citation_edges(),
        args.out.display()
    );
    Ok(())
}

fn baselines(args: BaselinesArgs) -> Result<()> {
    let (corpus, _) = args.corpus.load()?;
    let settings = args.window.settings()?;
    let window = settings.window;

    #[derive(Serialize)]
    struct Hashed<'a> {
        command: &'static str,
        census_year: i32,
        doc_type: &'a str,
        restrict_citing: bool,
        years: &'a [i32],
        settings: &'a RunSettings,
    }
    let header = ReportHeader::new(
        TOOL,
        VERSION,
        config_hash(&Hashed {
            command: "baselines",
            census_year: args.corpus.census_year,
            doc_type: &args.corpus.doc_type,
            restrict_citing: args.corpus.restrict_citing,
            years: &args.years,
            settings: &settings,
        }),
        corpus.content_hash(),
    );

    let mut rows = Vec::new();
    for &year in &args.years {
        let (scheme, _) = build_overlapping_scheme(&corpus, year, settings.min_size)?;
        let potentials = citation_potentials(&corpus, &scheme, window, year)?;
        rows.extend(potentials_to_rows(&potentials, window));
    }
    let mut writer = create(&args.out)?;
    write_baselines(&mut writer, &rows, &header.comment_lines())?;
    writer.flush()?;
    println!(
        "wrote {} baseline rows to {}",
        rows.len(),
        args.out.display()
    );
    Ok(())
}

//! `factbench` command-line tool.
//!
//! Exit codes: 0 success, 1 runtime or environment failure, 2 bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use factbench::io::{
    import_gold_tsv, load_sentences, load_state, load_system_extractions, save_state,
    write_system_extractions, AnnotationState,
};
use factbench::model::{GoldBenchmark, TaggedSentence};
use factbench::normalize::NormalizationConfig;
use factbench::scoring::{
    format_score, has_errors, lint_gold, lint_gold_tsv, prune_ne_centric, score_fact_based,
    score_token_overlap, synset_reference_triples, ContainmentTarget, Diagnostic, Severity,
    UnknownSentencePolicy,
};
use factbench::shorthand::{expand_synset, ExpandError, ExpansionLimits};
use factbench::tagger::{ingest_pretagged, ingest_pretagged_many, tag, HighlightScheme, TaggerConfig};
use factbench_service::{load_tagger_config, ServiceConfig};

#[derive(Parser)]
#[command(name = "factbench", version, about = "Fact-synset benchmarks for open information extraction")]
struct Cli {
    #[command(flatten)]
    norm: NormFlags,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct NormFlags {
    /// Compare words case-sensitively.
    #[arg(long, global = true)]
    case_sensitive: bool,
    /// Ignore a final punctuation-only token in each slot.
    #[arg(long, global = true)]
    strip_terminal_punct: bool,
    /// Largest number of variants one triple template may expand to.
    #[arg(long, global = true, value_name = "N")]
    max_variants: Option<usize>,
    /// Extractions for sentences missing from the gold: fail, or count as false positives.
    #[arg(long, global = true, value_enum, default_value_t = Unknown::Strict)]
    unknown_sentences: Unknown,
}

#[derive(Clone, Copy, ValueEnum)]
enum Unknown {
    Strict,
    Fp,
}

#[derive(Args)]
struct GoldArgs {
    /// Gold as a saved annotation state (JSON) or as TSV.
    #[arg(long)]
    gold: PathBuf,
    /// Sentences for TSV gold: a state file, tagged-sentence JSON, or a plain sentence file.
    #[arg(long)]
    sentences: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Score system extractions against gold.
    Score {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Fact)]
        mode: Mode,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List every realization of every synset.
    Expand {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long)]
        counts_only: bool,
    },
    /// Keep extractions whose subject and object both contain a gold argument.
    Prune {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::GoldArguments)]
        target: Target,
    },
    /// Check gold annotations.
    Lint {
        #[command(flatten)]
        gold: GoldArgs,
        #[arg(long)]
        json: bool,
        /// Exit 2 when any error-level diagnostic is found.
        #[arg(long)]
        strict: bool,
    },
    /// Tag sentences and write a fresh annotation state.
    Tag {
        #[arg(long, conflicts_with = "pretagged", required_unless_present = "pretagged")]
        input: Option<PathBuf>,
        /// Sentences already tagged by another pipeline (JSON object or array).
        #[arg(long)]
        pretagged: Option<PathBuf>,
        #[arg(long)]
        tagger_config: Option<PathBuf>,
        #[arg(long, value_enum)]
        scheme: Option<Scheme>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the annotation service.
    Serve {
        /// host:port; defaults to BIND_ADDR or 127.0.0.1:8080.
        #[arg(long)]
        bind: Option<String>,
        /// Session directory; defaults to DATA_DIR or ./sessions.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[arg(long)]
        tagger_config: Option<PathBuf>,
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fact,
    TokenOverlap,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    GoldArguments,
    NerSpans,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Full,
    Verbs,
    NamedEntities,
    None,
}

enum Failure {
    Input(String),
    Runtime(String),
}

type Res<T> = Result<T, Failure>;

fn input<E: std::fmt::Display>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Input(format!("{ctx}: {e}"))
}

fn read(path: &Path) -> Res<Vec<u8>> {
    fs::read(path).map_err(input(path.display()))
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Res<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Runtime(format!("stdout: {e}"))),
    }
}

fn is_json_object(bytes: &[u8]) -> bool {
    bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{')
}

impl NormFlags {
    fn cfg(&self) -> NormalizationConfig {
        NormalizationConfig {
            case_fold: !self.case_sensitive,
            strip_terminal_punct: self.strip_terminal_punct,
        }
    }

    fn limits(&self) -> Res<ExpansionLimits> {
        let mut lim = ExpansionLimits::default();
        if let Some(n) = self.max_variants {
            lim = ExpansionLimits::new(n, lim.max_variants_per_synset.max(n))
                .ok_or_else(|| Failure::Input("--max-variants must be positive".into()))?;
        }
        Ok(lim)
    }

    fn policy(&self) -> UnknownSentencePolicy {
        match self.unknown_sentences {
            Unknown::Strict => UnknownSentencePolicy::Strict,
            Unknown::Fp => UnknownSentencePolicy::FalsePositive,
        }
    }
}

fn load_tagged_sentences(path: &Path) -> Res<Vec<TaggedSentence>> {
    let bytes = read(path)?;
    if is_json_object(&bytes) {
        return Ok(load_state(&bytes).map_err(input(path.display()))?.sentences);
    }
    if let Ok(tagged) = serde_json::from_slice::<Vec<TaggedSentence>>(&bytes) {
        for s in &tagged {
            s.validate().map_err(input(path.display()))?;
        }
        return Ok(tagged);
    }
    let cfg = TaggerConfig::default();
    load_sentences(&bytes)
        .map_err(input(path.display()))?
        .into_iter()
        .map(|s| tag(&s.text, &s.id, &cfg).map_err(input(format!("{} ({})", path.display(), s.id))))
        .collect()
}

enum Gold {
    State(GoldBenchmark),
    Tsv { bytes: Vec<u8>, sentences: Vec<TaggedSentence> },
}

fn load_gold_raw(args: &GoldArgs) -> Res<Gold> {
    let bytes = read(&args.gold)?;
    if is_json_object(&bytes) {
        return Ok(Gold::State(load_state(&bytes).map_err(input(args.gold.display()))?.gold()));
    }
    let Some(sp) = &args.sentences else {
        return Err(Failure::Input(format!(
            "{}: TSV gold needs --sentences",
            args.gold.display()
        )));
    };
    Ok(Gold::Tsv { bytes, sentences: load_tagged_sentences(sp)? })
}

fn load_gold(args: &GoldArgs, cfg: &NormalizationConfig) -> Res<GoldBenchmark> {
    match load_gold_raw(args)? {
        Gold::State(g) => Ok(g),
        Gold::Tsv { bytes, sentences, .. } => {
            import_gold_tsv(&bytes, &sentences, cfg).map_err(input(args.gold.display()))
        }
    }
}

fn load_system(path: &Path) -> Res<Vec<factbench::model::SystemExtraction>> {
    load_system_extractions(&read(path)?).map_err(input(path.display()))
}

fn expand_failure(e: ExpandError) -> Failure {
    match e {
        ExpandError::VariantLimitExceeded { count, limit } => Failure::Input(format!(
            "VariantLimitExceeded: would expand to {count} variants (limit {limit})"
        )),
        other => Failure::Input(other.to_string()),
    }
}

fn score_failure(e: factbench::scoring::ScoreError) -> Failure {
    match e {
        factbench::scoring::ScoreError::Expand(e) => expand_failure(e),
        other => Failure::Input(other.to_string()),
    }
}

fn cmd_score(norm: &NormFlags, gold: &GoldArgs, system: &Path, mode: Mode, report: Option<&Path>) -> Res<()> {
    let cfg = norm.cfg();
    let g = load_gold(gold, &cfg)?;
    let xs = load_system(system)?;
    let (line, json) = match mode {
        Mode::Fact => {
            let r = score_fact_based(&xs, &g, &cfg, &norm.limits()?, norm.policy()).map_err(score_failure)?;
            let line = format!(
                "tp {} fp {} fn {}\nP {} R {} F1 {}\n",
                r.tp,
                r.fp,
                r.fn_,
                format_score(r.precision),
                format_score(r.recall),
                format_score(r.f1)
            );
            (line, serde_json::to_vec_pretty(&r))
        }
        Mode::TokenOverlap => {
            let refs = synset_reference_triples(&g);
            if norm.policy() == UnknownSentencePolicy::Strict {
                if let Some(e) = xs.iter().find(|e| g.sentence(&e.sentence_id).is_none()) {
                    return Err(Failure::Input(format!(
                        "extraction references unknown sentence {:?}",
                        e.sentence_id
                    )));
                }
            }
            let r = score_token_overlap(&xs, &refs, &cfg).map_err(score_failure)?;
            let line = format!(
                "P {} R {} F1 {}\n",
                format_score(r.precision),
                format_score(r.recall),
                format_score(r.f1)
            );
            (line, serde_json::to_vec_pretty(&r))
        }
    };
    if let Some(p) = report {
        let mut bytes = json.expect("report serializes");
        bytes.push(b'\n');
        write_out(Some(p), &bytes)?;
    }
    write_out(None, line.as_bytes())
}

fn cmd_expand(norm: &NormFlags, gold: &GoldArgs, counts_only: bool) -> Res<()> {
    let cfg = norm.cfg();
    let lim = norm.limits()?;
    let g = load_gold(gold, &cfg)?;
    let mut out = String::new();
    let (mut synsets, mut triples) = (0usize, 0usize);
    for (sentence, list) in g.iter() {
        for y in list {
            let set = expand_synset(y, sentence, &cfg, &lim).map_err(expand_failure)?;
            synsets += 1;
            triples += set.len();
            out.push_str(&format!("{}\t{}\t{}\n", sentence.id, y.id, set.len()));
            if !counts_only {
                for t in set.triples() {
                    out.push_str(&format!("  {t}\n"));
                }
            }
        }
    }
    out.push_str(&format!("{synsets} synsets, {triples} triples\n"));
    write_out(None, out.as_bytes())
}

fn cmd_prune(norm: &NormFlags, gold: &GoldArgs, system: &Path, target: Target) -> Res<()> {
    let cfg = norm.cfg();
    let g = load_gold(gold, &cfg)?;
    let xs = load_system(system)?;
    let target = match target {
        Target::GoldArguments => ContainmentTarget::GoldArguments,
        Target::NerSpans => ContainmentTarget::NerSpans,
    };
    let kept = prune_ne_centric(&xs, &g, &cfg, &norm.limits()?, target).map_err(score_failure)?;
    eprintln!("kept {} of {}", kept.len(), xs.len());
    write_out(None, &write_system_extractions(&kept))
}

fn cmd_lint(norm: &NormFlags, gold: &GoldArgs, json: bool, strict: bool) -> Res<bool> {
    let cfg = norm.cfg();
    let diagnostics: Vec<Diagnostic> = match load_gold_raw(gold)? {
        Gold::State(g) => lint_gold(&g, &cfg),
        Gold::Tsv { bytes, sentences, .. } => {
            lint_gold_tsv(&bytes, &sentences, &cfg).map_err(input(gold.gold.display()))?
        }
    };
    if json {
        let mut bytes = serde_json::to_vec_pretty(&diagnostics).expect("diagnostics serialize");
        bytes.push(b'\n');
        write_out(None, &bytes)?;
    } else {
        let mut out = String::new();
        for d in &diagnostics {
            let code = serde_json::to_value(d.code).expect("code serializes");
            let sev = serde_json::to_value(d.severity).expect("severity serializes");
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                sev.as_str().unwrap_or_default(),
                d.sentence_id,
                d.synset_id.as_deref().unwrap_or("-"),
                code.as_str().unwrap_or_default(),
                d.message
            ));
        }
        write_out(None, out.as_bytes())?;
    }
    let count = |s: Severity| diagnostics.iter().filter(|d| d.severity == s).count();
    eprintln!(
        "{} errors, {} warnings, {} notes",
        count(Severity::Error),
        count(Severity::Warning),
        count(Severity::Note)
    );
    Ok(strict && has_errors(&diagnostics))
}

fn tagger_config(path: Option<&Path>, scheme: Option<Scheme>) -> Res<TaggerConfig> {
    let mut cfg = match path {
        Some(p) => load_tagger_config(p).map_err(|e| Failure::Input(e.to_string()))?,
        None => TaggerConfig::default(),
    };
    if let Some(s) = scheme {
        cfg.highlight_scheme = match s {
            Scheme::Full => HighlightScheme::Full,
            Scheme::Verbs => HighlightScheme::Verbs,
            Scheme::NamedEntities => HighlightScheme::NamedEntities,
            Scheme::None => HighlightScheme::None,
        };
    }
    Ok(cfg)
}

fn cmd_tag(
    input_path: Option<&Path>,
    pretagged: Option<&Path>,
    cfg: &TaggerConfig,
    output: Option<&Path>,
) -> Res<()> {
    let sentences = match (input_path, pretagged) {
        (Some(p), _) => load_sentences(&read(p)?)
            .map_err(input(p.display()))?
            .into_iter()
            .map(|s| tag(&s.text, &s.id, cfg).map_err(input(format!("{} ({})", p.display(), s.id))))
            .collect::<Res<Vec<_>>>()?,
        (None, Some(p)) => {
            let bytes = read(p)?;
            if is_json_object(&bytes) {
                vec![ingest_pretagged(&bytes, cfg).map_err(input(p.display()))?]
            } else {
                ingest_pretagged_many(&bytes, cfg).map_err(input(p.display()))?
            }
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    write_out(output, &save_state(&AnnotationState::new(sentences)))
}

fn cmd_serve(
    bind: Option<&str>,
    data_dir: Option<&Path>,
    tagger: Option<&Path>,
    static_dir: Option<&Path>,
) -> Res<()> {
    let mut cfg = ServiceConfig::from_env().map_err(|e| Failure::Input(e.to_string()))?;
    if let Some(b) = bind {
        cfg.bind_addr = b
            .parse()
            .map_err(|_| Failure::Input(format!("--bind {b:?} is not host:port")))?;
    }
    if let Some(d) = data_dir {
        cfg.data_dir = d.to_path_buf();
    }
    if let Some(t) = tagger {
        cfg.tagger = load_tagger_config(t).map_err(|e| Failure::Input(e.to_string()))?;
    }
    if let Some(s) = static_dir {
        cfg.static_dir = Some(s.to_path_buf());
    }
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Runtime(e.to_string()))?;
    rt.block_on(factbench_service::serve(cfg, |addr| {
        eprintln!("listening on http://{addr}");
    }))
    .map_err(|e| Failure::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Res<bool> {
    let norm = &cli.norm;
    match &cli.cmd {
        Cmd::Score { gold, system, mode, report } => cmd_score(norm, gold, system, *mode, report.as_deref())?,
        Cmd::Expand { gold, counts_only } => cmd_expand(norm, gold, *counts_only)?,
        Cmd::Prune { gold, system, target } => cmd_prune(norm, gold, system, *target)?,
        Cmd::Lint { gold, json, strict } => return cmd_lint(norm, gold, *json, *strict),
        Cmd::Tag { input, pretagged, tagger_config: tc, scheme, output } => {
            let cfg = tagger_config(tc.as_deref(), *scheme)?;
            cmd_tag(input.as_deref(), pretagged.as_deref(), &cfg, output.as_deref())?
        }
        Cmd::Serve { bind, data_dir, tagger_config, static_dir } => cmd_serve(
            bind.as_deref(),
            data_dir.as_deref(),
            tagger_config.as_deref(),
            static_dir.as_deref(),
        )?,
    }
    Ok(false)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

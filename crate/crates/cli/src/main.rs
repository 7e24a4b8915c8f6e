//! Command line front end: load shift and code documents, run the deciders
//! and constructions, generate random instances, and emit reports.
//!
//! Exit codes: 0 when the checked property holds (or the command succeeded),
//! 1 when a property was refuted or a violation was found, 2 on errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use sofic_core::doc::{canonical_json, digest, CodeDocument, ShiftDocument};
use sofic_core::resolving::{as_one_block, is_left_eresolving, is_right_eresolving};
use sofic_core::rng::SplitMix64;
use sofic_core::{
    bicontinuing_recode, check_retract, corpus, gen, is_injective, is_right_continuing_sft,
    is_sft, language_equal, minimal_retract, no_retract_example, retract_zero_recode,
    run_kbound_experiment, spacer_interleave, step_of, Presentation, SlidingBlockCode,
};

#[derive(Parser)]
#[command(
    name = "sofic",
    version,
    about = "Shift spaces, sliding block codes and their continuing/eresolving/retract properties"
)]
struct Cli {
    /// Refuse input presentations with more states than this
    #[arg(long, global = true, default_value_t = 64)]
    max_states: usize,

    /// Refuse input alphabets with more symbols than this
    #[arg(long, global = true, default_value_t = 16)]
    max_symbols: usize,

    /// Emit the machine readable report as JSON on stdout
    #[arg(long, global = true)]
    json: bool,

    /// Also write the report to this file
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property of a shift or code document
    Check(CheckArgs),
    /// Run one of the bundled constructions and write its documents
    Construct(ConstructArgs),
    /// Random instances of the image step bound check
    ExperimentKbound(ExperimentArgs),
    /// Generate a random shift or code document
    Gen(GenArgs),
    /// List the bundled documents, or emit one
    Examples(ExamplesArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Property to decide
    #[arg(long)]
    property: String,
    /// Shift document (for sft, step, language-equal)
    #[arg(long)]
    shift: Option<PathBuf>,
    /// Second shift document (for language-equal)
    #[arg(long)]
    other: Option<PathBuf>,
    /// Code document (for eresolving, retract, injective, ...)
    #[arg(long)]
    code: Option<PathBuf>,
    /// Retract distance for --property retract
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct ConstructArgs {
    /// One of: example-sec3, sqrt, retract-zero, bicontinuing
    #[arg(long)]
    kind: String,
    /// Input code document (sqrt, retract-zero, bicontinuing)
    #[arg(long)]
    code: Option<PathBuf>,
    /// Directory the construction documents are written to
    #[arg(long, default_value = ".")]
    dir: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long = "instance-symbols", default_value_t = 5)]
    instance_symbols: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    /// One of: sft, code
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 3)]
    symbols: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Domain shift document for --kind code
    #[arg(long)]
    shift: Option<PathBuf>,
    /// Write the generated document to this file
    #[arg(long)]
    to: Option<PathBuf>,
}

#[derive(Args)]
struct ExamplesArgs {
    /// Name of a bundled document to emit
    #[arg(long)]
    emit: Option<String>,
    /// Directory emitted documents are written to
    #[arg(long, default_value = ".")]
    dir: PathBuf,
}

/// The machine readable run report. Elapsed time is printed on stderr in
/// human mode only, so reports with equal inputs and seeds stay
/// byte-identical.
#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    verdicts: Vec<Value>,
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    digest: String,
}

struct Outcome {
    report: RunReport,
    holds: bool,
    human: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    match run(&cli) {
        Ok(outcome) => {
            let rendered = canonical_json(&outcome.report);
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("error: cannot write report to {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if cli.json {
                println!("{rendered}");
            } else {
                for line in &outcome.human {
                    println!("{line}");
                }
                eprintln!("elapsed: {:?}", started.elapsed());
            }
            if outcome.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Check(args) => run_check(cli, args),
        Command::Construct(args) => run_construct(cli, args),
        Command::ExperimentKbound(args) => run_experiment(args),
        Command::Gen(args) => run_gen(cli, args),
        Command::Examples(args) => run_examples(args),
    }
}

fn load_shift(cli: &Cli, path: &Path) -> anyhow::Result<(ShiftDocument, Presentation)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading shift document {}", path.display()))?;
    let doc: ShiftDocument = serde_json::from_str(&text)
        .with_context(|| format!("parsing shift document {}", path.display()))?;
    if doc.alphabet.len() > cli.max_symbols {
        bail!(
            "document {} has {} symbols, over the cap of {} (raise --max-symbols)",
            path.display(),
            doc.alphabet.len(),
            cli.max_symbols
        );
    }
    let p = doc
        .to_presentation()
        .with_context(|| format!("validating shift document {}", path.display()))?;
    if p.n_states() > cli.max_states {
        bail!(
            "document {} has {} states, over the cap of {} (raise --max-states)",
            path.display(),
            p.n_states(),
            cli.max_states
        );
    }
    Ok((doc, p))
}

fn load_code(cli: &Cli, path: &Path) -> anyhow::Result<(CodeDocument, SlidingBlockCode)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading code document {}", path.display()))?;
    let doc: CodeDocument = serde_json::from_str(&text)
        .with_context(|| format!("parsing code document {}", path.display()))?;
    let base = path.parent().map(|p| p.to_path_buf()).unwrap_or_default();
    let code = doc
        .to_code(|rel| {
            let full = base.join(rel);
            let text = std::fs::read_to_string(&full).map_err(|e| {
                sofic_core::Error::InvalidDocument(format!(
                    "cannot read referenced domain {}: {e}",
                    full.display()
                ))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                sofic_core::Error::InvalidDocument(format!(
                    "cannot parse referenced domain {}: {e}",
                    full.display()
                ))
            })
        })
        .with_context(|| format!("validating code document {}", path.display()))?;
    if code.domain().n_states() > cli.max_states {
        bail!(
            "code domain has {} states, over the cap of {} (raise --max-states)",
            code.domain().n_states(),
            cli.max_states
        );
    }
    Ok((doc, code))
}

fn input_digest(path: &Path, value: &impl Serialize) -> InputDigest {
    InputDigest {
        path: path.display().to_string(),
        digest: digest(value),
    }
}

fn run_check(cli: &Cli, args: &CheckArgs) -> anyhow::Result<Outcome> {
    let mut inputs = Vec::new();
    let mut verdicts = Vec::new();
    let mut human = Vec::new();
    let holds;
    match args.property.as_str() {
        "sft" | "step" => {
            let path = args
                .shift
                .as_ref()
                .ok_or_else(|| anyhow!("--shift is required"))?;
            let (doc, p) = load_shift(cli, path)?;
            inputs.push(input_digest(path, &doc));
            let sft = is_sft(&p)?;
            let step = step_of(&p)?;
            holds = sft;
            verdicts.push(json!({"property": args.property, "holds": sft, "step": step}));
            human.push(match step {
                Some(k) => format!("shift of finite type: yes, minimal step {k}"),
                None => "shift of finite type: no".to_string(),
            });
        }
        "language-equal" => {
            let path = args
                .shift
                .as_ref()
                .ok_or_else(|| anyhow!("--shift is required"))?;
            let other = args
                .other
                .as_ref()
                .ok_or_else(|| anyhow!("--other is required"))?;
            let (doc_a, a) = load_shift(cli, path)?;
            let (doc_b, b) = load_shift(cli, other)?;
            inputs.push(input_digest(path, &doc_a));
            inputs.push(input_digest(other, &doc_b));
            holds = language_equal(&a, &b)?;
            verdicts.push(json!({"property": "language-equal", "holds": holds}));
            human.push(format!("languages equal: {holds}"));
        }
        "eresolving" | "left-eresolving" => {
            let path = args
                .code
                .as_ref()
                .ok_or_else(|| anyhow!("--code is required"))?;
            let (doc, code) = load_code(cli, path)?;
            inputs.push(input_digest(path, &doc));
            let one = as_one_block(&code)?;
            let v = if args.property == "eresolving" {
                is_right_eresolving(&one)?
            } else {
                is_left_eresolving(&one)?
            };
            holds = v.holds;
            verdicts.push(serde_json::to_value(&v)?);
            human.push(match &v.failure {
                None => format!("{}: holds", args.property),
                Some((a0, b)) => format!(
                    "{}: fails at symbol {a0:?} with image word {:?}{:?}",
                    args.property, b[0], b[1]
                ),
            });
        }
        "retract" => {
            let path = args
                .code
                .as_ref()
                .ok_or_else(|| anyhow!("--code is required"))?;
            let n = args
                .n
                .ok_or_else(|| anyhow!("--n is required for --property retract"))?;
            let (doc, code) = load_code(cli, path)?;
            inputs.push(input_digest(path, &doc));
            let one = as_one_block(&code)?;
            let v = check_retract(&one, n)?;
            holds = v.holds;
            human.push(if v.holds {
                format!("retract {n}: holds")
            } else {
                format!(
                    "retract {n}: fails; witness pair\n  x = {}\n  y = {}",
                    render_lasso(&v.witness.as_ref().unwrap().x),
                    render_lasso(&v.witness.as_ref().unwrap().y)
                )
            });
            verdicts.push(serde_json::to_value(&v)?);
        }
        "minimal-retract" => {
            let path = args
                .code
                .as_ref()
                .ok_or_else(|| anyhow!("--code is required"))?;
            let (doc, code) = load_code(cli, path)?;
            inputs.push(input_digest(path, &doc));
            let one = as_one_block(&code)?;
            let m = minimal_retract(&one)?;
            holds = m.is_some();
            verdicts.push(json!({"property": "minimal-retract", "holds": holds, "n": m}));
            human.push(match m {
                Some(n) => format!("minimal retract: {n}"),
                None => "minimal retract: none".to_string(),
            });
        }
        "injective" => {
            let path = args
                .code
                .as_ref()
                .ok_or_else(|| anyhow!("--code is required"))?;
            let (doc, code) = load_code(cli, path)?;
            inputs.push(input_digest(path, &doc));
            let v = is_injective(&code)?;
            holds = v.injective;
            verdicts.push(json!({
                "property": "injective",
                "holds": v.injective,
                "witness": v.witness.as_ref().map(|(a, b)| json!({"x": a, "xbar": b})),
            }));
            human.push(if v.injective {
                "injective: yes".to_string()
            } else {
                let (a, b) = v.witness.as_ref().unwrap();
                format!(
                    "injective: no; distinct preimages with one image\n  {}\n  {}",
                    render_lasso(a),
                    render_lasso(b)
                )
            });
        }
        "right-continuing" => {
            let path = args
                .code
                .as_ref()
                .ok_or_else(|| anyhow!("--code is required"))?;
            let (doc, code) = load_code(cli, path)?;
            inputs.push(input_digest(path, &doc));
            holds = is_right_continuing_sft(&code)?;
            verdicts.push(json!({"property": "right-continuing", "holds": holds}));
            human.push(format!("right continuing (SFT domain): {holds}"));
        }
        other => bail!(
            "unknown property {other:?}; expected one of sft, step, language-equal, \
             eresolving, left-eresolving, retract, minimal-retract, injective, right-continuing"
        ),
    }
    Ok(Outcome {
        report: RunReport {
            command: "check".into(),
            inputs,
            seed: None,
            verdicts,
        },
        holds,
        human,
    })
}

fn render_lasso(p: &sofic_core::LassoPoint) -> String {
    format!(
        "[{}]^inf [{}] [{}]^inf @ {}",
        p.left.join(" "),
        p.center.join(" "),
        p.right.join(" "),
        p.origin
    )
}

fn write_doc(dir: &Path, name: &str, value: &impl Serialize) -> anyhow::Result<String> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, canonical_json(value))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path.display().to_string())
}

fn run_construct(cli: &Cli, args: &ConstructArgs) -> anyhow::Result<Outcome> {
    let mut verdicts = Vec::new();
    let mut human = Vec::new();
    let mut inputs = Vec::new();
    let all_pass;
    match args.kind.as_str() {
        "example-sec3" => {
            let (x, y, code) = no_retract_example();
            let files = [
                write_doc(
                    &args.dir,
                    "example-sec3-domain",
                    &ShiftDocument::from_presentation(&x),
                )?,
                write_doc(
                    &args.dir,
                    "example-sec3-image",
                    &ShiftDocument::from_presentation(&y),
                )?,
                write_doc(&args.dir, "example-sec3-code", &CodeDocument::from_code(&code))?,
            ];
            let onto = language_equal(&code.image()?, &y)?;
            let strictly_sofic = !is_sft(&x)?;
            let no_retract = minimal_retract(&code)?.is_none();
            all_pass = onto && strictly_sofic && no_retract;
            verdicts.push(json!({
                "construction": "example-sec3",
                "onto_image": onto,
                "domain_strictly_sofic": strictly_sofic,
                "no_retract": no_retract,
                "files": files,
            }));
            human.push(format!(
                "example-sec3: onto={onto} strictly-sofic-domain={strictly_sofic} no-retract={no_retract}"
            ));
        }
        "sqrt" => {
            let path = args
                .code
                .as_ref()
                .ok_or_else(|| anyhow!("--code is required"))?;
            let (doc, code) = load_code(cli, path)?;
            inputs.push(input_digest(path, &doc));
            let one = as_one_block(&code)?;
            let inter = spacer_interleave(&one)?;
            let files = [
                write_doc(
                    &args.dir,
                    "sqrt-domain",
                    &ShiftDocument::from_presentation(&inter.domain),
                )?,
                write_doc(
                    &args.dir,
                    "sqrt-image",
                    &ShiftDocument::from_presentation(&inter.image),
                )?,
                write_doc(&args.dir, "sqrt-code", &CodeDocument::from_code(&inter.code))?,
            ];
            let eresolving = is_right_eresolving(&inter.code)?.holds;
            let image_matches = language_equal(&inter.code.image()?, &inter.image)?;
            all_pass = eresolving && image_matches;
            verdicts.push(json!({
                "construction": "sqrt",
                "spacer": inter.spacer,
                "spacer_renamed": inter.spacer_renamed,
                "right_eresolving": eresolving,
                "image_matches": image_matches,
                "files": files,
            }));
            human.push(format!(
                "sqrt: spacer={:?}{} right-eresolving={eresolving}",
                inter.spacer,
                if inter.spacer_renamed {
                    " (renamed to avoid a collision)"
                } else {
                    ""
                },
            ));
        }
        "retract-zero" => {
            let path = args
                .code
                .as_ref()
                .ok_or_else(|| anyhow!("--code is required"))?;
            let (doc, code) = load_code(cli, path)?;
            inputs.push(input_digest(path, &doc));
            let rec = retract_zero_recode(&code)?;
            let files = [
                write_doc(
                    &args.dir,
                    "retract-zero-domain",
                    &ShiftDocument::from_presentation(&rec.recoded_domain),
                )?,
                write_doc(
                    &args.dir,
                    "retract-zero-conjugacy",
                    &CodeDocument::from_code(&rec.conjugacy),
                )?,
                write_doc(
                    &args.dir,
                    "retract-zero-code",
                    &CodeDocument::from_code(&rec.one_block),
                )?,
            ];
            let injective = is_injective(&rec.conjugacy)?.injective;
            let zero = check_retract(&rec.one_block, 0)?.holds;
            all_pass = injective && zero && rec.one_block.is_one_block();
            verdicts.push(json!({
                "construction": "retract-zero",
                "conjugacy_injective": injective,
                "one_block": rec.one_block.is_one_block(),
                "retract_zero": zero,
                "files": files,
            }));
            human.push(format!(
                "retract-zero: conjugacy-injective={injective} retract-0={zero}"
            ));
        }
        "bicontinuing" => {
            let path = args
                .code
                .as_ref()
                .ok_or_else(|| anyhow!("--code is required"))?;
            let (doc, code) = load_code(cli, path)?;
            inputs.push(input_digest(path, &doc));
            let rec = bicontinuing_recode(&code)?;
            let theta = rec.image_conjugacy.as_ref().expect("two-sided recode");
            let files = [
                write_doc(
                    &args.dir,
                    "bicontinuing-domain",
                    &ShiftDocument::from_presentation(&rec.recoded_domain),
                )?,
                write_doc(
                    &args.dir,
                    "bicontinuing-image",
                    &ShiftDocument::from_presentation(rec.recoded_image.as_ref().unwrap()),
                )?,
                write_doc(
                    &args.dir,
                    "bicontinuing-conjugacy",
                    &CodeDocument::from_code(&rec.conjugacy),
                )?,
                write_doc(
                    &args.dir,
                    "bicontinuing-image-conjugacy",
                    &CodeDocument::from_code(theta),
                )?,
                write_doc(
                    &args.dir,
                    "bicontinuing-code",
                    &CodeDocument::from_code(&rec.one_block),
                )?,
            ];
            let inj = is_injective(&rec.conjugacy)?.injective;
            let inj_theta = is_injective(theta)?.injective;
            let right0 = check_retract(&rec.one_block, 0)?.holds;
            let left0 = check_retract(&rec.one_block.reversed(), 0)?.holds;
            all_pass = inj && inj_theta && right0 && left0;
            verdicts.push(json!({
                "construction": "bicontinuing",
                "conjugacy_injective": inj,
                "image_conjugacy_injective": inj_theta,
                "retract_zero_right": right0,
                "retract_zero_left": left0,
                "files": files,
            }));
            human.push(format!("bicontinuing: retract-0 right={right0} left={left0}"));
        }
        other => bail!(
            "unknown construction {other:?}; expected example-sec3, sqrt, retract-zero or bicontinuing"
        ),
    }
    Ok(Outcome {
        report: RunReport {
            command: format!("construct {}", args.kind),
            inputs,
            seed: None,
            verdicts,
        },
        holds: all_pass,
        human,
    })
}

fn run_experiment(args: &ExperimentArgs) -> anyhow::Result<Outcome> {
    if args.count == 0 {
        bail!("--count must be at least 1");
    }
    let e = run_kbound_experiment(args.count, args.instance_symbols, args.seed)?;
    let mut human = vec![format!(
        "{} instances (seed {}, up to {} symbols): {} violations, {} skipped without a retract",
        e.rows.len(),
        e.seed,
        e.max_symbols,
        e.violations,
        e.skipped_no_retract
    )];
    human.push("instance         d   retract   bound   step   gap".into());
    for row in &e.rows {
        human.push(format!(
            "{:>8} {:>9} {:>9} {:>7} {:>6} {:>5}",
            row.instance,
            row.report.d,
            row.report.retract,
            row.report.k,
            row.report.actual_step.map_or("-".into(), |s| s.to_string()),
            row.gap.map_or("-".into(), |g| g.to_string()),
        ));
    }
    let holds = e.violations == 0;
    Ok(Outcome {
        report: RunReport {
            command: "experiment-kbound".into(),
            inputs: Vec::new(),
            seed: Some(args.seed),
            verdicts: vec![serde_json::to_value(&e)?],
        },
        holds,
        human,
    })
}

fn run_gen(cli: &Cli, args: &GenArgs) -> anyhow::Result<Outcome> {
    if args.symbols == 0 || args.symbols > cli.max_symbols {
        bail!("--symbols must be between 1 and {}", cli.max_symbols);
    }
    let mut rng = SplitMix64::new(args.seed);
    let (value, human) = match args.kind.as_str() {
        "sft" => {
            let p = gen::random_vertex_shift(&mut rng, args.symbols);
            debug_assert!(is_sft(&p)?);
            let doc = ShiftDocument::from_presentation(&p);
            (
                serde_json::to_value(&doc)?,
                format!(
                    "generated vertex shift: {} states, {} edges",
                    p.n_states(),
                    p.edges().len()
                ),
            )
        }
        "code" => {
            let path = args
                .shift
                .as_ref()
                .ok_or_else(|| anyhow!("--shift is required for --kind code"))?;
            let (_, domain) = load_shift(cli, path)?;
            let code = gen::random_one_block_code(&mut rng, &domain, args.symbols)?;
            let doc = CodeDocument::from_code(&code);
            (
                serde_json::to_value(&doc)?,
                format!(
                    "generated 1-block code onto {} symbols",
                    code.codomain_alphabet().len()
                ),
            )
        }
        other => bail!("unknown kind {other:?}; expected sft or code"),
    };
    let mut human = vec![human];
    if let Some(path) = &args.to {
        std::fs::write(path, canonical_json(&value))
            .with_context(|| format!("writing {}", path.display()))?;
        human.push(format!("wrote {}", path.display()));
    } else {
        human.push(canonical_json(&value));
    }
    Ok(Outcome {
        report: RunReport {
            command: format!("gen {}", args.kind),
            inputs: Vec::new(),
            seed: Some(args.seed),
            verdicts: vec![value],
        },
        holds: true,
        human,
    })
}

fn bundled_documents() -> Vec<(String, Value)> {
    let mut out: Vec<(String, Value)> = Vec::new();
    for (name, p) in corpus::bundled_shifts() {
        out.push((
            format!("shift:{name}"),
            serde_json::to_value(ShiftDocument::from_presentation(&p)).unwrap(),
        ));
    }
    for (name, c) in corpus::bundled_codes() {
        out.push((
            format!("code:{name}"),
            serde_json::to_value(CodeDocument::from_code(&c)).unwrap(),
        ));
    }
    out
}

fn run_examples(args: &ExamplesArgs) -> anyhow::Result<Outcome> {
    let docs = bundled_documents();
    let mut human = Vec::new();
    let mut verdicts = Vec::new();
    match &args.emit {
        None => {
            for (name, _) in &docs {
                human.push(name.clone());
            }
            verdicts.push(json!({
                "bundled": docs.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>()
            }));
        }
        Some(requested) => {
            let (name, value) = docs
                .iter()
                .find(|(n, _)| n == requested || n.split(':').nth(1) == Some(requested))
                .ok_or_else(|| anyhow!("no bundled document named {requested:?}"))?;
            let file = write_doc(&args.dir, name.split(':').nth(1).unwrap(), value)?;
            human.push(format!("wrote {file}"));
            verdicts.push(json!({"emitted": name, "file": file}));
        }
    }
    Ok(Outcome {
        report: RunReport {
            command: "examples".into(),
            inputs: Vec::new(),
            seed: None,
            verdicts,
        },
        holds: true,
        human,
    })
}

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fuzzsheaf::fuzzy::{colimit, limit, subobject_union};
use fuzzsheaf::io::{self, parse_stalk_point, point_text};
use fuzzsheaf::locale::IntervalLocale;
use fuzzsheaf::rational::{format_decimal, parse_rational, DEFAULT_PRECISION};
use fuzzsheaf::sheaf::{image, level_cut, presheaf_samples, psi_of, sheafify, Sections};
use fuzzsheaf::simplicial::pi0;
use fuzzsheaf::stalks::{stalk, stalkwise_check, StalkMode};
use fuzzsheaf::vr::{to_dot, vr_build, vr_compare, vr_sections, vr_stalk, Metric, VrOptions, VrSystem};
use fuzzsheaf::{Error, LocaleElement};

#[derive(Parser)]
#[command(name = "fuzzsheaf", version, about = "Fuzzy sets as sheaves on interval locales")]
struct Cli {
    /// Locale for inputs that carry none: a JSON file, inline JSON, or `[lo,hi]` / `[lo,hi]^op`.
    #[arg(long, global = true)]
    locale: Option<String>,
    /// Decimal digits kept when rounding irrational values (euclidean metric).
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Vietoris-Rips systems of point clouds.
    #[command(subcommand)]
    Vr(VrCommand),
    /// Limits, colimits and subobjects of fuzzy sets.
    #[command(subcommand)]
    Fuzzy(FuzzyCommand),
    /// Level cuts, sheafification, images and stalks.
    #[command(subcommand)]
    Sheaf(SheafCommand),
}

#[derive(Args)]
struct CloudArgs {
    /// Point cloud: CSV (one point per row) or a JSON array of arrays.
    #[arg(long)]
    points: PathBuf,
    /// Upper end of the parameter interval, in distance units.
    #[arg(long = "R")]
    r: Option<String>,
    #[arg(long, default_value_t = 2)]
    dim_cap: usize,
    #[arg(long, value_enum, default_value_t = MetricArg::Squared)]
    metric: MetricArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Squared,
    Euclidean,
}

#[derive(Subcommand)]
enum VrCommand {
    /// The whole graded simplex set.
    Build(CloudArgs),
    /// Simplices of diameter at most `--at`.
    Sections {
        #[command(flatten)]
        cloud: CloudArgs,
        #[arg(long)]
        at: String,
    },
    /// Simplices of diameter below `--at`, or every simplex at `bottom`.
    Stalk {
        #[command(flatten)]
        cloud: CloudArgs,
        #[arg(long)]
        at: String,
    },
    /// Connected components of the sections (or, with `--stalk`, the stalk) at `--at`.
    Pi0 {
        #[command(flatten)]
        cloud: CloudArgs,
        #[arg(long)]
        at: String,
        #[arg(long)]
        stalk: bool,
    },
    /// Checks whether the inclusion of `--points` into `--other` is a stalkwise isomorphism.
    Compare {
        #[command(flatten)]
        cloud: CloudArgs,
        #[arg(long)]
        other: PathBuf,
    },
}

#[derive(Subcommand)]
enum FuzzyCommand {
    /// Limit cone of a diagram: compatible families graded by meets.
    Limit { diagram: PathBuf },
    /// Colimit cone of a diagram: classes graded by joins.
    Colimit { diagram: PathBuf },
    /// Checks every arrow of a diagram against the homotopy condition.
    Validate { diagram: PathBuf },
    /// Union of two subobjects of an ambient fuzzy set.
    Union { ambient: PathBuf, first: PathBuf, second: PathBuf },
}

#[derive(Subcommand)]
enum SheafCommand {
    /// Level-cut sheaf of a fuzzy set, or its sections at `--at`.
    Levelcut {
        input: PathBuf,
        #[arg(long)]
        at: Option<String>,
    },
    /// Fuzzy set of a sheaf.
    Psi { input: PathBuf },
    /// Image presheaf of a step presheaf.
    Image { input: PathBuf },
    /// Associated sheaf of a presheaf of monomorphisms.
    Sheafify { input: PathBuf },
    /// Exits 0 iff both round trips through the level-cut functor are exact.
    Roundtrip { input: PathBuf },
    /// Stalk of a presheaf at `--at` (a value or `bottom`).
    Stalk {
        input: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Stalkwise mono/epi/iso check of a map of sheaves.
    Stalkwise {
        source: PathBuf,
        target: PathBuf,
        /// JSON object `{ "x": "u", ... }`; defaults to the identity on ids.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value = "iso")]
        mode: StalkMode,
    },
}

/// What a command produced: output text and whether its check passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(value: &Value) -> Self {
        Outcome { text: io::render(value), passed: true }
    }

    fn check(value: &Value, passed: bool) -> Self {
        Outcome { text: io::render(value), passed }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn ctx<T>(r: Result<T, Error>, path: &Path) -> anyhow::Result<T> {
    r.with_context(|| path.display().to_string())
}

fn locale_arg(cli: &Cli) -> anyhow::Result<Option<IntervalLocale>> {
    let Some(given) = &cli.locale else { return Ok(None) };
    let text = match Path::new(given).is_file() {
        true => read(Path::new(given))?,
        false => given.clone(),
    };
    Ok(Some(io::parse_locale(&text)?))
}

fn build(args: &CloudArgs, precision: u32) -> anyhow::Result<VrSystem> {
    let cloud = ctx(io::read_points(&read(&args.points)?), &args.points)?;
    Ok(vr_build(&cloud, &vr_options(args, precision)?)?)
}

fn vr_options(args: &CloudArgs, precision: u32) -> anyhow::Result<VrOptions> {
    Ok(VrOptions {
        r: args.r.as_deref().map(parse_rational).transpose()?,
        dim_cap: args.dim_cap,
        metric: match args.metric {
            MetricArg::Squared => Metric::Squared,
            MetricArg::Euclidean => Metric::Euclidean { digits: precision },
        },
    })
}

fn counts(levels: &[Vec<Vec<usize>>]) -> Value {
    json!(levels.iter().map(Vec::len).collect::<Vec<_>>())
}

fn run_vr(cli: &Cli, cmd: &VrCommand) -> anyhow::Result<Outcome> {
    if cli.format == Format::Dot && !matches!(cmd, VrCommand::Sections { .. }) {
        bail!("--format dot is only available for `vr sections`");
    }
    match cmd {
        VrCommand::Build(args) => Ok(Outcome::ok(&io::vr_json(&build(args, cli.precision)?, None))),
        VrCommand::Sections { cloud, at } => {
            let v = build(cloud, cli.precision)?;
            let s = parse_rational(at)?;
            if cli.format == Format::Dot {
                return Ok(Outcome { text: to_dot(&v, &s)?, passed: true });
            }
            let levels = vr_sections(&v, &s)?;
            let mut out = io::vr_json(&v, Some(&levels));
            out["at"] = json!(format_decimal(&s));
            out["counts"] = counts(&levels);
            Ok(Outcome::ok(&out))
        }
        VrCommand::Stalk { cloud, at } => {
            let v = build(cloud, cli.precision)?;
            let t = parse_stalk_point(at)?;
            let levels = vr_stalk(&v, &t)?;
            let mut out = io::vr_json(&v, Some(&levels));
            out["at"] = json!(point_text(&t));
            out["counts"] = counts(&levels);
            Ok(Outcome::ok(&out))
        }
        VrCommand::Pi0 { cloud, at, stalk } => {
            let v = build(cloud, cli.precision)?;
            let levels = if *stalk {
                vr_stalk(&v, &parse_stalk_point(at)?)?
            } else {
                vr_sections(&v, &parse_rational(at)?)?
            };
            let components = pi0(&levels);
            Ok(Outcome::ok(&json!({
                "at": at,
                "of": if *stalk { "stalk" } else { "sections" },
                "count": components.len(),
                "components": components,
            })))
        }
        VrCommand::Compare { cloud, other } => {
            let x = ctx(io::read_points(&read(&cloud.points)?), &cloud.points)?;
            let y = ctx(io::read_points(&read(other)?), other)?;
            let report = vr_compare(&x, &y, &vr_options(cloud, cli.precision)?)?;
            let failure = report.failure.as_ref().map(|f| {
                json!({
                    "level": f.level,
                    "point": point_text(&f.witness.point),
                    "element": f.witness.element,
                    "reason": f.witness.reason,
                })
            });
            let out = json!({
                "equivalent": report.equivalent,
                "witness": failure,
                "inclusion": report.inclusion,
                "small_t": report.small_t.as_ref().map(format_decimal),
                "pi0_small_t": report.pi0_small_t.map(|(a, b)| json!({ "points": a, "other": b })),
            });
            Ok(Outcome::check(&out, report.equivalent))
        }
    }
}

fn run_fuzzy(cli: &Cli, cmd: &FuzzyCommand) -> anyhow::Result<Outcome> {
    let locale = locale_arg(cli)?;
    let locale = locale.as_ref();
    match cmd {
        FuzzyCommand::Limit { diagram } => {
            let d = ctx(io::read_diagram(&read(diagram)?, locale), diagram)?;
            Ok(Outcome::ok(&io::cone_json(&limit(&d)?)))
        }
        FuzzyCommand::Colimit { diagram } => {
            let d = ctx(io::read_diagram(&read(diagram)?, locale), diagram)?;
            Ok(Outcome::ok(&io::cone_json(&colimit(&d)?)))
        }
        FuzzyCommand::Validate { diagram } => match io::read_diagram(&read(diagram)?, locale) {
            Ok(d) => Ok(Outcome::ok(&json!({
                "ok": true,
                "nodes": d.nodes().len(),
                "arrows": d.arrows().len(),
            }))),
            Err(e @ Error::InvalidDiagram(_)) => {
                Ok(Outcome::check(&json!({ "ok": false, "error": e.to_string() }), false))
            }
            Err(e) => Err(e).with_context(|| diagram.display().to_string()),
        },
        FuzzyCommand::Union { ambient, first, second } => {
            let sets = [ambient, first, second]
                .into_iter()
                .map(|p| ctx(io::read_fuzzy_set(&read(p)?, locale), p))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let u = subobject_union(&sets[0], &sets[1], &sets[2])?;
            Ok(Outcome { text: io::write_fuzzy_set(&u), passed: true })
        }
    }
}

fn sections_json(s: &Sections) -> Value {
    match s.as_set() {
        None => json!(["*"]),
        Some(set) => json!(set),
    }
}

fn run_sheaf(cli: &Cli, cmd: &SheafCommand) -> anyhow::Result<Outcome> {
    let locale = locale_arg(cli)?;
    let locale = locale.as_ref();
    let presheaf = |p: &PathBuf| -> anyhow::Result<_> { ctx(io::read_mono_presheaf(&read(p)?, locale), p) };
    match cmd {
        SheafCommand::Levelcut { input, at } => {
            let set = ctx(io::read_fuzzy_set(&read(input)?, locale), input)?;
            let sheaf = level_cut(&set);
            match at {
                None => Ok(Outcome { text: io::write_mono_presheaf(&sheaf), passed: true }),
                Some(a) => {
                    let a = element(a)?;
                    let sections = sheaf.sections(&a)?;
                    Ok(Outcome::ok(&json!({ "at": element_text(&a), "sections": sections_json(&sections) })))
                }
            }
        }
        SheafCommand::Psi { input } => {
            let set = psi_of(&presheaf(input)?)?;
            Ok(Outcome { text: io::write_fuzzy_set(&set), passed: true })
        }
        SheafCommand::Image { input } => {
            let step = ctx(io::read_step_presheaf(&read(input)?, locale), input)?;
            Ok(Outcome { text: io::write_mono_presheaf(&image(&step)), passed: true })
        }
        SheafCommand::Sheafify { input } => {
            Ok(Outcome { text: io::write_mono_presheaf(&sheafify(&presheaf(input)?)), passed: true })
        }
        SheafCommand::Roundtrip { input } => {
            let set = ctx(io::read_fuzzy_set(&read(input)?, locale), input)?;
            let sheaf = level_cut(&set);
            let psi_t = psi_of(&sheaf)? == set;
            let back = level_cut(&psi_of(&sheaf)?);
            let samples = presheaf_samples(set.locale(), &[&sheaf]);
            let mismatches: Vec<String> = samples
                .iter()
                .filter(|a| back.sections_at(a) != sheaf.sections_at(a))
                .map(format_decimal)
                .collect();
            let out = json!({
                "psi_of_level_cut": psi_t,
                "level_cut_of_psi": mismatches.is_empty(),
                "samples": samples.len(),
                "mismatches": mismatches,
            });
            Ok(Outcome::check(&out, psi_t && mismatches.is_empty()))
        }
        SheafCommand::Stalk { input, at } => {
            let p = parse_stalk_point(at)?;
            let s = stalk(&presheaf(input)?, &p)?;
            Ok(Outcome::ok(&json!({ "at": point_text(&p), "stalk": s })))
        }
        SheafCommand::Stalkwise { source, target, map, mode } => {
            let (e, f) = (presheaf(source)?, presheaf(target)?);
            let map: BTreeMap<String, String> = match map {
                Some(p) => serde_json::from_str(&read(p)?).with_context(|| p.display().to_string())?,
                None => e.entries().keys().map(|k| (k.clone(), k.clone())).collect(),
            };
            let verdict = stalkwise_check(&e, &f, &map, *mode)?;
            Ok(Outcome::check(&io::verdict_json(&verdict), verdict.ok))
        }
    }
}

fn element(text: &str) -> anyhow::Result<LocaleElement> {
    Ok(match text.trim() {
        "bottom" => LocaleElement::Bottom,
        t => LocaleElement::Value(parse_rational(t)?),
    })
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Vr(cmd) => run_vr(cli, cmd),
        Command::Fuzzy(cmd) => run_fuzzy(cli, cmd),
        Command::Sheaf(cmd) => run_sheaf(cli, cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", outcome.text),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn element_text(a: &LocaleElement) -> String {
    match a.value() {
        Some(v) => format_decimal(v),
        None => "bottom".into(),
    }
}

mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sfl::contact::{
    canonical_rotation, enumerate_structures, structure_reports, theta, theta_lens_closed, theta_prism_closed,
    DEFAULT_CAP,
};
use sfl::exactmath::{format_fraction, format_rational, parse_rational};
use sfl::obstruct::{
    filling_verdict, generate_fillable, spherical_graph, QhbTemplates, SphericalKind, Status, VerdictInput,
    VerdictOptions,
};
use sfl::plumbing::{
    euler_sum, h1_order, normalize_seifert, seifert_to_plumbing, torus_surgery_chain, text::parse_plumbing,
    lens_chain, prism_graph, SeifertData, StabilizedDiagram,
};
use sfl::Rational;

use table::Table;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] sfl::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(sfl::Error::Parse(_) | sfl::Error::Template(_)) => 2,
            CliError::Lib(_) => 3,
            CliError::Io { .. } | CliError::Usage(_) => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Tight contact structures on small Seifert fibered spaces and their
/// rational homology ball fillings.
#[derive(Debug, Parser)]
#[command(name = "sfl", version)]
struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for per-structure sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Refuse to enumerate more structures than this.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// QHB template file replacing the built-in families.
    #[arg(long, global = true, env = "SFL_QHB_TEMPLATES")]
    templates: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// θ of the canonical structure, or of every structure with --all.
    Theta {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        scope: Scope,
    },
    /// Per-structure fillability verdicts.
    Verdict {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        scope: Scope,
    },
    /// Count and list rotation vectors.
    Enumerate {
        #[command(flatten)]
        target: Target,
        /// Print the count only.
        #[arg(long)]
        count_only: bool,
    },
    /// Normal form of the Seifert space with central weight e and slots x1 x2 x3.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        e: i64,
        #[arg(allow_hyphen_values = true)]
        x1: String,
        #[arg(allow_hyphen_values = true)]
        x2: String,
        #[arg(allow_hyphen_values = true)]
        x3: String,
    },
    /// Match a plumbing against the QHB families.
    QhbMatch {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "plumbing", required_unless_present = "plumbing")]
        seifert: Option<String>,
        #[arg(long)]
        plumbing: Option<PathBuf>,
    },
    /// A Seifert space with a rational homology ball filling built from x = q/p.
    Generate {
        x: String,
        m: i64,
        h: i64,
        k: i64,
    },
    /// θ of the canonical structure on T3, T27, I49 or D:p/q.
    Spherical { kind: String },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Target {
    /// Lens space L(p,q), given as p/q.
    #[arg(long, value_name = "P/Q")]
    lens: Option<String>,
    /// Prism manifold D(p,q), given as p/q.
    #[arg(long, value_name = "P/Q")]
    prism: Option<String>,
    /// Small Seifert space as "e0;r1,r2,r3".
    #[arg(long, allow_hyphen_values = true, value_name = "E0;R1,R2,R3")]
    seifert: Option<String>,
    /// r-surgery on the (p,q) torus knot, r < 0.
    #[arg(long, num_args = 3, value_names = ["P", "Q", "R"], allow_hyphen_values = true)]
    torus_surgery: Option<Vec<String>>,
    /// Σ(p, q, pqn+1), which is -1/n surgery on the (p,q) torus knot.
    #[arg(long, num_args = 3, value_names = ["P", "Q", "N"])]
    brieskorn: Option<Vec<String>>,
    /// A plumbing graph file.
    #[arg(long, value_name = "FILE")]
    plumbing: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Scope {
    /// Only the canonical structure.
    #[arg(long, conflicts_with = "all")]
    canonical: bool,
    /// Every structure.
    #[arg(long)]
    all: bool,
}

struct Resolved {
    label: String,
    input: Option<VerdictInput>,
    diagram: StabilizedDiagram,
}

fn int_arg(s: &str) -> CliResult<i64> {
    s.trim().parse().map_err(|_| sfl::Error::Parse(format!("'{s}' is not an integer")).into())
}

/// `p/q` read literally, without reducing the fraction.
fn pair(s: &str) -> CliResult<(i64, i64)> {
    let (p, q) = s.split_once('/').ok_or_else(|| sfl::Error::Parse(format!("expected p/q, got '{s}'")))?;
    Ok((int_arg(p)?, int_arg(q)?))
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

impl Target {
    fn resolve(&self) -> CliResult<Resolved> {
        let input = if let Some(s) = &self.lens {
            let (p, q) = pair(s)?;
            VerdictInput::Lens(p, q)
        } else if let Some(s) = &self.prism {
            let (p, q) = pair(s)?;
            VerdictInput::Prism(p, q)
        } else if let Some(s) = &self.seifert {
            VerdictInput::Seifert(SeifertData::parse(s)?)
        } else if let Some(v) = &self.torus_surgery {
            VerdictInput::TorusSurgery(int_arg(&v[0])?, int_arg(&v[1])?, parse_rational(&v[2])?)
        } else if let Some(v) = &self.brieskorn {
            sfl::obstruct::brieskorn(int_arg(&v[0])?, int_arg(&v[1])?, int_arg(&v[2])?)?
        } else if let Some(path) = &self.plumbing {
            let diagram = parse_plumbing(&read(path)?)?;
            return Ok(Resolved { label: path.display().to_string(), input: None, diagram });
        } else {
            return Err(CliError::Usage("no manifold given".into()));
        };
        let diagram = match &input {
            VerdictInput::Lens(p, q) => lens_chain(*p, *q)?,
            VerdictInput::Prism(p, q) => prism_graph(*p, *q)?,
            VerdictInput::Seifert(s) => seifert_to_plumbing(s),
            VerdictInput::TorusSurgery(p, q, r) => torus_surgery_chain(*p, *q, r)?,
            VerdictInput::Brieskorn(p, q, n) => torus_surgery_chain(*p, *q, &sfl::exactmath::rat(-1, *n))?,
            VerdictInput::Spherical(k) => spherical_graph(*k)?,
        };
        Ok(Resolved { label: input.to_string(), input: Some(input), diagram })
    }
}

fn templates(cli: &Cli) -> CliResult<QhbTemplates> {
    Ok(match &cli.templates {
        Some(path) => QhbTemplates::from_path(path)?,
        None => QhbTemplates::builtin(),
    })
}

fn seifert_json(s: &SeifertData) -> Value {
    json!({
        "text": s.to_string(),
        "e0": s.e0(),
        "r": s.r().iter().map(format_fraction).collect::<Vec<_>>(),
        "euler_sum": format_fraction(&euler_sum(s)),
        "h1_order": h1_order(s).to_string(),
    })
}

fn opt_rational(x: &Option<Rational>) -> String {
    x.as_ref().map(format_rational).unwrap_or_else(|| "-".into())
}

struct Output {
    json: Value,
    text: String,
}

fn cmd_theta(cli: &Cli, target: &Target, scope: &Scope) -> CliResult<Output> {
    let r = target.resolve()?;
    let can = canonical_rotation(&r.diagram);
    let theta_can = theta(&r.diagram, &can)?;
    let closed = match &r.input {
        Some(VerdictInput::Lens(p, q)) => Some(theta_lens_closed(*p, *q)?),
        Some(VerdictInput::Prism(p, q)) => Some(theta_prism_closed(*p, *q)?.theta),
        _ => None,
    };
    let mut json = json!({
        "input": r.label,
        "diagram": r.diagram.to_json(),
        "rotation_canonical": can.0,
        "theta_canonical": format_fraction(&theta_can),
    });
    if let Some(c) = &closed {
        json["theta_closed_form"] = json!(format_fraction(c));
    }
    let mut text = format!("{}\ncanonical rotation {}\ntheta(canonical) = {}", r.label, can, format_rational(&theta_can));
    if scope.all {
        let reports = structure_reports(&r.diagram, cli.cap, cli.threads)?;
        json["count"] = json!(reports.len().to_string());
        json["structures"] = reports.iter().map(|s| s.to_json()).collect();
        let mut t = Table::new(&["rotation", "theta", "class"]);
        for s in &reports {
            t.row(vec![s.rotation.to_string(), opt_rational(&s.theta), s.class.map_or("-", |c| c.label()).into()]);
        }
        text = format!("{text}\n{} structures\n{}", reports.len(), t.render());
    }
    Ok(Output { json, text })
}

fn cmd_verdict(cli: &Cli, target: &Target, scope: &Scope) -> CliResult<Output> {
    let r = target.resolve()?;
    let input = r.input.ok_or_else(|| CliError::Usage("verdict needs a manifold, not a bare plumbing file".into()))?;
    let opts = VerdictOptions { cap: cli.cap, threads: cli.threads, canonical_only: scope.canonical, templates: templates(cli)? };
    let report = filling_verdict(&input, &opts)?;
    let mut lines = vec![report.input.clone()];
    if let Some(m) = &report.qhb {
        lines.push(format!("QHB family {m}"));
    }
    if let Some(l) = &report.lspace {
        lines.push(format!("L-space: {l:?}"));
    }
    let tally: Vec<String> = [Status::Fillable, Status::NotFillable, Status::Candidate, Status::Unknown]
        .into_iter()
        .filter(|s| report.count(*s) > 0)
        .map(|s| format!("{s:?} {}", report.count(s)))
        .collect();
    lines.push(format!("{} structures: {}", report.structures.len(), tally.join(", ")));
    lines.push(format!("candidate classes up to sign: {}", report.candidate_classes()));
    let mut t = Table::new(&["rotation", "theta", "class", "status", "rule", "reason"]);
    for s in &report.structures {
        t.row(vec![
            s.rotation.to_string(),
            opt_rational(&s.theta),
            s.class.map_or("-", |c| c.label()).into(),
            format!("{:?}", s.verdict.status),
            format!("{:?}", s.verdict.rule),
            s.verdict.reason.clone(),
        ]);
    }
    lines.push(t.render());
    Ok(Output { json: report.to_json(), text: lines.join("\n") })
}

fn cmd_enumerate(cli: &Cli, target: &Target, count_only: bool) -> CliResult<Output> {
    let r = target.resolve()?;
    let e = enumerate_structures(&r.diagram);
    let mut json = json!({
        "input": r.label,
        "capacities": r.diagram.capacities(),
        "count": e.count().to_string(),
    });
    let mut text = format!("{}\ncapacities {:?}\n{} structures", r.label, r.diagram.capacities(), e.count());
    if !count_only {
        let all = e.collect_all(cli.cap)?;
        json["rotations"] = all.iter().map(|v| json!(v.0)).collect();
        for v in &all {
            text.push('\n');
            text.push_str(&v.to_string());
        }
    }
    Ok(Output { json, text })
}

fn cmd_normalize(e: i64, slots: &[&String]) -> CliResult<Output> {
    let slots = slots.iter().map(|s| parse_rational(s)).collect::<sfl::Result<Vec<_>>>()?;
    let s = normalize_seifert(e, &slots)?;
    Ok(Output { json: seifert_json(&s), text: s.to_string() })
}

fn cmd_qhb(cli: &Cli, seifert: &Option<String>, plumbing: &Option<PathBuf>) -> CliResult<Output> {
    let (label, d) = match (seifert, plumbing) {
        (Some(s), _) => {
            let s = SeifertData::parse(s)?;
            (s.to_string(), seifert_to_plumbing(&s))
        }
        (None, Some(path)) => (path.display().to_string(), parse_plumbing(&read(path)?)?),
        (None, None) => return Err(CliError::Usage("give --seifert or --plumbing".into())),
    };
    let matches = templates(cli)?.match_all(&d);
    let json = json!({
        "input": label,
        "match": matches.first().map(|m| m.to_json()),
        "all_matches": matches.iter().map(|m| m.to_json()).collect::<Vec<_>>(),
    });
    let text = match matches.first() {
        Some(m) => format!("{label}: {m}"),
        None => format!("{label}: no QHB family"),
    };
    Ok(Output { json, text })
}

fn cmd_generate(x: &str, m: i64, h: i64, k: i64) -> CliResult<Output> {
    let x = parse_rational(x)?;
    let (s, c) = generate_fillable(&x, m, h, k)?;
    let json = json!({ "seifert": seifert_json(&s), "construction": c.to_json() });
    let text = [
        s.to_string(),
        format!("companion T({},{}), cable ({},{}), {} stabilizations", c.companion.0, c.companion.1, c.cable.0, c.cable.1, c.stabilizations),
        format!("cable surgery {}, companion slope {}", c.cable_surgery, format_rational(&c.surgery_coefficient)),
        format!("theta = {}", format_rational(&c.theta())),
    ]
    .join("\n");
    Ok(Output { json, text })
}

fn cmd_spherical(kind: &str) -> CliResult<Output> {
    let kind: SphericalKind = kind.parse()?;
    let d = spherical_graph(kind)?;
    let can = canonical_rotation(&d);
    let t = theta(&d, &can)?;
    let json = json!({
        "input": kind.to_string(),
        "diagram": d.to_json(),
        "rotation_canonical": can.0,
        "theta_canonical": format_fraction(&t),
    });
    Ok(Output { json, text: format!("{kind}: theta(canonical) = {}", format_rational(&t)) })
}

fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Theta { target, scope } => cmd_theta(cli, target, scope),
        Command::Verdict { target, scope } => cmd_verdict(cli, target, scope),
        Command::Enumerate { target, count_only } => cmd_enumerate(cli, target, *count_only),
        Command::Normalize { e, x1, x2, x3 } => cmd_normalize(*e, &[x1, x2, x3]),
        Command::QhbMatch { seifert, plumbing } => cmd_qhb(cli, seifert, plumbing),
        Command::Generate { x, m, h, k } => cmd_generate(x, *m, *h, *k),
        Command::Spherical { kind } => cmd_spherical(kind),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json { serde_json::to_string_pretty(&out.json).expect("serializable") } else { out.text };
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sfl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

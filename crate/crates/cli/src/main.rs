use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qbcat::harness::{conformance, GenConfig};
use qbcat::io::{
    category_from_json, copresheaf_from_json, copresheaf_to_json, functor_from_json,
    functor_to_json, presheaf_from_json, presheaf_to_json, qcategory_from_json, qcategory_to_json,
    read_functor, read_input, read_qcategory, write_json,
};
use qbcat::limits::{is_cototal, is_total, left_adjoint, right_adjoint, AdjointSource};
use qbcat::macneille::{density_report, is_codense, is_cut, is_dense, macneille};
use qbcat::presheaf::{enumerate_all_presheaves, enumerate_presheaves, presheaf_id, DEFAULT_CAP};
use qbcat::qcategory::{validate_qcategory, validate_qfunctor};
use qbcat::topological::{
    describe_presheaf, final_lifting, initial_lifting, is_topological, isbell_down, isbell_up,
    main_theorem_check, Direction, LiftingProblem,
};
use qbcat::{Decision, QCat, QCategory};

#[derive(Parser)]
#[command(
    name = "qbcat",
    version,
    about = "Finite categories enriched in free quantaloids"
)]
struct Cli {
    /// Print canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of presheaves to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    parallel: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a category, Q-category, or Q-functor file.
    Validate { file: PathBuf },
    /// List the presheaves of a Q-category in canonical order.
    Presheaves {
        qcat: PathBuf,
        /// Only presheaves of this extent.
        #[arg(long)]
        extent: Option<String>,
    },
    /// Final or initial liftings of a family of legs.
    Lift {
        direction: DirectionArg,
        qcat: PathBuf,
        #[arg(long)]
        apex: String,
        /// A leg `x:g`; repeatable.
        #[arg(long = "leg", value_parser = parse_leg)]
        legs: Vec<(String, String)>,
    },
    /// Isbell operators: `up` takes a presheaf, `down` a copresheaf.
    Isbell {
        direction: IsbellArg,
        qcat: PathBuf,
        file: PathBuf,
    },
    /// Decide a property of a Q-category.
    Check { property: Property, qcat: PathBuf },
    /// Write the MacNeille completion and its embedding.
    Complete {
        qcat: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Where to write the embedding; defaults to `<output stem>.embedding.json`.
        #[arg(long)]
        embedding: Option<PathBuf>,
    },
    /// Density and codensity of a Q-functor.
    Dense {
        functor: PathBuf,
        /// Decide codensity instead of density.
        #[arg(long)]
        codense: bool,
    },
    /// Left or right adjoint of a Q-functor.
    Adjoint { side: Side, functor: PathBuf },
    /// Run the conformance checks on generated instances.
    Fuzz(FuzzArgs),
    /// Evaluate the four equivalent conditions on a Q-category.
    MainTheorem { qcat: PathBuf },
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 3)]
    max_base_objects: usize,
    #[arg(long, default_value_t = 8)]
    max_base_morphisms: usize,
    #[arg(long, default_value_t = 4)]
    max_fiber_objects: usize,
    /// Directory for counterexample files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Final,
    Initial,
}

#[derive(Clone, Copy, ValueEnum)]
enum IsbellArg {
    Up,
    Down,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Topological,
    Total,
    Cototal,
    Cuts,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

fn parse_leg(s: &str) -> Result<(String, String), String> {
    s.split_once(':')
        .map(|(x, g)| (x.to_string(), g.to_string()))
        .ok_or_else(|| format!("expected `x:g`, got `{s}`"))
}

/// What a command prints, and whether its answer is positive.
struct Report {
    ok: bool,
    text: String,
    json: Value,
}

impl Report {
    fn new(ok: bool, text: impl Into<String>, json: Value) -> Self {
        Self {
            ok,
            text: text.into(),
            json,
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn decision<W, C>(d: &Decision<W, C>) -> &'static str {
    if d.holds() {
        "holds"
    } else {
        "fails"
    }
}

fn validate(path: &Path) -> Result<Report> {
    let v: Value = serde_json::from_str(&read_input(path)?)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let Some(obj) = v.as_object() else {
        bail!("expected a JSON object")
    };
    if obj.contains_key("object_map") {
        let file = functor_from_json(&v, dir)?;
        let mut problems: Vec<String> = Vec::new();
        for (name, c) in [("dom", &file.dom), ("cod", &file.cod)] {
            problems.extend(validate_qcategory(c).iter().map(|e| format!("{name}: {e}")));
        }
        if problems.is_empty() {
            let f = file.functor()?;
            problems.extend(validate_qfunctor(&f).iter().map(ToString::to_string));
        }
        return Ok(violations("Q-functor", problems));
    }
    if obj.contains_key("base") {
        let c = qcategory_from_json(&v, dir)?;
        let report = validate_qcategory(&c);
        return Ok(violations(
            "Q-category",
            report.iter().map(ToString::to_string).collect(),
        ));
    }
    match category_from_json(&v) {
        Ok(_) => Ok(violations("category", Vec::new())),
        Err(qbcat::Error::InvalidCategory(report)) => Ok(violations(
            "category",
            report.iter().map(ToString::to_string).collect(),
        )),
        Err(e) => Err(e.into()),
    }
}

fn violations(kind: &str, problems: Vec<String>) -> Report {
    let text = if problems.is_empty() {
        format!("valid {kind}")
    } else {
        format!("invalid {kind}:\n- {}", problems.join("\n- "))
    };
    Report::new(
        problems.is_empty(),
        text,
        json!({"kind": kind, "violations": problems}),
    )
}

fn presheaves(path: &Path, extent: Option<&str>, cap: usize) -> Result<Report> {
    let c = read_qcategory(path)?;
    let list = match extent {
        Some(z) => enumerate_presheaves(&c, c.base().object_index(z)?, cap)?,
        None => enumerate_all_presheaves(&c, cap)?,
    };
    let mut text = String::new();
    let mut out = Vec::new();
    for p in &list {
        let id = presheaf_id(&c, p);
        writeln!(text, "{id} {}", describe_presheaf(&c, p))?;
        let mut v = presheaf_to_json(&c, p);
        v["id"] = json!(id);
        out.push(v);
    }
    write!(text, "{} presheaves", list.len())?;
    Ok(Report::new(true, text, Value::Array(out)))
}

fn lift(dir: DirectionArg, path: &Path, apex: &str, legs: &[(String, String)]) -> Result<Report> {
    let c = read_qcategory(path)?;
    let direction = match dir {
        DirectionArg::Final => Direction::Final,
        DirectionArg::Initial => Direction::Initial,
    };
    let prob = LiftingProblem::from_ids(&c, direction, apex, legs)?;
    let found = match direction {
        Direction::Final => final_lifting(&c, &prob),
        Direction::Initial => initial_lifting(&c, &prob),
    };
    let ids: Vec<&str> = found.iter().map(|&x| c.object_id(x)).collect();
    let text = if ids.is_empty() {
        "no lifting".to_string()
    } else {
        format!("liftings: {}", ids.join(" "))
    };
    Ok(Report::new(!ids.is_empty(), text, json!({"liftings": ids})))
}

fn isbell(dir: IsbellArg, path: &Path, file: &Path) -> Result<Report> {
    let c = read_qcategory(path)?;
    let v: Value = serde_json::from_str(&read_input(file)?)?;
    Ok(match dir {
        IsbellArg::Up => {
            let up = isbell_up(&c, &presheaf_from_json(&c, &v)?);
            let out = copresheaf_to_json(&c, &up);
            Report::new(true, pretty(&out), out)
        }
        IsbellArg::Down => {
            let down = isbell_down(&c, &copresheaf_from_json(&c, &v)?);
            let out = presheaf_to_json(&c, &down);
            Report::new(true, pretty(&out), out)
        }
    })
}

fn check(property: Property, path: &Path, cap: usize) -> Result<Report> {
    let c = read_qcategory(path)?;
    let (name, result) = match property {
        Property::Topological => {
            let d = is_topological(&c, cap)?;
            let cx = d.counterexample().map(|p| presheaf_to_json(&c, p));
            (
                "topological",
                (d.holds(), cx, "sieve without a final lifting"),
            )
        }
        Property::Total => {
            let d = is_total(&c, cap)?;
            let cx = d.counterexample().map(|p| presheaf_to_json(&c, p));
            ("total", (d.holds(), cx, "presheaf without a colimit"))
        }
        Property::Cototal => {
            let d = is_cototal(&c, cap)?;
            let cx = d.counterexample().map(|p| copresheaf_to_json(&c, p));
            ("cototal", (d.holds(), cx, "copresheaf without a limit"))
        }
        Property::Cuts => return cuts(&c, cap),
    };
    let (holds, cx, what) = result;
    let mut text = format!("{name}: {}", if holds { "holds" } else { "fails" });
    if let Some(cx) = &cx {
        write!(text, "\n{what}:\n{}", pretty(cx))?;
    }
    Ok(Report::new(
        holds,
        text,
        json!({"property": name, "holds": holds, "counterexample": cx}),
    ))
}

fn cuts(c: &QCategory, cap: usize) -> Result<Report> {
    let cuts: Vec<_> = enumerate_all_presheaves(c, cap)?
        .into_iter()
        .filter(|p| is_cut(c, p))
        .collect();
    let mut text = String::new();
    let mut out = Vec::new();
    for p in &cuts {
        let id = presheaf_id(c, p);
        writeln!(text, "{id} {}", describe_presheaf(c, p))?;
        let mut v = presheaf_to_json(c, p);
        v["id"] = json!(id);
        out.push(v);
    }
    write!(text, "{} cuts", cuts.len())?;
    Ok(Report::new(true, text, Value::Array(out)))
}

fn complete(path: &Path, output: &Path, embedding: Option<&Path>, cap: usize) -> Result<Report> {
    let c = read_qcategory(path)?;
    let m = macneille(&c, cap)?;
    let embedding = embedding.map(Path::to_path_buf).unwrap_or_else(|| {
        let stem = output
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("completion");
        output.with_file_name(format!("{stem}.embedding.json"))
    });
    write_json(output, &qcategory_to_json(&m.completion))
        .with_context(|| format!("writing {}", output.display()))?;
    let j = m.embedding_functor(&c);
    write_json(&embedding, &functor_to_json(&c, &m.completion, &j))
        .with_context(|| format!("writing {}", embedding.display()))?;
    let text = format!(
        "completion with {} objects written to {}\nembedding written to {}",
        m.completion.size(),
        output.display(),
        embedding.display()
    );
    let v = json!({
        "objects": m.completion.size(),
        "completion": output.display().to_string(),
        "embedding": embedding.display().to_string(),
    });
    Ok(Report::new(true, text, v))
}

fn dense(path: &Path, codense: bool, cap: usize) -> Result<Report> {
    let file = read_functor(path)?;
    let f = file.functor()?;
    let characterizations = density_report(&f, cap)?;
    let dense = is_dense(&f, cap)?;
    let co = is_codense(&f, cap)?;
    let witness = |d: &Decision<(), usize>| {
        d.counterexample()
            .map(|&x| f.cod().object_id(x).to_string())
    };
    let mut text = format!("dense: {}\ncodense: {}", decision(&dense), decision(&co));
    for (name, d) in [("dense", &dense), ("codense", &co)] {
        if let Some(x) = witness(d) {
            write!(text, "\nnot {name} at `{x}`")?;
        }
    }
    let ok = if codense { co.holds() } else { dense.holds() };
    let v = json!({
        "dense": dense.holds(),
        "codense": co.holds(),
        "dense_counterexample": witness(&dense),
        "codense_counterexample": witness(&co),
        "characterizations": characterizations,
    });
    Ok(Report::new(ok, text, v))
}

fn adjoint(side: Side, path: &Path) -> Result<Report> {
    let file = read_functor(path)?;
    let f = file.functor()?;
    let result = match side {
        Side::Left => left_adjoint(&f)?,
        Side::Right => right_adjoint(&f)?,
    };
    Ok(match result {
        Decision::Holds(g) => {
            let out = functor_to_json(&file.cod, &file.dom, &g.functor);
            let searched = g
                .sources
                .iter()
                .filter(|s| **s == AdjointSource::Search)
                .count();
            let mut text = pretty(&out);
            if searched > 0 {
                write!(text, "\n{searched} values found by search")?;
            }
            Report::new(true, text, out)
        }
        Decision::Fails(d) => {
            let id = file.cod.object_id(d).to_string();
            Report::new(
                false,
                format!("no adjoint: no value at `{id}`"),
                json!({"missing_at": id}),
            )
        }
    })
}

fn fuzz(args: &FuzzArgs, cap: usize) -> Result<Report> {
    let cfg = GenConfig {
        seed: args.seed,
        max_base_objects: args.max_base_objects,
        max_base_morphisms: args.max_base_morphisms,
        max_fiber_objects: args.max_fiber_objects,
        presheaf_cap: cap,
    };
    cfg.validate()?;
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let report = conformance(&cfg, args.cases, args.out_dir.as_deref())?;
    let mut text = format!(
        "{} cases: {} passed, {} skipped by cap, {} failures",
        report.cases,
        report.passed,
        report.skipped.len(),
        report.failures.len()
    );
    for fail in &report.failures {
        write!(
            text,
            "\ncase {} [{}]: {}",
            fail.case, fail.check, fail.detail
        )?;
        if let Some(file) = &fail.file {
            write!(text, " ({})", file.display())?;
        }
    }
    Ok(Report::new(
        report.ok(),
        text,
        serde_json::to_value(&report)?,
    ))
}

fn main_theorem(path: &Path, cap: usize) -> Result<Report> {
    let c = read_qcategory(path)?;
    let r = main_theorem_check(&c, cap)?;
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!(
        "irredundant families lift: {}\nsieves lift: {}\nYoneda has a left adjoint: {}\ntotal: {}\npresheaves: {}\nconditions agree: {}",
        yes(r.final_liftings),
        yes(r.sieve_liftings),
        yes(r.yoneda_left_adjoint),
        yes(r.total),
        r.presheaves,
        yes(r.agree()),
    );
    if let Some(cx) = &r.counterexample {
        write!(text, "\ncounterexample sieve: {cx}")?;
    }
    let mut v = serde_json::to_value(&r)?;
    v["agree"] = json!(r.agree());
    Ok(Report::new(r.agree(), text, v))
}

fn run(cli: &Cli) -> Result<Report> {
    let cap = cli.cap;
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Presheaves { qcat, extent } => presheaves(qcat, extent.as_deref(), cap),
        Command::Lift {
            direction,
            qcat,
            apex,
            legs,
        } => lift(*direction, qcat, apex, legs),
        Command::Isbell {
            direction,
            qcat,
            file,
        } => isbell(*direction, qcat, file),
        Command::Check { property, qcat } => check(*property, qcat, cap),
        Command::Complete {
            qcat,
            output,
            embedding,
        } => complete(qcat, output, embedding.as_deref(), cap),
        Command::Dense { functor, codense } => dense(functor, *codense, cap),
        Command::Adjoint { side, functor } => adjoint(*side, functor),
        Command::Fuzz(args) => fuzz(args, cap),
        Command::MainTheorem { qcat } => main_theorem(qcat, cap),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.parallel {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", pretty(&report.json));
            } else {
                println!("{}", report.text);
            }
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let cap = e.chain().any(|c| {
                c.downcast_ref::<qbcat::Error>()
                    .is_some_and(qbcat::Error::is_cap_exceeded)
            });
            ExitCode::from(if cap { 3 } else { 2 })
        }
    }
}

mod expr;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chiral_core::equivariant::{build_complex, model_by_name, model_names, PieceWindow};
use chiral_core::homology::HomologyError;
use chiral_core::lie::{load_lie_algebra, LieAlgebra, LieError};
use chiral_core::report::Report;
use chiral_core::suites::{suite_by_name, suites, Coefficients, SuiteContext};
use chiral_core::weil::WeilAlgebra;
use chiral_core::Error;

#[derive(Parser)]
#[command(name = "chiral", version, about = "Exact chiral equivariant cohomology")]
struct Cli {
    /// Lie algebra file (JSON).
    #[arg(long, global = true)]
    algebra: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check antisymmetry, the Jacobi identity and the declared form.
    Validate,
    /// Print the OPE of two field expressions in W(g).
    Ope { a: String, b: String },
    /// Print a field expression as a PBW combination, with its grade.
    Field { expr: String },
    /// Run a named verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Cohomology table of one model of chiral equivariant cohomology.
    Cohomology {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value = "weil")]
        complex: String,
        /// Also print cohomology representatives.
        #[arg(long)]
        representatives: bool,
    },
    /// Spectral sequence pages of the model's double complex.
    Spectral {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value = "cartan")]
        complex: String,
        #[arg(long, default_value_t = 8)]
        r_max: usize,
    },
    /// List suites and complexes.
    List,
}

#[derive(Args)]
struct WindowArgs {
    /// point | weil | linear:<representation file>
    #[arg(long, default_value = "point")]
    model: String,
    #[arg(long, default_value_t = 1)]
    max_weight: u32,
    /// Degree range `A..B` (inclusive).
    #[arg(long, default_value = "0..4", allow_hyphen_values = true)]
    degrees: String,
    /// Charge range; defaults to `0..2` for linear models and `0..0` otherwise.
    #[arg(long, allow_hyphen_values = true)]
    charges: Option<String>,
}

/// Outcome of a command: a document to print and whether every check passed.
struct Output {
    table: String,
    json: Value,
    ok: bool,
}

fn parse_range(s: &str) -> Result<RangeInclusive<i32>, Error> {
    let bad = || Error::Input(format!("range `{s}` is not of the form A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (i32, i32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(Error::Input(format!("range `{s}` is empty")));
    }
    Ok(a..=b)
}

fn load_algebra(path: &Option<PathBuf>) -> Result<LieAlgebra, Error> {
    let path = path.as_ref().ok_or_else(|| Error::Input("--algebra is required".into()))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(load_lie_algebra(&text)?)
}

fn context(cli: &Cli, w: &WindowArgs) -> Result<SuiteContext, Error> {
    let lie = load_algebra(&cli.algebra)?;
    let base = cli.algebra.as_deref().and_then(Path::parent);
    let coefficients = Coefficients::parse(&w.model, &lie, base)?;
    let charges = match &w.charges {
        Some(c) => parse_range(c)?,
        None if matches!(coefficients, Coefficients::Linear(_)) => 0..=2,
        None => 0..=0,
    };
    let window = PieceWindow::new(w.max_weight, parse_range(&w.degrees)?).with_charges(charges);
    Ok(SuiteContext { lie, coefficients, window })
}

fn report_output(r: Report) -> Output {
    Output { table: format!("{r}"), ok: r.passed(), json: r.to_json() }
}

fn validate(cli: &Cli) -> Result<Output, Error> {
    let path = cli.algebra.as_ref().ok_or_else(|| Error::Input("--algebra is required".into()))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut r = Report::new("validate", &path.display().to_string());
    match load_lie_algebra(&text) {
        Ok(lie) => {
            r.check("structure constants", Ok(format!("{} of dimension {}", lie.name, lie.dim())));
            if let Some(f) = &lie.declared_form {
                r.check(
                    "form invariance",
                    match f.invariance_violation(&lie) {
                        None if f.is_symmetric() => Ok("symmetric and invariant".into()),
                        None => Err("form is not symmetric".into()),
                        Some((i, j, k)) => Err(format!("violated at (i, j, k) = ({i}, {j}, {k})")),
                    },
                );
            }
        }
        Err(e @ (LieError::Antisymmetry(..) | LieError::Jacobi(..))) => r.check("structure constants", Err(e.to_string())),
        Err(e) => return Err(e.into()),
    }
    Ok(report_output(r))
}

fn ope(cli: &Cli, a: &str, b: &str) -> Result<Output, Error> {
    let lie = load_algebra(&cli.algebra)?;
    let w = WeilAlgebra::with_default_form(lie);
    let (x, y) = (expr::parse(a, &w)?, expr::parse(b, &w)?);
    let poles = w.gs.ope(&x, &y);
    let mut table = format!("{a}  x  {b}\n");
    let mut map = serde_json::Map::new();
    if poles.is_empty() {
        table.push_str("(no singular terms)\n");
    }
    for (n, s) in poles.iter().rev() {
        table.push_str(&format!("(z-w)^-{n}: {}\n", w.gs.show(s)));
        map.insert(n.to_string(), json!(w.gs.show(s)));
    }
    Ok(Output { table, ok: true, json: json!({"algebra": w.lie.name, "a": a, "b": b, "poles": map}) })
}

fn field(cli: &Cli, src: &str) -> Result<Output, Error> {
    let lie = load_algebra(&cli.algebra)?;
    let w = WeilAlgebra::with_default_form(lie);
    let s = expr::parse(src, &w)?;
    let shown = w.gs.show(&s);
    let grade = w.gs.grade_of(&s);
    let table = match grade {
        Some(g) => format!("{src} = {shown}\n(degree {}, weight {})\n", g.degree, g.weight),
        None => format!("{src} = {shown}\n"),
    };
    let json = json!({"algebra": w.lie.name, "expr": src, "state": shown,
                      "degree": grade.map(|g| g.degree), "weight": grade.map(|g| g.weight)});
    Ok(Output { table, json, ok: true })
}

fn verify(cli: &Cli, suite: &str, w: &WindowArgs) -> Result<Output, Error> {
    let s = suite_by_name(suite)?;
    let ctx = if suite == "tva" && cli.algebra.is_none() {
        let window = PieceWindow::new(w.max_weight, parse_range(&w.degrees)?);
        SuiteContext { lie: LieAlgebra::abelian(1), coefficients: Coefficients::Point, window }
    } else {
        context(cli, w)?
    };
    Ok(report_output(s.run(&ctx)?))
}

fn cohomology(cli: &Cli, w: &WindowArgs, complex: &str, reps: bool) -> Result<Output, Error> {
    let ctx = context(cli, w)?;
    let model = model_by_name(complex)?;
    let t = ctx.coefficients.tensor(&ctx.lie)?;
    let mut rows = Vec::new();
    let mut table = format!(
        "{} model, {} over {}\n{:>6} {:>6} {:>6} {:>6} {:>8}\n",
        model.name(),
        t.coeff.name,
        ctx.lie.name,
        "degree",
        "weight",
        "charge",
        "dim",
        "cochains"
    );
    for m in 0..=ctx.window.max_weight {
        for q in ctx.window.charges.clone() {
            let c = build_complex(model.as_ref(), &t, m, q, ctx.window.degrees.clone())?;
            for row in c.rows()? {
                table.push_str(&format!(
                    "{:>6} {:>6} {:>6} {:>6} {:>8}\n",
                    row.degree, row.weight, row.charge, row.dim, row.cochains
                ));
                let shown: Vec<String> = row.representatives.iter().map(|s| t.gs.show(s)).collect();
                if reps {
                    for s in &shown {
                        table.push_str(&format!("         {s}\n"));
                    }
                }
                let mut j = json!({
                    "degree": row.degree, "weight": row.weight, "charge": row.charge,
                    "dim": row.dim, "cochains": row.cochains,
                });
                if reps {
                    j["representatives"] = json!(shown);
                }
                rows.push(j);
            }
        }
    }
    let json = json!({
        "algebra": ctx.lie.name,
        "model": w.model,
        "complex": model.name(),
        "cutoffs": {"max_weight": ctx.window.max_weight, "min_degree": ctx.window.degrees.start(),
                    "max_degree": ctx.window.degrees.end()},
        "rows": rows,
    });
    Ok(Output { table, json, ok: true })
}

fn spectral(cli: &Cli, w: &WindowArgs, complex: &str, r_max: usize) -> Result<Output, Error> {
    let ctx = context(cli, w)?;
    let model = model_by_name(complex)?;
    let t = ctx.coefficients.tensor(&ctx.lie)?;
    let mut table = String::new();
    let mut blocks = Vec::new();
    let mut ok = true;
    for m in 0..=ctx.window.max_weight {
        for q in ctx.window.charges.clone() {
            // One extra degree on top: a page entry needs the map out of the next degree.
            let degrees = *ctx.window.degrees.start()..=*ctx.window.degrees.end() + 1;
            let c = build_complex(model.as_ref(), &t, m, q, degrees)?;
            let res = c.double_complex(model.as_ref(), &t)?.pages(r_max)?;
            ok &= res.consistent();
            table.push_str(&format!(
                "{} double complex, weight {m}, charge {q}: stable at E_{}, E_inf totals {} total cohomology\n",
                model.name(),
                res.stable_at,
                if res.consistent() { "match" } else { "DO NOT match" }
            ));
            let mut pages = Vec::new();
            for page in res.pages.iter().skip(1) {
                let entries: Vec<String> = page.table.iter().map(|((p, q), d)| format!("({p},{q}):{d}")).collect();
                table.push_str(&format!("  E_{}  {}\n", page.r, if entries.is_empty() { "0".into() } else { entries.join(" ") }));
                pages.push(json!({
                    "r": page.r,
                    "table": page.table.iter().map(|((p, q), d)| json!({"p": p, "q": q, "dim": d})).collect::<Vec<_>>(),
                }));
            }
            let totals: Vec<Value> = res
                .total_cohomology
                .iter()
                .map(|(n, d)| json!({"degree": n, "dim": d, "e_infinity": res.infinity_totals.get(n)}))
                .collect();
            blocks.push(json!({"weight": m, "charge": q, "stable_at": res.stable_at,
                               "consistent": res.consistent(), "pages": pages, "totals": totals}));
        }
    }
    let json = json!({"algebra": ctx.lie.name, "model": w.model, "complex": model.name(), "blocks": blocks});
    Ok(Output { table, json, ok })
}

fn list() -> Output {
    let mut table = String::from("suites:\n");
    let mut s = Vec::new();
    for suite in suites() {
        table.push_str(&format!("  {:<16} {}\n", suite.name(), suite.describe()));
        s.push(json!({"name": suite.name(), "description": suite.describe()}));
    }
    table.push_str("complexes:\n");
    for name in model_names() {
        let m = model_by_name(name).expect("registered");
        table.push_str(&format!("  {:<16} {}\n", name, m.describe()));
    }
    Output { table, json: json!({"suites": s, "complexes": model_names()}), ok: true }
}

/// Exit status 1 for mathematical failures, 2 for bad input.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Lie(LieError::Antisymmetry(..) | LieError::Jacobi(..)) => 1,
        Error::Lie(_) | Error::Input(_) | Error::UnknownField(_) | Error::NonAbelian(_) => 2,
        Error::Homology(HomologyError::Precondition(_)) => 1,
        _ => 1,
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("CHIRAL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate => validate(&cli),
        Command::Ope { a, b } => ope(&cli, a, b),
        Command::Field { expr } => field(&cli, expr),
        Command::Verify { suite, window } => verify(&cli, suite, window),
        Command::Cohomology { window, complex, representatives } => cohomology(&cli, window, complex, *representatives),
        Command::Spectral { window, complex, r_max } => spectral(&cli, window, complex, *r_max),
        Command::List => Ok(list()),
    };
    let out = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = match cli.format {
        Format::Table if out.table.ends_with('\n') => out.table,
        Format::Table => out.table + "\n",
        Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
    };
    let written = match &cli.output {
        Some(p) => std::fs::write(p, &text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(if out.ok { 0 } else { 1 })
}

//! `akforms`: validation, operator dumps, harmonic spaces, primitive
//! decompositions, theorem checks and the full reproduction report.
//!
//! Exit status: 0 when everything holds, 1 when something fails, 2 on errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use akforms::catalog;
use akforms::hodge::{Hodge, Status, Subspace, VerificationReport};
use akforms::model::{parse_form, validate, ManifoldSpec, ValidationReport};
use akforms::report::{
    form_json, iwasawa_harmonic_21_generators, matrix_entries, operator_matrix_json, reproduce, subspace_json,
    validation_json, verification_json,
};
use akforms::{parse_spec, Bidegree, CheckId, Differential, Error, OperatorId, Space, ENGINE_VERSION};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "akforms", version, about = "Exact operators and harmonic spaces on almost-Hermitian coframes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Path to an .akspec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Built-in catalog key.
    #[arg(long)]
    entry: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks: d^2 = 0, omega real and closed, unitary mode.
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Matrix of an operator on a bidegree or degree.
    Operators {
        #[command(flatten)]
        source: Source,
        /// d, mu, del, delbar, mubar, dc, star, L, Lambda, J, <D>_star, Delta_<D>.
        #[arg(long)]
        op: String,
        #[arg(long, value_parser = parse_pq, conflicts_with = "degree", required_unless_present = "degree")]
        pq: Option<Bidegree>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Invariant harmonic space H^{p,q}_D in echelon form.
    Harmonic {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        op: Differential,
        #[arg(long, value_parser = parse_pq)]
        pq: Bidegree,
        #[arg(long)]
        json: bool,
    },
    /// Primitive decomposition of a constant form.
    Decompose {
        #[command(flatten)]
        source: Source,
        /// Form in the .akspec expression syntax, e.g. `phi{13,2}+i*phi{23,1}`.
        #[arg(long)]
        form: String,
        #[arg(long)]
        json: bool,
    },
    /// Runs one or all theorem checks.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        check: Option<CheckId>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Table of invariant harmonic dimensions h^{p,q}_D.
    Table {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        op: Differential,
        #[arg(long)]
        json: bool,
    },
    /// Lists the catalog, or prints the .akspec source of one entry.
    Catalog {
        #[arg(long)]
        entry: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Every catalog entry against every check, plus the worked-example identities.
    Report {
        #[arg(long)]
        json: bool,
    },
}

fn parse_pq(s: &str) -> Result<Bidegree, String> {
    let (p, q) = s.split_once(',').ok_or_else(|| format!("expected p,q, got `{s}`"))?;
    let p = p.trim().parse().map_err(|_| format!("bad p in `{s}`"))?;
    let q = q.trim().parse().map_err(|_| format!("bad q in `{s}`"))?;
    Ok(Bidegree::new(p, q))
}

struct Output {
    text: String,
    json: Value,
    failed: bool,
}

fn load(source: &Source) -> Result<ManifoldSpec, Error> {
    match (&source.spec, &source.entry) {
        (Some(path), _) => {
            log::debug!("reading {}", path.display());
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
            parse_spec(&text)
        }
        (None, Some(key)) => Ok(catalog::get(key)?.spec),
        (None, None) => unreachable!("clap requires a source"),
    }
}

fn render_validation(r: &ValidationReport) -> String {
    let mut out = format!("{}: {}\n", r.spec_name, if r.is_clean() { "clean" } else { "FAILED" });
    for g in &r.d_squared {
        let _ = writeln!(out, "  d^2 {}: {:?}", g.generator, g.status);
    }
    let _ = writeln!(out, "  omega real: {:?}", r.omega_real);
    let _ = writeln!(out, "  d omega: {:?}", r.omega_closed);
    let _ = writeln!(out, "  positivity: {:?}", r.positivity);
    let _ = writeln!(out, "  almost_kahler: {}", r.almost_kahler);
    let _ = writeln!(out, "  unitary_scale: {}", r.unitary_scale.as_deref().unwrap_or("none"));
    let _ = writeln!(out, "  constant_coefficient: {}", r.constant_coefficient);
    let _ = writeln!(out, "  integrable: {}", r.integrable);
    out
}

fn render_verification(r: &VerificationReport) -> String {
    let mut out = format!("{} {}: {}\n", r.spec_name, r.check_id, r.verdict());
    let _ = writeln!(out, "  statement: {}", r.check_id.statement());
    if let Some(reason) = &r.reason {
        let _ = writeln!(out, "  reason: {reason}");
    }
    for d in &r.dimensions {
        let _ = writeln!(out, "  dim {} = {}", d.label, d.dim);
    }
    for w in &r.witnesses {
        let _ = writeln!(out, "  witness: {} ({})", w.form, w.explanation);
    }
    for n in &r.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    let _ = writeln!(out, "  scope: {}", r.scope);
    out
}

fn cmd_validate(source: &Source) -> Result<Output, Error> {
    let r = validate(&load(source)?)?;
    Ok(Output { text: render_validation(&r), json: validation_json(&r), failed: !r.is_clean() })
}

fn cmd_operators(source: &Source, op: &str, pq: Option<Bidegree>, degree: Option<usize>) -> Result<Output, Error> {
    let spec = load(source)?;
    let id: OperatorId = op.parse()?;
    let space = match (pq, degree) {
        (Some(b), _) if b.is_valid(spec.n) => Space::Bidegree(b),
        (Some(b), _) => return Err(Error::InvalidInput(format!("bidegree {b} outside 0..={}", spec.n))),
        (None, Some(k)) if k <= 2 * spec.n => Space::Degree(k),
        (None, Some(k)) => return Err(Error::InvalidInput(format!("degree {k} above {}", 2 * spec.n))),
        (None, None) => unreachable!("clap requires --pq or --degree"),
    };
    let calc = akforms::ConstCalculus::new(&spec)?;
    let m = calc.matrix(id, space)?;
    let mut json = operator_matrix_json(&spec.name, &m, spec.n);
    let obj = json.as_object_mut().expect("object");
    obj.insert("check_id".into(), "operators".into());
    obj.insert("status".into(), "Holds".into());
    let mut text =
        format!("{} {} : {} -> {} ({}x{})\n", spec.name, m.id, m.source, m.target, m.matrix.rows(), m.matrix.cols());
    let src: Vec<String> = m.source.basis(spec.n).iter().map(|b| b.to_string()).collect();
    let _ = writeln!(text, "  columns: {}", src.join(" "));
    for (i, b) in m.target.basis(spec.n).iter().enumerate() {
        let row: Vec<String> = m.matrix.row(i).iter().map(|x| x.to_string()).collect();
        let _ = writeln!(text, "  {b}: [{}]", row.join(", "));
    }
    Ok(Output { text, json, failed: false })
}

fn render_subspace(out: &mut String, v: &Subspace) {
    for f in v.forms() {
        let _ = writeln!(out, "  {f}");
    }
}

fn cmd_harmonic(source: &Source, which: Differential, pq: Bidegree) -> Result<Output, Error> {
    let spec = load(source)?;
    let h = Hodge::new(&spec)?;
    let v = h.harmonic_space(which, pq)?;
    let mut text = format!("{} H^{{{},{}}}_{which}: dim {}\n", spec.name, pq.p, pq.q, v.dim());
    render_subspace(&mut text, &v);
    let mut json = json!({
        "spec_name": spec.name,
        "engine_version": ENGINE_VERSION,
        "check_id": "harmonic",
        "operator": which.to_string(),
        "bidegree": pq.to_string(),
        "status": "Holds",
        "space": subspace_json(&v),
    });
    let mut failed = false;
    if source.entry.as_deref() == Some("iwasawa_ak") && which == Differential::Delbar && pq == Bidegree::new(2, 1) {
        let gens = iwasawa_harmonic_21_generators();
        let certificate = Hodge::change_of_basis(&v, &gens);
        let members = gens.iter().map(|g| v.contains(g)).collect::<Result<Vec<_>, _>>()?;
        text.push_str("  reference generators:\n");
        for (g, m) in gens.iter().zip(&members) {
            let _ = writeln!(text, "    {g}: {}", if *m { "in the space" } else { "NOT in the space" });
        }
        match &certificate {
            Some(c) => {
                text.push_str("  change of basis (row i = reference generator i in the echelon basis):\n");
                for i in 0..c.rows() {
                    let row: Vec<String> = c.row(i).iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(text, "    [{}]", row.join(", "));
                }
            }
            None => text.push_str("  change of basis: none, the reference generators do not span the space\n"),
        }
        failed = certificate.is_none();
        let obj = json.as_object_mut().expect("object");
        obj.insert(
            "reference_generators".into(),
            gens.iter().zip(&members).map(|(g, m)| json!({ "form": form_json(g), "in_space": m })).collect(),
        );
        obj.insert("change_of_basis".into(), certificate.as_ref().map_or(Value::Null, matrix_entries));
        obj.insert("status".into(), if failed { "Fails" } else { "Holds" }.into());
    }
    Ok(Output { text, json, failed })
}

fn cmd_decompose(source: &Source, form: &str) -> Result<Output, Error> {
    let spec = load(source)?;
    let a = parse_form(&spec, form)?.to_constant().ok_or(Error::NotConstantCoefficient)?;
    let h = Hodge::new(&spec)?;
    let dec = h.primitive_decompose(&a)?;
    let mut text = format!("{} decompose {a} (degree {})\n", spec.name, dec.degree);
    for (r, beta) in &dec.components {
        let _ = writeln!(text, "  r = {r}: beta_{} = {beta}", dec.degree - 2 * r);
    }
    text.push_str("  reconstruction: a = sum (1/r!) L^r beta\n");
    let json = json!({
        "spec_name": spec.name,
        "engine_version": ENGINE_VERSION,
        "check_id": "decompose",
        "status": "Holds",
        "input": form_json(&a),
        "degree": dec.degree,
        "components": dec.components.iter().map(|(r, b)| json!({ "r": r, "beta": form_json(b) })).collect::<Vec<_>>(),
    });
    Ok(Output { text, json, failed: false })
}

fn cmd_verify(source: &Source, check: Option<CheckId>, all: bool) -> Result<Output, Error> {
    let spec = load(source)?;
    let ids: Vec<CheckId> = if all { CheckId::ALL.to_vec() } else { check.into_iter().collect() };
    let reports = ids.into_iter().map(|id| akforms::hodge::verify(&spec, id)).collect::<Result<Vec<_>, _>>()?;
    let failed = reports.iter().any(|r| r.status == Status::Fails);
    let text = reports.iter().map(render_verification).collect();
    let json = Value::Array(reports.iter().map(verification_json).collect());
    Ok(Output { text, json, failed })
}

fn cmd_table(source: &Source, which: Differential) -> Result<Output, Error> {
    let spec = load(source)?;
    let t = Hodge::new(&spec)?.hodge_table(which)?;
    let mut text = format!("{} h^{{p,q}}_{which} (row p, column q)\n", spec.name);
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|d| format!("{d:>3}")).collect();
        let _ = writeln!(text, " {}", cells.join(""));
    }
    let mut json = serde_json::to_value(&t).expect("table serializes");
    let obj = json.as_object_mut().expect("object");
    obj.insert("engine_version".into(), ENGINE_VERSION.into());
    obj.insert("check_id".into(), "table".into());
    obj.insert("status".into(), "Holds".into());
    Ok(Output { text, json, failed: false })
}

fn cmd_catalog(entry: Option<&str>) -> Result<Output, Error> {
    match entry {
        Some(key) => {
            let e = catalog::get(key)?;
            Ok(Output {
                text: e.source.to_string(),
                json: json!({ "key": e.key, "provenance": e.provenance, "source": e.source }),
                failed: false,
            })
        }
        None => {
            let entries = catalog::all()?;
            let text = entries.iter().map(|e| format!("{:<12} {}\n", e.key, e.provenance)).collect();
            let json =
                Value::Array(entries.iter().map(|e| json!({ "key": e.key, "provenance": e.provenance })).collect());
            Ok(Output { text, json, failed: false })
        }
    }
}

fn cmd_report() -> Result<Output, Error> {
    let r = reproduce()?;
    Ok(Output { text: r.render_text(), json: r.to_json(), failed: r.failures() > 0 })
}

fn run(cli: &Cli) -> Result<(Output, bool), Error> {
    Ok(match &cli.command {
        Command::Validate { source, json } => (cmd_validate(source)?, *json),
        Command::Operators { source, op, pq, degree, json } => (cmd_operators(source, op, *pq, *degree)?, *json),
        Command::Harmonic { source, op, pq, json } => (cmd_harmonic(source, *op, *pq)?, *json),
        Command::Decompose { source, form, json } => (cmd_decompose(source, form)?, *json),
        Command::Verify { source, check, all, json } => (cmd_verify(source, *check, *all)?, *json),
        Command::Table { source, op, json } => (cmd_table(source, *op)?, *json),
        Command::Catalog { entry, json } => (cmd_catalog(entry.as_deref())?, *json),
        Command::Report { json } => (cmd_report()?, *json),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("AKFORMS_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, as_json)) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json renders"));
            } else {
                print!("{}", out.text);
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

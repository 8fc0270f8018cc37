mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use opoly::characterizations::{
    check_c2, check_c3, check_c4, check_c5, check_c6, check_c7, check_c8, table3_row, verify_all, Characterization,
    CheckReport, Table3Row,
};
use opoly::classification::{
    canonical_pair, classify, regularity_certificate, roundtrip_check, AffineReduction, CanonicalFamily, Certificate,
    FamilyTag, RoundtripReport,
};
use opoly::io::{moments_to_json, option_to_json, pair_from_json_str, poly_from_str, poly_to_json, recurrence_to_json, scalar_to_json};
use opoly::pearson::{moments_from_pearson, PearsonPair};
use opoly::recurrence::{generate_polys, recurrence_table};
use opoly::{Error, Mode, Scalar};

use render::render_table;

#[derive(Parser)]
#[command(name = "opoly", version, about = "Classical orthogonal polynomials from Pearson pairs")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand)]
enum Verb {
    /// Reduce the pair to its canonical family.
    Classify,
    /// Moments u_0..u_N of the functional.
    Moments,
    /// Recurrence coefficients beta_n, gamma_n for n = 0..N.
    Recurrence,
    /// Monic orthogonal polynomials P_0..P_N.
    Polys,
    /// Check one characterization (C2..C8) or all of them.
    Verify {
        /// C2, C3, C4, C5, C6, C7, C8 or all.
        which: String,
        /// Derivative order for C3 and C4.
        #[arg(short = 'k', long, default_value_t = 1)]
        k: usize,
    },
    /// Parameters of a canonical family at index n (or n = 0..N).
    Table3 {
        #[arg(short = 'n', long = "index")]
        index: Option<usize>,
    },
    /// Check the affine reduction along three independent routes.
    Roundtrip,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Options {
    /// Coefficients of phi as a JSON array [c, b, a].
    #[arg(long, global = true)]
    phi: Option<String>,
    /// Coefficients of psi as a JSON array [q, p].
    #[arg(long, global = true)]
    psi: Option<String>,
    /// Normalization u_0 (defaults to 1).
    #[arg(long, global = true)]
    u0: Option<String>,
    /// Canonical family: hermite, laguerre, jacobi or bessel.
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(short = 'N', long, global = true, default_value_t = 32,
          value_parser = clap::value_parser!(u64).range(1..))]
    horizon: u64,
    #[arg(short = 'M', long, global = true, default_value_t = 16)]
    truncation: usize,
    /// exact or approx.
    #[arg(long, global = true, env = "OPOLY_MODE", default_value = "exact")]
    mode: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Read the pair from a JSON file {"phi": [...], "psi": [...], "u0": "..."}.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

/// Failure to run a command at all; maps to exit status 2.
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

struct Output {
    json: Value,
    table: String,
    ok: bool,
}

fn parse_scalar(text: &str, field: &str) -> Result<Scalar, InputError> {
    text.parse().map_err(|e: Error| InputError(format!("--{field}: {e}")))
}

fn family_from_opts(opts: &Options) -> Result<Option<CanonicalFamily>, InputError> {
    let Some(name) = &opts.family else { return Ok(None) };
    let tag: FamilyTag = name.parse()?;
    let alpha = opts.alpha.as_deref().map(|a| parse_scalar(a, "alpha")).transpose()?;
    let beta = opts.beta.as_deref().map(|b| parse_scalar(b, "beta")).transpose()?;
    Ok(Some(CanonicalFamily::from_tag(tag, alpha, beta)?))
}

fn mode(opts: &Options) -> Result<Mode, InputError> {
    Ok(opts.mode.parse()?)
}

/// The pair and `u_0` from exactly one of: --phi/--psi, --input, --family.
fn pair_from_opts(opts: &Options) -> Result<(PearsonPair, Scalar), InputError> {
    let inline = opts.phi.is_some() || opts.psi.is_some();
    let sources = [inline, opts.input.is_some(), opts.family.is_some()];
    match sources.iter().filter(|s| **s).count() {
        0 => return Err(InputError("no input: give --phi and --psi, --input FILE, or --family".into())),
        1 => {}
        _ => return Err(InputError("give exactly one of --phi/--psi, --input, --family".into())),
    }
    let mut u0 = opts.u0.as_deref().map(|t| parse_scalar(t, "u0")).transpose()?;
    let pair = if inline {
        let phi = poly_from_str(opts.phi.as_deref().unwrap_or("[]"), "phi")?;
        let psi = poly_from_str(opts.psi.as_deref().unwrap_or("[]"), "psi")?;
        PearsonPair::new(phi, psi)?
    } else if let Some(path) = &opts.input {
        let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let spec = pair_from_json_str(&text)?;
        u0 = u0.or(spec.u0);
        spec.pair
    } else {
        canonical_pair(&family_from_opts(opts)?.expect("family given"))
    };
    let mode = mode(opts)?;
    let u0 = u0.unwrap_or_else(Scalar::one).to_mode(mode);
    Ok((pair.to_mode(mode), u0))
}

fn family_json(family: &CanonicalFamily, obj: &mut Map<String, Value>) {
    obj.insert("family".into(), json!(family.tag().to_string()));
    if let Some(alpha) = family.alpha() {
        obj.insert("alpha".into(), scalar_to_json(alpha));
    }
    if let Some(beta) = family.beta() {
        obj.insert("beta".into(), scalar_to_json(beta));
    }
}

fn certificate_json(cert: &Certificate) -> Value {
    let mut obj = Map::new();
    obj.insert("regular_all_n".into(), json!(cert.regular_all_n));
    if let Some(v) = cert.violated {
        obj.insert("violated".into(), json!(v.to_string()));
    }
    Value::Object(obj)
}

fn classify_output(red: &AffineReduction) -> Output {
    let mut obj = Map::new();
    family_json(&red.family, &mut obj);
    obj.insert("A".into(), scalar_to_json(&red.scale));
    obj.insert("B".into(), scalar_to_json(&red.shift));
    obj.insert("K".into(), scalar_to_json(&red.factor));
    obj.insert("exact".into(), json!(red.exact));
    obj.insert("discriminant".into(), scalar_to_json(&red.discriminant));
    if let Some(d) = &red.d_value {
        obj.insert("d".into(), scalar_to_json(d));
    }
    obj.insert("certificate".into(), certificate_json(&regularity_certificate(&red.family)));
    let json = Value::Object(obj);
    Output { table: key_value_table(&json), json, ok: true }
}

fn key_value_table(value: &Value) -> String {
    let rows: Vec<Vec<String>> = value
        .as_object()
        .map(|obj| {
            obj.iter()
                .map(|(k, v)| vec![k.clone(), v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())])
                .collect()
        })
        .unwrap_or_default();
    render_table(&["field", "value"], &rows)
}

fn report_json(report: &CheckReport) -> Value {
    let failure = report.first_failure.as_ref().map_or(Value::Null, |f| {
        json!({"index": f.index, "residual": f.residual.to_string(), "note": f.note})
    });
    let mut obj = Map::new();
    obj.insert("characterization".into(), json!(report.characterization.to_string()));
    obj.insert("horizon".into(), json!(report.horizon));
    obj.insert("passed".into(), json!(report.passed));
    obj.insert("first_failure".into(), failure);
    if let Some(k) = report.k {
        obj.insert("k".into(), json!(k));
    }
    Value::Object(obj)
}

fn reports_table(reports: &[CheckReport]) -> String {
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let (index, note) = r
                .first_failure
                .as_ref()
                .map_or((String::new(), String::new()), |f| (f.index.to_string(), f.note.clone()));
            vec![
                r.characterization.to_string(),
                r.k.map(|k| k.to_string()).unwrap_or_default(),
                r.horizon.to_string(),
                if r.passed { "pass".into() } else { "FAIL".into() },
                index,
                note,
            ]
        })
        .collect();
    render_table(&["check", "k", "horizon", "result", "failing n", "note"], &rows)
}

fn verify_output(opts: &Options, which: &str, k: usize) -> Result<Output, InputError> {
    let (pair, u0) = pair_from_opts(opts)?;
    let horizon = opts.horizon as usize;
    let m = opts.truncation;
    let reports = if which.eq_ignore_ascii_case("all") {
        verify_all(&pair, horizon, m)?
    } else {
        let which: Characterization = which.parse()?;
        let seq = generate_polys(&pair, horizon + k + 1)?;
        let u = moments_from_pearson(&pair, &u0)?;
        vec![match which {
            Characterization::C2 => check_c2(&pair, &seq, horizon)?,
            Characterization::C3 => check_c3(&pair, &seq, k, horizon)?,
            Characterization::C4 => check_c4(&pair, &seq, k, horizon.max(2))?,
            Characterization::C5 => check_c5(&pair, &seq, horizon)?,
            Characterization::C6 => check_c6(&pair, &u, m)?,
            Characterization::C7 => check_c7(&pair, &seq, horizon)?,
            Characterization::C8 => check_c8(&pair, &u, &seq, horizon, m)?,
        }]
    };
    let ok = reports.iter().all(|r| r.passed);
    let json = if reports.len() == 1 {
        report_json(&reports[0])
    } else {
        Value::Array(reports.iter().map(report_json).collect())
    };
    Ok(Output { json, table: reports_table(&reports), ok })
}

const TABLE3_COLUMNS: [&str; 12] =
    ["n", "lambda_n", "beta_n", "gamma_n", "a_n", "b_n", "c_n", "r1_n", "s1_n", "h_n", "t_n", "k_n"];

fn table3_cells(row: &Table3Row) -> Vec<Value> {
    let p = &row.params;
    vec![
        json!(p.n),
        scalar_to_json(&p.lambda_n),
        scalar_to_json(&row.recurrence.beta),
        scalar_to_json(&row.recurrence.gamma),
        scalar_to_json(&p.a_n),
        scalar_to_json(&p.b_n),
        scalar_to_json(&p.c_n),
        option_to_json(p.r1_n.as_ref()),
        option_to_json(p.s1_n.as_ref()),
        scalar_to_json(&p.h_n),
        scalar_to_json(&p.t_n),
        scalar_to_json(&p.k_n),
    ]
}

fn table3_output(opts: &Options, index: Option<usize>) -> Result<Output, InputError> {
    let family = family_from_opts(opts)?.ok_or_else(|| InputError("table3 needs --family".into()))?;
    let family = match mode(opts)? {
        Mode::Exact => family,
        m => {
            let conv = |s: &Scalar| s.to_mode(m);
            match family {
                CanonicalFamily::Hermite => CanonicalFamily::Hermite,
                CanonicalFamily::Laguerre { alpha } => CanonicalFamily::Laguerre { alpha: conv(&alpha) },
                CanonicalFamily::Jacobi { alpha, beta } => CanonicalFamily::Jacobi { alpha: conv(&alpha), beta: conv(&beta) },
                CanonicalFamily::Bessel { alpha } => CanonicalFamily::Bessel { alpha: conv(&alpha) },
            }
        }
    };
    let indices: Vec<usize> = match index {
        Some(n) => vec![n],
        None => (0..=opts.horizon as usize).collect(),
    };
    let rows = indices.iter().map(|&n| table3_row(&family, n)).collect::<Result<Vec<_>, _>>()?;
    let objects: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            family_json(&row.family, &mut obj);
            for (key, cell) in TABLE3_COLUMNS.iter().zip(table3_cells(row)) {
                obj.insert(key.to_string(), cell);
            }
            Value::Object(obj)
        })
        .collect();
    let text_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            table3_cells(row)
                .into_iter()
                .map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))
                .collect()
        })
        .collect();
    let json = if index.is_some() { objects.into_iter().next().expect("one row") } else { Value::Array(objects) };
    Ok(Output { json, table: render_table(&TABLE3_COLUMNS, &text_rows), ok: true })
}

fn roundtrip_output(report: &RoundtripReport) -> Output {
    let mut obj = Map::new();
    family_json(&report.family, &mut obj);
    obj.insert("horizon".into(), json!(report.horizon));
    obj.insert("passed".into(), json!(report.passed));
    obj.insert("exact".into(), json!(report.exact));
    obj.insert("max_rel_error".into(), json!(format!("{:e}", report.max_rel_error)));
    obj.insert("failures".into(), json!(report.failures));
    let json = Value::Object(obj);
    Output { table: key_value_table(&json), json, ok: report.passed }
}

fn run(cli: &Cli) -> Result<Output, InputError> {
    let opts = &cli.opts;
    let horizon = opts.horizon as usize;
    match &cli.verb {
        Verb::Classify => {
            let (pair, _) = pair_from_opts(opts)?;
            Ok(classify_output(&classify(&pair)?))
        }
        Verb::Moments => {
            let (pair, u0) = pair_from_opts(opts)?;
            let moments = moments_from_pearson(&pair, &u0)?.moments(horizon + 1);
            let rows = moments.iter().enumerate().map(|(n, m)| vec![n.to_string(), m.to_string()]).collect::<Vec<_>>();
            Ok(Output { json: moments_to_json(&moments), table: render_table(&["n", "u_n"], &rows), ok: true })
        }
        Verb::Recurrence => {
            let (pair, _) = pair_from_opts(opts)?;
            let table = recurrence_table(&pair, horizon)?;
            let rows = table
                .iter()
                .map(|r| vec![r.n.to_string(), r.beta.to_string(), r.gamma.to_string()])
                .collect::<Vec<_>>();
            Ok(Output { json: recurrence_to_json(&table), table: render_table(&["n", "beta", "gamma"], &rows), ok: true })
        }
        Verb::Polys => {
            let (pair, _) = pair_from_opts(opts)?;
            let seq = generate_polys(&pair, horizon)?;
            let rows = seq.polys.iter().enumerate().map(|(n, p)| vec![n.to_string(), p.to_string()]).collect::<Vec<_>>();
            Ok(Output {
                json: Value::Array(seq.polys.iter().map(poly_to_json).collect()),
                table: render_table(&["n", "P_n"], &rows),
                ok: true,
            })
        }
        Verb::Verify { which, k } => verify_output(opts, which, *k),
        Verb::Table3 { index } => table3_output(opts, *index),
        Verb::Roundtrip => {
            let (pair, _) = pair_from_opts(opts)?;
            Ok(roundtrip_output(&roundtrip_check(&pair, horizon)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.opts.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON values serialize")),
                Format::Table => print!("{}", out.table),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

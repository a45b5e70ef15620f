use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tautring::arith::format_scalar;
use tautring::charclass::{enumerate_basis, l_classical, l_tilde, l_tilde_leading_coefficient};
use tautring::independence::check_presentation_independence;
use tautring::models::{BundleModel, ModelKind};
use tautring::taut::{audit, builtin_relation_suite, Flavor, KappaExpr, TautPresentation};
use tautring::Error;

/// Default cap on `--max-i` for `lclass`.
const LCLASS_CAP: u32 = 6;

#[derive(Parser, Debug)]
#[command(name = "tautring", version, about = "Exact characteristic-class and tautological-ring calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Closed,
    Pointed,
    Disc,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Closed => Flavor::Closed,
            FlavorArg::Pointed => Flavor::Pointed,
            FlavorArg::Disc => Flavor::Disc,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Sphere,
    Liegroup,
    PointedSphere,
    PointedLiegroup,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Sphere => ModelKind::Sphere,
            ModelArg::Liegroup => ModelKind::LieGroup,
            ModelArg::PointedSphere => ModelKind::PointedSphere,
            ModelArg::PointedLiegroup => ModelKind::PointedLieGroup,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Modified and classical Hirzebruch classes with the leading-coefficient check.
    Lclass {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        max_i: u32,
        /// Allow --max-i above the default cap of 6.
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Rewrite a κ-expression into the free generators of a presentation.
    NormalForm {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = FlavorArg::Closed)]
        flavor: FlavorArg,
        /// Degree bound while expanding (default 24n).
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Audit the built-in relation suite, or a single --expr in --model.
    Audit {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 16)]
        max_degree: u32,
        #[arg(long, requires = "model")]
        expr: Option<String>,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Truncated algebraic-independence check of presentation generators.
    Independence {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = FlavorArg::Closed)]
        flavor: FlavorArg,
        /// Default 8n.
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate a κ-expression in a bundle model.
    ModelEval {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the basis monomials of H*(BSO(2n)) up to a degree.
    Basis {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Parse { .. }) => 1,
            Failure::Lib(Error::Resource(_) | Error::DegreeBound { .. }) | Failure::Cap(_) => 3,
            Failure::Lib(_) | Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Usage(m) | Failure::Cap(m) => m.clone(),
        }
    }
}

type Out = Result<String, Failure>;

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn cmd_lclass(n: u32, max_i: u32, allow_large: bool, format: Format) -> Out {
    if max_i > LCLASS_CAP && !allow_large {
        return Err(Failure::Cap(format!(
            "--max-i {max_i} exceeds the cap of {LCLASS_CAP}; pass --allow-large to override"
        )));
    }
    let mut rows = vec![];
    for i in 0..=max_i {
        let lt = l_tilde(i, n)?;
        let classical = if i == 0 {
            "1".to_string()
        } else {
            l_classical(i)?.to_string()
        };
        let (lead, check) = if i == 0 {
            (format_scalar(&lt.poly.constant_term()), "ok".to_string())
        } else if i <= n {
            let expected = l_tilde_leading_coefficient(i, n)?;
            let mut exps = vec![0; n as usize];
            exps[i as usize - 1] = 1;
            let actual = lt.poly.coeff(&exps);
            let ok = if actual == expected { "ok" } else { "MISMATCH" };
            (format_scalar(&expected), ok.to_string())
        } else {
            ("-".to_string(), "n/a".to_string())
        };
        rows.push((i, lt.poly.to_string(), classical, lead, check));
    }
    let mut s = String::new();
    match format {
        Format::Tsv => {
            s.push_str("i\tn\tpolynomial\tclassical\tleading_coefficient\tcheck\n");
            for (i, p, c, l, k) in &rows {
                writeln!(s, "{i}\t{n}\t{p}\t{c}\t{l}\t{k}").unwrap();
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(i, p, c, l, k)| {
                    json!({"i": i, "n": n, "polynomial": p, "classical": c,
                           "leading_coefficient": l, "check": k})
                })
                .collect();
            s = to_json(&v);
        }
        Format::Text => {
            for (i, p, c, l, k) in &rows {
                writeln!(s, "L~_{i} (n={n}) = {p}").unwrap();
                writeln!(s, "  L_{i} = {c}; leading coefficient {l} [{k}]").unwrap();
            }
        }
    }
    Ok(s)
}

fn cmd_normal_form(expr: &str, n: u32, g: u32, flavor: Flavor, bound: Option<u32>, format: Format) -> Out {
    let mut pres = TautPresentation::new(n, g, flavor)?;
    if let Some(b) = bound {
        pres = pres.with_degree_bound(b);
    }
    let x = KappaExpr::parse(expr, n, flavor)?;
    let nf = pres.normal_form(&x)?.to_string();
    Ok(match format {
        Format::Json => to_json(&json!({
            "expr": x.to_string(),
            "n": n,
            "g": g,
            "flavor": flavor,
            "generators": pres.table().names(),
            "krull_dimension": pres.krull_dimension(),
            "normal_form": nf,
        })),
        Format::Tsv => format!("{n}\t{g}\t{flavor}\t{x}\t{nf}\n"),
        Format::Text => format!("{nf}\n"),
    })
}

fn audit_line(r: &tautring::taut::AuditRecord, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Tsv => format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.family,
            r.model,
            serde_json::to_value(r.verdict).unwrap().as_str().unwrap(),
            r.relation,
            r.witness,
            r.note.clone().unwrap_or_default()
        ),
        Format::Text => {
            let verdict = serde_json::to_value(r.verdict).unwrap();
            let mut s = format!(
                "[{}] {} in {}: {}",
                verdict.as_str().unwrap(),
                r.relation,
                r.model,
                r.witness
            );
            if let Some(note) = &r.note {
                write!(s, " ({note})").unwrap();
            }
            s + "\n"
        }
    }
}

fn cmd_audit(n: u32, g: u32, max_degree: u32, expr: Option<&str>, model: Option<ModelArg>, format: Format) -> Out {
    let records: Vec<_> = match (expr, model) {
        (Some(src), Some(m)) => {
            let model = BundleModel::new(m.into(), n, g)?;
            let flavor = if model.is_pointed() { Flavor::Pointed } else { Flavor::Closed };
            let x = KappaExpr::parse(src, n, flavor)?;
            vec![audit(&x, &model)?.record()]
        }
        (None, _) => builtin_relation_suite(n, g, max_degree)?
            .iter()
            .map(|r| r.record())
            .collect(),
        (Some(_), None) => return Err(Failure::Usage("--expr needs --model".into())),
    };
    let mut s = String::new();
    if format == Format::Tsv {
        s.push_str("family\tmodel\tverdict\trelation\twitness\tnote\n");
    }
    for r in &records {
        s.push_str(&audit_line(r, format));
    }
    Ok(s)
}

fn cmd_independence(n: u32, g: u32, flavor: Flavor, max_degree: Option<u32>, format: Format) -> Out {
    let res = check_presentation_independence(n, g, flavor, max_degree)?;
    let rep = res.report(n, g, flavor);
    Ok(match format {
        Format::Json => to_json(&rep),
        Format::Tsv => {
            let mut s = String::from("degree\tsource_dim\trank\tkernel_dim\n");
            for d in &res.degrees {
                writeln!(s, "{}\t{}\t{}\t{}", d.degree, d.source_dim, d.rank, d.basis.len()).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} (n={n}, g={g}, {flavor}, generators {}, degrees <= {})\n",
                rep.verdict,
                rep.generators.join(", "),
                rep.max_degree
            );
            for k in &rep.kernel {
                for p in &k.basis {
                    writeln!(s, "  degree {}: {p}", k.degree).unwrap();
                }
            }
            s
        }
    })
}

fn cmd_model_eval(model: ModelArg, n: u32, g: u32, expr: &str, format: Format) -> Out {
    let model = BundleModel::new(model.into(), n, g)?;
    let flavor = if model.is_pointed() { Flavor::Pointed } else { Flavor::Closed };
    let x = KappaExpr::parse(expr, n, flavor)?;
    let value = audit(&x, &model)?.witness.to_string();
    Ok(match format {
        Format::Json => to_json(&json!({
            "model": model.label().to_string(),
            "expr": x.to_string(),
            "generators": model.target().names(),
            "value": value,
        })),
        Format::Tsv => format!("{}\t{x}\t{value}\n", model.label()),
        Format::Text => format!("{value}\n"),
    })
}

fn cmd_basis(n: u32, max_degree: u32, format: Format) -> Out {
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let basis = enumerate_basis(n, max_degree);
    let rows: Vec<(String, u32, i64)> = basis
        .iter()
        .map(|c| (c.to_string(), c.degree(), c.degree() as i64 - 2 * n as i64))
        .collect();
    let mut s = String::new();
    match format {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(m, d, k)| json!({"monomial": m, "degree": d, "kappa_degree": k}))
                .collect();
            s = to_json(&v);
        }
        Format::Tsv => {
            s.push_str("monomial\tdegree\tkappa_degree\n");
            for (m, d, k) in &rows {
                writeln!(s, "{m}\t{d}\t{k}").unwrap();
            }
        }
        Format::Text => {
            for (m, d, k) in &rows {
                writeln!(s, "{m}  (degree {d}, kappa degree {k})").unwrap();
            }
        }
    }
    Ok(s)
}

fn run(cli: Cli) -> Out {
    match cli.command {
        Command::Lclass { n, max_i, allow_large, format } => cmd_lclass(n, max_i, allow_large, format),
        Command::NormalForm { expr, n, genus, flavor, max_degree, format } => {
            cmd_normal_form(&expr, n, genus, flavor.into(), max_degree, format)
        }
        Command::Audit { n, genus, max_degree, expr, model, format } => {
            cmd_audit(n, genus, max_degree, expr.as_deref(), model, format)
        }
        Command::Independence { n, genus, flavor, max_degree, format } => {
            cmd_independence(n, genus, flavor.into(), max_degree, format)
        }
        Command::ModelEval { model, n, genus, expr, format } => cmd_model_eval(model, n, genus, &expr, format),
        Command::Basis { n, max_degree, format } => cmd_basis(n, max_degree, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

//! Command-line front end: document formats and the `run` entry point.

pub mod documents;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::json;
use thiserror::Error;
use toric_mirror::fixtures;
use toric_mirror::lattice::{
    dual_polytope, facet_chart, is_fano, is_reflexive, lattice_points, polygon_equivalence, LatticeError,
    LatticePolytope,
};
use toric_mirror::laurent::{
    check_mm_conditions, minkowski_polynomial, newton_polytope, parse_expression, FacetChoice, ParsedPolynomial,
};
use toric_mirror::minkowski::{enumerate_a_triangle_decompositions, LatticePolygon, MinkowskiDecomposition};
use toric_mirror::periods::{
    classical_period, compare_series, guess_recurrence, quantum_period, regularise, MirrorVerdict, Model,
};
use toric_mirror::toric_eqs::{
    equations, first_nonvanishing, jacobian_rank, projectivise, sample_fiber_point, sample_toric_point,
    verify_parametrization, FiberPoint, MonomialParametrization, Style,
};

use documents::{
    decode_polytope, decode_series, encode_polytope, encode_series, DocumentError, PolytopeDocument,
    SeriesDocument, SeriesValues,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Document { path: String, source: DocumentError },
    #[error("{0}")]
    Domain(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "toric-mirror", version, about = "Lattice polytopes, Laurent polynomial periods and toric equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Facets, duals and lattice points.
    #[command(subcommand)]
    Polytope(PolytopeCommand),
    /// Minkowski sums and A-triangle decompositions of polygons.
    #[command(subcommand)]
    Mink(MinkCommand),
    /// Laurent polynomials and Minkowski polynomials.
    #[command(subcommand)]
    Laurent(LaurentCommand),
    /// Classical and quantum periods.
    #[command(subcommand)]
    Period(PeriodCommand),
    /// Determinantal equations of the toric threefold.
    #[command(subcommand)]
    Toric(ToricCommand),
}

#[derive(Debug, Args)]
struct PolytopeArgs {
    #[arg(long, value_name = "FILE")]
    polytope: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum PolytopeCommand {
    /// Combinatorial summary with Fano and reflexive flags.
    Check(PolytopeArgs),
    /// Dual polytope of a Fano polytope.
    Dual(PolytopeArgs),
    /// Lattice points in lexicographic order.
    Points(PolytopeArgs),
}

#[derive(Debug, Subcommand)]
enum MinkCommand {
    /// Minkowski sum of the given polytopes.
    Sum {
        #[arg(long, value_name = "FILE", required = true)]
        polytope: Vec<PathBuf>,
    },
    /// Maximal A-triangle decompositions of a polygon.
    Decompose(PolytopeArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PolySource {
    #[arg(long, value_name = "EXPR")]
    poly: Option<String>,
    #[arg(long, value_name = "FILE")]
    poly_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChoiceName {
    Segments,
    Triangles,
    Trivial,
}

#[derive(Debug, Subcommand)]
enum LaurentCommand {
    /// Parses an expression and prints it in normal form.
    Parse {
        #[command(flatten)]
        source: PolySource,
    },
    /// Newton polytope of a Laurent polynomial.
    Newton {
        #[command(flatten)]
        source: PolySource,
    },
    /// Checks the mirror conditions of a polynomial against a polytope.
    MmCheck {
        #[command(flatten)]
        source: PolySource,
        /// Defaults to the Newton polytope.
        #[arg(long, value_name = "FILE")]
        polytope: Option<PathBuf>,
    },
    /// Minkowski polynomial of a 3-polytope for a choice of facet decompositions.
    Minkowski {
        #[arg(long, value_name = "FILE")]
        polytope: PathBuf,
        #[arg(long, conflicts_with = "choice_file", required_unless_present = "choice_file")]
        choice: Option<ChoiceName>,
        #[arg(long, value_name = "FILE")]
        choice_file: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    #[value(name = "X2")]
    X2,
    #[value(name = "X3")]
    X3,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::X2 => Model::X2,
            ModelArg::X3 => Model::X3,
        }
    }
}

#[derive(Debug, Subcommand)]
enum PeriodCommand {
    /// Constant terms of powers of a Laurent polynomial.
    Classical {
        #[command(flatten)]
        source: PolySource,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Quantum period of a model threefold.
    Quantum {
        #[arg(long)]
        model: ModelArg,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Regularises a series file, or the quantum period of a model.
    Regularise {
        #[arg(long, value_name = "FILE", conflicts_with = "model", required_unless_present = "model")]
        series: Option<PathBuf>,
        #[arg(long)]
        model: Option<ModelArg>,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Compares a classical period with a regularised quantum period.
    Compare {
        #[arg(long)]
        model: ModelArg,
        #[command(flatten)]
        source: PolySource,
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[arg(long)]
        expect_equal: bool,
    },
    /// Guesses a linear recurrence with polynomial coefficients.
    Recurrence {
        #[arg(long, value_name = "FILE", conflicts_with_all = ["model", "poly", "poly_file"])]
        series: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["poly", "poly_file"])]
        model: Option<ModelArg>,
        #[arg(long, value_name = "EXPR", conflicts_with = "poly_file")]
        poly: Option<String>,
        #[arg(long, value_name = "FILE")]
        poly_file: Option<PathBuf>,
        #[arg(long, default_value_t = 60)]
        order: usize,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    Tom,
    Jerry,
}

impl From<StyleArg> for Style {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Tom => Style::Tom,
            StyleArg::Jerry => Style::Jerry,
        }
    }
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    style: StyleArg,
    #[arg(long, default_value_t = 20)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum ToricCommand {
    /// Prints the equations, optionally deformed and projectivised.
    Eqs {
        #[arg(long)]
        style: StyleArg,
        #[arg(long)]
        deform: bool,
        #[arg(long)]
        projectivise: bool,
    },
    /// Checks sample points against the equations and the torus parametrization.
    Verify(SampleArgs),
    /// Jacobian ranks at the origin and at sample points.
    Probe(SampleArgs),
}

/// Runs one command line. Returns 0 on success, 1 on domain errors and
/// negative verdicts, 2 on usage and input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Polytope(c) => polytope_command(c, out).map(|()| 0),
        Command::Mink(c) => mink_command(c, out).map(|()| 0),
        Command::Laurent(c) => laurent_command(c, out).map(|()| 0),
        Command::Period(c) => period_command(c, out),
        Command::Toric(c) => toric_command(c, out),
    }
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_polytope(path: &Path) -> CliResult<(PolytopeDocument, LatticePolytope)> {
    decode_polytope(&read(path)?).map_err(|source| match source {
        DocumentError::Lattice(e) => CliError::Domain(format!("{}: {e}", path.display())),
        source => CliError::Document { path: path.display().to_string(), source },
    })
}

fn load_poly(source: &PolySource) -> CliResult<ParsedPolynomial> {
    let text = match (&source.poly, &source.poly_file) {
        (Some(expr), _) => expr.clone(),
        (None, Some(path)) => String::from_utf8(read(path)?)
            .map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))?,
        (None, None) => return Err(CliError::Usage("one of --poly or --poly-file is required".into())),
    };
    parse_expression(text.trim()).map_err(|e| CliError::Usage(format!("cannot parse polynomial: {e}")))
}

fn polytope_command(c: PolytopeCommand, out: &mut dyn Write) -> CliResult {
    match c {
        PolytopeCommand::Check(a) => {
            let (doc, p) = load_polytope(&a.polytope)?;
            let fano = is_fano(&p);
            let reflexive = fano && is_reflexive(&p).map_err(domain)?;
            let points = lattice_points(&p).len();
            if a.json {
                let value = json!({
                    "name": doc.name,
                    "dimension": p.dim(),
                    "vertices": p.vertices().len(),
                    "facets": p.facets().len(),
                    "edges": p.edges().len(),
                    "lattice_points": points,
                    "fano": fano,
                    "reflexive": reflexive,
                    "facet_normals": p.facets().iter().map(|f| f.normal.to_string()).collect::<Vec<_>>(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json"))?;
            } else {
                writeln!(out, "name: {}", doc.name)?;
                writeln!(out, "dimension: {}", p.dim())?;
                writeln!(out, "vertices: {}", p.vertices().len())?;
                writeln!(out, "facets: {}", p.facets().len())?;
                writeln!(out, "edges: {}", p.edges().len())?;
                writeln!(out, "lattice points: {points}")?;
                writeln!(out, "fano: {fano}")?;
                writeln!(out, "reflexive: {reflexive}")?;
                for (i, f) in p.facets().iter().enumerate() {
                    let vs: Vec<String> = f.vertices.iter().map(|&v| p.vertices()[v].to_string()).collect();
                    writeln!(out, "facet {i}: normal {} offset {} vertices {}", f.normal, f.offset, vs.join(" "))?;
                }
            }
        }
        PolytopeCommand::Dual(a) => {
            let (doc, p) = load_polytope(&a.polytope)?;
            let dual = dual_polytope(&p).map_err(domain)?;
            let name = format!("{}-dual", doc.name);
            match (a.json, dual.to_lattice()) {
                (true, Some(lattice)) => write!(out, "{}", encode_polytope(&PolytopeDocument::from_polytope(&name, &lattice)))?,
                (true, None) => {
                    let rows: Vec<Vec<String>> =
                        dual.vertices().iter().map(|v| v.iter().map(ToString::to_string).collect()).collect();
                    let value = json!({ "name": name, "vertices": rows });
                    writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json"))?;
                }
                (false, _) => {
                    writeln!(out, "{dual}")?;
                    writeln!(out, "integral: {}", dual.is_integral())?;
                }
            }
        }
        PolytopeCommand::Points(a) => {
            let (_, p) = load_polytope(&a.polytope)?;
            let points = lattice_points(&p);
            if a.json {
                let rows: Vec<Vec<i64>> = points.iter().map(|v| v.to_i64().expect("small point")).collect();
                writeln!(out, "{}", serde_json::to_string(&rows).expect("json"))?;
            } else {
                for v in points {
                    writeln!(out, "{v}")?;
                }
            }
        }
    }
    Ok(())
}

fn planar(p: &LatticePolytope, path: &Path) -> CliResult<LatticePolygon> {
    if p.dim() != 2 {
        return Err(CliError::Domain(format!("{}: expected a polygon", path.display())));
    }
    LatticePolygon::from_polytope(p).map_err(domain)
}

fn mink_command(c: MinkCommand, out: &mut dyn Write) -> CliResult {
    match c {
        MinkCommand::Sum { polytope } => {
            let mut acc: Option<LatticePolytope> = None;
            for path in &polytope {
                let (_, p) = load_polytope(path)?;
                acc = Some(match acc {
                    None => p,
                    Some(a) if a.dim() == p.dim() => a.minkowski_sum(&p),
                    Some(_) => return Err(CliError::Domain("summands have different dimensions".into())),
                });
            }
            let sum = acc.expect("at least one polytope");
            write!(out, "{}", encode_polytope(&PolytopeDocument::from_polytope("sum", &sum)))?;
        }
        MinkCommand::Decompose(a) => {
            let (_, p) = load_polytope(&a.polytope)?;
            let decs = enumerate_a_triangle_decompositions(&planar(&p, &a.polytope)?).map_err(domain)?;
            if a.json {
                let value: Vec<Vec<Vec<Vec<i64>>>> = decs
                    .iter()
                    .map(|d| {
                        d.summands()
                            .iter()
                            .map(|s| s.vertices().iter().map(|v| v.to_i64().expect("small")).collect())
                            .collect()
                    })
                    .collect();
                writeln!(out, "{}", serde_json::to_string(&value).expect("json"))?;
            } else {
                writeln!(out, "{} decompositions", decs.len())?;
                for (i, d) in decs.iter().enumerate() {
                    writeln!(out, "{}: {d}", i + 1)?;
                }
            }
        }
    }
    Ok(())
}

/// One facet's decomposition in a choice file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FacetEntry {
    facet: usize,
    summands: Vec<Vec<[i64; 2]>>,
}

fn load_choice_file(path: &Path) -> CliResult<FacetChoice> {
    let bytes = read(path)?;
    let entries: Vec<FacetEntry> = serde_json::from_slice(&bytes).map_err(|e| CliError::Document {
        path: path.display().to_string(),
        source: e.into(),
    })?;
    let mut choice = FacetChoice::new();
    for entry in entries {
        let summands = entry
            .summands
            .iter()
            .map(|s| LatticePolygon::from_i64(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(domain)?;
        choice.insert(entry.facet, MinkowskiDecomposition::new(summands).map_err(domain)?);
    }
    Ok(choice)
}

/// Places a fixture decomposition of the hexagon on every facet equivalent
/// to it.
fn hexagon_choice(q: &LatticePolytope, dec: &MinkowskiDecomposition) -> CliResult<FacetChoice> {
    let hexagon = fixtures::hexagon();
    let mut choice = FacetChoice::new();
    for idx in 0..q.facets().len() {
        let chart = facet_chart(q, idx).map_err(domain)?;
        if polygon_equivalence(chart.image(), &hexagon).is_some() {
            choice.insert(idx, dec.clone());
        }
    }
    if choice.is_empty() {
        return Err(CliError::Domain("no facet is equivalent to the hexagon".into()));
    }
    Ok(choice)
}

fn laurent_command(c: LaurentCommand, out: &mut dyn Write) -> CliResult {
    match c {
        LaurentCommand::Parse { source } => {
            let f = load_poly(&source)?;
            writeln!(out, "{f}")?;
        }
        LaurentCommand::Newton { source } => {
            let f = load_poly(&source)?.into_parametric();
            let p = newton_polytope(&f).map_err(domain)?;
            write!(out, "{}", encode_polytope(&PolytopeDocument::from_polytope("newton", &p)))?;
        }
        LaurentCommand::MmCheck { source, polytope } => {
            let f = load_poly(&source)?.into_parametric();
            let q = match polytope {
                Some(path) => load_polytope(&path)?.1,
                None => newton_polytope(&f).map_err(domain)?,
            };
            let ok = check_mm_conditions(&f, &q).map_err(domain)?;
            writeln!(out, "{ok}")?;
        }
        LaurentCommand::Minkowski { polytope, choice, choice_file } => {
            let (_, q) = load_polytope(&polytope)?;
            let choice = match (choice, choice_file) {
                (_, Some(path)) => load_choice_file(&path)?,
                (Some(ChoiceName::Segments), None) => hexagon_choice(&q, &fixtures::segment_decomposition())?,
                (Some(ChoiceName::Triangles), None) => hexagon_choice(&q, &fixtures::triangle_decomposition())?,
                (Some(ChoiceName::Trivial), None) | (None, None) => FacetChoice::new(),
            };
            let f = minkowski_polynomial(&q, &choice).map_err(domain)?;
            writeln!(out, "{f}")?;
        }
    }
    Ok(())
}

fn classical_values(f: &ParsedPolynomial, order: usize) -> SeriesValues {
    match f.as_integer() {
        Some(g) => SeriesValues::Integer(classical_period(g, order)),
        None => SeriesValues::Symbolic(classical_period(&f.clone().into_parametric(), order)),
    }
}

fn load_series(path: &Path) -> CliResult<SeriesValues> {
    decode_series(&read(path)?).map_err(|source| CliError::Document { path: path.display().to_string(), source })
}

fn write_series(out: &mut dyn Write, values: &SeriesValues) -> CliResult {
    write!(out, "{}", encode_series(&SeriesDocument::from_values(values)))?;
    Ok(())
}

fn period_command(c: PeriodCommand, out: &mut dyn Write) -> CliResult<i32> {
    match c {
        PeriodCommand::Classical { source, order } => {
            write_series(out, &classical_values(&load_poly(&source)?, order))?;
        }
        PeriodCommand::Quantum { model, order } => {
            write_series(out, &SeriesValues::Rational(quantum_period(model.into(), order)))?;
        }
        PeriodCommand::Regularise { series, model, order } => {
            let values = match (series, model) {
                (Some(path), _) => match load_series(&path)? {
                    SeriesValues::Integer(s) => SeriesValues::Integer(regularise(&s)),
                    SeriesValues::Rational(s) => SeriesValues::Rational(regularise(&s)),
                    SeriesValues::Symbolic(s) => SeriesValues::Symbolic(regularise(&s)),
                },
                (None, Some(m)) => SeriesValues::Rational(regularise(&quantum_period(m.into(), order))),
                (None, None) => return Err(CliError::Usage("one of --series or --model is required".into())),
            };
            write_series(out, &values)?;
        }
        PeriodCommand::Compare { model, source, order, expect_equal } => {
            let f = load_poly(&source)?;
            let classical = classical_values(&f, order)
                .to_rational()
                .ok_or_else(|| CliError::Domain("cannot compare a symbolic series".into()))?;
            let quantum = regularise(&quantum_period(model.into(), order));
            let verdict = compare_series(&classical, &quantum, order);
            writeln!(out, "{verdict}")?;
            if expect_equal && matches!(verdict, MirrorVerdict::Mismatch { .. }) {
                return Ok(1);
            }
        }
        PeriodCommand::Recurrence { series, model, poly, poly_file, order, max_order, max_degree } => {
            let values = match (series, model, poly, poly_file) {
                (Some(path), ..) => load_series(&path)?,
                (None, Some(m), ..) => SeriesValues::Rational(regularise(&quantum_period(m.into(), order))),
                (None, None, poly, poly_file) if poly.is_some() || poly_file.is_some() => {
                    classical_values(&load_poly(&PolySource { poly, poly_file })?, order)
                }
                _ => return Err(CliError::Usage("one of --series, --model, --poly or --poly-file is required".into())),
            };
            let s = values
                .to_rational()
                .ok_or_else(|| CliError::Domain("cannot guess a recurrence for a symbolic series".into()))?;
            match guess_recurrence(s.coefficients(), max_order, max_degree).map_err(domain)? {
                Some(rec) => {
                    writeln!(out, "order {} degree {}", rec.order(), rec.degree())?;
                    writeln!(out, "{rec}")?;
                }
                None => writeln!(out, "no recurrence with order <= {max_order} and degree <= {max_degree}")?,
            }
        }
    }
    Ok(0)
}

fn point_summary(p: &FiberPoint) -> String {
    format!("s={} u={} v={}", p.s, p.u, p.v)
}

fn toric_command(c: ToricCommand, out: &mut dyn Write) -> CliResult<i32> {
    match c {
        ToricCommand::Eqs { style, deform, projectivise: proj } => {
            let mut fam = equations(style.into(), deform);
            if proj {
                fam = projectivise(&fam).map_err(domain)?;
            }
            for e in &fam.equations {
                writeln!(out, "{e}")?;
            }
            Ok(0)
        }
        ToricCommand::Verify(a) => {
            let style: Style = a.style.into();
            let plain = equations(style, false);
            let deformed = equations(style, true);
            let par = verify_parametrization(&plain, &MonomialParametrization::hexagon());
            writeln!(out, "style: {style}")?;
            writeln!(out, "generators: {}", plain.equations.len())?;
            writeln!(out, "parametrization: {par}")?;
            let zero = BigInt::from(0);
            let specializes = deformed.specialize(&zero, &zero, &zero).equations == plain.equations;
            writeln!(out, "parameter-zero specialization: {specializes}")?;
            let mut good = 0;
            for i in 0..a.samples {
                let p = sample_fiber_point(style, a.seed.wrapping_add(i)).map_err(domain)?;
                if first_nonvanishing(&deformed, &p).is_none() {
                    good += 1;
                }
            }
            writeln!(out, "fiber samples on the deformed family: {good} of {}", a.samples)?;
            Ok(if par && specializes && good == a.samples { 0 } else { 1 })
        }
        ToricCommand::Probe(a) => {
            let style: Style = a.style.into();
            let plain = equations(style, false);
            let deformed = equations(style, true);
            let origin = jacobian_rank(&plain, &FiberPoint::origin()).map_err(domain)?;
            writeln!(out, "style: {style}")?;
            writeln!(out, "origin: rank {origin}")?;
            for i in 0..a.samples {
                let seed = a.seed.wrapping_add(i);
                let toric = sample_toric_point(seed).map_err(domain)?;
                let r0 = jacobian_rank(&plain, &toric).map_err(domain)?;
                let p = sample_fiber_point(style, seed).map_err(domain)?;
                let r1 = jacobian_rank(&deformed, &p).map_err(domain)?;
                writeln!(out, "sample {i}: undeformed rank {r0}; deformed {} rank {r1}", point_summary(&p))?;
            }
            Ok(0)
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Domain(e.to_string())
    }
}

//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::form::MetricGroup;
use crate::group::{self, FinAbGroup};
use crate::json::{
    parse, render, ExtensionInput, ExtensionJson, GroupJson, MetricJson, ModularDataJson,
    ReportJson, SubgroupJson,
};
use crate::lagrangian::{
    boxplus, enumerate_lagrangians, find_extension_isomorphism, standard_extension,
    twisted_double_cyclic,
};
use crate::modular::ModularData;
use crate::orbifold::{
    figure_data, orbifold_report, twisted_sector_spectrum, z3_table, CentralCharge, FigureData,
};
use crate::qmodz::QmodZ;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "anomalia",
    version,
    about = "Pointed modular data, Lagrangian extensions and cyclic orbifold anomalies"
)]
struct Cli {
    /// Largest group order whose elements may be enumerated.
    #[arg(long, global = true, env = "ANOMALIA_MAX_ORDER")]
    max_order: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Anomaly verdict, index and representation category of the Z_n orbifold.
    Anomaly(OrbifoldArgs),
    /// Twisted-sector conformal weights mod 1, sorted.
    Spectrum(OrbifoldArgs),
    /// Invariants of a metric group read from JSON.
    Classify {
        #[arg(long)]
        metric: String,
        /// Second metric group to test for isometry.
        #[arg(long)]
        against: Option<String>,
        /// Include S and T matrices and their residuals.
        #[arg(long)]
        modular_data: bool,
    },
    /// Lagrangian subgroups of a metric group read from JSON.
    Lagrangians {
        #[arg(long)]
        metric: String,
    },
    /// Product of two extensions (extension or orbifold-report JSON files).
    Boxplus {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Twisted double of Z_n with class j.
    Double {
        #[arg(short = 'n', long = "cycle")]
        n: u64,
        #[arg(short = 'j', long = "twist", allow_negative_numbers = true)]
        j: i64,
    },
    /// The three twisted doubles of Z_3.
    #[command(name = "table-z3")]
    TableZ3,
    /// Lattice grid of the representation category for n divisible by 3.
    Figure {
        #[arg(short = 'c', long = "central-charge")]
        c: u64,
        #[arg(short = 'n', long = "cycle")]
        n: u64,
    },
}

#[derive(Args, Debug)]
struct OrbifoldArgs {
    #[arg(short = 'c', long = "central-charge")]
    c: Option<u64>,
    #[arg(short = 'n', long = "cycle")]
    n: Option<u64>,
    /// Grid such as `k=1..12,n=1..30` (inclusive ranges).
    #[arg(long)]
    sweep: Option<String>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Degenerate(_) | Error::DegenerateSum => EXIT_INVALID,
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        Error::ModularityFailure(_) | Error::InternalConsistency(_) => EXIT_FAILURE,
    }
}

/// Parse `args` (including the program name), execute, and return the exit code.
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
                let _ = err.write_all(text.as_bytes());
                EXIT_INVALID
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let bound = cli.max_order.unwrap_or_else(group::max_order);
    let result = group::with_max_order(bound, || execute(&cli));
    match result {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_FAILURE;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "anomalia: {e}");
            exit_code(&e)
        }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::invalid(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(Path::new(path))
        .map_err(|e| Error::invalid(format!("reading {path}: {e}")))
}

fn unsupported(format: Format, verb: &str) -> Error {
    Error::invalid(format!("--format {format:?} is not available for {verb}").to_lowercase())
}

fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Anomaly(a) => anomaly(a, cli.format),
        Command::Spectrum(a) => spectrum(a, cli.format),
        Command::Classify {
            metric,
            against,
            modular_data,
        } => classify(metric, against.as_deref(), *modular_data, cli.format),
        Command::Lagrangians { metric } => lagrangians(metric, cli.format),
        Command::Boxplus { lhs, rhs } => boxplus_cmd(lhs, rhs, cli.format),
        Command::Double { n, j } => double(*n, *j, cli.format),
        Command::TableZ3 => table_z3(cli.format),
        Command::Figure { c, n } => figure(CentralCharge::new(*c)?, *n, cli.format),
    }
}

/// Parsed `--sweep`: central charges and cycle lengths.
fn grid(a: &OrbifoldArgs) -> Result<Option<(Vec<CentralCharge>, Vec<u64>)>> {
    let Some(spec) = &a.sweep else {
        return Ok(None);
    };
    let mut ks: Option<Vec<u64>> = None;
    let mut ns: Option<Vec<u64>> = None;
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || {
            Error::invalid(format!(
                "bad sweep item {item:?}; expected k=a..b or n=a..b"
            ))
        };
        let (name, range) = item.split_once('=').ok_or_else(bad)?;
        let (lo, hi) = match range.split_once("..") {
            Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
            None => (range, range),
        };
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        let values: Vec<u64> = (lo..=hi).collect();
        match name.trim() {
            "k" => ks = Some(values),
            "n" => ns = Some(values),
            _ => return Err(bad()),
        }
    }
    let cs = match (ks, a.c) {
        (Some(ks), _) => ks
            .into_iter()
            .map(CentralCharge::from_k)
            .collect::<Result<Vec<_>>>()?,
        (None, Some(c)) => vec![CentralCharge::new(c)?],
        (None, None) => return Err(Error::invalid("sweep needs k=... or --central-charge")),
    };
    let ns = match (ns, a.n) {
        (Some(ns), _) => ns,
        (None, Some(n)) => vec![n],
        (None, None) => return Err(Error::invalid("sweep needs n=... or --cycle")),
    };
    Ok(Some((cs, ns)))
}

fn single(a: &OrbifoldArgs) -> Result<(CentralCharge, u64)> {
    let c =
        a.c.ok_or_else(|| Error::invalid("--central-charge is required"))?;
    let n = a.n.ok_or_else(|| Error::invalid("--cycle is required"))?;
    Ok((CentralCharge::new(c)?, n))
}

fn points(a: &OrbifoldArgs) -> Result<(bool, Vec<(CentralCharge, u64)>)> {
    match grid(a)? {
        Some((cs, ns)) => Ok((
            true,
            cs.iter()
                .flat_map(|&c| ns.iter().map(move |&n| (c, n)))
                .collect(),
        )),
        None => Ok((false, vec![single(a)?])),
    }
}

fn join(values: &[QmodZ]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn anomaly(a: &OrbifoldArgs, format: Format) -> Result<String> {
    let (sweep, pts) = points(a)?;
    let reports = pts
        .iter()
        .map(|&(c, n)| orbifold_report(c, n).map(|r| ReportJson::from_report(&r)))
        .collect::<Result<Vec<_>>>()?;
    match format {
        Format::Json if sweep => Ok(render(&reports)),
        Format::Json => Ok(render(&reports[0])),
        Format::Table | Format::Csv => {
            let sep = if format == Format::Csv { "," } else { " " };
            let mut s = String::new();
            if format == Format::Table {
                writeln!(
                    s,
                    "{:>4} {:>5} {:>4} {:>9} {:>5}  spectrum",
                    "n", "c", "k", "anomalous", "index"
                )
                .unwrap();
                for r in &reports {
                    writeln!(
                        s,
                        "{:>4} {:>5} {:>4} {:>9} {:>5}  {}",
                        r.n,
                        r.c,
                        r.k,
                        r.anomalous,
                        r.anomaly_index,
                        join(&r.spectrum)
                    )
                    .unwrap();
                }
            } else {
                writeln!(s, "n,c,k,anomalous,anomaly_index,spectrum").unwrap();
                for r in &reports {
                    let row = [
                        r.n.to_string(),
                        r.c.to_string(),
                        r.k.to_string(),
                        r.anomalous.to_string(),
                        r.anomaly_index.to_string(),
                        join(&r.spectrum),
                    ];
                    writeln!(s, "{}", row.join(sep)).unwrap();
                }
            }
            Ok(s)
        }
        Format::Svg => Err(unsupported(format, "anomaly")),
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    n: u64,
    c: u64,
    k: u64,
    spectrum: Vec<QmodZ>,
}

fn spectrum(a: &OrbifoldArgs, format: Format) -> Result<String> {
    let (sweep, pts) = points(a)?;
    let rows = pts
        .iter()
        .map(|&(c, n)| {
            let mut spectrum = twisted_sector_spectrum(c, n)?;
            spectrum.sort_unstable();
            Ok(SpectrumRow {
                n,
                c: c.c(),
                k: c.k(),
                spectrum,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    match format {
        Format::Json if sweep => Ok(render(&rows)),
        Format::Json => Ok(render(&rows[0].spectrum)),
        Format::Table => {
            let mut s = format!("{:>4} {:>5} {:>4}  spectrum\n", "n", "c", "k");
            for r in &rows {
                writeln!(s, "{:>4} {:>5} {:>4}  {}", r.n, r.c, r.k, join(&r.spectrum)).unwrap();
            }
            Ok(s)
        }
        Format::Csv => {
            let mut s = String::from("n,c,k,spectrum\n");
            for r in &rows {
                writeln!(s, "{},{},{},{}", r.n, r.c, r.k, join(&r.spectrum)).unwrap();
            }
            Ok(s)
        }
        Format::Svg => Err(unsupported(format, "spectrum")),
    }
}

#[derive(Serialize)]
struct Residuals {
    unitarity: f64,
    s_squared: f64,
    st_cubed: f64,
}

#[derive(Serialize)]
struct Classification {
    group: GroupJson,
    invariant_factors: Vec<u64>,
    order: u64,
    sigma: u8,
    twist_spectrum: Vec<QmodZ>,
    lagrangian_count: usize,
    /// Row of the twisted doubles of Z_3 it is isometric to, if any.
    z3_row: Option<u64>,
    isometric_to_against: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    modular_data: Option<ModularDataJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    modular_residuals: Option<Residuals>,
}

fn read_metric(path: &str) -> Result<MetricGroup> {
    parse::<MetricJson>(&read_input(path)?)?.to_metric()
}

fn classify(path: &str, against: Option<&str>, with_md: bool, format: Format) -> Result<String> {
    let m = read_metric(path)?;
    let g = m.group();
    let mut z3_row = None;
    if g.order() == 9 {
        for (j, row) in z3_table()? {
            if m.find_isomorphism(&row)?.is_some() {
                z3_row = Some(j);
                break;
            }
        }
    }
    let isometric_to_against = match against {
        Some(p) => Some(m.find_isomorphism(&read_metric(p)?)?.is_some()),
        None => None,
    };
    let (modular_data, modular_residuals) = if with_md {
        let md = ModularData::new(&m)?;
        let r = md.check()?;
        md.check_group_fusion()?;
        (
            Some(ModularDataJson::from_modular_data(&md)),
            Some(Residuals {
                unitarity: r.unitarity,
                s_squared: r.s_squared,
                st_cubed: r.st_cubed,
            }),
        )
    } else {
        (None, None)
    };
    let c = Classification {
        group: GroupJson::from_group(g),
        invariant_factors: g.invariant_factors(),
        order: g.order(),
        sigma: m.gauss_signature()?,
        twist_spectrum: m.twist_spectrum()?,
        lagrangian_count: enumerate_lagrangians(&m)?.len(),
        z3_row,
        isometric_to_against,
        modular_data,
        modular_residuals,
    };
    match format {
        Format::Json => Ok(render(&c)),
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "invariant factors  {:?}", c.invariant_factors).unwrap();
            writeln!(s, "order              {}", c.order).unwrap();
            writeln!(s, "signature          {}", c.sigma).unwrap();
            writeln!(s, "twists             {}", join(&c.twist_spectrum)).unwrap();
            writeln!(s, "lagrangians        {}", c.lagrangian_count).unwrap();
            if let Some(j) = c.z3_row {
                writeln!(s, "z3 row             {j}").unwrap();
            }
            if let Some(b) = c.isometric_to_against {
                writeln!(s, "isometric          {b}").unwrap();
            }
            Ok(s)
        }
        _ => Err(unsupported(format, "classify")),
    }
}

fn lagrangians(path: &str, format: Format) -> Result<String> {
    let m = read_metric(path)?;
    let ls = enumerate_lagrangians(&m)?;
    let js: Vec<SubgroupJson> = ls.iter().map(SubgroupJson::from_subgroup).collect();
    match format {
        Format::Json => Ok(render(&js)),
        Format::Table => {
            let mut s = String::new();
            for l in &js {
                writeln!(s, "{:?}", l.generators).unwrap();
            }
            Ok(s)
        }
        _ => Err(unsupported(format, "lagrangians")),
    }
}

#[derive(Serialize)]
struct ExtensionOut {
    n: u64,
    anomaly_index: u64,
    trivializable: bool,
    extension: ExtensionJson,
}

fn extension_out(
    e: &crate::lagrangian::LagrangianExtension,
    format: Format,
    verb: &str,
) -> Result<String> {
    let trivializable = find_extension_isomorphism(e, &standard_extension(e.n())?)?.is_some();
    let o = ExtensionOut {
        n: e.n(),
        anomaly_index: e.anomaly_index(),
        trivializable,
        extension: ExtensionJson::from_extension(e),
    };
    match format {
        Format::Json => Ok(render(&o)),
        Format::Table => Ok(format!(
            "n {}  anomaly_index {}  trivializable {}  group {:?}\n",
            o.n,
            o.anomaly_index,
            o.trivializable,
            e.group().factors()
        )),
        _ => Err(unsupported(format, verb)),
    }
}

fn boxplus_cmd(lhs: &str, rhs: &str, format: Format) -> Result<String> {
    let a = parse::<ExtensionInput>(&read_input(lhs)?)?.to_extension()?;
    let b = parse::<ExtensionInput>(&read_input(rhs)?)?.to_extension()?;
    extension_out(&boxplus(&a, &b)?, format, "boxplus")
}

fn double(n: u64, j: i64, format: Format) -> Result<String> {
    if n == 0 {
        return Err(Error::invalid("--cycle must be positive"));
    }
    let n2 = n
        .checked_mul(n)
        .ok_or_else(|| Error::invalid("--cycle too large"))?;
    FinAbGroup::from_factors(vec![n2])?.ensure_enumerable()?;
    extension_out(&twisted_double_cyclic(n, j)?, format, "double")
}

#[derive(Serialize)]
struct Z3Row {
    j: u64,
    metric: MetricJson,
    twist_spectrum: Vec<QmodZ>,
    sigma: u8,
    isometric_to_twisted_double: bool,
}

fn table_z3(format: Format) -> Result<String> {
    let rows = z3_table()?
        .into_iter()
        .map(|(j, m)| {
            let e = twisted_double_cyclic(3, j as i64)?;
            Ok(Z3Row {
                j,
                metric: MetricJson::from_metric(&m),
                twist_spectrum: m.twist_spectrum()?,
                sigma: m.gauss_signature()?,
                isometric_to_twisted_double: m.find_isomorphism(e.metric())?.is_some(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    match format {
        Format::Json => Ok(render(&rows)),
        Format::Table => {
            let mut s = format!(
                "{:>2}  {:<9} {:<7} {:>5}  twists\n",
                "j", "group", "form", "sigma"
            );
            let forms = ["xy/3", "4x^2/9", "8x^2/9"];
            for (r, form) in rows.iter().zip(forms) {
                let group = r
                    .metric
                    .group
                    .factors
                    .iter()
                    .map(|d| format!("Z{d}"))
                    .collect::<Vec<_>>()
                    .join("x");
                writeln!(
                    s,
                    "{:>2}  {:<9} {:<7} {:>5}  {}",
                    r.j,
                    group,
                    form,
                    r.sigma,
                    join(&r.twist_spectrum)
                )
                .unwrap();
            }
            Ok(s)
        }
        _ => Err(unsupported(format, "table-z3")),
    }
}

#[derive(Serialize)]
struct FigurePointJson {
    l: u64,
    m: u64,
    element: Vec<i64>,
    q: QmodZ,
}

#[derive(Serialize)]
struct FigureJson {
    n: u64,
    c: u64,
    k: u64,
    shear: u64,
    offset: u64,
    invariant_factors: Vec<u64>,
    points: Vec<FigurePointJson>,
}

fn figure(c: CentralCharge, n: u64, format: Format) -> Result<String> {
    let f = figure_data(c, n)?;
    match format {
        Format::Json => Ok(render(&FigureJson {
            n: f.n,
            c: f.c.c(),
            k: f.c.k(),
            shear: f.shear,
            offset: f.offset,
            invariant_factors: f.invariant_factors.clone(),
            points: f
                .points
                .iter()
                .map(|p| FigurePointJson {
                    l: p.l,
                    m: p.m,
                    element: p.element.coords().iter().map(|&x| x as i64).collect(),
                    q: p.q,
                })
                .collect(),
        })),
        Format::Csv => {
            let mut s = format!(
                "# n={} c={} shear={} offset={} group={:?}\nl,m,element,q\n",
                f.n,
                f.c.c(),
                f.shear,
                f.offset,
                f.invariant_factors
            );
            for p in &f.points {
                let el: Vec<String> = p.element.coords().iter().map(u64::to_string).collect();
                writeln!(s, "{},{},{},{}", p.l, p.m, el.join(" "), p.q).unwrap();
            }
            Ok(s)
        }
        Format::Svg => Ok(figure_svg(&f)),
        Format::Table => Err(unsupported(format, "figure")),
    }
}

/// Points `l x + m v` at column `m`, row `l`, coloured by `q`; the dashed
/// segment joins the top row to where `n x = offset v` re-enters row 0.
fn figure_svg(f: &FigureData) -> String {
    let cell = 28u64;
    let pad = 40u64;
    let size = f.n * cell + 2 * pad;
    let x = |m: u64| pad + m * cell + cell / 2;
    let y = |l: u64| size - pad - l * cell - cell / 2;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{}" viewBox="0 0 {size} {}">"#,
        size + 20,
        size + 20
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for l in 0..f.n {
        let stroke = if l == 0 { "black" } else { "#bbbbbb" };
        writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="1"/>"#,
            x(0),
            y(l),
            x(f.n - 1),
            y(l)
        )
        .unwrap();
    }
    if f.n > 0 {
        writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="crimson" stroke-dasharray="4 3"/>"#,
            x(0),
            y(f.n - 1),
            x(f.offset % f.n),
            y(0)
        )
        .unwrap();
    }
    for p in &f.points {
        let hue = (p.q.to_f64() * 360.0).round() as u64;
        let fill = if p.q.is_zero() {
            "black".to_string()
        } else {
            format!("hsl({hue},70%,45%)")
        };
        writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="5" fill="{fill}"><title>l={} m={} q={}</title></circle>"#,
            x(p.m),
            y(p.l),
            p.l,
            p.m,
            p.q
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{pad}" y="{}" font-family="monospace" font-size="12">n={} c={} shear={} offset={} group={:?}</text>"#,
        size + 10,
        f.n,
        f.c.c(),
        f.shear,
        f.offset,
        f.invariant_factors
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

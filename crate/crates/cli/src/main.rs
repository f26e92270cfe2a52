//! `logtorsor` command-line front end.
//!
//! Every subcommand reads the JSON documents of the library and prints a
//! JSON object (keys sorted) or a short text rendering. Errors go to stderr
//! as `{"error": {"kind": ..., "message": ...}}` with exit code 2 for bad
//! input and 3 when an enumeration or degree cap is hit.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use logtorsor::divisors::{class_in_phi, extend_divisor, gamma_and_verdict, monodromy_pairing};
use logtorsor::fiber::{component_group, FiniteAbelianGroup};
use logtorsor::formats::{
    int_value, rational_string, rational_strings, read_chart, read_divisor, read_fiber, read_graph,
    ChartDoc,
};
use logtorsor::graphs::{chiodo_check, graph_component_group};
use logtorsor::modelkit::{
    blowup_point, singular_points_mod_p, tangent_dimension, FpPoint, DEFAULT_POINT_CAP,
};
use logtorsor::paperdata::{reproduce_with, ExampleParams};
use logtorsor::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "logtorsor",
    version,
    about = "Extension of pointed torsors over regular models"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Upper bound on enumerated points or cycles.
    #[arg(long, global = true, default_value_t = DEFAULT_POINT_CAP)]
    cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare r | c2 with the r-torsion of the component group of a graph.
    Chiodo {
        graph: PathBuf,
        #[arg(long)]
        r: u64,
    },
    /// Component group of a fiber.
    Compgroup { fiber: PathBuf },
    /// Rational vertical part of a divisor.
    Extend { divisor: PathBuf },
    /// Obstruction vector and extension verdict of a divisor.
    Verdict { divisor: PathBuf },
    /// Monodromy pairing of two divisors on the same fiber.
    Pairing { first: PathBuf, second: PathBuf },
    /// Singular points of the special fiber of a chart.
    Singular { chart: PathBuf },
    /// Cotangent dimension at an integer point.
    Regular {
        chart: PathBuf,
        /// Comma-separated integer coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Blow up a two-variable chart at a point of its special fiber.
    Blowup {
        chart: PathBuf,
        /// `a,b`, the center `<x - a, y - b, p>`.
        #[arg(long, allow_hyphen_values = true)]
        center: String,
    },
    /// Recompute one of the worked examples.
    Reproduce {
        /// `p-example` or `l-example`.
        id: String,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<i64>,
        #[arg(long)]
        l: Option<u64>,
    },
}

/// A successful result: the JSON payload and its text rendering.
struct Output {
    json: Value,
    text: String,
}

fn parse_coords(text: &str, expected: Option<usize>) -> Result<Vec<BigInt>> {
    let coords = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::InvalidInput(format!("`{s}` is not an integer coordinate")))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = expected {
        if coords.len() != n {
            return Err(Error::InvalidInput(format!(
                "expected {n} coordinates, got {}",
                coords.len()
            )));
        }
    }
    Ok(coords)
}

fn group_json(g: &FiniteAbelianGroup) -> Value {
    Value::Array(g.invariant_factors().iter().map(int_value).collect())
}

fn points_json(points: &[FpPoint]) -> Value {
    json!(points
        .iter()
        .map(|p| p.coordinates.clone())
        .collect::<Vec<_>>())
}

fn points_text(points: &[FpPoint]) -> String {
    if points.is_empty() {
        return "none".into();
    }
    points
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn chiodo(graph: &Path, r: u64, cap: u64) -> Result<Output> {
    let g = read_graph(graph)?;
    let check = chiodo_check(&g, r, cap)?;
    let phi = graph_component_group(&g)?;
    let torsion = phi.torsion_subgroup(r);
    let elementary = torsion.is_elementary(r, check.b1);
    Ok(Output {
        text: format!(
            "b1 = {}, c2 = {}, r = {r}: r | c2 is {}; Phi = {phi}, Phi[r] = {torsion}, \
             Phi[r] = (Z/{r})^{} is {}",
            check.b1, check.c2, check.holds, check.b1, elementary
        ),
        json: json!({
            "b1": check.b1,
            "c2": check.c2,
            "r": r,
            "divides": check.holds,
            "component_group": group_json(&phi),
            "torsion": group_json(&torsion),
            "torsion_is_elementary": elementary,
        }),
    })
}

fn compgroup(path: &Path) -> Result<Output> {
    let g = component_group(&read_fiber(path)?)?;
    Ok(Output {
        text: g.to_string(),
        json: json!({ "invariant_factors": group_json(&g) }),
    })
}

fn extend(path: &Path) -> Result<Output> {
    let d = read_divisor(path)?;
    let q = extend_divisor(&d.fiber, &d.incidence)?;
    let base = &d.fiber.labels[d.incidence.base_index];
    let terms: Vec<String> = d
        .fiber
        .labels
        .iter()
        .zip(&q.q)
        .map(|(l, c)| format!("{l}: {}", rational_string(c)))
        .collect();
    Ok(Output {
        text: format!("{} (normalized on {base})", terms.join(", ")),
        json: json!({
            "components": d.fiber.labels,
            "base": base,
            "vertical_part": rational_strings(&q.q),
        }),
    })
}

fn verdict(path: &Path) -> Result<Output> {
    let d = read_divisor(path)?;
    let v = gamma_and_verdict(&d.fiber, &d.incidence)?;
    let gamma = rational_strings(&v.gamma);
    Ok(Output {
        text: format!("{}: gamma = ({})", v.kind, gamma.join(", ")),
        json: json!({ "gamma": gamma, "kind": v.kind }),
    })
}

fn pairing(first: &Path, second: &Path) -> Result<Output> {
    let s = read_divisor(first)?;
    let t = read_divisor(second)?;
    if s.fiber != t.fiber {
        return Err(Error::InvalidInput(
            "the two divisors live on different fibers".into(),
        ));
    }
    let value = monodromy_pairing(&s.fiber, &s.incidence, &t.incidence)?;
    let cs = class_in_phi(&s.fiber, &s.incidence)?;
    let ct = class_in_phi(&t.fiber, &t.incidence)?;
    Ok(Output {
        text: format!(
            "<s, t> = {} mod Z (class orders {} and {})",
            value, cs.order, ct.order
        ),
        json: json!({
            "value": rational_string(&value),
            "class_orders": [int_value(&cs.order), int_value(&ct.order)],
        }),
    })
}

fn singular(path: &Path, cap: u64) -> Result<Output> {
    let chart = read_chart(path)?;
    let points = singular_points_mod_p(&chart, cap)?;
    Ok(Output {
        text: format!(
            "singular points mod {}: {}",
            chart.prime(),
            points_text(&points)
        ),
        json: json!({ "prime": chart.prime(), "points": points_json(&points) }),
    })
}

fn regular(path: &Path, point: &str) -> Result<Output> {
    let chart = read_chart(path)?;
    let coords = parse_coords(point, Some(chart.nvars()))?;
    let t = tangent_dimension(&chart, &coords)?;
    Ok(Output {
        text: format!(
            "dim m/m^2 = {} (expected {}): {}",
            t.dimension,
            chart.expected_dim(),
            if t.is_regular {
                "regular"
            } else {
                "not regular"
            }
        ),
        json: json!({
            "dimension": t.dimension,
            "expected": chart.expected_dim(),
            "regular": t.is_regular,
        }),
    })
}

fn blowup(path: &Path, center: &str, cap: u64) -> Result<Output> {
    let chart = read_chart(path)?;
    let c = parse_coords(center, Some(2))?;
    let blown = blowup_point(&chart, (&c[0], &c[1]))?;
    let mut charts = Vec::new();
    let mut text = Vec::new();
    let mut all_regular = true;
    for (i, ch) in blown.charts().into_iter().enumerate() {
        let mut above = Vec::new();
        for pt in blown.points_above_center(i, cap)? {
            let t = tangent_dimension(ch, &pt.lift())?;
            all_regular &= t.is_regular;
            above.push(json!({ "point": pt.coordinates, "dimension": t.dimension }));
        }
        text.push(format!(
            "{ch}\n  {} fiber point(s) above the center",
            above.len()
        ));
        charts.push(json!({
            "chart": serde_json::to_value(ChartDoc::from_chart(ch)).expect("chart serializes"),
            "above_center": above,
        }));
    }
    text.push(format!(
        "regular above the center: {}",
        if all_regular { "yes" } else { "no" }
    ));
    Ok(Output {
        text: text.join("\n"),
        json: json!({
            "center": [int_value(&c[0]), int_value(&c[1])],
            "charts": charts,
            "regular_above_center": all_regular,
        }),
    })
}

fn reproduce(id: &str, p: Option<u32>, c: Option<i64>, l: Option<u64>) -> Result<Output> {
    let params = match ExampleParams::default_for(id)? {
        ExampleParams::P { p: p0, c: c0 } => {
            if l.is_some() {
                return Err(Error::InvalidInput("--l applies to l-example only".into()));
            }
            ExampleParams::P {
                p: p.unwrap_or(p0),
                c: c.unwrap_or(c0),
            }
        }
        ExampleParams::L { l: l0 } => {
            if p.is_some() || c.is_some() {
                return Err(Error::InvalidInput(
                    "--p and --c apply to p-example only".into(),
                ));
            }
            ExampleParams::L { l: l.unwrap_or(l0) }
        }
    };
    let report = reproduce_with(&params)?;
    Ok(Output {
        text: report.to_string(),
        json: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Chiodo { graph, r } => chiodo(graph, *r, cli.cap),
        Command::Compgroup { fiber } => compgroup(fiber),
        Command::Extend { divisor } => extend(divisor),
        Command::Verdict { divisor } => verdict(divisor),
        Command::Pairing { first, second } => pairing(first, second),
        Command::Singular { chart } => singular(chart, cli.cap),
        Command::Regular { chart, point } => regular(chart, point),
        Command::Blowup { chart, center } => blowup(chart, center, cli.cap),
        Command::Reproduce { id, p, c, l } => reproduce(id, *p, *c, *l),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => out.json.to_string(),
                Format::Text => out.text,
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{body}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!(
                "{}",
                json!({ "error": { "kind": e.kind(), "message": e.to_string() } })
            );
            ExitCode::from(if e.is_limit() { 3 } else { 2 })
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tropskel::certify::{certify_faithful, kmm_check, vertex_mult_one, well_spaced_check, Certificate, Verdict};
use tropskel::elimination::{newton_polygon_from_curve, pushforward, LatticeMap};
use tropskel::newton::{corner_locus_of, dual_subdivision, duality_certificate, Polynomial};
use tropskel::potential::{solve_p1_function, solve_slope};
use tropskel::render::{render_complex_svg, render_skeleton_svg};
use tropskel::scenario::{list, run_all, run_scenario, ScenarioReport};
use tropskel::schema;
use tropskel::skeleton::{build_p1_skeleton, build_tate_skeleton, Puncture, SkeletonKind};
use tropskel::tropicalize::trop_map;
use tropskel::{Divisor, PLFunction, Rat, Skeleton, TropicalComplex};

/// Directory for scenario artifacts when `--out-dir` is not given.
const OUT_DIR_VAR: &str = "TROPSKEL_OUT_DIR";

#[derive(Parser)]
#[command(name = "tropskel", version, about = "Skeleta, slope-formula potentials and tropical curves in exact arithmetic")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a skeleton (skeleton.v1).
    Skeleton(SkeletonArgs),
    /// Solve the slope formula for one divisor (plfunction.v1).
    Potential(PotentialArgs),
    /// Tropicalize a skeleton through one coordinate per divisor (tropcomplex.v1).
    Trop(TropArgs),
    /// Corner locus of a polynomial, or the Newton polygon of a plane curve.
    Newton(NewtonArgs),
    /// Run a certificate on a complex (certificate.v1).
    Certify(CertifyArgs),
    /// Image of a complex under an integer linear map (tropcomplex.v1).
    Pushforward(PushforwardArgs),
    /// Run registered scenarios.
    Scenario(ScenarioArgs),
    /// Draw a plane complex or a skeleton as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct SkeletonArgs {
    /// Punctures of the projective line as `id=literal`, e.g. `a=t^(1/2)`.
    #[arg(long = "point", value_name = "ID=LITERAL")]
    points: Vec<String>,
    /// Leave out the puncture at infinity.
    #[arg(long)]
    no_infinity: bool,
    /// Circle length of a Tate curve; punctures then come from `--at`.
    #[arg(long, value_name = "LENGTH")]
    tate: Option<String>,
    /// Tate punctures as `id=position`.
    #[arg(long = "at", value_name = "ID=POSITION")]
    at: Vec<String>,
    /// Also write a drawing of the skeleton.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct PotentialArgs {
    #[arg(long)]
    skeleton: PathBuf,
    /// `id=order,...`, or a divisor.v1 file.
    #[arg(long)]
    divisor: String,
    /// Valuation of the leading scalar (tree skeleta with known points).
    #[arg(long, default_value = "0")]
    scalar_val: String,
}

#[derive(Args)]
struct TropArgs {
    #[arg(long)]
    skeleton: PathBuf,
    /// One per coordinate: `id=order,...` or a divisor.v1 file.
    #[arg(long = "divisor", required = true)]
    divisors: Vec<String>,
    /// Valuations of the leading scalars, one per coordinate (default 0).
    #[arg(long = "scalar-val")]
    scalar_vals: Vec<String>,
    /// Fuse collinear cells of equal multiplicity.
    #[arg(long)]
    merge_collinear: bool,
    /// Write the per-edge expansion factors here.
    #[arg(long)]
    expansions: Option<PathBuf>,
}

#[derive(Args)]
struct NewtonArgs {
    /// Polynomial such as `x^2*y + (1/t)*x*y + x + y`.
    #[arg(long, conflicts_with_all = ["input", "polygon_from"])]
    poly: Option<String>,
    /// troppoly.v1 file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Set z = 1 in a homogeneous polynomial.
    #[arg(long)]
    dehomogenize: bool,
    /// Keep the subdivided presentation.
    #[arg(long)]
    no_merge: bool,
    /// Recover the Newton polygon from this tropcomplex.v1 file instead.
    #[arg(long)]
    polygon_from: Option<PathBuf>,
    /// Degree of the curve onto its image, for `--polygon-from`.
    #[arg(long, default_value_t = 1)]
    degree: u64,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    complex: PathBuf,
    /// Faithfulness for a curve of this genus.
    #[arg(long, value_name = "GENUS")]
    faithful: Option<usize>,
    /// Cycle length against -val(j).
    #[arg(long, value_name = "VAL_J", allow_hyphen_values = true)]
    kmm: Option<String>,
    /// Multiplicity one at this vertex.
    #[arg(long, value_name = "INDEX")]
    vertex: Option<usize>,
    /// Well-spacedness for the hyperplane `<normal, w> = level`, given as `n1,n2,...:level`.
    #[arg(long, value_name = "NORMAL:LEVEL", allow_hyphen_values = true)]
    well_spaced: Option<String>,
}

#[derive(Args)]
struct PushforwardArgs {
    #[arg(long)]
    complex: PathBuf,
    /// Rows separated by `;`, entries by `,`, e.g. `1,0,0;0,1,0`.
    #[arg(long, conflicts_with = "map", allow_hyphen_values = true)]
    matrix: Option<String>,
    /// latticemap.v1 file.
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    degree: u64,
    #[arg(long)]
    merge_collinear: bool,
}

#[derive(Args)]
struct ScenarioArgs {
    name: Option<String>,
    #[arg(long, conflicts_with = "name")]
    all: bool,
    #[arg(long, conflicts_with_all = ["name", "all"])]
    list: bool,
    /// Print reports as JSON.
    #[arg(long)]
    json: bool,
    /// Artifact directory (falls back to $TROPSKEL_OUT_DIR).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long, conflicts_with = "skeleton")]
    complex: Option<PathBuf>,
    #[arg(long)]
    skeleton: Option<PathBuf>,
}

/// Outcome of a command: what to print and whether it passed.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn json(v: &Value) -> Output {
        Output { text: serde_json::to_string_pretty(v).expect("serializable") + "\n", passed: true }
    }
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn rat(s: &str) -> anyhow::Result<Rat> {
    s.trim().parse().map_err(|e| anyhow!("bad rational `{s}`: {e}"))
}

fn split_pair(s: &str) -> anyhow::Result<(&str, &str)> {
    s.split_once('=').map(|(a, b)| (a.trim(), b.trim())).ok_or_else(|| anyhow!("expected `id=value`, got `{s}`"))
}

/// Inline `id=order,...` or a path to a divisor file.
fn divisor(text: &str) -> anyhow::Result<Divisor> {
    let path = Path::new(text);
    if path.is_file() {
        return Ok(schema::divisor_from_json(&read_json(path)?)?);
    }
    let entries = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|e| {
            let (id, n) = split_pair(e)?;
            Ok((id.to_string(), n.parse::<i64>().map_err(|_| anyhow!("bad order `{n}`"))?))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Divisor::new(entries))
}

fn load_skeleton(path: &Path) -> anyhow::Result<Skeleton> {
    Ok(schema::skeleton_from_json(&read_json(path)?)?)
}

fn load_complex(path: &Path) -> anyhow::Result<TropicalComplex> {
    Ok(schema::complex_from_json(&read_json(path)?)?)
}

/// Tree skeleta with known points get their true additive constant.
fn potential_of(sk: &Skeleton, d: &Divisor, scalar_val: &Rat) -> anyhow::Result<PLFunction> {
    let known = sk.kind == SkeletonKind::P1 && sk.vertices[sk.base_vertex].ball.is_some();
    Ok(if known { solve_p1_function(sk, d, scalar_val)? } else { solve_slope(sk, d)? })
}

fn skeleton_cmd(a: &SkeletonArgs) -> anyhow::Result<Output> {
    let sk = match &a.tate {
        Some(len) => {
            if !a.points.is_empty() {
                bail!("--point is for the projective line; use --at with --tate");
            }
            let at = a
                .at
                .iter()
                .map(|s| {
                    let (id, x) = split_pair(s)?;
                    Ok((id.to_string(), rat(x)?))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            build_tate_skeleton(&rat(len)?, &at)?
        }
        None => {
            if !a.at.is_empty() {
                bail!("--at needs --tate");
            }
            let points = a
                .points
                .iter()
                .map(|s| {
                    let (id, lit) = split_pair(s)?;
                    Ok(Puncture::new(id, lit.parse()?))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            build_p1_skeleton(&points, !a.no_infinity)?
        }
    };
    if let Some(path) = &a.svg {
        std::fs::write(path, render_skeleton_svg(&sk)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Output::json(&schema::skeleton_to_json(&sk)))
}

fn potential_cmd(a: &PotentialArgs) -> anyhow::Result<Output> {
    let sk = load_skeleton(&a.skeleton)?;
    let f = potential_of(&sk, &divisor(&a.divisor)?, &rat(&a.scalar_val)?)?;
    Ok(Output::json(&schema::plfunction_to_json(&sk, &f)))
}

fn trop_cmd(a: &TropArgs) -> anyhow::Result<Output> {
    let sk = load_skeleton(&a.skeleton)?;
    if !a.scalar_vals.is_empty() && a.scalar_vals.len() != a.divisors.len() {
        bail!("give one --scalar-val per --divisor, or none");
    }
    let coords = a
        .divisors
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let c = a.scalar_vals.get(i).map(|s| rat(s)).transpose()?.unwrap_or_else(Rat::zero);
            potential_of(&sk, &divisor(d)?, &c)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let (tc, rep) = trop_map(&sk, &coords)?;
    let tc = if a.merge_collinear { tc.merge_collinear() } else { tc };
    if let Some(path) = &a.expansions {
        let text = serde_json::to_string_pretty(&schema::expansion_report_to_json(&rep))? + "\n";
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Output::json(&schema::complex_to_json(&tc)))
}

fn newton_cmd(a: &NewtonArgs) -> anyhow::Result<Output> {
    if let Some(path) = &a.polygon_from {
        let polygon = newton_polygon_from_curve(&load_complex(path)?, a.degree)?;
        return Ok(Output::json(&schema::polygon_to_json(&polygon)));
    }
    let tp = match (&a.poly, &a.input) {
        (Some(src), None) => Polynomial::parse(src, a.dehomogenize)?.tropicalize()?,
        (None, Some(path)) => schema::troppoly_from_json(&read_json(path)?)?,
        _ => bail!("give exactly one of --poly, --input or --polygon-from"),
    };
    let sub = dual_subdivision(&tp);
    let cert = duality_certificate(&tp, &sub);
    if !cert.ok {
        eprintln!("duality check failed: {:?}", cert.failures);
    }
    let tc = corner_locus_of(&sub)?;
    let tc = if a.no_merge { tc } else { tc.merge_collinear() };
    Ok(Output { passed: cert.ok, ..Output::json(&schema::complex_to_json(&tc)) })
}

fn certify_cmd(a: &CertifyArgs) -> anyhow::Result<Output> {
    let tc = load_complex(&a.complex)?;
    let chosen = [a.faithful.is_some(), a.kmm.is_some(), a.vertex.is_some(), a.well_spaced.is_some()];
    if chosen.iter().filter(|&&c| c).count() != 1 {
        bail!("choose exactly one of --faithful, --kmm, --vertex, --well-spaced");
    }
    let cert: Certificate = if let Some(g) = a.faithful {
        certify_faithful(&tc, g)
    } else if let Some(j) = &a.kmm {
        kmm_check(&tc, &rat(j)?)?
    } else if let Some(v) = a.vertex {
        if v >= tc.vertices.len() {
            bail!("vertex {v} out of range");
        }
        vertex_mult_one(&tc, v)
    } else {
        let text = a.well_spaced.as_deref().unwrap_or_default();
        let (normal, level) = text.split_once(':').ok_or_else(|| anyhow!("expected `n1,n2,...:level`"))?;
        let normal = normal
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| anyhow!("bad normal entry `{x}`")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        well_spaced_check(&tc, &normal, &rat(level)?)?
    };
    let passed = cert.verdict != Verdict::Refuted;
    Ok(Output { passed, ..Output::json(&schema::certificate_to_json(&cert)) })
}

fn parse_matrix(s: &str) -> anyhow::Result<Vec<Vec<i64>>> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| anyhow!("bad matrix entry `{x}`")))
                .collect()
        })
        .collect()
}

fn pushforward_cmd(a: &PushforwardArgs) -> anyhow::Result<Output> {
    let tc = load_complex(&a.complex)?;
    let map = match (&a.matrix, &a.map) {
        (Some(m), None) => LatticeMap::new(parse_matrix(m)?, a.degree)?,
        (None, Some(path)) => schema::latticemap_from_json(&read_json(path)?)?,
        _ => bail!("give exactly one of --matrix or --map"),
    };
    let (img, _) = pushforward(&tc, &map)?;
    let img = if a.merge_collinear { img.merge_collinear() } else { img };
    Ok(Output::json(&schema::complex_to_json(&img)))
}

fn write_artifacts(dir: &Path, rep: &ScenarioReport) -> anyhow::Result<()> {
    let dir = dir.join(&rep.name);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for art in &rep.artifacts {
        std::fs::write(dir.join(&art.file_name), &art.contents)?;
    }
    let report = serde_json::to_string_pretty(rep)? + "\n";
    std::fs::write(dir.join("report.json"), report)?;
    Ok(())
}

fn describe(rep: &ScenarioReport, text: &mut String) {
    let verdict = if rep.passed() { "PASS" } else { "FAIL" };
    text.push_str(&format!("{verdict} {} ({} ms)\n", rep.name, rep.elapsed.as_millis()));
    for c in &rep.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        text.push_str(&format!("  {mark} {}: {}", c.field, c.computed));
        if !c.passed {
            text.push_str(&format!(" (expected {})", c.expected));
        }
        text.push('\n');
    }
}

fn scenario_cmd(a: &ScenarioArgs) -> anyhow::Result<Output> {
    if a.list {
        let text = list().iter().map(|(n, s)| format!("{n:<28}{s}\n")).collect();
        return Ok(Output { text, passed: true });
    }
    let results: Vec<(String, tropskel::Result<ScenarioReport>)> = match (&a.name, a.all) {
        (Some(n), false) => vec![(n.clone(), run_scenario(n))],
        (None, true) => run_all().into_iter().map(|(n, r)| (n.to_string(), r)).collect(),
        _ => bail!("give a scenario name, --all or --list"),
    };
    let out_dir = a.out_dir.clone().or_else(|| std::env::var_os(OUT_DIR_VAR).map(PathBuf::from));
    let mut reports = Vec::new();
    for (name, res) in results {
        match res {
            Ok(rep) => reports.push(rep),
            Err(e @ tropskel::Error::UnknownScenario(_)) => return Err(e.into()),
            Err(e) => bail!("scenario {name} failed to run: {e}"),
        }
    }
    if let Some(dir) = &out_dir {
        for rep in &reports {
            write_artifacts(dir, rep)?;
        }
    }
    let passed = reports.iter().all(ScenarioReport::passed);
    let text = if a.json {
        serde_json::to_string_pretty(&json!(reports))? + "\n"
    } else {
        let mut text = String::new();
        for rep in &reports {
            describe(rep, &mut text);
        }
        let ok = reports.iter().filter(|r| r.passed()).count();
        text.push_str(&format!("{ok}/{} scenarios passed\n", reports.len()));
        text
    };
    Ok(Output { text, passed })
}

fn render_cmd(a: &RenderArgs) -> anyhow::Result<Output> {
    let text = match (&a.complex, &a.skeleton) {
        (Some(path), None) => render_complex_svg(&load_complex(path)?)?,
        (None, Some(path)) => render_skeleton_svg(&load_skeleton(path)?),
        _ => bail!("give exactly one of --complex or --skeleton"),
    };
    Ok(Output { text, passed: true })
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Skeleton(a) => skeleton_cmd(a),
        Command::Potential(a) => potential_cmd(a),
        Command::Trop(a) => trop_cmd(a),
        Command::Newton(a) => newton_cmd(a),
        Command::Certify(a) => certify_cmd(a),
        Command::Pushforward(a) => pushforward_cmd(a),
        Command::Scenario(a) => scenario_cmd(a),
        Command::Render(a) => render_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &out.text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{}", out.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

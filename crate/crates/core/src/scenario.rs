//! Registry of worked examples run end to end against their known answers.

use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::Value;

use crate::certify::{certify_faithful, kmm_check, vertex_mult_one, Verdict};
use crate::complex::TropicalComplex;
use crate::elimination::{newton_polygon_from_curve, pushforward, LatticeMap, LatticePolygon};
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::lattice::{IntVec, Point};
use crate::newton::{corner_locus_of, crosscheck, dual_subdivision, duality_certificate, Exp, Polynomial};
use crate::potential::{solve_p1_function, solve_slope, Divisor, PLFunction};
use crate::render::{render_complex_svg, render_skeleton_svg};
use crate::schema;
use crate::skeleton::{build_p1_skeleton, build_tate_skeleton, Puncture, Skeleton};
use crate::tropicalize::{image_cycle_length, trop_map, EdgeExpansionReport};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Stated with the published example.
    Published,
    /// Holds by construction of the input.
    Immediate,
    /// Worked out independently of the pipeline under test.
    Computed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldCheck {
    pub field: String,
    pub basis: Basis,
    pub expected: Value,
    pub computed: Value,
    pub passed: bool,
}

/// A file produced by a scenario (JSON or SVG text).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub summary: String,
    pub checks: Vec<FieldCheck>,
    #[serde(skip)]
    pub artifacts: Vec<Artifact>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    run: fn(&mut Run) -> Result<()>,
}

#[derive(Default)]
struct Run {
    checks: Vec<FieldCheck>,
    artifacts: Vec<Artifact>,
}

impl Run {
    fn check<T: Serialize + PartialEq>(&mut self, field: &str, basis: Basis, expected: T, computed: T) {
        let passed = expected == computed;
        self.checks.push(FieldCheck {
            field: field.to_string(),
            basis,
            expected: serde_json::to_value(&expected).unwrap_or(Value::Null),
            computed: serde_json::to_value(&computed).unwrap_or(Value::Null),
            passed,
        });
    }

    fn json(&mut self, name: &str, v: &Value) {
        let contents = serde_json::to_string_pretty(v).unwrap_or_default() + "\n";
        self.artifacts.push(Artifact { file_name: format!("{name}.json"), contents });
    }

    fn svg(&mut self, name: &str, contents: String) {
        self.artifacts.push(Artifact { file_name: format!("{name}.svg"), contents });
    }

    /// JSON for the complex, plus a drawing when it is planar.
    fn complex(&mut self, name: &str, tc: &TropicalComplex) -> Result<()> {
        self.json(name, &schema::complex_to_json(tc));
        if tc.dim == 2 {
            self.svg(name, render_complex_svg(tc)?);
        }
        Ok(())
    }

    fn skeleton(&mut self, sk: &Skeleton) {
        self.json("skeleton", &schema::skeleton_to_json(sk));
        self.svg("skeleton", render_skeleton_svg(sk));
    }
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn point(xs: &[Rat]) -> Point {
    xs.to_vec()
}

fn ipoint(xs: &[i64]) -> Point {
    xs.iter().map(|&x| Rat::from_int(x)).collect()
}

/// Rays as sorted `(base point, direction, multiplicity)` triples.
fn ray_list(tc: &TropicalComplex) -> Vec<(Point, IntVec, u64)> {
    let mut out: Vec<_> = tc.rays.iter().map(|r| (tc.vertices[r.base].clone(), r.dir.clone(), r.mult)).collect();
    out.sort();
    out
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn segment_mults(tc: &TropicalComplex) -> Vec<u64> {
    sorted(tc.segments.iter().map(|s| s.mult).collect())
}

fn ray_mults(tc: &TropicalComplex) -> Vec<u64> {
    sorted(tc.rays.iter().map(|r| r.mult).collect())
}

/// Lengths and multiplicities of the segments on cycles.
fn cycle_sides(tc: &TropicalComplex) -> Vec<(Rat, u64)> {
    sorted(tc.cycle_segments().into_iter().map(|i| (tc.segment_length(i), tc.segments[i].mult)).collect())
}

fn cycle_length(tc: &TropicalComplex) -> Rat {
    tc.cycle_segments().into_iter().map(|i| tc.segment_length(i)).sum()
}

fn p1(points: &[(&str, &str)]) -> Result<Skeleton> {
    let ps = points
        .iter()
        .map(|(id, lit)| Ok(Puncture::new(*id, lit.parse()?)))
        .collect::<Result<Vec<_>>>()?;
    build_p1_skeleton(&ps, true)
}

fn tate(length: &Rat, points: &[(&str, Rat)]) -> Result<Skeleton> {
    let ps: Vec<(String, Rat)> = points.iter().map(|(id, x)| (id.to_string(), x.clone())).collect();
    build_tate_skeleton(length, &ps)
}

fn div(entries: &[(&str, i64)]) -> Divisor {
    Divisor::new(entries.iter().copied())
}

fn trop(run: &mut Run, sk: &Skeleton, coords: &[PLFunction]) -> Result<(TropicalComplex, EdgeExpansionReport)> {
    let (tc, rep) = trop_map(sk, coords)?;
    run.json("expansions", &schema::expansion_report_to_json(&rep));
    let merged = tc.merge_collinear();
    run.complex("tropicalization", &merged)?;
    Ok((merged, rep))
}

fn implicit(run: &mut Run, src: &str, dehomogenize: bool) -> Result<TropicalComplex> {
    let tp = Polynomial::parse(src, dehomogenize)?.tropicalize()?;
    run.json("troppoly", &schema::troppoly_to_json(&tp));
    let sub = dual_subdivision(&tp);
    run.check("duality certificate", Basis::Immediate, true, duality_certificate(&tp, &sub).ok);
    let tc = corner_locus_of(&sub)?.merge_collinear();
    run.complex("corner_locus", &tc)?;
    Ok(tc)
}

fn balanced(run: &mut Run, tc: &TropicalComplex, basis: Basis) {
    run.check("balancing residuals vanish", basis, true, tc.check_balancing().passed());
}

const EXAMPLE1_POLY: &str = "y^2 + (2-p)*y - x - (p-1)";

fn example1_parametric_complex(run: &mut Run) -> Result<(TropicalComplex, EdgeExpansionReport, Skeleton)> {
    let sk = p1(&[("0", "0"), ("1", "1"), ("p", "p")])?;
    run.skeleton(&sk);
    let x = solve_p1_function(&sk, &div(&[("0", 1), ("p", 1), ("inf", -2)]), &Rat::zero())?;
    let y = solve_p1_function(&sk, &div(&[("1", 1), ("inf", -1)]), &Rat::zero())?;
    let (tc, rep) = trop(run, &sk, &[x, y])?;
    Ok((tc, rep, sk))
}

fn example1_rays() -> Vec<(Point, IntVec, u64)> {
    let o = ipoint(&[0, 0]);
    sorted(vec![(o.clone(), vec![1, 0], 2), (o.clone(), vec![0, 1], 1), (o, vec![-2, -1], 1)])
}

fn example1_parametric(run: &mut Run) -> Result<()> {
    let (tc, rep, sk) = example1_parametric_complex(run)?;
    run.check("skeleton edge lengths", Basis::Published, vec![r(1, 1)], sk.edges.iter().map(|e| e.length.clone()).collect());
    run.check("edge expansion factors", Basis::Published, vec![2], rep.edge_expansions());
    run.check("rays", Basis::Published, example1_rays(), ray_list(&tc));
    run.check("bounded segments", Basis::Published, 0, tc.segments.len());
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

fn example1_implicit(run: &mut Run) -> Result<()> {
    let tc = implicit(run, EXAMPLE1_POLY, false)?;
    run.check("rays", Basis::Published, example1_rays(), ray_list(&tc));
    let polygon = newton_polygon_from_curve(&tc, 1)?;
    run.json("polygon", &schema::polygon_to_json(&polygon));
    run.check("Newton polygon from the curve", Basis::Published, vec![(0, 0), (1, 0), (0, 2)], polygon.vertices);
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

fn example1_crosscheck(run: &mut Run) -> Result<()> {
    let (param, _, _) = example1_parametric_complex(run)?;
    let imp = implicit(run, EXAMPLE1_POLY, false)?;
    let cc = crosscheck(&param, &imp);
    run.check("parametric equals implicit", Basis::Published, true, cc.equal);
    Ok(())
}

fn dustineg(run: &mut Run) -> Result<()> {
    let sk = p1(&[
        ("Q1", "t^(1/3)"),
        ("Q2", "2*t^(1/3)"),
        ("Q3", "3*t^(1/3)"),
        ("P1", "t^(1/2)"),
        ("P2", "-t^(1/2)"),
        ("m1", "-1"),
    ])?;
    run.skeleton(&sk);
    let x = solve_p1_function(&sk, &div(&[("Q1", 1), ("Q2", 1), ("Q3", 1), ("inf", -3)]), &r(-1, 1))?;
    let y = solve_p1_function(&sk, &div(&[("P1", 1), ("P2", 1), ("inf", -2)]), &r(-1, 1))?;
    let z = solve_p1_function(&sk, &div(&[("m1", 1), ("inf", -1)]), &Rat::zero())?;
    let (tc, _) = trop(run, &sk, &[x, y, z])?;
    let v1 = point(&[r(-1, 1), r(-1, 1), r(0, 1)]);
    let v2 = point(&[r(0, 1), r(-1, 3), r(0, 1)]);
    run.check("vertices", Basis::Published, vec![v1.clone(), v2.clone()], tc.vertices.clone());
    run.check("segment multiplicities", Basis::Published, vec![1], segment_mults(&tc));
    let rays = sorted(vec![
        (v1.clone(), vec![0, 0, 1], 1),
        (v1, vec![-3, -2, -1], 1),
        (v2.clone(), vec![0, 1, 0], 2),
        (v2, vec![1, 0, 0], 3),
    ]);
    run.check("rays", Basis::Published, rays, ray_list(&tc));
    run.check("ray multiplicities", Basis::Published, vec![1, 1, 2, 3], ray_mults(&tc));
    balanced(run, &tc, Basis::Published);
    Ok(())
}

fn example2b(run: &mut Run) -> Result<()> {
    let l = r(4, 1);
    let sk = tate(
        &l,
        &[("inf", r(0, 1)), ("P3", r(0, 1)), ("Q1", r(2, 1)), ("Q2", r(2, 1)), ("P1", r(2, 1)), ("P2", r(2, 1))],
    )?;
    run.skeleton(&sk);
    let x = solve_slope(&sk, &div(&[("Q1", 1), ("Q2", 1), ("inf", -2)]))?;
    let y = solve_slope(&sk, &div(&[("P1", 1), ("P2", 1), ("P3", 1), ("inf", -3)]))?;
    let (tc, rep) = trop(run, &sk, &[x, y])?;
    run.check("circle length", Basis::Published, l, sk.loop_length.clone().unwrap_or_default());
    run.check("edge expansion factors", Basis::Computed, vec![1, 1], rep.edge_expansions());
    let segs: Vec<(Rat, u64)> = (0..tc.segments.len()).map(|i| (tc.segment_length(i), tc.segments[i].mult)).collect();
    run.check("image segment (lattice length, multiplicity)", Basis::Published, vec![(r(2, 1), 2)], segs);
    run.check("ray multiplicities", Basis::Published, vec![1, 1, 2, 2], ray_mults(&tc));
    run.check("first Betti number of the image", Basis::Published, 0, tc.betti_one()?);
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

fn example2a(run: &mut Run) -> Result<()> {
    let tc = implicit(run, "x^2*y + x*y^2 + (1/t)*x*y + x + y", false)?;
    run.check("cycle sides (lattice length, multiplicity)", Basis::Published, vec![(r(2, 1), 1); 4], cycle_sides(&tc));
    run.check("cycle length", Basis::Published, r(8, 1), cycle_length(&tc));
    let mut all = segment_mults(&tc);
    all.extend(ray_mults(&tc));
    run.check("every multiplicity is 1", Basis::Published, true, all.iter().all(|&m| m == 1));
    let cert = kmm_check(&tc, &r(-8, 1))?;
    run.json("kmm_certificate", &schema::certificate_to_json(&cert));
    run.check("cycle length versus -val(j) = 8", Basis::Published, Verdict::Certified, cert.verdict);
    let svg = render_complex_svg(&tc)?;
    run.check("side labels in the drawing", Basis::Published, 4, svg.matches(">2</text>").count());
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

fn example3_newton(run: &mut Run) -> Result<()> {
    let tc = implicit(run, "x^3*y - x^2*y^2 - 2*x*y^3 - 3*x^2*y*z + 2*x*y*z^2 - p*z^4", true)?;
    let (o, a, b) = (ipoint(&[0, 0]), ipoint(&[1, 0]), ipoint(&[0, 1]));
    run.check("vertices", Basis::Published, sorted(vec![o.clone(), a.clone(), b.clone()]), sorted(tc.vertices.clone()));
    let rays = sorted(vec![(o.clone(), vec![-1, -1], 2), (a, vec![3, -1], 1), (b, vec![-1, 3], 1)]);
    run.check("rays", Basis::Published, rays, ray_list(&tc));
    let at_origin = tc.vertex_index(&o).map(|v| sorted(tc.incidences(v).iter().map(|i| i.mult).collect())).unwrap_or_default();
    run.check("multiplicities at (0,0)", Basis::Published, vec![2, 2, 2], at_origin);
    run.check("segment multiplicities", Basis::Published, vec![1, 2, 2], segment_mults(&tc));
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

const GENUS3_POLY: &str = "t^4*x^4 + t^4*y^4 + t^4*z^4 + t^2*x^3*y + t^2*x^3*z + t^2*x*y^3 + t^2*x*z^3 \
    + t^2*y^3*z + t^2*y*z^3 + t*x^2*y^2 + t*x^2*z^2 + t*y^2*z^2 + x^2*y*z + x*y^2*z + x*y*z^2";

fn genus3_faithful(run: &mut Run) -> Result<()> {
    let tp = Polynomial::parse(GENUS3_POLY, true)?.tropicalize()?;
    let sub = dual_subdivision(&tp);
    // At each corner of the quartic triangle the four heights 4, 2, 2, 0 lie
    // on one plane, so the Newton complex keeps three unit squares and the
    // curve has three four-valent crossings.
    let squares = sub.cells.iter().filter(|c| c.polygon.len() == 4).count();
    run.check("unit squares in the Newton complex", Basis::Computed, 3, squares);
    run.check("Newton complex is a unimodular triangulation", Basis::Computed, false, sub.is_unimodular());
    let tc = implicit(run, GENUS3_POLY, true)?;
    run.check("first Betti number", Basis::Published, 3, tc.betti_one()?);
    let mut all = segment_mults(&tc);
    all.extend(ray_mults(&tc));
    run.check("every multiplicity is 1", Basis::Published, true, all.iter().all(|&m| m == 1));
    let cert = certify_faithful(&tc, 3);
    run.json("faithful_certificate", &schema::certificate_to_json(&cert));
    run.check("faithfulness for genus 3 (crossings block the certificate)", Basis::Computed, Verdict::NotCertified, cert.verdict);
    balanced(run, &tc, Basis::Immediate);

    // Raising the corner valuations to 5 splits each square along its
    // anti-diagonal, and the certificate goes through.
    let lifted = GENUS3_POLY.replace("t^4", "t^5");
    let tp = Polynomial::parse(&lifted, true)?.tropicalize()?;
    run.check("lifted corners: unimodular triangulation", Basis::Computed, true, dual_subdivision(&tp).is_unimodular());
    let tc = corner_locus_of(&dual_subdivision(&tp))?.merge_collinear();
    run.complex("corner_locus_lifted", &tc)?;
    run.check("lifted corners: first Betti number", Basis::Computed, 3, tc.betti_one()?);
    let cert = certify_faithful(&tc, 3);
    run.json("faithful_certificate_lifted", &schema::certificate_to_json(&cert));
    run.check("lifted corners: faithfulness for genus 3", Basis::Computed, Verdict::Certified, cert.verdict);
    Ok(())
}

fn faithful_countereg(run: &mut Run) -> Result<()> {
    // (y-1)^2 = (x-1)^2 (y+1) + t x y, expanded.
    let tc = implicit(run, "y^2 - 3*y - x^2*y - x^2 + (2-t)*x*y + 2*x", false)?;
    let mut all = segment_mults(&tc);
    all.extend(ray_mults(&tc));
    run.check("every multiplicity is 1", Basis::Published, true, all.iter().all(|&m| m == 1));
    run.check("first Betti number", Basis::Published, 0, tc.betti_one()?);
    let cert = certify_faithful(&tc, 1);
    run.json("faithful_certificate", &schema::certificate_to_json(&cert));
    run.check("faithfulness for genus 1", Basis::Published, Verdict::NotCertified, cert.verdict);
    Ok(())
}

/// Circle length used by the genus one constructions.
const GOOD_LENGTH: (i64, i64) = (7, 2);

fn goodgenus1trop(run: &mut Run) -> Result<()> {
    let l = r(GOOD_LENGTH.0, GOOD_LENGTH.1);
    let third = &l / &r(3, 1);
    let sk = tate(&l, &[("0", r(0, 1)), ("alpha", third.clone()), ("beta", &third + &third)])?;
    run.skeleton(&sk);
    let f = solve_slope(&sk, &div(&[("alpha", 2), ("beta", -1), ("0", -1)]))?;
    let g = solve_slope(&sk, &div(&[("beta", 2), ("alpha", -1), ("0", -1)]))?;
    let (tc, rep) = trop(run, &sk, &[f, g])?;
    run.check("edge expansion factors", Basis::Published, vec![1, 1, 1], rep.edge_expansions());
    run.check("cycle sides (lattice length, multiplicity)", Basis::Published, vec![(third.clone(), 1); 3], cycle_sides(&tc));
    run.check("ray multiplicities", Basis::Published, vec![1, 1, 1], ray_mults(&tc));
    let faithful = certify_faithful(&tc, 1);
    run.json("faithful_certificate", &schema::certificate_to_json(&faithful));
    run.check("faithfulness for genus 1", Basis::Published, Verdict::Certified, faithful.verdict);
    let kmm = kmm_check(&tc, &-&l)?;
    run.json("kmm_certificate", &schema::certificate_to_json(&kmm));
    run.check("cycle length versus -val(j)", Basis::Published, Verdict::Certified, kmm.verdict);
    // The image satisfies x^2 y + x y^2 + x y = d with val(d) = l/3.
    let src = format!("x^2*y + x*y^2 + x*y - t^({})", third.to_fraction_string());
    let imp = implicit(run, &src, false)?;
    run.check("agrees with the cubic x^2y + xy^2 + xy = d", Basis::Computed, true, crosscheck(&tc, &imp).equal);
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

/// Circle length used by the degenerate embeddings.
const BAD_LENGTH: (i64, i64) = (5, 1);

/// The circle with `0, P, Q` retracting to `O` and `alpha, beta, gamma` at
/// the other quarter points `A, B, C`.
fn quartered() -> Result<(Rat, Skeleton)> {
    let l = r(BAD_LENGTH.0, BAD_LENGTH.1);
    let q = &l / &r(4, 1);
    let sk = tate(
        &l,
        &[
            ("0", r(0, 1)),
            ("P", r(0, 1)),
            ("Q", r(0, 1)),
            ("alpha", q.clone()),
            ("beta", &q * &r(2, 1)),
            ("gamma", &q * &r(3, 1)),
        ],
    )?;
    Ok((l, sk))
}

/// Slopes of `f` along `O -> A -> B -> C -> O`.
fn arc_slopes(f: &PLFunction) -> IntVec {
    f.edge_slopes.clone()
}

fn x_prime(sk: &Skeleton) -> Result<PLFunction> {
    solve_slope(sk, &div(&[("P", 2), ("0", -2)]))
}

fn y_prime(sk: &Skeleton) -> Result<PLFunction> {
    solve_slope(sk, &div(&[("Q", 3), ("0", -3)]))
}

fn f2(sk: &Skeleton) -> Result<PLFunction> {
    solve_slope(sk, &div(&[("beta", 3), ("gamma", -2), ("0", -1)]))
}

fn cycle_image_length(sk: &Skeleton, rep: &EdgeExpansionReport) -> Rat {
    image_cycle_length(sk, rep, &(0..sk.edges.len()).collect::<Vec<_>>())
}

fn badgenus1_case1(run: &mut Run) -> Result<()> {
    let (_, sk) = quartered()?;
    run.skeleton(&sk);
    let (tc, rep) = trop(run, &sk, &[x_prime(&sk)?, y_prime(&sk)?])?;
    run.check("edge expansion factors", Basis::Published, vec![0; 4], rep.edge_expansions());
    run.check("cycle image length", Basis::Published, Rat::zero(), cycle_image_length(&sk, &rep));
    run.check("image of the circle is one point", Basis::Published, 1, tc.vertices.len());
    let o = ipoint(&[0, 0]);
    let rays = sorted(vec![(o.clone(), vec![1, 0], 2), (o.clone(), vec![0, 1], 3), (o, vec![-2, -3], 1)]);
    run.check("rays", Basis::Computed, rays, ray_list(&tc));
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

fn badgenus1_case2(run: &mut Run) -> Result<()> {
    let (l, sk) = quartered()?;
    run.skeleton(&sk);
    let f1 = solve_slope(&sk, &div(&[("alpha", 1), ("beta", 1), ("gamma", -1), ("0", -1)]))?;
    let f2 = f2(&sk)?;
    let (tc, rep) = trop(run, &sk, &[f1, f2])?;
    run.check("edge expansion factors", Basis::Published, vec![1, 1, 1, 0], rep.edge_expansions());
    let q = &l / &r(4, 1);
    run.check("cycle image length", Basis::Published, &q * &r(3, 1), cycle_image_length(&sk, &rep));
    run.check("cycle sides (lattice length, multiplicity)", Basis::Published, vec![(q, 1); 3], cycle_sides(&tc));
    let mut all = segment_mults(&tc);
    all.extend(ray_mults(&tc));
    run.check("every multiplicity is 1", Basis::Published, true, all.iter().all(|&m| m == 1));
    let w0 = tc.vertex_index(&ipoint(&[0, 0]));
    run.check("valence at trop(O) = trop(C)", Basis::Published, Some(4), w0.map(|v| tc.valence(v)));
    let cert = w0.map(|v| vertex_mult_one(&tc, v).verdict);
    run.check("multiplicity one not certified at trop(O)", Basis::Published, Some(Verdict::NotCertified), cert);
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

fn badgenus1_case3(run: &mut Run) -> Result<()> {
    let (l, sk) = quartered()?;
    run.skeleton(&sk);
    let f3 = solve_slope(&sk, &div(&[("beta", 3), ("gamma", 1), ("alpha", -1), ("0", -3)]))?;
    run.check("slopes of f3 along O, A, B, C", Basis::Published, vec![1, 2, -1, -2], arc_slopes(&f3));
    let (tc, rep) = trop(run, &sk, &[x_prime(&sk)?, y_prime(&sk)?, f2(&sk)?, f3])?;
    run.check("edge expansion factors", Basis::Published, vec![1, 1, 1, 2], rep.edge_expansions());
    let target = &l * &r(5, 4);
    run.check("cycle image length", Basis::Published, target.clone(), cycle_image_length(&sk, &rep));
    run.check("cycle length in the image", Basis::Published, target, cycle_length(&tc));
    run.check("cycle sides", Basis::Published, 4, tc.cycle_segments().len());
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

fn badgenus1_case4(run: &mut Run) -> Result<()> {
    let (l, sk) = quartered()?;
    run.skeleton(&sk);
    let f4 = solve_slope(&sk, &div(&[("beta", 7), ("alpha", -2), ("gamma", -4), ("0", -1)]))?;
    run.check("slopes of f4 along O, A, B, C", Basis::Published, vec![1, 3, -4, 0], arc_slopes(&f4));
    let (tc, rep) = trop(run, &sk, &[x_prime(&sk)?, y_prime(&sk)?, f2(&sk)?, f4])?;
    run.check("edge expansion factors", Basis::Published, vec![1, 1, 2, 0], rep.edge_expansions());
    run.check("cycle length in the image", Basis::Published, l.clone(), cycle_length(&tc));
    let q = &l / &r(4, 1);
    let sides = sorted(vec![(q.clone(), 1), (q, 1), (&l / &r(2, 1), 2)]);
    run.check("cycle sides (lattice length, multiplicity)", Basis::Published, sides, cycle_sides(&tc));
    let faithful = certify_faithful(&tc, 1);
    run.check("faithfulness for genus 1", Basis::Published, Verdict::NotCertified, faithful.verdict);
    balanced(run, &tc, Basis::Immediate);
    Ok(())
}

fn fakehomology_skeleton() -> Result<Skeleton> {
    p1(&[("0", "0"), ("1", "1"), ("p", "p"), ("p2", "p^2")])
}

fn fakehomology(run: &mut Run) -> Result<()> {
    let sk = fakehomology_skeleton()?;
    run.skeleton(&sk);
    let x = solve_p1_function(&sk, &div(&[("0", 2), ("1", 2), ("p2", 1), ("inf", -5)]), &Rat::zero())?;
    let y = solve_p1_function(&sk, &div(&[("0", 1), ("1", 1), ("p", 1), ("inf", -3)]), &Rat::zero())?;
    let z = solve_p1_function(&sk, &div(&[("0", 1), ("inf", -1)]), &Rat::zero())?;
    run.check("skeleton is a tree", Basis::Immediate, 0, sk.betti_number());
    let (plane, _) = trop(run, &sk, &[x.clone(), y.clone()])?;
    run.check("first Betti number of the plane image", Basis::Published, 1, plane.betti_one()?);
    balanced(run, &plane, Basis::Immediate);
    let (space, rep) = trop_map(&sk, &[x, y, z])?;
    let space = space.merge_collinear();
    run.json("with_z", &schema::complex_to_json(&space));
    run.check("first Betti number with z = t", Basis::Published, 0, space.betti_one()?);
    let ones = rep.edges.iter().chain(&rep.rays).all(|e| e.expansion == 1);
    run.check("with z = t every expansion factor is 1", Basis::Published, true, ones);
    run.check("with z = t distinct vertices stay distinct", Basis::Published, sk.vertices.len(), space.vertices.len());
    Ok(())
}

fn st_line(run: &mut Run) -> Result<()> {
    let line = implicit(run, "x + y + 1", false)?;
    let map = LatticeMap::new(vec![vec![1, 1]], 1)?;
    run.json("map", &schema::latticemap_to_json(&map));
    let (img, rep) = pushforward(&line, &map)?;
    run.json("image", &schema::complex_to_json(&img));
    let o = ipoint(&[0]);
    run.check("image rays", Basis::Computed, vec![(o.clone(), vec![-1], 2), (o, vec![1], 2)], ray_list(&img));
    run.check("collapsed cells", Basis::Computed, 0, rep.collapsed_rays.len() + rep.collapsed_segments.len());
    balanced(run, &img, Basis::Immediate);
    Ok(())
}

fn st_cartwright(run: &mut Run) -> Result<()> {
    let sk = p1(&[
        ("Q1", "t^(1/3)"),
        ("Q2", "2*t^(1/3)"),
        ("Q3", "3*t^(1/3)"),
        ("P1", "t^(1/2)"),
        ("P2", "-t^(1/2)"),
        ("m1", "-1"),
    ])?;
    let x = solve_p1_function(&sk, &div(&[("Q1", 1), ("Q2", 1), ("Q3", 1), ("inf", -3)]), &r(-1, 1))?;
    let y = solve_p1_function(&sk, &div(&[("P1", 1), ("P2", 1), ("inf", -2)]), &r(-1, 1))?;
    let z = solve_p1_function(&sk, &div(&[("m1", 1), ("inf", -1)]), &Rat::zero())?;
    let (space, _) = trop_map(&sk, &[x.clone(), y.clone(), z])?;
    let space = space.merge_collinear();
    let map = LatticeMap::new(vec![vec![1, 0, 0], vec![0, 1, 0]], 1)?;
    run.json("map", &schema::latticemap_to_json(&map));
    let (img, rep) = pushforward(&space, &map)?;
    let img = img.merge_collinear();
    run.complex("image", &img)?;
    run.check("collapsed rays", Basis::Computed, 1, rep.collapsed_rays.len());
    // Projecting first and tropicalizing the plane curve (x, y) must agree.
    let (direct, _) = trop_map(&sk, &[x, y])?;
    run.check("agrees with tropicalizing (x, y) directly", Basis::Computed, true, crosscheck(&img, &direct.merge_collinear()).equal);
    // x and y have degrees 3 and 2 in t, so the plane curve has degree 2 in x and 3 in y.
    let polygon = newton_polygon_from_curve(&img, 1)?;
    run.json("polygon", &schema::polygon_to_json(&polygon));
    let expected: Vec<Exp> = LatticePolygon::from_points(&[(0, 0), (2, 0), (0, 3)]).vertices;
    run.check("Newton polygon of the image", Basis::Computed, expected, polygon.vertices);
    balanced(run, &img, Basis::Immediate);
    Ok(())
}

static REGISTRY: &[Scenario] = &[
    Scenario { name: "example1-parametric", summary: "t(t-p), t-1 through the slope formula", run: example1_parametric },
    Scenario { name: "example1-implicit", summary: "corner locus of y^2 + (2-p)y - x - (p-1)", run: example1_implicit },
    Scenario { name: "example1-crosscheck", summary: "parametric and implicit curves coincide", run: example1_crosscheck },
    Scenario { name: "dustineg", summary: "rational curve in 3-space with a bounded segment", run: dustineg },
    Scenario { name: "example2b", summary: "Tate curve y^2 = x^3 + x^2 + t^4 folded onto a segment", run: example2b },
    Scenario { name: "example2a", summary: "square cycle of x^2y + xy^2 + (1/t)xy + x + y", run: example2a },
    Scenario { name: "example3-newton", summary: "plane quartic with a triangle and a heavy corner", run: example3_newton },
    Scenario { name: "genus3-faithful", summary: "unimodular plane quartic of genus 3", run: genus3_faithful },
    Scenario { name: "faithful-countereg", summary: "multiplicity one everywhere but not faithful", run: faithful_countereg },
    Scenario { name: "goodgenus1trop", summary: "faithful triangle of side l/3", run: goodgenus1trop },
    Scenario { name: "badgenus1-case1", summary: "circle contracted to a point", run: badgenus1_case1 },
    Scenario { name: "badgenus1-case2", summary: "cycle of length 3l/4", run: badgenus1_case2 },
    Scenario { name: "badgenus1-case3", summary: "cycle of length 5l/4", run: badgenus1_case3 },
    Scenario { name: "badgenus1-case4", summary: "cycle of length l, not faithful", run: badgenus1_case4 },
    Scenario { name: "fakehomology", summary: "tree whose plane image has a cycle", run: fakehomology },
    Scenario { name: "st-pushforward-line", summary: "tropical line under (x, y) -> x + y", run: st_line },
    Scenario { name: "st-pushforward-cartwright", summary: "space curve projected to the plane", run: st_cartwright },
];

pub fn registry() -> &'static [Scenario] {
    REGISTRY
}

pub fn list() -> Vec<(&'static str, &'static str)> {
    REGISTRY.iter().map(|s| (s.name, s.summary)).collect()
}

pub fn run_scenario(name: &str) -> Result<ScenarioReport> {
    let sc = REGISTRY.iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownScenario(name.to_string()))?;
    let start = Instant::now();
    let mut run = Run::default();
    (sc.run)(&mut run)?;
    Ok(ScenarioReport {
        name: sc.name.to_string(),
        summary: sc.summary.to_string(),
        checks: run.checks,
        artifacts: run.artifacts,
        elapsed: start.elapsed(),
    })
}

/// Runs every scenario on its own thread; results come back in registry order.
pub fn run_all() -> Vec<(&'static str, Result<ScenarioReport>)> {
    std::thread::scope(|s| {
        let handles: Vec<_> = REGISTRY.iter().map(|sc| (sc.name, s.spawn(move || run_scenario(sc.name)))).collect();
        handles
            .into_iter()
            .map(|(n, h)| (n, h.join().unwrap_or_else(|_| Err(Error::InvalidInput(format!("scenario {n} panicked"))))))
            .collect()
    })
}

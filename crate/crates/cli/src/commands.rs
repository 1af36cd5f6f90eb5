//! Subcommand runners and their JSON reports.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hierdepth::agcode::{self, LinearCode, DEFAULT_BUDGET};
use hierdepth::bundle::parse_bundle;
use hierdepth::depth::{self, curve_split_depth, mmp_exact_depth, surface_split_depth};
use hierdepth::hecke::{self, PointFunctional, RationalPoint, SubsheafModel};
use hierdepth::picard::parse_class;
use hierdepth::{format_rational, Depth, Error, Field, Lattice, Rational, SplitBundle};

use crate::config::{self, CodeConfig};
use crate::CliError;

fn input(field: &str, message: impl ToString) -> CliError {
    CliError::Input {
        field: field.to_string(),
        message: message.to_string(),
    }
}

fn field(p: u64, name: &str) -> Result<Field, CliError> {
    Field::new(p).map_err(|e| input(name, e))
}

#[derive(Serialize)]
pub struct DepthReport {
    lattice: String,
    bundle: String,
    lambda0: String,
    /// Whether the bounds coincide; `depth` is null otherwise.
    exact: bool,
    depth: Depth,
    lower: Depth,
    upper: Depth,
}

pub fn depth(
    lattice: Lattice,
    degrees: Option<&[i64]>,
    bundle: Option<&str>,
    lambda0: &str,
) -> Result<DepthReport, CliError> {
    let b = match (degrees, bundle) {
        (Some(d), None) => match lattice {
            Lattice::Curve => SplitBundle::on_curve(d),
            Lattice::P2 => SplitBundle::on_p2(d),
            other => {
                return Err(input("--degrees", format!("use --bundle on {other}")));
            }
        }
        .map_err(|e| input("--degrees", e))?,
        (None, Some(s)) => parse_bundle(lattice, s).map_err(|e| input("--bundle", e))?,
        _ => return Err(input("--degrees", "give exactly one of --degrees and --bundle")),
    };
    let l0 = parse_class(lattice, lambda0).map_err(|e| input("--lambda0", e))?;
    let (lower, upper) = match lattice {
        Lattice::Curve => {
            let h = curve_split_depth(&b.degrees()?, l0.coeffs()[0]);
            (h, h)
        }
        _ => {
            let s = surface_split_depth(&b, &l0)?;
            (s.lower, s.upper)
        }
    };
    Ok(DepthReport {
        lattice: lattice.to_string(),
        bundle: b.to_string(),
        lambda0: l0.to_string(),
        exact: lower == upper,
        depth: if lower == upper { lower } else { Depth::NoFiltration },
        lower,
        upper,
    })
}

#[derive(Serialize)]
pub struct MmpDepthReport {
    h_min: i64,
    alpha: Vec<i64>,
    beta: Vec<i64>,
    depth: i64,
}

pub fn mmp_depth(h_min: i64, alpha: &[i64], beta: &[i64]) -> Result<MmpDepthReport, CliError> {
    Ok(MmpDepthReport {
        h_min,
        alpha: alpha.to_vec(),
        beta: beta.to_vec(),
        depth: mmp_exact_depth(h_min, alpha, beta)?,
    })
}

#[derive(Serialize)]
pub struct Routes {
    dim_start: usize,
    dim_v12: Option<usize>,
    dim_v21: Option<usize>,
    dim_joint: usize,
}

#[derive(Serialize)]
pub struct HeckeReport {
    field: u32,
    degrees: Vec<i64>,
    twist: i64,
    points: [RationalPoint; 2],
    covectors: [Vec<u32>; 2],
    overlap: bool,
    routes: Routes,
    equal: bool,
}

pub struct HeckeArgs<'a> {
    pub p: u64,
    pub degrees: &'a [i64],
    pub points: &'a [String],
    pub covectors: Option<&'a str>,
    pub twist: Option<i64>,
}

fn default_covector(r: usize, i: usize) -> Vec<i64> {
    let mut c = vec![0; r];
    c[i % r] = 1;
    c
}

pub fn hecke_verify(args: &HeckeArgs) -> Result<HeckeReport, CliError> {
    let k = field(args.p, "--field")?;
    let r = args.degrees.len();
    if r == 0 {
        return Err(input("--degrees", "at least one degree is required"));
    }
    if args.points.len() != 2 {
        return Err(input("--points", "exactly two points are required"));
    }
    let pts = args
        .points
        .iter()
        .map(|s| hecke::parse_point(k, s).map_err(|e| input("--points", e)))
        .collect::<Result<Vec<_>, _>>()?;
    let covs: Vec<Vec<i64>> = match args.covectors {
        None => vec![default_covector(r, 0), default_covector(r, 1)],
        Some(s) => s
            .split(';')
            .map(|c| {
                c.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|e| input("--covectors", e)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?,
    };
    if covs.len() != 2 || covs.iter().any(|c| c.len() != r) {
        return Err(input("--covectors", format!("expected two covectors of length {r}")));
    }
    let phis = covs
        .iter()
        .zip(&pts)
        .map(|(c, &q)| PointFunctional::new(k, q, c).map_err(|e| input("--covectors", e)))
        .collect::<Result<Vec<_>, _>>()?;
    let twist = args.twist.unwrap_or(0);
    let n = args.degrees.iter().map(|d| d.abs()).sum::<i64>() + twist + 3;
    let m = SubsheafModel::full_sections_twisted(args.degrees, twist, n, k)
        .map_err(|e| input("--twist", e))?;
    let overlap = pts[0] == pts[1];
    let rep = if overlap {
        hecke::probe_overlap(&m, &phis[0], &phis[1])?
    } else {
        hecke::commute_check(&m, &phis[0], &phis[1])?
    };
    Ok(HeckeReport {
        field: rep.field,
        degrees: rep.degrees,
        twist,
        points: [pts[0], pts[1]],
        covectors: [phis[0].covector().to_vec(), phis[1].covector().to_vec()],
        overlap,
        routes: Routes {
            dim_start: rep.dim_start,
            dim_v12: rep.dim_v12,
            dim_v21: rep.dim_v21,
            dim_joint: rep.dim_joint,
        },
        equal: rep.equal,
    })
}

#[derive(Serialize)]
pub struct HeckeRandomReport {
    field: u32,
    seed: u64,
    instances: usize,
    equal: usize,
    all_equal: bool,
}

/// Random distinct-point instances with ranks 1–4 and degrees 0–4.
pub fn hecke_random(p: u64, count: usize, seed: u64) -> Result<HeckeRandomReport, CliError> {
    let k = field(p, "--field")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equal = 0;
    for _ in 0..count {
        let r = rng.gen_range(1..=4);
        let degrees: Vec<i64> = (0..r).map(|_| rng.gen_range(0..=4)).collect();
        let mut pts = hecke::rational_points(k);
        pts.shuffle(&mut rng);
        let mut phis = Vec::new();
        for &q in &pts[..2] {
            let phi = loop {
                let c: Vec<i64> = (0..r).map(|_| rng.gen_range(0..k.p() as i64)).collect();
                if let Ok(phi) = PointFunctional::new(k, q, &c) {
                    break phi;
                }
            };
            phis.push(phi);
        }
        let t = SubsheafModel::visibility_twist(&degrees, 2);
        let m = SubsheafModel::full_sections_twisted(&degrees, t, 4 + t + 3, k)?;
        if hecke::commute_check(&m, &phis[0], &phis[1])?.equal {
            equal += 1;
        }
    }
    Ok(HeckeRandomReport {
        field: k.p(),
        seed,
        instances: count,
        equal,
        all_equal: equal == count,
    })
}

#[derive(Serialize)]
pub struct FiltrationReport {
    field: u32,
    degrees: Vec<i64>,
    lambda0: i64,
    length: Depth,
    twist: Option<i64>,
    points: Vec<RationalPoint>,
    covectors: Vec<Vec<u32>>,
    dims: Vec<usize>,
    det_degrees: Vec<i64>,
    verified: bool,
}

pub fn filtration(p: u64, degrees: &[i64], lambda0: i64) -> Result<FiltrationReport, CliError> {
    let k = field(p, "--field")?;
    if degrees.is_empty() {
        return Err(input("--degrees", "at least one degree is required"));
    }
    let mut report = FiltrationReport {
        field: k.p(),
        degrees: degrees.to_vec(),
        lambda0,
        length: Depth::NoFiltration,
        twist: None,
        points: vec![],
        covectors: vec![],
        dims: vec![],
        det_degrees: vec![],
        verified: false,
    };
    match hecke::build_curve_filtration(degrees, lambda0, k) {
        Ok(cf) => {
            let target = SplitBundle::on_curve(degrees)?;
            report.length = Depth::Length(cf.filtration.len() as i64);
            report.twist = Some(cf.twist);
            report.verified = depth::verify_filtration(&cf.filtration, &target)?;
            report.dims = cf.chain.iter().map(SubsheafModel::dim).collect();
            report.det_degrees = cf.chain.iter().map(SubsheafModel::det_degree).collect();
            report.points = cf.points;
            report.covectors = cf.covectors;
            Ok(report)
        }
        Err(Error::NegativeM(_)) => Ok(report),
        Err(e) => Err(e.into()),
    }
}

pub fn load_config(path: &str) -> Result<CodeConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input("--config", e))?;
    config::parse(&text)
}

fn build(cfg: &CodeConfig) -> Result<LinearCode, CliError> {
    let bases = cfg.bases()?;
    Ok(agcode::build_code(&bases, &cfg.points, cfg.field)?)
}

#[derive(Serialize)]
pub struct CodeBuildReport {
    p: u32,
    space: agcode::Space,
    r: usize,
    #[serde(rename = "N")]
    n_points: usize,
    n: usize,
    k: usize,
    message_dim: usize,
    section_dims: Vec<usize>,
    points: Vec<String>,
    generator: Vec<Vec<u32>>,
}

pub enum CodeBuildOutput {
    Json(CodeBuildReport),
    Text(String),
}

pub fn code_build(cfg: &CodeConfig, text: bool) -> Result<CodeBuildOutput, CliError> {
    let code = build(cfg)?;
    if text {
        return Ok(CodeBuildOutput::Text(code.generator_text()));
    }
    Ok(CodeBuildOutput::Json(CodeBuildReport {
        p: cfg.field.p(),
        space: cfg.space,
        r: code.rank(),
        n_points: code.n_points(),
        n: code.length(),
        k: code.dimension(),
        message_dim: code.message_dim(),
        section_dims: cfg.bases()?.iter().map(|b| b.dim()).collect(),
        points: code.labels().to_vec(),
        generator: code.generator().iter_rows().map(<[u32]>::to_vec).collect(),
    }))
}

/// `d_min` as an integer, or the string `"infeasible"`.
#[derive(Serialize)]
#[serde(untagged)]
pub enum Distance {
    Exact(u64),
    Infeasible(&'static str),
}

fn ratio_str(r: &Rational) -> String {
    format_rational(r)
}

#[derive(Serialize)]
pub struct MmpSummary {
    #[serde(rename = "N_after")]
    n_after: usize,
    delta_after: String,
    ratio: String,
}

#[derive(Serialize)]
pub struct CodeAnalyzeReport {
    p: u32,
    space: agcode::Space,
    r: usize,
    #[serde(rename = "N")]
    n_points: usize,
    n: usize,
    k: usize,
    d_min: Distance,
    delta: Option<String>,
    zero_blocks: Vec<usize>,
    mmp: Option<MmpSummary>,
    budget: u64,
    classes: String,
}

pub fn code_analyze(cfg: &CodeConfig, budget: Option<u64>) -> Result<CodeAnalyzeReport, CliError> {
    let mut code = build(cfg)?;
    let budget = budget.or(cfg.budget).unwrap_or(DEFAULT_BUDGET);
    let (_, zb) = agcode::zero_block_contract(&code);
    let mut report = CodeAnalyzeReport {
        p: cfg.field.p(),
        space: cfg.space,
        r: code.rank(),
        n_points: code.n_points(),
        n: code.length(),
        k: code.dimension(),
        d_min: Distance::Infeasible("infeasible"),
        delta: None,
        zero_blocks: zb.zero_blocks.clone(),
        mmp: None,
        budget,
        classes: agcode::class_count(cfg.field.p(), code.dimension()).to_string(),
    };
    match code.compute_min_distance(budget) {
        Ok(d) => {
            report.d_min = Distance::Exact(d);
            report.delta = Some(ratio_str(&agcode::normalized_distance(&code)?));
            let cmp = agcode::mmp_compare(&code, budget)?;
            report.mmp = Some(MmpSummary {
                n_after: cmp.n_after,
                delta_after: ratio_str(&cmp.delta_after),
                ratio: ratio_str(&cmp.ratio),
            });
            Ok(report)
        }
        Err(Error::Infeasible { .. }) => Ok(report),
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
pub struct MmpCompareReport {
    p: u32,
    space: agcode::Space,
    budget: u64,
    infeasible: bool,
    comparison: Option<agcode::ComparisonReport>,
}

pub fn mmp_compare(cfg: &CodeConfig, budget: Option<u64>) -> Result<MmpCompareReport, CliError> {
    let code = build(cfg)?;
    let budget = budget.or(cfg.budget).unwrap_or(DEFAULT_BUDGET);
    let mut report = MmpCompareReport {
        p: cfg.field.p(),
        space: cfg.space,
        budget,
        infeasible: false,
        comparison: None,
    };
    match agcode::mmp_compare(&code, budget) {
        Ok(c) => report.comparison = Some(c),
        Err(Error::Infeasible { .. }) => report.infeasible = true,
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

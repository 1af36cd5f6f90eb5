//! Flat `key = value` code configurations.
//!
//! ```text
//! # quadrics through [1:0:0] at ten points and two exceptional points
//! p = 5
//! space = P2
//! summand = 2 : [1:0:0]^1
//! points = all-rational
//! exclude = [1:0:0]
//! take = 10
//! exceptional = [1:0:0]@[1:0], [1:0:0]@[0:1]
//! budget = 10000000
//! ```

use hierdepth::agcode::{
    self, parse_eval_point, parse_proj_point, EvalPoint, ProjPoint, SectionBasis, Space,
    VanishingCondition,
};
use hierdepth::Field;

use crate::CliError;

#[derive(Debug, Clone)]
pub struct CodeConfig {
    pub field: Field,
    pub space: Space,
    pub summands: Vec<(u32, Vec<VanishingCondition>)>,
    pub points: Vec<EvalPoint>,
    pub budget: Option<u64>,
}

impl CodeConfig {
    pub fn bases(&self) -> hierdepth::Result<Vec<SectionBasis>> {
        self.summands
            .iter()
            .map(|(d, conds)| agcode::vanishing_basis(*d, conds, self.space, self.field))
            .collect()
    }
}

enum PointSource {
    AllRational,
    Listed(Vec<String>),
}

fn input(field: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Input {
        field: field.into(),
        message: message.to_string(),
    }
}

/// Splits on commas that are not inside brackets.
fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn parse_condition(field: Field, space: Space, s: &str) -> hierdepth::Result<VanishingCondition> {
    let (pt, order) = match s.rsplit_once('^') {
        Some((pt, o)) => (
            pt,
            o.trim().parse::<u32>().map_err(|_| hierdepth::Error::Parse {
                what: "vanishing order",
                input: s.to_string(),
            })?,
        ),
        None => (s, 1),
    };
    VanishingCondition::new(parse_proj_point(field, space, pt)?, order)
}

pub fn parse(text: &str) -> Result<CodeConfig, CliError> {
    let mut p = None;
    let mut space = None;
    let mut summands_raw: Vec<(usize, String)> = Vec::new();
    let mut points = None;
    let mut exclude: Vec<(usize, String)> = Vec::new();
    let mut take = None;
    let mut exceptional: Vec<(usize, String)> = Vec::new();
    let mut budget = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n = idx + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| input(format!("line {n}"), "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let name = |k: &str| format!("{k} (line {n})");
        match key {
            "p" => p = Some(value.parse::<u64>().map_err(|e| input(name(key), e))?),
            "space" => space = Some(value.parse::<Space>().map_err(|e| input(name(key), e))?),
            "summand" => summands_raw.push((n, value.to_string())),
            "points" => {
                points = Some(if value == "all-rational" {
                    PointSource::AllRational
                } else {
                    PointSource::Listed(split_list(value))
                })
            }
            "exclude" => exclude.extend(split_list(value).into_iter().map(|v| (n, v))),
            "take" => take = Some(value.parse::<usize>().map_err(|e| input(name(key), e))?),
            "exceptional" => exceptional.extend(split_list(value).into_iter().map(|v| (n, v))),
            "budget" => budget = Some(value.parse::<u64>().map_err(|e| input(name(key), e))?),
            other => return Err(input(name(other), "unknown key")),
        }
    }

    let p = p.ok_or_else(|| input("p", "missing"))?;
    let field = Field::new(p).map_err(|e| input("p", e))?;
    let space = space.ok_or_else(|| input("space", "missing"))?;
    if summands_raw.is_empty() {
        return Err(input("summand", "at least one summand is required"));
    }

    let mut summands = Vec::new();
    for (n, raw) in summands_raw {
        let name = format!("summand (line {n})");
        let (deg, conds) = match raw.split_once(':') {
            Some((d, c)) if !d.contains('[') => (d, c),
            _ => (raw.as_str(), ""),
        };
        let d = deg.trim().parse::<u32>().map_err(|e| input(&name, e))?;
        let conds = split_list(conds)
            .iter()
            .map(|c| parse_condition(field, space, c))
            .collect::<hierdepth::Result<Vec<_>>>()
            .map_err(|e| input(&name, e))?;
        summands.push((d, conds));
    }

    let excluded: Vec<ProjPoint> = exclude
        .iter()
        .map(|(n, s)| parse_proj_point(field, space, s).map_err(|e| input(format!("exclude (line {n})"), e)))
        .collect::<Result<_, _>>()?;
    let mut regular: Vec<EvalPoint> = match points.ok_or_else(|| input("points", "missing"))? {
        PointSource::AllRational => agcode::rational_points(field, space)
            .into_iter()
            .map(EvalPoint::Regular)
            .collect(),
        PointSource::Listed(items) => items
            .iter()
            .map(|s| parse_eval_point(field, space, s).map_err(|e| input("points", e)))
            .collect::<Result<_, _>>()?,
    };
    regular.retain(|pt| !matches!(pt, EvalPoint::Regular(q) if excluded.contains(q)));
    if let Some(t) = take {
        if t > regular.len() {
            return Err(input("take", format!("only {} points are available", regular.len())));
        }
        regular.truncate(t);
    }
    for (n, s) in exceptional {
        let pt = parse_eval_point(field, space, &s)
            .map_err(|e| input(format!("exceptional (line {n})"), e))?;
        if !pt.is_exceptional() {
            return Err(input(format!("exceptional (line {n})"), "expected center@direction"));
        }
        regular.push(pt);
    }

    Ok(CodeConfig {
        field,
        space,
        summands,
        points: regular,
        budget,
    })
}

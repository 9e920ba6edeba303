//! Compact text forms for regions, point sequences and lattice functions.
//!
//! Regions: `parabola`, `parabola(a=2,k=1)`, `parabola(below)`,
//! `hyperbola(alpha=1,k=0,c=0)`, `circle(25)`, `circle(25@1,2)`, or a JSON description.
//!
//! Points: `<curve>:<u1>,<u2>,...` on a curve region, `circle(N):arc` for the
//! second-quadrant arc, or `pts:(u,v);(u,v)`.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num::complex::Complex64;
use serde_json::Value;

use restriction_core::contagion::PointSequence;
use restriction_core::geometry::{second_quadrant_arc, ConvexBody, CurveFamily, Orientation, PlanePoint, Region};
use restriction_core::rational::{parse_rational, Rational};
use restriction_core::torus::{parse_cell, Cell, TrigPoly2D};

pub fn rational(s: &str) -> Result<Rational> {
    parse_rational(s.trim()).map_err(|e| anyhow!("{e}"))
}

pub fn rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(rational).collect()
}

pub fn point(s: &str) -> Result<PlanePoint> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (u, v) = t.split_once(',').ok_or_else(|| anyhow!("point `{s}` must look like u,v"))?;
    Ok(PlanePoint::new(rational(u)?, rational(v)?))
}

pub fn cell(s: &str) -> Result<Cell> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    parse_cell(t).map_err(|e| anyhow!("{e}"))
}

/// `(key=value,...)` arguments; bare words become `word=""`.
fn arguments(s: &str) -> Result<(String, BTreeMap<String, String>)> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s.to_string(), BTreeMap::new()));
    };
    let close = s.rfind(')').ok_or_else(|| anyhow!("unbalanced parentheses in `{s}`"))?;
    let mut args = BTreeMap::new();
    let inner = &s[open + 1..close];
    if inner.contains('@') || !inner.contains('=') && !inner.chars().any(char::is_alphabetic) {
        args.insert(String::new(), inner.to_string());
    } else {
        for part in inner.split(',').filter(|p| !p.trim().is_empty()) {
            match part.split_once('=') {
                Some((k, v)) => args.insert(k.trim().to_string(), v.trim().to_string()),
                None => args.insert(part.trim().to_string(), String::new()),
            };
        }
    }
    Ok((s[..open].trim().to_string(), args))
}

fn take_rational(args: &mut BTreeMap<String, String>, key: &str, default: Option<i64>) -> Result<Rational> {
    match args.remove(key) {
        Some(v) => rational(&v).with_context(|| format!("parameter `{key}`")),
        None => default.map(restriction_core::rational::int).ok_or_else(|| anyhow!("missing parameter `{key}`")),
    }
}

fn curve(name: &str, mut args: BTreeMap<String, String>) -> Result<CurveFamily> {
    let below = args.remove("below").is_some();
    let c = match name {
        "parabola" => CurveFamily::parabola(take_rational(&mut args, "a", Some(1))?, take_rational(&mut args, "k", Some(0))?)?,
        "hyperbola" => CurveFamily::power_hyperbola(
            take_rational(&mut args, "alpha", None)?,
            take_rational(&mut args, "k", Some(0))?,
            take_rational(&mut args, "c", Some(0))?,
        )?,
        other => bail!("unknown curve `{other}`"),
    };
    if let Some(k) = args.keys().next() {
        bail!("unknown parameter `{k}` for {name}");
    }
    Ok(if below { c.with_orientation(Orientation::BelowGraph) } else { c })
}

fn circle(args: &BTreeMap<String, String>) -> Result<ConvexBody> {
    let inner = args.get("").ok_or_else(|| anyhow!("circle needs N, as in circle(25)"))?;
    let (n, center) = match inner.split_once('@') {
        Some((n, c)) => (n, point(c)?),
        None => (inner.as_str(), PlanePoint::origin()),
    };
    let n: u64 = n.trim().parse().with_context(|| format!("circle radius squared `{n}`"))?;
    Ok(ConvexBody::lattice_circle(n, center)?)
}

pub fn region(s: &str) -> Result<Region> {
    if s.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(s).context("region JSON")?;
        return Region::from_description(&v).map_err(|e| anyhow!(e));
    }
    let (name, args) = arguments(s)?;
    match name.as_str() {
        "circle" => Ok(Region::Body(circle(&args)?)),
        _ => Ok(Region::Curve(curve(&name, args)?)),
    }
}

/// A point sequence and, when the spec names one, the region it lives on.
pub fn points(s: &str) -> Result<(PointSequence, Option<Region>)> {
    let (head, tail) = s.split_once(':').ok_or_else(|| anyhow!("points `{s}` need the form <curve>:<values>"))?;
    if head.trim() == "pts" {
        let pts = tail.split(';').filter(|t| !t.trim().is_empty()).map(point).collect::<Result<Vec<_>>>()?;
        return Ok((PointSequence::new(pts)?, None));
    }
    let (name, args) = arguments(head)?;
    if name == "circle" {
        if tail.trim() != "arc" {
            bail!("circle points are selected with `circle(N):arc`");
        }
        let body = circle(&args)?;
        let arc = second_quadrant_arc(&body)?;
        return Ok((PointSequence::new(arc)?, Some(Region::Body(body))));
    }
    let c = curve(&name, args)?;
    let seq = PointSequence::on_curve(&c, &rationals(tail)?)?;
    Ok((seq, Some(Region::Curve(c))))
}

pub fn cells(s: &str) -> Result<Vec<Cell>> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(cell).collect()
}

fn json_source(s: &str) -> Result<Value> {
    let text = if s.trim_start().starts_with('{') {
        s.to_string()
    } else {
        std::fs::read_to_string(Path::new(s)).with_context(|| format!("reading {s}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {s}"))
}

/// Inline JSON or a file path holding `{"n1,n2": [re, im]}`.
pub fn polynomial(s: &str) -> Result<TrigPoly2D> {
    TrigPoly2D::from_json(&json_source(s)?).map_err(|e| anyhow!("{e}"))
}

pub fn lattice_function(s: &str) -> Result<BTreeMap<Cell, Complex64>> {
    Ok(polynomial(s)?.coefficients().clone())
}

pub fn json(s: &str) -> Result<Value> {
    json_source(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use restriction_core::rational::{int, ratio};

    #[test]
    fn parses_regions() {
        assert!(matches!(region("parabola").unwrap(), Region::Curve(_)));
        assert!(matches!(region("circle(25)").unwrap(), Region::Body(_)));
        match region("circle(5@1,-2)").unwrap() {
            Region::Body(b) => assert_eq!(b.center, PlanePoint::from_ints(1, -2)),
            _ => panic!(),
        }
        match region("parabola(a=2,k=1/2,below)").unwrap() {
            Region::Curve(c) => assert_eq!(c.orientation, Orientation::BelowGraph),
            _ => panic!(),
        }
        assert!(region("hyperbola(k=1)").is_err());
        assert!(region("parabola(q=1)").is_err());
        assert!(region(r#"{"kind":"latticeCircle","parameters":{"radiusSquared":5}}"#).is_ok());
    }

    #[test]
    fn parses_points() {
        let (s, r) = points("parabola:0,1,2").unwrap();
        assert_eq!(s.points()[2], PlanePoint::from_ints(2, 4));
        assert!(r.is_some());
        let (s, _) = points("parabola(a=2):1/2").unwrap();
        assert_eq!(s.points()[0], PlanePoint::new(ratio(1, 2), ratio(1, 2)));
        let (s, _) = points("pts:(0,0);(1,3)").unwrap();
        assert_eq!(s.points()[1], PlanePoint::new(int(1), int(3)));
        let (s, _) = points("circle(25):arc").unwrap();
        assert_eq!(s.len(), 3);
        assert!(points("parabola:1,0").is_err());
        assert!(points("nonsense").is_err());
    }

    #[test]
    fn parses_polynomials() {
        let p = polynomial(r#"{"1,0": [1, 0], "0,0": 2}"#).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(cells("(1,2);(3,4)").unwrap(), vec![(1, 2), (3, 4)]);
    }
}

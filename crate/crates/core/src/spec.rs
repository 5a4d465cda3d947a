//! Textual shape descriptions: JSON objects and the `kind:p1,p2,…` shorthand.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, SymmetricConvexBody};
use crate::scalar::{cst, Scalar};
use crate::zonotope::Zonotope;

/// Serializable description of a symmetric convex body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Segment {
        length: f64,
        #[serde(default)]
        direction: f64,
    },
    Disk {
        r: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        phi: f64,
    },
    Rectangle {
        width: f64,
        height: f64,
    },
    Square {
        #[serde(default = "one")]
        side: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    /// Either `regular_n` (with `alpha.len() == regular_n`) or explicit `theta`.
    Zonotope {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        regular_n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<Vec<f64>>,
        alpha: Vec<f64>,
        #[serde(default)]
        t: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl ShapeSpec {
    pub fn to_body<T: Scalar>(&self) -> Result<SymmetricConvexBody<T>> {
        let c = |v: f64| cst::<T>(v);
        let cv = |v: &[f64]| v.iter().map(|&x| cst::<T>(x)).collect::<Vec<T>>();
        match self {
            Self::Segment { length, direction } => SymmetricConvexBody::segment(c(*length), c(*direction)),
            Self::Disk { r } => SymmetricConvexBody::disk(c(*r)),
            Self::Ellipse { a, b, phi } => SymmetricConvexBody::ellipse(c(*a), c(*b), c(*phi)),
            Self::Rectangle { width, height } => {
                if width.is_nan() || height.is_nan() || *width < 0.0 || *height < 0.0 {
                    return Err(Error::InvalidSpec("rectangle sides must be nonnegative".into()));
                }
                SymmetricConvexBody::rectangle(c(*width), c(*height))
            }
            Self::Square { side } => {
                if side.is_nan() || *side < 0.0 {
                    return Err(Error::InvalidSpec("square side must be nonnegative".into()));
                }
                SymmetricConvexBody::rectangle(c(*side), c(*side))
            }
            Self::Polygon { vertices } => {
                SymmetricConvexBody::polygon(vertices.iter().map(|p| Point2::new(c(p[0]), c(p[1]))).collect())
            }
            Self::Zonotope { regular_n, theta, alpha, t } => {
                let z = match (regular_n, theta) {
                    (Some(n), None) => {
                        if *n != alpha.len() {
                            return Err(Error::InvalidSpec(format!(
                                "regular_n = {n} but {} face lengths given",
                                alpha.len()
                            )));
                        }
                        Zonotope::regular(cv(alpha), c(*t))?
                    }
                    (None, Some(theta)) => Zonotope::new(cv(theta), cv(alpha), c(*t))?,
                    _ => return Err(Error::InvalidSpec("zonotope needs exactly one of regular_n and theta".into())),
                };
                Ok(SymmetricConvexBody::Zonotope(z))
            }
        }
    }

    pub fn from_zonotope<T: Scalar>(z: &Zonotope<T>) -> Self {
        let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
        let alpha = z.alpha().iter().map(|&a| f(a)).collect();
        if z.is_regular() {
            Self::Zonotope { regular_n: Some(z.n()), theta: None, alpha, t: f(z.t()) }
        } else {
            Self::Zonotope {
                regular_n: None,
                theta: Some(z.theta().iter().map(|&a| f(a)).collect()),
                alpha,
                t: f(z.t()),
            }
        }
    }
}

fn params(kind: &str, args: &str, count: std::ops::RangeInclusive<usize>) -> Result<Vec<f64>> {
    let values: Vec<f64> = if args.trim().is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidSpec(format!("{kind}: cannot parse '{s}' as a number")))
            })
            .collect::<Result<_>>()?
    };
    if !count.contains(&values.len()) {
        return Err(Error::InvalidSpec(format!(
            "{kind} takes {}..={} parameters, got {}",
            count.start(),
            count.end(),
            values.len()
        )));
    }
    Ok(values)
}

/// Parses `disk:1`, `ellipse:a,b[,phi]`, `square[:side]`, `rectangle:w,h`,
/// `segment:length[,direction]` or `zonotope:a1,a2,…` (0-regular).
pub fn parse_shorthand(text: &str) -> Result<ShapeSpec> {
    let (kind, args) = text.trim().split_once(':').unwrap_or((text.trim(), ""));
    let spec = match kind {
        "disk" => ShapeSpec::Disk { r: params(kind, args, 1..=1)?[0] },
        "ellipse" => {
            let p = params(kind, args, 2..=3)?;
            ShapeSpec::Ellipse { a: p[0], b: p[1], phi: p.get(2).copied().unwrap_or(0.0) }
        }
        "square" => ShapeSpec::Square { side: params(kind, args, 0..=1)?.first().copied().unwrap_or(1.0) },
        "rectangle" => {
            let p = params(kind, args, 2..=2)?;
            ShapeSpec::Rectangle { width: p[0], height: p[1] }
        }
        "segment" => {
            let p = params(kind, args, 1..=2)?;
            ShapeSpec::Segment { length: p[0], direction: p.get(1).copied().unwrap_or(0.0) }
        }
        "zonotope" => {
            let alpha = params(kind, args, 1..=usize::MAX)?;
            ShapeSpec::Zonotope { regular_n: Some(alpha.len()), theta: None, alpha, t: 0.0 }
        }
        other => return Err(Error::InvalidSpec(format!("unknown shape kind '{other}'"))),
    };
    Ok(spec)
}

/// Parses a JSON object (text starting with `{`) or the shorthand grammar.
pub fn parse_shape(text: &str) -> Result<ShapeSpec> {
    let t = text.trim();
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| Error::InvalidSpec(e.to_string()))
    } else {
        parse_shorthand(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand_forms() {
        assert_eq!(parse_shape("ellipse:3,1,0").unwrap(), ShapeSpec::Ellipse { a: 3.0, b: 1.0, phi: 0.0 });
        assert_eq!(parse_shape("disk:1").unwrap(), ShapeSpec::Disk { r: 1.0 });
        assert_eq!(parse_shape("square").unwrap(), ShapeSpec::Square { side: 1.0 });
        assert_eq!(
            parse_shape("segment:2,0.5").unwrap(),
            ShapeSpec::Segment { length: 2.0, direction: 0.5 }
        );
        assert!(parse_shape("ellipse:3").is_err());
        assert!(parse_shape("blob:1").is_err());
        assert!(parse_shape("disk:x").is_err());
    }

    #[test]
    fn json_forms() {
        let e = parse_shape(r#"{"kind":"ellipse","a":3.0,"b":1.0,"phi":0.0}"#).unwrap();
        assert_eq!(e, ShapeSpec::Ellipse { a: 3.0, b: 1.0, phi: 0.0 });
        let z = parse_shape(r#"{"kind":"zonotope","regular_n":4,"alpha":[1,0,1,0],"t":0.0}"#).unwrap();
        let b = z.to_body::<f64>().unwrap();
        assert!((b.feret(0.0) - 1.0).abs() < 1e-15);
        let p = parse_shape(r#"{"kind":"polygon","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]}"#).unwrap();
        assert!((p.to_body::<f64>().unwrap().feret(0.3) - 2.0 * (0.3f64.cos() + 0.3f64.sin())).abs() < 1e-12);
        assert!(parse_shape(r#"{"kind":"zonotope","regular_n":3,"alpha":[1,2]}"#)
            .unwrap()
            .to_body::<f64>()
            .is_err());
        assert!(parse_shape(r#"{"kind":"disk"}"#).is_err());
    }

    #[test]
    fn zonotope_round_trip() {
        let z = Zonotope::regular(vec![1.0, 2.0, 3.0], 0.25).unwrap();
        let s = ShapeSpec::from_zonotope(&z);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"kind":"zonotope","regular_n":3,"alpha":[1.0,2.0,3.0],"t":0.25}"#);
        let back = parse_shape(&json).unwrap().to_body::<f64>().unwrap();
        assert_eq!(back, SymmetricConvexBody::Zonotope(z));
    }
}

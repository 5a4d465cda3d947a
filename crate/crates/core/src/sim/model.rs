//! Random shape models and their seeded samplers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{perimeter_cauchy, SymmetricConvexBody};
use crate::process::CentralFaceMoments;
use crate::scalar::{cst, Scalar};
use crate::spec::ShapeSpec;
use crate::zonotope::Zonotope;

/// Tolerance on `Σ weights = 1` for mixtures.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

fn default_sigma() -> f64 {
    0.25
}

/// Distribution of a nonnegative size vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case", deny_unknown_fields)]
pub enum VectorDist {
    Fixed {
        value: Vec<f64>,
    },
    Mixture {
        atoms: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
    /// Independent components `exp(N(mu, sigma²))`.
    Lognormal {
        #[serde(default)]
        mu: f64,
        #[serde(default = "default_sigma")]
        sigma: f64,
    },
}

fn check_vector(v: &[f64], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::InvalidModel(format!("expected {len} components, got {}", v.len())));
    }
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidModel(format!("sizes must be finite and nonnegative, got {x}")));
    }
    Ok(())
}

impl VectorDist {
    pub fn validate(&self, len: usize) -> Result<()> {
        match self {
            Self::Fixed { value } => check_vector(value, len),
            Self::Mixture { atoms, weights } => {
                if atoms.is_empty() || atoms.len() != weights.len() {
                    return Err(Error::InvalidModel("mixture needs as many weights as atoms".into()));
                }
                for a in atoms {
                    check_vector(a, len)?;
                }
                if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(Error::InvalidModel("mixture weights must be nonnegative".into()));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > WEIGHT_SUM_TOL {
                    return Err(Error::InvalidModel(format!("mixture weights sum to {total}, not 1")));
                }
                Ok(())
            }
            Self::Lognormal { mu, sigma } => {
                if mu.is_finite() && sigma.is_finite() && *sigma >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!("invalid lognormal parameters ({mu}, {sigma})")))
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Vec<f64> {
        match self {
            Self::Fixed { value } => value.clone(),
            Self::Mixture { atoms, weights } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (a, w) in atoms.iter().zip(weights) {
                    acc += w;
                    if u < acc {
                        return a.clone();
                    }
                }
                atoms.last().expect("validated mixture").clone()
            }
            Self::Lognormal { mu, sigma } => {
                let d = LogNormal::new(*mu, *sigma).expect("validated parameters");
                (0..len).map(|_| d.sample(rng)).collect()
            }
        }
    }

    /// `(E[x], E[x ᵗx])`.
    pub fn moments(&self, len: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        match self {
            Self::Fixed { value } => (value.clone(), outer(value, value)),
            Self::Mixture { atoms, weights } => {
                let mut mean = vec![0.0; len];
                let mut second = vec![vec![0.0; len]; len];
                for (a, &w) in atoms.iter().zip(weights) {
                    for i in 0..len {
                        mean[i] += w * a[i];
                        for j in 0..len {
                            second[i][j] += w * a[i] * a[j];
                        }
                    }
                }
                (mean, second)
            }
            Self::Lognormal { mu, sigma } => {
                let s2 = sigma * sigma;
                let m = (mu + s2 / 2.0).exp();
                let off = (2.0 * mu + s2).exp();
                let diag = (2.0 * mu + 2.0 * s2).exp();
                let second = (0..len)
                    .map(|i| (0..len).map(|j| if i == j { diag } else { off }).collect())
                    .collect();
                (vec![m; len], second)
            }
        }
    }
}

fn outer(a: &[f64], b: &[f64]) -> Vec<Vec<f64>> {
    a.iter().map(|&x| b.iter().map(|&y| x * y).collect()).collect()
}

/// A random symmetric convex body.
///
/// The isotropic kinds are rotated by an angle uniform on `[0, π)` drawn
/// independently of the size variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RandomShapeModel {
    /// Regular zonotope with `n` face directions and random face lengths.
    IsotropicZonotope { n: usize, faces: VectorDist },
    /// Rectangle with random `(width, height)`.
    IsotropicRectangle { sides: VectorDist },
    /// Ellipse with random semiaxes `(a, b)`.
    IsotropicEllipse { semiaxes: VectorDist },
    DeterministicBody { body: ShapeSpec },
}

impl RandomShapeModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::IsotropicZonotope { n, faces } => {
                if *n < 1 {
                    return Err(Error::InvalidModel("zonotope model needs n >= 1".into()));
                }
                faces.validate(*n)
            }
            Self::IsotropicRectangle { sides } => sides.validate(2),
            Self::IsotropicEllipse { semiaxes } => semiaxes.validate(2),
            Self::DeterministicBody { body } => body
                .to_body::<f64>()
                .map(|_| ())
                .map_err(|e| Error::InvalidModel(e.to_string())),
        }
    }

    pub fn is_isotropic(&self) -> bool {
        !matches!(self, Self::DeterministicBody { .. })
    }

    /// Analytic central face-length moments on the regular `n`-grid, when the
    /// model is a regular random zonotope whose directions lie on that grid.
    pub fn central_moments<T: Scalar>(&self, n: usize) -> Option<Result<CentralFaceMoments<T>>> {
        let (n0, dist) = match self {
            Self::IsotropicZonotope { n, faces } => (*n, faces),
            Self::IsotropicRectangle { sides } => (2, sides),
            _ => return None,
        };
        if n0 == 0 || !n.is_multiple_of(n0) {
            return None;
        }
        let step = n / n0;
        let (mean0, second0) = dist.moments(n0);
        let mut mean = vec![0.0; n];
        let mut second = vec![vec![0.0; n]; n];
        for i in 0..n0 {
            mean[i * step] = mean0[i];
            for j in 0..n0 {
                second[i * step][j * step] = second0[i][j];
            }
        }
        // symmetrise over cyclic shifts
        let nf = n as f64;
        let mean_alpha = mean.iter().sum::<f64>() / nf;
        let v: Vec<T> = (0..n)
            .map(|k| cst((0..n).map(|j| second[j][(j + k) % n]).sum::<f64>() / nf))
            .collect();
        Some(CentralFaceMoments::new(cst(mean_alpha), v))
    }

    /// `E[U]` in closed form where available.
    pub fn expected_perimeter(&self) -> Option<f64> {
        match self {
            Self::IsotropicZonotope { n, faces } => Some(2.0 * faces.moments(*n).0.iter().sum::<f64>()),
            Self::IsotropicRectangle { sides } => Some(2.0 * sides.moments(2).0.iter().sum::<f64>()),
            Self::IsotropicEllipse { semiaxes: VectorDist::Fixed { value } } => {
                SymmetricConvexBody::ellipse(value[0], value[1], 0.0).ok().and_then(|e| perimeter_cauchy(&e).ok())
            }
            Self::IsotropicEllipse { semiaxes: VectorDist::Mixture { atoms, weights } } => {
                let mut total = 0.0;
                for (a, w) in atoms.iter().zip(weights) {
                    let e = SymmetricConvexBody::ellipse(a[0], a[1], 0.0).ok()?;
                    total += w * perimeter_cauchy(&e).ok()?;
                }
                Some(total)
            }
            Self::IsotropicEllipse { .. } => None,
            Self::DeterministicBody { body } => body.to_body::<f64>().ok().and_then(|b| perimeter_cauchy(&b).ok()),
        }
    }
}

/// Generator for sample `stream_index`: ChaCha8 keyed by `seed`, on stream `stream_index`.
pub fn sample_rng(seed: u64, stream_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_index);
    rng
}

pub(crate) fn sample_body<T: Scalar>(
    model: &RandomShapeModel,
    stream_index: u64,
    seed: u64,
    force_rotation: bool,
) -> Result<SymmetricConvexBody<T>> {
    let mut rng = sample_rng(seed, stream_index);
    let body = match model {
        RandomShapeModel::IsotropicZonotope { n, faces } => {
            let alpha = faces.sample(&mut rng, *n);
            let eta: f64 = rng.random::<f64>() * std::f64::consts::PI;
            let alpha = alpha.into_iter().map(cst::<T>).collect();
            return Ok(SymmetricConvexBody::Zonotope(Zonotope::regular(alpha, cst(eta))?));
        }
        RandomShapeModel::IsotropicRectangle { sides } => {
            let s = sides.sample(&mut rng, 2);
            let eta: f64 = rng.random::<f64>() * std::f64::consts::PI;
            let z = Zonotope::regular(vec![cst(s[0]), cst(s[1])], cst(eta))?;
            return Ok(SymmetricConvexBody::Zonotope(z));
        }
        RandomShapeModel::IsotropicEllipse { semiaxes } => {
            let s = semiaxes.sample(&mut rng, 2);
            let eta: f64 = rng.random::<f64>() * std::f64::consts::PI;
            return SymmetricConvexBody::ellipse(cst(s[0]), cst(s[1]), cst(eta));
        }
        RandomShapeModel::DeterministicBody { body } => body.to_body::<T>()?,
    };
    if force_rotation {
        let eta: f64 = rng.random::<f64>() * std::f64::consts::PI;
        Ok(body.rotated(cst(eta)))
    } else {
        Ok(body)
    }
}

/// Draws sample `stream_index` of `model`; a pure function of `(seed, stream_index)`.
pub fn sample_shape<T: Scalar>(model: &RandomShapeModel, stream_index: u64, seed: u64) -> Result<SymmetricConvexBody<T>> {
    model.validate()?;
    sample_body(model, stream_index, seed, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rect() -> RandomShapeModel {
        serde_json::from_str(r#"{"kind":"isotropic_rectangle","sides":{"dist":"fixed","value":[1,1]}}"#).unwrap()
    }

    #[test]
    fn json_formats() {
        let m: RandomShapeModel = serde_json::from_str(
            r#"{"kind":"isotropic_zonotope","n":3,"faces":{"dist":"mixture","atoms":[[1,2,3],[3,2,1]],"weights":[0.5,0.5]}}"#,
        )
        .unwrap();
        m.validate().unwrap();
        let l: RandomShapeModel =
            serde_json::from_str(r#"{"kind":"isotropic_ellipse","semiaxes":{"dist":"lognormal"}}"#).unwrap();
        assert_eq!(l, RandomShapeModel::IsotropicEllipse { semiaxes: VectorDist::Lognormal { mu: 0.0, sigma: 0.25 } });
        let d: RandomShapeModel =
            serde_json::from_str(r#"{"kind":"deterministic_body","body":{"kind":"square"}}"#).unwrap();
        assert!(!d.is_isotropic());
    }

    #[test]
    fn validation() {
        let bad = RandomShapeModel::IsotropicZonotope {
            n: 2,
            faces: VectorDist::Mixture { atoms: vec![vec![1.0, 1.0], vec![2.0, 2.0]], weights: vec![0.5, 0.5 + 1e-9] },
        };
        assert!(bad.validate().is_err());
        let neg = RandomShapeModel::IsotropicRectangle { sides: VectorDist::Fixed { value: vec![1.0, -1.0] } };
        assert!(neg.validate().is_err());
        let len = RandomShapeModel::IsotropicZonotope { n: 3, faces: VectorDist::Fixed { value: vec![1.0] } };
        assert!(len.validate().is_err());
    }

    #[test]
    fn samples_are_keyed_by_seed_and_index() {
        let m = rect();
        let a = sample_shape::<f64>(&m, 7, 42).unwrap();
        let b = sample_shape::<f64>(&m, 7, 42).unwrap();
        let c = sample_shape::<f64>(&m, 8, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        // a rotated unit square
        let SymmetricConvexBody::Zonotope(z) = a else { panic!() };
        assert_eq!(z.alpha(), &[1.0, 1.0]);
        assert!(z.t() >= 0.0 && z.t() < std::f64::consts::PI);
    }

    #[test]
    fn deterministic_is_unrotated() {
        let m = RandomShapeModel::DeterministicBody { body: ShapeSpec::Square { side: 1.0 } };
        let b = sample_shape::<f64>(&m, 3, 1).unwrap();
        assert_eq!(b.feret(0.0), 1.0);
    }

    #[test]
    fn fixed_zonotope_sample() {
        let m = RandomShapeModel::IsotropicZonotope { n: 3, faces: VectorDist::Fixed { value: vec![1.0, 2.0, 3.0] } };
        let SymmetricConvexBody::Zonotope(z) = sample_shape::<f64>(&m, 0, 5).unwrap() else { panic!() };
        assert_eq!(z.alpha(), &[1.0, 2.0, 3.0]);
        assert!(z.is_regular());
    }

    #[test]
    fn analytic_moments() {
        let c = rect().central_moments::<f64>(2).unwrap().unwrap();
        assert_eq!(c.mean_alpha, 1.0);
        assert_eq!(c.v_alpha, vec![1.0, 1.0]);
        let c4 = rect().central_moments::<f64>(4).unwrap().unwrap();
        assert_eq!(c4.v_alpha, vec![0.5, 0.0, 0.5, 0.0]);
        assert!(rect().central_moments::<f64>(3).is_none());
        assert_relative_eq!(rect().expected_perimeter().unwrap(), 4.0);
        let l = VectorDist::Lognormal { mu: 0.0, sigma: 0.25 };
        let (m, s) = l.moments(2);
        assert_relative_eq!(m[0], (0.03125f64).exp());
        assert_relative_eq!(s[0][0], (0.125f64).exp());
    }
}

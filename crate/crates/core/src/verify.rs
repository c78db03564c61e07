//! Pointwise residuals of the helix and slant-helix characterizations.
//!
//! Every residual is a maximum (or minimum, for the non-vanishing checks)
//! over the sample grid. Residuals are computed whenever the dimension
//! allows it. Whether the hypotheses hold (parallel gradient plus the helix
//! or slant property) is reported separately, so failing cases can still be
//! inspected.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classify::{Classification, Sample};

/// Below this angle the axis is treated as aligned with the tangent.
pub const ALIGNED_AXIS_THETA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisNotMet {
    DimensionBelowThree,
    GradientNotParallel,
    NotHelix,
    NotSlant,
    AlignedAxis,
}

impl fmt::Display for HypothesisNotMet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HypothesisNotMet::DimensionBelowThree => "dimension below 3",
            HypothesisNotMet::GradientNotParallel => "gradient not parallel",
            HypothesisNotMet::NotHelix => "curve is not an f-eikonal helix",
            HypothesisNotMet::NotSlant => "curve is not an f-eikonal Vn-slant helix",
            HypothesisNotMet::AlignedAxis => "axis aligned with the tangent (theta < 1e-6)",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HelixResiduals {
    /// `max |<V_{i+2}, ∇f> - H_i <V_1, ∇f>|`.
    pub sys_helix: Option<f64>,
    /// `max ‖∇f - ‖∇f‖ cosθ (V_1 + H_1 V_3 + … + H_{n-2} V_n)‖`.
    pub axis_helix: Option<f64>,
    pub sumsq_helix_spread: Option<f64>,
    /// `max |cos²θ (1 + Σ H_i²) - 1|`.
    pub tan_identity: Option<f64>,
    pub hn2_min: Option<f64>,
    /// `max |V_1[H_{n-2}] + k_{n-1} H_{n-3}|`.
    pub cor31: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SlantResiduals {
    /// `max |<V_{n-i-1}, ∇f> - H*_i <V_n, ∇f>|`.
    pub sys_slant: Option<f64>,
    /// `max ‖∇f - (H*_{n-2} V_1 + … + H*_1 V_{n-2} + V_n) <∇f, V_n>‖`.
    pub axis_slant: Option<f64>,
    pub sumsq_slant_spread: Option<f64>,
    pub hn2star_min: Option<f64>,
    /// `max |V_1[H*_{n-2}] - k_1 H*_{n-3}|`.
    pub cor41: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TheoremResiduals {
    #[serde(flatten)]
    pub helix: HelixResiduals,
    #[serde(flatten)]
    pub slant: SlantResiduals,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelixCheck {
    pub residuals: HelixResiduals,
    pub hypothesis: Result<(), HypothesisNotMet>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlantCheck {
    pub residuals: SlantResiduals,
    pub hypothesis: Result<(), HypothesisNotMet>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn max_over<I: IntoIterator<Item = f64>>(values: I) -> Option<f64> {
    // NaN propagates so that an undefined sample poisons the maximum
    let mut out: Option<f64> = None;
    for v in values {
        out = Some(match out {
            None => v,
            Some(m) if v.is_nan() || m.is_nan() => f64::NAN,
            Some(m) => m.max(v),
        });
    }
    out.and_then(finite)
}

fn min_over<I: IntoIterator<Item = f64>>(values: I) -> Option<f64> {
    values
        .into_iter()
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |m| m.min(v))))
        .and_then(finite)
}

fn spread<I: IntoIterator<Item = f64>>(values: I) -> Option<f64> {
    let v: Vec<f64> = values.into_iter().collect();
    let hi = max_over(v.iter().copied())?;
    let lo = min_over(v.iter().copied())?;
    finite(hi - lo)
}

fn inner(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    inner(a, a).sqrt()
}

fn helix_hypothesis(n: usize, c: &Classification) -> Result<(), HypothesisNotMet> {
    if n < 3 {
        Err(HypothesisNotMet::DimensionBelowThree)
    } else if !c.parallel_gradient {
        Err(HypothesisNotMet::GradientNotParallel)
    } else if !c.helix {
        Err(HypothesisNotMet::NotHelix)
    } else if c.theta.is_some_and(|t| t.abs() < ALIGNED_AXIS_THETA) {
        Err(HypothesisNotMet::AlignedAxis)
    } else {
        Ok(())
    }
}

fn slant_hypothesis(n: usize, c: &Classification) -> Result<(), HypothesisNotMet> {
    if n < 3 {
        Err(HypothesisNotMet::DimensionBelowThree)
    } else if !c.parallel_gradient {
        Err(HypothesisNotMet::GradientNotParallel)
    } else if !c.slant {
        Err(HypothesisNotMet::NotSlant)
    } else {
        Ok(())
    }
}

fn dimension(samples: &[Sample]) -> usize {
    samples.first().map_or(0, |x| x.frenet.dimension())
}

pub fn verify_helix_theorems(samples: &[Sample], classification: &Classification) -> HelixCheck {
    let n = dimension(samples);
    let hypothesis = helix_hypothesis(n, classification);
    if n < 3 {
        return HelixCheck {
            residuals: HelixResiduals::default(),
            hypothesis,
        };
    }
    let cos_theta = classification.theta.map(f64::cos);

    let sys_helix = max_over(samples.iter().flat_map(|x| {
        (1..=n - 2).map(move |i| {
            let ip = inner(&x.frenet.vector(i + 2), &x.row.grad);
            (ip - x.harmonic.h[i - 1].value() * x.row.ip_tangent).abs()
        })
    }));

    let axis_helix = cos_theta.and_then(|ct| {
        max_over(samples.iter().map(|x| {
            let lambda = x.row.grad_norm * ct;
            let mut axis = x.frenet.vector(1);
            for i in 1..=n - 2 {
                let h = x.harmonic.h[i - 1].value();
                for (a, v) in axis.iter_mut().zip(x.frenet.vector(i + 2)) {
                    *a += h * v;
                }
            }
            let diff: Vec<f64> = x.row.grad.iter().zip(&axis).map(|(g, a)| g - lambda * a).collect();
            norm(&diff)
        }))
    });

    let tan_identity = cos_theta.and_then(|ct| {
        max_over(
            samples
                .iter()
                .map(|x| (ct * ct * (1.0 + x.harmonic.sumsq_h) - 1.0).abs()),
        )
    });

    HelixCheck {
        residuals: HelixResiduals {
            sys_helix,
            axis_helix,
            sumsq_helix_spread: spread(samples.iter().map(|x| x.harmonic.sumsq_h)),
            tan_identity,
            hn2_min: min_over(samples.iter().map(|x| x.harmonic.h[n - 3].value().abs())),
            cor31: max_over(samples.iter().map(|x| x.lemma.map_or(f64::NAN, |l| l.0))),
        },
        hypothesis,
    }
}

pub fn verify_slant_theorems(samples: &[Sample], classification: &Classification) -> SlantCheck {
    let n = dimension(samples);
    let hypothesis = slant_hypothesis(n, classification);
    if n < 3 {
        return SlantCheck {
            residuals: SlantResiduals::default(),
            hypothesis,
        };
    }
    let mu = classification.means.ip_last;

    let sys_slant = max_over(samples.iter().flat_map(|x| {
        (1..=n - 2).map(move |i| {
            let ip = inner(&x.frenet.vector(n - i - 1), &x.row.grad);
            (ip - x.harmonic.hstar[i].value() * x.row.ip_last).abs()
        })
    }));

    let axis_slant = max_over(samples.iter().map(|x| {
        let mut axis = x.frenet.vector(n);
        for i in 1..=n - 2 {
            let h = x.harmonic.hstar[i].value();
            for (a, v) in axis.iter_mut().zip(x.frenet.vector(n - i - 1)) {
                *a += h * v;
            }
        }
        let diff: Vec<f64> = x.row.grad.iter().zip(&axis).map(|(g, a)| g - mu * a).collect();
        norm(&diff)
    }));

    SlantCheck {
        residuals: SlantResiduals {
            sys_slant,
            axis_slant,
            sumsq_slant_spread: spread(samples.iter().map(|x| x.harmonic.sumsq_hstar)),
            hn2star_min: min_over(samples.iter().map(|x| x.harmonic.hstar[n - 2].value().abs())),
            cor41: max_over(samples.iter().map(|x| x.lemma.map_or(f64::NAN, |l| l.1))),
        },
        hypothesis,
    }
}

/// `(max |<∇f, V_2>|, max |<∇f, V_{n-1}>|)` over the grid. Both vanish for
/// helix and slant cases respectively when the gradient is parallel.
pub fn orthogonality_checks(samples: &[Sample]) -> (f64, f64) {
    let n = dimension(samples);
    if n < 2 {
        return (0.0, 0.0);
    }
    samples.iter().fold((0.0, 0.0), |(a, b), x| {
        let v2 = inner(&x.row.grad, &x.frenet.vector(2)).abs();
        let vn1 = inner(&x.row.grad, &x.frenet.vector(n - 1)).abs();
        (f64::max(a, v2), f64::max(b, vn1))
    })
}

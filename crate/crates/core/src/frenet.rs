//! Frenet frame and curvatures of a curve in `R^n`, carried as jets.
//!
//! The frame is the Gram–Schmidt orthonormalization of `α', α'', …, α^(n)`
//! done entirely in jet arithmetic, so every frame vector and curvature
//! comes with its own derivatives. All `n - 1` curvatures are positive; the
//! last one is not orientation-signed.
//!
//! Curves need not be unit speed. Derivatives with respect to arc length are
//! obtained by dividing `d/ds` by the speed jet.

use thiserror::Error;

use crate::jet::{dot, Jet, JetError};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FrenetError {
    #[error("curve is not regular (speed {speed:e})")]
    NotRegular { speed: f64 },
    /// The `index`-th derivative is numerically dependent on the lower ones.
    #[error("degenerate curve: derivative {index} is dependent on lower derivatives")]
    DegenerateCurve { index: usize },
    #[error("jets of order {available} cannot supply the {needed} derivatives required")]
    InsufficientOrder { needed: usize, available: usize },
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrenetData {
    pub s: f64,
    /// `‖α'‖` as a jet.
    pub speed: Jet,
    /// `frame[i][c]` is component `c` of `V_{i+1}`.
    pub frame: Vec<Vec<Jet>>,
    /// `curvatures[i]` is `k_{i+1}`.
    pub curvatures: Vec<Jet>,
}

impl FrenetData {
    pub fn dimension(&self) -> usize {
        self.frame.len()
    }

    /// Values of `V_i` (1-based).
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.frame[i - 1].iter().map(Jet::value).collect()
    }

    /// Value of `k_i` (1-based).
    pub fn curvature(&self, i: usize) -> f64 {
        self.curvatures[i - 1].value()
    }

    /// `max |<V_i, V_j> - δ_ij|` at the value level.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.dimension();
        let vs: Vec<Vec<f64>> = (1..=n).map(|i| self.vector(i)).collect();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let ip: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).abs());
            }
        }
        worst
    }

    /// Largest componentwise residual of `V_i' = -k_{i-1} V_{i-1} + k_i V_{i+1}`
    /// with `'` the arc-length derivative.
    pub fn frenet_residual(&self) -> Result<f64, JetError> {
        let n = self.dimension();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for c in 0..n {
                let dv = directional_derivative(&self.frame[i][c], &self.speed)?.value();
                let mut rhs = 0.0;
                if i > 0 {
                    rhs -= self.curvatures[i - 1].value() * self.frame[i - 1][c].value();
                }
                if i + 1 < n {
                    rhs += self.curvatures[i].value() * self.frame[i + 1][c].value();
                }
                worst = worst.max((dv - rhs).abs());
            }
        }
        Ok(worst)
    }
}

/// Arc-length derivative `V_1[g] = g' / ‖α'‖`, one order lower than `g`.
pub fn directional_derivative(g: &Jet, speed: &Jet) -> Result<Jet, JetError> {
    g.derivative().div(speed)
}

fn axpy(w: &[Jet], coeff: &Jet, v: &[Jet]) -> Vec<Jet> {
    w.iter().zip(v).map(|(wc, vc)| wc - &(coeff * vc)).collect()
}

/// Frenet apparatus at one parameter value from the component jets of `α`.
pub fn frenet_apparatus(s: f64, curve_jets: &[Jet], tol_frame: f64) -> Result<FrenetData, FrenetError> {
    let n = curve_jets.len();
    let available = curve_jets.iter().map(Jet::order).min().unwrap_or(0);
    if available < n + 1 {
        return Err(FrenetError::InsufficientOrder {
            needed: n + 1,
            available,
        });
    }

    // derivs[i] = α^(i+1)
    let mut derivs: Vec<Vec<Jet>> = Vec::with_capacity(n);
    let mut current: Vec<Jet> = curve_jets.to_vec();
    for _ in 0..n {
        current = current.iter().map(Jet::derivative).collect();
        derivs.push(current.clone());
    }

    let speed = dot(&derivs[0], &derivs[0]);
    if speed.value() <= tol_frame * tol_frame {
        return Err(FrenetError::NotRegular {
            speed: speed.value().max(0.0).sqrt(),
        });
    }
    let speed = speed.sqrt()?;

    let mut frame: Vec<Vec<Jet>> = Vec::with_capacity(n);
    for (i, d) in derivs.iter().enumerate() {
        let magnitude = dot(d, d).value().sqrt();
        let mut w = d.clone();
        // modified Gram–Schmidt plus one reorthogonalization pass
        for _ in 0..2 {
            for v in &frame {
                let coeff = dot(&w, v);
                w = axpy(&w, &coeff, v);
            }
        }
        let norm_sq = dot(&w, &w);
        let residual = norm_sq.value().max(0.0).sqrt();
        if residual <= tol_frame * magnitude {
            return Err(FrenetError::DegenerateCurve { index: i + 1 });
        }
        let norm = norm_sq.sqrt()?;
        let v = w.iter().map(|c| c.div(&norm)).collect::<Result<Vec<_>, _>>()?;
        frame.push(v);
    }

    let mut curvatures = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n - 1 {
        let dv: Vec<Jet> = frame[i].iter().map(Jet::derivative).collect();
        let k = dot(&dv, &frame[i + 1]).div(&speed)?;
        if k.value() <= tol_frame {
            return Err(FrenetError::DegenerateCurve { index: i + 2 });
        }
        curvatures.push(k);
    }

    Ok(FrenetData {
        s,
        speed,
        frame,
        curvatures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_expr, ExprKind};
    use crate::jet::curve_jet;

    fn jets(components: &[&str], s: f64, order: usize) -> Vec<Jet> {
        components
            .iter()
            .map(|c| curve_jet(&parse_expr(c, ExprKind::Curve, components.len()).unwrap(), s, order).unwrap())
            .collect()
    }

    #[test]
    fn circular_helix_345() {
        for s in [0.0, 1.7, -12.0] {
            let fr = frenet_apparatus(s, &jets(&["3*cos(s/5)", "3*sin(s/5)", "4*s/5"], s, 4), 1e-10).unwrap();
            assert!((fr.curvature(1) - 3.0 / 25.0).abs() < 1e-14);
            assert!((fr.curvature(2) - 4.0 / 25.0).abs() < 1e-14);
            assert!((fr.speed.value() - 1.0).abs() < 1e-15);
            assert!(fr.orthonormality_defect() < 1e-14);
            assert!(fr.frenet_residual().unwrap() < 1e-14);
            // V_3 = (4/5 sin(s/5), -4/5 cos(s/5), 3/5)
            let v3 = fr.vector(3);
            let expect = [0.8 * (s / 5.0).sin(), -0.8 * (s / 5.0).cos(), 0.6];
            for (a, b) in v3.iter().zip(expect) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn example_helix_curvatures() {
        let c = ["cos(s/sqrt(2))", "s/sqrt(2)", "sin(s/sqrt(2))"];
        let fr = frenet_apparatus(2.0, &jets(&c, 2.0, 4), 1e-10).unwrap();
        assert!((fr.curvature(1) - 0.5).abs() < 1e-14);
        assert!((fr.curvature(2) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn planar_circle_is_degenerate() {
        let err = frenet_apparatus(0.3, &jets(&["cos(s)", "sin(s)", "0"], 0.3, 4), 1e-10).unwrap_err();
        assert_eq!(err, FrenetError::DegenerateCurve { index: 3 });
    }

    #[test]
    fn straight_line_and_stationary_point() {
        let err = frenet_apparatus(0.0, &jets(&["s", "2*s"], 0.0, 3), 1e-10).unwrap_err();
        assert_eq!(err, FrenetError::DegenerateCurve { index: 2 });
        let err = frenet_apparatus(0.0, &jets(&["s^2", "s^3"], 0.0, 3), 1e-10).unwrap_err();
        assert!(matches!(err, FrenetError::NotRegular { .. }));
    }

    #[test]
    fn insufficient_order() {
        let err = frenet_apparatus(0.0, &jets(&["3*cos(s/5)", "3*sin(s/5)", "4*s/5"], 0.0, 3), 1e-10).unwrap_err();
        assert_eq!(
            err,
            FrenetError::InsufficientOrder {
                needed: 4,
                available: 3
            }
        );
    }

    #[test]
    fn non_unit_speed_parametrization() {
        // same helix traversed at double speed
        let fr = frenet_apparatus(1.0, &jets(&["3*cos(2*s/5)", "3*sin(2*s/5)", "8*s/5"], 1.0, 4), 1e-10).unwrap();
        assert!((fr.speed.value() - 2.0).abs() < 1e-14);
        assert!((fr.curvature(1) - 3.0 / 25.0).abs() < 1e-14);
        assert!((fr.curvature(2) - 4.0 / 25.0).abs() < 1e-14);
        assert!(fr.frenet_residual().unwrap() < 1e-14);
    }

    #[test]
    fn directional_derivative_examples() {
        let unit = Jet::constant(1.0, 3);
        let s = Jet::variable(1.0, 3);
        let sq = &s * &s;
        assert_eq!(directional_derivative(&sq, &unit).unwrap().value(), 2.0);
        let d = directional_derivative(&Jet::constant(4.0, 3), &Jet::constant(3.0, 3)).unwrap();
        assert!(d.coeffs().iter().all(|c| *c == 0.0));
        let sine = Jet::variable(0.0, 3).sin();
        assert_eq!(
            directional_derivative(&sine, &Jet::constant(2.0, 3)).unwrap().value(),
            0.5
        );
    }

    #[test]
    fn w_curve_in_r4() {
        // (2cos s, 2sin s, cos 2s, sin 2s) has constant curvatures
        let c = ["2*cos(s)", "2*sin(s)", "cos(2*s)", "sin(2*s)"];
        let a = frenet_apparatus(0.0, &jets(&c, 0.0, 6), 1e-10).unwrap();
        let b = frenet_apparatus(2.3, &jets(&c, 2.3, 6), 1e-10).unwrap();
        for i in 1..=3 {
            assert!((a.curvature(i) - b.curvature(i)).abs() < 1e-12);
            assert!(a.curvatures[i - 1].coeffs()[1].abs() < 1e-12);
        }
        assert!(a.orthonormality_defect() < 1e-12);
        assert!(a.frenet_residual().unwrap() < 1e-12);
    }
}

use super::JetError;

/// Value, gradient and Hessian of a scalar field at a point, propagated
/// exactly through the expression tree.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJet {
    pub value: f64,
    pub gradient: Vec<f64>,
    /// Row-major `n x n`, symmetric.
    pub hessian: Vec<Vec<f64>>,
}

impl FieldJet {
    pub fn constant(value: f64, n: usize) -> Self {
        FieldJet {
            value,
            gradient: vec![0.0; n],
            hessian: vec![vec![0.0; n]; n],
        }
    }

    /// The coordinate function `x_i` at `point`.
    pub fn coordinate(i: usize, point: &[f64]) -> Self {
        let mut j = FieldJet::constant(point[i], point.len());
        j.gradient[i] = 1.0;
        j
    }

    pub fn dimension(&self) -> usize {
        self.gradient.len()
    }

    pub fn gradient_norm(&self) -> f64 {
        self.gradient.iter().map(|g| g * g).sum::<f64>().sqrt()
    }

    pub fn hessian_frobenius(&self) -> f64 {
        self.hessian.iter().flatten().map(|h| h * h).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.gradient.iter().all(|g| g.is_finite())
            && self.hessian.iter().flatten().all(|h| h.is_finite())
    }

    /// Composition with a scalar function given its value and first two
    /// derivatives at `self.value`.
    pub fn compose(&self, f0: f64, f1: f64, f2: f64) -> FieldJet {
        let n = self.dimension();
        let gradient = self.gradient.iter().map(|g| f1 * g).collect();
        let hessian = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| f1 * self.hessian[i][j] + f2 * (self.gradient[i] * self.gradient[j]))
                    .collect()
            })
            .collect();
        FieldJet {
            value: f0,
            gradient,
            hessian,
        }
    }

    pub fn add(&self, other: &FieldJet) -> FieldJet {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &FieldJet) -> FieldJet {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &FieldJet, sign: f64) -> FieldJet {
        let n = self.dimension();
        FieldJet {
            value: self.value + sign * other.value,
            gradient: (0..n).map(|i| self.gradient[i] + sign * other.gradient[i]).collect(),
            hessian: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| self.hessian[i][j] + sign * other.hessian[i][j])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &FieldJet) -> FieldJet {
        let n = self.dimension();
        let (u, v) = (self, other);
        FieldJet {
            value: u.value * v.value,
            gradient: (0..n)
                .map(|i| u.value * v.gradient[i] + v.value * u.gradient[i])
                .collect(),
            hessian: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            // cross terms grouped so that (i, j) and (j, i) round identically
                            u.value * v.hessian[i][j]
                                + v.value * u.hessian[i][j]
                                + (u.gradient[i] * v.gradient[j] + u.gradient[j] * v.gradient[i])
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> FieldJet {
        self.compose(-self.value, -1.0, 0.0)
    }

    pub fn recip(&self) -> Result<FieldJet, JetError> {
        let v = self.value;
        if v.abs() < f64::MIN_POSITIVE {
            return Err(JetError::DivisionByZero);
        }
        Ok(self.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)))
    }

    pub fn div(&self, other: &FieldJet) -> Result<FieldJet, JetError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn sin(&self) -> FieldJet {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(&self) -> FieldJet {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn exp(&self) -> FieldJet {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn sqrt(&self) -> Result<FieldJet, JetError> {
        let v = self.value;
        if v <= 0.0 {
            return Err(JetError::Domain { op: "sqrt", value: v });
        }
        let r = v.sqrt();
        Ok(self.compose(r, 0.5 / r, -0.25 / (r * v)))
    }

    pub fn ln(&self) -> Result<FieldJet, JetError> {
        let v = self.value;
        if v <= 0.0 {
            return Err(JetError::Domain { op: "ln", value: v });
        }
        Ok(self.compose(v.ln(), 1.0 / v, -1.0 / (v * v)))
    }

    pub fn powf(&self, p: f64) -> Result<FieldJet, JetError> {
        let v = self.value;
        if p.fract() == 0.0 && p.abs() <= 1024.0 {
            let k = p as i32;
            if k < 0 && v.abs() < f64::MIN_POSITIVE {
                return Err(JetError::DivisionByZero);
            }
            let kf = k as f64;
            let f0 = v.powi(k);
            let f1 = if k == 0 { 0.0 } else { kf * v.powi(k - 1) };
            let f2 = if k == 0 || k == 1 {
                0.0
            } else {
                kf * (kf - 1.0) * v.powi(k - 2)
            };
            return Ok(self.compose(f0, f1, f2));
        }
        if v <= 0.0 {
            return Err(JetError::Domain {
                op: "fractional power",
                value: v,
            });
        }
        Ok(self.compose(v.powf(p), p * v.powf(p - 1.0), p * (p - 1.0) * v.powf(p - 2.0)))
    }
}

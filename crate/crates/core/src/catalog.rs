//! Built-in curve/field documents and generators for curve families with
//! known helix or slant behaviour.

// ranges such as 6.2832 are the documented catalog values, not TAU
#![allow(clippy::approx_constant)]

use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub document: String,
}

/// Dense polynomial in `s`, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, s: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&0.0) + other.0.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Poly {
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    /// Drops leading coefficients below `rel` times the largest one.
    pub fn trimmed(&self, rel: f64) -> Poly {
        let scale = self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        let mut out = self.0.clone();
        while out.len() > 1 && out.last().is_some_and(|c| c.abs() <= rel * scale) {
            out.pop();
        }
        Poly(out)
    }

    /// Antiderivative vanishing at `s = 0`.
    pub fn integral(&self) -> Poly {
        let mut out = vec![0.0];
        out.extend(self.0.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Poly(out)
    }

    /// Horner form in the expression language, e.g. `1.5 + s*(-2.0 + s*(0.25))`.
    pub fn to_expression(&self) -> String {
        let coeff = |c: f64| if c < 0.0 { format!("({c:?})") } else { format!("{c:?}") };
        match self.0.split_last() {
            None => "0".to_string(),
            Some((last, rest)) => {
                let mut out = coeff(*last);
                for c in rest.iter().rev() {
                    out = format!("{} + s*({out})", coeff(*c));
                }
                out
            }
        }
    }
}

fn det3(m: [[&Poly; 3]; 3]) -> Poly {
    let minor = |a: &Poly, b: &Poly, c: &Poly, d: &Poly| a.mul(d).sub(&b.mul(c));
    m[0][0]
        .mul(&minor(m[1][1], m[1][2], m[2][1], m[2][2]))
        .sub(&m[0][1].mul(&minor(m[1][0], m[1][2], m[2][0], m[2][2])))
        .add(&m[0][2].mul(&minor(m[1][0], m[1][1], m[2][0], m[2][1])))
}

/// Vector orthogonal to `a, b, c` in `R^4` (cofactor expansion).
fn cross4(a: &[Poly], b: &[Poly], c: &[Poly]) -> Vec<Poly> {
    (0..4)
        .map(|i| {
            let cols: Vec<usize> = (0..4).filter(|j| *j != i).collect();
            let m = [
                [&a[cols[0]], &a[cols[1]], &a[cols[2]]],
                [&b[cols[0]], &b[cols[1]], &b[cols[2]]],
                [&c[cols[0]], &c[cols[1]], &c[cols[2]]],
            ];
            let d = det3(m);
            if i % 2 == 0 {
                d
            } else {
                d.scale(-1.0)
            }
        })
        .collect()
}

/// Velocity of a polynomial helix in `R^4` about `e_4`.
///
/// With `u, v, p, q` polynomials, `e = (u²+v²-p²-q², 2(uq+vp), 2(vq-up))`
/// has `|e| = u²+v²+p²+q²`, so `(e, slope·|e|)` makes the constant angle
/// `atan(1/slope)` with `e_4`.
pub fn ph_helix_velocity(quaternion: &[Poly; 4], slope: f64) -> Vec<Poly> {
    let [u, v, p, q] = quaternion;
    let sq = |a: &Poly| a.mul(a);
    let e1 = sq(u).add(&sq(v)).sub(&sq(p)).sub(&sq(q));
    let e2 = u.mul(q).add(&v.mul(p)).scale(2.0);
    let e3 = v.mul(q).sub(&u.mul(p)).scale(2.0);
    let norm = sq(u).add(&sq(v)).add(&sq(p)).add(&sq(q));
    vec![e1, e2, e3, norm.scale(slope)]
}

/// Polynomial helix about `e_4` through the origin.
pub fn ph_helix_r4(quaternion: &[Poly; 4], slope: f64) -> Vec<Poly> {
    ph_helix_velocity(quaternion, slope)
        .iter()
        .map(Poly::integral)
        .collect()
}

/// Curve whose tangent is the last Frenet vector of [`ph_helix_r4`]. Its
/// last Frenet vector is (up to sign) the helix tangent, so it is a
/// `V_4`-slant helix about `e_4` wherever the helix is a Frenet curve.
pub fn ph_slant_r4(quaternion: &[Poly; 4], slope: f64) -> Vec<Poly> {
    let d1 = ph_helix_velocity(quaternion, slope);
    let d2: Vec<Poly> = d1.iter().map(Poly::derivative).collect();
    let d3: Vec<Poly> = d2.iter().map(Poly::derivative).collect();
    // leading terms cancel exactly in exact arithmetic
    cross4(&d1, &d2, &d3)
        .iter()
        .map(|c| c.trimmed(1e-12).integral())
        .collect()
}

pub fn document(components: &[String], field: &str, s_range: [f64; 2], samples: usize) -> String {
    let quoted: Vec<String> = components.iter().map(|c| format!("\"{c}\"")).collect();
    let mut out = String::new();
    let _ = writeln!(out, "dimension = {}", components.len());
    let _ = writeln!(out, "curve = [{}]", quoted.join(", "));
    let _ = writeln!(out, "field = \"{field}\"");
    let _ = writeln!(out, "s_range = [{:?}, {:?}]", s_range[0], s_range[1]);
    let _ = writeln!(out, "samples = {samples}");
    out
}

pub fn polynomial_document(curve: &[Poly], field: &str, s_range: [f64; 2], samples: usize) -> String {
    let components: Vec<String> = curve.iter().map(Poly::to_expression).collect();
    document(&components, field, s_range, samples)
}

/// Quadratics used by the built-in polynomial helix and its dual.
pub fn builtin_quaternion() -> [Poly; 4] {
    [
        Poly(vec![-1.0, 1.8, -1.4]),
        Poly(vec![-0.2, -1.2, 1.2]),
        Poly(vec![1.0, 1.2, 0.6]),
        Poly(vec![-0.6, -1.2, 1.2]),
    ]
}

const PAPER_3_1: &str = r#"dimension = 3
curve = ["cos(s/sqrt(2))", "s/sqrt(2)", "sin(s/sqrt(2))"]
field = "x1^2 + x2 + x3^2"
s_range = [0, 12.566]
samples = 512
"#;

fn owned(components: &[&str]) -> Vec<String> {
    components.iter().map(|c| c.to_string()).collect()
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let quaternion = builtin_quaternion();
    vec![
        CatalogEntry {
            name: "paper_3_1",
            description:
                "unit-speed circular helix with f = x1^2 + x2 + x3^2 (eikonal along the curve, non-parallel gradient)",
            document: PAPER_3_1.to_string(),
        },
        CatalogEntry {
            name: "helix345_fz",
            description: "circular helix of radius 3 and pitch 4, unit speed, with f = x3",
            document: document(
                &owned(&["3*cos(s/5)", "3*sin(s/5)", "4*s/5"]),
                "x3",
                [0.0, 31.4159],
                512,
            ),
        },
        CatalogEntry {
            name: "cycloid_helix",
            description: "general helix over a cycloid with non-constant curvatures, f = x3",
            document: document(
                &owned(&["s - sin(s)", "1 - cos(s)", "4 - 4*cos(s/2)"]),
                "x3",
                [0.5, 5.5],
                512,
            ),
        },
        CatalogEntry {
            name: "wcurve_r4",
            description:
                "R^4 curve of constant curvatures (2cos s, 2sin s, cos 2s, sin 2s) with f = x4; H2 = 0, so not a helix",
            document: document(
                &owned(&["2*cos(s)", "2*sin(s)", "cos(2*s)", "sin(2*s)"]),
                "x4",
                [0.0, 6.2832],
                512,
            ),
        },
        CatalogEntry {
            name: "helix_r4",
            description: "polynomial helix in R^4 about e4 with non-constant curvatures, f = x4",
            document: polynomial_document(&ph_helix_r4(&quaternion, 0.75), "x4", [-0.4, 0.4], 512),
        },
        CatalogEntry {
            name: "slant_r4",
            description:
                "polynomial V4-slant helix in R^4 about e4 (tangent along the last frame vector of helix_r4), f = x4",
            document: polynomial_document(&ph_slant_r4(&quaternion, 0.75), "x4", [-0.4, 0.4], 512),
        },
        CatalogEntry {
            name: "wcurve_r5",
            description: "R^5 curve of constant curvatures (cos s, sin s, cos 2s/2, sin 2s/2, s) with f = x5",
            document: document(
                &owned(&["cos(s)", "sin(s)", "cos(2*s)/2", "sin(2*s)/2", "s"]),
                "x5",
                [0.0, 6.2832],
                512,
            ),
        },
        CatalogEntry {
            name: "circle_in_r3",
            description: "planar circle in R^3; the Frenet frame degenerates at V3",
            document: document(&owned(&["cos(s)", "sin(s)", "0"]), "x3", [0.0, 6.2832], 512),
        },
        CatalogEntry {
            name: "nonhelix_parabolic",
            description: "(cos s, sin s, s^2) with f = x3; the curvature ratio varies, so neither helix nor slant",
            document: document(&owned(&["cos(s)", "sin(s)", "s^2"]), "x3", [0.5, 3.0], 512),
        },
    ]
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    builtin_catalog().into_iter().find(|e| e.name == name)
}

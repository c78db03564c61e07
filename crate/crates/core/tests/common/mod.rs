//! Oracles and generators shared by the integration tests.

#![allow(dead_code)]

use eikonal_helix::catalog::{ph_helix_r4, ph_slant_r4, polynomial_document, Poly};
use eikonal_helix::classify::sample_along_curve;
use eikonal_helix::dsl::{parse_curve_spec, BinaryOp, CurveSpec, Expr, ExprKind, UnaryOp};
use eikonal_helix::frenet::frenet_apparatus;
use eikonal_helix::harmonic::harmonic_data;
use eikonal_helix::jet::eval_curve_jet;
use rand::Rng;

/// Central-difference estimate of `f^(order)(x)` with error expansion in
/// even powers of `h`.
fn central(f: &dyn Fn(f64) -> f64, x: f64, order: usize, h: f64) -> f64 {
    match order {
        0 => f(x),
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h.powi(3)),
        4 => (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / h.powi(4),
        _ => panic!("no stencil for order {order}"),
    }
}

const SHRINK: f64 = 1.4;
const ROWS: usize = 12;

/// Ridders' extrapolation of central differences: steps shrink by 1.4
/// from `h0`, and the tableau entry with the smallest error estimate wins.
/// The estimate is floored by the stencil's roundoff, `eps 2^order |f| / h^order`,
/// so tiny steps cannot report spuriously small errors.
/// Returns the estimate and its error estimate.
fn ridders(f: &dyn Fn(f64) -> f64, x: f64, order: usize, h0: f64) -> (f64, f64) {
    let ratio = SHRINK * SHRINK;
    let scale = 4.0 * f64::EPSILON * 2f64.powi(order as i32) * f(x).abs().max(f64::MIN_POSITIVE);
    let mut prev: Vec<f64> = Vec::new();
    let mut best = (f64::NAN, f64::INFINITY);
    let mut h = h0;
    for i in 0..ROWS {
        let noise = scale / h.powi(order as i32);
        let mut row = vec![central(f, x, order, h)];
        let mut factor = ratio;
        for j in 1..=i {
            row.push((row[j - 1] * factor - prev[j - 1]) / (factor - 1.0));
            factor *= ratio;
            let err = (row[j] - row[j - 1]).abs().max((row[j] - prev[j - 1]).abs()).max(noise);
            if err <= best.1 {
                best = (row[j], err);
            }
        }
        // stop once higher precision is lost to roundoff
        if i > 0 && (row[i] - prev[i - 1]).abs() >= 2.0 * best.1 {
            break;
        }
        prev = row;
        h /= SHRINK;
    }
    best
}

/// Finite-difference derivative of any order up to 4. Ridders' method is
/// run from `h0, h0/4, ..., h0/4^8` and the estimate with the smallest relative
/// error bound wins, so functions varying on scales far below `h0` are resolved.
/// Each bound is widened by the disagreement with the next finer start,
/// which exposes false convergence on coarse steps.
pub fn fd_derivative(f: &dyn Fn(f64) -> f64, x: f64, order: usize, h0: f64) -> f64 {
    let runs: Vec<(f64, f64)> = (0..9).map(|k| ridders(f, x, order, h0 / 4f64.powi(k))).collect();
    // the finest start has no neighbour to cross-check and is only a fallback
    let mut best = (runs[runs.len() - 1].0, f64::INFINITY);
    for w in runs.windows(2).rev() {
        let err = w[0].1.max((w[0].0 - w[1].0).abs()) / w[0].0.abs().max(1.0);
        if err < best.1 {
            best = (w[0].0, err);
        }
    }
    best.0
}

/// Relative error with a unit floor, so values near zero are compared
/// absolutely.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Curvature and torsion of a space curve from finite-difference derivatives
/// and the classical cross-product formulas.
pub fn fd_curvature_torsion(spec: &CurveSpec, s: f64) -> (f64, f64) {
    let d = |order: usize| -> [f64; 3] {
        let mut out = [0.0; 3];
        for (c, e) in spec.components.iter().enumerate() {
            out[c] = fd_derivative(&|t| e.eval(t, &[]), s, order, 0.2);
        }
        out
    };
    let (d1, d2, d3) = (d(1), d(2), d(3));
    let c = cross(d1, d2);
    let speed = dot3(d1, d1).sqrt();
    let kappa = dot3(c, c).sqrt() / speed.powi(3);
    let tau = dot3(c, d3) / dot3(c, c);
    (kappa, tau)
}

pub fn spec_from(document: &str) -> CurveSpec {
    parse_curve_spec(document).unwrap_or_else(|e| panic!("{e}\n{document}"))
}

/// Rotation-like orthogonal matrix from Gram–Schmidt on random vectors.
pub fn random_orthogonal<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    loop {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for _ in 0..n {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for r in &rows {
                let ip: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(r).for_each(|(a, b)| *a -= ip * b);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-3 {
                break;
            }
            rows.push(v.into_iter().map(|x| x / norm).collect());
        }
        if rows.len() == n {
            return rows;
        }
    }
}

fn linear_field(axis: &[f64], scale: f64, offset: f64) -> String {
    let terms: Vec<String> = axis
        .iter()
        .enumerate()
        .map(|(i, a)| format!("({:?})*x{}", scale * a, i + 1))
        .collect();
    format!("{} + ({offset:?})", terms.join(" + "))
}

fn vector_at(spec: &CurveSpec, s: f64, i: usize) -> Vec<f64> {
    let jets = eval_curve_jet(spec, s, eikonal_helix::jet::jet_order_for_dimension(spec.dimension)).unwrap();
    frenet_apparatus(s, &jets, spec.tol_frame).unwrap().vector(i)
}

/// Unit axis `cosθ (V_1 + H_1 V_3 + … + H_{n-2} V_n)` with
/// `cos²θ = 1 / (1 + Σ H_i²)`, read off at parameter `s`.
pub fn helix_axis_from_frame(spec: &CurveSpec, s: f64) -> Vec<f64> {
    let n = spec.dimension;
    let jets = eval_curve_jet(spec, s, eikonal_helix::jet::jet_order_for_dimension(n)).unwrap();
    let fr = frenet_apparatus(s, &jets, spec.tol_frame).unwrap();
    let hd = harmonic_data(&fr).unwrap();
    let mut axis = fr.vector(1);
    for (i, h) in hd.h.iter().enumerate() {
        for (a, v) in axis.iter_mut().zip(fr.vector(i + 3)) {
            *a += h.value() * v;
        }
    }
    let cos_theta = 1.0 / (1.0 + hd.sumsq_h).sqrt();
    axis.iter().map(|a| a * cos_theta).collect()
}

/// Circular helix with random radius, pitch, speed, rotation and offset,
/// plus a linear field along the axis read from the frame.
pub fn fuzz_circular_helix<R: Rng>(rng: &mut R, samples: usize) -> CurveSpec {
    let a: f64 = rng.gen_range(0.5..3.0);
    let b: f64 = rng.gen_range(0.3..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let w: f64 = rng.gen_range(0.5..2.0);
    let r = random_orthogonal(rng, 3);
    let offset: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let local = [
        format!("{a:?}*cos({w:?}*s)"),
        format!("{a:?}*sin({w:?}*s)"),
        format!("({:?})*s", b * w),
    ];
    // x_i = offset_i + Σ_j R[j][i] local_j, i.e. the rows of r are the images of e_j
    let components: Vec<String> = (0..3)
        .map(|i| {
            let terms: Vec<String> = (0..3).map(|j| format!("({:?})*({})", r[j][i], local[j])).collect();
            format!("{:?} + {}", offset[i], terms.join(" + "))
        })
        .collect();
    let period = std::f64::consts::TAU / w;
    let curve_doc = eikonal_helix::catalog::document(&components, "x1", [0.0, 1.5 * period], samples);
    let curve = spec_from(&curve_doc);
    let axis = helix_axis_from_frame(&curve, 0.0);
    let scale = rng.gen_range(0.5..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let field = linear_field(&axis, scale, rng.gen_range(-1.0..1.0));
    spec_from(&eikonal_helix::catalog::document(
        &components,
        &field,
        [0.0, 1.5 * period],
        samples,
    ))
}

fn random_quaternion<R: Rng>(rng: &mut R) -> [Poly; 4] {
    let mut q = || Poly((0..3).map(|_| rng.gen_range(-2.0..2.0)).collect());
    [q(), q(), q(), q()]
}

fn rotate(curve: &[Poly], r: &[Vec<f64>]) -> Vec<Poly> {
    let n = curve.len();
    (0..n)
        .map(|i| (0..n).fold(Poly(vec![0.0]), |acc, j| acc.add(&curve[j].scale(r[j][i]))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum R4Family {
    Helix,
    Slant,
}

/// Product over `i >= 2` of `|c^(i)|` over its part orthogonal to the lower
/// derivatives, maximised along the grid: roughly how much of the working
/// precision Gram-Schmidt throws away before the frame is formed.
pub fn frame_digit_loss(spec: &CurveSpec) -> f64 {
    let n = spec.dimension;
    let mut worst: f64 = 1.0;
    for s in spec.grid() {
        let jets = eval_curve_jet(spec, s, n).unwrap();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut loss = 1.0;
        for i in 1..=n {
            let d: Vec<f64> = jets.iter().map(|j| j.derivative_value(i).unwrap()).collect();
            let full = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mut w = d;
            for v in &basis {
                let ip: f64 = w.iter().zip(v).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(v).for_each(|(a, b)| *a -= ip * b);
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if i > 1 {
                loss *= full / norm;
            }
            basis.push(w.into_iter().map(|x| x / norm).collect());
        }
        worst = worst.max(loss);
    }
    worst
}

/// Every curvature stays within a factor 100 of its largest value on a
/// dense grid, and Gram-Schmidt loses fewer than five digits. Curvatures
/// crossing zero between samples (where the frame flips) fail the first.
fn well_conditioned(spec: &CurveSpec) -> bool {
    let dense = CurveSpec {
        samples: 513,
        ..spec.clone()
    };
    let Ok(samples) = sample_along_curve(&dense) else {
        return false;
    };
    let curvatures_ok = (1..spec.dimension).all(|i| {
        let k: Vec<f64> = samples.iter().map(|x| x.frenet.curvature(i)).collect();
        let lo = k.iter().copied().fold(f64::INFINITY, f64::min);
        lo >= 1e-2 * max_over(k.iter().copied())
    });
    curvatures_ok && frame_digit_loss(&dense) <= 1e5
}

/// Rotated polynomial helix or slant helix in `R^4` with its linear field.
/// Draws whose frame degenerates or nearly degenerates somewhere on the
/// interval are redrawn; the number of redraws is returned alongside.
pub fn fuzz_r4<R: Rng>(rng: &mut R, family: R4Family, samples: usize) -> (CurveSpec, usize) {
    let mut rejected = 0;
    loop {
        let q = random_quaternion(rng);
        let slope = rng.gen_range(0.3..2.0);
        let curve = match family {
            R4Family::Helix => ph_helix_r4(&q, slope),
            R4Family::Slant => ph_slant_r4(&q, slope),
        };
        let r = random_orthogonal(rng, 4);
        let curve = rotate(&curve, &r);
        let scale = rng.gen_range(0.5..3.0);
        let field = linear_field(&r[3], scale, 0.0);
        let spec = spec_from(&polynomial_document(&curve, &field, [-0.3, 0.3], samples));
        if well_conditioned(&spec) && sample_along_curve(&spec).is_ok() {
            return (spec, rejected);
        }
        rejected += 1;
    }
}

/// Random smooth expression in `s` (or in `x1..x3` for fields) whose
/// singularities stay well away from the sampled region.
pub fn random_expr<R: Rng>(rng: &mut R, kind: ExprKind, depth: usize) -> Expr {
    let leaf = |rng: &mut R| -> Expr {
        match (kind, rng.gen_range(0..3)) {
            (_, 0) => Expr::Constant((rng.gen_range(-2.0..2.0) * 8.0_f64).round() / 8.0),
            (ExprKind::Curve, _) => Expr::Param,
            (ExprKind::Field, _) => Expr::Coord(rng.gen_range(0..3)),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let sub = |rng: &mut R| random_expr(rng, kind, depth - 1);
    let bounded = |e: Expr| Expr::unary(UnaryOp::Sin, e);
    match rng.gen_range(0..10) {
        0 => leaf(rng),
        1 => Expr::binary(BinaryOp::Add, sub(rng), sub(rng)),
        2 => Expr::binary(BinaryOp::Sub, sub(rng), sub(rng)),
        3 => Expr::binary(BinaryOp::Mul, sub(rng), sub(rng)),
        // denominators in [1, 3]
        4 => Expr::binary(
            BinaryOp::Div,
            sub(rng),
            Expr::binary(BinaryOp::Add, Expr::Constant(2.0), bounded(sub(rng))),
        ),
        5 => Expr::unary(UnaryOp::Sin, sub(rng)),
        6 => Expr::unary(UnaryOp::Cos, sub(rng)),
        7 => Expr::unary(UnaryOp::Exp, bounded(sub(rng))),
        8 => Expr::unary(
            if rng.gen_bool(0.5) { UnaryOp::Sqrt } else { UnaryOp::Ln },
            Expr::binary(BinaryOp::Add, Expr::Constant(2.0), bounded(sub(rng))),
        ),
        _ => Expr::binary(BinaryOp::Pow, sub(rng), Expr::Constant(rng.gen_range(2..4) as f64)),
    }
}

pub fn max_over<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

pub fn parse_kind(source: &str, kind: ExprKind, dimension: usize) -> Expr {
    eikonal_helix::dsl::parse_expr(source, kind, dimension).unwrap()
}

pub fn frame_vector(spec: &CurveSpec, s: f64, i: usize) -> Vec<f64> {
    vector_at(spec, s, i)
}

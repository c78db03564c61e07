//! Serializable reports and theorem verdicts.
//!
//! JSON output is deterministic: struct fields serialize in declaration
//! order and floats use the shortest representation that parses back to the
//! same value.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classify::{classify_samples, sample_along_curve, Classification, Sample, SampleError};
use crate::dsl::CurveSpec;
use crate::verify::{
    orthogonality_checks, verify_helix_theorems, verify_slant_theorems, HypothesisNotMet, TheoremResiduals,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail => f.write_str("FAIL"),
            Verdict::NotApplicable(reason) => write!(f, "NOT-APPLICABLE ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownVerdict(pub String);

impl fmt::Display for UnknownVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown verdict {:?}", self.0)
    }
}

impl FromStr for Verdict {
    type Err = UnknownVerdict;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PASS" => Ok(Verdict::Pass),
            "FAIL" => Ok(Verdict::Fail),
            _ => s
                .strip_prefix("NOT-APPLICABLE (")
                .and_then(|r| r.strip_suffix(')'))
                .map(|r| Verdict::NotApplicable(r.to_string()))
                .ok_or_else(|| UnknownVerdict(s.to_string())),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    /// `checks` holds one entry per residual: `None` when it could not be
    /// computed, otherwise whether it is within its bound.
    fn decide(hypothesis: Result<(), HypothesisNotMet>, checks: &[Option<bool>]) -> Verdict {
        match hypothesis {
            Err(reason) => Verdict::NotApplicable(reason.to_string()),
            Ok(()) if checks.iter().all(|c| *c == Some(true)) => Verdict::Pass,
            Ok(()) => Verdict::Fail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub thm31: Verdict,
    pub thm32: Verdict,
    pub thm33: Verdict,
    pub cor31: Verdict,
    pub thm41: Verdict,
    pub thm42: Verdict,
    pub thm43: Verdict,
    pub cor41: Verdict,
}

impl Verdicts {
    pub fn all(&self) -> [(&'static str, &Verdict); 8] {
        [
            ("thm31", &self.thm31),
            ("thm32", &self.thm32),
            ("thm33", &self.thm33),
            ("cor31", &self.cor31),
            ("thm41", &self.thm41),
            ("thm42", &self.thm42),
            ("thm43", &self.thm43),
            ("cor41", &self.cor41),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub dimension: usize,
    pub components: Vec<String>,
    pub field: String,
    pub s_range: [f64; 2],
    pub samples: usize,
    pub tol_const: f64,
    pub tol_frame: f64,
}

impl From<&CurveSpec> for SpecEcho {
    fn from(spec: &CurveSpec) -> Self {
        SpecEcho {
            dimension: spec.dimension,
            components: spec.component_sources.clone(),
            field: spec.field_source.clone(),
            s_range: spec.s_range,
            samples: spec.samples,
            tol_const: spec.tol_const,
            tol_frame: spec.tol_frame,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrthogonalityMode {
    /// Parallel gradient and the matching helix/slant property hold.
    Checked,
    /// Parallel gradient but neither property holds; maxima are informative only.
    Diagnostic,
    /// The gradient is not parallel.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Threshold the verdicts were judged against.
    pub tolerance: f64,
    pub orthogonality_mode: OrthogonalityMode,
    /// `max |<∇f, V_2>|`.
    pub max_ip_second: f64,
    /// `max |<∇f, V_{n-1}>|`.
    pub max_ip_penultimate: f64,
    pub max_orthonormality_defect: f64,
    pub max_frenet_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleTableRow {
    pub s: f64,
    pub k: Vec<f64>,
    pub h: Vec<f64>,
    /// `H*_1 … H*_{n-2}`.
    pub hstar: Vec<f64>,
    pub grad_norm: f64,
    pub ip_tangent: f64,
    pub ip_last: f64,
}

impl From<&Sample> for SampleTableRow {
    fn from(x: &Sample) -> Self {
        SampleTableRow {
            s: x.row.s,
            k: x.frenet.curvatures.iter().map(|j| j.value()).collect(),
            h: x.harmonic.h.iter().map(|j| j.value()).collect(),
            hstar: x.harmonic.hstar.iter().skip(1).map(|j| j.value()).collect(),
            grad_norm: x.row.grad_norm,
            ip_tangent: x.row.ip_tangent,
            ip_last: x.row.ip_last,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub spec: SpecEcho,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub spec: SpecEcho,
    pub classification: Classification,
    pub residuals: TheoremResiduals,
    pub verdicts: Verdicts,
    pub diagnostics: Diagnostics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleTableRow>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VerifyOptions {
    /// Overrides the document's `tol_const` as the verdict threshold.
    pub tolerance: Option<f64>,
    pub include_samples: bool,
}

pub fn classification_report(spec: &CurveSpec) -> Result<ClassificationReport, SampleError> {
    let samples = sample_along_curve(spec)?;
    Ok(ClassificationReport {
        spec: spec.into(),
        classification: classify_samples(&samples, spec.tol_const).expect("non-empty grid"),
    })
}

/// Verdicts from residuals. Residuals that scale with `∇f` are compared
/// against `tol · max(1, mean ‖∇f‖)`.
pub fn judge(
    residuals: &TheoremResiduals,
    helix: Result<(), HypothesisNotMet>,
    slant: Result<(), HypothesisNotMet>,
    tol: f64,
    tol_frame: f64,
    grad_scale: f64,
) -> Verdicts {
    let h = &residuals.helix;
    let sl = &residuals.slant;
    let scaled = tol * grad_scale.max(1.0);
    let below = |v: Option<f64>, bound: f64| v.map(|x| x <= bound);
    let nonzero = |v: Option<f64>| v.map(|x| x > tol_frame);
    Verdicts {
        thm31: Verdict::decide(helix, &[below(h.sys_helix, scaled)]),
        thm32: Verdict::decide(helix, &[below(h.axis_helix, scaled)]),
        thm33: Verdict::decide(
            helix,
            &[
                below(h.sumsq_helix_spread, tol),
                below(h.tan_identity, tol),
                nonzero(h.hn2_min),
            ],
        ),
        cor31: Verdict::decide(helix, &[below(h.cor31, tol)]),
        thm41: Verdict::decide(slant, &[below(sl.sys_slant, scaled)]),
        thm42: Verdict::decide(slant, &[below(sl.axis_slant, scaled)]),
        thm43: Verdict::decide(slant, &[below(sl.sumsq_slant_spread, tol), nonzero(sl.hn2star_min)]),
        cor41: Verdict::decide(slant, &[below(sl.cor41, tol)]),
    }
}

pub fn verification_report(spec: &CurveSpec, options: VerifyOptions) -> Result<VerificationReport, SampleError> {
    let samples = sample_along_curve(spec)?;
    Ok(verification_report_from_samples(spec, &samples, options))
}

pub fn verification_report_from_samples(
    spec: &CurveSpec,
    samples: &[Sample],
    options: VerifyOptions,
) -> VerificationReport {
    let classification = classify_samples(samples, spec.tol_const).expect("non-empty grid");
    let helix = verify_helix_theorems(samples, &classification);
    let slant = verify_slant_theorems(samples, &classification);
    let residuals = TheoremResiduals {
        helix: helix.residuals,
        slant: slant.residuals,
    };
    let tol = options.tolerance.unwrap_or(spec.tol_const);
    let verdicts = judge(
        &residuals,
        helix.hypothesis,
        slant.hypothesis,
        tol,
        spec.tol_frame,
        classification.means.grad_norm,
    );

    let (max_ip_second, max_ip_penultimate) = orthogonality_checks(samples);
    let orthogonality_mode = if !classification.parallel_gradient {
        OrthogonalityMode::Skipped
    } else if classification.helix || classification.slant {
        OrthogonalityMode::Checked
    } else {
        OrthogonalityMode::Diagnostic
    };
    let max_orthonormality_defect = samples
        .iter()
        .map(|x| x.frenet.orthonormality_defect())
        .fold(0.0, f64::max);
    let max_frenet_residual = samples
        .iter()
        .map(|x| x.frenet.frenet_residual().ok())
        .try_fold(0.0, |acc: f64, r| r.map(|r| acc.max(r)));

    VerificationReport {
        spec: spec.into(),
        classification,
        residuals,
        verdicts,
        diagnostics: Diagnostics {
            tolerance: tol,
            orthogonality_mode,
            max_ip_second,
            max_ip_penultimate,
            max_orthonormality_defect,
            max_frenet_residual,
        },
        samples: options
            .include_samples
            .then(|| samples.iter().map(SampleTableRow::from).collect()),
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.3e}"))
}

fn write_classification(out: &mut String, spec: &SpecEcho, c: &Classification) {
    use std::fmt::Write;
    let _ = writeln!(out, "dimension        {}", spec.dimension);
    for (i, comp) in spec.components.iter().enumerate() {
        let _ = writeln!(out, "x{}(s)            {comp}", i + 1);
    }
    let _ = writeln!(out, "f                {}", spec.field);
    let _ = writeln!(
        out,
        "s range          [{}, {}], {} samples",
        spec.s_range[0], spec.s_range[1], spec.samples
    );
    let _ = writeln!(out, "eikonal          {}", c.eikonal);
    let _ = writeln!(out, "helix            {}", c.helix);
    let _ = writeln!(out, "slant            {}", c.slant);
    let _ = writeln!(out, "parallel grad    {}", c.parallel_gradient);
    let _ = writeln!(out, "theta            {}", fmt_opt(c.theta));
    let _ = writeln!(
        out,
        "grad_norm        {:.12} (spread {:.3e})",
        c.means.grad_norm, c.spreads.grad_norm
    );
    let _ = writeln!(
        out,
        "<grad f, V1>     {:.12} (spread {:.3e})",
        c.means.ip_tangent, c.spreads.ip_tangent
    );
    let _ = writeln!(
        out,
        "<grad f, Vn>     {:.12} (spread {:.3e})",
        c.means.ip_last, c.spreads.ip_last
    );
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_classification(&mut out, &self.spec, &self.classification);
        out
    }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        write_classification(&mut out, &self.spec, &self.classification);
        let h = &self.residuals.helix;
        let s = &self.residuals.slant;
        out.push_str("\nresiduals\n");
        for (name, v) in [
            ("sys_helix", h.sys_helix),
            ("axis_helix", h.axis_helix),
            ("sumsq_helix_spread", h.sumsq_helix_spread),
            ("tan_identity", h.tan_identity),
            ("hn2_min", h.hn2_min),
            ("cor31", h.cor31),
            ("sys_slant", s.sys_slant),
            ("axis_slant", s.axis_slant),
            ("sumsq_slant_spread", s.sumsq_slant_spread),
            ("hn2star_min", s.hn2star_min),
            ("cor41", s.cor41),
        ] {
            let _ = writeln!(out, "  {name:<20} {}", fmt_opt(v));
        }
        let _ = writeln!(out, "\nverdicts (tolerance {:e})", self.diagnostics.tolerance);
        for (name, v) in self.verdicts.all() {
            let _ = writeln!(out, "  {name:<6} {v}");
        }
        if let Some(rows) = &self.samples {
            out.push_str("\nsamples\n  s  k...  H...  H*...  grad_norm  ip_tangent  ip_last\n");
            for r in rows {
                let join = |v: &[f64]| v.iter().map(|x| format!("{x:.10}")).collect::<Vec<_>>().join(" ");
                let _ = writeln!(
                    out,
                    "  {:.10}  {}  {}  {}  {:.10}  {:.10}  {:.10}",
                    r.s,
                    join(&r.k),
                    join(&r.h),
                    join(&r.hstar),
                    r.grad_norm,
                    r.ip_tangent,
                    r.ip_last
                );
            }
        }
        out
    }
}

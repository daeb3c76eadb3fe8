use std::fmt::Display;

use btf_core::frames::AngleReport;
use btf_core::fusion::{chordal_angles, verify_tight_fusion, FusionFrame};
use btf_core::numerics::{norm, Complex, Matrix};
use btf_core::{Classification, Frame};

/// Ordered `key=value` lines plus a list of named checks.
///
/// Keys are printed in insertion order, so every command emits them in a
/// fixed order. Checks are summarized at the end as `checks_passed` and
/// `checks_failed`, each failure followed by a `witness.<check>` line.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(String, String)>,
    passed: Vec<String>,
    failed: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.passed.push(name.to_string());
        } else {
            self.failed.push((name.to_string(), witness()));
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &(String, String)> {
        self.failed.iter()
    }

    /// The `key=value` lines alone, without the check summary.
    pub fn render_values(&self) -> String {
        self.lines
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = self.render_values();
        let names: Vec<&str> = self.failed.iter().map(|(n, _)| n.as_str()).collect();
        out.push_str(&format!("checks_passed={}\n", self.passed.join(",")));
        out.push_str(&format!("checks_failed={}\n", names.join(",")));
        for (name, witness) in &self.failed {
            out.push_str(&format!("witness.{name}={witness}\n"));
        }
        out
    }
}

pub fn list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|x| format!("{x:.7}")).collect();
    format!("[{}]", parts.join(","))
}

pub fn counts(values: &[usize]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub fn scalar(x: f64) -> String {
    format!("{x:.10}")
}

/// Column whose norm is furthest from 1.
fn worst_column(frame: &Frame) -> (usize, f64) {
    (0..frame.n())
        .map(|j| (j, norm(&frame.column(j))))
        .max_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
        .expect("frames have at least one column")
}

/// Largest entry of `FF* - aI` with `a = tr(FF*)/m`.
fn tightness_defect(frame: &Frame) -> (f64, f64) {
    let s = frame.synthesis();
    let ff = s.matmul(&s.conj_transpose()).expect("conformable");
    let a = ff.trace().re / frame.m() as f64;
    let target = Matrix::identity(frame.m()).scale(Complex::new(a, 0.0));
    (a, ff.max_abs_diff(&target))
}

/// Row of the Gram matrix whose squared sum is furthest from `n/m`.
fn worst_row_sum(frame: &Frame) -> (usize, f64) {
    let gram = frame.gram();
    (0..frame.n())
        .map(|j| {
            (
                j,
                (0..frame.n())
                    .map(|k| gram.get(j, k).norm_sqr())
                    .sum::<f64>(),
            )
        })
        .max_by(|a, b| {
            let target = frame.n() as f64 / frame.m() as f64;
            (a.1 - target).abs().total_cmp(&(b.1 - target).abs())
        })
        .expect("frames have at least one column")
}

fn push_angles(report: &mut Report, angles: &AngleReport) {
    report.push("angles", list(&angles.angles));
    match &angles.multiplicities {
        Some(m) => report.push("multiplicities", counts(m)),
        None => report.push("multiplicities", "-"),
    }
    report.push("welch", scalar(angles.welch));
    report.push("coherence", scalar(angles.coherence));
}

/// Certifies a frame as a unit-norm tight frame and records its angle data.
pub fn frame(report: &mut Report, frame: &Frame) {
    let cert = frame.certify();
    report.push("classification", cert.classification);
    report.push("field", cert.field);
    report.push("n", cert.n);
    report.push("m", cert.m);
    match cert.tightness {
        Some(a) => report.push("a", scalar(a)),
        None => report.push("a", "-"),
    }
    match &cert.angles {
        Some(angles) => push_angles(report, angles),
        None => {
            for key in ["angles", "multiplicities", "welch", "coherence"] {
                report.push(key, "-");
            }
        }
    }
    report.push("flat", cert.flat);

    report.check("unit_norm", cert.unit_norm, || {
        let (j, nrm) = worst_column(frame);
        format!("column {j} has norm {nrm:.12}")
    });
    report.check("tight", cert.tightness.is_some(), || {
        let (a, defect) = tightness_defect(frame);
        format!("FF* differs from {a:.12}*I by {defect:e}")
    });
    if cert.unit_norm && cert.tightness.is_some() {
        report.check("row_identity", cert.row_identity, || {
            let (j, sum) = worst_row_sum(frame);
            format!("row {j} of |G|^2 sums to {sum:.12}")
        });
    }
    if cert.classification == Classification::Btf {
        let equi = cert
            .angles
            .as_ref()
            .is_some_and(|a| a.multiplicities.is_some());
        report.check("equidistributed", equi, || {
            "vectors see different angle counts".into()
        });
    }
}

/// Records fusion-frame data and checks tightness.
pub fn fusion(report: &mut Report, ff: &FusionFrame) {
    report.push("fusion_n", ff.n());
    report.push("fusion_l", ff.l());
    report.push("fusion_m", ff.m());
    let tight = verify_tight_fusion(ff);
    match tight {
        Some(a) => report.push("fusion_a", scalar(a)),
        None => report.push("fusion_a", "-"),
    }
    report.push("chordal_angles", list(&chordal_angles(ff)));
    report.check("fusion_tight", tight.is_some(), || {
        let sum = ff.sum();
        let a = sum.trace().re / ff.m() as f64;
        let defect = sum.max_abs_diff(&Matrix::identity(ff.m()).scale(Complex::new(a, 0.0)));
        format!("sum of projections differs from {a:.12}*I by {defect:e}")
    });
}

//! A smooth one-parameter family of real biangular `(6,3)` frames.
//!
//! `F(t)` starts at two copies of the standard basis (`t = 1`), passes
//! through an ETF at `t* = ((5+√5)/2)^{1/4}`, and tends to the standard basis
//! together with its negatives.

use crate::error::{Error, Result};
use crate::frames::{Field, Frame};
use crate::numerics::{cluster_with_gap, sets_match, Matrix, Tolerance};

fn check_domain(t: f64) -> Result<()> {
    if t.is_nan() || t < 1.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "curve parameter must be a finite t >= 1, got {t}"
        )));
    }
    Ok(())
}

/// The 3x6 synthesis matrix `F(t)`.
pub fn curve_matrix(t: f64) -> Result<Matrix> {
    check_domain(t)?;
    let t4 = t.powi(4);
    let a = 1.0 / (t * t);
    let b = ((t4 - 1.0) / t4).sqrt();
    Matrix::from_real_rows(&[
        vec![a, a, 0.0, 0.0, b, -b],
        vec![0.0, 0.0, b, -b, a, a],
        vec![b, -b, a, a, 0.0, 0.0],
    ])
}

pub fn curve_frame(t: f64, tol: Tolerance) -> Result<Frame> {
    Frame::new(curve_matrix(t)?, Field::Real, tol)
}

/// `{|2 - t⁴|/t⁴, √(t⁴-1)/t⁴}`, sorted, merged when the two agree within
/// `tol.cluster_tol()`.
pub fn curve_angles(t: f64, tol: &Tolerance) -> Result<Vec<f64>> {
    check_domain(t)?;
    let t4 = t.powi(4);
    let mut v = vec![(2.0 - t4).abs() / t4, (t4 - 1.0).sqrt() / t4];
    v.sort_by(f64::total_cmp);
    Ok(cluster_with_gap(&v, tol.cluster_tol()))
}

/// `((5+√5)/2)^{1/4}`, where both angles equal `1/√5`.
pub fn etf_parameter() -> f64 {
    ((5.0 + 5f64.sqrt()) / 2.0).powf(0.25)
}

/// The limit of `F(t)` as `t → ∞`: the standard basis and its negatives.
pub fn limit_matrix() -> Matrix {
    Matrix::from_real_rows(&[
        vec![0.0, 0.0, 0.0, 0.0, 1.0, -1.0],
        vec![0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
        vec![1.0, -1.0, 0.0, 0.0, 0.0, 0.0],
    ])
    .expect("constant shape")
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairComparison {
    pub t1: f64,
    pub t2: f64,
    pub inequivalent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequivalenceReport {
    pub pairs: Vec<PairComparison>,
    /// `(t, squared angles)` for every grid point.
    pub squared_angles: Vec<(f64, Vec<f64>)>,
}

/// Compares the angle sets of `F(t)` across a grid. Distinct angle sets
/// mean the frames are not equivalent.
pub fn inequivalence_witness(grid: &[f64], tol: &Tolerance) -> Result<InequivalenceReport> {
    let angles: Vec<Vec<f64>> = grid
        .iter()
        .map(|&t| curve_angles(t, tol))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            if grid[i] == grid[j] {
                return Err(Error::InvalidParameter(format!(
                    "grid value {} repeated",
                    grid[i]
                )));
            }
            pairs.push(PairComparison {
                t1: grid[i],
                t2: grid[j],
                inequivalent: !sets_match(&angles[i], &angles[j], tol.cluster_tol()),
            });
        }
    }
    let squared_angles = grid
        .iter()
        .zip(&angles)
        .map(|(&t, a)| (t, a.iter().map(|x| x * x).collect()))
        .collect();
    Ok(InequivalenceReport {
        pairs,
        squared_angles,
    })
}

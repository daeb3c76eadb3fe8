//! Unit-norm tight frames and their certification predicates.
//!
//! A [`Frame`] is stored through its synthesis matrix: the `m x n` matrix
//! whose columns are the frame vectors. Everything below (tightness, angle
//! sets, multiplicities, flatness, classification) is computed numerically
//! and decided against the frame's [`Tolerance`].

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{cluster, Complex, Matrix, Tolerance};

/// Scalar field a frame lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "REAL",
            Field::Complex => "COMPLEX",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    synthesis: Matrix,
    field: Field,
    tol: Tolerance,
}

/// Frame angles and their per-vector statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleReport {
    /// Distinct values of `|<f_j, f_j'>|`, `j != j'`, sorted.
    pub angles: Vec<f64>,
    /// Per-angle counts seen from every vector; present only when every
    /// vector sees the same counts.
    pub multiplicities: Option<Vec<usize>>,
    pub coherence: f64,
    pub welch: f64,
    pub d: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Etf,
    Btf,
    Angular(usize),
    NotTight,
    NotUnitNorm,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Etf => f.write_str("ETF"),
            Classification::Btf => f.write_str("BTF"),
            Classification::Angular(d) => write!(f, "{d}-angular"),
            Classification::NotTight => f.write_str("not-tight"),
            Classification::NotUnitNorm => f.write_str("not-unit-norm"),
        }
    }
}

/// Everything [`Frame::certify`] learns about a frame in one pass.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub n: usize,
    pub m: usize,
    pub field: Field,
    pub unit_norm: bool,
    pub tightness: Option<f64>,
    pub flat: bool,
    pub row_identity: bool,
    pub angles: Option<AngleReport>,
    pub classification: Classification,
}

impl Frame {
    /// Wraps a synthesis matrix. Requires `n >= m >= 1`; a `Real` tag
    /// additionally requires every imaginary part to be within `eq_tol`.
    pub fn new(synthesis: Matrix, field: Field, tol: Tolerance) -> Result<Self> {
        let (m, n) = (synthesis.rows(), synthesis.cols());
        if m == 0 || n < m {
            return Err(Error::Dimension(format!(
                "a frame needs n >= m >= 1, got m={m}, n={n}"
            )));
        }
        if field == Field::Real && !synthesis.is_real(tol.eq_tol()) {
            return Err(Error::InvalidParameter(
                "real frame has non-real entries".into(),
            ));
        }
        Ok(Self {
            synthesis,
            field,
            tol,
        })
    }

    /// Like [`Frame::new`], tagging the frame real when all entries are.
    pub fn detect(synthesis: Matrix, tol: Tolerance) -> Result<Self> {
        let field = if synthesis.is_real(tol.eq_tol()) {
            Field::Real
        } else {
            Field::Complex
        };
        Self::new(synthesis, field, tol)
    }

    pub fn synthesis(&self) -> &Matrix {
        &self.synthesis
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn with_tol(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    /// Number of frame vectors.
    pub fn n(&self) -> usize {
        self.synthesis.cols()
    }

    /// Ambient dimension.
    pub fn m(&self) -> usize {
        self.synthesis.rows()
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        self.synthesis.column(j)
    }

    /// Gram matrix `F* F`.
    pub fn gram(&self) -> Matrix {
        self.synthesis
            .conj_transpose()
            .matmul(&self.synthesis)
            .expect("F* and F are conformable")
    }

    fn frame_operator(&self) -> Matrix {
        self.synthesis
            .matmul(&self.synthesis.conj_transpose())
            .expect("F and F* are conformable")
    }

    pub fn is_unit_norm(&self) -> bool {
        let eq = self.tol.eq_tol();
        (0..self.n()).all(|j| {
            let sq: f64 = (0..self.m())
                .map(|i| self.synthesis.get(i, j).norm_sqr())
                .sum();
            (sq.sqrt() - 1.0).abs() <= eq
        })
    }

    /// Returns the tightness parameter `a` when `F F* = a I`.
    ///
    /// Unit-norm frames are tested against `a = n/m`; other frames get `a`
    /// fitted as `trace(F F*)/m`.
    pub fn tightness(&self) -> Option<f64> {
        let s = self.frame_operator();
        let m = self.m() as f64;
        let a = if self.is_unit_norm() {
            self.n() as f64 / m
        } else {
            s.trace().re / m
        };
        if a <= 0.0 {
            return None;
        }
        let target = Matrix::identity(self.m()).scale(Complex::new(a, 0.0));
        (s.max_abs_diff(&target) <= self.tol.eq_tol()).then_some(a)
    }

    pub fn is_flat(&self) -> bool {
        let target = 1.0 / (self.m() as f64).sqrt();
        self.synthesis
            .entries()
            .iter()
            .all(|z| (z.norm() - target).abs() <= self.tol.eq_tol())
    }

    pub fn angle_report(&self) -> Result<AngleReport> {
        if !self.is_unit_norm() {
            return Err(Error::Certification(
                "angle set requires a unit-norm frame".into(),
            ));
        }
        let n = self.n();
        let gram = self.gram();
        let mut values = Vec::with_capacity(n * (n - 1) / 2);
        for j in 0..n {
            for k in j + 1..n {
                values.push(gram.get(j, k).norm());
            }
        }
        let angles = cluster(&values, &self.tol);
        let nearest = |x: f64| -> usize {
            angles
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
                .map(|(i, _)| i)
                .expect("angle set is non-empty when pairs exist")
        };
        let mut counts = vec![vec![0usize; angles.len()]; n];
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    counts[j][nearest(gram.get(j, k).norm())] += 1;
                }
            }
        }
        let equidistributed = counts.windows(2).all(|w| w[0] == w[1]);
        let multiplicities = (equidistributed && n > 1).then(|| counts[0].clone());
        Ok(AngleReport {
            coherence: angles.last().copied().unwrap_or(0.0),
            welch: welch_or_zero(n, self.m()),
            d: angles.len(),
            multiplicities,
            angles,
        })
    }

    /// Checks `Σ_j' |<f_j, f_j'>|^2 = n/m` for every `j`, the sum running
    /// over all `j'` including `j' = j`.
    pub fn row_identity_check(&self) -> bool {
        let n = self.n();
        let target = n as f64 / self.m() as f64;
        let gram = self.gram();
        (0..n).all(|j| {
            let sum: f64 = (0..n).map(|k| gram.get(j, k).norm_sqr()).sum();
            (sum - target).abs() <= n as f64 * self.tol.eq_tol()
        })
    }

    pub fn classify(&self) -> Classification {
        self.certify().classification
    }

    pub fn certify(&self) -> Certificate {
        let unit_norm = self.is_unit_norm();
        let tightness = self.tightness();
        let angles = if unit_norm {
            self.angle_report().ok()
        } else {
            None
        };
        let classification = match (&angles, tightness) {
            (None, _) => Classification::NotUnitNorm,
            (Some(_), None) => Classification::NotTight,
            (Some(r), Some(_)) => match r.d {
                1 if (r.coherence - r.welch).abs() <= self.tol.cluster_tol() => Classification::Etf,
                2 => Classification::Btf,
                d => Classification::Angular(d),
            },
        };
        Certificate {
            n: self.n(),
            m: self.m(),
            field: self.field,
            unit_norm,
            tightness,
            flat: self.is_flat(),
            row_identity: unit_norm && tightness.is_some() && self.row_identity_check(),
            angles,
            classification,
        }
    }
}

/// `W_{n,m} = sqrt((n-m)/(m(n-1)))`, the lower bound on coherence.
pub fn welch_constant(n: usize, m: usize) -> Result<f64> {
    if m == 0 || n <= m {
        return Err(Error::InvalidParameter(format!(
            "Welch constant needs n > m >= 1, got n={n}, m={m}"
        )));
    }
    let (n, m) = (n as f64, m as f64);
    Ok(((n - m) / (m * (n - 1.0))).sqrt())
}

/// Welch constant extended by `0` to orthonormal bases (`n = m`).
pub(crate) fn welch_or_zero(n: usize, m: usize) -> f64 {
    welch_constant(n, m).unwrap_or(0.0)
}

/// Angle multiplicities `(τ1, τ2)` forced on a biangular `(n,m)`-frame with
/// frame angles `a1 != a2`.
///
/// Fails when the closed form is not integral, which rules the parameter
/// combination out as an equidistributed BTF.
pub fn btf_multiplicities(
    n: usize,
    m: usize,
    a1: f64,
    a2: f64,
    tol: &Tolerance,
) -> Result<(usize, usize)> {
    if m == 0 || n <= m {
        return Err(Error::InvalidParameter(format!(
            "need n > m >= 1, got n={n}, m={m}"
        )));
    }
    let valid = |a: f64| (0.0..=1.0 + tol.eq_tol()).contains(&a);
    if !valid(a1) || !valid(a2) {
        return Err(Error::InvalidParameter(format!(
            "angles must lie in [0,1], got {a1}, {a2}"
        )));
    }
    if (a1 - a2).abs() <= tol.cluster_tol() {
        return Err(Error::InvalidParameter(
            "degenerate angle pair a1 = a2".into(),
        ));
    }
    let w2 = (n - m) as f64 / (m * (n - 1)) as f64;
    let (s1, s2) = (a1 * a1, a2 * a2);
    let nm1 = (n - 1) as f64;
    let tau1 = nm1 * (s2 - w2) / (s2 - s1);
    let tau2 = nm1 * (s1 - w2) / (s1 - s2);
    let slack = tol.eq_tol() * nm1;
    let round = |x: f64| -> Result<usize> {
        let r = x.round();
        if (x - r).abs() > slack || r < 0.0 {
            return Err(Error::Certification(format!(
                "multiplicity {x} is not a nonnegative integer"
            )));
        }
        Ok(r as usize)
    };
    let (t1, t2) = (round(tau1)?, round(tau2)?);
    if t1 + t2 != n - 1 {
        return Err(Error::Certification(format!(
            "multiplicities {t1}+{t2} do not sum to n-1={}",
            n - 1
        )));
    }
    Ok((t1, t2))
}

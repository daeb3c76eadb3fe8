//! Fusion frames of equal-rank projections and the Plücker embedding.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::frames::{Classification, Field, Frame};
use crate::numerics::{cluster, hermitian_eigenvalues, inner, norm, Complex, Matrix, Tolerance};

/// An orthogonal projection `P = P* = P²` of rank `l` on `F^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    matrix: Matrix,
    rank: usize,
}

impl Projection {
    pub fn new(matrix: Matrix, tol: &Tolerance) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "projection must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let m = matrix.rows();
        let eq = tol.eq_tol();
        let herm = matrix.max_abs_diff(&matrix.conj_transpose());
        if herm > eq {
            return Err(Error::Verification(format!(
                "P differs from P* by {herm:e}"
            )));
        }
        let idem = matrix.max_abs_diff(&matrix.matmul(&matrix)?);
        if idem > eq {
            return Err(Error::Verification(format!(
                "P differs from P^2 by {idem:e}"
            )));
        }
        let tr = matrix.trace().re;
        let rank = tr.round();
        if rank < 0.0 || (tr - rank).abs() > m as f64 * eq {
            return Err(Error::Verification(format!(
                "trace {tr} is not an integer rank"
            )));
        }
        Ok(Self {
            matrix,
            rank: rank as usize,
        })
    }

    /// `v v*` for a unit vector `v`.
    pub fn rank_one(v: &[Complex], tol: &Tolerance) -> Result<Self> {
        let m = v.len();
        Self::new(Matrix::from_fn(m, m, |i, j| v[i] * v[j].conj()), tol)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// `n` projections of common rank `l` on a common space `F^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionFrame {
    projections: Vec<Projection>,
    tol: Tolerance,
}

impl FusionFrame {
    pub fn new(projections: Vec<Projection>, tol: Tolerance) -> Result<Self> {
        let first = projections.first().ok_or_else(|| {
            Error::InvalidParameter("fusion frame needs at least one projection".into())
        })?;
        let (l, m) = (first.rank, first.dim());
        if let Some(j) = projections.iter().position(|p| p.dim() != m) {
            return Err(Error::Dimension(format!(
                "projection {j} acts on dimension {}, expected {m}",
                projections[j].dim()
            )));
        }
        if let Some(j) = projections.iter().position(|p| p.rank != l) {
            return Err(Error::Dimension(format!(
                "projection {j} has rank {}, expected {l}",
                projections[j].rank
            )));
        }
        Ok(Self { projections, tol })
    }

    pub fn projections(&self) -> &[Projection] {
        &self.projections
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn n(&self) -> usize {
        self.projections.len()
    }

    pub fn l(&self) -> usize {
        self.projections[0].rank
    }

    pub fn m(&self) -> usize {
        self.projections[0].dim()
    }

    pub fn sum(&self) -> Matrix {
        let m = self.m();
        self.projections.iter().fold(Matrix::zeros(m, m), |acc, p| {
            acc.add(p.matrix()).expect("equal dimensions")
        })
    }
}

/// Returns `a = nl/m` when `Σ P_j = a I`.
pub fn verify_tight_fusion(ff: &FusionFrame) -> Option<f64> {
    let a = (ff.n() * ff.l()) as f64 / ff.m() as f64;
    let target = Matrix::identity(ff.m()).scale(Complex::new(a, 0.0));
    (ff.sum().max_abs_diff(&target) <= ff.n() as f64 * ff.tol.eq_tol()).then_some(a)
}

/// `trace(P_j P_j')` for `j < j'`, row-major over pairs.
pub fn pair_traces(ff: &FusionFrame) -> Vec<f64> {
    let n = ff.n();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 0..n {
        for k in j + 1..n {
            let prod = ff.projections[j]
                .matrix
                .matmul(&ff.projections[k].matrix)
                .expect("equal dimensions");
            out.push(prod.trace().re);
        }
    }
    out
}

/// Distinct values of `sqrt(trace(P_j P_j'))`, `j != j'`, sorted.
pub fn chordal_angles(ff: &FusionFrame) -> Vec<f64> {
    let values: Vec<f64> = pair_traces(ff)
        .into_iter()
        .map(|t| t.max(0.0).sqrt())
        .collect();
    cluster(&values, &ff.tol)
}

/// The rank-one fusion frame `{f_j f_j*}` of a unit-norm tight frame.
pub fn frame_to_fusion(frame: &Frame) -> Result<FusionFrame> {
    if !frame.is_unit_norm() || frame.tightness().is_none() {
        return Err(Error::InvalidParameter(
            "frame must be unit-norm and tight".into(),
        ));
    }
    let projections = (0..frame.n())
        .map(|j| Projection::rank_one(&frame.column(j), frame.tol()))
        .collect::<Result<_>>()?;
    FusionFrame::new(projections, *frame.tol())
}

/// An `l x m` matrix with orthonormal rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    matrix: Matrix,
}

impl Generator {
    pub fn new(matrix: Matrix, tol: &Tolerance) -> Result<Self> {
        let gg = matrix.matmul(&matrix.conj_transpose())?;
        let dev = gg.max_abs_diff(&Matrix::identity(matrix.rows()));
        if dev > tol.eq_tol() {
            return Err(Error::Verification(format!(
                "generator rows are not orthonormal (deviation {dev:e})"
            )));
        }
        Ok(Self { matrix })
    }

    /// Gram–Schmidt on the rows of `matrix`, which must be independent.
    pub fn orthonormalized(matrix: &Matrix, tol: &Tolerance) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = (0..matrix.rows()).map(|i| matrix.row(i).to_vec()).collect();
        let mut basis: Vec<Vec<Complex>> = Vec::new();
        for (i, r) in rows.into_iter().enumerate() {
            let v = residual(&r, &basis);
            let len = norm(&v);
            if len <= tol.eq_tol() {
                return Err(Error::InvalidParameter(format!(
                    "row {i} depends on the previous rows"
                )));
            }
            basis.push(v.iter().map(|z| z / len).collect());
        }
        Self::new(rows_to_matrix(&basis, matrix.cols()), tol)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn l(&self) -> usize {
        self.matrix.rows()
    }

    pub fn m(&self) -> usize {
        self.matrix.cols()
    }

    /// `G* G`, the projection this generator produces.
    pub fn projection(&self) -> Matrix {
        self.matrix
            .conj_transpose()
            .matmul(&self.matrix)
            .expect("conformable")
    }
}

fn residual(v: &[Complex], basis: &[Vec<Complex>]) -> Vec<Complex> {
    let mut r = v.to_vec();
    for b in basis {
        let c = inner(&r, b);
        r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    r
}

fn rows_to_matrix(rows: &[Vec<Complex>], cols: usize) -> Matrix {
    Matrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

/// Values within this of the maximum count as ties when choosing pivots.
const TIE_MARGIN: f64 = 1e-9;

/// A deterministic generator for `P`: `G` with orthonormal rows and `G* G = P`.
///
/// The rows are conjugates of an orthonormal basis of the range of `P`, so
/// for a complex rank-one `P = f f*` the generator row is `conj(f)` up to phase.
///
/// The eigenvalues of `P` must lie within `10 * eq_tol` of `{0, 1}`, with
/// `rank` of them at 1. The basis is built by pivoted Gram–Schmidt on the
/// columns of `P` (largest residual first, lowest index among ties), and each
/// row is rotated so its first largest-magnitude coordinate is real positive.
pub fn generator(p: &Projection, tol: &Tolerance) -> Result<Generator> {
    let m = p.dim();
    let eig_tol = 10.0 * tol.eq_tol();
    let eig = hermitian_eigenvalues(&p.matrix)?;
    if let Some(bad) = eig
        .iter()
        .find(|&&x| x.abs() > eig_tol && (x - 1.0).abs() > eig_tol)
    {
        return Err(Error::Verification(format!(
            "eigenvalue {bad} is not near 0 or 1"
        )));
    }
    let ones = eig.iter().filter(|&&x| (x - 1.0).abs() <= eig_tol).count();
    if ones != p.rank {
        return Err(Error::Verification(format!(
            "{ones} unit eigenvalues, rank is {}",
            p.rank
        )));
    }
    let columns: Vec<Vec<Complex>> = (0..m).map(|j| p.matrix.column(j)).collect();
    let mut basis: Vec<Vec<Complex>> = Vec::with_capacity(p.rank);
    let mut used = vec![false; m];
    for _ in 0..p.rank {
        let residuals: Vec<(usize, Vec<Complex>, f64)> = (0..m)
            .filter(|&j| !used[j])
            .map(|j| {
                let r = residual(&columns[j], &basis);
                let len = norm(&r);
                (j, r, len)
            })
            .collect();
        let best = residuals.iter().map(|x| x.2).fold(0.0, f64::max);
        if best <= eig_tol {
            return Err(Error::Verification(
                "column space smaller than the rank".into(),
            ));
        }
        let (j, r, len) = residuals
            .into_iter()
            .find(|x| x.2 >= best - TIE_MARGIN)
            .expect("maximum is attained");
        used[j] = true;
        basis.push(r.iter().map(|z| z / len).collect());
    }
    // P = Σ b b* over the range basis, while G* G = Σ conj(g)^T g over rows g,
    // so the rows are the conjugated basis vectors
    for row in &mut basis {
        row.iter_mut().for_each(|z| *z = z.conj());
        let peak = row.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let lead = *row
            .iter()
            .find(|z| z.norm() >= peak - TIE_MARGIN)
            .expect("non-zero row");
        let phase = lead.conj() / lead.norm();
        row.iter_mut().for_each(|z| *z *= phase);
    }
    let g = Generator::new(rows_to_matrix(&basis, m), tol)?;
    let dev = g.projection().max_abs_diff(&p.matrix);
    if dev > eig_tol {
        return Err(Error::Verification(format!(
            "generator reproduces P only to {dev:e}"
        )));
    }
    Ok(g)
}

/// All `l x l` minors of `G`, column subsets in lexicographic order.
pub fn plucker(g: &Generator) -> Vec<Complex> {
    let (l, m) = (g.l(), g.m());
    (0..m)
        .combinations(l)
        .map(|cols| g.matrix.select_columns(&cols).det().expect("square minor"))
        .collect()
}

/// `plucker(generator(P))`: a unit vector, fixed up to a global unimodular factor.
pub fn lifted_plucker(p: &Projection, tol: &Tolerance) -> Result<Vec<Complex>> {
    Ok(plucker(&generator(p, tol)?))
}

/// `C(m, l)`.
pub fn binomial(m: usize, l: usize) -> usize {
    if l > m {
        return 0;
    }
    (0..l).fold(1, |acc, i| acc * (m - i) / (i + 1))
}

fn cyclic_shift(k: usize) -> Matrix {
    // c^k with c e_{i+1} -> e_i, i.e. c[i][i+1 mod 4] = 1
    Matrix::from_fn(4, 4, |i, j| {
        if j == (i + k) % 4 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    })
}

fn sign_diagonal(j: usize) -> Matrix {
    const SIGNS: [[f64; 4]; 4] = [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ];
    Matrix::from_fn(4, 4, |a, b| {
        if a == b {
            Complex::new(SIGNS[j][a], 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    })
}

/// The 2x4 base generator: three coplanar unit vectors at 120° plus a zero column, scaled to be 1-tight.
pub fn plucker_base_generator() -> Matrix {
    let s = (2.0f64 / 3.0).sqrt();
    let h = 3f64.sqrt() / 2.0;
    Matrix::from_real_rows(&[
        vec![s, -s / 2.0, -s / 2.0, 0.0],
        vec![0.0, s * h, -s * h, 0.0],
    ])
    .expect("constant shape")
}

/// The orbit of the base generator under sign diagonals `d_j` and cyclic
/// shifts `c_k`: a tight `(16, 2, 4)` fusion frame, together with the
/// `(16, 6)` frame of lifted Plücker images in `(j, k)` order.
pub fn build_plucker_example(tol: Tolerance) -> Result<(FusionFrame, Frame)> {
    let a = plucker_base_generator();
    let mut projections = Vec::with_capacity(16);
    for j in 0..4 {
        for k in 0..4 {
            let ajk = Generator::new(a.matmul(&sign_diagonal(j))?.matmul(&cyclic_shift(k))?, &tol)?;
            projections.push(Projection::new(ajk.projection(), &tol)?);
        }
    }
    let ff = FusionFrame::new(projections, tol)?;
    if verify_tight_fusion(&ff).is_none() {
        return Err(Error::Certification(
            "orbit projections do not sum to a multiple of the identity".into(),
        ));
    }
    let columns: Vec<Vec<Complex>> = ff
        .projections
        .iter()
        .map(|p| lifted_plucker(p, &tol))
        .collect::<Result<_>>()?;
    let synthesis = Matrix::from_fn(columns[0].len(), columns.len(), |i, j| columns[j][i]);
    let frame = Frame::new(synthesis, Field::Real, tol)?;
    if frame.classify() != Classification::Etf {
        return Err(Error::Certification(format!(
            "embedded frame is {}",
            frame.classify()
        )));
    }
    Ok((ff, frame))
}

/// Whether `frame` is, column by column and up to unimodular scalars, the
/// lifted Plücker image of `ff`.
///
/// `frame` must be an ETF, `ff` must have rank at least 2 and
/// `frame.m() = C(ff.m(), ff.l())`. A non-tight `ff` yields `false`.
pub fn is_plucker_etf(frame: &Frame, ff: &FusionFrame) -> Result<bool> {
    if ff.l() < 2 {
        return Err(Error::InvalidParameter(format!(
            "Plücker ETFs need l >= 2, got l={}",
            ff.l()
        )));
    }
    if frame.classify() != Classification::Etf {
        return Err(Error::InvalidParameter(format!(
            "frame is {}, not an ETF",
            frame.classify()
        )));
    }
    let rho = binomial(ff.m(), ff.l());
    if frame.m() != rho {
        return Err(Error::Dimension(format!(
            "frame dimension {} differs from C({},{}) = {rho}",
            frame.m(),
            ff.m(),
            ff.l()
        )));
    }
    if frame.n() != ff.n() {
        return Err(Error::Dimension(format!(
            "frame has {} vectors, fusion frame has {}",
            frame.n(),
            ff.n()
        )));
    }
    if verify_tight_fusion(ff).is_none() {
        return Ok(false);
    }
    let ctol = frame.tol().cluster_tol();
    let images: Vec<Vec<Complex>> = ff
        .projections
        .iter()
        .map(|p| lifted_plucker(p, &ff.tol))
        .collect::<Result<_>>()?;
    for (j, img) in images.iter().enumerate() {
        let col = frame.column(j);
        if img
            .iter()
            .zip(&col)
            .any(|(x, y)| (x.norm() - y.norm()).abs() > ctol)
        {
            return Ok(false);
        }
        if (inner(img, &col).norm() - 1.0).abs() > ctol {
            return Ok(false);
        }
    }
    for a in 0..images.len() {
        for b in a + 1..images.len() {
            let lhs = inner(&images[a], &images[b]).norm();
            let rhs = inner(&frame.column(a), &frame.column(b)).norm();
            if (lhs - rhs).abs() > ctol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

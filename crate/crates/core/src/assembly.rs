//! Steiner BTF assembly: substitute rows of flat building blocks for the
//! ones of a Steiner matrix, plus the parameter tables and prime-power-pair
//! scan that go with it.

use std::fmt;

use crate::algebra::is_prime_power;
use crate::designs::{affine_steiner, projective_steiner, SteinerMatrix};
use crate::diffsets::{picket_fence, predicted_harmonic_angles, simplectic, singer, Params};
use crate::error::{Error, Result};
use crate::frames::{welch_constant, Classification, Field, Frame};
use crate::harmonic::harmonic_frame;
use crate::numerics::{cluster_with_gap, sets_match, Complex, Matrix, Tolerance};

/// Largest `limit` accepted by [`prime_power_pairs`].
pub const MAX_PAIR_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockMode {
    EtfBlocks,
    BtfBlocks,
}

impl BlockMode {
    /// Mode implied by a block's classification, if it is ETF or BTF.
    pub fn detect(block: &Frame) -> Option<Self> {
        match block.classify() {
            Classification::Etf => Some(Self::EtfBlocks),
            Classification::Btf => Some(Self::BtfBlocks),
            _ => None,
        }
    }
}

impl fmt::Display for BlockMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::EtfBlocks => "etf-blocks",
            Self::BtfBlocks => "btf-blocks",
        })
    }
}

/// A Steiner matrix with one building block per column.
#[derive(Clone, Debug)]
pub struct AssemblySpec {
    steiner: SteinerMatrix,
    blocks: Vec<Frame>,
    mode: BlockMode,
    t: usize,
    block_angles: Option<Vec<f64>>,
    forced: bool,
}

impl AssemblySpec {
    /// Checks the hypotheses of the construction: `v` flat tight blocks of
    /// dimension `s` and common size `t`, all ETFs or all BTFs containing
    /// the angle `1/s`, with a shared angle set.
    pub fn new(steiner: SteinerMatrix, blocks: Vec<Frame>, mode: BlockMode) -> Result<Self> {
        let t = check_shapes(&steiner, &blocks)?;
        let s = steiner.s();
        let mut shared: Option<Vec<f64>> = None;
        for (j, block) in blocks.iter().enumerate() {
            if !block.is_flat() {
                return Err(Error::InvalidParameter(format!("block {j} is not flat")));
            }
            if block.tightness().is_none() {
                return Err(Error::InvalidParameter(format!("block {j} is not tight")));
            }
            let class = block.classify();
            let wanted = match mode {
                BlockMode::EtfBlocks => Classification::Etf,
                BlockMode::BtfBlocks => Classification::Btf,
            };
            if class != wanted {
                return Err(Error::InvalidParameter(format!(
                    "block {j} is {class}, mode {mode} requires {wanted}"
                )));
            }
            let angles = block.angle_report()?.angles;
            let ctol = block.tol().cluster_tol();
            if mode == BlockMode::BtfBlocks
                && !angles.iter().any(|a| (a - 1.0 / s as f64).abs() <= ctol)
            {
                return Err(Error::InvalidParameter(format!(
                    "block {j} does not have 1/s = 1/{s} among its angles"
                )));
            }
            match &shared {
                None => shared = Some(angles),
                Some(first) if !sets_match(first, &angles, ctol) => {
                    return Err(Error::InvalidParameter(format!(
                        "block {j} has a different angle set from block 0"
                    )));
                }
                Some(_) => {}
            }
        }
        Ok(Self {
            steiner,
            blocks,
            mode,
            t,
            block_angles: shared,
            forced: false,
        })
    }

    /// Skips every hypothesis except the shapes needed to build the matrix.
    /// The result is certified empirically only.
    pub fn forced(steiner: SteinerMatrix, blocks: Vec<Frame>, mode: BlockMode) -> Result<Self> {
        let t = check_shapes(&steiner, &blocks)?;
        Ok(Self {
            steiner,
            blocks,
            mode,
            t,
            block_angles: None,
            forced: true,
        })
    }

    pub fn steiner(&self) -> &SteinerMatrix {
        &self.steiner
    }

    pub fn blocks(&self) -> &[Frame] {
        &self.blocks
    }

    pub fn mode(&self) -> BlockMode {
        self.mode
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn is_forced(&self) -> bool {
        self.forced
    }
}

fn check_shapes(steiner: &SteinerMatrix, blocks: &[Frame]) -> Result<usize> {
    let (v, s) = (steiner.v(), steiner.s());
    if blocks.len() != v {
        return Err(Error::Dimension(format!(
            "{} blocks supplied, the Steiner matrix has v={v} columns",
            blocks.len()
        )));
    }
    let t = blocks[0].n();
    for (j, b) in blocks.iter().enumerate() {
        if b.m() != s {
            return Err(Error::Dimension(format!(
                "block {j} has dimension {}, expected s={s}",
                b.m()
            )));
        }
        if b.n() != t {
            return Err(Error::Dimension(format!(
                "block {j} has {} vectors, block 0 has t={t}",
                b.n()
            )));
        }
    }
    Ok(t)
}

#[derive(Clone, Debug)]
pub struct AssembledFrame {
    pub frame: Frame,
    /// `None` for forced assemblies.
    pub predicted: Option<Vec<f64>>,
    pub empirical: Vec<f64>,
    pub certified: bool,
}

impl AssembledFrame {
    /// Index of the block a column of the assembled frame came from.
    pub fn block_of(&self, column: usize, t: usize) -> usize {
        column / t
    }
}

/// Builds `F = [F_1 ... F_v]`, where the ones of column `j`, in increasing
/// row order, receive the rows of `H_j` in increasing row order.
pub fn assemble(spec: &AssemblySpec) -> Result<AssembledFrame> {
    let st = &spec.steiner;
    let (m, v, t) = (st.m(), st.v(), spec.t);
    let mut data = vec![Complex::new(0.0, 0.0); m * t * v];
    for (j, block) in spec.blocks.iter().enumerate() {
        for (h_row, &row) in st.column_support(j).iter().enumerate() {
            for c in 0..t {
                data[row * t * v + j * t + c] = block.synthesis().get(h_row, c);
            }
        }
    }
    let field = if spec.blocks.iter().all(|b| b.field() == Field::Real) {
        Field::Real
    } else {
        Field::Complex
    };
    let tol = *spec.blocks[0].tol();
    let frame = Frame::new(Matrix::new(m, t * v, data)?, field, tol)?;
    let empirical = frame.angle_report()?.angles;
    if spec.forced {
        return Ok(AssembledFrame {
            frame,
            predicted: None,
            empirical,
            certified: false,
        });
    }

    let block_angles = spec.block_angles.clone().unwrap_or_default();
    let predicted = predicted_assembly_angles(v, st.k(), t, spec.mode, &block_angles)?;
    let expected_a = (t * v) as f64 / m as f64;
    match frame.tightness() {
        Some(a) if (a - expected_a).abs() <= tol.eq_tol() * expected_a.max(1.0) => {}
        _ => {
            return Err(Error::Certification(format!(
                "assembled frame is not tight with a = tv/m = {expected_a}"
            )))
        }
    }
    if !matches!(frame.classify(), Classification::Etf | Classification::Btf) {
        return Err(Error::Certification(format!(
            "assembled frame is {}",
            frame.classify()
        )));
    }
    if !sets_match(&predicted, &empirical, tol.cluster_tol()) {
        return Err(Error::Certification(format!(
            "empirical angles {empirical:?} differ from predicted {predicted:?}"
        )));
    }
    Ok(AssembledFrame {
        frame,
        predicted: Some(predicted),
        empirical,
        certified: true,
    })
}

/// `{1/s, W_{t,s}}` for ETF blocks (merged if equal) and the block angle
/// set for BTF blocks.
pub fn predicted_assembly_angles(
    v: usize,
    k: usize,
    t: usize,
    mode: BlockMode,
    block_angles: &[f64],
) -> Result<Vec<f64>> {
    if k < 2 || v < k || !(v - 1).is_multiple_of(k - 1) {
        return Err(Error::InvalidParameter(format!(
            "s = (v-1)/(k-1) is not integral for (v,k)=({v},{k})"
        )));
    }
    let s = (v - 1) / (k - 1);
    let mut out = match mode {
        BlockMode::EtfBlocks => vec![1.0 / s as f64, welch_constant(t, s)?],
        BlockMode::BtfBlocks => block_angles.to_vec(),
    };
    out.sort_by(f64::total_cmp);
    Ok(cluster_with_gap(&out, 1e-12))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Affine,
    Projective,
}

impl Geometry {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "affine" => Ok(Self::Affine),
            "projective" => Ok(Self::Projective),
            other => Err(Error::InvalidParameter(format!(
                "unknown geometry '{other}'"
            ))),
        }
    }

    pub fn steiner(self, q: u64, a: u32) -> Result<SteinerMatrix> {
        match self {
            Self::Affine => affine_steiner(q, a),
            Self::Projective => projective_steiner(q, a),
        }
    }

    /// `(v, k)` of the geometry's Steiner matrix, without building it.
    pub fn vk(self, q: u64, a: u32) -> Result<(u64, u64)> {
        let overflow = || Error::Guard(format!("parameters q={q}, a={a} overflow"));
        match self {
            Self::Affine => Ok((q.checked_pow(a).ok_or_else(overflow)?, q)),
            Self::Projective => Ok((
                (q.checked_pow(a + 1).ok_or_else(overflow)? - 1) / (q - 1),
                q + 1,
            )),
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Affine => "affine",
            Self::Projective => "projective",
        })
    }
}

/// Parameter families of Steiner ETFs and BTFs built from harmonic blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Simplectic `(s+1, s)` blocks on any built-in geometry.
    SteinerEtf {
        geometry: Geometry,
        a: u32,
    },
    AffineSinger,
    ProjectiveSinger,
    UnitalSinger,
    AffinePicket,
    ProjectivePicket,
    UnitalPicket,
}

impl Family {
    /// `geometry` and `a` only matter for `steiner-etf`.
    pub fn parse(name: &str, geometry: Geometry, a: u32) -> Result<Self> {
        Ok(match name {
            "steiner-etf" => Self::SteinerEtf { geometry, a },
            "affine-singer" => Self::AffineSinger,
            "projective-singer" => Self::ProjectiveSinger,
            "unital-singer" => Self::UnitalSinger,
            "affine-picket" => Self::AffinePicket,
            "projective-picket" => Self::ProjectivePicket,
            "unital-picket" => Self::UnitalPicket,
            other => return Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
        })
    }

    fn is_picket(self) -> bool {
        matches!(
            self,
            Self::AffinePicket | Self::ProjectivePicket | Self::UnitalPicket
        )
    }

    fn is_unital(self) -> bool {
        matches!(self, Self::UnitalSinger | Self::UnitalPicket)
    }

    fn geometry(self) -> Option<(Geometry, u32)> {
        match self {
            Self::SteinerEtf { geometry, a } => Some((geometry, a)),
            Self::AffineSinger | Self::AffinePicket => Some((Geometry::Affine, 2)),
            Self::ProjectiveSinger | Self::ProjectivePicket => Some((Geometry::Projective, 2)),
            Self::UnitalSinger | Self::UnitalPicket => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SteinerEtf { .. } => "steiner-etf",
            Self::AffineSinger => "affine-singer",
            Self::ProjectiveSinger => "projective-singer",
            Self::UnitalSinger => "unital-singer",
            Self::AffinePicket => "affine-picket",
            Self::ProjectivePicket => "projective-picket",
            Self::UnitalPicket => "unital-picket",
        })
    }
}

/// `(n, m, Θ)` of a frame family.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyParams {
    pub n: u64,
    pub m: u64,
    pub angles: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryReport {
    pub family: Family,
    pub q: u64,
    /// The published closed forms.
    pub claimed: FamilyParams,
    /// `t*v`, `m` and the predicted angle set; `None` when the family has no
    /// compatible built-in construction.
    pub computed: Option<FamilyParams>,
    pub consistent: bool,
    pub notes: Vec<String>,
}

fn require_prime_power(x: u64, what: &str) -> Result<()> {
    match is_prime_power(x)? {
        Some(_) => Ok(()),
        None => Err(Error::InvalidParameter(format!(
            "{what}={x} is not a prime power"
        ))),
    }
}

fn is_square(x: u64) -> bool {
    let r = (x as f64).sqrt().round() as u64;
    r * r == x
}

/// Published `(n, m, Θ)` for `family` at `q`.
fn claimed_params(family: Family, q: u64) -> Result<FamilyParams> {
    let qf = q as f64;
    Ok(match family {
        Family::SteinerEtf { geometry, a } => {
            let (v, k) = geometry.vk(q, a)?;
            let s = (v - 1) / (k - 1);
            FamilyParams {
                n: v * (k + 1),
                m: v * (v - 1) / (k * (k - 1)),
                angles: vec![1.0 / s as f64],
            }
        }
        Family::AffineSinger => FamilyParams {
            n: q * q * (q * q + q + 1),
            m: q * (q + 1),
            angles: vec![1.0 / (qf + 1.0), qf.sqrt() / (qf + 1.0)],
        },
        Family::ProjectiveSinger => {
            let m = q * q + q + 1;
            FamilyParams {
                n: m * m,
                m,
                angles: vec![1.0 / (qf + 1.0), qf.sqrt() / (qf + 1.0)],
            }
        }
        Family::UnitalSinger => FamilyParams {
            n: (q + 1) * (q * q + q + 1),
            m: q * q * (q * q * q + 1) / (q + 1),
            angles: vec![1.0 / (qf + 1.0), qf.sqrt() / (qf + 1.0)],
        },
        Family::AffinePicket => FamilyParams {
            n: q * q * q * (q + 1),
            m: q * (q + 1),
            angles: vec![1.0 / (qf + 1.0), 1.0 / (qf + 1.0).sqrt()],
        },
        Family::ProjectivePicket => FamilyParams {
            n: q * (q + 2) * (q * q + q + 1),
            m: q * q + q + 1,
            angles: vec![1.0 / (qf + 1.0), 1.0 / (qf + 1.0).sqrt()],
        },
        Family::UnitalPicket => FamilyParams {
            n: q * (q + 1) * (q * q * q + 1),
            m: q * q * (q * q * q + 1) / (q + 1),
            angles: vec![1.0 / (qf + 1.0), 1.0 / (qf + 1.0).sqrt()],
        },
    })
}

/// Block parameters `(t, s)`, mode and difference-set parameters of the
/// harmonic building block used by `family`.
fn block_params(family: Family, q: u64, s_needed: u64) -> (u64, u64, BlockMode, Params) {
    let u = |x: u64| x as usize;
    match family {
        Family::SteinerEtf { .. } => {
            let n = s_needed + 1;
            (
                n,
                s_needed,
                BlockMode::EtfBlocks,
                Params {
                    n: u(n),
                    m: u(s_needed),
                    l: u(n),
                    lambda: Some(u(s_needed) - 1),
                    mu: None,
                },
            )
        }
        Family::AffineSinger | Family::ProjectiveSinger | Family::UnitalSinger => {
            let n = q * q + q + 1;
            (
                n,
                q + 1,
                BlockMode::EtfBlocks,
                Params {
                    n: u(n),
                    m: u(q + 1),
                    l: u(n),
                    lambda: Some(1),
                    mu: None,
                },
            )
        }
        Family::AffinePicket | Family::ProjectivePicket | Family::UnitalPicket => {
            let big = q + 1;
            let n = big * big - 1;
            (
                n,
                big,
                BlockMode::BtfBlocks,
                Params {
                    n: u(n),
                    m: u(big),
                    l: u(big - 1),
                    lambda: Some(0),
                    mu: Some(1),
                },
            )
        }
    }
}

/// Compares a family's published parameters with those implied by its
/// building block and Steiner matrix.
pub fn corollary_params(family: Family, q: u64) -> Result<CorollaryReport> {
    require_prime_power(q, "q")?;
    if family.is_picket() {
        require_prime_power(q + 1, "q+1")?;
    }
    if family.is_unital() && !is_square(q) {
        return Err(Error::InvalidParameter(format!(
            "unital families need q to be a square, got q={q}"
        )));
    }
    if let Some((_, a)) = family.geometry() {
        if a < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension a must be at least 2, got {a}"
            )));
        }
    }
    let claimed = claimed_params(family, q)?;
    let mut notes = Vec::new();

    let (v, k) = match family.geometry() {
        Some((g, a)) => g.vk(q, a)?,
        None => (q * q * q + 1, q + 1),
    };
    let s = (v - 1) / (k - 1);
    let m = v * (v - 1) / (k * (k - 1));
    let (t, block_dim, mode, params) = block_params(family, q, s);

    let computed = if block_dim != s {
        notes.push(format!(
            "building block dimension {block_dim} does not match s={s} of the ({v},{k})-Steiner matrix; no built-in construction"
        ));
        None
    } else {
        let block_angles = predicted_harmonic_angles(&params)?;
        let angles =
            predicted_assembly_angles(v as usize, k as usize, t as usize, mode, &block_angles)?;
        Some(FamilyParams {
            n: t * v,
            m,
            angles,
        })
    };
    let consistent = match &computed {
        Some(c) => {
            let same = c.n == claimed.n
                && c.m == claimed.m
                && sets_match(&c.angles, &claimed.angles, 1e-12);
            if c.n != claimed.n {
                notes.push(format!(
                    "paper_n={} computed_n={} inconsistent",
                    claimed.n, c.n
                ));
            }
            if c.m != claimed.m {
                notes.push(format!(
                    "paper_m={} computed_m={} inconsistent",
                    claimed.m, c.m
                ));
            }
            same
        }
        None => false,
    };
    Ok(CorollaryReport {
        family,
        q,
        claimed,
        computed,
        consistent,
        notes,
    })
}

/// Builds the family's Steiner matrix and harmonic blocks and assembles them.
pub fn build_family(
    family: Family,
    q: u64,
    tol: Tolerance,
) -> Result<(AssembledFrame, CorollaryReport)> {
    let report = corollary_params(family, q)?;
    let Some((geometry, a)) = family.geometry() else {
        return Err(Error::InvalidParameter(format!(
            "{family} has no built-in Steiner matrix; supply one with --steiner"
        )));
    };
    let steiner = geometry.steiner(q, a)?;
    let diffset = match family {
        Family::SteinerEtf { .. } => simplectic(steiner.s() + 1)?,
        Family::AffineSinger | Family::ProjectiveSinger => singer(q)?,
        Family::AffinePicket | Family::ProjectivePicket => picket_fence(q + 1)?,
        Family::UnitalSinger | Family::UnitalPicket => {
            unreachable!("unital families have no geometry")
        }
    };
    let block = harmonic_frame(&diffset.group, &diffset.set, tol)?;
    let mode = BlockMode::detect(&block)
        .ok_or_else(|| Error::Certification(format!("building block is {}", block.classify())))?;
    let blocks = vec![block; steiner.v()];
    let assembled = assemble(&AssemblySpec::new(steiner, blocks, mode)?)?;
    Ok((assembled, report))
}

/// Classification of a consecutive prime-power pair `(q, q+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    /// `(8, 9)`, the only pair of proper powers.
    CatalanException,
    /// `q = 2^t - 1` prime, `t >= 3`.
    Mersenne,
    /// `q + 1 = 2^t + 1` prime, `t >= 3`.
    Fermat,
    /// The power of two in the pair is 2 or 4.
    SmallPowerPair,
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CatalanException => "catalan-exception",
            Self::Mersenne => "mersenne-type",
            Self::Fermat => "fermat-type",
            Self::SmallPowerPair => "small-power-pair",
        })
    }
}

/// All `q <= limit` with `q` and `q + 1` both prime powers.
///
/// Fails with a certification error if a pair of proper prime powers other
/// than `(8, 9)` turns up, or if the pair does not fit one of the classes.
pub fn prime_power_pairs(limit: u64) -> Result<Vec<(u64, PairClass)>> {
    if limit > MAX_PAIR_LIMIT {
        return Err(Error::Guard(format!(
            "limit {limit} exceeds {MAX_PAIR_LIMIT}"
        )));
    }
    let mut out = Vec::new();
    for q in 2..=limit {
        let (Some((p1, e1)), Some((p2, e2))) = (is_prime_power(q)?, is_prime_power(q + 1)?) else {
            continue;
        };
        let class = if e1 >= 2 && e2 >= 2 {
            if q != 8 {
                return Err(Error::Certification(format!(
                    "({q},{}) is a pair of proper prime powers",
                    q + 1
                )));
            }
            PairClass::CatalanException
        } else {
            // one of the pair is even, hence a power of two; the other is prime
            let (two_exp, odd_is_q) = match (p1, p2) {
                (2, _) if e2 == 1 => (e1, false),
                (_, 2) if e1 == 1 => (e2, true),
                _ => {
                    return Err(Error::Certification(format!(
                        "({q},{}) has no power-of-two member",
                        q + 1
                    )))
                }
            };
            match (two_exp <= 2, odd_is_q) {
                (true, _) => PairClass::SmallPowerPair,
                (false, true) => PairClass::Mersenne,
                (false, false) => PairClass::Fermat,
            }
        };
        out.push((q, class));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::verify_steiner;
    use crate::frames::welch_constant;
    use crate::numerics::inner;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn harmonic_block(d: &crate::diffsets::BidifferenceSet) -> Frame {
        harmonic_frame(&d.group, &d.set, tol()).unwrap()
    }

    #[test]
    fn fano_with_simplectic_blocks_is_an_etf() {
        let st = projective_steiner(2, 2).unwrap();
        let block = harmonic_block(&simplectic(4).unwrap());
        let out = assemble(&AssemblySpec::new(st, vec![block; 7], BlockMode::EtfBlocks).unwrap())
            .unwrap();
        assert_eq!((out.frame.n(), out.frame.m()), (28, 7));
        assert_eq!(out.frame.classify(), Classification::Etf);
        let coh = out.frame.angle_report().unwrap().coherence;
        assert!((coh - 1.0 / 3.0).abs() < 1e-9);
        assert!((coh - welch_constant(28, 7).unwrap()).abs() < 1e-9);
        assert!(out.certified);
    }

    #[test]
    fn affine_plane_with_picket_blocks_is_a_btf() {
        let st = affine_steiner(2, 2).unwrap();
        let block = harmonic_block(&picket_fence(3).unwrap());
        let spec = AssemblySpec::new(st, vec![block; 4], BlockMode::BtfBlocks).unwrap();
        let out = assemble(&spec).unwrap();
        assert_eq!((out.frame.n(), out.frame.m()), (32, 6));
        assert_eq!(out.frame.classify(), Classification::Btf);
        assert!(sets_match(
            &out.empirical,
            &[1.0 / 3.0, 1.0 / 3f64.sqrt()],
            1e-7
        ));
        assert!(out.frame.is_unit_norm());
        assert!((out.frame.tightness().unwrap() - 32.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn pair_incidence_with_sign_blocks_matches_curve_point() {
        let st = verify_steiner(vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!((st.v(), st.k(), st.s()), (3, 2, 2));
        let r = 1.0 / 2f64.sqrt();
        let block = Frame::new(
            Matrix::from_real_rows(&[vec![r, r], vec![r, -r]]).unwrap(),
            Field::Real,
            tol(),
        )
        .unwrap();
        // orthonormal basis blocks have angle set {0}, so they are neither ETF nor BTF here
        let out =
            assemble(&AssemblySpec::forced(st, vec![block; 3], BlockMode::EtfBlocks).unwrap())
                .unwrap();
        assert!(!out.certified && out.predicted.is_none());
        assert_eq!((out.frame.n(), out.frame.m()), (6, 3));
        assert!(sets_match(&out.empirical, &[0.0, 0.5], 1e-7));
        assert_eq!(out.frame.classify(), Classification::Btf);
    }

    #[test]
    fn case_dichotomy() {
        let st = projective_steiner(2, 2).unwrap();
        let s = st.s() as f64;
        let block = harmonic_block(&singer(2).unwrap());
        let theta_h = block.angle_report().unwrap().angles;
        let out = assemble(&AssemblySpec::new(st, vec![block; 7], BlockMode::EtfBlocks).unwrap())
            .unwrap();
        let t = 7;
        let f = &out.frame;
        for a in 0..f.n() {
            for b in a + 1..f.n() {
                let ip = inner(&f.column(a), &f.column(b)).norm();
                if out.block_of(a, t) != out.block_of(b, t) {
                    assert!((ip - 1.0 / s).abs() < 1e-7);
                } else {
                    assert!(theta_h.iter().any(|x| (x - ip).abs() < 1e-7));
                }
            }
        }
        for i in 0..f.m() {
            for j in 0..f.n() {
                let x = f.synthesis().get(i, j).norm();
                assert!(x < 1e-12 || (x - 1.0 / s.sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spec_validation() {
        let st = affine_steiner(2, 2).unwrap();
        let etf = harmonic_block(&singer(3).unwrap());
        match AssemblySpec::new(st.clone(), vec![etf.clone(); 4], BlockMode::EtfBlocks) {
            Err(Error::Dimension(msg)) => assert!(msg.contains("s=3"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let pf = harmonic_block(&picket_fence(3).unwrap());
        assert!(matches!(
            AssemblySpec::new(st.clone(), vec![pf.clone(); 3], BlockMode::BtfBlocks),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            AssemblySpec::new(st.clone(), vec![pf.clone(); 4], BlockMode::EtfBlocks),
            Err(Error::InvalidParameter(_))
        ));
        let simp = harmonic_block(&simplectic(4).unwrap());
        let mixed = vec![pf.clone(), pf.clone(), pf, simp];
        assert!(matches!(
            AssemblySpec::new(st, mixed, BlockMode::BtfBlocks),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn predicted_angles() {
        let p = predicted_assembly_angles(7, 3, 4, BlockMode::EtfBlocks, &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-12);
        let p = predicted_assembly_angles(7, 3, 7, BlockMode::EtfBlocks, &[]).unwrap();
        assert!(sets_match(&p, &[1.0 / 3.0, 2f64.sqrt() / 3.0], 1e-12));
        let theta = [1.0 / 3.0, 1.0 / 3f64.sqrt()];
        assert!(sets_match(
            &predicted_assembly_angles(4, 2, 8, BlockMode::BtfBlocks, &theta).unwrap(),
            &theta,
            1e-12
        ));
        assert!(predicted_assembly_angles(6, 3, 4, BlockMode::EtfBlocks, &[]).is_err());
    }

    #[test]
    fn corollary_tables() {
        let r = corollary_params(Family::ProjectiveSinger, 2).unwrap();
        assert_eq!((r.claimed.n, r.claimed.m), (49, 7));
        let c = r.computed.clone().unwrap();
        assert_eq!((c.n, c.m), (49, 7));
        assert!(r.consistent);

        let r = corollary_params(Family::AffinePicket, 2).unwrap();
        assert_eq!(r.claimed.n, 24);
        assert_eq!(r.computed.as_ref().unwrap().n, 32);
        assert!(!r.consistent);
        assert!(r
            .notes
            .iter()
            .any(|n| n == "paper_n=24 computed_n=32 inconsistent"));

        let r = corollary_params(Family::AffineSinger, 2).unwrap();
        assert_eq!((r.claimed.n, r.claimed.m), (28, 6));
        assert!(r.consistent);

        let r = corollary_params(Family::ProjectivePicket, 2).unwrap();
        assert_eq!(r.computed.as_ref().unwrap().n, 56);
        assert!(r.consistent);

        let r = corollary_params(
            Family::SteinerEtf {
                geometry: Geometry::Projective,
                a: 2,
            },
            2,
        )
        .unwrap();
        assert!(r.consistent);
        assert!(sets_match(&r.computed.unwrap().angles, &[1.0 / 3.0], 1e-12));

        let r = corollary_params(Family::UnitalSinger, 4).unwrap();
        assert!(r.computed.is_none() && !r.consistent);
        assert!(r.notes[0].contains("s=16"));

        assert!(corollary_params(Family::AffinePicket, 5).is_err());
        assert!(corollary_params(Family::UnitalPicket, 3).is_err());
        assert!(corollary_params(Family::AffineSinger, 6).is_err());
    }

    #[test]
    fn families_assemble_to_btfs() {
        for (family, q) in [
            (Family::AffineSinger, 2),
            (Family::AffineSinger, 3),
            (Family::ProjectiveSinger, 2),
            (Family::AffinePicket, 2),
            (Family::ProjectivePicket, 2),
            (Family::AffinePicket, 3),
            (
                Family::SteinerEtf {
                    geometry: Geometry::Affine,
                    a: 2,
                },
                3,
            ),
        ] {
            let (out, report) = build_family(family, q, tol()).unwrap();
            let c = report.computed.unwrap();
            assert_eq!(
                (out.frame.n() as u64, out.frame.m() as u64),
                (c.n, c.m),
                "{family} q={q}"
            );
            assert!(matches!(
                out.frame.classify(),
                Classification::Btf | Classification::Etf
            ));
            assert!(sets_match(&out.empirical, &c.angles, 1e-7));
        }
        assert!(build_family(Family::UnitalSinger, 4, tol()).is_err());
    }

    #[test]
    fn prime_pairs_to_300() {
        let pairs = prime_power_pairs(300).unwrap();
        let qs: Vec<u64> = pairs.iter().map(|p| p.0).collect();
        assert_eq!(qs, vec![2, 3, 4, 7, 8, 16, 31, 127, 256]);
        use PairClass::*;
        let classes: Vec<PairClass> = pairs.iter().map(|p| p.1).collect();
        assert_eq!(
            classes,
            vec![
                SmallPowerPair,
                SmallPowerPair,
                SmallPowerPair,
                Mersenne,
                CatalanException,
                Fermat,
                Mersenne,
                Mersenne,
                Fermat
            ]
        );
        assert!(matches!(
            prime_power_pairs(MAX_PAIR_LIMIT + 1),
            Err(Error::Guard(_))
        ));
    }
}

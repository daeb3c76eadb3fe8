//! Harmonic frames: rows of a finite abelian group's character table.

use crate::algebra::{AbelianGroup, Element};
use crate::diffsets::{predicted_harmonic_angles, BidifferenceSet, Kind};
use crate::error::{Error, Result};
use crate::frames::{Field, Frame};
use crate::numerics::{sets_match, Complex, Matrix, Tolerance};

/// The `|S| x |G|` matrix with entries `χ_a(b) / sqrt(|S|)`, rows `a ∈ S`
/// and columns `b ∈ G`, both in element order.
pub fn harmonic_frame(group: &AbelianGroup, set: &[Element], tol: Tolerance) -> Result<Frame> {
    let mut rows = set.to_vec();
    rows.sort_unstable();
    rows.dedup();
    if rows.is_empty() {
        return Err(Error::InvalidParameter(
            "generating set must be non-empty".into(),
        ));
    }
    if rows.len() != set.len() {
        return Err(Error::InvalidParameter(
            "generating set has repeated elements".into(),
        ));
    }
    if let Some(&bad) = rows.iter().find(|&&a| !group.contains(a)) {
        return Err(Error::InvalidParameter(format!(
            "element {bad} is not in {group}"
        )));
    }
    let scale = 1.0 / (rows.len() as f64).sqrt();
    let synthesis = Matrix::from_fn(rows.len(), group.order(), |i, b| {
        group.character_unchecked(rows[i], b) * Complex::new(scale, 0.0)
    });
    Frame::new(synthesis, Field::Complex, tol)
}

/// A harmonic frame together with the angle prediction for its generating set.
#[derive(Clone, Debug)]
pub struct HarmonicCertificate {
    pub frame: Frame,
    /// `None` for partial and general bidifference sets, which have no
    /// closed-form prediction here.
    pub predicted: Option<Vec<f64>>,
    pub empirical: Vec<f64>,
    pub matches: Option<bool>,
}

pub fn harmonic_from_diffset(set: &BidifferenceSet, tol: Tolerance) -> Result<HarmonicCertificate> {
    let frame = harmonic_frame(&set.group, &set.set, tol)?;
    let empirical = frame.angle_report()?.angles;
    let predicted = match set.kind {
        Kind::Difference | Kind::Divisible | Kind::Relative => {
            Some(predicted_harmonic_angles(&set.params)?)
        }
        Kind::Partial | Kind::General => None,
    };
    let matches = predicted
        .as_ref()
        .map(|p| sets_match(p, &empirical, tol.cluster_tol()));
    Ok(HarmonicCertificate {
        frame,
        predicted,
        empirical,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffsets::{picket_fence, search, simplectic, singer};
    use crate::frames::{welch_constant, Classification};

    fn z(n: usize) -> AbelianGroup {
        AbelianGroup::cyclic(n).unwrap()
    }

    #[test]
    fn single_row_frame_has_coherence_one() {
        let f = harmonic_frame(&z(5), &[0], Tolerance::default()).unwrap();
        assert_eq!((f.m(), f.n()), (1, 5));
        assert!((f.angle_report().unwrap().coherence - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singer_seven_three_is_etf() {
        let f = harmonic_frame(&z(7), &[1, 2, 4], Tolerance::default()).unwrap();
        assert_eq!(f.classify(), Classification::Etf);
        let r = f.angle_report().unwrap();
        assert!((r.coherence - welch_constant(7, 3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn picket_fence_frame_is_btf() {
        let d = picket_fence(3).unwrap();
        let f = harmonic_frame(&d.group, &d.set, Tolerance::default()).unwrap();
        assert_eq!(f.classify(), Classification::Btf);
        let r = f.angle_report().unwrap();
        assert!((r.angles[0] - 1.0 / 3.0).abs() < 1e-9);
        assert!((r.angles[1] - 1.0 / 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn diffset_certificates() {
        let tol = Tolerance::default();
        let c = harmonic_from_diffset(&simplectic(4).unwrap(), tol).unwrap();
        assert_eq!(c.matches, Some(true));
        assert!((c.empirical[0] - 1.0 / 3.0).abs() < 1e-9);

        let c = harmonic_from_diffset(&singer(3).unwrap(), tol).unwrap();
        assert_eq!(c.matches, Some(true));
        assert!((c.empirical[0] - 3f64.sqrt() / 4.0).abs() < 1e-9);

        let c = harmonic_from_diffset(&picket_fence(4).unwrap(), tol).unwrap();
        assert_eq!(c.matches, Some(true));
        assert_eq!(c.frame.classify(), Classification::Btf);
        assert!((c.empirical[0] - 0.25).abs() < 1e-9 && (c.empirical[1] - 0.5).abs() < 1e-9);

        // degenerate picket fence: the subgroup is trivial, so only one angle is realised
        let c = harmonic_from_diffset(&picket_fence(2).unwrap(), tol).unwrap();
        assert_eq!(c.matches, Some(true));
        assert_eq!(c.frame.classify(), Classification::Etf);
    }

    #[test]
    fn partial_sets_have_no_prediction() {
        let d = search(&z(13), 6, Kind::Partial, None).unwrap().remove(0);
        let c = harmonic_from_diffset(&d, Tolerance::default()).unwrap();
        assert!(c.predicted.is_none() && c.matches.is_none());
    }

    #[test]
    fn harmonic_frames_are_flat_and_tight() {
        let tol = Tolerance::default();
        for spec in ["8", "2x4", "3x3", "12"] {
            let g = AbelianGroup::parse(spec).unwrap();
            for m in 1..=g.order() {
                let set: Vec<Element> = (0..m)
                    .map(|i| (i * 5) % g.order())
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let f = harmonic_frame(&g, &set, tol).unwrap();
                assert!(f.is_flat());
                let a = f.tightness().unwrap();
                assert!((a - g.order() as f64 / set.len() as f64).abs() < 1e-12);
                assert!(f.row_identity_check());
            }
        }
        assert!(harmonic_frame(&z(4), &[], tol).is_err());
        assert!(harmonic_frame(&z(4), &[7], tol).is_err());
    }
}

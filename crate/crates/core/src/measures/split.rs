use crate::error::{Error, Result};
use crate::tol;

use super::discrete::{equivalent, DiscreteMeasure};

/// Decomposition of a measure into parts on the same space.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSplit {
    parts: Vec<DiscreteMeasure>,
}

impl MeasureSplit {
    pub fn new(parts: Vec<DiscreteMeasure>) -> Result<Self> {
        let dim = parts.first().ok_or_else(|| Error::invalid("split needs at least one part"))?.dim();
        if let Some(p) = parts.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[DiscreteMeasure] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.parts[0].dim()
    }

    /// `Σ parts`.
    pub fn total(&self) -> DiscreteMeasure {
        let mut acc = self.parts[0].clone();
        for p in &self.parts[1..] {
            acc = acc.sum(p).expect("parts share a dimension");
        }
        acc
    }

    /// Whether the parts sum to `parent`, atomwise within `ε_mass`.
    pub fn splits(&self, parent: &DiscreteMeasure) -> bool {
        self.total().approx_eq(parent, tol::POINT_MERGE, tol::MASS)
    }
}

/// Checks that each part of `nu_split` has the mass and first moments of the
/// matching part of `mu_split`.
pub fn verify_split_majorization_witness(mu_split: &MeasureSplit, nu_split: &MeasureSplit) -> Result<bool> {
    if mu_split.dim() != nu_split.dim() {
        return Err(Error::DimensionMismatch { expected: mu_split.dim(), got: nu_split.dim() });
    }
    if mu_split.parts.len() != nu_split.parts.len() {
        return Err(Error::invalid(format!(
            "part counts differ: {} vs {}",
            mu_split.parts.len(),
            nu_split.parts.len()
        )));
    }
    for (a, b) in mu_split.parts.iter().zip(&nu_split.parts) {
        if !equivalent(a, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(atoms: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::on_line(atoms).unwrap()
    }

    // μ = ½δ₀ + ½δ₂ split into its two atoms; ν = ¼(δ₋₁ + δ₁ + δ₁ + δ₃)
    // split as ¼δ₋₁+¼δ₁ (mass ½, moment 0) and ¼δ₁+¼δ₃ (mass ½, moment 1).
    // The μ parts have (½, 0) and (½, 1): equal part by part.
    #[test]
    fn witness_with_matching_moments() {
        let mu = MeasureSplit::new(vec![line(&[(0.0, 0.5)]), line(&[(2.0, 0.5)])]).unwrap();
        let nu = MeasureSplit::new(vec![
            line(&[(-1.0, 0.25), (1.0, 0.25)]),
            line(&[(1.0, 0.25), (3.0, 0.25)]),
        ])
        .unwrap();
        assert!(nu.splits(&line(&[(-1.0, 0.25), (1.0, 0.5), (3.0, 0.25)])));
        assert!(verify_split_majorization_witness(&mu, &nu).unwrap());
        assert!(verify_split_majorization_witness(&mu, &mu).unwrap());

        let swapped = MeasureSplit::new(vec![nu.parts()[1].clone(), nu.parts()[0].clone()]).unwrap();
        assert!(!verify_split_majorization_witness(&mu, &swapped).unwrap());
    }

    #[test]
    fn part_count_mismatch_is_an_error() {
        let a = MeasureSplit::new(vec![line(&[(0.0, 1.0)])]).unwrap();
        let b = MeasureSplit::new(vec![line(&[(0.0, 0.5)]), line(&[(0.0, 0.5)])]).unwrap();
        assert!(verify_split_majorization_witness(&a, &b).is_err());
    }

    #[test]
    fn moments_are_additive_over_parts() {
        let s = MeasureSplit::new(vec![line(&[(0.0, 0.3), (1.0, 0.2)]), line(&[(1.0, 0.1), (4.0, 0.4)])]).unwrap();
        let (w, f) = s.total().moments();
        let (w1, f1) = s.parts()[0].moments();
        let (w2, f2) = s.parts()[1].moments();
        assert!((w - w1 - w2).abs() < 1e-12);
        assert!((f[0] - f1[0] - f2[0]).abs() < 1e-12);
    }
}

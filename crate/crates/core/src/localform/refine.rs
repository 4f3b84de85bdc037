use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{DiscreteMeasure, PiecewiseUniformMeasure, UniformPiece};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineAtom {
    pub point: f64,
    pub mass: f64,
}

/// Measure on the line with an atomic part and a piecewise-uniform part.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HybridMeasure {
    pub atoms: Vec<LineAtom>,
    pub intervals: Vec<UniformPiece>,
}

impl HybridMeasure {
    /// The atoms of a one-dimensional discrete measure.
    pub fn from_discrete(mu: &DiscreteMeasure) -> Result<Self> {
        if mu.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: mu.dim() });
        }
        Ok(Self {
            atoms: mu.atoms().iter().map(|a| LineAtom { point: a.point[0], mass: a.mass }).collect(),
            intervals: Vec::new(),
        })
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>() + self.intervals.iter().map(UniformPiece::mass).sum::<f64>()
    }

    pub fn is_diffuse(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The diffuse part, once no atoms remain.
    pub fn to_piecewise_uniform(&self) -> Result<PiecewiseUniformMeasure> {
        if !self.is_diffuse() {
            return Err(Error::invalid(format!("{} atoms remain", self.atoms.len())));
        }
        let mut pieces = self.intervals.clone();
        pieces.sort_by(|a, b| a.left.total_cmp(&b.left));
        PiecewiseUniformMeasure::new(pieces)
    }

    /// Whether the closed supports of the diffuse pieces are pairwise disjoint.
    pub fn supports_disjoint(&self) -> bool {
        self.intervals
            .iter()
            .enumerate()
            .all(|(i, a)| self.intervals[i + 1..].iter().all(|b| a.right < b.left || b.right < a.left))
    }
}

/// `I_i = [1 + 1/(2i), 1 + 1/(2i − 1)]` for `i ≥ 1`.
pub fn interval_schedule(i: usize) -> Result<(f64, f64)> {
    if i == 0 {
        return Err(Error::OutOfRange("schedule index starts at 1".into()));
    }
    let i = i as f64;
    Ok((1.0 + 1.0 / (2.0 * i), 1.0 + 1.0 / (2.0 * i - 1.0)))
}

/// Replaces atom `index` of mass `w` by the density `w/(β − α)` on `[α, β]`.
pub fn refine_atom(h: &HybridMeasure, index: usize, alpha: f64, beta: f64) -> Result<HybridMeasure> {
    if !(alpha.is_finite() && beta.is_finite()) || alpha <= 0.0 || alpha >= beta {
        return Err(Error::OutOfRange(format!("need 0 < α < β, got [{alpha}, {beta}]")));
    }
    let atom = *h.atoms.get(index).ok_or_else(|| Error::OutOfRange(format!("no atom at index {index}")))?;
    if let Some(p) = h.intervals.iter().find(|p| !(beta < p.left || p.right < alpha)) {
        return Err(Error::invalid(format!(
            "[{alpha}, {beta}] meets the existing support [{}, {}]",
            p.left, p.right
        )));
    }
    let mut out = h.clone();
    out.atoms.remove(index);
    out.intervals.push(UniformPiece::new(alpha, beta, atom.mass / (beta - alpha)));
    Ok(out)
}

/// Refines every atom, the `i`-th (1-based) onto `I_i`.
pub fn refine_all(h: &HybridMeasure) -> Result<HybridMeasure> {
    let mut out = h.clone();
    for i in 1..=h.atoms.len() {
        let (a, b) = interval_schedule(i)?;
        out = refine_atom(&out, 0, a, b)?;
    }
    Ok(out)
}

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::birkhoff::{coupling_matrix, local_form_from_coupling};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::maps::{MatrixMap, MixedUnitary, UnitaryTerm};
use crate::random;
use crate::speclin::{joint_diagonalize, CommutingFamily, JointDiagonalization, ProjectionPartition};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalFormOptions {
    pub seed: u64,
    pub dim_cap: usize,
    /// All `k²` partition pairs are used while `k` is at most this.
    pub pair_cap: usize,
    /// Number of sampled pairs above the cap.
    pub samples: usize,
    pub functional_calculus: f64,
}

impl Default for LocalFormOptions {
    fn default() -> Self {
        Self { seed: 0, dim_cap: tol::DEFAULT_DIM_CAP, pair_cap: 16, samples: 256, functional_calculus: tol::FUNCTIONAL_CALCULUS }
    }
}

/// `outer ∘ inner` for one pair of partitions: `inner` averages the source
/// family onto the blocks of `q^tb`, `outer` is the Birkhoff local form
/// carrying `q^tb` to `p^ta`.
#[derive(Clone, Debug, Serialize)]
pub struct PairChannel {
    pub ta: usize,
    pub tb: usize,
    pub inner: MixedUnitary,
    pub outer: MixedUnitary,
}

/// Uniform average of the pair channels.
#[derive(Clone, Debug, Serialize)]
pub struct LocalFormChannel {
    pub d: usize,
    pub pairs: Vec<PairChannel>,
}

impl MatrixMap for LocalFormChannel {
    fn dim(&self) -> usize {
        self.d
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        let mut out = linalg::zeros(self.d);
        for p in &self.pairs {
            out += p.outer.apply(&p.inner.apply(x));
        }
        out / linalg::c(self.pairs.len() as f64)
    }
}

impl LocalFormChannel {
    pub fn term_count(&self) -> usize {
        self.pairs.iter().map(|p| p.inner.len() * p.outer.len()).sum()
    }

    /// The channel as a single convex combination of unitary conjugations.
    pub fn flat_terms(&self) -> Result<MixedUnitary> {
        let w = 1.0 / self.pairs.len() as f64;
        let mut terms = Vec::with_capacity(self.term_count());
        for p in &self.pairs {
            for t in p.outer.compose(&p.inner).terms() {
                terms.push(UnitaryTerm { weight: w * t.weight, unitary: t.unitary.clone() });
            }
        }
        MixedUnitary::new(terms)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFormReport {
    pub r: usize,
    pub d: usize,
    pub m: usize,
    pub m_prescribed: usize,
    pub k: usize,
    pub n1_a: usize,
    pub n1_b: usize,
    pub pairs: usize,
    pub sampled: bool,
    pub term_count: usize,
    pub errors_per_member: Vec<f64>,
    pub bound: f64,
    pub within_bound: bool,
}

/// Equal-rank refinements of the joint eigenspaces of one family.
struct ColumnScheme {
    bases: Vec<Vec<usize>>,
    n1: usize,
    k: usize,
}

/// Columns grouped by the sup-norm grid cell of width `1/r` holding their
/// eigentuple, anchored at the coordinatewise minimum.
fn grid_cells(jd: &JointDiagonalization, r: usize) -> Vec<Vec<usize>> {
    let n = jd.eigentuples[0].len();
    let lo: Vec<f64> = (0..n).map(|i| jd.eigentuples.iter().map(|t| t[i]).fold(f64::INFINITY, f64::min)).collect();
    let mut cells: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (c, t) in jd.eigentuples.iter().enumerate() {
        let key = t.iter().zip(&lo).map(|(x, l)| ((x - l) * r as f64 + 1e-9).floor() as i64).collect();
        cells.entry(key).or_default().push(c);
    }
    cells.into_values().collect()
}

fn prescribed(cells: &[Vec<usize>], d: usize) -> usize {
    let smallest = cells.iter().map(|c| c.len() as f64 / d as f64).fold(1.0, f64::min);
    (1.0 / (smallest * smallest) - 1e-9).ceil().max(1.0) as usize
}

impl ColumnScheme {
    fn new(bases: Vec<Vec<usize>>, s: usize, m: usize) -> Result<Self> {
        let kj: Vec<usize> = bases.iter().map(|b| b.len() / s).collect();
        if kj.contains(&0) {
            return Err(Error::NoUniformRefinement(format!("an eigenspace cell has rank below d/m = {s}")));
        }
        let n1 = m - kj.iter().sum::<usize>();
        let k = *kj.iter().min().expect("nonempty");
        Ok(Self { bases, n1, k })
    }

    /// Column groups of partition `t`: `n1` pooled leftover cells first,
    /// then `s` consecutive columns at a time inside each base cell.
    fn partition(&self, t: usize, s: usize) -> Vec<Vec<usize>> {
        let mut pooled = Vec::new();
        let mut small = Vec::new();
        for base in &self.bases {
            let delta = base.len() % s;
            let start = if t == 0 { 0 } else { delta + (t - 1) * s };
            let left = &base[start..start + delta];
            pooled.extend_from_slice(left);
            let rest: Vec<usize> = base.iter().copied().filter(|c| !left.contains(c)).collect();
            small.extend(rest.chunks(s).map(<[usize]>::to_vec));
        }
        let mut groups: Vec<Vec<usize>> = pooled.chunks(s).map(<[usize]>::to_vec).collect();
        debug_assert_eq!(groups.len(), self.n1);
        groups.extend(small);
        groups
    }
}

/// `V^h` with `V` cycling the columns of every group simultaneously, in the
/// basis `u`; the uniform mixture averages a `u`-diagonal matrix over each
/// group.
fn synchronized_shifts(u: &CMatrix, groups: &[Vec<usize>]) -> Result<MixedUnitary> {
    let d = u.nrows();
    let s = groups[0].len();
    let mut unitaries = Vec::with_capacity(s);
    for h in 0..s {
        let mut image: Vec<usize> = (0..d).collect();
        for g in groups {
            for (i, &c) in g.iter().enumerate() {
                image[c] = g[(i + h) % s];
            }
        }
        unitaries.push(u * linalg::permutation_matrix(&image) * u.adjoint());
    }
    MixedUnitary::uniform(unitaries)
}

/// Approximates `T` on the source family by an average of unitary
/// conjugations built from equal-rank refinements of both families at
/// resolution `r`. Returns the channel and the per-member errors
/// `‖T(b_i) − ρ(b_i)‖`.
pub fn local_form_approximate(
    t: &dyn MatrixMap,
    fam_a: &CommutingFamily,
    fam_b: &CommutingFamily,
    r: usize,
    opts: &LocalFormOptions,
) -> Result<(LocalFormChannel, LocalFormReport)> {
    if r == 0 {
        return Err(Error::OutOfRange("resolution r must be at least 1".into()));
    }
    let d = fam_b.d();
    if fam_a.d() != d || t.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: if fam_a.d() != d { fam_a.d() } else { t.dim() } });
    }
    if fam_a.n() != fam_b.n() {
        return Err(Error::DimensionMismatch { expected: fam_b.n(), got: fam_a.n() });
    }
    fam_b.check_dim_cap(opts.dim_cap)?;

    let images: Vec<CMatrix> = fam_b.members().iter().map(|b| t.apply(b.matrix())).collect();
    for (i, (img, a)) in images.iter().zip(fam_a.members()).enumerate() {
        let gap = linalg::op_norm(&(img - a.matrix()));
        if gap > opts.functional_calculus * (1.0 + fam_b.member(i).op_norm()) {
            return Err(Error::Hypothesis(format!("T(b_{i}) differs from a_{i} by {gap:e}")));
        }
    }

    let (ja, jb) = (joint_diagonalize(fam_a, opts.seed)?, joint_diagonalize(fam_b, opts.seed)?);
    let (cells_a, cells_b) = (grid_cells(&ja, r), grid_cells(&jb, r));
    let m_prescribed = prescribed(&cells_a, d).max(prescribed(&cells_b, d)).min(d);
    let m = (1..=m_prescribed).rev().find(|m| d.is_multiple_of(*m)).expect("1 divides d");
    if m == 1 && m_prescribed > 1 {
        return Err(Error::NoUniformRefinement(format!("d = {d} has no divisor in 2..={m_prescribed}")));
    }
    let s = d / m;
    let (side_a, side_b) = (ColumnScheme::new(cells_a, s, m)?, ColumnScheme::new(cells_b, s, m)?);
    let k = side_a.k.min(side_b.k);

    let parts_a: Vec<ProjectionPartition> =
        (0..k).map(|t| ProjectionPartition::from_basis(&ja.basis, side_a.partition(t, s))).collect::<Result<_>>()?;
    let groups_b: Vec<Vec<Vec<usize>>> = (0..k).map(|t| side_b.partition(t, s)).collect();
    let parts_b: Vec<ProjectionPartition> =
        groups_b.iter().map(|g| ProjectionPartition::from_basis(&jb.basis, g.clone())).collect::<Result<_>>()?;
    let inners: Vec<MixedUnitary> = groups_b.iter().map(|g| synchronized_shifts(&jb.basis, g)).collect::<Result<_>>()?;

    let sampled = k > opts.pair_cap;
    let pair_index: Vec<(usize, usize)> = if sampled {
        let mut rng = random::generator(opts.seed);
        (0..opts.samples).map(|_| (rng.random_range(0..k), rng.random_range(0..k))).collect()
    } else {
        (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).collect()
    };

    let b0 = fam_b.member(0).matrix();
    let mut pairs = Vec::with_capacity(pair_index.len());
    for (ta, tb) in pair_index {
        let (p, q) = (&parts_a[ta], &parts_b[tb]);
        let gamma = coupling_matrix(t, p, q)?;
        let beta: Vec<f64> = q.blocks().iter().map(|blk| m as f64 * linalg::ntrace(&(b0 * blk)).re).collect();
        let outer = local_form_from_coupling(&gamma, p, q, &beta)?.channel()?;
        pairs.push(PairChannel { ta, tb, inner: inners[tb].clone(), outer });
    }
    let channel = LocalFormChannel { d, pairs };

    let errors_per_member: Vec<f64> = fam_b
        .members()
        .iter()
        .zip(&images)
        .map(|(b, img)| linalg::op_norm(&(img - channel.apply(b.matrix()))))
        .collect();
    let max_norm = fam_b.max_norm();
    let mut bound = 3.0 / r as f64 * (1.0 + max_norm);
    if sampled {
        bound += 2.0 * max_norm / (opts.samples as f64).sqrt();
    }
    let report = LocalFormReport {
        r,
        d,
        m,
        m_prescribed,
        k,
        n1_a: side_a.n1,
        n1_b: side_b.n1,
        pairs: channel.pairs.len(),
        sampled,
        term_count: channel.term_count(),
        within_bound: errors_per_member.iter().all(|e| *e <= bound),
        errors_per_member,
        bound,
    };
    Ok((channel, report))
}

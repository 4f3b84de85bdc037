use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{IntervalSet, PiecewiseUniformMeasure};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeCell {
    pub set: IntervalSet,
    pub mass: f64,
    pub small_diameter: bool,
}

/// `k` partitions of the support into `m` cells of mass `1/m` each. In
/// every partition the first `n1` cells are the pooled leftovers; the rest
/// lie inside one base cell of diameter at most `1/r`.
#[derive(Clone, Debug)]
pub struct PartitionScheme {
    pub r: usize,
    pub m: usize,
    pub k: usize,
    pub n1: usize,
    pub cells: Vec<Vec<SchemeCell>>,
    pub measure: PiecewiseUniformMeasure,
}

#[derive(Serialize)]
struct SchemeJson<'a> {
    r: usize,
    m: usize,
    k: usize,
    n1: usize,
    cells: Vec<Vec<&'a IntervalSet>>,
}

impl Serialize for PartitionScheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SchemeJson {
            r: self.r,
            m: self.m,
            k: self.k,
            n1: self.n1,
            cells: self.cells.iter().map(|p| p.iter().map(|c| &c.set).collect()).collect(),
        }
        .serialize(s)
    }
}

/// Grid cells `[a + i/r, a + (i+1)/r]` of the support with positive mass.
fn base_cells(mu: &PiecewiseUniformMeasure, r: usize) -> Vec<IntervalSet> {
    let support = mu.support();
    let (Some(first), Some(last)) = (support.segments().first(), support.segments().last()) else {
        return Vec::new();
    };
    let (a, b) = (first.left, last.right);
    let h = 1.0 / r as f64;
    let count = ((b - a) / h).ceil().max(1.0) as usize;
    (0..count)
        .map(|i| {
            let right = if i + 1 == count { b } else { a + (i + 1) as f64 * h };
            support.intersect(&IntervalSet::interval(a + i as f64 * h, right))
        })
        .filter(|c| mu.mass_of(c) > tol::MASS)
        .collect()
}

fn floor_eps(x: f64) -> usize {
    (x + 1e-9).floor() as usize
}

/// Consecutive leftmost cells of mass `1/m` covering `set`; the last one
/// takes whatever remains.
fn sweep(mu: &PiecewiseUniformMeasure, set: &IntervalSet, count: usize, m: usize) -> Result<Vec<IntervalSet>> {
    let mut rest = set.clone();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let cell = if i + 1 == count { rest.clone() } else { mu.take_leftmost(&rest, 1.0 / m as f64)? };
        rest = rest.difference(&cell);
        out.push(cell);
    }
    Ok(out)
}

/// The cell count `m` with `1/m ≤ min_j μ(Q̃_j)²` for the grid at resolution `r`.
pub fn prescribed_m(mu: &PiecewiseUniformMeasure, r: usize) -> usize {
    let mu = mu.normalized();
    let smallest = base_cells(&mu, r).iter().map(|c| mu.mass_of(c)).fold(1.0, f64::min);
    (1.0 / (smallest * smallest) - 1e-9).ceil().max(1.0) as usize
}

/// Scheme at resolution `r` with the prescribed `m`.
pub fn build_partition_scheme(mu: &PiecewiseUniformMeasure, r: usize) -> Result<PartitionScheme> {
    build_with(mu, r, 0, tol::DEFAULT_M_CAP)
}

/// Scheme at resolution `r` with `m` at least `min_m`, capped at `cap`.
pub(crate) fn build_with(mu: &PiecewiseUniformMeasure, r: usize, min_m: usize, cap: usize) -> Result<PartitionScheme> {
    if r == 0 {
        return Err(Error::OutOfRange("resolution r must be at least 1".into()));
    }
    let mu = mu.normalized();
    let bases = base_cells(&mu, r);
    let masses: Vec<f64> = bases.iter().map(|c| mu.mass_of(c)).collect();
    let m = prescribed_m(&mu, r).max(min_m);
    if m > cap {
        return Err(Error::ResolutionCap { m, cap });
    }
    let kj: Vec<usize> = masses.iter().map(|w| floor_eps(w * m as f64)).collect();
    let delta: Vec<f64> =
        masses.iter().zip(&kj).map(|(w, k)| (w - *k as f64 / m as f64).max(0.0)).map(|d| if d < 1e-12 { 0.0 } else { d }).collect();
    let k = *kj.iter().min().expect("support has positive mass");
    let n1 = m - kj.iter().sum::<usize>();

    // first[j][s]: cell s (1-based, 0 = leftover) of base cell j in partition 1.
    let mut first: Vec<Vec<IntervalSet>> = Vec::with_capacity(bases.len());
    for (j, base) in bases.iter().enumerate() {
        let left = mu.take_leftmost(base, delta[j])?;
        let mut cells = vec![left.clone()];
        cells.extend(sweep(&mu, &base.difference(&left), kj[j], m)?);
        first.push(cells);
    }

    let mut cells = Vec::with_capacity(k);
    for t in 1..=k {
        let mut pooled = IntervalSet::empty();
        let mut small = Vec::with_capacity(m);
        for (j, base) in bases.iter().enumerate() {
            let subcells = if t == 1 {
                first[j].clone()
            } else {
                let left = mu.take_leftmost(&first[j][t], delta[j])?;
                let mut c = vec![left.clone()];
                c.extend(sweep(&mu, &base.difference(&left), kj[j], m)?);
                c
            };
            pooled = pooled.union(&subcells[0]);
            small.extend(subcells.into_iter().skip(1));
        }
        let mut partition: Vec<SchemeCell> = sweep(&mu, &pooled, n1, m)?
            .into_iter()
            .map(|set| SchemeCell { mass: mu.mass_of(&set), set, small_diameter: false })
            .collect();
        partition.extend(small.into_iter().map(|set| SchemeCell { mass: mu.mass_of(&set), set, small_diameter: true }));
        cells.push(partition);
    }
    Ok(PartitionScheme { r, m, k, n1, cells, measure: mu })
}

impl PartitionScheme {
    /// Largest deviation of a cell mass from `1/m`.
    pub fn mass_defect(&self) -> f64 {
        let target = 1.0 / self.m as f64;
        self.cells.iter().flatten().map(|c| (c.mass - target).abs()).fold(0.0, f64::max)
    }

    /// Largest diameter among the small-diameter cells.
    pub fn max_small_diameter(&self) -> f64 {
        self.cells.iter().flatten().filter(|c| c.small_diameter).map(|c| c.set.diameter()).fold(0.0, f64::max)
    }

    /// Largest overlap between two distinct leftover cells, across all
    /// partitions.
    pub fn leftover_overlap(&self) -> f64 {
        let left: Vec<&IntervalSet> = self.cells.iter().flat_map(|p| p[..self.n1].iter().map(|c| &c.set)).collect();
        let mut worst: f64 = 0.0;
        for (i, a) in left.iter().enumerate() {
            for b in &left[i + 1..] {
                worst = worst.max(a.overlap(b));
            }
        }
        worst
    }

    /// Overlap between cells of one partition and the gap between their
    /// union and the support, maximized over partitions.
    pub fn partition_defect(&self) -> f64 {
        let support = self.measure.support();
        let mut worst: f64 = 0.0;
        for p in &self.cells {
            let mut union = IntervalSet::empty();
            for c in p {
                worst = worst.max(union.overlap(&c.set));
                union = union.union(&c.set);
            }
            worst = worst.max(support.difference(&union).length());
        }
        worst.abs()
    }
}

/// Schemes over increasing resolutions with nondecreasing `m`.
#[derive(Clone, Debug, Serialize)]
pub struct SchemeSchedule {
    pub resolutions: Vec<(usize, usize, usize)>,
}

impl SchemeSchedule {
    pub fn build(mu: &PiecewiseUniformMeasure, rs: &[usize], cap: usize) -> Result<(Self, Vec<PartitionScheme>)> {
        let mut schemes: Vec<PartitionScheme> = Vec::with_capacity(rs.len());
        for &r in rs {
            let min_m = schemes.last().map_or(0, |s| s.m);
            schemes.push(build_with(mu, r, min_m, cap)?);
        }
        let resolutions = schemes.iter().map(|s| (s.r, s.m, s.k)).collect();
        Ok((Self { resolutions }, schemes))
    }
}

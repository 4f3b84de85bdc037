use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Closed interval `[left, right]` with `left < right`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub left: f64,
    pub right: f64,
}

impl Segment {
    pub fn new(left: f64, right: f64) -> Self {
        Self { left, right }
    }

    pub fn length(&self) -> f64 {
        self.right - self.left
    }

    fn intersect(&self, other: &Segment) -> Option<Segment> {
        let l = self.left.max(other.left);
        let r = self.right.min(other.right);
        (l < r).then(|| Segment::new(l, r))
    }
}

/// Finite union of closed intervals, stored sorted with touching or
/// overlapping pieces coalesced. Boundaries carry no mass for the diffuse
/// measures used here, so set algebra is done up to endpoints.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct IntervalSet {
    segments: Vec<Segment>,
}

impl From<Vec<[f64; 2]>> for IntervalSet {
    fn from(v: Vec<[f64; 2]>) -> Self {
        IntervalSet::new(v.into_iter().map(|[l, r]| Segment::new(l, r)).collect())
    }
}

impl From<IntervalSet> for Vec<[f64; 2]> {
    fn from(s: IntervalSet) -> Self {
        s.segments.iter().map(|g| [g.left, g.right]).collect()
    }
}

impl IntervalSet {
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.retain(|s| s.left < s.right);
        segments.sort_by(|a, b| a.left.total_cmp(&b.left));
        let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
        for s in segments {
            match out.last_mut() {
                Some(last) if s.left <= last.right => last.right = last.right.max(s.right),
                _ => out.push(s),
            }
        }
        Self { segments: out }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn interval(left: f64, right: f64) -> Self {
        Self::new(vec![Segment::new(left, right)])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Lebesgue measure.
    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// `sup − inf`; zero for the empty set.
    pub fn diameter(&self) -> f64 {
        match (self.segments.first(), self.segments.last()) {
            (Some(a), Some(b)) => b.right - a.left,
            _ => 0.0,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.segments.iter().any(|s| s.left <= x && x <= s.right)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.segments.clone();
        all.extend_from_slice(&other.segments);
        Self::new(all)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.segments {
            for b in &other.segments {
                if let Some(s) = a.intersect(b) {
                    out.push(s);
                }
            }
        }
        Self::new(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut current = self.segments.clone();
        for cut in &other.segments {
            let mut next = Vec::with_capacity(current.len() + 1);
            for s in current {
                if cut.right <= s.left || cut.left >= s.right {
                    next.push(s);
                    continue;
                }
                if s.left < cut.left {
                    next.push(Segment::new(s.left, cut.left));
                }
                if cut.right < s.right {
                    next.push(Segment::new(cut.right, s.right));
                }
            }
            current = next;
        }
        Self::new(current)
    }

    /// Interior overlap length with `other`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.intersect(other).length()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformPiece {
    pub left: f64,
    pub right: f64,
    pub density: f64,
}

impl UniformPiece {
    pub fn new(left: f64, right: f64, density: f64) -> Self {
        Self { left, right, density }
    }

    pub fn mass(&self) -> f64 {
        self.density * (self.right - self.left)
    }

    fn segment(&self) -> Segment {
        Segment::new(self.left, self.right)
    }
}

/// Diffuse measure on the line with piecewise-constant density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawUniform")]
pub struct PiecewiseUniformMeasure {
    intervals: Vec<UniformPiece>,
}

#[derive(Deserialize)]
struct RawUniform {
    intervals: Vec<UniformPiece>,
}

impl TryFrom<RawUniform> for PiecewiseUniformMeasure {
    type Error = Error;

    fn try_from(raw: RawUniform) -> Result<Self> {
        PiecewiseUniformMeasure::new(raw.intervals)
    }
}

const GAUSS_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Composite 5-point Gauss–Legendre rule on `[a, b]`.
fn quadrature(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let panels = ((b - a) * 2048.0).ceil().clamp(4.0, 1e6) as usize;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in GAUSS_NODES.iter().zip(&GAUSS_WEIGHTS) {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    total * 0.5 * h
}

impl PiecewiseUniformMeasure {
    pub fn new(intervals: Vec<UniformPiece>) -> Result<Self> {
        for p in &intervals {
            if !(p.left.is_finite() && p.right.is_finite() && p.density.is_finite()) {
                return Err(Error::invalid("interval data must be finite"));
            }
            if p.left >= p.right {
                return Err(Error::invalid(format!("interval [{}, {}] is empty", p.left, p.right)));
            }
            if p.density < 0.0 {
                return Err(Error::invalid("density must be nonnegative"));
            }
        }
        if intervals.windows(2).any(|w| w[1].left < w[0].right) {
            return Err(Error::invalid("intervals must be sorted with disjoint interiors"));
        }
        let m = Self { intervals };
        if m.total_mass() <= 0.0 {
            return Err(Error::invalid("total mass must be positive"));
        }
        Ok(m)
    }

    /// Uniform probability measure on `[a, b]`.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![UniformPiece::new(a, b, 1.0 / (b - a))])
    }

    pub fn intervals(&self) -> &[UniformPiece] {
        &self.intervals
    }

    pub fn total_mass(&self) -> f64 {
        self.intervals.iter().map(UniformPiece::mass).sum()
    }

    /// Copy rescaled to total mass one.
    pub fn normalized(&self) -> Self {
        let w = self.total_mass();
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|p| UniformPiece::new(p.left, p.right, p.density / w))
                .collect(),
        }
    }

    /// Union of the positive-density pieces.
    pub fn support(&self) -> IntervalSet {
        IntervalSet::new(self.intervals.iter().filter(|p| p.density > 0.0).map(|p| p.segment()).collect())
    }

    pub fn mass_of(&self, set: &IntervalSet) -> f64 {
        self.intervals
            .iter()
            .map(|p| p.density * IntervalSet::new(vec![p.segment()]).overlap(set))
            .sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.intervals
            .iter()
            .map(|p| p.density * (x.min(p.right) - p.left).max(0.0))
            .sum()
    }

    /// `∫_set f dμ`.
    pub fn integrate_over(&self, f: &dyn Fn(f64) -> f64, set: &IntervalSet) -> f64 {
        let mut total = 0.0;
        for p in self.intervals.iter().filter(|p| p.density > 0.0) {
            for s in IntervalSet::new(vec![p.segment()]).intersect(set).segments() {
                total += p.density * quadrature(f, s.left, s.right);
            }
        }
        total
    }

    /// Leftmost subset of `within` carrying mass `alpha`.
    pub fn take_leftmost(&self, within: &IntervalSet, alpha: f64) -> Result<IntervalSet> {
        if alpha < 0.0 {
            return Err(Error::OutOfRange(format!("mass {alpha} is negative")));
        }
        let mut taken = Vec::new();
        let mut remaining = alpha;
        let mut pieces: Vec<(Segment, f64)> = Vec::new();
        for p in self.intervals.iter().filter(|p| p.density > 0.0) {
            for s in IntervalSet::new(vec![p.segment()]).intersect(within).segments() {
                pieces.push((*s, p.density));
            }
        }
        pieces.sort_by(|a, b| a.0.left.total_cmp(&b.0.left));
        for (s, density) in pieces {
            if remaining <= 0.0 {
                break;
            }
            let mass = density * s.length();
            if mass <= remaining {
                taken.push(s);
                remaining -= mass;
            } else {
                let right = (s.left + remaining / density).min(s.right);
                taken.push(Segment::new(s.left, right));
                remaining = 0.0;
            }
        }
        if remaining > tol::MASS {
            return Err(Error::OutOfRange(format!(
                "requested mass {alpha} exceeds available mass by {remaining:e}"
            )));
        }
        Ok(IntervalSet::new(taken))
    }

    /// Leftmost set of mass `alpha`, by CDF inversion over the support.
    pub fn split_with_mass(&self, alpha: f64) -> Result<IntervalSet> {
        let total = self.total_mass();
        if !(alpha > 0.0 && alpha < total) {
            return Err(Error::OutOfRange(format!("alpha = {alpha} must lie in (0, {total})")));
        }
        self.take_leftmost(&self.support(), alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_set(s: &IntervalSet, expect: &[(f64, f64)]) {
        assert_eq!(s.segments().len(), expect.len(), "{s:?}");
        for (g, (l, r)) in s.segments().iter().zip(expect) {
            assert!((g.left - l).abs() < 1e-12 && (g.right - r).abs() < 1e-12, "{s:?}");
        }
    }

    #[test]
    fn split_examples() {
        let u = PiecewiseUniformMeasure::uniform(0.0, 1.0).unwrap();
        assert_set(&u.split_with_mass(0.25).unwrap(), &[(0.0, 0.25)]);

        let d2 = PiecewiseUniformMeasure::new(vec![UniformPiece::new(0.0, 0.5, 2.0)]).unwrap();
        assert_set(&d2.split_with_mass(0.5).unwrap(), &[(0.0, 0.25)]);

        let gap = PiecewiseUniformMeasure::new(vec![
            UniformPiece::new(0.0, 1.0, 1.0),
            UniformPiece::new(2.0, 3.0, 1.0),
        ])
        .unwrap();
        assert_set(&gap.split_with_mass(1.5).unwrap(), &[(0.0, 1.0), (2.0, 2.5)]);
    }

    #[test]
    fn split_rejects_out_of_range() {
        let u = PiecewiseUniformMeasure::uniform(0.0, 1.0).unwrap();
        for a in [0.0, 1.0, -0.5, 2.0] {
            assert!(matches!(u.split_with_mass(a), Err(Error::OutOfRange(_))));
        }
    }

    #[test]
    fn split_composes_on_complement() {
        let m = PiecewiseUniformMeasure::new(vec![
            UniformPiece::new(0.0, 0.5, 1.0),
            UniformPiece::new(0.5, 0.75, 2.0),
        ])
        .unwrap();
        let first = m.split_with_mass(0.3).unwrap();
        let rest = m.support().difference(&first);
        let second = m.take_leftmost(&rest, 0.45).unwrap();
        assert!((m.mass_of(&first) - 0.3).abs() < 2e-9);
        assert!((m.mass_of(&second) - 0.45).abs() < 2e-9);
        assert_eq!(first.overlap(&second), 0.0);
    }

    #[test]
    fn zero_density_gap_is_skipped() {
        let m = PiecewiseUniformMeasure::new(vec![
            UniformPiece::new(0.0, 1.0, 0.5),
            UniformPiece::new(1.0, 2.0, 0.0),
            UniformPiece::new(2.0, 3.0, 0.5),
        ])
        .unwrap();
        let s = m.split_with_mass(0.75).unwrap();
        assert_set(&s, &[(0.0, 1.0), (2.0, 2.5)]);
        assert!((m.cdf(2.5) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_pieces() {
        assert!(PiecewiseUniformMeasure::new(vec![UniformPiece::new(1.0, 0.0, 1.0)]).is_err());
        assert!(PiecewiseUniformMeasure::new(vec![UniformPiece::new(0.0, 1.0, -1.0)]).is_err());
        assert!(PiecewiseUniformMeasure::new(vec![UniformPiece::new(0.0, 1.0, 0.0)]).is_err());
        assert!(PiecewiseUniformMeasure::new(vec![
            UniformPiece::new(0.0, 1.0, 1.0),
            UniformPiece::new(0.5, 2.0, 1.0),
        ])
        .is_err());
    }

    #[test]
    fn interval_set_algebra() {
        let a = IntervalSet::new(vec![Segment::new(0.0, 1.0), Segment::new(2.0, 3.0)]);
        let b = IntervalSet::interval(0.5, 2.5);
        assert_set(&a.intersect(&b), &[(0.5, 1.0), (2.0, 2.5)]);
        assert_set(&a.difference(&b), &[(0.0, 0.5), (2.5, 3.0)]);
        assert_set(&a.union(&b), &[(0.0, 3.0)]);
        assert_eq!(a.diameter(), 3.0);
    }

    #[test]
    fn quadrature_integrates_polynomials() {
        let u = PiecewiseUniformMeasure::uniform(0.0, 1.0).unwrap();
        let v = u.integrate_over(&|x| x * x, &IntervalSet::interval(0.0, 1.0));
        assert!((v - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn json_format() {
        let s = r#"{"intervals":[{"left":0.0,"right":1.0,"density":1.0}]}"#;
        let m: PiecewiseUniformMeasure = serde_json::from_str(s).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), s);
    }
}

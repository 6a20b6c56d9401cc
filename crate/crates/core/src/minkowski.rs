//! Minkowski sums of lattice polygons and their decompositions into
//! A-triangles (unit segments and triangles of lattice height one over an
//! edge).
//!
//! A summand of a lattice polygon is determined, up to translation, by a
//! sub-multiset of its primitive edge vectors summing to zero. Decompositions
//! are therefore enumerated as partitions of the edge multiset into closed
//! groups.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{convex_hull, planar_hull, LatticeError, LatticePolytope, LatticeVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinkowskiError {
    #[error("empty input")]
    EmptyInput,
    #[error("polygon has {edges} edges, more than the enumeration budget of {budget}")]
    TooLarge { edges: usize, budget: usize },
    #[error("expected planar lattice points")]
    NotPlanar,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T> = std::result::Result<T, MinkowskiError>;

/// Largest edge count accepted by [`enumerate_a_triangle_decompositions`].
pub const EDGE_BUDGET: usize = 12;

/// A lattice polygon in Z^2, possibly degenerate (a segment or a point).
/// Vertices run counter-clockwise from the lexicographically smallest one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePolygon {
    vertices: Vec<LatticeVector>,
}

impl LatticePolygon {
    pub fn from_points(points: &[LatticeVector]) -> Result<Self> {
        if points.is_empty() {
            return Err(MinkowskiError::EmptyInput);
        }
        if points.iter().any(|p| p.dim() != 2) {
            return Err(MinkowskiError::NotPlanar);
        }
        Ok(Self { vertices: planar_hull(points) })
    }

    pub fn from_i64(points: &[[i64; 2]]) -> Result<Self> {
        let pts: Vec<LatticeVector> = points
            .iter()
            .map(|p| LatticeVector::from_i64(p).expect("two coordinates"))
            .collect();
        Self::from_points(&pts)
    }

    pub fn from_polytope(p: &LatticePolytope) -> Result<Self> {
        Self::from_points(p.vertices())
    }

    /// The full-dimensional polytope, when this is not a segment or point.
    pub fn to_polytope(&self) -> Option<LatticePolytope> {
        convex_hull(&self.vertices).ok()
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    /// Edges as `(primitive direction, lattice length)`, counter-clockwise.
    /// A segment contributes both of its directions.
    pub fn edges(&self) -> Vec<(LatticeVector, BigInt)> {
        let k = self.vertices.len();
        if k < 2 {
            return Vec::new();
        }
        (0..k)
            .map(|i| {
                let d = self.vertices[(i + 1) % k].sub(&self.vertices[i]);
                let len = d.content();
                (d.div_exact(&len).expect("content divides"), len)
            })
            .collect()
    }

    pub fn translate(&self, t: &LatticeVector) -> Self {
        Self { vertices: self.vertices.iter().map(|v| v.add(t)).collect() }
    }

    /// Translate so the lexicographically smallest point is the origin.
    pub fn normalized(&self) -> Self {
        self.translate(&self.vertices[0].neg())
    }

    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        match self.to_polytope() {
            Some(p) => crate::lattice::lattice_points(&p),
            None if self.is_segment() => {
                let (d, len) = self.edges().remove(0);
                let steps = len.to_u64().expect("fixture-scale segment");
                (0..=steps)
                    .map(|i| self.vertices[0].add(&d.scale(&BigInt::from(i))))
                    .collect()
            }
            None => self.vertices.clone(),
        }
    }

    fn sort_key(&self) -> (usize, Vec<LatticeVector>) {
        let mut v = self.vertices.clone();
        v.sort();
        (v.len(), v)
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Unimodular-equivalence class of an A-triangle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ATriangle {
    UnitSegment,
    /// `conv{(0,0), (0,1), (ℓ,0)}`.
    Triangle(u64),
}

/// Minkowski sum of polygons or segments.
pub fn minkowski_sum(parts: &[LatticePolygon]) -> Result<LatticePolygon> {
    let (first, rest) = parts.split_first().ok_or(MinkowskiError::EmptyInput)?;
    let mut acc = first.clone();
    for p in rest {
        let mut pts = Vec::with_capacity(acc.vertices.len() * p.vertices.len());
        for a in &acc.vertices {
            for b in &p.vertices {
                pts.push(a.add(b));
            }
        }
        acc = LatticePolygon::from_points(&pts)?;
    }
    Ok(acc)
}

/// Classifies `poly` as an A-triangle, if it is one.
pub fn is_a_triangle(poly: &LatticePolygon) -> Option<ATriangle> {
    let v = poly.vertices();
    match v.len() {
        2 => v[1].sub(&v[0]).is_primitive().then_some(ATriangle::UnitSegment),
        3 => {
            // conv{a, b, c} is Triangle(ℓ) iff, for some ordering, c - a has
            // lattice length ℓ = |det(b - a, c - a)|; then (c - a)/ℓ and b - a
            // form a lattice basis.
            for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
                let u = v[b].sub(&v[a]);
                let w = v[c].sub(&v[a]);
                let det = (&u.coords()[0] * &w.coords()[1] - &u.coords()[1] * &w.coords()[0]).abs();
                if u.is_primitive() && w.content() == det {
                    return det.to_u64().map(ATriangle::Triangle);
                }
            }
            None
        }
        _ => None,
    }
}

/// An unordered list of summands, each translated so its lexicographically
/// smallest vertex is the origin, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinkowskiDecomposition {
    summands: Vec<LatticePolygon>,
}

impl MinkowskiDecomposition {
    /// Normalizes and sorts the summands; points are dropped since they are
    /// neutral.
    pub fn new(summands: Vec<LatticePolygon>) -> Result<Self> {
        let mut summands: Vec<LatticePolygon> = summands
            .into_iter()
            .filter(|s| !s.is_point())
            .map(|s| s.normalized())
            .collect();
        if summands.is_empty() {
            return Err(MinkowskiError::EmptyInput);
        }
        summands.sort_by_key(|s| s.sort_key());
        Ok(Self { summands })
    }

    pub fn summands(&self) -> &[LatticePolygon] {
        &self.summands
    }

    pub fn sum(&self) -> LatticePolygon {
        minkowski_sum(&self.summands).expect("nonempty by construction")
    }

    /// True when `target` equals the sum up to translation.
    pub fn decomposes(&self, target: &LatticePolygon) -> bool {
        self.sum().normalized() == target.normalized()
    }

    pub fn is_a_triangle_decomposition(&self) -> bool {
        self.summands.iter().all(|s| is_a_triangle(s).is_some())
    }
}

impl fmt::Display for MinkowskiDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Primitive edge directions of a polygon with multiplicities, in
/// counter-clockwise order.
fn edge_multiset(poly: &LatticePolygon) -> Vec<(LatticeVector, u64)> {
    let mut out: Vec<(LatticeVector, u64)> = Vec::new();
    for (d, len) in poly.edges() {
        let len = len.to_u64().expect("fixture-scale edge");
        match out.iter_mut().find(|(e, _)| *e == d) {
            Some((_, m)) => *m += len,
            None => out.push((d, len)),
        }
    }
    out
}

/// Polygon with the given counter-clockwise edge steps, starting at the
/// origin.
fn polygon_from_steps(dirs: &[LatticeVector], counts: &[u64]) -> LatticePolygon {
    let mut at = LatticeVector::zero(2).expect("planar");
    let mut pts = vec![at.clone()];
    for (d, &c) in dirs.iter().zip(counts) {
        if c > 0 {
            at = at.add(&d.scale(&BigInt::from(c)));
            pts.push(at.clone());
        }
    }
    LatticePolygon::from_points(&pts).expect("nonempty")
}

/// Nonzero count vectors `sub <= avail` whose edge vectors sum to zero.
fn closed_subsets(dirs: &[LatticeVector], avail: &[u64], first_required: Option<usize>) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; dirs.len()];
    fn rec(
        i: usize,
        dirs: &[LatticeVector],
        avail: &[u64],
        first_required: Option<usize>,
        cur: &mut Vec<u64>,
        sum: (BigInt, BigInt),
        out: &mut Vec<Vec<u64>>,
    ) {
        if i == dirs.len() {
            if sum.0.is_zero() && sum.1.is_zero() && cur.iter().any(|&c| c > 0) {
                out.push(cur.clone());
            }
            return;
        }
        let lo = u64::from(first_required == Some(i));
        for c in lo..=avail[i] {
            cur[i] = c;
            let k = BigInt::from(c);
            let next = (
                &sum.0 + &dirs[i].coords()[0] * &k,
                &sum.1 + &dirs[i].coords()[1] * &k,
            );
            rec(i + 1, dirs, avail, first_required, cur, next, out);
        }
        cur[i] = 0;
    }
    rec(0, dirs, avail, first_required, &mut cur, (BigInt::zero(), BigInt::zero()), &mut out);
    out
}

/// Every decomposition of `poly` into A-triangles, up to translation and
/// reordering, in canonical order.
pub fn enumerate_a_triangle_decompositions(
    poly: &LatticePolygon,
) -> Result<Vec<MinkowskiDecomposition>> {
    let edges = poly.edges().len();
    if edges > EDGE_BUDGET {
        return Err(MinkowskiError::TooLarge { edges, budget: EDGE_BUDGET });
    }
    let ms = edge_multiset(poly);
    let dirs: Vec<LatticeVector> = ms.iter().map(|(d, _)| d.clone()).collect();
    let avail: Vec<u64> = ms.iter().map(|(_, c)| *c).collect();
    let mut found = BTreeSet::new();
    let mut stack = Vec::new();
    partition(&dirs, avail, &mut stack, &mut found);
    Ok(found.into_iter().collect())
}

fn partition(
    dirs: &[LatticeVector],
    avail: Vec<u64>,
    stack: &mut Vec<LatticePolygon>,
    found: &mut BTreeSet<MinkowskiDecomposition>,
) {
    // The first remaining direction must belong to the next summand, which
    // fixes an order on the groups and avoids revisiting permutations.
    let Some(first) = avail.iter().position(|&c| c > 0) else {
        if let Ok(dec) = MinkowskiDecomposition::new(stack.clone()) {
            found.insert(dec);
        }
        return;
    };
    for sub in closed_subsets(dirs, &avail, Some(first)) {
        let summand = polygon_from_steps(dirs, &sub);
        if is_a_triangle(&summand).is_none() {
            continue;
        }
        let rest: Vec<u64> = avail.iter().zip(&sub).map(|(a, s)| a - s).collect();
        stack.push(summand);
        partition(dirs, rest, stack, found);
        stack.pop();
    }
}

/// True when `poly` is a nontrivial Minkowski sum of lattice polygons.
pub fn is_decomposable(poly: &LatticePolygon) -> bool {
    let ms = edge_multiset(poly);
    let dirs: Vec<LatticeVector> = ms.iter().map(|(d, _)| d.clone()).collect();
    let avail: Vec<u64> = ms.iter().map(|(_, c)| *c).collect();
    closed_subsets(&dirs, &avail, None)
        .into_iter()
        .any(|sub| sub != avail)
}

/// Every summand is Minkowski-indecomposable over the lattice.
pub fn is_maximal(dec: &MinkowskiDecomposition) -> bool {
    dec.summands.iter().all(|s| !is_decomposable(s))
}

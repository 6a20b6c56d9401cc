//! Lattice polytopes in dimension 2 and 3.
//!
//! Polytopes are immutable values. Every constructor goes through
//! [`convex_hull`], which canonicalizes the vertex list (lexicographic) and
//! the facet list (lexicographic by inward normal), so two polytopes with the
//! same point set compare equal and print identically.

mod hull;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use hull::{hull2_indices, hull3, Hull3Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty input")]
    EmptyInput,
    #[error("convex hull is not full-dimensional")]
    NotFullDimensional,
    #[error("ambient dimension must be 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("points of dimension {expected} and {got} mixed")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polytope is not Fano")]
    NotFano,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("degenerate edge: endpoints coincide")]
    DegenerateEdge,
    #[error("facet index {index} out of range ({count} facets)")]
    BadIndex { index: usize, count: usize },
    #[error("matrix is not unimodular")]
    NotUnimodular,
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// A point of Z^2 or Z^3.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        match coords.len() {
            2 | 3 => Ok(Self(coords)),
            n => Err(LatticeError::BadDimension(n)),
        }
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(vec![BigInt::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the coordinates; zero only for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn dot(&self, other: &Self) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    /// Exact division of every coordinate by `k`; `None` if not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self(out))
    }

    /// Coordinates as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A facet `{x : <normal, x> + offset = 0}` of a polytope lying in
/// `<normal, x> + offset >= 0`, with its vertices in cyclic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: BigInt,
    /// Indices into [`LatticePolytope::vertices`]; cyclic for 3-polytopes,
    /// the two endpoints for polygons.
    pub vertices: Vec<usize>,
}

impl Facet {
    pub fn value_at(&self, x: &LatticeVector) -> BigInt {
        self.normal.dot(x) + &self.offset
    }
}

/// A full-dimensional lattice polytope in Z^2 or Z^3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticeVector>,
    facets: Vec<Facet>,
}

impl LatticePolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Vertex index pairs `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for f in &self.facets {
            let k = f.vertices.len();
            let pairs: Vec<(usize, usize)> = if self.dim == 2 {
                vec![(f.vertices[0], f.vertices[1])]
            } else {
                (0..k).map(|e| (f.vertices[e], f.vertices[(e + 1) % k])).collect()
            };
            for (a, b) in pairs {
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort();
        edges.dedup();
        edges
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        x.dim() == self.dim && self.facets.iter().all(|f| !f.value_at(x).is_negative())
    }

    pub fn contains_rational(&self, x: &[BigRational]) -> bool {
        self.facets.iter().all(|f| {
            let v: BigRational = f
                .normal
                .coords()
                .iter()
                .zip(x)
                .map(|(n, c)| c * BigRational::from_integer(n.clone()))
                .sum::<BigRational>()
                + BigRational::from_integer(f.offset.clone());
            !v.is_negative()
        })
    }

    pub fn is_interior(&self, x: &LatticeVector) -> bool {
        x.dim() == self.dim && self.facets.iter().all(|f| f.value_at(x).is_positive())
    }

    /// Image under an affine unimodular map.
    pub fn transform(&self, map: &AffineUnimodularMap) -> LatticePolytope {
        let pts: Vec<LatticeVector> = self.vertices.iter().map(|v| map.apply(v)).collect();
        convex_hull(&pts).expect("unimodular image of a full-dimensional polytope")
    }

    pub fn translate(&self, t: &LatticeVector) -> LatticePolytope {
        let pts: Vec<LatticeVector> = self.vertices.iter().map(|v| v.add(t)).collect();
        convex_hull(&pts).expect("translate of a full-dimensional polytope")
    }

    /// Minkowski sum, as the hull of all vertex sums.
    pub fn minkowski_sum(&self, other: &LatticePolytope) -> LatticePolytope {
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.add(b));
            }
        }
        convex_hull(&pts).expect("sum of full-dimensional polytopes")
    }

    /// Vertices of facet `index` in cyclic order.
    pub fn facet_vertices(&self, index: usize) -> Result<Vec<LatticeVector>> {
        let f = self.facets.get(index).ok_or(LatticeError::BadIndex {
            index,
            count: self.facets.len(),
        })?;
        Ok(f.vertices.iter().map(|&i| self.vertices[i].clone()).collect())
    }
}

impl fmt::Display for LatticePolytope {
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

fn common_dim(points: &[LatticeVector]) -> Result<usize> {
    let dim = points.first().ok_or(LatticeError::EmptyInput)?.dim();
    for p in points {
        if p.dim() != dim {
            return Err(LatticeError::DimensionMismatch { expected: dim, got: p.dim() });
        }
    }
    Ok(dim)
}

/// Inputs with every coordinate below this bound run on `i128`; the largest
/// intermediate (a dot product with a cross product) stays under 2^100.
const FAST_BOUND: i64 = 1 << 30;

fn small_coords(points: &[LatticeVector]) -> Option<Vec<Vec<i128>>> {
    points
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .map(|c| c.to_i64().filter(|v| v.abs() < FAST_BOUND).map(i128::from))
                .collect::<Option<Vec<i128>>>()
        })
        .collect()
}

/// Convex hull of a nonempty set of lattice points with a full-dimensional
/// hull.
pub fn convex_hull(points: &[LatticeVector]) -> Result<LatticePolytope> {
    let dim = common_dim(points)?;
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    match (dim, small_coords(&pts)) {
        (2, Some(small)) => hull_2d(&pts, &small),
        (2, None) => {
            let big: Vec<Vec<BigInt>> = pts.iter().map(|p| p.coords().to_vec()).collect();
            hull_2d(&pts, &big)
        }
        (_, Some(small)) => hull_3d(&pts, &small),
        (_, None) => {
            let big: Vec<Vec<BigInt>> = pts.iter().map(|p| p.coords().to_vec()).collect();
            hull_3d(&pts, &big)
        }
    }
}

fn to_big<T: ToString>(c: &T) -> BigInt {
    c.to_string().parse().expect("integer formatting round-trips")
}

fn hull_2d<T: hull::Exact + ToString>(
    pts: &[LatticeVector],
    coords: &[Vec<T>],
) -> Result<LatticePolytope> {
    let planar: Vec<[T; 2]> = coords.iter().map(|c| [c[0].clone(), c[1].clone()]).collect();
    let cyc = hull2_indices(&planar);
    if cyc.len() < 3 {
        return Err(LatticeError::NotFullDimensional);
    }
    let mut vertices: Vec<LatticeVector> = cyc.iter().map(|&i| pts[i].clone()).collect();
    vertices.sort();
    let index_of = |p: &LatticeVector| vertices.binary_search(p).expect("vertex present");
    let k = cyc.len();
    let mut facets = Vec::with_capacity(k);
    for e in 0..k {
        let a = &pts[cyc[e]];
        let b = &pts[cyc[(e + 1) % k]];
        let d = b.sub(a);
        // Counter-clockwise traversal: the inward normal is d rotated by +90.
        let n = LatticeVector(vec![-d.coords()[1].clone(), d.coords()[0].clone()]);
        let g = n.content();
        let normal = n.div_exact(&g).expect("content divides");
        let offset = -normal.dot(a);
        let (ia, ib) = (index_of(a), index_of(b));
        facets.push(Facet { normal, offset, vertices: vec![ia.min(ib), ia.max(ib)] });
    }
    facets.sort_by(|x, y| x.normal.cmp(&y.normal));
    Ok(LatticePolytope { dim: 2, vertices, facets })
}

fn hull_3d<T: hull::Exact + ToString>(
    pts: &[LatticeVector],
    coords: &[Vec<T>],
) -> Result<LatticePolytope> {
    let spatial: Vec<[T; 3]> = coords
        .iter()
        .map(|c| [c[0].clone(), c[1].clone(), c[2].clone()])
        .collect();
    let raw = hull3(&spatial).map_err(|e| match e {
        Hull3Error::NotFullDimensional => LatticeError::NotFullDimensional,
    })?;
    let mut vertex_ids: Vec<usize> = raw.iter().flat_map(|f| f.vertices.iter().copied()).collect();
    vertex_ids.sort();
    vertex_ids.dedup();
    // `pts` is sorted, so sorted indices give sorted vertices.
    let vertices: Vec<LatticeVector> = vertex_ids.iter().map(|&i| pts[i].clone()).collect();
    let remap = |i: usize| vertex_ids.binary_search(&i).expect("vertex present");
    let mut facets: Vec<Facet> = raw
        .into_iter()
        .map(|f| {
            let normal = LatticeVector(f.normal.iter().map(to_big).collect());
            let offset = to_big(&f.offset);
            let cyc: Vec<usize> = f.vertices.iter().map(|&i| remap(i)).collect();
            Facet { normal, offset, vertices: canonical_cycle(cyc) }
        })
        .collect();
    facets.sort_by(|x, y| x.normal.cmp(&y.normal));
    Ok(LatticePolytope { dim: 3, vertices, facets })
}

/// Rotates a cycle to start at its smallest entry and runs it toward the
/// smaller neighbour.
fn canonical_cycle(mut cyc: Vec<usize>) -> Vec<usize> {
    let k = cyc.len();
    let start = (0..k).min_by_key(|&i| cyc[i]).unwrap_or(0);
    cyc.rotate_left(start);
    if k > 2 && cyc[k - 1] < cyc[1] {
        cyc[1..].reverse();
    }
    cyc
}

/// All lattice points of `p` in lexicographic order.
pub fn lattice_points(p: &LatticePolytope) -> Vec<LatticeVector> {
    let dim = p.dim();
    let mut lo = p.vertices[0].coords().to_vec();
    let mut hi = lo.clone();
    for v in &p.vertices {
        for a in 0..dim {
            if v.coords()[a] < lo[a] {
                lo[a] = v.coords()[a].clone();
            }
            if v.coords()[a] > hi[a] {
                hi[a] = v.coords()[a].clone();
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let x = LatticeVector(cur.clone());
        if p.contains(&x) {
            out.push(x);
        }
        // Odometer increment, last coordinate fastest: lexicographic order.
        let mut a = dim;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            if cur[a] < hi[a] {
                cur[a] += 1;
                for b in a + 1..dim {
                    cur[b] = lo[b].clone();
                }
                break;
            }
        }
    }
}

/// Origin strictly interior and every vertex primitive.
pub fn is_fano(p: &LatticePolytope) -> bool {
    p.facets.iter().all(|f| f.offset.is_positive()) && p.vertices.iter().all(|v| v.is_primitive())
}

/// A polytope with exact rational vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolytope {
    vertices: Vec<Vec<BigRational>>,
}

impl RationalPolytope {
    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().flatten().all(|c| c.is_integer())
    }

    /// The same polytope as a lattice polytope when all vertices are integral.
    pub fn to_lattice(&self) -> Option<LatticePolytope> {
        if !self.is_integral() {
            return None;
        }
        let pts: Vec<LatticeVector> = self
            .vertices
            .iter()
            .map(|v| LatticeVector(v.iter().map(|c| c.to_integer()).collect()))
            .collect();
        convex_hull(&pts).ok()
    }
}

impl fmt::Display for RationalPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, "}}")
    }
}

/// The dual `{y : <y, x> >= -1 for all x in p}`. Its vertices are the facet
/// normals divided by their offsets.
pub fn dual_polytope(p: &LatticePolytope) -> Result<RationalPolytope> {
    if !is_fano(p) {
        return Err(LatticeError::NotFano);
    }
    let mut vertices: Vec<Vec<BigRational>> = p
        .facets
        .iter()
        .map(|f| {
            f.normal
                .coords()
                .iter()
                .map(|c| BigRational::new(c.clone(), f.offset.clone()))
                .collect()
        })
        .collect();
    vertices.sort();
    Ok(RationalPolytope { vertices })
}

pub fn is_reflexive(p: &LatticePolytope) -> Result<bool> {
    if !is_fano(p) {
        return Err(LatticeError::NotFano);
    }
    Ok(p.facets.iter().all(|f| f.offset.is_one()))
}

/// Number of lattice steps between two lattice points.
pub fn lattice_length(a: &LatticeVector, b: &LatticeVector) -> Result<BigInt> {
    if a.dim() != b.dim() {
        return Err(LatticeError::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    if a == b {
        return Err(LatticeError::DegenerateEdge);
    }
    Ok(b.sub(a).content())
}

/// Square integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let n = rows.len();
        if !(2..=3).contains(&n) {
            return Err(LatticeError::BadDimension(n));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(LatticeError::DimensionMismatch { expected: n, got: r.len() });
        }
        Ok(Self { n, entries: rows.iter().flatten().cloned().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Self { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn determinant(&self) -> BigInt {
        let m = |i, j| self.get(i, j);
        match self.n {
            2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
            _ => {
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
        }
    }

    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector(
            (0..self.n)
                .map(|i| self.row(i).iter().zip(v.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut out = IntMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                *out.get_mut(i, j) = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        out
    }

    /// Inverse of a unimodular matrix, via the adjugate.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let det = self.determinant();
        if det.abs() != BigInt::one() {
            return Err(LatticeError::NotUnimodular);
        }
        let n = self.n;
        let mut out = IntMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let cof = self.cofactor(j, i);
                *out.get_mut(i, j) = cof * &det;
            }
        }
        Ok(out)
    }

    fn cofactor(&self, i: usize, j: usize) -> BigInt {
        let n = self.n;
        if n == 2 {
            let v = self.get(1 - i, 1 - j).clone();
            return if (i + j) % 2 == 0 { v } else { -v };
        }
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let minor = self.get(rows[0], cols[0]) * self.get(rows[1], cols[1])
            - self.get(rows[0], cols[1]) * self.get(rows[1], cols[0]);
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n {
            self.entries.swap(a * self.n + j, b * self.n + j);
        }
    }

    /// row[a] -= k * row[b]
    fn row_axpy(&mut self, a: usize, b: usize, k: &BigInt) {
        for j in 0..self.n {
            let v = self.get(b, j) * k;
            *self.get_mut(a, j) -= v;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.n {
            let v = -self.get(a, j).clone();
            *self.get_mut(a, j) = v;
        }
    }
}

/// `x -> matrix * x + translation` with `det(matrix) = ±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineUnimodularMap {
    matrix: IntMatrix,
    translation: LatticeVector,
}

impl AffineUnimodularMap {
    pub fn new(matrix: IntMatrix, translation: LatticeVector) -> Result<Self> {
        if matrix.determinant().abs() != BigInt::one() {
            return Err(LatticeError::NotUnimodular);
        }
        if translation.dim() != matrix.size() {
            return Err(LatticeError::DimensionMismatch {
                expected: matrix.size(),
                got: translation.dim(),
            });
        }
        Ok(Self { matrix, translation })
    }

    pub fn linear(matrix: IntMatrix) -> Result<Self> {
        let t = LatticeVector::zero(matrix.size())?;
        Self::new(matrix, t)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> &LatticeVector {
        &self.translation
    }

    pub fn apply(&self, x: &LatticeVector) -> LatticeVector {
        self.matrix.mul_vec(x).add(&self.translation)
    }

    pub fn apply_linear(&self, x: &LatticeVector) -> LatticeVector {
        self.matrix.mul_vec(x)
    }

    pub fn inverse(&self) -> AffineUnimodularMap {
        let inv = self.matrix.unimodular_inverse().expect("unimodular by construction");
        let translation = inv.mul_vec(&self.translation).neg();
        AffineUnimodularMap { matrix: inv, translation }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineUnimodularMap) -> AffineUnimodularMap {
        AffineUnimodularMap {
            matrix: self.matrix.mul(&other.matrix),
            translation: self.apply(&other.translation),
        }
    }
}

/// A unimodular matrix whose last row is the primitive vector `u`.
pub fn complete_to_basis(u: &LatticeVector) -> Result<IntMatrix> {
    if !u.is_primitive() {
        return Err(LatticeError::NotUnimodular);
    }
    let n = u.dim();
    // Row operations `ops` with ops * u = e_0, tracked on `w`.
    let mut ops = IntMatrix::identity(n);
    let mut w: Vec<BigInt> = u.coords().to_vec();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| !w[i].is_zero()).collect();
        if nonzero.len() == 1 {
            let p = nonzero[0];
            if p != 0 {
                w.swap(0, p);
                ops.swap_rows(0, p);
            }
            if w[0].is_negative() {
                w[0] = -w[0].clone();
                ops.negate_row(0);
            }
            break;
        }
        let pivot = *nonzero.iter().min_by_key(|&&i| w[i].abs()).expect("nonzero entry");
        for &i in &nonzero {
            if i != pivot {
                let q = w[i].div_floor(&w[pivot]);
                w[i] = &w[i] - &q * &w[pivot];
                ops.row_axpy(i, pivot, &q);
            }
        }
    }
    // ops * u = e_0, so u is the first column of ops^{-1} and the first row
    // of its transpose.
    let inv = ops.unimodular_inverse()?;
    let mut rows: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| inv.get(j, i).clone()).collect()).collect();
    rows.rotate_left(1);
    IntMatrix::from_rows(&rows)
}

/// An affine lattice isomorphism between a facet of a 3-polytope and a
/// lattice polygon in Z^2.
#[derive(Debug, Clone)]
pub struct FacetChart {
    facet_index: usize,
    basis: IntMatrix,
    inverse_basis: IntMatrix,
    base_point: LatticeVector,
    image: LatticePolytope,
}

impl FacetChart {
    pub fn facet_index(&self) -> usize {
        self.facet_index
    }

    /// The facet as a polygon in Z^2.
    pub fn image(&self) -> &LatticePolytope {
        &self.image
    }

    /// Chart coordinates of a point of the facet plane; `None` off the plane.
    pub fn forward(&self, x: &LatticeVector) -> Option<LatticeVector> {
        if x.dim() != 3 {
            return None;
        }
        let y = self.basis.mul_vec(&x.sub(&self.base_point));
        if !y.coords()[2].is_zero() {
            return None;
        }
        Some(LatticeVector(y.coords()[..2].to_vec()))
    }

    pub fn inverse(&self, y: &LatticeVector) -> LatticeVector {
        let lifted = LatticeVector(vec![y.coords()[0].clone(), y.coords()[1].clone(), BigInt::zero()]);
        self.inverse_basis.mul_vec(&lifted).add(&self.base_point)
    }
}

/// Chart of facet `facet_index` of a reflexive 3-polytope.
pub fn facet_chart(p: &LatticePolytope, facet_index: usize) -> Result<FacetChart> {
    if p.dim() != 3 {
        return Err(LatticeError::BadDimension(p.dim()));
    }
    if !is_reflexive(p)? {
        return Err(LatticeError::NotReflexive);
    }
    let facet = p.facets.get(facet_index).ok_or(LatticeError::BadIndex {
        index: facet_index,
        count: p.facets.len(),
    })?;
    let basis = complete_to_basis(&facet.normal)?;
    let inverse_basis = basis.unimodular_inverse()?;
    let base_point = p.vertices[facet.vertices[0]].clone();
    let mut chart = FacetChart {
        facet_index,
        basis,
        inverse_basis,
        base_point,
        image: p.clone(),
    };
    let pts: Vec<LatticeVector> = facet
        .vertices
        .iter()
        .map(|&i| chart.forward(&p.vertices[i]).expect("vertex lies on its facet"))
        .collect();
    chart.image = convex_hull(&pts)?;
    Ok(chart)
}

/// An affine unimodular map carrying polygon `a` onto polygon `b`, if one
/// exists. Candidates are tried in a fixed order so the answer is
/// deterministic; the identity-like matches come first when they exist.
pub fn polygon_equivalence(a: &LatticePolytope, b: &LatticePolytope) -> Option<AffineUnimodularMap> {
    polygon_equivalences(a, b).into_iter().next()
}

/// Every affine unimodular map carrying polygon `a` onto polygon `b`.
pub fn polygon_equivalences(a: &LatticePolytope, b: &LatticePolytope) -> Vec<AffineUnimodularMap> {
    if a.dim() != 2 || b.dim() != 2 || a.vertices.len() != b.vertices.len() {
        return Vec::new();
    }
    let ca = cyclic_vertices(a);
    let cb = cyclic_vertices(b);
    let k = ca.len();
    let (a0, a1, a2) = (&ca[0], &ca[1], &ca[k - 1]);
    let u = a1.sub(a0);
    let v = a2.sub(a0);
    let det_a = &u.coords()[0] * &v.coords()[1] - &u.coords()[1] * &v.coords()[0];
    let target: std::collections::BTreeSet<&LatticeVector> = b.vertices.iter().collect();
    let mut found = Vec::new();
    for reversed in [false, true] {
        for s in 0..k {
            let b0 = &cb[s];
            let (b1, b2) = if reversed {
                (&cb[(s + k - 1) % k], &cb[(s + 1) % k])
            } else {
                (&cb[(s + 1) % k], &cb[(s + k - 1) % k])
            };
            let up = b1.sub(b0);
            let vp = b2.sub(b0);
            // Solve M [u v] = [up vp]; M = [up vp] adj([u v]) / det.
            let (u0, u1) = (&u.coords()[0], &u.coords()[1]);
            let (v0, v1) = (&v.coords()[0], &v.coords()[1]);
            let (p0, p1) = (&up.coords()[0], &up.coords()[1]);
            let (q0, q1) = (&vp.coords()[0], &vp.coords()[1]);
            let num = [
                p0 * v1 - q0 * u1,
                -(p0 * v0) + q0 * u0,
                p1 * v1 - q1 * u1,
                -(p1 * v0) + q1 * u0,
            ];
            if num.iter().any(|x| !x.is_multiple_of(&det_a)) {
                continue;
            }
            let m: Vec<BigInt> = num.iter().map(|x| x / &det_a).collect();
            let Ok(matrix) = IntMatrix::from_rows(&[vec![m[0].clone(), m[1].clone()], vec![m[2].clone(), m[3].clone()]]) else {
                continue;
            };
            let t = b0.sub(&matrix.mul_vec(a0));
            let Ok(map) = AffineUnimodularMap::new(matrix, t) else { continue };
            let image: std::collections::BTreeSet<LatticeVector> =
                a.vertices.iter().map(|x| map.apply(x)).collect();
            if image.iter().collect::<std::collections::BTreeSet<_>>() == target {
                found.push(map);
            }
        }
    }
    found
}

/// Vertices of a polygon in counter-clockwise order from the smallest.
pub fn cyclic_vertices(p: &LatticePolytope) -> Vec<LatticeVector> {
    planar_hull(&p.vertices)
}

/// Extreme points of planar lattice points, counter-clockwise from the
/// lexicographically smallest. Unlike [`convex_hull`] this accepts segments
/// and single points.
pub fn planar_hull(points: &[LatticeVector]) -> Vec<LatticeVector> {
    let pts: Vec<[BigInt; 2]> = points
        .iter()
        .map(|v| [v.coords()[0].clone(), v.coords()[1].clone()])
        .collect();
    hull2_indices(&pts).into_iter().map(|i| points[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c).unwrap()
    }

    fn pts(rows: &[&[i64]]) -> Vec<LatticeVector> {
        rows.iter().map(|r| lv(r)).collect()
    }

    fn hexagon() -> LatticePolytope {
        convex_hull(&pts(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]])).unwrap()
    }

    fn pyramid() -> LatticePolytope {
        convex_hull(&pts(&[
            &[1, 0, 1],
            &[1, 1, 1],
            &[0, 1, 1],
            &[-1, 0, 1],
            &[-1, -1, 1],
            &[0, -1, 1],
            &[0, 0, -1],
        ]))
        .unwrap()
    }

    #[test]
    fn hexagon_hull() {
        let f = hexagon();
        assert_eq!(f.vertices().len(), 6);
        assert_eq!(f.edges().len(), 6);
        assert_eq!(f.facets().len(), 6);
    }

    #[test]
    fn duplicate_points_removed() {
        let t = convex_hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[0, 0]])).unwrap();
        assert_eq!(t.vertices(), &pts(&[&[0, 0], &[0, 1], &[1, 0]])[..]);
        assert_eq!(lattice_points(&t).len(), 3);
    }

    #[test]
    fn pyramid_faces() {
        let p = pyramid();
        assert_eq!(p.vertices().len(), 7);
        assert_eq!(p.facets().len(), 7);
        let sizes: Vec<usize> = p.facets().iter().map(|f| f.vertices.len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 6).count(), 1);
        assert_eq!(sizes.iter().filter(|&&s| s == 3).count(), 6);
        assert_eq!(p.edges().len(), 12);
    }

    #[test]
    fn errors() {
        assert_eq!(convex_hull(&[]).unwrap_err(), LatticeError::EmptyInput);
        assert_eq!(
            convex_hull(&pts(&[&[0, 0], &[1, 0]])).unwrap_err(),
            LatticeError::NotFullDimensional
        );
        assert_eq!(
            convex_hull(&pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])).unwrap_err(),
            LatticeError::NotFullDimensional
        );
        assert!(matches!(
            convex_hull(&pts(&[&[0, 0], &[1, 0, 0]])).unwrap_err(),
            LatticeError::DimensionMismatch { .. }
        ));
        assert_eq!(LatticeVector::from_i64(&[1]).unwrap_err(), LatticeError::BadDimension(1));
    }

    #[test]
    fn lattice_point_counts() {
        assert_eq!(lattice_points(&pyramid()).len(), 9);
        let hex = lattice_points(&hexagon());
        assert_eq!(hex.len(), 7);
        let mut sorted = hex.clone();
        sorted.sort();
        assert_eq!(hex, sorted);
    }

    #[test]
    fn fano_predicates() {
        assert!(is_fano(&hexagon()));
        assert!(is_fano(&pyramid()));
        let q = convex_hull(&pts(&[&[2, 0], &[0, 1], &[-1, 0], &[0, -1]])).unwrap();
        assert!(!is_fano(&q));
        assert_eq!(dual_polytope(&q).unwrap_err(), LatticeError::NotFano);
        assert_eq!(is_reflexive(&q).unwrap_err(), LatticeError::NotFano);
        assert!(is_reflexive(&pyramid()).unwrap());
        assert!(is_reflexive(&hexagon()).unwrap());
    }

    #[test]
    fn dual_of_p2_triangle() {
        let t = convex_hull(&pts(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        let d = dual_polytope(&t).unwrap().to_lattice().unwrap();
        assert_eq!(d, convex_hull(&pts(&[&[-1, -1], &[2, -1], &[-1, 2]])).unwrap());
        // Under the opposite sign convention <y, x> <= 1 the dual is the negation.
        let neg = IntMatrix::from_i64(&[&[-1, 0], &[0, -1]]).unwrap();
        let flipped = d.transform(&AffineUnimodularMap::linear(neg).unwrap());
        assert_eq!(flipped, convex_hull(&pts(&[&[1, 1], &[-2, 1], &[1, -2]])).unwrap());
    }

    #[test]
    fn dual_involution_on_hexagon() {
        let f = hexagon();
        let d = dual_polytope(&f).unwrap();
        assert!(d.is_integral());
        assert_eq!(d.vertices().len(), 6);
        let dd = dual_polytope(&d.to_lattice().unwrap()).unwrap().to_lattice().unwrap();
        assert_eq!(dd, f);
    }

    #[test]
    fn lengths() {
        assert_eq!(lattice_length(&lv(&[0, 0]), &lv(&[3, 0])).unwrap(), BigInt::from(3));
        assert_eq!(lattice_length(&lv(&[1, 0, 1]), &lv(&[0, 0, -1])).unwrap(), BigInt::from(1));
        assert_eq!(lattice_length(&lv(&[0, 0]), &lv(&[2, 4])).unwrap(), BigInt::from(2));
        assert_eq!(lattice_length(&lv(&[1, 1]), &lv(&[1, 1])).unwrap_err(), LatticeError::DegenerateEdge);
    }

    #[test]
    fn basis_completion() {
        for u in [&[0i64, 0, -1][..], &[3, 5, 7], &[-1, -1, 1], &[0, 4, -3], &[2, 3]] {
            let u = lv(u);
            let m = complete_to_basis(&u).unwrap();
            assert_eq!(m.determinant().abs(), BigInt::one());
            assert_eq!(m.row(m.size() - 1), u.coords());
        }
        assert!(complete_to_basis(&lv(&[2, 4, 0])).is_err());
    }

    #[test]
    fn hexagonal_facet_chart_is_hexagon() {
        let p = pyramid();
        let idx = p.facets().iter().position(|f| f.vertices.len() == 6).unwrap();
        let chart = facet_chart(&p, idx).unwrap();
        assert!(polygon_equivalence(chart.image(), &hexagon()).is_some());
        for v in p.facet_vertices(idx).unwrap() {
            let y = chart.forward(&v).unwrap();
            assert_eq!(chart.inverse(&y), v);
        }
        assert!(chart.forward(&lv(&[0, 0, -1])).is_none());
        assert!(matches!(facet_chart(&p, 99), Err(LatticeError::BadIndex { .. })));
    }

    #[test]
    fn equivalences_of_hexagon_form_its_symmetry_group() {
        // The lattice automorphism group of the hexagon is dihedral of order 12.
        let f = hexagon();
        assert_eq!(polygon_equivalences(&f, &f).len(), 12);
    }

    #[test]
    fn large_coordinates_use_the_exact_fallback() {
        let big = BigInt::from(1u64 << 40);
        let v = |a: i64, b: i64| LatticeVector::new(vec![&big * a, &big * b]).unwrap();
        let t = convex_hull(&[v(0, 0), v(1, 0), v(0, 1), v(1, 1), v(0, 0).add(&lv(&[1, 1]))]).unwrap();
        assert_eq!(t.vertices().len(), 4);
    }
}

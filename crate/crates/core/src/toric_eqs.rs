//! Determinantal equations of the toric threefold over the hexagon, their
//! deformations, and checks on them.
//!
//! Two presentations are generated. "Tom" takes the 2×2 minors of
//!
//! ```text
//! x7  x1    x2
//! x4  x7+u  x3
//! x5  x6    x7+v
//! ```
//!
//! and "Jerry" takes the rectangle determinants of a cube labelled by
//! `(i, j, k) ∈ {0,1}³`: bottom face `x7, x1, x3, x2` at `(0,0,0), (1,0,0),
//! (0,1,0), (1,1,0)`, top face `x5, x6, x4, x7+s` at `(0,0,1), (1,0,1),
//! (0,1,1), (1,1,1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::RationalMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("family is not deformed")]
    NotDeformed,
    #[error("sample lies on a coordinate subspace")]
    DegenerateSample,
    #[error("point does not satisfy equation {equation}")]
    PointNotOnVariety { equation: usize },
}

pub type Result<T> = std::result::Result<T, ToricError>;

/// Number of ambient variables: `x0..x7, s, u, v`.
pub const NVARS: usize = 11;
pub const S: usize = 8;
pub const U: usize = 9;
pub const V: usize = 10;

fn var_name(i: usize) -> String {
    match i {
        S => "s".into(),
        U => "u".into(),
        V => "v".into(),
        _ => format!("x{i}"),
    }
}

type Exponents = [u16; NVARS];

/// Polynomial in `x0..x7, s, u, v` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AmbientPolynomial {
    terms: BTreeMap<Exponents, BigInt>,
}

impl AmbientPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term([0; NVARS], c);
        p
    }

    /// The variable with index `i` (`x_i` for `i <= 7`, then `s, u, v`).
    pub fn var(i: usize) -> Self {
        assert!(i < NVARS, "variable index out of range");
        let mut e = [0; NVARS];
        e[i] = 1;
        let mut p = Self::zero();
        p.add_term(e, BigInt::one());
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16; NVARS], &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Uses a parameter (`s`, `u` or `v`).
    pub fn uses(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// Total degree in `x0..x7` of every term, if they all agree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e[..S].iter().map(|&d| u32::from(d)).sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Substitutes integers for `s, u, v`.
    pub fn specialize(&self, s: &BigInt, u: &BigInt, v: &BigInt) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let mut c2 = c.clone();
            for (idx, val) in [(S, s), (U, u), (V, v)] {
                c2 *= num_traits::pow(val.clone(), usize::from(e[idx]));
                e2[idx] = 0;
            }
            out.add_term(e2, c2);
        }
        out
    }

    /// Multiplies every term by `x0` raised to its total parameter degree.
    pub fn homogenize_parameters(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[0] += e[S] + e[U] + e[V];
            out.add_term(e2, c.clone());
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[var] -= 1;
            out.add_term(e2, c * BigInt::from(e[var]));
        }
        out
    }

    /// Value at a full assignment of all eleven variables.
    pub fn evaluate(&self, values: &[BigRational; NVARS]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(values).fold(BigRational::from_integer(c.clone()), |acc, (&d, x)| {
                    acc * num_traits::pow(x.clone(), usize::from(d))
                })
            })
            .sum()
    }

    /// Leading term first: descending in `x7, x6, ..., x0`, then `s, u, v`.
    fn display_order(&self) -> Vec<(&Exponents, &BigInt)> {
        let key = |e: &Exponents| -> Vec<u16> {
            (0..S).rev().chain([S, U, V]).map(|i| e[i]).collect()
        };
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| key(b.0).cmp(&key(a.0)));
        terms
    }

    /// Flips the sign so that the leading term is positive.
    pub fn canonical_sign(&self) -> Self {
        match self.display_order().first() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for AmbientPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.display_order().into_iter().enumerate() {
            let factors: Vec<String> = (0..NVARS)
                .filter(|&i| e[i] > 0)
                .map(|i| if e[i] == 1 { var_name(i) } else { format!("{}^{}", var_name(i), e[i]) })
                .collect();
            let abs = c.abs();
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Style {
    Tom,
    Jerry,
}

impl Style {
    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "tom" => Some(Style::Tom),
            "jerry" => Some(Style::Jerry),
            _ => None,
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Tom => "tom",
            Style::Jerry => "jerry",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationFamily {
    pub style: Style,
    pub deformed: bool,
    pub projectivised: bool,
    pub equations: Vec<AmbientPolynomial>,
}

impl EquationFamily {
    /// Parameters that occur in some equation, as variable indices.
    pub fn parameters(&self) -> Vec<usize> {
        [S, U, V].into_iter().filter(|&p| self.equations.iter().any(|q| q.uses(p))).collect()
    }

    /// Substitutes values for the parameters in every equation.
    pub fn specialize(&self, s: &BigInt, u: &BigInt, v: &BigInt) -> EquationFamily {
        EquationFamily {
            style: self.style,
            deformed: false,
            projectivised: self.projectivised,
            equations: self.equations.iter().map(|q| q.specialize(s, u, v)).collect(),
        }
    }
}

fn x(i: usize) -> AmbientPolynomial {
    AmbientPolynomial::var(i)
}

fn shifted_x7(param: Option<usize>) -> AmbientPolynomial {
    match param {
        Some(p) => x(7).add(&x(p)),
        None => x(7),
    }
}

pub fn tom_equations(deformed: bool) -> EquationFamily {
    let (pu, pv) = if deformed { (Some(U), Some(V)) } else { (None, None) };
    let m = [
        [x(7), x(1), x(2)],
        [x(4), shifted_x7(pu), x(3)],
        [x(5), x(6), shifted_x7(pv)],
    ];
    let mut equations = Vec::with_capacity(9);
    for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
        for (c1, c2) in [(0, 1), (0, 2), (1, 2)] {
            equations.push(m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1])));
        }
    }
    EquationFamily { style: Style::Tom, deformed, projectivised: false, equations }
}

/// Cube vertices in `(i, j, k)` order, `i` fastest.
fn cube_vertices() -> Vec<[u8; 3]> {
    (0..8u8).map(|n| [n & 1, (n >> 1) & 1, (n >> 2) & 1]).collect()
}

fn cube_label(p: [u8; 3], deformed: bool) -> AmbientPolynomial {
    match p {
        [0, 0, 0] => x(7),
        [1, 0, 0] => x(1),
        [0, 1, 0] => x(3),
        [1, 1, 0] => x(2),
        [0, 0, 1] => x(5),
        [1, 0, 1] => x(6),
        [0, 1, 1] => x(4),
        _ => shifted_x7(deformed.then_some(S)),
    }
}

/// Rectangles of the cube as pairs of diagonals `((a, c), (b, d))` with
/// `a + c = b + d`. The first diagonal contains the smaller vertex index.
/// There are six faces and six rectangles through opposite edges.
pub fn cube_rectangles() -> Vec<((usize, usize), (usize, usize))> {
    let verts = cube_vertices();
    let mut by_mid: BTreeMap<[u8; 3], Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..8 {
        for c in a + 1..8 {
            let mid = [0, 1, 2].map(|t| verts[a][t] + verts[c][t]);
            by_mid.entry(mid).or_default().push((a, c));
        }
    }
    let mut out = Vec::new();
    for diagonals in by_mid.values() {
        for (i, d1) in diagonals.iter().enumerate() {
            for d2 in &diagonals[i + 1..] {
                let (first, second) = if d1.0 < d2.0 { (*d1, *d2) } else { (*d2, *d1) };
                out.push((first, second));
            }
        }
    }
    out.sort();
    out
}

pub fn jerry_equations(deformed: bool) -> EquationFamily {
    let verts = cube_vertices();
    let label = |i: usize| cube_label(verts[i], deformed);
    let equations = cube_rectangles()
        .into_iter()
        .map(|((a, c), (b, d))| label(a).mul(&label(c)).sub(&label(b).mul(&label(d))).canonical_sign())
        .collect();
    EquationFamily { style: Style::Jerry, deformed, projectivised: false, equations }
}

pub fn equations(style: Style, deformed: bool) -> EquationFamily {
    match style {
        Style::Tom => tom_equations(deformed),
        Style::Jerry => jerry_equations(deformed),
    }
}

/// Replaces each parameter `p` by `p·x0`, making every equation a quadric in
/// `x0..x7`.
pub fn projectivise(fam: &EquationFamily) -> Result<EquationFamily> {
    if !fam.deformed {
        return Err(ToricError::NotDeformed);
    }
    Ok(EquationFamily {
        style: fam.style,
        deformed: true,
        projectivised: true,
        equations: fam.equations.iter().map(AmbientPolynomial::homogenize_parameters).collect(),
    })
}

/// Images of `x1..x7` as Laurent monomials in `x, y, z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialParametrization {
    pub images: [[i64; 3]; 7],
}

impl MonomialParametrization {
    /// `x1 ↦ xz, x2 ↦ xyz, x3 ↦ yz, x4 ↦ x⁻¹z, x5 ↦ x⁻¹y⁻¹z, x6 ↦ y⁻¹z, x7 ↦ z`.
    pub fn hexagon() -> Self {
        Self {
            images: [[1, 0, 1], [1, 1, 1], [0, 1, 1], [-1, 0, 1], [-1, -1, 1], [0, -1, 1], [0, 0, 1]],
        }
    }
}

/// True when every equation becomes the zero Laurent polynomial after
/// substitution. Parameters and `x0` stay formal, so any surviving
/// parameter term makes the answer false.
pub fn verify_parametrization(fam: &EquationFamily, par: &MonomialParametrization) -> bool {
    fam.equations.iter().all(|q| {
        let mut acc: BTreeMap<([i64; 3], [u16; 4]), BigInt> = BTreeMap::new();
        for (e, c) in q.terms() {
            let mut xyz = [0i64; 3];
            for i in 1..=7 {
                for (t, coord) in xyz.iter_mut().enumerate() {
                    *coord += i64::from(e[i]) * par.images[i - 1][t];
                }
            }
            let rest = [e[0], e[S], e[U], e[V]];
            *acc.entry((xyz, rest)).or_insert_with(BigInt::zero) += c;
        }
        acc.values().all(Zero::is_zero)
    })
}

/// A point `x1..x7` together with parameter values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPoint {
    pub coords: [BigRational; 7],
    pub s: BigRational,
    pub u: BigRational,
    pub v: BigRational,
}

impl FiberPoint {
    fn assignment(&self) -> [BigRational; NVARS] {
        let mut out: [BigRational; NVARS] = std::array::from_fn(|_| BigRational::zero());
        out[0] = BigRational::one();
        out[1..=7].clone_from_slice(&self.coords);
        out[S] = self.s.clone();
        out[U] = self.u.clone();
        out[V] = self.v.clone();
        out
    }

    pub fn origin() -> Self {
        let zero = BigRational::zero;
        Self { coords: std::array::from_fn(|_| zero()), s: zero(), u: zero(), v: zero() }
    }

    fn check(self) -> Result<Self> {
        if self.coords.iter().any(Zero::is_zero) {
            return Err(ToricError::DegenerateSample);
        }
        Ok(self)
    }
}

/// Rank-one point of the Tom matrix `a·bᵀ`, with `u = a2b2 − a1b1` and
/// `v = a3b3 − a1b1`.
pub fn tom_point(a: &[BigRational; 3], b: &[BigRational; 3]) -> Result<FiberPoint> {
    let t = |i: usize, j: usize| &a[i] * &b[j];
    FiberPoint {
        coords: [t(0, 1), t(0, 2), t(1, 2), t(1, 0), t(2, 0), t(2, 1), t(0, 0)],
        s: BigRational::zero(),
        u: t(1, 1) - t(0, 0),
        v: t(2, 2) - t(0, 0),
    }
    .check()
}

/// Product point `a_i b_j c_k` on the cube, with `s = T111 − T000`.
pub fn jerry_point(a: &[BigRational; 2], b: &[BigRational; 2], c: &[BigRational; 2]) -> Result<FiberPoint> {
    let t = |i: usize, j: usize, k: usize| &a[i] * &b[j] * &c[k];
    FiberPoint {
        coords: [t(1, 0, 0), t(1, 1, 0), t(0, 1, 0), t(0, 1, 1), t(0, 0, 1), t(1, 0, 1), t(0, 0, 0)],
        s: t(1, 1, 1) - t(0, 0, 0),
        u: BigRational::zero(),
        v: BigRational::zero(),
    }
    .check()
}

/// Point of the undeformed threefold from the torus: `x_i` is the
/// parametrization's monomial evaluated at `(x, y, z)`.
pub fn toric_point(xyz: &[BigRational; 3], par: &MonomialParametrization) -> Result<FiberPoint> {
    if xyz.iter().any(Zero::is_zero) {
        return Err(ToricError::DegenerateSample);
    }
    let coords = std::array::from_fn(|i| {
        par.images[i].iter().zip(xyz).fold(BigRational::one(), |acc, (&e, t)| acc * t.pow(e as i32))
    });
    let zero = BigRational::zero;
    FiberPoint { coords, s: zero(), u: zero(), v: zero() }.check()
}

const MAX_ATTEMPTS: usize = 1000;

fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(1i64..=4)))
}

/// Deterministic point on a fiber of the deformed family for `style`.
pub fn sample_fiber_point(style: Style, seed: u64) -> Result<FiberPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let point = match style {
            Style::Tom => {
                let a = std::array::from_fn(|_| small_rational(&mut rng));
                let b = std::array::from_fn(|_| small_rational(&mut rng));
                tom_point(&a, &b)
            }
            Style::Jerry => {
                let a = std::array::from_fn(|_| small_rational(&mut rng));
                let b = std::array::from_fn(|_| small_rational(&mut rng));
                let c = std::array::from_fn(|_| small_rational(&mut rng));
                jerry_point(&a, &b, &c)
            }
        };
        if let Ok(p) = point {
            return Ok(p);
        }
    }
    Err(ToricError::DegenerateSample)
}

/// Deterministic torus point of the undeformed threefold.
pub fn sample_toric_point(seed: u64) -> Result<FiberPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let par = MonomialParametrization::hexagon();
    for _ in 0..MAX_ATTEMPTS {
        let xyz = std::array::from_fn(|_| small_rational(&mut rng));
        if let Ok(p) = toric_point(&xyz, &par) {
            return Ok(p);
        }
    }
    Err(ToricError::DegenerateSample)
}

/// Index of the first equation not vanishing at the point, if any.
pub fn first_nonvanishing(fam: &EquationFamily, point: &FiberPoint) -> Option<usize> {
    let values = point.assignment();
    fam.equations.iter().position(|q| !q.evaluate(&values).is_zero())
}

/// Rank of the Jacobian with respect to `x1..x7` at a point of the family,
/// with `x0 = 1`.
pub fn jacobian_rank(fam: &EquationFamily, point: &FiberPoint) -> Result<usize> {
    if let Some(equation) = first_nonvanishing(fam, point) {
        return Err(ToricError::PointNotOnVariety { equation });
    }
    let values = point.assignment();
    let rows = fam
        .equations
        .iter()
        .map(|q| (1..=7).map(|i| q.derivative(i).evaluate(&values)).collect())
        .collect();
    Ok(RationalMatrix::from_rows(rows).rank())
}

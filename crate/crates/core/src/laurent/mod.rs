//! Sparse Laurent polynomials in two or three variables over an exact
//! coefficient ring.

mod construct;
mod parse;

pub use construct::{check_mm_conditions, minkowski_polynomial, summand_polynomial, FacetChoice};
pub use parse::{parse_expression, parse_expression_in, ParseError, ParsedPolynomial};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::lattice::{convex_hull, LatticeError, LatticePolytope, LatticeVector};
use crate::ring::{Coefficient, IntegerPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("variable count must be 2 or 3, got {0}")]
    BadVariableCount(usize),
    #[error("the zero polynomial has no Newton polytope")]
    ZeroPolynomial,
    #[error("Newton polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("dimension mismatch: polynomial in {vars} variables, polytope of dimension {dim}")]
    DimensionMismatch { vars: usize, dim: usize },
    #[error("polytope is not a reflexive 3-polytope")]
    NotReflexive,
    #[error("polynomial is not supported on the polytope")]
    NotSupported,
    #[error("facets induce different coefficients at {point}")]
    InconsistentEdge { point: String },
    #[error("facet {0} has no decomposition and is not an A-triangle")]
    MissingDecomposition(usize),
    #[error("decomposition for facet {0} does not sum to the facet")]
    DecompositionMismatch(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T> = std::result::Result<T, LaurentError>;

/// Exponent vector; unused trailing slots are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub [i32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn from_slice(exps: &[i32]) -> Self {
        let mut m = [0; 3];
        m[..exps.len()].copy_from_slice(exps);
        Monomial(m)
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    pub fn to_lattice(self, nvars: usize) -> LatticeVector {
        LatticeVector::new(self.0[..nvars].iter().map(|&e| BigInt::from(e)).collect())
            .expect("2 or 3 variables")
    }

    /// `None` if a coordinate does not fit an `i32`.
    pub fn from_lattice(v: &LatticeVector) -> Option<Monomial> {
        let c = v.to_i64()?;
        let mut m = [0; 3];
        for (slot, x) in m.iter_mut().zip(c) {
            *slot = i32::try_from(x).ok()?;
        }
        Some(Monomial(m))
    }
}

const VARIABLES: [char; 3] = ['x', 'y', 'z'];

/// A Laurent polynomial: nonzero coefficients keyed by exponent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial<R> {
    nvars: usize,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Coefficient> LaurentPolynomial<R> {
    pub fn zero(nvars: usize) -> Result<Self> {
        if !(2..=3).contains(&nvars) {
            return Err(LaurentError::BadVariableCount(nvars));
        }
        Ok(Self { nvars, terms: BTreeMap::new() })
    }

    pub fn constant(nvars: usize, c: R) -> Result<Self> {
        Self::from_terms(nvars, [(Monomial::ONE, c)])
    }

    pub fn monomial(nvars: usize, exps: &[i32], c: R) -> Result<Self> {
        if exps.len() != nvars {
            return Err(LaurentError::VariableMismatch(nvars, exps.len()));
        }
        Self::from_terms(nvars, [(Monomial::from_slice(exps), c)])
    }

    /// Sums repeated monomials and drops zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, R)>) -> Result<Self> {
        let mut out = Self::zero(nvars)?;
        for (m, c) in terms {
            if m.0[nvars..].iter().any(|&e| e != 0) {
                return Err(LaurentError::VariableMismatch(nvars, 3));
            }
            out.add_term(m, &c);
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coefficient(&Monomial::ONE)
    }

    pub fn support(&self) -> Vec<LatticeVector> {
        self.terms.keys().map(|m| m.to_lattice(self.nvars)).collect()
    }

    fn add_term(&mut self, m: Monomial, c: &R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &R) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.mul_ref(k)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { nvars: self.nvars, terms }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(LaurentError::VariableMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    /// Exact product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        Ok(self.multiply_filtered(other, |_| true))
    }

    /// Product restricted to monomials accepted by `keep`.
    fn multiply_filtered(&self, other: &Self, keep: impl Fn(&Monomial) -> bool) -> Self {
        let mut acc: HashMap<Monomial, R> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(*mb);
                if !keep(&m) {
                    continue;
                }
                let c = ca.mul_ref(cb);
                match acc.get_mut(&m) {
                    Some(slot) => *slot += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { nvars: self.nvars, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, R::one()).expect("valid variable count");
        for _ in 0..k {
            out = out.multiply_filtered(self, |_| true);
        }
        out
    }

    pub fn map_coefficients<S: Coefficient>(&self, f: impl Fn(&R) -> S) -> LaurentPolynomial<S> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        LaurentPolynomial { nvars: self.nvars, terms }
    }
}

impl LaurentPolynomial<IntegerPolynomial> {
    /// Substitutes an integer for the parameter `a`.
    pub fn specialize(&self, a: &BigInt) -> LaurentPolynomial<BigInt> {
        self.map_coefficients(|c| c.evaluate(a))
    }
}

impl<R: Coefficient> fmt::Display for LaurentPolynomial<R> {
    /// Terms in lexicographic exponent order, e.g. `x^-1*z + 2*z + z^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative_term();
            let abs = if negative { -c.clone() } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                if abs.needs_parens() {
                    factors.push(format!("({abs})"));
                } else {
                    factors.push(abs.to_string());
                }
            }
            for (v, &e) in VARIABLES.iter().zip(&m.0[..self.nvars]) {
                match e {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Whether constant-term extraction discards terms that can no longer reach
/// the constant monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pruning {
    On,
    Off,
}

/// `[coeff_1(f^0), coeff_1(f^1), ..., coeff_1(f^n)]`, with pruning.
pub fn power_constant_terms<R: Coefficient>(f: &LaurentPolynomial<R>, n: usize) -> Vec<R> {
    power_constant_terms_with(f, n, Pruning::On)
}

/// As [`power_constant_terms`], choosing whether to prune.
///
/// A term `m` of `f^k` can only feed the constant term of `f^(k+j)` when
/// `-m ∈ j·Newt(f)`. Pruning keeps `m` only if `-m` lies in
/// `(n-k)·conv({0} ∪ supp f)`, which contains every `j·Newt(f)` with
/// `j <= n-k`. It is skipped when that hull is not full-dimensional.
pub fn power_constant_terms_with<R: Coefficient>(
    f: &LaurentPolynomial<R>,
    n: usize,
    pruning: Pruning,
) -> Vec<R> {
    let facets = match pruning {
        Pruning::On => pruning_facets(f),
        Pruning::Off => None,
    };
    let mut out = Vec::with_capacity(n + 1);
    let mut power = LaurentPolynomial::constant(f.nvars, R::one()).expect("valid variable count");
    out.push(R::one());
    for k in 1..=n {
        let remaining = (n - k) as i64;
        power = match &facets {
            Some(facets) => power.multiply_filtered(f, |m| {
                // -m ∈ remaining·H  <=>  <u, -m> + remaining·h >= 0 for all facets.
                facets.iter().all(|(u, h)| {
                    let dot: i64 = (0..3).map(|a| u[a] * i64::from(m.0[a])).sum();
                    -dot + remaining * h >= 0
                })
            }),
            None => power.multiply_filtered(f, |_| true),
        };
        out.push(power.constant_term());
    }
    out
}

/// Facets `(u, h)` of `conv({0} ∪ supp f)` as `<u, x> + h >= 0`, when the
/// hull is full-dimensional and fits machine integers.
fn pruning_facets<R: Coefficient>(f: &LaurentPolynomial<R>) -> Option<Vec<([i64; 3], i64)>> {
    let mut pts = f.support();
    pts.push(LatticeVector::zero(f.nvars).ok()?);
    let hull = convex_hull(&pts).ok()?;
    hull.facets()
        .iter()
        .map(|facet| {
            let c = facet.normal.to_i64()?;
            let mut u = [0i64; 3];
            u[..c.len()].copy_from_slice(&c);
            Some((u, num_traits::ToPrimitive::to_i64(&facet.offset)?))
        })
        .collect()
}

pub fn newton_polytope<R: Coefficient>(f: &LaurentPolynomial<R>) -> Result<LatticePolytope> {
    if f.is_zero() {
        return Err(LaurentError::ZeroPolynomial);
    }
    convex_hull(&f.support()).map_err(|e| match e {
        LatticeError::NotFullDimensional => LaurentError::NotFullDimensional,
        other => LaurentError::Lattice(other),
    })
}

pub fn is_supported_on<R: Coefficient>(f: &LaurentPolynomial<R>, q: &LatticePolytope) -> Result<bool> {
    if f.nvars != q.dim() {
        return Err(LaurentError::DimensionMismatch { vars: f.nvars, dim: q.dim() });
    }
    Ok(f.terms.keys().all(|m| q.contains(&m.to_lattice(f.nvars))))
}

/// `f_a = z(a + x + xy + y + x⁻¹ + x⁻¹y⁻¹ + y⁻¹) + z⁻¹`.
pub fn family_f<R: Coefficient>(a: R) -> LaurentPolynomial<R> {
    let hexagon: [[i32; 3]; 6] = [[1, 0, 1], [1, 1, 1], [0, 1, 1], [-1, 0, 1], [-1, -1, 1], [0, -1, 1]];
    let mut terms: Vec<(Monomial, R)> = hexagon.iter().map(|e| (Monomial(*e), R::one())).collect();
    terms.push((Monomial([0, 0, 1]), a));
    terms.push((Monomial([0, 0, -1]), R::one()));
    LaurentPolynomial::from_terms(3, terms).expect("three variables")
}

/// `f_a` with `a` left symbolic.
pub fn family_f_symbolic() -> LaurentPolynomial<IntegerPolynomial> {
    family_f(IntegerPolynomial::parameter())
}

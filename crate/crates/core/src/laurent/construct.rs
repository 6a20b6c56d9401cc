//! Coefficient conditions on reflexive 3-polytopes and the Minkowski
//! polynomial built from a choice of facet decompositions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{is_supported_on, LaurentError, LaurentPolynomial, Monomial, Result};
use crate::lattice::{
    facet_chart, is_fano, is_reflexive, lattice_length, polygon_equivalence, AffineUnimodularMap,
    IntMatrix, LatticePolytope, LatticeVector,
};
use crate::minkowski::{is_a_triangle, LatticePolygon, MinkowskiDecomposition};
use crate::ring::{binomial, Coefficient};

/// Decompositions keyed by facet index. Facets without an entry use the
/// trivial decomposition, which is only allowed for A-triangle facets.
pub type FacetChoice = BTreeMap<usize, MinkowskiDecomposition>;

fn require_reflexive_3d(q: &LatticePolytope) -> Result<()> {
    if q.dim() != 3 || !is_fano(q) || !is_reflexive(q)? {
        return Err(LaurentError::NotReflexive);
    }
    Ok(())
}

/// Lattice points of the segment from `a` to `b`, starting at `a`.
fn edge_points(a: &LatticeVector, b: &LatticeVector) -> Vec<LatticeVector> {
    let len = lattice_length(a, b).expect("distinct endpoints");
    let step = b.sub(a).div_exact(&len).expect("content divides");
    let n = len.to_u64().expect("fixture-scale edge");
    (0..=n).map(|i| a.add(&step.scale(&BigInt::from(i)))).collect()
}

/// Checks the three necessary conditions for maximal mutability on a
/// reflexive 3-polytope: zero at the origin, one at every vertex, and
/// binomial coefficients `C(ℓ,0), …, C(ℓ,ℓ)` along every edge of lattice
/// length ℓ.
pub fn check_mm_conditions<R: Coefficient>(f: &LaurentPolynomial<R>, q: &LatticePolytope) -> Result<bool> {
    require_reflexive_3d(q)?;
    if !is_supported_on(f, q)? {
        return Err(LaurentError::NotSupported);
    }
    if !f.constant_term().is_zero() {
        return Ok(false);
    }
    let at = |v: &LatticeVector| f.coefficient(&Monomial::from_lattice(v).expect("small exponents"));
    if q.vertices().iter().any(|v| at(v) != R::one()) {
        return Ok(false);
    }
    for (i, j) in q.edges() {
        // Oriented from the lexicographically smaller endpoint; binomial
        // rows are palindromic so the orientation does not matter.
        let (a, b) = (&q.vertices()[i], &q.vertices()[j]);
        let pts = edge_points(a, b);
        let len = (pts.len() - 1) as u64;
        for (k, p) in pts.iter().enumerate() {
            if at(p) != R::from_integer(binomial(len, k as u64)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Polynomial attached to a summand: binomial coefficients along each edge
/// (so 1 at the vertices), nothing in the interior. For an A-triangle in
/// normal form this is `(1 + x)^ℓ + y`.
pub fn summand_polynomial(s: &LatticePolygon) -> LaurentPolynomial<BigInt> {
    let v = s.vertices();
    let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    let mono = |p: &LatticeVector| Monomial::from_lattice(p).expect("small exponents");
    if v.len() == 1 {
        terms.insert(mono(&v[0]), BigInt::from(1));
    } else {
        let k = v.len();
        let edges = if k == 2 { 1 } else { k };
        for e in 0..edges {
            let pts = edge_points(&v[e], &v[(e + 1) % k]);
            let len = (pts.len() - 1) as u64;
            for (i, p) in pts.iter().enumerate() {
                terms.insert(mono(p), binomial(len, i as u64));
            }
        }
    }
    LaurentPolynomial::from_terms(2, terms).expect("two variables")
}

/// The Minkowski polynomial of a reflexive 3-polytope for the given facet
/// decompositions. Each facet's coefficients come from the product of its
/// summand polynomials, carried onto the facet through its chart; the
/// origin gets zero.
pub fn minkowski_polynomial(q: &LatticePolytope, choice: &FacetChoice) -> Result<LaurentPolynomial<BigInt>> {
    require_reflexive_3d(q)?;
    let mut coeffs: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    for idx in 0..q.facets().len() {
        let chart = facet_chart(q, idx)?;
        let image = chart.image();
        let image_polygon = LatticePolygon::from_polytope(image).expect("planar image");
        let dec = match choice.get(&idx) {
            Some(dec) => dec.clone(),
            None if is_a_triangle(&image_polygon).is_some() => {
                MinkowskiDecomposition::new(vec![image_polygon.clone()]).expect("nonempty")
            }
            None => return Err(LaurentError::MissingDecomposition(idx)),
        };
        let sum = dec.sum();
        let to_image = placement(&sum, image).ok_or(LaurentError::DecompositionMismatch(idx))?;
        let mut facet_poly = LaurentPolynomial::constant(2, BigInt::from(1)).expect("two variables");
        for s in dec.summands() {
            facet_poly = facet_poly.multiply(&summand_polynomial(s))?;
        }
        for (m, c) in facet_poly.terms() {
            let y = to_image.apply(&m.to_lattice(2));
            let x = chart.inverse(&y);
            let key = Monomial::from_lattice(&x).expect("small exponents");
            match coeffs.get(&key) {
                Some(prev) if prev != c => {
                    return Err(LaurentError::InconsistentEdge { point: x.to_string() });
                }
                Some(_) => {}
                None => {
                    coeffs.insert(key, c.clone());
                }
            }
        }
    }
    coeffs.remove(&Monomial::ONE);
    LaurentPolynomial::from_terms(3, coeffs)
}

/// An affine unimodular map carrying `sum` onto `image`, preferring a pure
/// translation.
fn placement(sum: &LatticePolygon, image: &LatticePolytope) -> Option<AffineUnimodularMap> {
    let target = LatticePolygon::from_polytope(image).ok()?;
    if sum.normalized() == target.normalized() {
        let t = target.vertices()[0].sub(&sum.vertices()[0]);
        return AffineUnimodularMap::new(IntMatrix::identity(2), t).ok();
    }
    let from = sum.to_polytope()?;
    polygon_equivalence(&from, image)
}

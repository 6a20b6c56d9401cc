//! The hexagon, the pyramid over it, and the two maximal decompositions of
//! the hexagon.

use crate::lattice::{convex_hull, LatticePolytope, LatticeVector};
use crate::laurent::FacetChoice;
use crate::minkowski::{LatticePolygon, MinkowskiDecomposition};

pub const HEXAGON: [[i64; 2]; 6] = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]];

pub const PYRAMID: [[i64; 3]; 7] = [[1, 0, 1], [1, 1, 1], [0, 1, 1], [-1, 0, 1], [-1, -1, 1], [0, -1, 1], [0, 0, -1]];

fn points<const N: usize>(rows: &[[i64; N]]) -> Vec<LatticeVector> {
    rows.iter().map(|r| LatticeVector::from_i64(r).expect("nonempty row")).collect()
}

pub fn hexagon() -> LatticePolytope {
    convex_hull(&points(&HEXAGON)).expect("hexagon is full-dimensional")
}

pub fn hexagon_polygon() -> LatticePolygon {
    LatticePolygon::from_i64(&HEXAGON).expect("hexagon")
}

pub fn pyramid() -> LatticePolytope {
    convex_hull(&points(&PYRAMID)).expect("pyramid is full-dimensional")
}

fn polygon(rows: &[[i64; 2]]) -> LatticePolygon {
    LatticePolygon::from_i64(rows).expect("fixture polygon")
}

/// Three unit segments.
pub fn segment_decomposition() -> MinkowskiDecomposition {
    MinkowskiDecomposition::new(vec![
        polygon(&[[0, 0], [1, 0]]),
        polygon(&[[0, 0], [0, 1]]),
        polygon(&[[0, 0], [-1, -1]]),
    ])
    .expect("nonempty")
}

/// Two unit triangles.
pub fn triangle_decomposition() -> MinkowskiDecomposition {
    MinkowskiDecomposition::new(vec![
        polygon(&[[0, 0], [-1, 0], [-1, -1]]),
        polygon(&[[0, 0], [1, 0], [1, 1]]),
    ])
    .expect("nonempty")
}

/// Index of the hexagonal facet of the pyramid.
pub fn hexagon_facet(p: &LatticePolytope) -> Option<usize> {
    p.facets().iter().position(|f| f.vertices.len() == 6)
}

/// Choice placing `dec` on the hexagonal facet of the pyramid; every other
/// facet is a unimodular triangle.
pub fn pyramid_choice(dec: MinkowskiDecomposition) -> FacetChoice {
    let idx = hexagon_facet(&pyramid()).expect("pyramid has a hexagonal facet");
    FacetChoice::from([(idx, dec)])
}

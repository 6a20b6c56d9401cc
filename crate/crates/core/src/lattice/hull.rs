//! Exact convex hulls in dimension 2 and 3.
//!
//! Generic over the integer type so that small inputs run on `i128` while
//! anything larger falls back to `BigInt` with the same code.

use num_integer::Integer;
use num_traits::Signed;

pub(crate) trait Exact: Integer + Signed + Clone + Ord {}
impl<T: Integer + Signed + Clone + Ord> Exact for T {}

pub(crate) type P3<T> = [T; 3];
pub(crate) type P2<T> = [T; 2];

fn sub3<T: Exact>(a: &P3<T>, b: &P3<T>) -> P3<T> {
    [
        a[0].clone() - b[0].clone(),
        a[1].clone() - b[1].clone(),
        a[2].clone() - b[2].clone(),
    ]
}

fn cross<T: Exact>(a: &P3<T>, b: &P3<T>) -> P3<T> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn dot3<T: Exact>(a: &P3<T>, b: &P3<T>) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

fn is_zero3<T: Exact>(a: &P3<T>) -> bool {
    a.iter().all(|c| c.is_zero())
}

/// z-component of (b - a) x (c - a).
pub(crate) fn orient2<T: Exact>(a: &P2<T>, b: &P2<T>, c: &P2<T>) -> T {
    (b[0].clone() - a[0].clone()) * (c[1].clone() - a[1].clone())
        - (b[1].clone() - a[1].clone()) * (c[0].clone() - a[0].clone())
}

/// Indices of the extreme points of a planar point set, counter-clockwise,
/// starting at the lexicographically smallest point. Collinear boundary
/// points are dropped. Degenerate inputs give one or two indices.
pub(crate) fn hull2_indices<T: Exact>(pts: &[P2<T>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| pts[i].cmp(&pts[j]));
    order.dedup_by(|a, b| pts[*a] == pts[*b]);
    if order.len() <= 2 {
        return order;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2
            && orient2(&pts[lower[lower.len() - 2]], &pts[lower[lower.len() - 1]], &pts[i])
                <= T::zero()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && orient2(&pts[upper[upper.len() - 2]], &pts[upper[upper.len() - 1]], &pts[i])
                <= T::zero()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && pts[lower[0]] == pts[lower[1]] {
        lower.pop();
    }
    lower
}

pub(crate) struct Facet3<T> {
    /// Primitive inward normal.
    pub normal: P3<T>,
    /// `<normal, x> + offset >= 0` on the hull.
    pub offset: T,
    /// Extreme points of the facet, cyclically ordered.
    pub vertices: Vec<usize>,
}

pub(crate) enum Hull3Error {
    NotFullDimensional,
}

fn primitive<T: Exact>(v: P3<T>) -> P3<T> {
    let g = v[0].gcd(&v[1]).gcd(&v[2]);
    if g.is_zero() || g.is_one() {
        return v;
    }
    [v[0].clone() / g.clone(), v[1].clone() / g.clone(), v[2].clone() / g]
}

/// Builds the facet whose supporting plane passes through `p` with
/// (not necessarily primitive) inward normal `m`.
fn make_facet<T: Exact>(pts: &[P3<T>], p: &P3<T>, m: P3<T>) -> Facet3<T> {
    let normal = primitive(m);
    let offset = -dot3(&normal, p);
    let on_plane: Vec<usize> = (0..pts.len())
        .filter(|&i| (dot3(&normal, &pts[i]) + offset.clone()).is_zero())
        .collect();
    // Drop one coordinate with nonzero normal component; the projection is
    // injective on the plane.
    let drop = (0..3).find(|&a| !normal[a].is_zero()).unwrap_or(2);
    let keep: Vec<usize> = (0..3).filter(|&a| a != drop).collect();
    let projected: Vec<P2<T>> = on_plane
        .iter()
        .map(|&i| [pts[i][keep[0]].clone(), pts[i][keep[1]].clone()])
        .collect();
    let vertices = hull2_indices(&projected)
        .into_iter()
        .map(|k| on_plane[k])
        .collect();
    Facet3 { normal, offset, vertices }
}

fn supports<T: Exact>(pts: &[P3<T>], p: &P3<T>, m: &P3<T>) -> Option<bool> {
    // Some(true): all points on the nonnegative side; Some(false): all on
    // the nonpositive side; None: plane cuts the set.
    let mut pos = false;
    let mut neg = false;
    for x in pts {
        let d = dot3(m, &sub3(x, p));
        if d.is_positive() {
            pos = true;
        } else if d.is_negative() {
            neg = true;
        }
        if pos && neg {
            return None;
        }
    }
    Some(!neg)
}

/// Facets of the hull of a full-dimensional point set in 3-space.
pub(crate) fn hull3<T: Exact>(pts: &[P3<T>]) -> Result<Vec<Facet3<T>>, Hull3Error> {
    let p0_idx = (0..pts.len())
        .min_by(|&i, &j| pts[i].cmp(&pts[j]))
        .ok_or(Hull3Error::NotFullDimensional)?;
    let p0 = pts[p0_idx].clone();

    // Full-dimensionality.
    let p1 = pts.iter().find(|q| **q != p0).ok_or(Hull3Error::NotFullDimensional)?;
    let e1 = sub3(p1, &p0);
    let p2 = pts
        .iter()
        .find(|q| !is_zero3(&cross(&e1, &sub3(q, &p0))))
        .ok_or(Hull3Error::NotFullDimensional)?;
    let n12 = cross(&e1, &sub3(p2, &p0));
    if !pts.iter().any(|q| !dot3(&n12, &sub3(q, &p0)).is_zero()) {
        return Err(Hull3Error::NotFullDimensional);
    }

    // A first facet through the lexicographically smallest point.
    let mut first = None;
    'search: for q in pts {
        let eq = sub3(q, &p0);
        if is_zero3(&eq) {
            continue;
        }
        for r in pts {
            let m = cross(&eq, &sub3(r, &p0));
            if is_zero3(&m) {
                continue;
            }
            if let Some(side) = supports(pts, &p0, &m) {
                let m = if side { m } else { m.map(|c| -c) };
                first = Some(make_facet(pts, &p0, m));
                break 'search;
            }
        }
    }
    let first = first.ok_or(Hull3Error::NotFullDimensional)?;

    let mut facets = vec![first];
    let mut cursor = 0;
    while cursor < facets.len() {
        let verts = facets[cursor].vertices.clone();
        let k = verts.len();
        for e in 0..k {
            let (a, b) = (verts[e], verts[(e + 1) % k]);
            let w = verts[(e + 2) % k];
            let adj = wrap_edge(pts, a, b, w);
            if !facets.iter().any(|f| f.normal == adj.normal) {
                facets.push(adj);
            }
        }
        cursor += 1;
    }
    Ok(facets)
}

/// The facet across edge `a`-`b` from a facet containing `w`.
fn wrap_edge<T: Exact>(pts: &[P3<T>], a: usize, b: usize, w: usize) -> Facet3<T> {
    let p = &pts[a];
    let axis = sub3(&pts[b], p);
    let wv = sub3(&pts[w], p);
    let oriented = |r: &P3<T>| -> Option<P3<T>> {
        let m = cross(&axis, &sub3(r, p));
        let s = dot3(&m, &wv);
        if s.is_zero() {
            None
        } else if s.is_positive() {
            Some(m)
        } else {
            Some(m.map(|c| -c))
        }
    };
    let mut best: Option<P3<T>> = None;
    for r in pts {
        let Some(m_r) = oriented(r) else { continue };
        match &best {
            None => best = Some(m_r),
            Some(m_best) => {
                if dot3(m_best, &sub3(r, p)).is_negative() {
                    best = Some(m_r);
                }
            }
        }
    }
    let m = best.expect("a full-dimensional set has a point off every facet plane");
    make_facet(pts, p, m)
}

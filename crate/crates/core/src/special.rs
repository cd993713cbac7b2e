//! Closed-form volumes for parallelotopes, cross polytopes and simplices,
//! and a pulling-triangulation oracle for cross-checking.

use num_traits::{One, Zero};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::linalg::{coordinates_in_basis, det_abs_rational, dot_int, Int, LatticeBasis, Rat};
use crate::polytope::HomogenizedPolytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    Parallelotope,
    CrossPolytope,
    Simplex,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialShape {
    pub kind: ShapeKind,
    /// Parallelotope: a corner and its `d` neighbours. Cross polytope: a
    /// vertex and the vertices of a facet avoiding it. Simplex: all vertices.
    pub witness: Vec<usize>,
}

impl SpecialShape {
    fn none() -> Self {
        Self {
            kind: ShapeKind::None,
            witness: Vec::new(),
        }
    }
}

fn factorial(d: usize) -> Int {
    (1..=d).fold(Int::one(), |acc, i| acc * Int::from(i))
}

/// `(λ(v) / δ(v))` as a rational.
fn scaled(lambda: &[Int], p: &HomogenizedPolytope, v: usize) -> Rat {
    Rat::new(dot_int(lambda, &p.generators[v]), p.deltas[v].clone())
}

/// Recognizes a `d`-parallelotope: the facets split into `d` pairs of
/// parallel facets whose vertex sets partition the vertices.
pub fn recognize_parallelotope(p: &HomogenizedPolytope) -> SpecialShape {
    let d = p.dim;
    let m = p.num_vertices();
    if d == 0
        || d >= usize::BITS as usize - 1
        || m != 1 << d
        || p.num_facets() != 2 * d
        || !p.is_simple()
    {
        return SpecialShape::none();
    }
    let mut partner = vec![usize::MAX; 2 * d];
    for a in 0..2 * d {
        if partner[a] != usize::MAX {
            continue;
        }
        let fa = &p.facets[a].incident;
        let Some(b) = (a + 1..2 * d).find(|&b| {
            partner[b] == usize::MAX
                && fa.is_disjoint(&p.facets[b].incident)
                && fa.count() + p.facets[b].incident.count() == m
        }) else {
            return SpecialShape::none();
        };
        if !parallel(p, a, b) {
            return SpecialShape::none();
        }
        partner[a] = b;
        partner[b] = a;
    }
    let corner = 0;
    let on = &p.vertex_facets[corner];
    let mut witness = vec![corner];
    for a in on.iter() {
        let mut target = on.clone();
        target.remove(a);
        target.insert(partner[a]);
        match (0..m).find(|&v| p.vertex_facets[v] == target) {
            Some(v) => witness.push(v),
            None => return SpecialShape::none(),
        }
    }
    SpecialShape {
        kind: ShapeKind::Parallelotope,
        witness,
    }
}

/// Exact test that `λ_a / g_a + λ_b / g_b` is a constant multiple of `δ`
/// on all vertices, after scaling the two forms suitably.
fn parallel(p: &HomogenizedPolytope, a: usize, b: usize) -> bool {
    let (la, lb) = (&p.facets[a].lambda, &p.facets[b].lambda);
    let (Some(on_a), Some(on_b)) = (p.facets[a].incident.first(), p.facets[b].incident.first())
    else {
        return false;
    };
    // scale so that both forms take the value 1 on the opposite facet
    let sb = scaled(lb, p, on_a);
    let sa = scaled(la, p, on_b);
    if sa.is_zero() || sb.is_zero() {
        return false;
    }
    (0..p.num_vertices()).all(|v| scaled(la, p, v) / &sa + scaled(lb, p, v) / &sb == Rat::one())
}

/// `Vol(P) = d! Vol(σ)` for the corner simplex `σ`.
pub fn parallelotope_volume(p: &HomogenizedPolytope, shape: &SpecialShape) -> Result<Rat> {
    if shape.kind != ShapeKind::Parallelotope {
        return Err(Error::ShapeMismatch("not a parallelotope"));
    }
    let sigma = p.simplex_volume(&shape.witness)?;
    Ok(sigma * Rat::from_integer(factorial(p.dim) * p.grading_denominator()))
}

/// Recognizes a cross polytope: `d` antipodal pairs of vertices with a
/// common midpoint, and `2^d` simplex facets.
pub fn recognize_cross_polytope(p: &HomogenizedPolytope) -> SpecialShape {
    let d = p.dim;
    let m = p.num_vertices();
    if d == 0 || m != 2 * d || d >= usize::BITS as usize - 1 || p.num_facets() != 1 << d {
        return SpecialShape::none();
    }
    if p.facets.iter().any(|f| f.incident.count() != d) {
        return SpecialShape::none();
    }
    let mut midpoint: Option<Vec<Rat>> = None;
    for v in 0..m {
        let opposite: Vec<usize> = (0..m)
            .filter(|&w| w != v && p.vertex_facets[v].is_disjoint(&p.vertex_facets[w]))
            .collect();
        let [w] = opposite[..] else {
            return SpecialShape::none();
        };
        let (pv, pw) = (p.vertex_point(v), p.vertex_point(w));
        let mid: Vec<Rat> = pv
            .iter()
            .zip(&pw)
            .map(|(a, b)| (a + b) / Rat::from_integer(2.into()))
            .collect();
        match &midpoint {
            None => midpoint = Some(mid),
            Some(c) if *c == mid => {}
            Some(_) => return SpecialShape::none(),
        }
    }
    let Some(facet) = p.facets.iter().find(|f| !f.incident.contains(0)) else {
        return SpecialShape::none();
    };
    let mut witness = vec![0];
    witness.extend(facet.incident.iter());
    SpecialShape {
        kind: ShapeKind::CrossPolytope,
        witness,
    }
}

/// `Vol(P) = 2^(d-1) Vol(σ)` for a vertex and a facet avoiding it.
pub fn cross_polytope_volume(p: &HomogenizedPolytope, shape: &SpecialShape) -> Result<Rat> {
    if shape.kind != ShapeKind::CrossPolytope {
        return Err(Error::ShapeMismatch("not a cross polytope"));
    }
    let sigma = p.simplex_volume(&shape.witness)?;
    let factor = Int::one() << (p.dim - 1);
    Ok(sigma * Rat::from_integer(factor * p.grading_denominator()))
}

pub fn recognize_simplex(p: &HomogenizedPolytope) -> SpecialShape {
    if p.num_vertices() != p.dim + 1 {
        return SpecialShape::none();
    }
    SpecialShape {
        kind: ShapeKind::Simplex,
        witness: (0..p.num_vertices()).collect(),
    }
}

/// Tries the recognizers in turn.
pub fn recognize(p: &HomogenizedPolytope) -> SpecialShape {
    for r in [
        recognize_simplex,
        recognize_parallelotope,
        recognize_cross_polytope,
    ] {
        let s = r(p);
        if s.kind != ShapeKind::None {
            return s;
        }
    }
    SpecialShape::none()
}

/// Closed-form `Vol(P)` for a recognized shape.
pub fn special_volume(p: &HomogenizedPolytope, shape: &SpecialShape) -> Result<Rat> {
    match shape.kind {
        ShapeKind::Parallelotope => parallelotope_volume(p, shape),
        ShapeKind::CrossPolytope => cross_polytope_volume(p, shape),
        ShapeKind::Simplex => {
            let v = p.simplex_volume(&shape.witness)?;
            Ok(v * Rat::from_integer(p.grading_denominator()))
        }
        ShapeKind::None => Err(Error::ShapeMismatch("no special shape")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_dim: usize,
    pub max_vertices: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self {
            max_dim: 8,
            max_vertices: 64,
        }
    }
}

/// `Vol(P)` from an explicit pulling triangulation.
///
/// Each face is coned from its first vertex in `vertex_order` over the
/// facets avoiding that vertex. Simplex volumes are affine determinants in
/// the direction lattice of `aff(P)`.
pub fn oracle_volume_by_triangulation(
    p: &HomogenizedPolytope,
    vertex_order: &[usize],
) -> Result<Rat> {
    oracle_volume_bounded(p, vertex_order, OracleBounds::default())
}

pub fn oracle_volume_bounded(
    p: &HomogenizedPolytope,
    vertex_order: &[usize],
    bounds: OracleBounds,
) -> Result<Rat> {
    if p.dim > bounds.max_dim || p.num_vertices() > bounds.max_vertices {
        return Err(Error::OracleBound {
            dim: p.dim,
            max_dim: bounds.max_dim,
            vertices: p.num_vertices(),
            max_vertices: bounds.max_vertices,
        });
    }
    let m = p.num_vertices();
    let mut rank_in_order = vec![usize::MAX; m];
    for (pos, &v) in vertex_order.iter().enumerate() {
        rank_in_order[v] = pos;
    }
    if rank_in_order.contains(&usize::MAX) {
        return Err(Error::ShapeMismatch("vertex order is not a permutation"));
    }
    let points: Vec<Vec<Rat>> = (0..m).map(|i| p.vertex_point(i)).collect();
    let basis = LatticeBasis {
        ambient_dim: p.ambient_dim,
        vectors: p.direction_lattice(),
    };
    let mut simplices = Vec::new();
    pull(
        p,
        &BitSet::full(m),
        p.dim,
        &rank_in_order,
        &mut Vec::new(),
        &mut simplices,
    );
    let mut total = Rat::zero();
    for s in simplices {
        total += affine_simplex_volume(&points, &s, &basis)?;
    }
    Ok(total)
}

fn affine_rank(p: &HomogenizedPolytope, vertices: &BitSet) -> usize {
    let rows: Vec<Vec<Int>> = vertices.iter().map(|i| p.generators[i].clone()).collect();
    crate::linalg::echelon::rank(&rows, p.ambient_dim).expect("bigint never overflows")
}

fn pull(
    p: &HomogenizedPolytope,
    face: &BitSet,
    dim: usize,
    order: &[usize],
    cone: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if face.count() == dim + 1 {
        let mut s = cone.clone();
        s.extend(face.iter());
        out.push(s);
        return;
    }
    let apex = face
        .iter()
        .min_by_key(|&i| order[i])
        .expect("nonempty face");
    let mut seen: Vec<BitSet> = Vec::new();
    for f in &p.facets {
        let g = face.intersection(&f.incident);
        if g.contains(apex) || g.is_empty() || seen.contains(&g) {
            continue;
        }
        // facets of the face have affine dimension one less
        if affine_rank(p, &g) != dim {
            continue;
        }
        seen.push(g.clone());
        cone.push(apex);
        pull(p, &g, dim - 1, order, cone, out);
        cone.pop();
    }
}

fn affine_simplex_volume(
    points: &[Vec<Rat>],
    simplex: &[usize],
    basis: &LatticeBasis,
) -> Result<Rat> {
    let p0 = &points[simplex[0]];
    let mut rows = Vec::with_capacity(simplex.len() - 1);
    for &i in &simplex[1..] {
        let diff: Vec<Rat> = points[i].iter().zip(p0).map(|(a, b)| a - b).collect();
        let l = diff.iter().fold(Int::one(), |acc, x| {
            num_integer::Integer::lcm(&acc, x.denom())
        });
        let ints: Vec<Int> = diff
            .iter()
            .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
            .collect();
        let c = coordinates_in_basis(&ints, basis)?;
        rows.push(
            c.into_iter()
                .map(|x| x / Rat::from_integer(l.clone()))
                .collect(),
        );
    }
    if rows.is_empty() {
        return Ok(Rat::one());
    }
    let det = det_abs_rational(&rows)?;
    if det.is_zero() {
        return Err(Error::DegenerateSimplex);
    }
    Ok(det)
}

//! Rational polytopes in homogeneous coordinates.
//!
//! A polytope `P` is stored as the `δ = 1` slice of the pointed cone spanned
//! by primitive integer generators. Both descriptions are kept: the
//! generators (one per vertex) and the support forms of the facets, together
//! with the incidence between them.

pub(crate) mod dd;
pub mod input;

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::linalg::echelon::{column_echelon, Track};
use crate::linalg::scalar::{self, convert_rows};
use crate::linalg::{
    dot_int, integer_kernel, lattice_coordinates, primitive, primitivity_divisor, saturated_basis,
    Int, LatticeBasis, Rat, DEFAULT_SEED,
};
use dd::{extreme_rays_exact, DdError};

/// The grading `δ` with `P = {x in C : δ(x) = 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub delta: Vec<Int>,
    /// Smallest `k >= 1` such that `aff(kP)` contains a lattice point.
    pub denominator_k: Int,
}

/// A support form `λ >= 0` cutting out one facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetForm {
    pub lambda: Vec<Int>,
    /// `gcd` of `λ` over a basis of the lattice of the polytope's cone.
    pub divisor_g: Int,
    /// Vertices lying on the facet.
    pub incident: BitSet,
}

impl FacetForm {
    /// Lattice height `λ(v) / (g δ(v))` of the point `v / δ(v)` over the facet.
    pub fn height(&self, v: &[Int], delta_v: &Int) -> Rat {
        Rat::new(dot_int(&self.lambda, v), &self.divisor_g * delta_v)
    }
}

/// Lattice height of a generator over a facet.
pub fn lattice_height(f: &FacetForm, v: &[Int], delta_v: &Int) -> Rat {
    f.height(v, delta_v)
}

/// H-description: `{x : A x >= 0, E x = 0, δ(x) = 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConstraintSystem {
    pub ambient_dim: usize,
    pub inequalities: Vec<Vec<Int>>,
    pub equations: Vec<Vec<Int>>,
    pub grading_form: Vec<Int>,
}

/// V-description: rational points of `Q^n`, embedded at height 1 in `Q^(n+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VDescription {
    pub ambient_dim: usize,
    pub points: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeInput {
    H(ConstraintSystem),
    V(VDescription),
}

#[derive(Clone, Debug)]
pub struct HomogenizedPolytope {
    /// Dimension of the space containing the cone.
    pub ambient_dim: usize,
    /// Primitive generators, one per vertex.
    pub generators: Vec<Vec<Int>>,
    /// `δ(v)` for each generator.
    pub deltas: Vec<Int>,
    pub grading: Grading,
    pub facets: Vec<FacetForm>,
    /// Basis of `span(generators) ∩ Z^n`.
    pub aff_basis: LatticeBasis,
    pub dim: usize,
    /// For each vertex, the facets containing it.
    pub vertex_facets: Vec<BitSet>,
}

/// Homogenizes rational points: `p` becomes the primitive integer vector on
/// the ray through `(p, 1)`.
///
/// Only the generator side is filled in; facets are left empty.
pub fn homogenize(points: &[Vec<Rat>]) -> Result<HomogenizedPolytope> {
    let Some(first) = points.first() else {
        return Err(Error::Empty);
    };
    let n = first.len();
    let mut generators = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        generators.push(homogenize_point(p));
    }
    let mut delta = vec![Int::zero(); n + 1];
    delta[n] = Int::one();
    let deltas = generators.iter().map(|g| g[n].clone()).collect();
    let aff_basis = saturated_basis(&generators, DEFAULT_SEED);
    let denominator_k = lattice_denominator(&delta, &aff_basis);
    Ok(HomogenizedPolytope {
        ambient_dim: n + 1,
        dim: aff_basis.rank() - 1,
        generators,
        deltas,
        grading: Grading {
            delta,
            denominator_k,
        },
        facets: Vec::new(),
        aff_basis,
        vertex_facets: Vec::new(),
    })
}

fn homogenize_point(p: &[Rat]) -> Vec<Int> {
    let l = p.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let mut v: Vec<Int> = p.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    v.push(l);
    primitive(&v)
}

fn lattice_denominator(delta: &[Int], basis: &LatticeBasis) -> Int {
    basis
        .vectors
        .iter()
        .fold(Int::zero(), |g, u| g.gcd(&dot_int(delta, u)))
}

/// Computes both descriptions from either one.
pub fn dual_convert(input: &PolytopeInput) -> Result<HomogenizedPolytope> {
    dual_convert_seeded(input, DEFAULT_SEED)
}

/// [`dual_convert`] with an explicit seed for the lattice saturation.
pub fn dual_convert_seeded(input: &PolytopeInput, seed: u64) -> Result<HomogenizedPolytope> {
    match input {
        PolytopeInput::H(sys) => from_constraints(sys, seed),
        PolytopeInput::V(v) => {
            let partial = homogenize(&v.points)?;
            from_generators(partial.generators, partial.grading.delta)
        }
    }
}

fn check_grading(delta: &[Int], n: usize) -> Result<()> {
    if delta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: delta.len(),
        });
    }
    let g = delta.iter().fold(Int::zero(), |g, x| g.gcd(x));
    if !g.is_one() {
        return Err(Error::GradingNotPrimitive);
    }
    Ok(())
}

fn from_constraints(sys: &ConstraintSystem, seed: u64) -> Result<HomogenizedPolytope> {
    let n = sys.ambient_dim;
    check_grading(&sys.grading_form, n)?;
    for row in sys.inequalities.iter().chain(&sys.equations) {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
    }
    let kernel: Vec<Vec<Int>> = if sys.equations.is_empty() {
        LatticeBasis::standard(n).vectors
    } else {
        integer_kernel(&sys.equations, n)
    };
    let k = kernel.len();
    if k == 0 {
        return Err(Error::Empty);
    }
    let to_ambient = |y: &[Int]| -> Vec<Int> {
        (0..n)
            .map(|i| kernel.iter().zip(y).map(|(col, c)| &col[i] * c).sum())
            .collect()
    };
    // δ >= 0 is added so that rays with δ = 0 are exactly the recession
    // directions of the slice
    let reduced: Vec<Vec<Int>> = sys
        .inequalities
        .iter()
        .chain(std::iter::once(&sys.grading_form))
        .map(|a| kernel.iter().map(|col| dot_int(a, col)).collect())
        .collect();
    let rays = match extreme_rays_exact(&reduced, k) {
        Ok(r) => r,
        Err(DdError::NotPointed) => return Err(Error::GradingNotPositive),
    };
    let mut generators = Vec::with_capacity(rays.len());
    let mut recession = false;
    for r in rays {
        let x = to_ambient(&r.vector);
        if dot_int(&sys.grading_form, &x).is_positive() {
            generators.push(x);
        } else {
            recession = true;
        }
    }
    if generators.is_empty() {
        return Err(Error::Empty);
    }
    if recession {
        return Err(Error::GradingNotPositive);
    }
    let delta = sys.grading_form.clone();
    generators.sort_by(|a, b| compare_points(a, &dot_int(&delta, a), b, &dot_int(&delta, b)));
    let deltas: Vec<Int> = generators.iter().map(|g| dot_int(&delta, g)).collect();
    let aff_basis = saturated_basis(&generators, seed);
    let dim = aff_basis.rank() - 1;
    let m = generators.len();

    let zero_sets: Vec<BitSet> = sys
        .inequalities
        .iter()
        .map(|a| BitSet::from_indices(m, (0..m).filter(|&i| dot_int(a, &generators[i]).is_zero())))
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    if dim > 0 {
        for (i, z) in zero_sets.iter().enumerate() {
            if z.is_empty() || z.count() == m {
                continue;
            }
            let dominated = zero_sets
                .iter()
                .enumerate()
                .any(|(j, o)| o.count() < m && z.is_subset(o) && (z != o || j < i));
            if !dominated {
                chosen.push(i);
            }
        }
    }
    let mut facets = Vec::with_capacity(chosen.len());
    for i in chosen {
        let lambda = sys.inequalities[i].clone();
        let divisor_g = primitivity_divisor(&lambda, &aff_basis)?;
        facets.push(FacetForm {
            lambda,
            divisor_g,
            incident: zero_sets[i].clone(),
        });
    }
    let denominator_k = lattice_denominator(&delta, &aff_basis);
    Ok(assemble(
        n,
        generators,
        deltas,
        delta,
        denominator_k,
        facets,
        aff_basis,
        dim,
    ))
}

/// Orders generators by the rational points `v / δ(v)`, lexicographically.
fn compare_points(a: &[Int], da: &Int, b: &[Int], db: &Int) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = (x * db).cmp(&(y * da));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Builds the full polytope from cone generators (not necessarily extreme).
///
/// Non-extreme and repeated generators are dropped; the surviving ones keep
/// their input order.
pub fn from_generators(generators: Vec<Vec<Int>>, delta: Vec<Int>) -> Result<HomogenizedPolytope> {
    let Some(first) = generators.first() else {
        return Err(Error::Empty);
    };
    let n = first.len();
    check_grading(&delta, n)?;
    let mut unique: Vec<Vec<Int>> = Vec::with_capacity(generators.len());
    {
        let mut seen = std::collections::HashSet::new();
        for g in generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.len(),
                });
            }
            let g = primitive(&g);
            if !dot_int(&delta, &g).is_positive() {
                return Err(Error::GradingNotPositive);
            }
            if seen.insert(g.clone()) {
                unique.push(g);
            }
        }
    }
    let track = Track { u: true, w: true };
    let ech = match convert_rows::<i64>(&unique).and_then(|r| column_echelon(&r, n, track)) {
        Some(e) => EchelonInt {
            rank: e.rank,
            coords: to_int_rows(&e.coords),
            u_cols: to_int_rows(e.u_cols.as_deref().expect("tracked")),
            w_rows: to_int_rows(e.w_rows.as_deref().expect("tracked")),
        },
        None => {
            let e = column_echelon(&unique, n, track).expect("bigint never overflows");
            EchelonInt {
                rank: e.rank,
                coords: e.coords,
                u_cols: e.u_cols.expect("tracked"),
                w_rows: e.w_rows.expect("tracked"),
            }
        }
    };
    let r = ech.rank;
    let aff_basis = LatticeBasis {
        ambient_dim: n,
        vectors: ech.w_rows[..r].to_vec(),
    };
    let dim = r - 1;
    let m = unique.len();
    let mut forms: Vec<(Vec<Int>, BitSet)> = Vec::new();
    if dim > 0 {
        let rays = extreme_rays_exact(&ech.coords, r).map_err(|_| Error::GradingNotPositive)?;
        for ray in rays {
            if ray.zeros.is_empty() {
                continue;
            }
            let lambda: Vec<Int> = (0..n)
                .map(|i| (0..r).map(|k| &ech.u_cols[k][i] * &ray.vector[k]).sum())
                .collect();
            forms.push((lambda, ray.zeros));
        }
    }
    // a generator is a vertex unless another one lies on all of its facets
    let on: Vec<BitSet> = (0..m)
        .map(|i| {
            BitSet::from_indices(
                forms.len(),
                (0..forms.len()).filter(|&f| forms[f].1.contains(i)),
            )
        })
        .collect();
    let keep: Vec<usize> = if m == 1 || dim == 0 {
        vec![0]
    } else {
        (0..m)
            .filter(|&i| !(0..m).any(|j| j != i && on[i].is_subset(&on[j])))
            .collect()
    };
    let generators: Vec<Vec<Int>> = keep.iter().map(|&i| unique[i].clone()).collect();
    let deltas: Vec<Int> = generators.iter().map(|g| dot_int(&delta, g)).collect();
    let mv = generators.len();
    let mut facets = Vec::with_capacity(forms.len());
    for (lambda, _) in forms {
        let incident = BitSet::from_indices(
            mv,
            (0..mv).filter(|&i| dot_int(&lambda, &generators[i]).is_zero()),
        );
        let divisor_g = primitivity_divisor(&lambda, &aff_basis)?;
        facets.push(FacetForm {
            lambda,
            divisor_g,
            incident,
        });
    }
    let denominator_k = lattice_denominator(&delta, &aff_basis);
    Ok(assemble(
        n,
        generators,
        deltas,
        delta,
        denominator_k,
        facets,
        aff_basis,
        dim,
    ))
}

struct EchelonInt {
    rank: usize,
    coords: Vec<Vec<Int>>,
    u_cols: Vec<Vec<Int>>,
    w_rows: Vec<Vec<Int>>,
}

fn to_int_rows<T: scalar::Scalar>(rows: &[Vec<T>]) -> Vec<Vec<Int>> {
    rows.iter()
        .map(|r| r.iter().map(T::to_int).collect())
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    n: usize,
    generators: Vec<Vec<Int>>,
    deltas: Vec<Int>,
    delta: Vec<Int>,
    denominator_k: Int,
    facets: Vec<FacetForm>,
    aff_basis: LatticeBasis,
    dim: usize,
) -> HomogenizedPolytope {
    let m = generators.len();
    let vertex_facets = (0..m)
        .map(|i| {
            BitSet::from_indices(
                facets.len(),
                (0..facets.len()).filter(|&f| facets[f].incident.contains(i)),
            )
        })
        .collect();
    HomogenizedPolytope {
        ambient_dim: n,
        generators,
        deltas,
        grading: Grading {
            delta,
            denominator_k,
        },
        facets,
        aff_basis,
        dim,
        vertex_facets,
    }
}

/// `vol * sqrt(gram) / dim!`, truncated to `digits` decimal places.
pub fn euclidean_from_lattice(vol: &Rat, gram: &Int, dim: usize, digits: usize) -> String {
    let fact: Int = (1..=dim).fold(Int::one(), |acc, i| acc * Int::from(i));
    let sq = vol * vol * Rat::from_integer(gram.clone()) / Rat::from_integer(&fact * &fact);
    let scale = num_traits::pow(Int::from(10), 2 * digits);
    // floor(sqrt(floor(x))) = floor(sqrt(x))
    let root = ((sq.numer() * scale) / sq.denom()).sqrt();
    let ten = num_traits::pow(Int::from(10), digits);
    let int_part = &root / &ten;
    if digits == 0 {
        return int_part.to_string();
    }
    let frac = (&root % &ten).to_string();
    format!("{}.{}{}", int_part, "0".repeat(digits - frac.len()), frac)
}

/// Lattice volume of `conv(0, v_1/δ_1, …, v_k/δ_k)` for linearly independent
/// generators, measured in the saturated lattice of their span.
pub fn simplex_volume(generators: &[&[Int]], deltas: &[Int]) -> Result<Rat> {
    let Some(first) = generators.first() else {
        return Err(Error::DegenerateSimplex);
    };
    let n = first.len();
    let rows: Vec<Vec<Int>> = generators.iter().map(|g| g.to_vec()).collect();
    let index = simplex_index(&rows, n).ok_or(Error::DegenerateSimplex)?;
    let denom = deltas.iter().fold(Int::one(), |acc, d| acc * d);
    Ok(Rat::new(index, denom))
}

/// Index of the lattice spanned by `rows` in its saturation, or `None` if
/// the rows are dependent.
pub(crate) fn simplex_index(rows: &[Vec<Int>], ncols: usize) -> Option<Int> {
    fn run<T: scalar::Scalar>(rows: &[Vec<T>], ncols: usize) -> Option<Option<Int>> {
        let e = column_echelon(rows, ncols, Track::default())?;
        if e.rank < rows.len() {
            return Some(None);
        }
        Some(Some(e.pivot_product()?.to_int()))
    }
    if let Some(small) = convert_rows::<i64>(rows) {
        if let Some(res) = run(&small, ncols) {
            return res;
        }
    }
    run(rows, ncols).expect("bigint never overflows")
}

impl HomogenizedPolytope {
    pub fn num_vertices(&self) -> usize {
        self.generators.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// Smallest `k >= 1` with a lattice point in `aff(kP)`.
    pub fn grading_denominator(&self) -> Int {
        self.grading.denominator_k.clone()
    }

    /// Every vertex lies on exactly `dim` facets.
    pub fn is_simple(&self) -> bool {
        self.vertex_facets.iter().all(|f| f.count() == self.dim)
    }

    /// The vertex `i` as a rational point of the grading slice.
    pub fn vertex_point(&self, i: usize) -> Vec<Rat> {
        let d = &self.deltas[i];
        self.generators[i]
            .iter()
            .map(|x| Rat::new(x.clone(), d.clone()))
            .collect()
    }

    /// Lattice volume of `conv(0, F)` for the simplex `F` spanned by the
    /// given vertices.
    pub fn simplex_volume(&self, vertices: &[usize]) -> Result<Rat> {
        let gens: Vec<&[Int]> = vertices
            .iter()
            .map(|&i| self.generators[i].as_slice())
            .collect();
        let deltas: Vec<Int> = vertices.iter().map(|&i| self.deltas[i].clone()).collect();
        simplex_volume(&gens, &deltas)
    }

    /// Lattice height of vertex `v` over facet `f`.
    pub fn height(&self, f: usize, v: usize) -> Rat {
        self.facets[f].height(&self.generators[v], &self.deltas[v])
    }

    /// The face spanned by the given vertices, as a polytope of its own.
    pub fn face_polytope(&self, vertices: &BitSet) -> Result<HomogenizedPolytope> {
        let gens: Vec<Vec<Int>> = vertices
            .iter()
            .map(|i| self.generators[i].clone())
            .collect();
        from_generators(gens, self.grading.delta.clone())
    }

    /// Basis of the direction lattice `span(P) ∩ ker δ ∩ Z^n`.
    pub fn direction_lattice(&self) -> Vec<Vec<Int>> {
        let values: Vec<Int> = self
            .aff_basis
            .vectors
            .iter()
            .map(|u| dot_int(&self.grading.delta, u))
            .collect();
        let r = values.len();
        integer_kernel(&[values], r)
            .iter()
            .map(|c| {
                (0..self.ambient_dim)
                    .map(|i| {
                        self.aff_basis
                            .vectors
                            .iter()
                            .zip(c)
                            .map(|(u, x)| &u[i] * x)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// Gram determinant of [`Self::direction_lattice`] in the Euclidean
    /// coordinates of the input space.
    pub fn direction_gram_determinant(&self) -> Int {
        let basis = self.direction_lattice();
        let gram: Vec<Vec<Int>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| dot_int(a, b)).collect())
            .collect();
        if gram.is_empty() {
            return Int::one();
        }
        crate::linalg::det_abs(
            &crate::linalg::IntMatrix::from_rows(&gram, gram.len()).expect("square"),
        )
        .expect("square")
    }

    /// Euclidean volume of `P` in its affine hull, truncated to `digits`
    /// decimal places, from the lattice volume `vol` of `P`.
    pub fn euclidean_volume(&self, vol: &Rat, digits: usize) -> String {
        euclidean_from_lattice(vol, &self.direction_gram_determinant(), self.dim, digits)
    }

    /// Coordinates of all generators in `aff_basis`.
    pub fn generator_coordinates(&self) -> Result<Vec<Vec<Int>>> {
        lattice_coordinates(&self.generators, &self.aff_basis)
    }
}

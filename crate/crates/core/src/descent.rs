//! Volume by descent in the face lattice.
//!
//! Faces are processed layer by layer. Every non-simplex face `F` picks a
//! vertex `v(F)` and passes `w(F) * Ht_G(v)` on to each facet `G` of `F`
//! that avoids `v`; simplex faces add `w(F) * Vol(F)` to the total. Faces are
//! keyed by the set of facets of `P` containing them, and only two layers are
//! alive at any time.

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::linalg::echelon::{column_echelon, Track};
use crate::linalg::scalar::{self, content, convert_rows, dot};
use crate::linalg::{Int, Rat};
use crate::polytope::{euclidean_from_lattice, HomogenizedPolytope};

#[derive(Clone, Debug, Default)]
pub struct DescentOptions {
    /// Worker threads; `0` uses the global default, `1` runs sequentially.
    pub threads: usize,
    /// Record every processed face (for testing on small inputs).
    pub trace: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DescentStats {
    /// Stored faces over all layers, `P` included.
    pub total_faces: u64,
    pub layer_sizes: Vec<u64>,
    pub det_count: u64,
    /// Number of simplices in the implicit decomposition.
    pub simplex_decomp_count: Int,
}

#[derive(Clone, Debug)]
pub struct VolumeResult {
    /// `Vol(P)`, scaled by the grading denominator.
    pub lattice_volume: Rat,
    /// `Vol(conv(0, P))`.
    pub cone_volume: Rat,
    pub grading_denominator: Int,
    pub dim: usize,
    pub gram_determinant: Int,
    pub stats: DescentStats,
    pub trace: Option<Vec<TraceEntry>>,
}

impl VolumeResult {
    /// Euclidean volume of `P` in its affine hull, truncated to `digits` places.
    pub fn euclidean_volume(&self, digits: usize) -> String {
        euclidean_from_lattice(
            &self.lattice_volume,
            &self.gram_determinant,
            self.dim,
            digits,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub level: usize,
    pub signature: BitSet,
    pub vertices: BitSet,
    pub weight: Rat,
    pub flags: Int,
    pub kind: TraceKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Simplex {
        volume: Rat,
    },
    Pyramid {
        apex: usize,
        children: Vec<TraceChild>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceChild {
    pub signature: BitSet,
    pub vertices: BitSet,
    pub height: Rat,
    /// Set for simplex facets, which are finished at once.
    pub simplex_volume: Option<Rat>,
}

/// A facet of a face, as seen from inside the face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFacet {
    pub signature: BitSet,
    pub vertices: BitSet,
    /// Smallest index of a facet of `P` cutting it out.
    pub representative: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLocalData {
    pub vertices: BitSet,
    pub facets: Vec<LocalFacet>,
    pub is_simplex: bool,
}

type Rows = Vec<Vec<i64>>;

/// `P` in coordinates of its own lattice, shared by all workers.
pub struct DescentContext<'a> {
    p: &'a HomogenizedPolytope,
    coords: Vec<Vec<Int>>,
    forms: Vec<Vec<Int>>,
    small: Option<(Rows, Rows)>,
    simple: bool,
}

impl<'a> DescentContext<'a> {
    pub fn new(p: &'a HomogenizedPolytope) -> Result<Self> {
        let coords = p.generator_coordinates()?;
        let forms: Vec<Vec<Int>> = p
            .facets
            .iter()
            .map(|f| {
                let mu: Vec<Int> = p
                    .aff_basis
                    .vectors
                    .iter()
                    .map(|u| crate::linalg::dot_int(&f.lambda, u))
                    .collect();
                crate::linalg::primitive(&mu)
            })
            .collect();
        let small = convert_rows::<i64>(&coords).zip(convert_rows::<i64>(&forms));
        Ok(Self {
            p,
            coords,
            forms,
            small,
            simple: p.is_simple(),
        })
    }

    pub fn polytope(&self) -> &HomogenizedPolytope {
        self.p
    }

    /// Vertices of the face with the given signature.
    pub fn face_vertices(&self, signature: &BitSet) -> BitSet {
        let mut v = BitSet::full(self.p.num_vertices());
        for j in signature.iter() {
            v.intersect_with(&self.p.facets[j].incident);
        }
        v
    }

    fn rank_of(&self, vertices: &BitSet) -> usize {
        let rows: Vec<Vec<Int>> = vertices.iter().map(|i| self.coords[i].clone()).collect();
        crate::linalg::echelon::rank(&rows, self.coords.first().map_or(0, Vec::len))
            .expect("bigint never overflows")
    }

    /// Vertices and facets of a face; `dim` is computed when not given.
    pub fn local_data(&self, signature: &BitSet, dim: Option<usize>) -> Result<FaceLocalData> {
        let vertices = self.face_vertices(signature);
        if vertices.is_empty() {
            return Err(Error::NotAFace);
        }
        let nv = vertices.count();
        let dim = dim.unwrap_or_else(|| self.rank_of(&vertices) - 1);
        let is_simplex = nv == dim + 1;
        let facets = if is_simplex && dim == 0 {
            Vec::new()
        } else {
            self.local_facets(signature, &vertices, nv)
        };
        Ok(FaceLocalData {
            vertices,
            facets,
            is_simplex,
        })
    }

    fn local_facets(&self, signature: &BitSet, vertices: &BitSet, nv: usize) -> Vec<LocalFacet> {
        let m = self.p.num_vertices();
        // intersections are formed in the local numbering of the face
        let verts: Vec<usize> = vertices.iter().collect();
        let mut cands: Vec<(usize, BitSet, usize)> = Vec::new();
        for (j, facet) in self.p.facets.iter().enumerate() {
            if signature.contains(j) {
                continue;
            }
            let mut c = BitSet::new(nv);
            for (a, &v) in verts.iter().enumerate() {
                if facet.incident.contains(v) {
                    c.insert(a);
                }
            }
            let k = c.count();
            if k == 0 || k == nv {
                continue;
            }
            cands.push((j, c, k));
        }
        let global = |c: &BitSet| BitSet::from_indices(m, c.iter().map(|a| verts[a]));
        if self.simple {
            return cands
                .iter()
                .map(|(j, c, _)| {
                    let mut s = signature.clone();
                    s.insert(*j);
                    LocalFacet {
                        signature: s,
                        vertices: global(c),
                        representative: *j,
                    }
                })
                .collect();
        }
        // facets of F are the maximal intersections; equal ones are merged
        let mut out: Vec<LocalFacet> = Vec::new();
        for (a, (j, c, k)) in cands.iter().enumerate() {
            let dominated = cands.iter().any(|(_, o, ko)| ko > k && c.is_subset(o));
            if dominated {
                continue;
            }
            if cands[..a].iter().any(|(_, o, _)| o == c) {
                continue;
            }
            let mut s = signature.clone();
            for (j2, o, _) in &cands[a..] {
                if o == c {
                    s.insert(*j2);
                }
            }
            out.push(LocalFacet {
                signature: s,
                vertices: global(c),
                representative: *j,
            });
        }
        out
    }
}

/// Picks `v(F)`: fewest opposite facets first, then fewest faces of the
/// current layer containing it, then the smallest index.
///
/// `layer_counts[i]` is the number of faces of the layer containing vertex
/// `i`; an empty slice disables the second rule.
pub fn select_vertex(vertices: &BitSet, facets: &[LocalFacet], layer_counts: &[u32]) -> usize {
    vertices
        .iter()
        .min_by_key(|&i| {
            let opposite = facets.iter().filter(|f| !f.vertices.contains(i)).count();
            let shared = layer_counts.get(i).copied().unwrap_or(0);
            (opposite, shared, i)
        })
        .expect("faces are nonempty")
}

/// Integer data of one face: heights over the opposite facets and indices
/// of the simplices finished here.
struct FaceArith {
    /// Index of `F` itself when it is a simplex.
    own_index: Option<Int>,
    /// `(λ(v), g, index of G if G is a simplex)` per opposite facet.
    opposite: Vec<(Int, Int, Option<Int>)>,
}

struct OppositeFacet<'f> {
    representative: usize,
    vertices: &'f BitSet,
    simplex: bool,
}

fn index_of<T: scalar::Scalar>(rows: &[Vec<T>], ncols: usize) -> Option<Option<T>> {
    let e = column_echelon(rows, ncols, Track::default())?;
    if e.rank < rows.len() {
        return Some(None);
    }
    Some(Some(e.pivot_product()?))
}

#[allow(clippy::too_many_arguments)]
fn face_arith<T: scalar::Scalar>(
    coords: &[Vec<T>],
    forms: &[Vec<T>],
    signature: &BitSet,
    vertices: &BitSet,
    dim: usize,
    whole: bool,
    apex: Option<usize>,
    opposite: &[OppositeFacet<'_>],
) -> Option<FaceArith> {
    let ncols = coords.first().map_or(0, Vec::len);
    let rows_of = |s: &BitSet| -> Vec<Vec<T>> { s.iter().map(|i| coords[i].clone()).collect() };
    let Some(apex) = apex else {
        let idx = index_of(&rows_of(vertices), ncols)?.expect("simplex faces are independent");
        return Some(FaceArith {
            own_index: Some(idx.to_int()),
            opposite: Vec::new(),
        });
    };
    let basis: Option<Vec<Vec<T>>> = if whole {
        None
    } else {
        // the span of F is cut out by the facets containing it
        let rows: Vec<Vec<T>> = signature.iter().map(|j| forms[j].clone()).collect();
        let e = column_echelon(&rows, ncols, Track { u: true, w: false })?;
        debug_assert_eq!(ncols - e.rank, dim + 1);
        Some(e.kernel().expect("tracked").to_vec())
    };
    let mut out = Vec::with_capacity(opposite.len());
    for g in opposite {
        let mu = &forms[g.representative];
        let divisor = match &basis {
            None => content(mu)?,
            Some(b) => {
                let mut acc = T::zero();
                for u in b {
                    acc = acc.gcd(&dot(mu, u)?)?;
                }
                acc
            }
        };
        let num = dot(mu, &coords[apex])?;
        let idx = if g.simplex {
            Some(
                index_of(&rows_of(g.vertices), ncols)?
                    .expect("simplex faces are independent")
                    .to_int(),
            )
        } else {
            None
        };
        out.push((num.to_int(), divisor.to_int(), idx));
    }
    Some(FaceArith {
        own_index: None,
        opposite: out,
    })
}

#[derive(Default)]
struct Partial {
    next: FxHashMap<BitSet, (Rat, Int)>,
    volume: Rat,
    det: u64,
    sigma: Int,
    trace: Vec<TraceEntry>,
    error: Option<Error>,
}

impl Partial {
    fn merge(mut self, mut other: Partial) -> Partial {
        if self.next.len() < other.next.len() {
            std::mem::swap(&mut self.next, &mut other.next);
        }
        for (k, (w, f)) in other.next {
            let e = self
                .next
                .entry(k)
                .or_insert_with(|| (Rat::zero(), Int::zero()));
            e.0 += w;
            e.1 += f;
        }
        self.volume += other.volume;
        self.det += other.det;
        self.sigma += other.sigma;
        self.trace.append(&mut other.trace);
        self.error = self.error.or(other.error);
        self
    }
}

struct Face {
    signature: BitSet,
    weight: Rat,
    flags: Int,
}

impl DescentContext<'_> {
    fn arith(
        &self,
        signature: &BitSet,
        vertices: &BitSet,
        dim: usize,
        whole: bool,
        apex: Option<usize>,
        opposite: &[OppositeFacet<'_>],
    ) -> FaceArith {
        if let Some((coords, forms)) = &self.small {
            if let Some(r) = face_arith(
                coords, forms, signature, vertices, dim, whole, apex, opposite,
            ) {
                return r;
            }
        }
        face_arith(
            &self.coords,
            &self.forms,
            signature,
            vertices,
            dim,
            whole,
            apex,
            opposite,
        )
        .expect("bigint never overflows")
    }

    fn delta_product(&self, vertices: &BitSet) -> Int {
        vertices
            .iter()
            .fold(Int::one(), |acc, i| acc * &self.p.deltas[i])
    }

    /// Processes one face of layer `level`, pushing its opposite facets.
    fn process_face(
        &self,
        face: &Face,
        level: usize,
        counts: &[u32],
        trace: bool,
        acc: &mut Partial,
    ) -> Result<()> {
        let dim = self.p.dim - level;
        let local = self.local_data(&face.signature, Some(dim))?;
        if local.is_simplex {
            let a = self.arith(&face.signature, &local.vertices, dim, level == 0, None, &[]);
            let volume = Rat::new(
                a.own_index.expect("simplex"),
                self.delta_product(&local.vertices),
            );
            acc.volume += &face.weight * &volume;
            acc.det += 1;
            acc.sigma += &face.flags;
            if trace {
                acc.trace.push(TraceEntry {
                    level,
                    signature: face.signature.clone(),
                    vertices: local.vertices,
                    weight: face.weight.clone(),
                    flags: face.flags.clone(),
                    kind: TraceKind::Simplex { volume },
                });
            }
            return Ok(());
        }
        let apex = select_vertex(&local.vertices, &local.facets, counts);
        let opposite_facets: Vec<&LocalFacet> = local
            .facets
            .iter()
            .filter(|g| !g.vertices.contains(apex))
            .collect();
        let opposite: Vec<OppositeFacet<'_>> = opposite_facets
            .iter()
            .map(|g| OppositeFacet {
                representative: g.representative,
                vertices: &g.vertices,
                simplex: g.vertices.count() == dim,
            })
            .collect();
        let a = self.arith(
            &face.signature,
            &local.vertices,
            dim,
            level == 0,
            Some(apex),
            &opposite,
        );
        let delta_v = &self.p.deltas[apex];
        let mut children = Vec::new();
        for (g, (num, divisor, idx)) in opposite_facets.iter().zip(a.opposite) {
            let height = Rat::new(num, divisor * delta_v);
            let pushed = &face.weight * &height;
            let simplex_volume = idx.map(|idx| Rat::new(idx, self.delta_product(&g.vertices)));
            match &simplex_volume {
                Some(vol) => {
                    acc.volume += &pushed * vol;
                    acc.det += 1;
                    acc.sigma += &face.flags;
                }
                None => {
                    let e = acc
                        .next
                        .entry(g.signature.clone())
                        .or_insert_with(|| (Rat::zero(), Int::zero()));
                    e.0 += pushed;
                    e.1 += &face.flags;
                }
            }
            if trace {
                children.push(TraceChild {
                    signature: g.signature.clone(),
                    vertices: g.vertices.clone(),
                    height,
                    simplex_volume,
                });
            }
        }
        if trace {
            acc.trace.push(TraceEntry {
                level,
                signature: face.signature.clone(),
                vertices: local.vertices,
                weight: face.weight.clone(),
                flags: face.flags.clone(),
                kind: TraceKind::Pyramid { apex, children },
            });
        }
        Ok(())
    }
}

mod par {
    #[cfg(feature = "parallel")]
    use rayon::prelude::*;

    /// Folds `items` into per-worker accumulators and merges them.
    pub fn fold_merge<T, A, I, F, M>(
        items: &[T],
        parallel: bool,
        identity: I,
        fold: F,
        merge: M,
    ) -> A
    where
        T: Sync,
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(A, &T) -> A + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if parallel {
            return items
                .par_iter()
                .fold(&identity, &fold)
                .reduce(&identity, &merge);
        }
        let _ = (parallel, &merge);
        items.iter().fold(identity(), fold)
    }

    /// Runs `f` on a pool with `threads` workers (`0`: global pool).
    pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
        #[cfg(feature = "parallel")]
        if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool");
            return pool.install(f);
        }
        let _ = threads;
        f()
    }
}

/// Computes `Vol(P)` by descent.
pub fn descend(p: &HomogenizedPolytope) -> Result<VolumeResult> {
    descend_with(p, &DescentOptions::default())
}

pub fn descend_with(p: &HomogenizedPolytope, options: &DescentOptions) -> Result<VolumeResult> {
    let ctx = DescentContext::new(p)?;
    let parallel = options.threads != 1 && cfg!(feature = "parallel");
    par::with_threads(options.threads, || run(&ctx, options, parallel))
}

fn run(ctx: &DescentContext<'_>, options: &DescentOptions, parallel: bool) -> Result<VolumeResult> {
    let p = ctx.p;
    let m = p.num_vertices();
    let mut layer = vec![Face {
        signature: BitSet::new(p.num_facets()),
        weight: Rat::one(),
        flags: Int::one(),
    }];
    let mut stats = DescentStats::default();
    let mut volume = Rat::zero();
    let mut trace = Vec::new();
    let mut level = 0;
    while !layer.is_empty() {
        stats.total_faces += layer.len() as u64;
        stats.layer_sizes.push(layer.len() as u64);
        let counts: Vec<u32> = if layer.len() > 1 {
            par::fold_merge(
                &layer,
                parallel,
                || vec![0u32; m],
                |mut acc, face| {
                    for i in ctx.face_vertices(&face.signature).iter() {
                        acc[i] += 1;
                    }
                    acc
                },
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
        } else {
            Vec::new()
        };
        let part = par::fold_merge(
            &layer,
            parallel,
            Partial::default,
            |mut acc, face| {
                if acc.error.is_none() {
                    if let Err(e) = ctx.process_face(face, level, &counts, options.trace, &mut acc)
                    {
                        acc.error = Some(e);
                    }
                }
                acc
            },
            Partial::merge,
        );
        if let Some(e) = part.error {
            return Err(e);
        }
        volume += part.volume;
        stats.det_count += part.det;
        stats.simplex_decomp_count += part.sigma;
        trace.extend(part.trace);
        let mut next: Vec<Face> = part
            .next
            .into_iter()
            .map(|(signature, (weight, flags))| Face {
                signature,
                weight,
                flags,
            })
            .collect();
        next.sort_unstable_by(|a, b| a.signature.cmp(&b.signature));
        layer = next;
        level += 1;
    }
    trace.sort_by(|a: &TraceEntry, b: &TraceEntry| {
        (a.level, &a.signature).cmp(&(b.level, &b.signature))
    });
    let k = p.grading_denominator();
    Ok(VolumeResult {
        lattice_volume: &volume * Rat::from_integer(k.clone()),
        cone_volume: volume,
        grading_denominator: k,
        dim: p.dim,
        gram_determinant: p.direction_gram_determinant(),
        stats,
        trace: options.trace.then_some(trace),
    })
}

/// Number of simplices in the decomposition implicit in the descent.
pub fn flag_decomposition_count(result: &VolumeResult) -> &Int {
    &result.stats.simplex_decomp_count
}

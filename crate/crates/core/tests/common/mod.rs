#![allow(dead_code)]

use polyvol::polytope::{
    dual_convert, ConstraintSystem, HomogenizedPolytope, PolytopeInput, VDescription,
};
use polyvol::{Int, Rat};
use rand::Rng;

pub fn int(x: i64) -> Int {
    Int::from(x)
}

pub fn q(a: i64, b: i64) -> Rat {
    Rat::new(Int::from(a), Int::from(b))
}

pub fn qi(a: i64) -> Rat {
    Rat::from_integer(Int::from(a))
}

pub fn factorial(n: u64) -> Int {
    (1..=n).fold(Int::from(1), |acc, i| acc * Int::from(i))
}

pub fn from_points(points: Vec<Vec<Rat>>) -> HomogenizedPolytope {
    let ambient_dim = points[0].len();
    dual_convert(&PolytopeInput::V(VDescription {
        ambient_dim,
        points,
    }))
    .unwrap()
}

pub fn cube_system(d: usize) -> ConstraintSystem {
    let mut inequalities = Vec::new();
    for i in 0..d {
        let mut lo = vec![int(0); d + 1];
        lo[i] = int(1);
        let mut hi = vec![int(0); d + 1];
        hi[i] = int(-1);
        hi[d] = int(1);
        inequalities.push(lo);
        inequalities.push(hi);
    }
    let mut grading_form = vec![int(0); d + 1];
    grading_form[d] = int(1);
    ConstraintSystem {
        ambient_dim: d + 1,
        inequalities,
        equations: Vec::new(),
        grading_form,
    }
}

pub fn cube(d: usize) -> HomogenizedPolytope {
    dual_convert(&PolytopeInput::H(cube_system(d))).unwrap()
}

pub fn cross(d: usize) -> HomogenizedPolytope {
    let mut points = Vec::new();
    for i in 0..d {
        for s in [1, -1] {
            let mut v = vec![qi(0); d];
            v[i] = qi(s);
            points.push(v);
        }
    }
    from_points(points)
}

/// The triangle with vertices `0`, `v = (1/2, 1)`, `w = (-1/2, 1)`.
pub fn figure_triangle() -> HomogenizedPolytope {
    from_points(vec![
        vec![qi(0), qi(0)],
        vec![q(1, 2), qi(1)],
        vec![q(-1, 2), qi(1)],
    ])
}

/// Random points with coordinates `a / b`, `|a / b| <= 5`, `b <= 4`.
pub fn random_points(rng: &mut impl Rng, dim: usize, count: usize) -> Vec<Vec<Rat>> {
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let b: i64 = rng.gen_range(1..=4);
                    let a: i64 = rng.gen_range(-5 * b..=5 * b);
                    q(a, b)
                })
                .collect()
        })
        .collect()
}

pub fn shuffled(rng: &mut impl Rng, m: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    order
}

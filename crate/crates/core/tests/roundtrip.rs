mod common;

use std::collections::BTreeSet;

use common::*;
use polyvol::polytope::input::{parse_input, write_constraints};
use polyvol::polytope::{dual_convert, ConstraintSystem, HomogenizedPolytope, PolytopeInput};
use polyvol::{Int, Rat};
use proptest::prelude::*;

fn vertex_set(p: &HomogenizedPolytope) -> BTreeSet<Vec<Rat>> {
    (0..p.num_vertices()).map(|i| p.vertex_point(i)).collect()
}

/// The facet description of a full-dimensional V-polytope as an H-input.
fn facet_system(p: &HomogenizedPolytope) -> ConstraintSystem {
    let n = p.ambient_dim;
    let mut grading_form = vec![int(0); n];
    grading_form[n - 1] = int(1);
    ConstraintSystem {
        ambient_dim: n,
        inequalities: p.facets.iter().map(|f| f.lambda.clone()).collect(),
        equations: Vec::new(),
        grading_form,
    }
}

fn rational() -> impl Strategy<Value = Rat> {
    (1i64..=3).prop_flat_map(|b| (-4 * b..=4 * b).prop_map(move |a| q(a, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn vertices_to_facets_and_back(points in (2usize..=4).prop_flat_map(|d| {
        proptest::collection::vec(proptest::collection::vec(rational(), d), (d + 2)..=9)
    })) {
        let p = from_points(points);
        prop_assume!(p.dim + 1 == p.ambient_dim);
        let back = dual_convert(&PolytopeInput::H(facet_system(&p))).unwrap();
        prop_assert_eq!(vertex_set(&back), vertex_set(&p));
        prop_assert_eq!(back.num_facets(), p.num_facets());
    }

    #[test]
    fn constraint_text_round_trip(rows in proptest::collection::vec(proptest::collection::vec(-20i64..=20, 3), 1..6),
                                  eqs in proptest::collection::vec(proptest::collection::vec(-20i64..=20, 3), 0..2)) {
        let to_int = |r: &Vec<i64>| r.iter().map(|&x| Int::from(x)).collect::<Vec<_>>();
        let sys = ConstraintSystem {
            ambient_dim: 3,
            inequalities: rows.iter().map(to_int).collect(),
            equations: eqs.iter().map(to_int).collect(),
            grading_form: vec![int(0), int(1), int(1)],
        };
        let text = write_constraints(&sys);
        prop_assert_eq!(parse_input(&text).unwrap(), PolytopeInput::H(sys));
    }
}

#[test]
fn cube_text_converts() {
    let text = write_constraints(&cube_system(3));
    let p = dual_convert(&parse_input(&text).unwrap()).unwrap();
    assert_eq!(p.num_vertices(), 8);
    assert_eq!(p.num_facets(), 6);
}

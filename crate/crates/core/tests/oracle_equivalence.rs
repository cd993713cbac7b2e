mod common;

use common::*;
use polyvol::descent::descend;
use polyvol::special::{oracle_volume_bounded, oracle_volume_by_triangulation, OracleBounds};
use polyvol::Rat;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rat> {
    (1i64..=4).prop_flat_map(|b| (-5 * b..=5 * b).prop_map(move |a| q(a, b)))
}

fn point_cloud() -> impl Strategy<Value = Vec<Vec<Rat>>> {
    (3usize..=6).prop_flat_map(|d| {
        let point = proptest::collection::vec(rational(), d);
        proptest::collection::vec(point, (d + 1)..=12)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn descent_matches_pulling_triangulation(points in point_cloud(), seed in any::<u64>()) {
        let p = from_points(points);
        let descent = descend(&p).unwrap().lattice_volume;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..2 {
            let order = shuffled(&mut rng, p.num_vertices());
            prop_assert_eq!(&oracle_volume_by_triangulation(&p, &order).unwrap(), &descent);
        }
    }
}

#[test]
fn oracle_ignores_vertex_order_on_the_cube() {
    let p = cube(4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let order = shuffled(&mut rng, p.num_vertices());
        assert_eq!(oracle_volume_by_triangulation(&p, &order).unwrap(), qi(24));
    }
}

#[test]
fn lower_dimensional_polytopes_agree() {
    // a quadrilateral in a plane of Q^4
    let p = from_points(vec![
        vec![qi(0), qi(0), qi(0), qi(1)],
        vec![qi(2), qi(1), qi(0), qi(1)],
        vec![qi(1), qi(3), q(1, 2), qi(1)],
        vec![qi(-1), qi(2), q(1, 2), qi(1)],
    ]);
    assert_eq!(p.dim, 2);
    let order: Vec<usize> = (0..4).collect();
    assert_eq!(
        descend(&p).unwrap().lattice_volume,
        oracle_volume_by_triangulation(&p, &order).unwrap()
    );
}

#[test]
fn oracle_bounds_can_be_raised() {
    let p = cube(7);
    let order: Vec<usize> = (0..p.num_vertices()).collect();
    assert!(oracle_volume_by_triangulation(&p, &order).is_err());
    let bounds = OracleBounds {
        max_dim: 8,
        max_vertices: 128,
    };
    assert_eq!(
        oracle_volume_bounded(&p, &order, bounds).unwrap(),
        Rat::from_integer(factorial(7))
    );
}

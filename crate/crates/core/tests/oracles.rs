mod common;

use common::oracle::{self, ext1_dim, hull_morphisms, lifting_classes, Presented, TestRing};
use common::{corpus, univariate};

#[test]
fn liftings_of_dual_numbers_by_hand() {
    let f = oracle::field();
    // k[x]/(x²) → k[t]/(t³): x ↦ c₂t², five liftings, trivial gauge action
    let a = univariate(f, &[0, 0, 1]);
    let p = Presented::new(&a, &["x"]);
    assert_eq!(lifting_classes(&p, &TestRing::truncated(1, 3)), 5);
    assert_eq!(lifting_classes(&p, &TestRing::truncated(1, 2)), 5);
    // k[x]/(x³) → k[t]/(t³): any c₁t + c₂t²
    let a = univariate(f, &[0, 0, 0, 1]);
    let p = Presented::new(&a, &["x"]);
    assert_eq!(lifting_classes(&p, &TestRing::truncated(1, 3)), 25);
}

#[test]
fn semisimple_liftings_are_rigid() {
    let f = oracle::field();
    let e = &corpus(f)[1];
    let p = Presented::new(&e.algebra, &e.generators);
    for ring in TestRing::for_points(2) {
        assert_eq!(lifting_classes(&p, &ring), 1, "{}", ring.name);
    }
}

#[test]
fn ext_oracle_by_hand() {
    let f = oracle::field();
    let e = &corpus(f)[4];
    let p = Presented::new(&e.algebra, &e.generators);
    let dims: Vec<usize> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| ext1_dim(&p, i, j)).collect();
    assert_eq!(dims.iter().sum::<usize>(), 1);
    let p = Presented::new(&univariate(f, &[0, 0, 1]), &["x"]);
    assert_eq!(ext1_dim(&p, 0, 0), 1);
}

#[test]
fn morphisms_from_free_hull() {
    use aspec_core::hull::hull;
    use aspec_core::module::simple_modules;
    let f = oracle::field();
    let a = univariate(f, &[0, 0, 0, 1]);
    let s = simple_modules(&a).unwrap();
    let (tower, _) = hull(&a, &s, 3).unwrap();
    assert_eq!(hull_morphisms(tower.top(), &TestRing::truncated(1, 3)), 25);
    assert_eq!(hull_morphisms(tower.top(), &TestRing::truncated(1, 2)), 5);
}

#[test]
fn corpus_counts_are_not_trivial() {
    use aspec_core::hull::{default_order, hull};
    use aspec_core::module::simple_modules;
    let f = oracle::field();
    let expect = [("A₂", 2, 5), ("A₃/(ab)", 2, 25), ("k[x]/(x³)", 1, 25), ("T₂", 2, 5)];
    for e in corpus(f) {
        let Some(&(_, ring_index, count)) = expect.iter().find(|x| x.0 == e.name) else { continue };
        let s = simple_modules(&e.algebra).unwrap();
        let ring = TestRing::for_points(s.len()).remove(ring_index);
        let p = Presented::new(&e.algebra, &e.generators);
        assert_eq!(lifting_classes(&p, &ring), count, "{} over {}", e.name, ring.name);
        let (tower, _) = hull(&e.algebra, &s, default_order(&e.algebra).unwrap().max(3)).unwrap();
        assert_eq!(hull_morphisms(tower.top(), &ring), count, "{}", e.name);
    }
}

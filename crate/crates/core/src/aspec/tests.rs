use super::*;
use crate::algebra::{AlgebraMap, QuiverPresentation};
use crate::polyline::from_univariate;
use crate::poly::Poly;

fn q() -> Field {
    Field::Rational
}

fn uni(c: &[i64]) -> Arc<Algebra> {
    Arc::new(from_univariate(&Poly::from_ints(q(), c)).unwrap())
}

fn a2() -> Arc<Algebra> {
    let qp = QuiverPresentation::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
    Arc::new(Algebra::from_quiver(&qp).unwrap())
}

fn kxk() -> Arc<Algebra> {
    let k = Algebra::ground(q());
    Arc::new(Algebra::product(&k, &k).unwrap())
}

#[test]
fn topology_generation() {
    let t = generate_topology(2, &[0b01]);
    assert_eq!(t, vec![0, 0b01, 0b11]);
    let t = generate_topology(3, &[0b011, 0b110]);
    assert_eq!(t, vec![0, 0b010, 0b011, 0b110, 0b111]);
}

#[test]
fn idempotent_algebra_points() {
    // k[x]/(x² − x)
    let a = uni(&[0, -1, 1]);
    let x = ASpecSpace::of_simples(&a).unwrap();
    assert_eq!(x.points().len(), 2);
    let xe = a.parse_element("x").unwrap();
    let d = x.d_set(&xe);
    assert_eq!(d.count_ones(), 1);
    let p = members(d)[0];
    assert!(acts_injectively(&x.points()[p].module, &xe));
    assert_eq!(x.opens().len(), 4);
    assert_eq!(x.closed_points(), vec![0, 1]);
}

#[test]
fn product_is_discrete_and_sheafy() {
    let x = ASpecSpace::of_simples(&kxk()).unwrap();
    assert_eq!(x.opens().len(), 4);
    let r = x.sheafify_check().unwrap();
    assert!(r.holds(), "{:?}", r.failures);
    assert!(x.presheaf_check().unwrap().holds());
    assert_eq!(x.sections(x.full()).unwrap().dim(), 2);
    assert_eq!(x.sheaf_sections(x.full()).unwrap().dim(), 2);
    assert!(x.restrictions_compose().unwrap());
}

#[test]
fn a2_presheaf_versus_sheaf() {
    let x = ASpecSpace::of_simples(&a2()).unwrap();
    assert_eq!(x.opens().len(), 4);
    assert_eq!(x.sections(x.full()).unwrap().dim(), 3);
    assert_eq!(x.sheaf_sections(x.full()).unwrap().dim(), 2);
    assert!(x.sheafify_check().unwrap().holds());
    let pre = x.presheaf_check().unwrap();
    assert!(!pre.holds());
    assert!(pre.failures.iter().any(|s| s.starts_with("locality")));
    let st = x.stalk(x.full()).unwrap();
    assert_eq!(st.stalk.dim(), 3);
    assert!(st.bijective);
    let s1 = x.stalk(1).unwrap();
    assert_eq!(s1.stalk.dim(), 1);
}

#[test]
fn local_stalks() {
    let x = ASpecSpace::of_simples(&uni(&[0, 0, 1])).unwrap();
    assert_eq!(x.points().len(), 1);
    let st = x.stalk(1).unwrap();
    assert_eq!(st.stalk.dim(), 2);
    assert!(st.bijective);
}

#[test]
fn spec_agrees() {
    for a in [uni(&[0, -1, 1]), uni(&[0, 0, 1]), uni(&[-1, 0, 0, 1]), kxk()] {
        let c = spec_compare(&a).unwrap();
        assert!(c.agrees(), "{c:?}");
        assert!(c.discrete);
    }
    assert!(spec_compare(&a2()).is_err());
}

#[test]
fn roundtrips() {
    for a in [a2(), kxk(), uni(&[0, 0, 1]), uni(&[0, -1, 1])] {
        let x = ASpecSpace::of_simples(&a).unwrap();
        let r = global_sections_roundtrip(&x).unwrap();
        assert!(r.holds(), "{r:?}");
    }
    let x = ASpecSpace::of_simples(&a2()).unwrap();
    let r = global_sections_roundtrip(&x).unwrap();
    assert_eq!(r.presheaf.global_dim, 3);
    assert_eq!(r.sheaf.global_dim, 2);
}

#[test]
fn morphisms() {
    let k = Arc::new(Algebra::ground(q()));
    let p = kxk();
    // k → k × k
    let phi = AlgebraMap { images: vec![p.unit().clone()] };
    let x = ASpecSpace::of_simples(&p).unwrap();
    let y = ASpecSpace::of_simples(&k).unwrap();
    let r = aspec_morphism(&phi, &x, &y).unwrap();
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.point_map, vec![Some(0), Some(0)]);
    // k[x]/x² → k
    let b = uni(&[0, 0, 1]);
    let phi = AlgebraMap { images: vec![k.unit().clone(), vec![q().zero()]] };
    let x = ASpecSpace::of_simples(&k).unwrap();
    let y = ASpecSpace::of_simples(&b).unwrap();
    let r = aspec_morphism(&phi, &x, &y).unwrap();
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.point_map, vec![Some(0)]);
}

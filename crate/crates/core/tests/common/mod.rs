#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use aspec_core::algebra::{Algebra, QuiverPresentation, DEFAULT_DEGREE_BOUND};
use aspec_core::poly::Poly;
use aspec_core::polyline::from_univariate;
use aspec_core::Field;

pub struct Entry {
    pub name: &'static str,
    pub algebra: Arc<Algebra>,
    /// Basis labels generating the algebra, used by the brute-force oracles.
    pub generators: Vec<&'static str>,
}

fn quiver(f: Field, vertices: &[&str], arrows: &[(&str, &str, &str)], relation: Option<&str>) -> Arc<Algebra> {
    let mut q = QuiverPresentation::new(vertices, arrows).unwrap();
    if let Some(r) = relation {
        q = q.with_relation(&[(f.one(), r)]).unwrap();
    }
    Arc::new(Algebra::from_quiver_over(f, &q, DEFAULT_DEGREE_BOUND).unwrap())
}

pub fn univariate(f: Field, coeffs: &[i64]) -> Arc<Algebra> {
    Arc::new(from_univariate(&Poly::from_ints(f, coeffs)).unwrap())
}

pub fn ground(f: Field) -> Arc<Algebra> {
    Arc::new(Algebra::ground(f))
}

pub fn k_times_k(f: Field) -> Arc<Algebra> {
    Arc::new(Algebra::product(&Algebra::ground(f), &Algebra::ground(f)).unwrap())
}

pub fn a2(f: Field) -> Arc<Algebra> {
    quiver(f, &["1", "2"], &[("a", "1", "2")], None)
}

pub fn a3_zero(f: Field) -> Arc<Algebra> {
    quiver(f, &["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], Some("a*b"))
}

/// Lower-triangular 2×2 matrices on the basis `e11, e22, e21`.
pub fn lower_triangular(f: Field) -> Arc<Algebra> {
    let idx = |i: usize, j: usize| match (i, j) {
        (1, 1) => 0,
        (2, 2) => 1,
        (2, 1) => 2,
        _ => unreachable!(),
    };
    let units = [(1, 1), (2, 2), (2, 1)];
    let mut table = vec![vec![vec![f.zero(); 3]; 3]; 3];
    for &(i, j) in &units {
        for &(k, l) in &units {
            if j == k {
                table[idx(i, j)][idx(k, l)][idx(i, l)] = f.one();
            }
        }
    }
    let unit = vec![f.one(), f.one(), f.zero()];
    let labels = vec!["e11".into(), "e22".into(), "e21".into()];
    Arc::new(Algebra::from_structure_constants(f, labels, table, unit).unwrap())
}

pub fn cyclotomic(f: Field) -> Arc<Algebra> {
    univariate(f, &[-1, 0, 0, 1])
}

/// The fin-dim corpus.
pub fn corpus(f: Field) -> Vec<Entry> {
    vec![
        Entry { name: "k", algebra: ground(f), generators: vec![] },
        Entry { name: "k×k", algebra: k_times_k(f), generators: vec!["1.1"] },
        Entry { name: "k[x]/(x²)", algebra: univariate(f, &[0, 0, 1]), generators: vec!["x"] },
        Entry { name: "k[x]/(x³)", algebra: univariate(f, &[0, 0, 0, 1]), generators: vec!["x"] },
        Entry { name: "A₂", algebra: a2(f), generators: vec!["e1", "a"] },
        Entry { name: "A₃/(ab)", algebra: a3_zero(f), generators: vec!["e1", "e2", "a", "b"] },
        Entry { name: "k[x]/(x²−x)", algebra: univariate(f, &[0, -1, 1]), generators: vec!["x"] },
        Entry { name: "T₂", algebra: lower_triangular(f), generators: vec!["e11", "e21"] },
    ]
}

/// Commutative members plus `ℚ[x]/(x³−1)`.
pub fn commutative_corpus() -> Vec<(&'static str, Arc<Algebra>)> {
    let f = Field::Rational;
    let mut out: Vec<(&'static str, Arc<Algebra>)> = corpus(f)
        .into_iter()
        .filter(|e| e.algebra.is_commutative())
        .map(|e| (e.name, e.algebra))
        .collect();
    out.push(("ℚ[x]/(x³−1)", cyclotomic(f)));
    out
}

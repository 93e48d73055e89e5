//! Fixed algebras shared by the benchmarks.

use std::sync::Arc;

use aspec_core::algebra::{Algebra, QuiverPresentation};
use aspec_core::poly::Poly;
use aspec_core::polyline::from_univariate;
use aspec_core::Field;

/// `k[x]/(x^n)`.
pub fn truncated(f: Field, n: usize) -> Arc<Algebra> {
    let mut c = vec![0; n + 1];
    c[n] = 1;
    Arc::new(from_univariate(&Poly::from_ints(f, &c)).unwrap())
}

/// Path algebra of the linear quiver `1 → 2 → … → n`.
pub fn linear_quiver(n: usize) -> Arc<Algebra> {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows: Vec<(String, String, String)> =
        (1..n).map(|i| (format!("a{i}"), names[i - 1].clone(), names[i].clone())).collect();
    let v: Vec<&str> = names.iter().map(String::as_str).collect();
    let a: Vec<(&str, &str, &str)> = arrows.iter().map(|(x, s, t)| (x.as_str(), s.as_str(), t.as_str())).collect();
    Arc::new(Algebra::from_quiver(&QuiverPresentation::new(&v, &a).unwrap()).unwrap())
}

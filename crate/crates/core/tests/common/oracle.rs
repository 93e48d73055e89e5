//! Brute-force enumerations over `𝔽₅`, independent of the hull machinery.

use std::collections::HashSet;

use aspec_core::algebra::Algebra;
use aspec_core::hull::RPointedAlgebra;
use aspec_core::linalg::{kernel_basis, Mat};
use aspec_core::module::simple_modules;
use aspec_core::{Field, Scalar};
use std::sync::Arc;

pub const P: u32 = 5;

pub fn field() -> Field {
    Field::Prime(P)
}

fn val(s: &Scalar) -> u32 {
    match s {
        Scalar::Mod(v, _) => *v,
        Scalar::Rat(_) => panic!("oracle works over 𝔽₅"),
    }
}

fn add(a: u32, b: u32) -> u32 {
    (a + b) % P
}

fn mul(a: u32, b: u32) -> u32 {
    a * b % P
}

fn neg(a: u32) -> u32 {
    (P - a) % P
}

/// All coefficient tuples of length `n`.
fn tuples(n: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (P as usize).pow(n as u32);
    (0..total).map(move |mut k| {
        (0..n)
            .map(|_| {
                let d = (k % P as usize) as u32;
                k /= P as usize;
                d
            })
            .collect()
    })
}

/// A finite r-pointed test ring with a monomial basis: `r` idempotents, then
/// radical elements tagged by `(source, target)`.
pub struct TestRing {
    pub name: String,
    pub r: usize,
    pub rad: Vec<(usize, usize)>,
    table: Vec<Vec<Option<usize>>>,
}

impl TestRing {
    pub fn dim(&self) -> usize {
        self.r + self.rad.len()
    }

    /// `k^r ⊗ k[t]/(t^n)`.
    pub fn truncated(r: usize, n: usize) -> TestRing {
        let deg = n - 1;
        let idx = |i: usize, k: usize| r + i * deg + (k - 1);
        let dim = r + r * deg;
        let mut table = vec![vec![None; dim]; dim];
        let mut rad = Vec::new();
        for i in 0..r {
            for _ in 1..n {
                rad.push((i, i));
            }
        }
        for i in 0..r {
            table[i][i] = Some(i);
            for k in 1..n {
                table[i][idx(i, k)] = Some(idx(i, k));
                table[idx(i, k)][i] = Some(idx(i, k));
                for l in 1..n {
                    if k + l < n {
                        table[idx(i, k)][idx(i, l)] = Some(idx(i, k + l));
                    }
                }
            }
        }
        TestRing { name: format!("k^{r}⊗k[t]/(t^{n})"), r, rad, table }
    }

    /// `k^r` plus square-zero off-diagonal elements `n_ij`, `i ≠ j`.
    pub fn off_diagonal(r: usize) -> TestRing {
        let mut rad = Vec::new();
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    rad.push((i, j));
                }
            }
        }
        let dim = r + rad.len();
        let mut table = vec![vec![None; dim]; dim];
        for i in 0..r {
            table[i][i] = Some(i);
            for (k, &(s, t)) in rad.iter().enumerate() {
                if s == i {
                    table[i][r + k] = Some(r + k);
                }
                if t == i {
                    table[r + k][i] = Some(r + k);
                }
            }
        }
        TestRing { name: format!("k^{r}⊕off-diagonal"), r, rad, table }
    }

    /// The test objects used for `r` simples.
    pub fn for_points(r: usize) -> Vec<TestRing> {
        let mut out = vec![TestRing::truncated(r, 2), TestRing::truncated(r, 3)];
        if r >= 2 {
            out.push(TestRing::off_diagonal(r));
        }
        out
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.dim()];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb == 0 {
                    continue;
                }
                if let Some(c) = self.table[a][b] {
                    out[c] = add(out[c], mul(xa, yb));
                }
            }
        }
        out
    }

    fn one(&self) -> Vec<u32> {
        (0..self.dim()).map(|i| u32::from(i < self.r)).collect()
    }

    fn diagonal(&self, chars: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[..self.r].copy_from_slice(chars);
        v
    }

    fn with_radical(&self, base: &[u32], coeffs: &[u32], which: &[usize]) -> Vec<u32> {
        let mut v = base.to_vec();
        for (c, &k) in coeffs.iter().zip(which) {
            v[self.r + k] = add(v[self.r + k], *c);
        }
        v
    }

    fn inverse_unipotent(&self, u: &[u32]) -> Vec<u32> {
        // u = 1 + y with y nilpotent
        let one = self.one();
        let y: Vec<u32> = u.iter().zip(&one).map(|(a, b)| add(*a, neg(*b))).collect();
        let minus_y: Vec<u32> = y.iter().map(|&a| neg(a)).collect();
        let mut term = one.clone();
        let mut acc = one;
        loop {
            term = self.mul(&term, &minus_y);
            if term.iter().all(|&c| c == 0) {
                return acc;
            }
            acc = acc.iter().zip(&term).map(|(a, b)| add(*a, *b)).collect();
        }
    }
}

/// A presentation of an algebra by generators, with the linear relations
/// among words of bounded length.
pub struct Presented {
    pub r: usize,
    /// `chars[g][i]`: action of generator `g` on the simple `S_i`.
    chars: Vec<Vec<u32>>,
    /// `sandwich[g]`: for each idempotent generator `f`, whether `f·g` and
    /// `g·f` equal `g` (`Some(true)`), vanish (`Some(false)`) or neither.
    sandwich: Vec<Vec<(usize, Option<bool>, Option<bool>)>>,
    idempotent: Vec<bool>,
    /// Words in the generators, each extending an earlier one by one letter.
    words: Vec<(Option<usize>, usize)>,
    kernel: Vec<Vec<u32>>,
}

const WORD_LEN: usize = 4;

impl Presented {
    pub fn new(a: &Arc<Algebra>, generators: &[&str]) -> Presented {
        let f = a.field();
        let gens: Vec<Vec<Scalar>> = generators.iter().map(|l| a.parse_element(l).unwrap()).collect();
        let simples = simple_modules(a).unwrap();
        assert!(simples.iter().all(|s| s.dim() == 1), "oracle needs one-dimensional simples");
        let chars: Vec<Vec<u32>> =
            gens.iter().map(|g| simples.iter().map(|s| val(s.action_of(g).get(0, 0))).collect()).collect();
        let idempotent: Vec<bool> = gens.iter().map(|g| a.mul(g, g) == *g).collect();
        let zero = a.zero();
        let sandwich = gens
            .iter()
            .map(|g| {
                gens.iter()
                    .enumerate()
                    .filter(|(k, _)| idempotent[*k])
                    .map(|(k, e)| {
                        let side = |p: Vec<Scalar>| {
                            if p == *g {
                                Some(true)
                            } else if p == zero {
                                Some(false)
                            } else {
                                None
                            }
                        };
                        (k, side(a.mul(e, g)), side(a.mul(g, e)))
                    })
                    .collect()
            })
            .collect();
        // words: empty word, then one letter at a time
        let mut words: Vec<(Option<usize>, usize)> = vec![(None, usize::MAX)];
        let mut values = vec![a.unit().clone()];
        let mut layer = vec![0usize];
        for _ in 0..WORD_LEN {
            let mut next = Vec::new();
            for &w in &layer {
                for (g, gv) in gens.iter().enumerate() {
                    words.push((Some(w), g));
                    values.push(a.mul(&values[w], gv));
                    next.push(words.len() - 1);
                }
            }
            layer = next;
        }
        let m = Mat::from_cols(f, a.dim(), &values).unwrap();
        let kernel = kernel_basis(&m).iter().map(|v| v.iter().map(val).collect()).collect();
        Presented { r: simples.len(), chars, sandwich, idempotent, words, kernel }
    }

    /// Do the generator images satisfy every relation, given `eval(word values)`?
    fn satisfies<T: Clone>(&self, images: &[T], one: T, mul: impl Fn(&T, &T) -> T, check: impl Fn(&[(u32, &T)]) -> bool) -> bool {
        let mut values: Vec<T> = Vec::with_capacity(self.words.len());
        values.push(one);
        for &(prefix, g) in &self.words[1..] {
            let v = mul(&values[prefix.unwrap()], &images[g]);
            values.push(v);
        }
        self.kernel.iter().all(|c| {
            let terms: Vec<(u32, &T)> = c.iter().zip(&values).filter(|(c, _)| **c != 0).map(|(c, v)| (*c, v)).collect();
            check(&terms)
        })
    }
}

/// Gauge classes of liftings of the simples to `R`.
///
/// Idempotent generators are sent to their standard lifts, and the gauge
/// group shrinks to its stabilizer; every lifting is conjugate into this
/// slice because orthogonal idempotents lift uniquely up to conjugation.
pub fn lifting_classes(p: &Presented, ring: &TestRing) -> usize {
    assert_eq!(p.r, ring.r);
    let all_rad: Vec<usize> = (0..ring.rad.len()).collect();
    let fixed: Vec<Option<Vec<u32>>> =
        p.chars.iter().zip(&p.idempotent).map(|(c, &i)| if i { Some(ring.diagonal(c)) } else { None }).collect();
    let candidates: Vec<Vec<Vec<u32>>> = p
        .chars
        .iter()
        .enumerate()
        .map(|(g, c)| {
            if let Some(v) = &fixed[g] {
                return vec![v.clone()];
            }
            let base = ring.diagonal(c);
            tuples(all_rad.len())
                .map(|t| ring.with_radical(&base, &t, &all_rad))
                .filter(|v| {
                    p.sandwich[g].iter().all(|(e, left, right)| {
                        let ev = fixed[*e].as_ref().unwrap();
                        let ok = |prod: Vec<u32>, keep: Option<bool>| match keep {
                            Some(true) => prod == *v,
                            Some(false) => prod.iter().all(|&x| x == 0),
                            None => true,
                        };
                        ok(ring.mul(ev, v), *left) && ok(ring.mul(v, ev), *right)
                    })
                })
                .collect()
        })
        .collect();
    let mut liftings: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut choice = vec![0usize; candidates.len()];
    if candidates.iter().any(Vec::is_empty) {
        return 0;
    }
    loop {
        let images: Vec<Vec<u32>> = choice.iter().zip(&candidates).map(|(&k, c)| c[k].clone()).collect();
        let ok = p.satisfies(&images, ring.one(), |x, y| ring.mul(x, y), |terms| {
            let mut acc = vec![0; ring.dim()];
            for (c, v) in terms {
                for (a, b) in acc.iter_mut().zip(v.iter()) {
                    *a = add(*a, mul(*c, *b));
                }
            }
            acc.iter().all(|&x| x == 0)
        });
        if ok {
            liftings.push(images);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return count_orbits(ring, &fixed, liftings);
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn count_orbits(ring: &TestRing, fixed: &[Option<Vec<u32>>], liftings: Vec<Vec<Vec<u32>>>) -> usize {
    let all_rad: Vec<usize> = (0..ring.rad.len()).collect();
    let one = ring.one();
    let group: Vec<(Vec<u32>, Vec<u32>)> = tuples(all_rad.len())
        .map(|t| ring.with_radical(&one, &t, &all_rad))
        .filter(|u| fixed.iter().flatten().all(|e| ring.mul(u, e) == ring.mul(e, u)))
        .map(|u| {
            let inv = ring.inverse_unipotent(&u);
            (u, inv)
        })
        .collect();
    let mut canon = HashSet::new();
    for l in liftings {
        let best = group
            .iter()
            .map(|(u, inv)| l.iter().map(|x| ring.mul(&ring.mul(u, x), inv)).collect::<Vec<_>>())
            .min()
            .unwrap();
        canon.insert(best);
    }
    canon.len()
}

/// r-pointed morphisms `H → R` from a truncated hull.
pub fn hull_morphisms(h: &RPointedAlgebra, ring: &TestRing) -> usize {
    assert_eq!(h.r(), ring.r);
    let words = h.words();
    let gens = h.generators();
    let candidates: Vec<Vec<Vec<u32>>> = gens
        .iter()
        .map(|g| {
            let which: Vec<usize> = ring.rad.iter().enumerate().filter(|(_, st)| **st == (g.source, g.target)).map(|(k, _)| k).collect();
            let zero = vec![0; ring.dim()];
            tuples(which.len()).map(|t| ring.with_radical(&zero, &t, &which)).collect()
        })
        .collect();
    let relations: Vec<Vec<u32>> = h.ideal().basis().iter().map(|v| v.iter().map(val).collect()).collect();
    let mut count = 0;
    let mut choice = vec![0usize; candidates.len()];
    loop {
        let images: Vec<&Vec<u32>> = choice.iter().zip(&candidates).map(|(&k, c)| &c[k]).collect();
        let word_value = |w: usize| {
            let letters = words.word(w);
            let mut acc = images[letters[0]].clone();
            for &l in &letters[1..] {
                acc = ring.mul(&acc, images[l]);
            }
            acc
        };
        let values: Vec<Vec<u32>> = (0..words.len()).map(word_value).collect();
        let kills = relations.iter().all(|rel| {
            let mut acc = vec![0; ring.dim()];
            for (c, v) in rel.iter().zip(&values) {
                if *c != 0 {
                    for (a, b) in acc.iter_mut().zip(v) {
                        *a = add(*a, mul(*c, *b));
                    }
                }
            }
            acc.iter().all(|&x| x == 0)
        });
        if kills {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return count;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

type M2 = [u32; 4];

fn m2_mul(x: &M2, y: &M2) -> M2 {
    [
        add(mul(x[0], y[0]), mul(x[1], y[2])),
        add(mul(x[0], y[1]), mul(x[1], y[3])),
        add(mul(x[2], y[0]), mul(x[3], y[2])),
        add(mul(x[2], y[1]), mul(x[3], y[3])),
    ]
}

/// `dim Ext¹(S_i, S_j)` by enumerating upper-triangular extension modules
/// `[[χ_i, ψ], [0, χ_j]]` up to equivalence.
pub fn ext1_dim(p: &Presented, i: usize, j: usize) -> usize {
    let n = p.chars.len();
    let mut classes = HashSet::new();
    for psi in tuples(n) {
        let images: Vec<M2> = (0..n).map(|g| [p.chars[g][i], psi[g], 0, p.chars[g][j]]).collect();
        let ok = p.satisfies(&images, [1, 0, 0, 1], m2_mul, |terms| {
            let mut acc = [0u32; 4];
            for (c, m) in terms {
                for k in 0..4 {
                    acc[k] = add(acc[k], mul(*c, m[k]));
                }
            }
            acc == [0; 4]
        });
        if !ok {
            continue;
        }
        // conjugation by [[1, φ], [0, 1]] shifts ψ_g by φ(χ_j(g) − χ_i(g))
        let canon = (0..P)
            .map(|phi| {
                (0..n)
                    .map(|g| add(psi[g], mul(phi, add(p.chars[g][j], neg(p.chars[g][i])))))
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap();
        classes.insert(canon);
    }
    let mut count = classes.len();
    let mut d = 0;
    while count > 1 {
        assert_eq!(count % P as usize, 0, "extension count is a power of {P}");
        count /= P as usize;
        d += 1;
    }
    d
}

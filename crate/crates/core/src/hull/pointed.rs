//! Truncated r-pointed algebras `k^r⟨generators⟩ / (J + 𝔪^{N+1})`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{format_combination, Algebra};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{self, Subspace, Vector};

/// A generator of bidegree `(source, target)`, dual to an `Ext¹` class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullGenerator {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// All composable nonempty words of length at most `max_len`, ordered by
/// length and then lexicographically.
#[derive(Clone, Debug)]
pub struct WordBasis {
    r: usize,
    generators: Vec<HullGenerator>,
    max_len: usize,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

pub const WORD_CAP: usize = 20_000;

impl WordBasis {
    pub fn new(r: usize, generators: Vec<HullGenerator>, max_len: usize) -> Result<WordBasis> {
        if let Some(g) = generators.iter().find(|g| g.source >= r || g.target >= r) {
            return Err(Error::InvalidArgument(format!("generator {} has an endpoint outside 0..{r}", g.label)));
        }
        let mut words: Vec<Vec<usize>> = Vec::new();
        let mut layer: Vec<Vec<usize>> = (0..generators.len()).map(|g| vec![g]).collect();
        for _ in 0..max_len {
            if layer.is_empty() {
                break;
            }
            words.extend(layer.iter().cloned());
            if words.len() > WORD_CAP {
                return Err(Error::InfiniteDimensional(WORD_CAP));
            }
            let mut next = Vec::new();
            for w in &layer {
                let end = generators[*w.last().unwrap()].target;
                for (g, gen) in generators.iter().enumerate() {
                    if gen.source == end {
                        let mut v = w.clone();
                        v.push(g);
                        next.push(v);
                    }
                }
            }
            layer = next;
        }
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Ok(WordBasis { r, generators, max_len, words, index })
    }

    pub fn r(&self) -> usize {
        self.r
    }
    pub fn generators(&self) -> &[HullGenerator] {
        &self.generators
    }
    pub fn max_len(&self) -> usize {
        self.max_len
    }
    pub fn len(&self) -> usize {
        self.words.len()
    }
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }
    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }
    pub fn length(&self, i: usize) -> usize {
        self.words[i].len()
    }
    pub fn source(&self, i: usize) -> usize {
        self.generators[self.words[i][0]].source
    }
    pub fn target(&self, i: usize) -> usize {
        self.generators[*self.words[i].last().unwrap()].target
    }

    /// Index of the concatenation, if composable and short enough.
    pub fn concat(&self, i: usize, j: usize) -> Option<usize> {
        if self.target(i) != self.source(j) || self.length(i) + self.length(j) > self.max_len {
            return None;
        }
        let mut w = self.words[i].clone();
        w.extend_from_slice(&self.words[j]);
        self.index_of(&w)
    }

    /// Pivot priority for normal forms: longest words are eliminated first.
    pub fn priority(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(self.length(i)), i));
        order
    }

    pub fn longer_than(&self, n: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.length(i) > n).collect()
    }

    /// `t1*t2^2` style label.
    pub fn label(&self, i: usize) -> String {
        let w = &self.words[i];
        let mut parts: Vec<String> = Vec::new();
        let mut k = 0;
        while k < w.len() {
            let mut run = 1;
            while k + run < w.len() && w[k + run] == w[k] {
                run += 1;
            }
            let name = &self.generators[w[k]].label;
            parts.push(if run == 1 { name.clone() } else { format!("{name}^{run}") });
            k += run;
        }
        parts.join("*")
    }

    /// `g·v` or `v·g` for a word-space vector `v`, truncated.
    pub fn mul_generator(&self, field: Field, g: usize, v: &[Scalar], left: bool) -> Vector {
        let gw = self.index_of(&[g]).expect("generator word");
        let mut out = linalg::zero_vec(field, self.len());
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let prod = if left { self.concat(gw, i) } else { self.concat(i, gw) };
            if let Some(k) = prod {
                out[k] = &out[k] + c;
            }
        }
        out
    }

    /// `𝔪·S + S·𝔪` for a subspace `S` of the word space.
    pub fn two_sided_shift(&self, field: Field, s: &Subspace) -> Vec<Vector> {
        let mut out = Vec::new();
        for v in s.basis() {
            for g in 0..self.generators.len() {
                out.push(self.mul_generator(field, g, v, true));
                out.push(self.mul_generator(field, g, v, false));
            }
        }
        out
    }

    pub fn subspace(&self, field: Field, vectors: &[Vector]) -> Subspace {
        Subspace::with_order(field, self.len(), self.priority(), vectors).expect("word-space vectors")
    }
}

/// Stage `n` of a hull: `k^r ⊕ (word space)/ideal`, where the ideal contains
/// every word longer than `order`. Elements are vectors of length `r + #words`
/// with the `k^r` part first.
#[derive(Clone, Debug)]
pub struct RPointedAlgebra {
    field: Field,
    words: Arc<WordBasis>,
    order: usize,
    ideal: Subspace,
}

impl RPointedAlgebra {
    pub fn new(field: Field, words: Arc<WordBasis>, order: usize, ideal: Subspace) -> Result<RPointedAlgebra> {
        let long = words.longer_than(order);
        if long.iter().any(|&i| !ideal.contains(&linalg::unit_vec(field, words.len(), i))) {
            return Err(Error::InvalidArgument("relation ideal must contain all words beyond the truncation order".into()));
        }
        let h = RPointedAlgebra { field, words, order, ideal };
        if !h.ideal_is_two_sided() {
            return Err(Error::InvalidArgument("relations do not span a two-sided ideal".into()));
        }
        Ok(h)
    }

    /// The free truncated algebra with no relations.
    pub fn free(field: Field, words: Arc<WordBasis>, order: usize) -> RPointedAlgebra {
        let long: Vec<Vector> = words.longer_than(order).into_iter().map(|i| linalg::unit_vec(field, words.len(), i)).collect();
        let ideal = words.subspace(field, &long);
        RPointedAlgebra { field, words, order, ideal }
    }

    fn ideal_is_two_sided(&self) -> bool {
        self.words.two_sided_shift(self.field, &self.ideal).iter().all(|v| self.ideal.contains(v))
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn r(&self) -> usize {
        self.words.r()
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn words(&self) -> &Arc<WordBasis> {
        &self.words
    }
    pub fn generators(&self) -> &[HullGenerator] {
        self.words.generators()
    }
    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }
    pub fn ambient_dim(&self) -> usize {
        self.r() + self.words.len()
    }

    /// Words that survive as basis monomials.
    pub fn standard_words(&self) -> Vec<usize> {
        let piv = self.ideal.pivots();
        (0..self.words.len()).filter(|i| !piv.contains(i)).collect()
    }

    pub fn dim(&self) -> usize {
        self.r() + self.words.len() - self.ideal.dim()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = (0..self.r()).map(|i| format!("e{}", i + 1)).collect();
        out.extend(self.standard_words().into_iter().map(|w| self.words.label(w)));
        out
    }

    pub fn unit(&self) -> Vector {
        let mut v = linalg::zero_vec(self.field, self.ambient_dim());
        for i in 0..self.r() {
            v[i] = self.field.one();
        }
        v
    }

    /// `ι(e_i)`.
    pub fn iota(&self, i: usize) -> Vector {
        linalg::unit_vec(self.field, self.ambient_dim(), i)
    }

    pub fn word_element(&self, w: usize) -> Vector {
        self.reduce(&linalg::unit_vec(self.field, self.ambient_dim(), self.r() + w))
    }

    pub fn reduce(&self, x: &[Scalar]) -> Vector {
        let r = self.r();
        let mut out = x[..r].to_vec();
        out.extend(self.ideal.reduce(&x[r..]));
        out
    }

    /// `π(x) ∈ k^r`.
    pub fn augmentation(&self, x: &[Scalar]) -> Vector {
        x[..self.r()].to_vec()
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let r = self.r();
        let w = &self.words;
        let mut out = linalg::zero_vec(self.field, self.ambient_dim());
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let idx = match (i < r, j < r) {
                    (true, true) => (i == j).then_some(i),
                    (true, false) => (w.source(j - r) == i).then_some(j),
                    (false, true) => (w.target(i - r) == j).then_some(i),
                    (false, false) => w.concat(i - r, j - r).map(|k| k + r),
                };
                if let Some(k) = idx {
                    out[k] = &out[k] + &(a * b);
                }
            }
        }
        self.reduce(&out)
    }

    /// Minimal relation generators: a basis of `J / (𝔪J + J𝔪)` in the
    /// truncation, as word-space normal forms.
    pub fn relations(&self) -> Vec<Vector> {
        let f = self.field;
        let mut k = self.words.two_sided_shift(f, &self.ideal);
        k.extend(self.words.longer_than(self.order).into_iter().map(|i| linalg::unit_vec(f, self.words.len(), i)));
        let ks = self.words.subspace(f, &k);
        let reduced: Vec<Vector> = self.ideal.basis().iter().map(|v| ks.reduce(v)).collect();
        self.words.subspace(f, &reduced).basis().to_vec()
    }

    pub fn format_word_vector(&self, v: &[Scalar]) -> String {
        let labels: Vec<String> = (0..self.words.len()).map(|i| self.words.label(i)).collect();
        format_combination(v, &labels)
    }

    pub fn format_element(&self, x: &[Scalar]) -> String {
        let mut labels: Vec<String> = (0..self.r()).map(|i| format!("e{}", i + 1)).collect();
        labels.extend((0..self.words.len()).map(|i| self.words.label(i)));
        format_combination(&self.reduce(x), &labels)
    }

    /// Inverse of `u + y` with `u = π(x)` invertible in `k^r` and `y ∈ 𝔪`,
    /// as the finite geometric series `Σ (−u⁻¹y)^k u⁻¹`.
    pub fn invert_unit(&self, x: &[Scalar]) -> Result<Vector> {
        let r = self.r();
        let f = self.field;
        let mut u_inv = linalg::zero_vec(f, self.ambient_dim());
        for i in 0..r {
            u_inv[i] = x[i].inv().ok_or_else(|| Error::NotUnit(format!("augmentation vanishes at point {}", i + 1)))?;
        }
        let mut y = self.reduce(x);
        for s in y.iter_mut().take(r) {
            *s = f.zero();
        }
        let step = linalg::scale_vec(&f.int(-1), &self.mul(&u_inv, &y));
        let mut term = u_inv.clone();
        let mut sum = u_inv.clone();
        for _ in 0..self.order {
            term = self.mul(&step, &term);
            sum = linalg::add_vec(&sum, &term);
        }
        Ok(self.reduce(&sum))
    }

    /// Coordinates in the basis `e_i, standard words`.
    pub fn coordinates(&self, x: &[Scalar]) -> Vector {
        let red = self.reduce(x);
        let r = self.r();
        let mut out = red[..r].to_vec();
        out.extend(self.standard_words().into_iter().map(|w| red[r + w].clone()));
        out
    }

    pub fn from_coordinates(&self, c: &[Scalar]) -> Vector {
        let r = self.r();
        let mut out = linalg::zero_vec(self.field, self.ambient_dim());
        out[..r].clone_from_slice(&c[..r]);
        for (k, w) in self.standard_words().into_iter().enumerate() {
            out[r + w] = c[r + k].clone();
        }
        out
    }

    /// The stage as a finite-dimensional algebra with vertex idempotents.
    pub fn to_algebra(&self) -> Result<Algebra> {
        let n = self.dim();
        let basis: Vec<Vector> = (0..n).map(|i| self.from_coordinates(&linalg::unit_vec(self.field, n, i))).collect();
        let table: Vec<Vec<Vector>> =
            basis.iter().map(|x| basis.iter().map(|y| self.coordinates(&self.mul(x, y))).collect()).collect();
        let unit = self.coordinates(&self.unit());
        let idem = (0..self.r()).map(|i| linalg::unit_vec(self.field, n, i)).collect();
        Algebra::from_structure_constants(self.field, self.basis_labels(), table, unit)?.with_idempotents(idem)
    }

    /// Whether `(ker π_{n−1})·𝔪 = 𝔪·(ker π_{n−1}) = 0` for `kernel ⊆` word space.
    pub fn kills_maximal_ideal(&self, kernel: &Subspace) -> bool {
        self.words.two_sided_shift(self.field, kernel).iter().all(|v| self.ideal.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_words(n: usize) -> Arc<WordBasis> {
        Arc::new(WordBasis::new(1, vec![HullGenerator { label: "t".into(), source: 0, target: 0 }], n).unwrap())
    }

    #[test]
    fn truncated_polynomial_ring() {
        let f = Field::Rational;
        let w = loop_words(3);
        assert_eq!(w.len(), 3);
        assert_eq!(w.label(2), "t^3");
        // k[t]/(t^3)
        let h = RPointedAlgebra::free(f, w.clone(), 2);
        assert_eq!(h.dim(), 3);
        let one_minus_t = linalg::sub_vec(&h.unit(), &h.word_element(0));
        let inv = h.invert_unit(&one_minus_t).unwrap();
        assert_eq!(h.format_element(&inv), "e1 + t + t^2");
        assert_eq!(h.mul(&inv, &one_minus_t), h.unit());
        assert!(h.relations().is_empty());
        let alg = h.to_algebra().unwrap();
        assert_eq!(alg.dim(), 3);
        assert!(matches!(h.invert_unit(&h.word_element(0)), Err(Error::NotUnit(_))));
    }

    #[test]
    fn relation_ideal_and_quiver_words() {
        let f = Field::Rational;
        let w = loop_words(3);
        let ideal = w.subspace(f, &[linalg::unit_vec(f, 3, 1), linalg::unit_vec(f, 3, 2)]);
        let h = RPointedAlgebra::new(f, w.clone(), 3, ideal).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.relations().len(), 1);
        assert_eq!(h.format_word_vector(&h.relations()[0]), "t^2");
        let bad = w.subspace(f, &[linalg::unit_vec(f, 3, 1)]);
        assert!(RPointedAlgebra::new(f, w, 3, bad).is_err());

        let gens = vec![
            HullGenerator { label: "t1".into(), source: 0, target: 1 },
            HullGenerator { label: "t2".into(), source: 1, target: 2 },
        ];
        let w = Arc::new(WordBasis::new(3, gens, 4).unwrap());
        assert_eq!(w.len(), 3);
        assert_eq!(w.label(2), "t1*t2");
        let h = RPointedAlgebra::free(f, w, 4);
        assert_eq!(h.dim(), 6);
        let x = linalg::add_vec(&h.unit(), &h.word_element(2));
        let y = h.invert_unit(&x).unwrap();
        assert_eq!(h.mul(&x, &y), h.unit());
        assert_eq!(h.mul(&y, &x), h.unit());
    }
}

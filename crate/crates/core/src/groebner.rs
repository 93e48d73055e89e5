//! Commutative polynomials in at most two variables with a degree-lex
//! Buchberger routine, enough to present `k[x]/I` and `k[x,y]/I`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Exponent pair `(deg x, deg y)`.
pub type Monomial = (u32, u32);

pub fn deglex(a: &Monomial, b: &Monomial) -> Ordering {
    (a.0 + a.1).cmp(&(b.0 + b.1)).then(a.0.cmp(&b.0))
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.0 <= b.0 && a.1 <= b.1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MPoly {
    pub fn zero(field: Field) -> MPoly {
        MPoly { field, terms: BTreeMap::new() }
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> MPoly {
        let mut p = MPoly::zero(field);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn monomial(field: Field, m: Monomial) -> MPoly {
        MPoly::from_terms(field, [(m, field.one())])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        let v = match self.terms.get(&m) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn leading(&self) -> Option<(Monomial, Scalar)> {
        self.terms.iter().max_by(|a, b| deglex(a.0, b.0)).map(|(m, c)| (*m, c.clone()))
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, &-c);
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term((m1.0 + m2.0, m1.1 + m2.1), &(c1 * c2));
            }
        }
        out
    }

    fn mul_term(&self, m: Monomial, c: &Scalar) -> MPoly {
        let mut out = MPoly::zero(self.field);
        for (m1, c1) in &self.terms {
            out.add_term((m1.0 + m.0, m1.1 + m.1), &(c1 * c));
        }
        out
    }

    fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) => self.mul_term((0, 0), &c.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Full reduction modulo `basis` (remainder has no term divisible by a
    /// leading monomial of the basis).
    pub fn reduce(&self, basis: &[MPoly]) -> MPoly {
        let mut p = self.clone();
        let mut rem = MPoly::zero(self.field);
        while let Some((lm, lc)) = p.leading() {
            let divisor = basis.iter().find(|g| g.leading().is_some_and(|(gm, _)| divides(&gm, &lm)));
            match divisor {
                Some(g) => {
                    let (gm, gc) = g.leading().unwrap();
                    let q = (lm.0 - gm.0, lm.1 - gm.1);
                    let c = &lc * &gc.inv().unwrap();
                    p = p.sub(&g.mul_term(q, &c));
                }
                None => {
                    rem.add_term(lm, &lc);
                    p.terms.remove(&lm);
                }
            }
        }
        rem
    }
}

/// Reduced Gröbner basis in degree-lex order.
pub fn groebner(gens: &[MPoly]) -> Vec<MPoly> {
    let mut g: Vec<MPoly> = gens.iter().filter(|p| !p.is_zero()).map(MPoly::monic).collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|i| (0..i).map(move |j| (j, i))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (mi, ci) = g[i].leading().unwrap();
        let (mj, cj) = g[j].leading().unwrap();
        let l = (mi.0.max(mj.0), mi.1.max(mj.1));
        let s = g[i]
            .mul_term((l.0 - mi.0, l.1 - mi.1), &ci.inv().unwrap())
            .sub(&g[j].mul_term((l.0 - mj.0, l.1 - mj.1), &cj.inv().unwrap()));
        let r = s.reduce(&g);
        if !r.is_zero() {
            let n = g.len();
            g.push(r.monic());
            pairs.extend((0..n).map(|k| (k, n)));
        }
    }
    // Minimalize and inter-reduce.
    let mut minimal: Vec<MPoly> = Vec::new();
    for (idx, p) in g.iter().enumerate() {
        let (m, _) = p.leading().unwrap();
        let redundant = g.iter().enumerate().any(|(k, q)| {
            let (qm, _) = q.leading().unwrap();
            k != idx && divides(&qm, &m) && (qm != m || k < idx)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut reduced = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<MPoly> = minimal.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, p)| p.clone()).collect();
        let (lm, lc) = minimal[i].leading().unwrap();
        let tail = {
            let mut t = minimal[i].clone();
            t.terms.remove(&lm);
            t
        };
        let mut p = tail.reduce(&others);
        p.add_term(lm, &lc);
        reduced.push(p.monic());
    }
    reduced.sort_by(|a, b| deglex(&a.leading().unwrap().0, &b.leading().unwrap().0));
    reduced
}

/// Monomials not divisible by any leading monomial of `basis`, in deglex
/// order, or an error if there are infinitely many.
pub fn standard_monomials(basis: &[MPoly], var_count: usize) -> Result<Vec<Monomial>> {
    let leads: Vec<Monomial> = basis.iter().filter_map(|p| p.leading().map(|l| l.0)).collect();
    if leads.contains(&(0, 0)) {
        return Ok(Vec::new());
    }
    let x_bound = leads.iter().filter(|m| m.1 == 0).map(|m| m.0).min();
    let y_bound = if var_count < 2 { Some(1) } else { leads.iter().filter(|m| m.0 == 0).map(|m| m.1).min() };
    let (Some(xb), Some(yb)) = (x_bound, y_bound) else {
        let smallest = leads.iter().map(|m| (m.0 + m.1) as usize).max().unwrap_or(0);
        return Err(Error::InfiniteDimensional(smallest.max(1)));
    };
    let mut out = Vec::new();
    for a in 0..xb {
        for b in 0..yb {
            if !leads.iter().any(|l| divides(l, &(a, b))) {
                out.push((a, b));
            }
        }
    }
    out.sort_by(deglex);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_basis() {
        let q = Field::Rational;
        let f = MPoly::from_terms(q, [((3, 0), q.one()), ((0, 0), q.int(-1))]);
        let g = groebner(&[f]);
        assert_eq!(standard_monomials(&g, 1).unwrap(), vec![(0, 0), (1, 0), (2, 0)]);
    }

    #[test]
    fn bivariate_basis() {
        let q = Field::Rational;
        // (x^2, y^2, xy): basis 1, y, x
        let gens = [
            MPoly::monomial(q, (2, 0)),
            MPoly::monomial(q, (0, 2)),
            MPoly::monomial(q, (1, 1)),
        ];
        let g = groebner(&gens);
        assert_eq!(standard_monomials(&g, 2).unwrap(), vec![(0, 0), (0, 1), (1, 0)]);
        // (x - y, y^2): basis 1, y
        let gens = [
            MPoly::from_terms(q, [((1, 0), q.one()), ((0, 1), q.int(-1))]),
            MPoly::monomial(q, (0, 2)),
        ];
        let g = groebner(&gens);
        assert_eq!(standard_monomials(&g, 2).unwrap().len(), 2);
    }

    #[test]
    fn infinite_quotient_detected() {
        let q = Field::Rational;
        let g = groebner(&[MPoly::monomial(q, (1, 1))]);
        assert!(matches!(standard_monomials(&g, 2), Err(Error::InfiniteDimensional(_))));
    }
}

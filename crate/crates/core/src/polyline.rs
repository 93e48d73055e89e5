//! The polynomial ring `k[x]` handled symbolically.
//!
//! Points are the modules `M_a = k[x]/(x − a)`. The resolution
//! `0 → k[x] −(x−a)→ k[x] → M_a → 0` gives `Ext¹(M_a, M_b) = k` iff `a = b`
//! and `Ext² = 0`, so the hull is free on one loop per point and `ρ(x)` is
//! `a_i + t_i` on the block of `M_a_i`.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groebner::MPoly;
use crate::hull::{HullGenerator, MatricLayout, OElem, RPointedAlgebra, WordBasis};
use crate::linalg::{self, Mat, Subspace, Vector};
use crate::poly::Poly;

/// `(dim Ext¹(M_a, M_b), dim Ext²(M_a, M_b))` from the length-one resolution:
/// `Hom(k[x], M_b) −(b−a)→ Hom(k[x], M_b)`.
pub fn ext_dims(a: &Scalar, b: &Scalar) -> (usize, usize) {
    let mult = b - a;
    let coker = if mult.is_zero() { 1 } else { 0 };
    (coker, 0)
}

/// Hull and `Ô` with `ρ(x)` for a family of distinct points of the line.
#[derive(Clone, Debug)]
pub struct LineHull {
    pub points: Vec<Scalar>,
    pub layout: MatricLayout,
    pub rho_x: OElem,
}

impl LineHull {
    pub fn hull(&self) -> &RPointedAlgebra {
        &self.layout.hull
    }

    /// `ρ(p)` for a polynomial `p`, by Horner's rule in `Ô`.
    pub fn rho(&self, p: &Poly) -> OElem {
        let l = &self.layout;
        let mut acc = l.zero();
        for c in p.coeffs().iter().rev() {
            acc = l.add(&l.mul(&acc, &self.rho_x), &l.scale(c, &l.identity()));
        }
        acc
    }
}

pub fn line_hull(field: Field, points: &[Scalar], order: usize) -> Result<LineHull> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty module family".into()));
    }
    if order < 1 {
        return Err(Error::InvalidArgument("truncation order must be positive".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.field() != field {
            return Err(Error::FieldMismatch("point outside the base field".into()));
        }
        if points[..i].contains(p) {
            return Err(Error::InvalidArgument(format!("repeated point {p}")));
        }
    }
    let r = points.len();
    let mut gens = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate() {
            if ext_dims(a, b).0 == 1 {
                let label = if r == 1 { "t".to_string() } else { format!("t{}", i + 1) };
                gens.push(HullGenerator { label, source: i, target: j });
            }
        }
    }
    let words = Arc::new(WordBasis::new(r, gens, order)?);
    let hull = RPointedAlgebra::free(field, words.clone(), order);
    let layout = MatricLayout::new(hull, vec![1; r]);
    let blocks: Vec<Mat> = points.iter().map(|a| Mat::scalar(field, 1, a)).collect();
    let mut rho_x = layout.constant(&blocks);
    for g in 0..words.generators().len() {
        let gen = &words.generators()[g];
        let slot = 1 + words.index_of(&[g]).unwrap();
        layout.add_block(&mut rho_x, slot, gen.source, gen.target, &field.one(), &Mat::identity(field, 1));
    }
    Ok(LineHull { points: points.to_vec(), layout, rho_x })
}

/// `O^{k[x]}` of the family: the subalgebra of `Ô` generated by `ρ(x)`,
/// which already contains every inverse `ρ(f)⁻¹` with `f(a_i) = α ≠ 0`.
#[derive(Clone, Debug)]
pub struct LineO {
    pub dim: usize,
    /// Powers `ρ(x)^k`, `k < dim`, spanning `O`.
    pub powers: Vec<OElem>,
    /// `Π (x − a_i)^{N+1}`, which must annihilate `ρ(x)`.
    pub modulus: Poly,
}

pub fn line_o_algebra(h: &LineHull) -> Result<LineO> {
    let l = &h.layout;
    let f = l.field();
    let mut span = Subspace::zero(f, l.flat_dim());
    let mut powers = Vec::new();
    let mut p = l.identity();
    while span.insert(&l.flatten(&p)) {
        powers.push(p.clone());
        p = l.mul(&p, &h.rho_x);
    }
    let n = h.hull().order();
    let mut modulus = Poly::one(f);
    for a in &h.points {
        let lin = Poly::new(f, vec![-a, f.one()]);
        modulus = modulus.mul(&lin.pow(n + 1));
    }
    Ok(LineO { dim: powers.len(), powers, modulus })
}

/// `k[x]/((x − a)^{N+1})`, the localization at `a` truncated at order `N`.
pub fn truncated_localization(field: Field, a: &Scalar, order: usize) -> Result<Algebra> {
    let lin = Poly::new(field, vec![-a, field.one()]);
    from_univariate(&lin.pow(order + 1))
}

pub fn from_univariate(p: &Poly) -> Result<Algebra> {
    let f = p.field();
    let g = MPoly::from_terms(f, p.coeffs().iter().enumerate().map(|(i, c)| ((i as u32, 0), c.clone())));
    Algebra::from_poly_quotient(f, 1, vec![g])
}

/// Comparison of `O^{k[x]}({M_a_i})` with `Π k[x]/((x − a_i)^{N+1})`.
#[derive(Clone, Debug)]
pub struct LineComparison {
    pub order: usize,
    pub hull_dim: usize,
    pub hull_free: bool,
    pub o_dim: usize,
    pub product_dim: usize,
    /// `ρ(x)` is annihilated by the modulus.
    pub modulus_kills: bool,
    /// `x ↦ (x, …, x)` generates the product (Chinese remainders).
    pub product_generated: bool,
}

impl LineComparison {
    pub fn agrees(&self) -> bool {
        self.hull_free && self.o_dim == self.product_dim && self.modulus_kills && self.product_generated
    }
}

pub fn compare_with_localizations(field: Field, points: &[Scalar], order: usize) -> Result<LineComparison> {
    let h = line_hull(field, points, order)?;
    let o = line_o_algebra(&h)?;
    let l = &h.layout;
    let modulus_kills = h.rho(&o.modulus) == l.zero();
    let factors = points.iter().map(|a| truncated_localization(field, a, order)).collect::<Result<Vec<_>>>()?;
    let mut product = factors[0].clone();
    let mut x: Vector = factors[0].parse_element("x")?;
    for fac in &factors[1..] {
        product = Algebra::product(&product, fac)?;
        x.extend(fac.parse_element("x")?);
    }
    let powers: Vec<Vector> = (0..product.dim()).map(|k| product.pow(&x, k)).collect();
    let product_generated = linalg::rank_of(field, product.dim(), &powers) == product.dim();
    let hull_free = h.hull().relations().is_empty() && h.hull().dim() == points.len() * (order + 1);
    Ok(LineComparison {
        order,
        hull_dim: h.hull().dim(),
        hull_free,
        o_dim: o.dim,
        product_dim: product.dim(),
        modulus_kills,
        product_generated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_hull_is_free() {
        let f = Field::Rational;
        for n in 1..=6 {
            let h = line_hull(f, &[f.int(3)], n).unwrap();
            assert_eq!(h.hull().dim(), n + 1);
            assert!(h.hull().relations().is_empty());
        }
    }

    #[test]
    fn two_points_match_product_of_localizations() {
        let f = Field::Rational;
        for n in 1..=6 {
            let c = compare_with_localizations(f, &[f.zero(), f.one()], n).unwrap();
            assert!(c.agrees(), "{c:?}");
            assert_eq!(c.o_dim, 2 * (n + 1));
        }
    }

    #[test]
    fn ext_from_resolution() {
        let f = Field::prime(5).unwrap();
        assert_eq!(ext_dims(&f.int(2), &f.int(2)), (1, 0));
        assert_eq!(ext_dims(&f.int(2), &f.int(7)), (1, 0));
        assert_eq!(ext_dims(&f.int(2), &f.int(3)), (0, 0));
        assert!(line_hull(f, &[f.int(1), f.int(6)], 2).is_err());
    }
}

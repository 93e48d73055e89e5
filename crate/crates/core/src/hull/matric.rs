//! `Ô = H ⊗_{k^r} (Hom_k(M_i, M_j))` as block matrices with one coefficient
//! matrix per hull word.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{self, Mat, Vector};
use crate::module::ModuleRep;

use super::pointed::RPointedAlgebra;

/// An element `Σ_w w ⊗ X_w`: `coeffs[0]` is the constant (block-diagonal)
/// part, `coeffs[1 + w]` the coefficient of word `w`, supported on the block
/// of the word's bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OElem {
    pub coeffs: Vec<Mat>,
}

/// The block layout shared by `Ô`, its stages and `O`.
#[derive(Clone, Debug)]
pub struct MatricLayout {
    pub hull: RPointedAlgebra,
    pub dims: Vec<usize>,
    pub offsets: Vec<usize>,
    pub total: usize,
}

impl MatricLayout {
    pub fn new(hull: RPointedAlgebra, dims: Vec<usize>) -> MatricLayout {
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for d in &dims {
            offsets.push(total);
            total += d;
        }
        MatricLayout { hull, dims, offsets, total }
    }

    pub fn field(&self) -> Field {
        self.hull.field()
    }

    fn words(&self) -> usize {
        self.hull.words().len()
    }

    pub fn zero(&self) -> OElem {
        OElem { coeffs: vec![Mat::zeros(self.field(), self.total, self.total); 1 + self.words()] }
    }

    pub fn identity(&self) -> OElem {
        let mut z = self.zero();
        z.coeffs[0] = Mat::identity(self.field(), self.total);
        z
    }

    /// `Σ_i e_i ⊗ blocks[i]`.
    pub fn constant(&self, blocks: &[Mat]) -> OElem {
        let mut z = self.zero();
        z.coeffs[0] = Mat::direct_sum(self.field(), blocks);
        z
    }

    /// Adds `c · X` into the `(i, j)` block of the coefficient at `slot`.
    pub fn add_block(&self, x: &mut OElem, slot: usize, i: usize, j: usize, c: &Scalar, m: &Mat) {
        let target = &mut x.coeffs[slot];
        for p in 0..self.dims[i] {
            for q in 0..self.dims[j] {
                let (r, s) = (self.offsets[i] + p, self.offsets[j] + q);
                let v = target.get(r, s) + &(c * m.get(p, q));
                target.set(r, s, v);
            }
        }
    }

    pub fn block(&self, m: &Mat, i: usize, j: usize) -> Mat {
        let f = self.field();
        let data = (0..self.dims[i])
            .flat_map(|p| (0..self.dims[j]).map(move |q| (p, q)))
            .map(|(p, q)| m.get(self.offsets[i] + p, self.offsets[j] + q).clone())
            .collect();
        Mat::new(f, self.dims[i], self.dims[j], data).unwrap()
    }

    pub fn add(&self, x: &OElem, y: &OElem) -> OElem {
        OElem { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, x: &OElem, y: &OElem) -> OElem {
        OElem { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &Scalar, x: &OElem) -> OElem {
        OElem { coeffs: x.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    /// Product truncated at the word basis length, without reduction.
    pub fn mul_raw(&self, x: &OElem, y: &OElem) -> OElem {
        let w = self.hull.words();
        let mut out = self.zero();
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let slot = match (i, j) {
                    (0, j) => Some(j),
                    (i, 0) => Some(i),
                    (i, j) => w.concat(i - 1, j - 1).map(|k| k + 1),
                };
                if let Some(k) = slot {
                    out.coeffs[k] = out.coeffs[k].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &OElem, y: &OElem) -> OElem {
        self.reduce(&self.mul_raw(x, y))
    }

    /// Word-space vector of matrix entry `(p, q)`.
    pub fn entry_vector(&self, x: &OElem, p: usize, q: usize) -> Vector {
        x.coeffs[1..].iter().map(|m| m.get(p, q).clone()).collect()
    }

    pub fn set_entry_vector(&self, x: &mut OElem, p: usize, q: usize, v: &[Scalar]) {
        for (m, c) in x.coeffs[1..].iter_mut().zip(v) {
            m.set(p, q, c.clone());
        }
    }

    /// Normal form modulo the hull's relation ideal.
    pub fn reduce(&self, x: &OElem) -> OElem {
        let mut out = x.clone();
        if self.words() == 0 {
            return out;
        }
        for p in 0..self.total {
            for q in 0..self.total {
                let v = self.entry_vector(x, p, q);
                if !linalg::is_zero_vec(&v) {
                    self.set_entry_vector(&mut out, p, q, &self.hull.ideal().reduce(&v));
                }
            }
        }
        out
    }

    pub fn flatten(&self, x: &OElem) -> Vector {
        x.coeffs.iter().flat_map(|m| m.entries().to_vec()).collect()
    }

    pub fn unflatten(&self, v: &[Scalar]) -> OElem {
        let sq = self.total * self.total;
        OElem {
            coeffs: (0..=self.words())
                .map(|k| Mat::new(self.field(), self.total, self.total, v[k * sq..(k + 1) * sq].to_vec()).unwrap())
                .collect(),
        }
    }

    pub fn flat_dim(&self) -> usize {
        (1 + self.words()) * self.total * self.total
    }

    /// `π(x)` as the diagonal blocks of the constant part.
    pub fn pi(&self, x: &OElem) -> Vec<Mat> {
        (0..self.dims.len()).map(|i| self.block(&x.coeffs[0], i, i)).collect()
    }

    /// Two-sided inverse of `x` whose constant part is invertible:
    /// `Σ_k (−u⁻¹y)^k u⁻¹` with `u` the constant part and `y = x − u`.
    pub fn invert_unit(&self, x: &OElem) -> Result<OElem> {
        let u = &x.coeffs[0];
        for (i, b) in self.pi(x).iter().enumerate() {
            if b.inverse().is_none() {
                return Err(Error::NotUnit(format!("constant block {} is singular", i + 1)));
            }
        }
        let u_inv_m = u.inverse().ok_or_else(|| Error::NotUnit("constant part is singular".into()))?;
        let mut u_inv = self.zero();
        u_inv.coeffs[0] = u_inv_m;
        let mut y = self.reduce(x);
        y.coeffs[0] = Mat::zeros(self.field(), self.total, self.total);
        let step = self.scale(&self.field().int(-1), &self.mul(&u_inv, &y));
        let mut term = u_inv.clone();
        let mut sum = u_inv.clone();
        for _ in 0..self.hull.words().max_len() {
            term = self.mul(&step, &term);
            sum = self.add(&sum, &term);
        }
        Ok(self.reduce(&sum))
    }

    pub fn format(&self, x: &OElem) -> String {
        let w = self.hull.words();
        let mut parts = Vec::new();
        if !x.coeffs[0].is_zero() {
            parts.push(format!("1⊗{}", x.coeffs[0]));
        }
        for (k, m) in x.coeffs[1..].iter().enumerate() {
            if !m.is_zero() {
                let (i, j) = (w.source(k), w.target(k));
                parts.push(format!("{}⊗{}", w.label(k), self.block(m, i, j)));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `Ô^A(M̃)` at the top truncation together with the lift `ρ` of `η`.
#[derive(Clone, Debug)]
pub struct MatricOHat {
    pub algebra: Arc<Algebra>,
    pub modules: Vec<ModuleRep>,
    pub layout: MatricLayout,
    /// `ρ(b)` for every basis element `b` of `A`.
    pub rho: Vec<OElem>,
}

impl MatricOHat {
    pub fn hull(&self) -> &RPointedAlgebra {
        &self.layout.hull
    }

    pub fn rho_of(&self, a: &[Scalar]) -> OElem {
        let l = &self.layout;
        let mut out = l.zero();
        for (c, r) in a.iter().zip(&self.rho) {
            if !c.is_zero() {
                out = l.add(&out, &l.scale(c, r));
            }
        }
        out
    }

    /// `η(a)` on every module.
    pub fn eta(&self, a: &[Scalar]) -> Vec<Mat> {
        self.modules.iter().map(|m| m.action_of(a)).collect()
    }

    /// `ρ` unital and multiplicative, and `π∘ρ = η`.
    pub fn verify(&self) -> Result<()> {
        let l = &self.layout;
        let a = &self.algebra;
        if self.rho_of(a.unit()) != l.identity() {
            return Err(Error::Internal("ρ(1) is not the identity".into()));
        }
        for x in 0..a.dim() {
            if l.pi(&self.rho[x]) != self.eta(&a.basis_element(x)) {
                return Err(Error::Internal(format!("π∘ρ ≠ η on {}", a.labels()[x])));
            }
            for y in 0..a.dim() {
                let lhs = l.mul(&self.rho[x], &self.rho[y]);
                let rhs = l.reduce(&self.rho_of(&a.structure_constants()[x][y]));
                if lhs != rhs {
                    return Err(Error::Internal(format!(
                        "ρ({})ρ({}) ≠ ρ({}·{})",
                        a.labels()[x],
                        a.labels()[y],
                        a.labels()[x],
                        a.labels()[y]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `dim_k ρ(A)`.
    pub fn image_dim(&self) -> usize {
        let flat: Vec<Vector> = self.rho.iter().map(|r| self.layout.flatten(r)).collect();
        linalg::rank_of(self.layout.field(), self.layout.flat_dim(), &flat)
    }
}

//! Low-degree Hochschild cochains of `A` with values in `Hom_k(M_i, M_j)`.
//!
//! A 1-cochain is a list `ψ(b)` of `d_i × d_j` matrices, one per basis
//! element. The coboundary is
//! `δψ(a, b) = η_i(a)ψ(b) − ψ(ab) + ψ(a)η_j(b)`,
//! so derivations are exactly the upper-right corners of block-triangular
//! actions `[[η_i, ψ], [0, η_j]]`, i.e. extensions of `M_i` by `M_j`.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{self, Mat, Subspace, Vector};
use crate::module::ModuleRep;

/// Coefficient bimodule `Hom_k(M_i, M_j)` for a pair of modules.
#[derive(Clone, Debug)]
pub struct Coefficients<'a> {
    pub left: &'a ModuleRep,
    pub right: &'a ModuleRep,
}

impl<'a> Coefficients<'a> {
    pub fn new(left: &'a ModuleRep, right: &'a ModuleRep) -> Result<Coefficients<'a>> {
        if **left.algebra() != **right.algebra() {
            return Err(Error::InvalidArgument("modules over different algebras".into()));
        }
        Ok(Coefficients { left, right })
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }
    fn n(&self) -> usize {
        self.left.algebra().dim()
    }
    fn block(&self) -> usize {
        self.left.dim() * self.right.dim()
    }
    pub fn c1_dim(&self) -> usize {
        self.n() * self.block()
    }
    pub fn c2_dim(&self) -> usize {
        self.n() * self.n() * self.block()
    }

    pub fn flatten1(&self, psi: &[Mat]) -> Vector {
        psi.iter().flat_map(|m| m.entries().to_vec()).collect()
    }

    pub fn unflatten1(&self, v: &[Scalar]) -> Vec<Mat> {
        let (di, dj, b) = (self.left.dim(), self.right.dim(), self.block());
        (0..self.n()).map(|a| Mat::new(self.field(), di, dj, v[a * b..(a + 1) * b].to_vec()).unwrap()).collect()
    }

    /// Flattens a 2-cochain given as `c[a][b]`.
    pub fn flatten2(&self, c: &[Vec<Mat>]) -> Vector {
        c.iter().flat_map(|row| row.iter().flat_map(|m| m.entries().to_vec())).collect()
    }

    pub fn coboundary(&self, psi: &[Mat]) -> Vec<Vec<Mat>> {
        let a = self.left.algebra();
        let n = self.n();
        (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let ab = &a.structure_constants()[x][y];
                        let psi_ab = combine(self.field(), self.left.dim(), self.right.dim(), ab, psi);
                        self.left.action()[x].mul(&psi[y]).sub(&psi_ab).add(&psi[x].mul(&self.right.action()[y]))
                    })
                    .collect()
            })
            .collect()
    }

    /// Matrix of `δ: C¹ → C²` (columns are images of unit cochains).
    pub fn coboundary_matrix(&self) -> Mat {
        let f = self.field();
        let cols: Vec<Vector> = (0..self.c1_dim())
            .map(|k| self.flatten2(&self.coboundary(&self.unflatten1(&linalg::unit_vec(f, self.c1_dim(), k)))))
            .collect();
        Mat::from_cols(f, self.c2_dim(), &cols).unwrap()
    }

    pub fn derivations(&self) -> Vec<Vector> {
        if self.c1_dim() == 0 {
            return Vec::new();
        }
        linalg::kernel_basis(&self.coboundary_matrix())
    }

    /// `a ↦ η_i(a)φ − φη_j(a)`.
    pub fn inner(&self, phi: &Mat) -> Vec<Mat> {
        self.left
            .action()
            .iter()
            .zip(self.right.action())
            .map(|(l, r)| l.mul(phi).sub(&phi.mul(r)))
            .collect()
    }

    pub fn inner_derivations(&self) -> Vec<Vector> {
        let f = self.field();
        (0..self.block())
            .map(|k| {
                let phi = Mat::new(f, self.left.dim(), self.right.dim(), linalg::unit_vec(f, self.block(), k)).unwrap();
                self.flatten1(&self.inner(&phi))
            })
            .collect()
    }

    /// Representatives of `Der / Inn ≅ Ext¹(M_i, M_j)`, echelon-normalized.
    pub fn ext1_cocycles(&self) -> Vec<Vec<Mat>> {
        let f = self.field();
        let der = self.derivations();
        let inn = self.inner_derivations();
        let inn_space = Subspace::new(f, self.c1_dim(), &inn).unwrap();
        let reduced: Vec<Vector> = der.iter().map(|d| inn_space.reduce(d)).collect();
        let reps = Subspace::new(f, self.c1_dim(), &reduced).unwrap();
        reps.basis().iter().map(|v| self.unflatten1(v)).collect()
    }

    /// The coboundaries `B² ⊆ C²`.
    pub fn coboundaries(&self) -> Subspace {
        let m = self.coboundary_matrix();
        let cols: Vec<Vector> = (0..m.cols()).map(|c| m.col(c)).collect();
        Subspace::new(self.field(), self.c2_dim(), &cols).unwrap()
    }

    /// 2-cocycle condition
    /// `η_i(a)c(b,x) − c(ab,x) + c(a,bx) − c(a,b)η_j(x) = 0`.
    pub fn is_cocycle2(&self, c: &[Vec<Mat>]) -> bool {
        let a = self.left.algebra();
        let f = self.field();
        let n = self.n();
        let (di, dj) = (self.left.dim(), self.right.dim());
        let c_left = |v: &Vector, y: usize| -> Mat {
            let col: Vec<Mat> = (0..n).map(|x| c[x][y].clone()).collect();
            combine(f, di, dj, v, &col)
        };
        let c_right = |x: usize, v: &Vector| -> Mat { combine(f, di, dj, v, &c[x]) };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xy = &a.structure_constants()[x][y];
                    let yz = &a.structure_constants()[y][z];
                    let lhs = self.left.action()[x]
                        .mul(&c[y][z])
                        .sub(&c_left(xy, z))
                        .add(&c_right(x, yz))
                        .sub(&c[x][y].mul(&self.right.action()[z]));
                    if !lhs.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Matrix of `δ: C² → C³` (columns are images of unit cochains).
    pub fn coboundary2_matrix(&self) -> Mat {
        let f = self.field();
        let a = self.left.algebra();
        let n = self.n();
        let (di, dj) = (self.left.dim(), self.right.dim());
        let rows = n * n * n * self.block();
        let cols: Vec<Vector> = (0..self.c2_dim())
            .map(|k| {
                let c = self.unflatten2(&linalg::unit_vec(f, self.c2_dim(), k));
                let mut out = Vec::with_capacity(rows);
                for x in 0..n {
                    for y in 0..n {
                        let xy = &a.structure_constants()[x][y];
                        for z in 0..n {
                            let yz = &a.structure_constants()[y][z];
                            let col: Vec<Mat> = (0..n).map(|w| c[w][z].clone()).collect();
                            let m = self.left.action()[x]
                                .mul(&c[y][z])
                                .sub(&combine(f, di, dj, xy, &col))
                                .add(&combine(f, di, dj, yz, &c[x]))
                                .sub(&c[x][y].mul(&self.right.action()[z]));
                            out.extend(m.entries().iter().cloned());
                        }
                    }
                }
                out
            })
            .collect();
        Mat::from_cols(f, rows, &cols).unwrap()
    }

    /// `H² = Z² / B²` with echelon representatives.
    pub fn h2(&self) -> H2 {
        let f = self.field();
        let coboundaries = self.coboundaries();
        let cocycles = if self.c2_dim() == 0 { Vec::new() } else { linalg::kernel_basis(&self.coboundary2_matrix()) };
        let reduced: Vec<Vector> = cocycles.iter().map(|z| coboundaries.reduce(z)).collect();
        let reps = Subspace::new(f, self.c2_dim(), &reduced).unwrap();
        H2 { coboundaries, reps }
    }

    pub fn unflatten2(&self, v: &[Scalar]) -> Vec<Vec<Mat>> {
        let (di, dj, b, n) = (self.left.dim(), self.right.dim(), self.block(), self.n());
        (0..n)
            .map(|x| (0..n).map(|y| Mat::new(self.field(), di, dj, v[(x * n + y) * b..(x * n + y + 1) * b].to_vec()).unwrap()).collect())
            .collect()
    }
}

/// Second cohomology with a fixed basis of representatives.
#[derive(Clone, Debug)]
pub struct H2 {
    pub coboundaries: Subspace,
    pub reps: Subspace,
}

impl H2 {
    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    /// Class coordinates of a cocycle; `None` if it is not a cocycle.
    pub fn class(&self, c: &[Scalar]) -> Option<Vector> {
        self.reps.coordinates(&self.coboundaries.reduce(c))
    }
}

/// `Σ v_b ψ(b)`.
pub fn combine(field: Field, rows: usize, cols: usize, v: &[Scalar], psi: &[Mat]) -> Mat {
    let mut out = Mat::zeros(field, rows, cols);
    for (c, m) in v.iter().zip(psi) {
        if !c.is_zero() {
            out = out.add(&m.scale(c));
        }
    }
    out
}

/// Block-triangular extension module `[[η_i, ψ], [0, η_j]]` of `M_i` by `M_j`.
pub fn extension_module(left: &ModuleRep, right: &ModuleRep, psi: &[Mat]) -> Result<ModuleRep> {
    let f = left.field();
    let (di, dj) = (left.dim(), right.dim());
    let d = di + dj;
    let action = (0..left.algebra().dim())
        .map(|b| {
            let mut m = Mat::zeros(f, d, d);
            for r in 0..di {
                for c in 0..di {
                    m.set(r, c, left.action()[b].get(r, c).clone());
                }
                for c in 0..dj {
                    m.set(r, di + c, psi[b].get(r, c).clone());
                }
            }
            for r in 0..dj {
                for c in 0..dj {
                    m.set(di + r, di + c, right.action()[b].get(r, c).clone());
                }
            }
            m
        })
        .collect();
    ModuleRep::new(left.algebra().clone(), d, action)
}

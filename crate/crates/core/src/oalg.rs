//! The algebra `O^A(M̃) ⊆ Ô`: the image of `ρ` together with the inverses
//! `ρ(a)⁻¹` of elements acting as a nonzero scalar on every module.

use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraMap};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::hull::{self, MatricOHat, OElem};
use crate::linalg::{self, Mat, Subspace, Vector};
use crate::module::{are_isomorphic, ModuleRep};

#[derive(Clone, Debug)]
pub struct OAlgebra {
    pub ohat: Arc<MatricOHat>,
    basis: Subspace,
    elements: Vec<OElem>,
    algebra: Arc<Algebra>,
    /// `A → O`, `a ↦ ρ(a)` in the basis of `O`.
    eta: AlgebraMap,
    /// Elements of `A` whose `ρ`-image was inverted.
    pub inverted: Vec<Vector>,
}

/// Elements `a` with `η(a) = α·Id` on every module, as pairs `(a, α)`.
pub fn scalar_elements(ohat: &MatricOHat) -> Vec<(Vector, Scalar)> {
    let a = &ohat.algebra;
    let f = a.field();
    let n = a.dim();
    let total = ohat.layout.total;
    let cols: Vec<Vector> = (0..=n)
        .map(|k| {
            let m = if k < n {
                Mat::direct_sum(f, &ohat.eta(&a.basis_element(k)))
            } else {
                Mat::identity(f, total).scale(&f.int(-1))
            };
            m.flatten()
        })
        .collect();
    if total == 0 {
        return Vec::new();
    }
    let kernel = linalg::kernel_basis(&Mat::from_cols(f, total * total, &cols).unwrap());
    kernel.into_iter().map(|v| (v[..n].to_vec(), v[n].clone())).collect()
}

/// Builds `O^A(M̃)` from `ρ`.
pub fn o_algebra(ohat: &Arc<MatricOHat>) -> Result<OAlgebra> {
    let l = &ohat.layout;
    let f = l.field();
    let a = &ohat.algebra;
    let mut basis = Subspace::zero(f, l.flat_dim());
    let mut gens: Vec<OElem> = vec![l.identity()];
    gens.extend(ohat.rho.iter().map(|r| l.reduce(r)));
    let mut inverted = Vec::new();
    for (x, alpha) in scalar_elements(ohat) {
        let (x, _) = if alpha.is_zero() {
            (linalg::add_vec(&x, a.unit()), f.one())
        } else {
            (x, alpha)
        };
        gens.push(l.invert_unit(&hull::rho_apply(ohat, &x))?);
        inverted.push(x);
    }
    let mut elements: Vec<OElem> = Vec::new();
    for g in gens {
        if basis.insert(&l.flatten(&g)) {
            elements.push(g);
        }
    }
    // close under multiplication
    let mut k = 0;
    while k < elements.len() {
        for j in 0..=k {
            for (x, y) in [(k, j), (j, k)] {
                let p = l.mul(&elements[x], &elements[y]);
                if basis.insert(&l.flatten(&p)) {
                    elements.push(p);
                }
            }
        }
        k += 1;
    }
    let elements: Vec<OElem> = basis.basis().iter().map(|v| l.unflatten(v)).collect();
    let coords = |x: &OElem| -> Result<Vector> {
        basis.coordinates(&l.flatten(x)).ok_or_else(|| Error::Internal("product left the O-algebra".into()))
    };
    let table: Vec<Vec<Vector>> = elements
        .iter()
        .map(|x| elements.iter().map(|y| coords(&l.mul(x, y))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let unit = coords(&l.identity())?;
    let labels: Vec<String> = (1..=elements.len()).map(|i| format!("o{i}")).collect();
    let mut algebra = Algebra::from_structure_constants(f, labels, table, unit)?;
    let iotas: Option<Vec<Vector>> = (0..l.dims.len())
        .map(|i| {
            let blocks: Vec<Mat> =
                l.dims.iter().enumerate().map(|(j, &d)| if i == j { Mat::identity(f, d) } else { Mat::zeros(f, d, d) }).collect();
            basis.coordinates(&l.flatten(&l.constant(&blocks)))
        })
        .collect();
    if let Some(iotas) = iotas {
        algebra = algebra.with_idempotents(iotas)?;
    }
    let eta_images = (0..a.dim()).map(|b| coords(&hull::rho_apply(ohat, &a.basis_element(b)))).collect::<Result<_>>()?;
    Ok(OAlgebra { ohat: ohat.clone(), basis, elements, algebra: Arc::new(algebra), eta: AlgebraMap { images: eta_images }, inverted })
}

/// Runs hull and `O` construction in one go.
pub fn o_algebra_of(a: &Arc<Algebra>, modules: &[ModuleRep], order: usize) -> Result<OAlgebra> {
    let (_, ohat) = hull::hull(a, modules, order)?;
    o_algebra(&Arc::new(ohat))
}

impl OAlgebra {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// `O` as an abstract algebra in the echelon basis `o1, o2, …`.
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn elements(&self) -> &[OElem] {
        &self.elements
    }

    /// The canonical map `A → O`.
    pub fn eta(&self) -> &AlgebraMap {
        &self.eta
    }

    pub fn coordinates(&self, x: &OElem) -> Option<Vector> {
        let l = &self.ohat.layout;
        self.basis.coordinates(&l.flatten(&l.reduce(x)))
    }

    pub fn element(&self, c: &[Scalar]) -> OElem {
        let l = &self.ohat.layout;
        let mut v = linalg::zero_vec(l.field(), l.flat_dim());
        for (x, b) in c.iter().zip(self.basis.basis()) {
            linalg::axpy(&mut v, x, b);
        }
        l.unflatten(&v)
    }

    /// Rank of `η: A → O`.
    pub fn eta_rank(&self) -> usize {
        linalg::rank_of(self.ohat.layout.field(), self.dim(), &self.eta.images)
    }

    /// Whether `η: A → O` is bijective.
    pub fn eta_bijective(&self) -> bool {
        self.dim() == self.ohat.algebra.dim() && self.eta_rank() == self.dim()
    }

    /// `ρ(a)⁻¹` for `a` with `η(a) = α·Id`, `α ≠ 0`.
    pub fn invert(&self, a: &[Scalar]) -> Result<OElem> {
        let f = self.ohat.layout.field();
        let eta = self.ohat.eta(a);
        let alpha = eta.iter().find(|m| m.rows() > 0).map(|m| m.get(0, 0).clone()).unwrap_or_else(|| f.zero());
        if eta.iter().any(|m| *m != Mat::scalar(f, m.rows(), &alpha)) {
            return Err(Error::NotUnit("η(a) is not a scalar".into()));
        }
        if alpha.is_zero() {
            return Err(Error::NotUnit("η(a) is zero".into()));
        }
        let inv = self.ohat.layout.invert_unit(&hull::rho_apply(&self.ohat, a))?;
        if self.coordinates(&inv).is_none() {
            return Err(Error::Internal("inverse outside the O-algebra".into()));
        }
        Ok(inv)
    }

    /// `π_i: O → End_k(M_i)` on basis elements.
    pub fn pi_block(&self, i: usize) -> Vec<Mat> {
        self.elements.iter().map(|x| self.ohat.layout.pi(x)[i].clone()).collect()
    }

    /// `M_i` as a right `O`-module through `π_i`.
    pub fn module(&self, i: usize) -> Result<ModuleRep> {
        ModuleRep::new(self.algebra.clone(), self.ohat.layout.dims[i], self.pi_block(i))
    }
}

/// Findings about the maximal ideals `𝔪_i = ker π_i`.
#[derive(Clone, Debug)]
pub struct MaximalIdeals {
    pub ideals: Vec<Subspace>,
    pub distinct: bool,
    pub two_sided: bool,
    /// Every proper ideal generated by a non-unit basis element lies in some `𝔪_i`.
    pub non_units_contained: bool,
    /// `O/𝔪_i` is isomorphic to a sum of copies of `M_i`.
    pub quotients_match: Vec<bool>,
}

impl MaximalIdeals {
    pub fn ok(&self) -> bool {
        self.distinct && self.two_sided && self.non_units_contained && self.quotients_match.iter().all(|&b| b)
    }
}

pub fn maximal_ideals(o: &OAlgebra) -> Result<MaximalIdeals> {
    let f = o.algebra.field();
    let n = o.dim();
    let r = o.ohat.layout.dims.len();
    let mut ideals = Vec::with_capacity(r);
    for i in 0..r {
        let cols: Vec<Vector> = o.pi_block(i).iter().map(Mat::flatten).collect();
        let d = o.ohat.layout.dims[i];
        let kernel = if d == 0 { (0..n).map(|k| linalg::unit_vec(f, n, k)).collect() } else { linalg::kernel_basis(&Mat::from_cols(f, d * d, &cols)?) };
        ideals.push(Subspace::new(f, n, &kernel)?);
    }
    let distinct = (0..r).all(|i| (0..i).all(|j| !(ideals[i].contains_subspace(&ideals[j]) && ideals[j].contains_subspace(&ideals[i]))));
    let two_sided = ideals.iter().all(|m| o.algebra.ideal_closure(m.basis()).dim() == m.dim());
    let mut non_units_contained = true;
    for k in 0..n {
        let x = o.elements[k].clone();
        let is_unit = o.ohat.layout.pi(&x).iter().all(|b| b.inverse().is_some());
        if is_unit {
            continue;
        }
        let gen = o.algebra.ideal_closure(&[linalg::unit_vec(f, n, k)]);
        if gen.dim() < n && !ideals.iter().any(|m| m.contains_subspace(&gen)) {
            non_units_contained = false;
        }
    }
    let regular = ModuleRep::regular(&o.algebra);
    let mut quotients_match = Vec::with_capacity(r);
    for (i, m) in ideals.iter().enumerate() {
        let (quot, _) = regular.quotient(m)?;
        let mi = o.module(i)?;
        let ok = if mi.dim() == 0 || quot.dim() % mi.dim() != 0 {
            false
        } else {
            let copies = vec![mi; quot.dim() / o.ohat.layout.dims[i]];
            are_isomorphic(&quot, &ModuleRep::direct_sum(&copies)?)?
        };
        quotients_match.push(ok);
    }
    Ok(MaximalIdeals { ideals, distinct, two_sided, non_units_contained, quotients_match })
}

/// Result of recomputing `O` over `O^A(M̃)` itself.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub dim: usize,
    pub dim_again: usize,
    pub canonical_rank: usize,
}

impl ClosureReport {
    pub fn holds(&self) -> bool {
        self.dim == self.dim_again && self.canonical_rank == self.dim
    }
}

/// Compares `O^{O}(M̃)` with `O = O^A(M̃)` through the canonical map.
pub fn closure_check(a: &Arc<Algebra>, modules: &[ModuleRep], order: usize) -> Result<ClosureReport> {
    let o = o_algebra_of(a, modules, order)?;
    closure_of(&o, order)
}

pub fn closure_of(o: &OAlgebra, order: usize) -> Result<ClosureReport> {
    let oa = o.algebra.clone();
    let mods = (0..o.ohat.modules.len()).map(|i| o.module(i)).collect::<Result<Vec<_>>>()?;
    let again = o_algebra_of(&oa, &mods, order)?;
    Ok(ClosureReport { dim: o.dim(), dim_again: again.dim(), canonical_rank: again.eta_rank() })
}

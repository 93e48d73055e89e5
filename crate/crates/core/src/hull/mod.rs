//! Truncated deformation hulls of finite module families.
//!
//! The structure map `η` is lifted order by order to `ρ: A → Ô`. At order
//! `n` the failure of multiplicativity lies in `J / J'` with
//! `J' = 𝔪J + J𝔪 + 𝔪^{n+1}`; its Hochschild class decides the new relations
//! and, once those are imposed, a correction `ψ` with `δψ` equal to the
//! remaining defect extends `ρ`.

mod matric;
mod pointed;

use std::sync::Arc;

pub use matric::{MatricLayout, MatricOHat, OElem};
pub use pointed::{HullGenerator, RPointedAlgebra, WordBasis, WORD_CAP};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::hochschild::{Coefficients, H2};
use crate::linalg::{self, Mat, Subspace, Vector};
use crate::module::ModuleRep;

/// `nilpotency index of rad A + 1`, at least 2.
pub fn default_order(a: &Algebra) -> Result<usize> {
    let rad = a.radical()?;
    Ok((rad.nilpotency + 1).max(2))
}

/// The obstruction to extending a defining system by one order: for each
/// basis element of `J/J'`, its class in `H²(A, Hom(M_i, M_j)) ≅ Ext²`.
#[derive(Clone, Debug)]
pub struct MasseyStep {
    pub order: usize,
    pub classes: Vec<ObstructionClass>,
}

#[derive(Clone, Debug)]
pub struct ObstructionClass {
    pub source: usize,
    pub target: usize,
    /// The element of `J/J'` as a word-space vector.
    pub tail: Vector,
    /// Coordinates in the fixed basis of `H²`.
    pub class: Vector,
}

impl MasseyStep {
    pub fn vanishes(&self) -> bool {
        self.classes.iter().all(|c| linalg::is_zero_vec(&c.class))
    }

    /// Rank of the obstruction map into `H²` of block `(i, j)`.
    pub fn rank(&self, i: usize, j: usize) -> usize {
        let vs: Vec<Vector> =
            self.classes.iter().filter(|c| c.source == i && c.target == j).map(|c| c.class.clone()).collect();
        match vs.first() {
            Some(v) => linalg::rank_of(v[0].field(), v.len(), &vs),
            None => 0,
        }
    }
}

/// Per-pair cohomological data, computed once.
struct PairData {
    h2: H2,
    delta: Mat,
}

/// A lift of `η` valid modulo the current relation ideal: the input of one
/// obstruction step.
pub struct DefiningSystem {
    layout: MatricLayout,
    algebra: Arc<Algebra>,
    modules: Vec<ModuleRep>,
    rho: Vec<OElem>,
    pairs: Vec<Vec<PairData>>,
}

impl DefiningSystem {
    /// Order-one system `ρ = η + Σ t ⊗ ψ_t` over the free word basis up to
    /// `max_order`.
    pub fn first_order(
        algebra: &Arc<Algebra>,
        modules: &[ModuleRep],
        generators: Vec<HullGenerator>,
        cocycles: &[Vec<Mat>],
        max_order: usize,
    ) -> Result<DefiningSystem> {
        let f = algebra.field();
        let r = modules.len();
        let words = Arc::new(WordBasis::new(r, generators, max_order)?);
        let hull = RPointedAlgebra::free(f, words.clone(), 1);
        let layout = MatricLayout::new(hull, modules.iter().map(|m| m.dim()).collect());
        let mut rho = Vec::with_capacity(algebra.dim());
        for b in 0..algebra.dim() {
            let blocks: Vec<Mat> = modules.iter().map(|m| m.action()[b].clone()).collect();
            let mut x = layout.constant(&blocks);
            for (g, gen) in words.generators().iter().enumerate() {
                let slot = 1 + words.index_of(&[g]).unwrap();
                layout.add_block(&mut x, slot, gen.source, gen.target, &f.one(), &cocycles[g][b]);
            }
            rho.push(x);
        }
        let pairs = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let c = Coefficients::new(&modules[i], &modules[j]).unwrap();
                        PairData { h2: c.h2(), delta: c.coboundary_matrix() }
                    })
                    .collect()
            })
            .collect();
        Ok(DefiningSystem { layout, algebra: algebra.clone(), modules: modules.to_vec(), rho, pairs })
    }

    pub fn order(&self) -> usize {
        self.layout.hull.order()
    }

    pub fn hull(&self) -> &RPointedAlgebra {
        &self.layout.hull
    }

    fn ideal_shift(&self) -> Subspace {
        let h = &self.layout.hull;
        let f = h.field();
        let words = h.words();
        let mut v = words.two_sided_shift(f, h.ideal());
        v.extend(words.longer_than(h.order() + 1).into_iter().map(|i| linalg::unit_vec(f, words.len(), i)));
        words.subspace(f, &v)
    }

    /// `ρ(a)ρ(b) − ρ(ab)` for all basis pairs.
    fn defects(&self) -> Vec<Vec<OElem>> {
        let l = &self.layout;
        let a = &self.algebra;
        (0..a.dim())
            .map(|x| {
                (0..a.dim())
                    .map(|y| {
                        let ab = a.structure_constants()[x][y].iter().zip(&self.rho).fold(l.zero(), |acc, (c, r)| {
                            if c.is_zero() {
                                acc
                            } else {
                                l.add(&acc, &l.scale(c, r))
                            }
                        });
                        l.sub(&l.mul_raw(&self.rho[x], &self.rho[y]), &ab)
                    })
                    .collect()
            })
            .collect()
    }

    /// Hochschild 2-cochains of the defect, one per basis vector of
    /// `quotient` (normal forms modulo `killed`), tagged by bidegree.
    fn defect_cochains(
        &self,
        defects: &[Vec<OElem>],
        killed: &Subspace,
        quotient: &Subspace,
    ) -> Result<Vec<(usize, usize, Vector)>> {
        let l = &self.layout;
        let f = l.field();
        let words = l.hull.words();
        let n = self.algebra.dim();
        let tags: Vec<(usize, usize)> = quotient
            .basis()
            .iter()
            .map(|v| {
                let w = v.iter().position(|c| !c.is_zero()).unwrap();
                (words.source(w), words.target(w))
            })
            .collect();
        let mut out: Vec<(usize, usize, Vector)> = tags
            .iter()
            .map(|&(i, j)| (i, j, linalg::zero_vec(f, n * n * l.dims[i] * l.dims[j])))
            .collect();
        for x in 0..n {
            for y in 0..n {
                for i in 0..l.dims.len() {
                    for j in 0..l.dims.len() {
                        for p in 0..l.dims[i] {
                            for q in 0..l.dims[j] {
                                let v = l.entry_vector(&defects[x][y], l.offsets[i] + p, l.offsets[j] + q);
                                if linalg::is_zero_vec(&v) {
                                    continue;
                                }
                                let red = killed.reduce(&v);
                                let lam = quotient.coordinates(&red).ok_or_else(|| {
                                    Error::Internal("defect lies outside the relation ideal".into())
                                })?;
                                let idx = ((x * n + y) * l.dims[i] + p) * l.dims[j] + q;
                                for (beta, c) in lam.into_iter().enumerate() {
                                    if !c.is_zero() {
                                        if tags[beta] != (i, j) {
                                            return Err(Error::Internal("defect violates the bigrading".into()));
                                        }
                                        out[beta].2[idx] = c;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The relation ideal `J` of the next order: current ideal plus all
    /// words of length `order + 1`.
    fn next_base_ideal(&self) -> Subspace {
        let h = &self.layout.hull;
        let f = h.field();
        let words = h.words();
        let mut s = h.ideal().clone();
        for i in words.longer_than(h.order()) {
            s.insert(&linalg::unit_vec(f, words.len(), i));
        }
        s
    }

    fn quotient_space(&self, j: &Subspace, killed: &Subspace) -> Subspace {
        let words = self.layout.hull.words();
        let reduced: Vec<Vector> = j.basis().iter().map(|v| killed.reduce(v)).collect();
        words.subspace(self.layout.field(), &reduced)
    }

    /// The obstruction to lifting to order `order() + 1`.
    pub fn massey_step(&self) -> Result<MasseyStep> {
        let n = self.order() + 1;
        if n > self.layout.hull.words().max_len() {
            return Err(Error::InvalidArgument(format!("word basis does not reach order {n}")));
        }
        let j = self.next_base_ideal();
        let shift = self.ideal_shift();
        let q = self.quotient_space(&j, &shift);
        let cochains = self.defect_cochains(&self.defects(), &shift, &q)?;
        let mut classes = Vec::with_capacity(cochains.len());
        for ((i, jj, c), tail) in cochains.into_iter().zip(q.basis()) {
            let class = self.pairs[i][jj]
                .h2
                .class(&c)
                .ok_or_else(|| Error::Internal("obstruction is not a cocycle".into()))?;
            classes.push(ObstructionClass { source: i, target: jj, tail: tail.clone(), class });
        }
        Ok(MasseyStep { order: n, classes })
    }

    /// Relations forced by an obstruction: `Σ_β class_β[γ] · tail_β` per
    /// block and `H²` basis element `γ`.
    pub fn relations_from(&self, step: &MasseyStep) -> Vec<Vector> {
        let r = self.modules.len();
        let f = self.layout.field();
        let len = self.layout.hull.words().len();
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..r {
                for g in 0..self.pairs[i][j].h2.dim() {
                    let mut rel = linalg::zero_vec(f, len);
                    for c in step.classes.iter().filter(|c| c.source == i && c.target == j) {
                        linalg::axpy(&mut rel, &c.class[g], &c.tail);
                    }
                    if !linalg::is_zero_vec(&rel) {
                        out.push(rel);
                    }
                }
            }
        }
        out
    }

    /// Extends to order `order() + 1`. With `fixed`, that ideal is imposed
    /// instead of the one derived from the obstruction.
    pub fn extend(&mut self, fixed: Option<&Subspace>) -> Result<MasseyStep> {
        let n = self.order() + 1;
        let step = self.massey_step()?;
        let h = &self.layout.hull;
        let f = h.field();
        let words = h.words().clone();
        let shift = self.ideal_shift();
        let new_ideal = match fixed {
            Some(s) => s.clone(),
            None => {
                let mut s = shift.clone();
                for rel in self.relations_from(&step) {
                    s.insert(&rel);
                }
                s
            }
        };
        let next = RPointedAlgebra::new(f, words.clone(), n, new_ideal.clone())?;
        let j = self.next_base_ideal();
        if !j.contains_subspace(&new_ideal) {
            return Err(Error::Internal("relation ideal does not shrink".into()));
        }
        let q = self.quotient_space(&j, &new_ideal);
        let cochains = self.defect_cochains(&self.defects(), &new_ideal, &q)?;
        let l = MatricLayout::new(next, self.layout.dims.clone());
        let mut rho = self.rho.clone();
        for ((i, jj, c), tail) in cochains.into_iter().zip(q.basis()) {
            if linalg::is_zero_vec(&c) {
                continue;
            }
            let psi = linalg::solve(&self.pairs[i][jj].delta, &c)?
                .ok_or_else(|| Error::Internal(format!("obstruction survives at order {n}")))?;
            let coeff = Coefficients::new(&self.modules[i], &self.modules[jj])?;
            let psi = coeff.unflatten1(&psi);
            for (b, r) in rho.iter_mut().enumerate() {
                for (w, t) in tail.iter().enumerate() {
                    if !t.is_zero() {
                        l.add_block(r, 1 + w, i, jj, &-t, &psi[b]);
                    }
                }
            }
        }
        self.rho = rho.iter().map(|r| l.reduce(r)).collect();
        self.layout = l;
        Ok(step)
    }

    pub fn to_ohat(&self) -> MatricOHat {
        MatricOHat {
            algebra: self.algebra.clone(),
            modules: self.modules.clone(),
            layout: self.layout.clone(),
            rho: self.rho.clone(),
        }
    }
}

/// One stage `H_n` of the tower with its bookkeeping.
#[derive(Clone, Debug)]
pub struct HullStage {
    pub algebra: RPointedAlgebra,
    /// The obstruction computed on the way to this stage (absent at order 1).
    pub obstruction: Option<MasseyStep>,
    pub relation_count: usize,
    pub image_dim: usize,
}

#[derive(Clone, Debug)]
pub struct HullTower {
    pub generators: Vec<HullGenerator>,
    /// The `Ext¹` cocycle each generator is dual to.
    pub cocycles: Vec<Vec<Mat>>,
    /// `stages[n - 1]` is `H_n`.
    pub stages: Vec<HullStage>,
    pub stabilized: bool,
}

impl HullTower {
    pub fn top(&self) -> &RPointedAlgebra {
        &self.stages.last().unwrap().algebra
    }

    pub fn order(&self) -> usize {
        self.stages.len()
    }

    /// Number of degree-one generators in each block `(i, j)`.
    pub fn tangent_counts(&self, r: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![0; r]; r];
        for g in &self.generators {
            out[g.source][g.target] += 1;
        }
        out
    }

    /// `(ker π_{n−1})·𝔪_n = 𝔪_n·(ker π_{n−1}) = 0` at every stage.
    pub fn check_smallness(&self) -> bool {
        self.stages.windows(2).all(|w| {
            let (prev, cur) = (&w[0].algebra, &w[1].algebra);
            let f = cur.field();
            let mut kernel = prev.ideal().clone();
            for i in cur.words().longer_than(prev.order()) {
                kernel.insert(&linalg::unit_vec(f, cur.words().len(), i));
            }
            cur.ideal().basis().iter().all(|v| kernel.contains(v)) && cur.kills_maximal_ideal(&kernel)
        })
    }

    pub fn relations(&self) -> Vec<Vector> {
        self.top().relations()
    }
}

fn validate_family(a: &Arc<Algebra>, modules: &[ModuleRep], order: usize) -> Result<()> {
    if order < 2 {
        return Err(Error::InvalidArgument(format!("truncation order {order} is below 2")));
    }
    if modules.is_empty() {
        return Err(Error::InvalidArgument("empty module family".into()));
    }
    if modules.iter().any(|m| **m.algebra() != **a) {
        return Err(Error::InvalidArgument("modules over a different algebra".into()));
    }
    Ok(())
}

/// Generators dual to the `Ext¹(M_i, M_j)` bases, in block order.
pub fn tangent_generators(modules: &[ModuleRep]) -> Result<(Vec<HullGenerator>, Vec<Vec<Mat>>)> {
    let r = modules.len();
    let mut pending = Vec::new();
    for i in 0..r {
        for j in 0..r {
            for psi in Coefficients::new(&modules[i], &modules[j])?.ext1_cocycles() {
                pending.push((i, j, psi));
            }
        }
    }
    let single = pending.len() == 1;
    let mut gens = Vec::new();
    let mut cocycles = Vec::new();
    for (k, (i, j, psi)) in pending.into_iter().enumerate() {
        let label = if single { "t".to_string() } else { format!("t{}", k + 1) };
        gens.push(HullGenerator { label, source: i, target: j });
        cocycles.push(psi);
    }
    Ok((gens, cocycles))
}

/// The hull tower `H_1 ← … ← H_N` and `Ô` with `ρ` at order `N`.
pub fn hull(a: &Arc<Algebra>, modules: &[ModuleRep], order: usize) -> Result<(HullTower, MatricOHat)> {
    validate_family(a, modules, order)?;
    let (generators, cocycles) = tangent_generators(modules)?;
    let mut sys = DefiningSystem::first_order(a, modules, generators.clone(), &cocycles, order)?;
    let mut stages = vec![HullStage {
        algebra: sys.hull().clone(),
        obstruction: None,
        relation_count: 0,
        image_dim: sys.to_ohat().image_dim(),
    }];
    while sys.order() < order {
        let step = sys.extend(None)?;
        stages.push(HullStage {
            algebra: sys.hull().clone(),
            obstruction: Some(step),
            relation_count: sys.hull().relations().len(),
            image_dim: sys.to_ohat().image_dim(),
        });
    }
    let k = stages.len();
    let stabilized =
        stages[k - 1].relation_count == stages[k - 2].relation_count && stages[k - 1].image_dim == stages[k - 2].image_dim;
    let ohat = sys.to_ohat();
    ohat.verify()?;
    Ok((HullTower { generators, cocycles, stages, stabilized }, ohat))
}

/// Recomputes `ρ` against the relations of an existing tower.
pub fn compute_rho(a: &Arc<Algebra>, modules: &[ModuleRep], tower: &HullTower) -> Result<MatricOHat> {
    validate_family(a, modules, tower.order().max(2))?;
    let mut sys = DefiningSystem::first_order(a, modules, tower.generators.clone(), &tower.cocycles, tower.order())?;
    for stage in &tower.stages[1..] {
        sys.extend(Some(stage.algebra.ideal()))?;
    }
    let ohat = sys.to_ohat();
    ohat.verify()?;
    Ok(ohat)
}

/// Applies `ρ` to an algebra element, reduced.
pub fn rho_apply(ohat: &MatricOHat, a: &[Scalar]) -> OElem {
    ohat.layout.reduce(&ohat.rho_of(a))
}

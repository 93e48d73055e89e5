//! The ringed space `aSpec A` on a finite set of spectral points.
//!
//! `O_X(U)` is `O^A` of the points of `U`. The sheaf `𝒪_X(U)` is the limit of
//! `O_X(U_x)` over the minimal opens `U_x` of points `x ∈ U`, the standard
//! way of turning a presheaf on a finite space into a sheaf.

mod compare;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use compare::{
    aspec_morphism, global_sections_roundtrip, spec_compare, MorphismReport, RoundtripReport, SpecComparison,
};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hull::default_order;
use crate::linalg::{self, Mat, Subspace, Vector};
use crate::module::{acts_injectively, is_simple, residue_modules, simple_modules, Provenance, SpectralPoint};
use crate::oalg::{o_algebra_of, OAlgebra};

/// A set of points as a bit mask.
pub type PointSet = u64;

pub const MAX_POINTS: usize = 16;

pub fn members(s: PointSet) -> Vec<usize> {
    (0..64).filter(|i| s >> i & 1 == 1).collect()
}

fn subset(a: PointSet, b: PointSet) -> bool {
    a & !b == 0
}

/// `O^A` of a point set, with the kernel of `A → O^A`.
#[derive(Clone, Debug)]
pub struct LocalSections {
    pub points: PointSet,
    /// `None` for the empty set (the zero ring).
    pub o: Option<OAlgebra>,
    pub kernel: Subspace,
}

impl LocalSections {
    pub fn dim(&self) -> usize {
        self.o.as_ref().map_or(0, OAlgebra::dim)
    }

    /// Image of `a ∈ A` in the basis of `O`.
    pub fn image(&self, a: &[crate::Scalar]) -> Vector {
        match &self.o {
            None => Vec::new(),
            Some(o) => o.eta().apply(self.kernel.field(), o.dim(), a),
        }
    }
}

#[derive(Debug)]
pub struct ASpecSpace {
    algebra: Arc<Algebra>,
    points: Vec<SpectralPoint>,
    order: usize,
    subbasis: Vec<(String, Vector, PointSet)>,
    opens: Vec<PointSet>,
    simple: PointSet,
    cache: Mutex<HashMap<PointSet, Arc<LocalSections>>>,
}

impl ASpecSpace {
    /// Space on the given points; the sub-basis holds `D(b)` for every basis
    /// element, the unit, the block idempotents and the extra elements.
    pub fn new(algebra: Arc<Algebra>, points: Vec<SpectralPoint>, order: usize, extra: &[Vector]) -> Result<ASpecSpace> {
        if points.len() > MAX_POINTS {
            return Err(Error::InvalidArgument(format!("at most {MAX_POINTS} points are supported")));
        }
        if let Some(p) = points.iter().find(|p| **p.module.algebra() != *algebra) {
            return Err(Error::InvalidArgument(format!("point {} is a module over another algebra", p.name)));
        }
        let mut elems: Vec<(String, Vector)> = Vec::new();
        elems.push(("1".into(), algebra.unit().clone()));
        for i in 0..algebra.dim() {
            elems.push((algebra.labels()[i].clone(), algebra.basis_element(i)));
        }
        if let Ok(blocks) = algebra.blocks() {
            for (i, b) in blocks.iter().enumerate() {
                elems.push((format!("idem{}", i + 1), b.idempotent.clone()));
            }
        }
        for f in extra {
            if f.len() != algebra.dim() {
                return Err(Error::DimensionMismatch("sub-basis element".into()));
            }
            elems.push((algebra.format_element(f), f.clone()));
        }
        let mut seen: Vec<Vector> = Vec::new();
        elems.retain(|(_, f)| {
            let fresh = !seen.contains(f);
            if fresh {
                seen.push(f.clone());
            }
            fresh
        });
        let subbasis: Vec<(String, Vector, PointSet)> = elems
            .into_iter()
            .map(|(l, f)| {
                let d = d_set(&points, &f);
                (l, f, d)
            })
            .collect();
        let opens = generate_topology(points.len(), &subbasis.iter().map(|s| s.2).collect::<Vec<_>>());
        let mut simple = 0;
        for (i, p) in points.iter().enumerate() {
            if matches!(p.provenance, Provenance::Simple) || is_simple(&p.module)? {
                simple |= 1 << i;
            }
        }
        Ok(ASpecSpace { algebra, points, order, subbasis, opens, simple, cache: Mutex::new(HashMap::new()) })
    }

    /// All simple modules as points (residue fields for commutative
    /// non-split algebras), at the default truncation order.
    pub fn of_simples(algebra: &Arc<Algebra>) -> Result<ASpecSpace> {
        let order = default_order(algebra)?;
        ASpecSpace::of_simples_at(algebra, order)
    }

    pub fn of_simples_at(algebra: &Arc<Algebra>, order: usize) -> Result<ASpecSpace> {
        let modules = match simple_modules(algebra) {
            Ok(m) => m,
            Err(Error::UnsupportedAlgebra(_)) if algebra.is_commutative() => residue_modules(algebra)?,
            Err(e) => return Err(e),
        };
        let points = modules
            .into_iter()
            .enumerate()
            .map(|(i, m)| SpectralPoint { name: format!("S{}", i + 1), module: m, provenance: Provenance::Simple })
            .collect();
        ASpecSpace::new(algebra.clone(), points, order, &[])
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn points(&self) -> &[SpectralPoint] {
        &self.points
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn field(&self) -> Field {
        self.algebra.field()
    }
    pub fn full(&self) -> PointSet {
        if self.points.is_empty() {
            0
        } else {
            (1u64 << self.points.len()) - 1
        }
    }
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }
    pub fn subbasis(&self) -> &[(String, Vector, PointSet)] {
        &self.subbasis
    }
    pub fn is_open(&self, u: PointSet) -> bool {
        self.opens.contains(&u)
    }

    pub fn d_set(&self, f: &[crate::Scalar]) -> PointSet {
        d_set(&self.points, f)
    }

    pub fn names(&self, s: PointSet) -> Vec<String> {
        members(s).into_iter().map(|i| self.points[i].name.clone()).collect()
    }

    pub fn format_set(&self, s: PointSet) -> String {
        format!("{{{}}}", self.names(s).join(", "))
    }

    /// Smallest open containing `s`.
    pub fn minimal_open(&self, s: PointSet) -> PointSet {
        self.opens.iter().filter(|&&u| subset(s, u)).fold(self.full(), |acc, &u| acc & u)
    }

    /// `O^A` of an arbitrary point set.
    pub fn local(&self, s: PointSet) -> Result<Arc<LocalSections>> {
        if let Some(hit) = self.cache.lock().unwrap().get(&s) {
            return Ok(hit.clone());
        }
        let f = self.field();
        let n = self.algebra.dim();
        let computed = if s == 0 {
            let all: Vec<Vector> = (0..n).map(|i| linalg::unit_vec(f, n, i)).collect();
            LocalSections { points: 0, o: None, kernel: Subspace::new(f, n, &all)? }
        } else {
            let mods: Vec<_> = members(s).into_iter().map(|i| self.points[i].module.clone()).collect();
            let o = o_algebra_of(&self.algebra, &mods, self.order)?;
            let kernel = linalg::kernel_basis(&Mat::from_cols(f, o.dim(), &o.eta().images)?);
            LocalSections { points: s, kernel: Subspace::new(f, n, &kernel)?, o: Some(o) }
        };
        let arc = Arc::new(computed);
        self.cache.lock().unwrap().insert(s, arc.clone());
        Ok(arc)
    }

    /// Points that are simple modules.
    pub fn simple_points(&self) -> PointSet {
        self.simple
    }

    /// The presheaf with the limit taken over simple points of `U` only.
    pub fn simples_only_sections(&self, u: PointSet) -> Result<Arc<LocalSections>> {
        if !self.is_open(u) {
            return Err(Error::InvalidArgument(format!("{} is not open", self.format_set(u))));
        }
        self.local(u & self.simple)
    }

    /// Presheaf sections `O_X(U)`.
    pub fn sections(&self, u: PointSet) -> Result<Arc<LocalSections>> {
        if !self.is_open(u) {
            return Err(Error::InvalidArgument(format!("{} is not open", self.format_set(u))));
        }
        self.local(u)
    }

    /// Restriction `O(U) → O(V)` for point sets `V ⊆ U`, through `A`.
    pub fn presheaf_restriction(&self, u: PointSet, v: PointSet) -> Result<Mat> {
        if !subset(v, u) {
            return Err(Error::InvalidArgument("restriction to a non-subset".into()));
        }
        let f = self.field();
        let (lu, lv) = (self.local(u)?, self.local(v)?);
        if !lv.kernel.contains_subspace(&lu.kernel) {
            return Err(Error::Internal(format!(
                "restriction {} → {} is not well defined",
                self.format_set(u),
                self.format_set(v)
            )));
        }
        let ou = match &lu.o {
            None => return Ok(Mat::zeros(f, 0, lv.dim())),
            Some(o) => o,
        };
        let images = Mat::from_cols(f, ou.dim(), &ou.eta().images)?;
        let rows: Vec<Vector> = (0..ou.dim())
            .map(|k| {
                let a = linalg::solve(&images, &linalg::unit_vec(f, ou.dim(), k))?
                    .ok_or_else(|| Error::Internal("A → O^A is not onto".into()))?;
                Ok(lv.image(&a))
            })
            .collect::<Result<_>>()?;
        rows_to_mat(f, lv.dim(), &rows)
    }

    /// Sheaf sections `𝒪_X(U)`.
    pub fn sheaf_sections(&self, u: PointSet) -> Result<SheafSections> {
        if !self.is_open(u) {
            return Err(Error::InvalidArgument(format!("{} is not open", self.format_set(u))));
        }
        let f = self.field();
        let pts = members(u);
        let comps: Vec<(usize, Arc<LocalSections>, PointSet)> = pts
            .iter()
            .map(|&x| {
                let ux = self.minimal_open(1 << x);
                Ok((x, self.local(ux)?, ux))
            })
            .collect::<Result<_>>()?;
        let mut offsets = Vec::with_capacity(comps.len());
        let mut ambient = 0;
        for c in &comps {
            offsets.push(ambient);
            ambient += c.1.dim();
        }
        // s_y = res(s_x) whenever U_y ⊆ U_x
        let mut constraints: Vec<Vector> = Vec::new();
        for (a, (_, la, ua)) in comps.iter().enumerate() {
            for (b, (_, lb, ub)) in comps.iter().enumerate() {
                if a == b || !subset(*ub, *ua) {
                    continue;
                }
                let res = self.presheaf_restriction(*ua, *ub)?;
                for col in 0..lb.dim() {
                    let mut row = linalg::zero_vec(f, ambient);
                    for k in 0..la.dim() {
                        row[offsets[a] + k] = res.get(k, col).clone();
                    }
                    row[offsets[b] + col] = &row[offsets[b] + col] - &f.one();
                    constraints.push(row);
                }
            }
        }
        let space_basis = null_space(f, ambient, &constraints);
        let space = Subspace::new(f, ambient, &space_basis)?;
        let sheaf = SheafSections { open: u, components: comps, offsets, ambient, space, algebra: None };
        if sheaf.space.dim() == 0 {
            return Ok(sheaf);
        }
        let algebra = sheaf.build_algebra(f)?;
        Ok(SheafSections { algebra: Some(Arc::new(algebra)), ..sheaf })
    }

    /// `𝒪(U) → 𝒪(V)` in the echelon bases of both section spaces.
    pub fn sheaf_restriction(&self, u: &SheafSections, v: &SheafSections) -> Result<Mat> {
        let f = self.field();
        let rows: Vec<Vector> = u
            .space
            .basis()
            .iter()
            .map(|s| {
                let mut amb = Vec::with_capacity(v.ambient);
                for (x, _, _) in &v.components {
                    let a = u.components.iter().position(|c| c.0 == *x).ok_or_else(|| Error::InvalidArgument("not a subset".into()))?;
                    let d = u.components[a].1.dim();
                    amb.extend_from_slice(&s[u.offsets[a]..u.offsets[a] + d]);
                }
                v.space.coordinates(&amb).ok_or_else(|| Error::Internal("restricted section is not compatible".into()))
            })
            .collect::<Result<_>>()?;
        rows_to_mat(f, v.space.dim(), &rows)
    }

    /// Locality and gluing for the sheaf `𝒪_X` on every cover of every open.
    pub fn sheafify_check(&self) -> Result<SheafReport> {
        let mut cache: HashMap<PointSet, SheafSections> = HashMap::new();
        for &u in &self.opens {
            cache.insert(u, self.sheaf_sections(u)?);
        }
        let dim = |u: PointSet| Ok(cache[&u].space.dim());
        let res = |u: PointSet, v: PointSet| self.sheaf_restriction(&cache[&u], &cache[&v]);
        let mut report = self.check_axioms(&dim, &res)?;
        // disjoint unions are products
        for &u in &self.opens {
            for &v in &self.opens {
                if u < v && u & v == 0 && u != 0 && v != 0 {
                    let w = u | v;
                    if !self.is_open(w) {
                        continue;
                    }
                    let ru = res(w, u)?;
                    let rv = res(w, v)?;
                    let rows: Vec<Vector> =
                        (0..ru.rows()).map(|k| ru.row(k).iter().chain(rv.row(k)).cloned().collect()).collect();
                    let total = dim(u)? + dim(v)?;
                    let bij = dim(w)? == total && linalg::rank_of(self.field(), total, &rows) == total;
                    if !bij {
                        report.failures.push(format!(
                            "{} is not the product of {} and {}",
                            self.format_set(w),
                            self.format_set(u),
                            self.format_set(v)
                        ));
                    }
                }
            }
        }
        Ok(report)
    }

    /// The same axioms for the presheaf `O_X`.
    pub fn presheaf_check(&self) -> Result<SheafReport> {
        let dim = |u: PointSet| Ok(self.local(u)?.dim());
        let res = |u: PointSet, v: PointSet| self.presheaf_restriction(u, v);
        self.check_axioms(&dim, &res)
    }

    fn check_axioms(
        &self,
        dim: &dyn Fn(PointSet) -> Result<usize>,
        res: &dyn Fn(PointSet, PointSet) -> Result<Mat>,
    ) -> Result<SheafReport> {
        let f = self.field();
        let mut report = SheafReport::default();
        for &u in &self.opens {
            let inside: Vec<PointSet> = self.opens.iter().copied().filter(|&v| subset(v, u)).collect();
            for mask in 1u64..(1u64 << inside.len()) {
                let cover: Vec<PointSet> = members(mask).into_iter().map(|i| inside[i]).collect();
                if cover.iter().fold(0, |acc, v| acc | v) != u {
                    continue;
                }
                report.covers += 1;
                let dims: Vec<usize> = cover.iter().map(|&v| dim(v)).collect::<Result<_>>()?;
                let mut offs = Vec::with_capacity(dims.len());
                let mut total = 0;
                for d in &dims {
                    offs.push(total);
                    total += d;
                }
                let maps: Vec<Mat> = cover.iter().map(|&v| res(u, v)).collect::<Result<_>>()?;
                let du = dim(u)?;
                let image: Vec<Vector> = (0..du)
                    .map(|k| maps.iter().flat_map(|m| m.row(k).to_vec()).collect())
                    .collect();
                let rank = linalg::rank_of(f, total, &image);
                let mut constraints: Vec<Vector> = Vec::new();
                for i in 0..cover.len() {
                    for j in i + 1..cover.len() {
                        let w = cover[i] & cover[j];
                        let ri = res(cover[i], w)?;
                        let rj = res(cover[j], w)?;
                        for col in 0..dim(w)? {
                            let mut row = linalg::zero_vec(f, total);
                            for k in 0..dims[i] {
                                row[offs[i] + k] = ri.get(k, col).clone();
                            }
                            for k in 0..dims[j] {
                                row[offs[j] + k] = &row[offs[j] + k] - rj.get(k, col);
                            }
                            constraints.push(row);
                        }
                    }
                }
                let compatible = null_space(f, total, &constraints).len();
                let names: Vec<String> = cover.iter().map(|&v| self.format_set(v)).collect();
                if rank != du {
                    report.failures.push(format!("locality fails for {} covered by {}", self.format_set(u), names.join(" ∪ ")));
                }
                if compatible != rank {
                    report.failures.push(format!("gluing fails for {} covered by {}", self.format_set(u), names.join(" ∪ ")));
                }
            }
        }
        Ok(report)
    }

    /// Points whose complement is open.
    pub fn closed_points(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| self.is_open(self.full() & !(1 << i))).collect()
    }

    /// Restrictions compose on every nested triple of opens.
    pub fn restrictions_compose(&self) -> Result<bool> {
        for &u in &self.opens {
            for &v in self.opens.iter().filter(|&&v| subset(v, u)) {
                for &w in self.opens.iter().filter(|&&w| subset(w, v)) {
                    let direct = self.presheaf_restriction(u, w)?;
                    let a = self.presheaf_restriction(u, v)?;
                    let b = self.presheaf_restriction(v, w)?;
                    if !mat_mul(self.field(), &a, &b).entries().iter().zip(direct.entries()).all(|(x, y)| x == y) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Stalk at a finite point set: the value on the minimal open containing it.
    pub fn stalk(&self, s: PointSet) -> Result<StalkData> {
        if s == 0 || !subset(s, self.full()) {
            return Err(Error::InvalidArgument("stalk at an empty or foreign point set".into()));
        }
        let w = self.minimal_open(s);
        let stalk = self.local(w)?;
        let direct = self.local(s)?;
        let map = self.presheaf_restriction(w, s)?;
        let f = self.field();
        let rows = map.row_vectors();
        let bijective = stalk.dim() == direct.dim() && linalg::rank_of(f, direct.dim(), &rows) == direct.dim();
        let sheaf_dim = self.sheaf_sections(w)?.space.dim();
        Ok(StalkData { points: s, minimal_open: w, stalk, direct, map, bijective, sheaf_dim })
    }
}

fn mat_mul(f: Field, a: &Mat, b: &Mat) -> Mat {
    if a.rows() == 0 || b.cols() == 0 || a.cols() == 0 {
        return Mat::zeros(f, a.rows(), b.cols());
    }
    a.mul(b)
}

fn rows_to_mat(f: Field, cols: usize, rows: &[Vector]) -> Result<Mat> {
    if rows.is_empty() {
        return Ok(Mat::zeros(f, 0, cols));
    }
    if cols == 0 {
        return Ok(Mat::zeros(f, rows.len(), 0));
    }
    Mat::from_rows(f, cols, rows)
}

fn null_space(f: Field, dim: usize, constraints: &[Vector]) -> Vec<Vector> {
    if dim == 0 {
        return Vec::new();
    }
    if constraints.is_empty() {
        return (0..dim).map(|i| linalg::unit_vec(f, dim, i)).collect();
    }
    linalg::kernel_basis(&Mat::from_rows(f, dim, constraints).unwrap())
}

/// `D(f)`: points on which `f` acts injectively.
pub fn d_set(points: &[SpectralPoint], f: &[crate::Scalar]) -> PointSet {
    points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.module.dim() > 0 && acts_injectively(&p.module, f))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Finite intersections of the sub-basis, then unions, plus `∅` and `X`.
pub fn generate_topology(n: usize, subbasis: &[PointSet]) -> Vec<PointSet> {
    let full: PointSet = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mut basis: Vec<PointSet> = vec![full];
    for &s in subbasis {
        let mut next = basis.clone();
        for &b in &basis {
            let x = b & s;
            if !next.contains(&x) {
                next.push(x);
            }
        }
        if !next.contains(&s) {
            next.push(s);
        }
        basis = next;
    }
    let mut opens: Vec<PointSet> = vec![0, full];
    for &b in &basis {
        let current = opens.clone();
        for u in current {
            let x = u | b;
            if !opens.contains(&x) {
                opens.push(x);
            }
        }
    }
    opens.sort_by_key(|&u| (u.count_ones(), u));
    opens.dedup();
    opens
}

/// Sections of the sheaf: compatible families in `Π_{x∈U} O(U_x)`.
#[derive(Clone, Debug)]
pub struct SheafSections {
    pub open: PointSet,
    /// `(point, O(U_x), U_x)` for each point of `U`.
    pub components: Vec<(usize, Arc<LocalSections>, PointSet)>,
    pub offsets: Vec<usize>,
    pub ambient: usize,
    pub space: Subspace,
    pub algebra: Option<Arc<Algebra>>,
}

impl SheafSections {
    fn component_mul(&self, x: &[crate::Scalar], y: &[crate::Scalar], f: Field) -> Vector {
        let mut out = linalg::zero_vec(f, self.ambient);
        for (k, (_, l, _)) in self.components.iter().enumerate() {
            if let Some(o) = &l.o {
                let d = o.dim();
                let p = o.algebra().mul(&x[self.offsets[k]..self.offsets[k] + d], &y[self.offsets[k]..self.offsets[k] + d]);
                out[self.offsets[k]..self.offsets[k] + d].clone_from_slice(&p);
            }
        }
        out
    }

    fn build_algebra(&self, f: Field) -> Result<Algebra> {
        let basis = self.space.basis();
        if basis.is_empty() {
            return Err(Error::InvalidArgument("no sections over the empty set".into()));
        }
        let coords = |v: &Vector| {
            self.space.coordinates(v).ok_or_else(|| Error::Internal("sections are not closed under products".into()))
        };
        let table: Vec<Vec<Vector>> = basis
            .iter()
            .map(|x| basis.iter().map(|y| coords(&self.component_mul(x, y, f))).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let mut one = Vec::with_capacity(self.ambient);
        for (_, l, _) in &self.components {
            one.extend(l.o.as_ref().map(|o| o.algebra().unit().clone()).unwrap_or_default());
        }
        let unit = coords(&one)?;
        let labels = (1..=basis.len()).map(|i| format!("s{i}")).collect();
        Algebra::from_structure_constants(f, labels, table, unit)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

#[derive(Clone, Debug, Default)]
pub struct SheafReport {
    pub covers: usize,
    pub failures: Vec<String>,
}

impl SheafReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct StalkData {
    pub points: PointSet,
    pub minimal_open: PointSet,
    pub stalk: Arc<LocalSections>,
    /// `O^A(P̃)` computed directly.
    pub direct: Arc<LocalSections>,
    /// The comparison map from the stalk to `O^A(P̃)`.
    pub map: Mat,
    pub bijective: bool,
    /// Dimension of the sheaf sections on the minimal open.
    pub sheaf_dim: usize,
}

#[cfg(test)]
mod tests;

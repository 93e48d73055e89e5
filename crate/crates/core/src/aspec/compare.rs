use std::sync::Arc;

use super::{generate_topology, members, ASpecSpace, PointSet, SheafSections};
use crate::algebra::{Algebra, AlgebraMap, Presentation};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Mat, Subspace, Vector};
use crate::module::{annihilator, are_isomorphic, is_simple, residue_modules, simple_modules, ModuleRep, Provenance, SpectralPoint};
use crate::poly::Poly;

/// Classical `Spec A` of a commutative algebra against `aSpec A`.
#[derive(Clone, Debug)]
pub struct SpecComparison {
    pub primes: usize,
    pub points: usize,
    /// `matching[i]` is the prime annihilating point `i`.
    pub matching: Vec<Option<usize>>,
    pub topology_match: bool,
    pub discrete: bool,
    /// Per point: the stalk is local and agrees with the localization.
    pub stalks: Vec<bool>,
}

impl SpecComparison {
    pub fn agrees(&self) -> bool {
        self.primes == self.points
            && self.matching.iter().all(Option::is_some)
            && self.topology_match
            && self.stalks.iter().all(|&b| b)
    }
}

fn x_element(a: &Algebra, monomials: &[(u32, u32)], modulus: &Poly) -> Vector {
    match monomials.iter().position(|m| *m == (1, 0)) {
        Some(i) => a.basis_element(i),
        None => {
            // degree one modulus: x is a scalar
            let m = modulus.monic();
            linalg::scale_vec(&-&m.coeff(0), a.unit())
        }
    }
}

fn eval_at(a: &Algebra, x: &Vector, p: &Poly) -> Vector {
    let mut acc = a.zero();
    for c in p.coeffs().iter().rev() {
        acc = a.mul(&acc, x);
        acc = linalg::add_vec(&acc, &linalg::scale_vec(c, a.unit()));
    }
    acc
}

/// Primes of `A` with the kernels of `A → A_𝔭`.
fn classical_primes(a: &Algebra) -> Result<Vec<(Subspace, Subspace)>> {
    if let Presentation::Poly(pq) = a.presentation() {
        if let Some(m) = pq.univariate_modulus() {
            let x = x_element(a, &pq.monomials, &m);
            let factors = m.factor()?;
            let mut out = Vec::new();
            for (g, k) in &factors {
                let prime = a.ideal_closure(&[eval_at(a, &x, g)]);
                // A_𝔭 = k[x]/(g^k)
                out.push((prime, a.ideal_closure(&[eval_at(a, &x, &g.pow(*k))])));
            }
            return Ok(out);
        }
    }
    let rad = a.radical()?;
    let blocks = a.blocks()?;
    let mut out = Vec::new();
    for b in &blocks {
        let comp = linalg::sub_vec(a.unit(), &b.idempotent);
        let mut gens = rad.basis.clone();
        gens.push(comp.clone());
        out.push((a.ideal_closure(&gens), a.ideal_closure(&[comp])));
    }
    Ok(out)
}

pub fn spec_compare(a: &Arc<Algebra>) -> Result<SpecComparison> {
    if !a.is_commutative() {
        return Err(Error::InvalidArgument("Spec comparison needs a commutative algebra".into()));
    }
    let primes = classical_primes(a)?;
    let space = ASpecSpace::of_simples(a)?;
    let matching: Vec<Option<usize>> = space
        .points()
        .iter()
        .map(|p| {
            let ann = annihilator(&p.module);
            primes.iter().position(|(q, _)| q.contains_subspace(&ann) && ann.contains_subspace(q))
        })
        .collect();
    // Zariski D(f) = {𝔭 : f ∉ 𝔭}, indexed through the matching
    let zariski_sub: Vec<PointSet> = space
        .subbasis()
        .iter()
        .map(|(_, g, _)| {
            matching
                .iter()
                .enumerate()
                .filter(|(_, m)| m.is_some_and(|j| !primes[j].0.contains(g)))
                .fold(0, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let zariski = generate_topology(space.points().len(), &zariski_sub);
    let mut ours = space.opens().to_vec();
    ours.sort_unstable();
    let mut theirs = zariski.clone();
    theirs.sort_unstable();
    let discrete = ours.len() == 1 << space.points().len();
    let mut stalks = Vec::new();
    for (i, m) in matching.iter().enumerate() {
        let ok = match m {
            None => false,
            Some(j) => {
                let st = space.stalk(1 << i)?;
                let loc = &primes[*j].1;
                let local = match &st.stalk.o {
                    Some(o) => o.algebra().blocks()?.len() == 1,
                    None => false,
                };
                local
                    && st.stalk.dim() == a.dim() - loc.dim()
                    && st.stalk.kernel.contains_subspace(loc)
                    && loc.contains_subspace(&st.stalk.kernel)
            }
        };
        stalks.push(ok);
    }
    Ok(SpecComparison { primes: primes.len(), points: space.points().len(), matching, topology_match: ours == theirs, discrete, stalks })
}

/// One side of the round trip `X ≃ aSpec Γ(X)`.
#[derive(Clone, Debug)]
pub struct RoundtripSide {
    pub global_dim: usize,
    pub points_bijective: bool,
    pub topology_match: bool,
    pub opens: Vec<(PointSet, bool)>,
    pub failures: Vec<String>,
}

impl RoundtripSide {
    pub fn holds(&self) -> bool {
        self.points_bijective && self.topology_match && self.opens.iter().all(|o| o.1) && self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct RoundtripReport {
    pub presheaf: RoundtripSide,
    pub sheaf: RoundtripSide,
}

impl RoundtripReport {
    pub fn holds(&self) -> bool {
        self.presheaf.holds() && self.sheaf.holds()
    }
}

fn module_from_images(g: &Arc<Algebra>, dim: usize, actions: Vec<Mat>) -> Result<ModuleRep> {
    ModuleRep::new(g.clone(), dim, actions)
}

fn linear_combo(f: Field, n: usize, c: &[crate::Scalar], mats: &[Mat]) -> Mat {
    let mut out = Mat::zeros(f, n, n);
    for (s, m) in c.iter().zip(mats) {
        if !s.is_zero() {
            out = out.add(&m.scale(s));
        }
    }
    out
}

/// Compares the restriction maps out of `G` on both spaces.
fn compare_side(
    x: &ASpecSpace,
    g: &Arc<Algebra>,
    modules: Vec<ModuleRep>,
    side_x: &dyn Fn(PointSet) -> Result<Mat>,
    side_y: &dyn Fn(&ASpecSpace, PointSet) -> Result<Mat>,
) -> Result<RoundtripSide> {
    let f = g.field();
    let mut failures = Vec::new();
    let mut bij = true;
    for m in &modules {
        if !is_simple(m)? {
            bij = false;
            failures.push("a point is not simple over the global sections".into());
        }
    }
    for i in 0..modules.len() {
        for j in i + 1..modules.len() {
            if are_isomorphic(&modules[i], &modules[j])? {
                bij = false;
                failures.push(format!("points {} and {} coincide", x.points()[i].name, x.points()[j].name));
            }
        }
    }
    let simples = match simple_modules(g) {
        Ok(s) => s.len(),
        Err(Error::UnsupportedAlgebra(_)) => residue_modules(g)?.len(),
        Err(e) => return Err(e),
    };
    if simples != modules.len() {
        bij = false;
        failures.push(format!("{} simples over the global sections, {} points", simples, modules.len()));
    }
    let points = modules
        .into_iter()
        .zip(x.points())
        .map(|(m, p)| SpectralPoint { name: p.name.clone(), module: m, provenance: Provenance::Simple })
        .collect();
    let y = ASpecSpace::new(g.clone(), points, x.order(), &[])?;
    let mut ox = x.opens().to_vec();
    ox.sort_unstable();
    let mut oy = y.opens().to_vec();
    oy.sort_unstable();
    let topology_match = ox == oy;
    let mut opens = Vec::new();
    for &u in x.opens() {
        if !y.is_open(u) {
            opens.push((u, false));
            continue;
        }
        let mx = side_x(u)?;
        let my = side_y(&y, u)?;
        let kx = kernel_of(f, g.dim(), &mx)?;
        let ky = kernel_of(f, g.dim(), &my)?;
        let onto = |m: &Mat| linalg::rank_of(f, m.cols(), &m.row_vectors()) == m.cols();
        let ok = mx.cols() == my.cols()
            && onto(&mx)
            && onto(&my)
            && kx.contains_subspace(&ky)
            && ky.contains_subspace(&kx);
        if !ok {
            failures.push(format!("sections over {} differ", x.format_set(u)));
        }
        opens.push((u, ok));
    }
    Ok(RoundtripSide { global_dim: g.dim(), points_bijective: bij, topology_match, opens, failures })
}

fn kernel_of(f: Field, n: usize, m: &Mat) -> Result<Subspace> {
    if m.cols() == 0 {
        let all: Vec<Vector> = (0..n).map(|i| linalg::unit_vec(f, n, i)).collect();
        return Subspace::new(f, n, &all);
    }
    Subspace::new(f, n, &linalg::kernel_basis(&m.transpose()))
}

/// Global sections `G`, then `aSpec G` on the points of `X` viewed as
/// `G`-modules, compared with `X` open by open.
pub fn global_sections_roundtrip(x: &ASpecSpace) -> Result<RoundtripReport> {
    let f = x.field();
    let full = x.full();
    // presheaf side: G = O_X(X)
    let top = x.local(full)?;
    let o = top.o.as_ref().ok_or_else(|| Error::InvalidArgument("space has no points".into()))?;
    let g = o.algebra().clone();
    let modules: Vec<ModuleRep> = (0..x.points().len()).map(|i| o.module(i)).collect::<Result<_>>()?;
    let modules: Vec<ModuleRep> = modules
        .into_iter()
        .map(|m| module_from_images(&g, m.dim(), m.action().to_vec()))
        .collect::<Result<_>>()?;
    let presheaf = compare_side(
        x,
        &g,
        modules,
        &|u| x.presheaf_restriction(full, u),
        &|y, u| {
            let l = y.local(u)?;
            let cols = l.dim();
            let rows: Vec<Vector> = (0..g.dim()).map(|k| l.image(&linalg::unit_vec(f, g.dim(), k))).collect();
            Ok(if cols == 0 { Mat::zeros(f, g.dim(), 0) } else { Mat::from_rows(f, cols, &rows)? })
        },
    )?;
    // sheaf side: G = 𝒪_X(X)
    let whole = x.sheaf_sections(full)?;
    let gs = whole.algebra.clone().expect("sections algebra");
    let mut modules = Vec::new();
    for (k, (p, l, ux)) in whole.components.iter().enumerate() {
        let ox = l.o.as_ref().expect("nonempty minimal open");
        let idx = members(*ux).iter().position(|q| q == p).expect("point lies in its minimal open");
        let m = ox.module(idx)?;
        let actions: Vec<Mat> = whole
            .space
            .basis()
            .iter()
            .map(|s| linear_combo(f, m.dim(), &s[whole.offsets[k]..whole.offsets[k] + ox.dim()], m.action()))
            .collect();
        modules.push(module_from_images(&gs, m.dim(), actions)?);
    }
    let sections: Vec<(PointSet, SheafSections)> =
        x.opens().iter().map(|&u| Ok((u, x.sheaf_sections(u)?))).collect::<Result<_>>()?;
    let find = |u: PointSet| sections.iter().find(|s| s.0 == u).map(|s| &s.1).expect("open");
    let sheaf = compare_side(
        x,
        &gs,
        modules,
        &|u| x.sheaf_restriction(&whole, find(u)),
        &|y, u| {
            let target = y.sheaf_sections(u)?;
            let rows: Vec<Vector> = (0..gs.dim())
                .map(|k| {
                    let e = linalg::unit_vec(f, gs.dim(), k);
                    let mut amb = Vec::new();
                    for (_, l, _) in &target.components {
                        amb.extend(l.image(&e));
                    }
                    target.space.coordinates(&amb).ok_or_else(|| Error::Internal("image is not a section".into()))
                })
                .collect::<Result<_>>()?;
            Ok(if target.dim() == 0 { Mat::zeros(f, gs.dim(), 0) } else { Mat::from_rows(f, target.dim(), &rows)? })
        },
    )?;
    Ok(RoundtripReport { presheaf, sheaf })
}

/// `aSpec(φ): aSpec A → aSpec B` for `φ: B → A`.
#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub point_map: Vec<Option<usize>>,
    pub continuous: bool,
    pub sections_ok: bool,
    pub failures: Vec<String>,
}

impl MorphismReport {
    pub fn holds(&self) -> bool {
        self.point_map.iter().all(Option::is_some) && self.continuous && self.sections_ok && self.failures.is_empty()
    }
}

/// Map `O_Y(V) → O_X(U)` induced by `φ`, or `None` if not well defined.
fn section_map(y: &ASpecSpace, v: PointSet, x: &ASpecSpace, u: PointSet, phi: &AlgebraMap) -> Result<Option<Mat>> {
    let f = x.field();
    let (lv, lu) = (y.local(v)?, x.local(u)?);
    let a_dim = x.algebra().dim();
    for k in lv.kernel.basis() {
        let img = phi.apply(f, a_dim, k);
        if !lu.kernel.contains(&img) {
            return Ok(None);
        }
    }
    let ov = match &lv.o {
        None => return Ok(Some(Mat::zeros(f, 0, lu.dim()))),
        Some(o) => o,
    };
    let images = Mat::from_cols(f, ov.dim(), &ov.eta().images)?;
    let rows: Vec<Vector> = (0..ov.dim())
        .map(|k| {
            let b = linalg::solve(&images, &linalg::unit_vec(f, ov.dim(), k))?
                .ok_or_else(|| Error::Internal("B → O^B is not onto".into()))?;
            Ok(lu.image(&phi.apply(f, a_dim, &b)))
        })
        .collect::<Result<_>>()?;
    Ok(Some(if lu.dim() == 0 { Mat::zeros(f, rows.len(), 0) } else { Mat::from_rows(f, lu.dim(), &rows)? }))
}

fn same(a: &Mat, b: &Mat) -> bool {
    a.rows() == b.rows() && a.cols() == b.cols() && a.entries() == b.entries()
}

fn product(f: Field, a: &Mat, b: &Mat) -> Mat {
    if a.rows() == 0 || a.cols() == 0 || b.cols() == 0 {
        return Mat::zeros(f, a.rows(), b.cols());
    }
    a.mul(b)
}

pub fn aspec_morphism(phi: &AlgebraMap, x: &ASpecSpace, y: &ASpecSpace) -> Result<MorphismReport> {
    let (a, b) = (x.algebra(), y.algebra());
    phi.verify(b, a)?;
    let f = x.field();
    let mut failures = Vec::new();
    let mut point_map = Vec::new();
    for p in x.points() {
        let r = p.module.restrict(b, phi)?;
        let mut hit = None;
        for (j, q) in y.points().iter().enumerate() {
            if q.module.dim() == r.dim() && are_isomorphic(&r, &q.module)? {
                hit = Some(j);
                break;
            }
        }
        if hit.is_none() {
            failures.push(format!("{} restricts to no point of the target", p.name));
        }
        point_map.push(hit);
    }
    let preimage = |v: PointSet| -> PointSet {
        point_map
            .iter()
            .enumerate()
            .filter(|(_, j)| j.is_some_and(|j| v >> j & 1 == 1))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    };
    let continuous = y.opens().iter().all(|&v| x.is_open(preimage(v)));
    let mut sections_ok = continuous;
    if continuous {
        let mut maps = Vec::new();
        for &v in y.opens() {
            let u = preimage(v);
            match section_map(y, v, x, u, phi)? {
                None => {
                    sections_ok = false;
                    failures.push(format!("no induced map on sections over {}", y.format_set(v)));
                }
                Some(m) => maps.push((v, u, m)),
            }
        }
        for (v, u, m) in &maps {
            for (v2, u2, m2) in &maps {
                if v2 & !v != 0 {
                    continue;
                }
                let left = product(f, m, &x.presheaf_restriction(*u, *u2)?);
                let right = product(f, &y.presheaf_restriction(*v, *v2)?, m2);
                if !same(&left, &right) {
                    sections_ok = false;
                    failures.push(format!("induced maps do not commute with restriction to {}", y.format_set(*v2)));
                }
            }
        }
    }
    Ok(MorphismReport { point_map, continuous, sections_ok, failures })
}

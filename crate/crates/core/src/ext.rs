//! Minimal projective resolutions, `Ext^n` for `n ≤ 2` and Yoneda products.
//!
//! Projective modules are direct sums of indecomposables `e_i A`, each
//! coordinatized by the echelon basis of `{e_i b}`. An `A`-linear map out of
//! a projective is stored both as its generator images and as the full
//! matrix of `v ↦ v·Φ`.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Mat, Subspace, Vector};
use crate::module::ModuleRep;

/// Coordinates for the indecomposable projectives `e_i A`.
#[derive(Clone, Debug)]
pub struct Projectives {
    algebra: Arc<Algebra>,
    idempotents: Vec<Vector>,
    spaces: Vec<Subspace>,
}

impl Projectives {
    pub fn new(a: &Arc<Algebra>) -> Result<Projectives> {
        let blocks = a.blocks()?;
        if blocks.iter().any(|b| b.residue_dim != 1) {
            return Err(Error::UnsupportedAlgebra("projective resolutions need a basic split algebra".into()));
        }
        let idempotents: Vec<Vector> = blocks.into_iter().map(|b| b.idempotent).collect();
        let spaces = idempotents
            .iter()
            .map(|e| {
                let vs: Vec<Vector> = (0..a.dim()).map(|j| a.mul(e, &a.basis_element(j))).collect();
                Subspace::new(a.field(), a.dim(), &vs).unwrap()
            })
            .collect();
        Ok(Projectives { algebra: a.clone(), idempotents, spaces })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn count(&self) -> usize {
        self.idempotents.len()
    }
    pub fn idempotent(&self, i: usize) -> &Vector {
        &self.idempotents[i]
    }
    /// Echelon basis of `e_i A` inside `A`.
    pub fn basis(&self, i: usize) -> &[Vector] {
        self.spaces[i].basis()
    }

    pub fn dim_of(&self, vertices: &[usize]) -> usize {
        vertices.iter().map(|&v| self.spaces[v].dim()).sum()
    }

    fn offsets(&self, vertices: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(vertices.len());
        let mut acc = 0;
        for &v in vertices {
            out.push(acc);
            acc += self.spaces[v].dim();
        }
        out
    }

    /// `⊕ e_{v_s} A` as a right module.
    pub fn module(&self, vertices: &[usize]) -> ModuleRep {
        let a = &self.algebra;
        let f = a.field();
        let dim = self.dim_of(vertices);
        let offsets = self.offsets(vertices);
        let action = (0..a.dim())
            .map(|b| {
                let mut m = Mat::zeros(f, dim, dim);
                for (s, &v) in vertices.iter().enumerate() {
                    for (k, w) in self.spaces[v].basis().iter().enumerate() {
                        let c = self.spaces[v].coordinates(&a.mul(w, &a.basis_element(b))).unwrap();
                        for (l, x) in c.into_iter().enumerate() {
                            m.set(offsets[s] + k, offsets[s] + l, x);
                        }
                    }
                }
                m
            })
            .collect();
        ModuleRep::new(a.clone(), dim, action).expect("projective module axioms")
    }

    /// Coordinates of the generator `e_{v_s}` of summand `s`.
    pub fn generator(&self, vertices: &[usize], s: usize) -> Vector {
        let f = self.algebra.field();
        let mut out = linalg::zero_vec(f, self.dim_of(vertices));
        let off = self.offsets(vertices)[s];
        let c = self.spaces[vertices[s]].coordinates(&self.idempotents[vertices[s]]).unwrap();
        for (l, x) in c.into_iter().enumerate() {
            out[off + l] = x;
        }
        out
    }

    /// The `A`-linear map `⊕ e_{v_s}A → N` sending generator `s` to `images[s]`.
    pub fn map_from_images(&self, vertices: &[usize], target: &ModuleRep, images: &[Vector]) -> Mat {
        let f = self.algebra.field();
        let rows: Vec<Vector> = vertices
            .iter()
            .zip(images)
            .flat_map(|(&v, img)| self.spaces[v].basis().iter().map(move |w| target.action_of(w).apply_right(img)))
            .collect();
        if rows.is_empty() {
            return Mat::zeros(f, 0, target.dim());
        }
        Mat::from_rows(f, target.dim(), &rows).unwrap()
    }

    /// Generator images of a map given as a full matrix.
    pub fn images_of(&self, vertices: &[usize], map: &Mat) -> Vec<Vector> {
        (0..vertices.len()).map(|s| map.apply_right(&self.generator(vertices, s))).collect()
    }

    /// Some `x ∈ P·e_v` with `x·D = y`, where `P = ⊕ e_{w}A`.
    fn lift_into(&self, vertices: &[usize], map: &Mat, v: usize, y: &[crate::Scalar]) -> Result<Vector> {
        let f = self.algebra.field();
        let p = self.module(vertices);
        let corner = p.action_of(&self.idempotents[v]).row_vectors();
        let images: Vec<Vector> = corner.iter().map(|r| map.apply_right(r)).collect();
        if images.is_empty() {
            return if linalg::is_zero_vec(y) { Ok(linalg::zero_vec(f, p.dim())) } else { Err(Error::Internal("lift into zero module".into())) };
        }
        let m = Mat::from_cols(f, y.len(), &images)?;
        let c = linalg::solve(&m, y)?.ok_or_else(|| Error::Internal("element not in the image of the differential".into()))?;
        let mut x = linalg::zero_vec(f, p.dim());
        for (ci, r) in c.iter().zip(&corner) {
            linalg::axpy(&mut x, ci, r);
        }
        Ok(x)
    }
}

/// Projective cover `⊕ e_{v_s}A → M` built from a basis of `top M = M / M·rad`.
pub fn projective_cover(proj: &Projectives, m: &ModuleRep) -> Result<(Vec<usize>, Mat)> {
    let mut acc = m.radical_submodule()?;
    let mut vertices = Vec::new();
    let mut images = Vec::new();
    for v in 0..proj.count() {
        for row in m.action_of(proj.idempotent(v)).row_vectors() {
            if acc.insert(&row) {
                vertices.push(v);
                images.push(row);
            }
        }
    }
    if acc.dim() != m.dim() {
        return Err(Error::Internal("top does not generate the module".into()));
    }
    let map = proj.map_from_images(&vertices, m, &images);
    Ok((vertices, map))
}

/// Left kernel `{v : v·Φ = 0}`.
fn left_kernel(field: Field, rows: usize, map: &Mat) -> Vec<Vector> {
    if rows == 0 {
        return Vec::new();
    }
    if map.cols() == 0 {
        return (0..rows).map(|i| linalg::unit_vec(field, rows, i)).collect();
    }
    linalg::kernel_basis(&map.transpose())
}

/// `P_2 → P_1 → P_0 → M → 0`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub module: ModuleRep,
    pub projectives: Projectives,
    /// Summand vertices of `P_n`.
    pub terms: Vec<Vec<usize>>,
    /// `P_0 → M`.
    pub augmentation: Mat,
    /// `differentials[n-1] = d_n: P_n → P_{n-1}`.
    pub differentials: Vec<Mat>,
    /// `ker d_last`, the image of the next differential.
    pub last_kernel: Subspace,
}

impl Resolution {
    /// Multiplicity of each `e_i A` in `P_n`.
    pub fn multiplicities(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; self.projectives.count()];
        for &v in &self.terms[n] {
            out[v] += 1;
        }
        out
    }

    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    /// Map `P_n → P_{n-1}` (`n ≥ 1`) or the augmentation (`n = 0`).
    pub fn map(&self, n: usize) -> &Mat {
        if n == 0 {
            &self.augmentation
        } else {
            &self.differentials[n - 1]
        }
    }

    /// Exactness by ranks, `d∘d = 0`, and image of every differential in `P·rad`.
    pub fn verify(&self) -> Result<bool> {
        let dims: Vec<usize> = self.terms.iter().map(|t| self.projectives.dim_of(t)).collect();
        let rank = |m: &Mat| if m.rows() == 0 || m.cols() == 0 { 0 } else { m.rank() };
        if rank(&self.augmentation) != self.module.dim() {
            return Ok(false);
        }
        for n in 1..=self.length() {
            let d = &self.differentials[n - 1];
            let next = self.map(n - 1);
            if d.rows() > 0 && next.cols() > 0 && !d.mul(next).is_zero() {
                return Ok(false);
            }
            // im d_n = ker d_{n-1}
            if rank(d) != dims[n - 1] - rank(next) {
                return Ok(false);
            }
            let p = self.projectives.module(&self.terms[n - 1]);
            let rad = p.radical_submodule()?;
            if (0..d.rows()).any(|r| !rad.contains(d.row(r))) {
                return Ok(false);
            }
        }
        let last = self.map(self.length());
        Ok(self.last_kernel.dim() == dims[self.length()] - rank(last))
    }
}

/// Minimal projective resolution to homological degree `length`.
pub fn min_resolution(m: &ModuleRep, length: usize) -> Result<Resolution> {
    let proj = Projectives::new(m.algebra())?;
    let f = m.field();
    let (v0, aug) = projective_cover(&proj, m)?;
    let mut terms = vec![v0];
    let mut differentials = Vec::new();
    let mut prev_map = aug.clone();
    for _ in 0..length {
        let prev = terms.last().unwrap().clone();
        let p = proj.module(&prev);
        let kernel = Subspace::new(f, p.dim(), &left_kernel(f, p.dim(), &prev_map))?;
        let k = p.submodule(&kernel)?;
        let (vs, cover) = projective_cover(&proj, &k)?;
        let embed = if kernel.dim() == 0 { Mat::zeros(f, 0, p.dim()) } else { Mat::from_rows(f, p.dim(), kernel.basis())? };
        let d = if cover.rows() == 0 { Mat::zeros(f, 0, p.dim()) } else { cover.mul(&embed) };
        terms.push(vs);
        differentials.push(d.clone());
        prev_map = d;
    }
    let last_dim = proj.dim_of(terms.last().unwrap());
    let last_kernel = Subspace::new(f, last_dim, &left_kernel(f, last_dim, &prev_map))?;
    Ok(Resolution { module: m.clone(), projectives: proj, terms, augmentation: aug, differentials, last_kernel })
}

/// Coordinates of `Hom_A(P_n, N) ≅ ⊕_s N·e_{v_s}`.
#[derive(Clone, Debug)]
struct HomCoords {
    vertices: Vec<usize>,
    corners: Vec<Subspace>,
}

impl HomCoords {
    fn new(proj: &Projectives, vertices: &[usize], target: &ModuleRep) -> HomCoords {
        let corners = vertices
            .iter()
            .map(|&v| Subspace::new(target.field(), target.dim(), &target.action_of(proj.idempotent(v)).row_vectors()).unwrap())
            .collect();
        HomCoords { vertices: vertices.to_vec(), corners }
    }

    fn dim(&self) -> usize {
        self.corners.iter().map(Subspace::dim).sum()
    }

    fn images(&self, coords: &[crate::Scalar], field: Field, target_dim: usize) -> Vec<Vector> {
        let mut k = 0;
        self.corners
            .iter()
            .map(|c| {
                let mut img = linalg::zero_vec(field, target_dim);
                for b in c.basis() {
                    linalg::axpy(&mut img, &coords[k], b);
                    k += 1;
                }
                img
            })
            .collect()
    }

    fn coords(&self, images: &[Vector]) -> Vector {
        images.iter().zip(&self.corners).flat_map(|(img, c)| c.coordinates(img).expect("image lies in the corner")).collect()
    }
}

/// `Ext^degree(source, target)` with echelon cocycle representatives.
#[derive(Clone, Debug)]
pub struct ExtSpace {
    pub degree: usize,
    pub source: ModuleRep,
    pub target: ModuleRep,
    pub resolution: Arc<Resolution>,
    coords: HomCoords,
    coboundaries: Subspace,
    reps: Subspace,
}

impl ExtSpace {
    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    /// Cocycle basis as maps `P_degree → target`.
    pub fn cocycles(&self) -> Vec<Mat> {
        self.reps.basis().iter().map(|c| self.cochain_map(c)).collect()
    }

    fn cochain_map(&self, c: &[crate::Scalar]) -> Mat {
        let res = &self.resolution;
        let images = self.coords.images(c, self.target.field(), self.target.dim());
        res.projectives.map_from_images(&res.terms[self.degree], &self.target, &images)
    }

    /// Coordinates of a cocycle `P_degree → target` in the fixed basis.
    pub fn class_of(&self, map: &Mat) -> Result<Vector> {
        let res = &self.resolution;
        let images = res.projectives.images_of(&res.terms[self.degree], map);
        let c = self.coords.coords(&images);
        self.reps
            .coordinates(&self.coboundaries.reduce(&c))
            .ok_or_else(|| Error::Internal("map is not a cocycle".into()))
    }

    /// The cocycle for a coordinate vector.
    pub fn element(&self, coords: &[crate::Scalar]) -> Mat {
        let f = self.target.field();
        let mut c = linalg::zero_vec(f, self.coords.dim());
        for (x, b) in coords.iter().zip(self.reps.basis()) {
            linalg::axpy(&mut c, x, b);
        }
        self.cochain_map(&c)
    }
}

/// `Ext^degree(source, target)` for `degree ≤ 2`.
pub fn ext(source: &ModuleRep, target: &ModuleRep, degree: usize) -> Result<ExtSpace> {
    if degree > 2 {
        return Err(Error::InvalidArgument(format!("Ext degree {degree} is not computed")));
    }
    let res = Arc::new(min_resolution(source, 2)?);
    ext_with(res, target, degree)
}

pub fn ext_with(res: Arc<Resolution>, target: &ModuleRep, degree: usize) -> Result<ExtSpace> {
    if **res.module.algebra() != **target.algebra() {
        return Err(Error::InvalidArgument("modules over different algebras".into()));
    }
    if degree > res.length() {
        return Err(Error::InvalidArgument(format!("resolution too short for degree {degree}")));
    }
    let f = target.field();
    let proj = &res.projectives;
    let here = HomCoords::new(proj, &res.terms[degree], target);
    let dim = here.dim();
    let to_map = |hc: &HomCoords, c: &[crate::Scalar]| {
        proj.map_from_images(&hc.vertices, target, &hc.images(c, f, target.dim()))
    };
    // cocycles: φ∘d_{n+1} = 0, or φ vanishing on ker d_n at the top degree
    let mut equations: Vec<Vector> = Vec::new();
    for k in 0..dim {
        let phi = to_map(&here, &linalg::unit_vec(f, dim, k));
        let col: Vector = if degree < res.length() {
            let d = &res.differentials[degree];
            if d.rows() == 0 { Vec::new() } else { d.mul(&phi).flatten() }
        } else {
            res.last_kernel.basis().iter().flat_map(|v| phi.apply_right(v)).collect()
        };
        equations.push(col);
    }
    let cocycles: Vec<Vector> = if dim == 0 {
        Vec::new()
    } else if equations[0].is_empty() {
        (0..dim).map(|k| linalg::unit_vec(f, dim, k)).collect()
    } else {
        linalg::kernel_basis(&Mat::from_cols(f, equations[0].len(), &equations)?)
    };
    // coboundaries: ψ∘d_n for ψ ∈ Hom(P_{n-1}, N)
    let mut bounds = Vec::new();
    if degree > 0 {
        let below = HomCoords::new(proj, &res.terms[degree - 1], target);
        let d = &res.differentials[degree - 1];
        for k in 0..below.dim() {
            let psi = to_map(&below, &linalg::unit_vec(f, below.dim(), k));
            let comp = if d.rows() == 0 { Mat::zeros(f, 0, target.dim()) } else { d.mul(&psi) };
            bounds.push(here.coords(&proj.images_of(&res.terms[degree], &comp)));
        }
    }
    let coboundaries = Subspace::new(f, dim, &bounds)?;
    let reduced: Vec<Vector> = cocycles.iter().map(|c| coboundaries.reduce(c)).collect();
    let reps = Subspace::new(f, dim, &reduced)?;
    Ok(ExtSpace { degree, source: res.module.clone(), target: target.clone(), resolution: res, coords: here, coboundaries, reps })
}

/// Yoneda product `ζ·ξ ∈ Ext²(M_i, M_l)` of `ξ ∈ Ext¹(M_i, M_j)` and
/// `ζ ∈ Ext¹(M_j, M_l)`, given by coordinates in the respective bases.
pub fn cup_product(
    xi_space: &ExtSpace,
    xi: &[crate::Scalar],
    zeta_space: &ExtSpace,
    zeta: &[crate::Scalar],
    target: &ExtSpace,
) -> Result<Vector> {
    if xi_space.degree != 1 || zeta_space.degree != 1 || target.degree != 2 {
        return Err(Error::InvalidArgument("cup product takes two Ext¹ classes into Ext²".into()));
    }
    let middle_ok = xi_space.target.dim() == zeta_space.source.dim()
        && xi_space.target.action().iter().zip(zeta_space.source.action()).all(|(a, b)| a == b);
    if !middle_ok {
        return Err(Error::InvalidArgument("Ext classes are not composable".into()));
    }
    if target.source.action() != xi_space.source.action() || target.target.action() != zeta_space.target.action() {
        return Err(Error::InvalidArgument("target Ext² does not match the outer modules".into()));
    }
    let f = xi_space.target.field();
    let p = &xi_space.resolution;
    let q = &zeta_space.resolution;
    let proj = &p.projectives;
    let fmap = xi_space.element(xi);
    let gmap = zeta_space.element(zeta);
    // f₀: P_1 → Q_0 lifting f through the augmentation of Q
    let f0_images: Vec<Vector> = p.terms[1]
        .iter()
        .enumerate()
        .map(|(s, &v)| {
            let y = fmap.apply_right(&proj.generator(&p.terms[1], s));
            proj.lift_into(&q.terms[0], &q.augmentation, v, &y)
        })
        .collect::<Result<_>>()?;
    let q0 = proj.module(&q.terms[0]);
    let f0 = proj.map_from_images(&p.terms[1], &q0, &f0_images);
    // f₁: P_2 → Q_1 with f₁·d^Q_1 = d^P_2·f₀
    let q1 = proj.module(&q.terms[1]);
    let f1_images: Vec<Vector> = p.terms[2]
        .iter()
        .enumerate()
        .map(|(s, &v)| {
            let g = proj.generator(&p.terms[2], s);
            let y = f0.apply_right(&p.differentials[1].apply_right(&g));
            proj.lift_into(&q.terms[1], &q.differentials[0], v, &y)
        })
        .collect::<Result<_>>()?;
    let f1 = proj.map_from_images(&p.terms[2], &q1, &f1_images);
    let comp = if f1.rows() == 0 { Mat::zeros(f, 0, gmap.cols()) } else { f1.mul(&gmap) };
    target.class_of(&comp)
}

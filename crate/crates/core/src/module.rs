//! Right modules given by action matrices on row vectors.

use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraMap, QuotientMap};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{self, Mat, Subspace, Vector};

/// A right `A`-module: `action[b]` is the matrix of `v ↦ v·b_b`.
#[derive(Clone, Debug)]
pub struct ModuleRep {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Mat>,
}

impl PartialEq for ModuleRep {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.algebra, &o.algebra) || *self.algebra == *o.algebra)
            && self.dim == o.dim
            && self.action == o.action
    }
}

impl ModuleRep {
    pub fn new(algebra: Arc<Algebra>, dim: usize, action: Vec<Mat>) -> Result<ModuleRep> {
        if action.len() != algebra.dim() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        for (i, m) in action.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "action of '{}' is {}x{} on a module of dimension {dim}",
                    algebra.labels()[i],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch("action matrix field".into()));
            }
        }
        let m = ModuleRep { algebra, dim, action };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let f = self.field();
        if self.action_of(self.algebra.unit()) != Mat::identity(f, self.dim) {
            return Err(Error::InvalidModule("the unit does not act as the identity".into()));
        }
        let n = self.algebra.dim();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.action[i].mul(&self.action[j]);
                let rhs = self.action_of(&self.algebra.structure_constants()[i][j]);
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "η({})·η({}) ≠ η({}·{})",
                        self.algebra.labels()[i],
                        self.algebra.labels()[j],
                        self.algebra.labels()[i],
                        self.algebra.labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }
    pub fn field(&self) -> Field {
        self.algebra.field()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn action(&self) -> &[Mat] {
        &self.action
    }

    /// `η(f) = Σ f_b η(b)`.
    pub fn action_of(&self, f: &[Scalar]) -> Mat {
        let mut out = Mat::zeros(self.field(), self.dim, self.dim);
        for (c, m) in f.iter().zip(&self.action) {
            if !c.is_zero() {
                out = out.add(&m.scale(c));
            }
        }
        out
    }

    /// The right regular module `A_A`.
    pub fn regular(a: &Arc<Algebra>) -> ModuleRep {
        let action = (0..a.dim()).map(|i| a.right_mult(&a.basis_element(i))).collect();
        ModuleRep { algebra: a.clone(), dim: a.dim(), action }
    }

    pub fn direct_sum(parts: &[ModuleRep]) -> Result<ModuleRep> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("empty direct sum".into()))?;
        let a = first.algebra.clone();
        let f = a.field();
        let dim = parts.iter().map(|m| m.dim).sum();
        let action = (0..a.dim())
            .map(|b| Mat::direct_sum(f, &parts.iter().map(|m| m.action[b].clone()).collect::<Vec<_>>()))
            .collect();
        Ok(ModuleRep { algebra: a, dim, action })
    }

    /// Restriction of scalars along `phi: B → A`.
    pub fn restrict(&self, source: &Arc<Algebra>, phi: &AlgebraMap) -> Result<ModuleRep> {
        phi.verify(source, &self.algebra)?;
        let action = phi.images.iter().map(|img| self.action_of(img)).collect();
        ModuleRep::new(source.clone(), self.dim, action)
    }

    /// Closure of `vectors` under the action.
    pub fn spin(&self, vectors: &[Vector]) -> Subspace {
        let mut space = Subspace::zero(self.field(), self.dim);
        let mut queue: Vec<Vector> = vectors.to_vec();
        while let Some(v) = queue.pop() {
            if !space.insert(&v) {
                continue;
            }
            for m in &self.action {
                queue.push(m.apply_right(&v));
            }
        }
        space
    }

    pub fn is_submodule(&self, sub: &Subspace) -> bool {
        sub.basis().iter().all(|v| self.action.iter().all(|m| sub.contains(&m.apply_right(v))))
    }

    /// The submodule spanned by `sub` (must be invariant), in the echelon basis of `sub`.
    pub fn submodule(&self, sub: &Subspace) -> Result<ModuleRep> {
        if !self.is_submodule(sub) {
            return Err(Error::InvalidModule("subspace is not invariant".into()));
        }
        let f = self.field();
        let k = sub.dim();
        let action = self
            .action
            .iter()
            .map(|m| {
                let rows: Vec<Vector> = sub.basis().iter().map(|v| sub.coordinates(&m.apply_right(v)).unwrap()).collect();
                Mat::from_rows(f, k, &rows).unwrap()
            })
            .collect();
        Ok(ModuleRep { algebra: self.algebra.clone(), dim: k, action })
    }

    /// `M / sub`, together with the projection.
    pub fn quotient(&self, sub: &Subspace) -> Result<(ModuleRep, QuotientMap)> {
        if !self.is_submodule(sub) {
            return Err(Error::InvalidModule("subspace is not invariant".into()));
        }
        let f = self.field();
        let qm = QuotientMap::new(sub);
        let k = qm.kept().len();
        let action = self
            .action
            .iter()
            .map(|m| {
                let rows: Vec<Vector> = qm
                    .kept()
                    .iter()
                    .map(|&i| qm.project(&m.apply_right(&linalg::unit_vec(f, self.dim, i))))
                    .collect();
                Mat::from_rows(f, k, &rows).unwrap()
            })
            .collect();
        Ok((ModuleRep { algebra: self.algebra.clone(), dim: k, action }, qm))
    }

    /// `M · rad(A)`.
    pub fn radical_submodule(&self) -> Result<Subspace> {
        let rad = self.algebra.radical()?;
        let mut s = Subspace::zero(self.field(), self.dim);
        for r in &rad.basis {
            let m = self.action_of(r);
            for i in 0..self.dim {
                s.insert(m.row(i));
            }
        }
        Ok(s)
    }

    /// Whether `η: A → End_k(M)` is onto.
    pub fn structure_map_surjective(&self) -> bool {
        let d2 = self.dim * self.dim;
        let flat: Vec<Vector> = self.action.iter().map(Mat::flatten).collect();
        linalg::rank_of(self.field(), d2, &flat) == d2
    }
}

/// One simple module per vertex/idempotent of a basic split algebra: `e_i`
/// acts as 1, the other idempotents and the radical as 0.
pub fn simple_modules(a: &Arc<Algebra>) -> Result<Vec<ModuleRep>> {
    let blocks = a.blocks()?;
    if blocks.iter().any(|b| b.residue_dim != 1) {
        return Err(Error::UnsupportedAlgebra("semisimple quotient is not split".into()));
    }
    residue_modules(a)
}

/// The residue fields `ē (A / rad A)` of the blocks, as right `A`-modules.
/// For commutative `A` these are the modules `A/𝔭` for the maximal ideals.
pub fn residue_modules(a: &Arc<Algebra>) -> Result<Vec<ModuleRep>> {
    let f = a.field();
    let rad = a.radical()?;
    let rad_space = Subspace::new(f, a.dim(), &rad.basis)?;
    let (s, qm) = a.quotient(&rad_space);
    let mut out = Vec::new();
    for block in a.blocks()? {
        let e = qm.project(&block.idempotent);
        // basis of the corner ē·S
        let mut corner = Subspace::zero(f, s.dim());
        let mut basis = Vec::new();
        for i in 0..s.dim() {
            let v = s.mul(&e, &s.basis_element(i));
            if corner.insert(&v) {
                basis.push(v);
            }
        }
        let coords = |v: &Vector| -> Vector {
            let m = Mat::from_cols(f, s.dim(), &basis).unwrap();
            linalg::solve(&m, v).unwrap().expect("corner is closed under multiplication")
        };
        let action = (0..a.dim())
            .map(|b| {
                let xb = qm.project(&a.basis_element(b));
                let rows: Vec<Vector> = basis.iter().map(|v| coords(&s.mul(v, &xb))).collect();
                Mat::from_rows(f, basis.len(), &rows).unwrap()
            })
            .collect();
        out.push(ModuleRep::new(a.clone(), basis.len(), action)?);
    }
    Ok(out)
}

/// Decides simplicity.
///
/// A nonzero `M·rad(A)` is a proper submodule. Otherwise `M` is a module over
/// the product of residue fields `A / rad A` and is simple exactly when a
/// single block acts and `M` is one-dimensional over that residue field.
/// When the radical is not available, finite fields fall back to spinning
/// every vector up to scalars.
pub fn is_simple(m: &ModuleRep) -> Result<bool> {
    if m.dim == 0 {
        return Ok(false);
    }
    if m.structure_map_surjective() {
        return Ok(true);
    }
    let result = match m.algebra.radical() {
        Ok(_) => simple_via_residues(m)?,
        Err(e) => match m.field() {
            Field::Prime(p) if (p as f64).powi(m.dim as i32) <= 2e5 => simple_by_spinning(m, p),
            _ => return Err(e),
        },
    };
    Ok(result)
}

fn simple_via_residues(m: &ModuleRep) -> Result<bool> {
    if m.radical_submodule()?.dim() > 0 {
        return Ok(false);
    }
    let blocks = m.algebra.blocks()?;
    let acting: Vec<_> = blocks.iter().filter(|b| !m.action_of(&b.idempotent).is_zero()).collect();
    Ok(acting.len() == 1 && acting[0].residue_dim == m.dim)
}

/// Exhaustive spin test over 𝔽_p: every nonzero vector generates `M`.
pub fn simple_by_spinning(m: &ModuleRep, p: u32) -> bool {
    let f = m.field();
    let d = m.dim;
    let total = (p as u64).pow(d as u32);
    for code in 1..total {
        let mut v = Vec::with_capacity(d);
        let mut c = code;
        for _ in 0..d {
            v.push(f.int((c % p as u64) as i64));
            c /= p as u64;
        }
        // normalized: first nonzero coordinate is 1
        if !v.iter().find(|s| !s.is_zero()).is_some_and(Scalar::is_one) {
            continue;
        }
        if m.spin(&[v]).dim() < d {
            return false;
        }
    }
    true
}

/// Basis of `Hom_A(M, N)`; a map is the `dim M × dim N` matrix `Φ` of
/// `v ↦ v·Φ`, subject to `η_M(b)·Φ = Φ·η_N(b)`.
pub fn hom_a(m: &ModuleRep, n: &ModuleRep) -> Result<Vec<Mat>> {
    if *m.algebra != *n.algebra {
        return Err(Error::InvalidArgument("modules over different algebras".into()));
    }
    let f = m.field();
    let (dm, dn) = (m.dim, n.dim);
    let unknowns = dm * dn;
    let mut rows = Vec::new();
    for (am, an) in m.action.iter().zip(&n.action) {
        // (am Φ - Φ an)[r][c] = Σ_k am[r][k] Φ[k][c] - Σ_k Φ[r][k] an[k][c]
        for r in 0..dm {
            for c in 0..dn {
                let mut row = linalg::zero_vec(f, unknowns);
                for k in 0..dm {
                    let idx = k * dn + c;
                    row[idx] = &row[idx] + am.get(r, k);
                }
                for k in 0..dn {
                    let idx = r * dn + k;
                    row[idx] = &row[idx] - an.get(k, c);
                }
                rows.push(row);
            }
        }
    }
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let kernel = if rows.is_empty() {
        (0..unknowns).map(|i| linalg::unit_vec(f, unknowns, i)).collect()
    } else {
        linalg::kernel_basis(&Mat::from_rows(f, unknowns, &rows)?)
    };
    Ok(kernel.into_iter().map(|v| Mat::new(f, dm, dn, v).unwrap()).collect())
}

/// Looks for an invertible element of `Hom_A(M, N)` among basis elements
/// and small integer combinations of pairs; exact for simple modules.
pub fn find_isomorphism(m: &ModuleRep, n: &ModuleRep) -> Result<Option<Mat>> {
    if m.dim != n.dim {
        return Ok(None);
    }
    let homs = hom_a(m, n)?;
    let f = m.field();
    let mut candidates: Vec<Mat> = homs.clone();
    for i in 0..homs.len() {
        for j in 0..i {
            for c in 1..=3 {
                candidates.push(homs[i].add(&homs[j].scale(&f.int(c))));
            }
        }
    }
    if homs.len() > 2 {
        let all = homs.iter().enumerate().fold(Mat::zeros(f, m.dim, n.dim), |acc, (i, h)| acc.add(&h.scale(&f.int(i as i64 + 1))));
        candidates.push(all);
    }
    Ok(candidates.into_iter().find(|c| c.inverse().is_some()))
}

pub fn are_isomorphic(m: &ModuleRep, n: &ModuleRep) -> Result<bool> {
    if m.dim == 0 && n.dim == 0 {
        return Ok(true);
    }
    Ok(find_isomorphism(m, n)?.is_some())
}

/// How a spectral point was obtained.
#[derive(Clone, Debug)]
pub enum Provenance {
    Simple,
    /// `A/f⁻¹(𝔪)` for a unital map `f: A → B` into a local algebra.
    Contraction { map: AlgebraMap, target: Arc<Algebra> },
    UserDeclared,
}

#[derive(Clone, Debug)]
pub struct SpectralPoint {
    pub name: String,
    pub module: ModuleRep,
    pub provenance: Provenance,
}

impl SpectralPoint {
    /// Re-checks the provenance witness.
    pub fn verify(&self) -> Result<bool> {
        match &self.provenance {
            Provenance::Simple => is_simple(&self.module),
            Provenance::Contraction { map, target } => {
                let again = contraction(self.module.algebra(), map, target)?;
                Ok(again.module.dim == self.module.dim
                    && again.module.action.iter().zip(&self.module.action).all(|(a, b)| a == b))
            }
            Provenance::UserDeclared => Ok(true),
        }
    }
}

/// Checks that `b` is local: `B / rad B` is a single residue field.
pub fn check_local(b: &Algebra) -> Result<()> {
    let blocks = b.blocks().map_err(|e| Error::NotLocal(e.to_string()))?;
    if blocks.len() != 1 {
        return Err(Error::NotLocal(format!("{} blocks in the semisimple quotient", blocks.len())));
    }
    Ok(())
}

/// The contraction `M^c = A/𝔭` with `𝔭 = f⁻¹(𝔪)`, `𝔪 = rad B` the maximal
/// ideal of the local algebra `B`.
pub fn contraction(a: &Arc<Algebra>, f: &AlgebraMap, b: &Arc<Algebra>) -> Result<SpectralPoint> {
    f.verify(a, b)?;
    check_local(b)?;
    let field = a.field();
    let rad = b.radical()?;
    let m_space = Subspace::new(field, b.dim(), &rad.basis)?;
    let qm = QuotientMap::new(&m_space);
    // kernel of A → B → B/𝔪
    let cols: Vec<Vector> = f.images.iter().map(|img| qm.project(img)).collect();
    let prime: Vec<Vector> = if cols.first().is_some_and(|c| c.is_empty()) {
        (0..a.dim()).map(|i| a.basis_element(i)).collect()
    } else {
        linalg::kernel_basis(&Mat::from_cols(field, qm.kept().len(), &cols)?)
    };
    let p_space = Subspace::new(field, a.dim(), &prime)?;
    let regular = ModuleRep::regular(a);
    let (module, _) = regular.quotient(&p_space)?;
    Ok(SpectralPoint {
        name: "contraction".into(),
        module,
        provenance: Provenance::Contraction { map: f.clone(), target: b.clone() },
    })
}

/// Rank check that `η(f)` is injective on `M`.
pub fn acts_injectively(m: &ModuleRep, f: &[Scalar]) -> bool {
    m.action_of(f).rank() == m.dim
}

/// Annihilator `{a : M·a = 0}` of a module.
pub fn annihilator(m: &ModuleRep) -> Subspace {
    let f = m.field();
    let n = m.algebra.dim();
    let cols: Vec<Vector> = m.action.iter().map(Mat::flatten).collect();
    if m.dim == 0 {
        return Subspace::new(f, n, &(0..n).map(|i| linalg::unit_vec(f, n, i)).collect::<Vec<_>>()).unwrap();
    }
    let mat = Mat::from_cols(f, m.dim * m.dim, &cols).unwrap();
    Subspace::new(f, n, &linalg::kernel_basis(&mat)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuiverPresentation;
    use crate::groebner::MPoly;

    fn q() -> Field {
        Field::Rational
    }

    fn a2() -> Arc<Algebra> {
        let qv = QuiverPresentation::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        Arc::new(Algebra::from_quiver(&qv).unwrap())
    }

    fn poly1(field: Field, coeffs: &[i64]) -> Arc<Algebra> {
        let g = MPoly::from_terms(field, coeffs.iter().enumerate().map(|(i, &c)| ((i as u32, 0), field.int(c))));
        Arc::new(Algebra::from_poly_quotient(field, 1, vec![g]).unwrap())
    }

    #[test]
    fn simples_of_corpus_algebras() {
        let a = a2();
        let s = simple_modules(&a).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|m| m.dim() == 1));
        assert_eq!(s[0].action_of(&a.basis_element(0)), Mat::identity(q(), 1));
        assert!(s[0].action_of(&a.basis_element(2)).is_zero());
        assert_eq!(simple_modules(&poly1(q(), &[0, 0, 1])).unwrap().len(), 1);
        let kk = Arc::new(Algebra::product(&Algebra::ground(q()), &Algebra::ground(q())).unwrap());
        assert_eq!(simple_modules(&kk).unwrap().len(), 2);
        assert!(matches!(simple_modules(&poly1(q(), &[-1, 0, 0, 1])), Err(Error::UnsupportedAlgebra(_))));
    }

    #[test]
    fn simplicity() {
        let a = a2();
        for s in simple_modules(&a).unwrap() {
            assert!(is_simple(&s).unwrap());
        }
        assert!(!is_simple(&ModuleRep::regular(&a)).unwrap());
        assert!(!is_simple(&ModuleRep::regular(&poly1(q(), &[0, 0, 1]))).unwrap());
        let c = poly1(q(), &[-1, 0, 0, 1]);
        let res = residue_modules(&c).unwrap();
        assert!(res.iter().all(|m| is_simple(m).unwrap()));
        let zero = ModuleRep::new(a.clone(), 0, vec![Mat::zeros(q(), 0, 0); 3]).unwrap();
        assert!(!is_simple(&zero).unwrap());
    }

    #[test]
    fn action_examples() {
        let a = a2();
        let s = simple_modules(&a).unwrap();
        assert_eq!(s[0].action_of(&a.basis_element(0)), Mat::identity(q(), 1));
        let d = poly1(q(), &[0, 0, 1]);
        let x = ModuleRep::regular(&d).action_of(&d.basis_element(1));
        assert!(!x.is_zero());
        assert!(x.mul(&x).is_zero());
    }

    #[test]
    fn hom_examples() {
        let a = a2();
        let s = simple_modules(&a).unwrap();
        assert_eq!(hom_a(&s[0], &s[0]).unwrap().len(), 1);
        assert_eq!(hom_a(&s[0], &s[1]).unwrap().len(), 0);
        let reg = ModuleRep::regular(&a);
        let homs = hom_a(&reg, &reg).unwrap();
        let id = Mat::identity(q(), 3);
        let span = Subspace::new(q(), 9, &homs.iter().map(Mat::flatten).collect::<Vec<_>>()).unwrap();
        assert!(span.contains(&id.flatten()));
    }

    #[test]
    fn bad_action_rejected() {
        let a = a2();
        let wrong = vec![Mat::identity(q(), 2), Mat::zeros(q(), 2, 2), Mat::zeros(q(), 2, 3)];
        assert!(matches!(ModuleRep::new(a.clone(), 2, wrong), Err(Error::DimensionMismatch(_))));
        // e1 acting as identity and e2 as identity too violates the unit axiom
        let wrong = vec![Mat::identity(q(), 1), Mat::identity(q(), 1), Mat::zeros(q(), 1, 1)];
        assert!(ModuleRep::new(a, 1, wrong).is_err());
    }

    #[test]
    fn contractions() {
        // k[x]/(x^2 - x) → k, x ↦ 0
        let a = poly1(q(), &[0, -1, 1]);
        let k = Arc::new(Algebra::ground(q()));
        let f = AlgebraMap { images: vec![vec![q().one()], vec![q().zero()]] };
        let p = contraction(&a, &f, &k).unwrap();
        assert_eq!(p.module.dim(), 1);
        assert!(p.module.action_of(&a.basis_element(1)).is_zero());
        assert!(p.verify().unwrap());

        // identity on a local algebra gives back its simple module
        let d = poly1(q(), &[0, 0, 1]);
        let p = contraction(&d, &AlgebraMap::identity(&d), &d).unwrap();
        let s = &simple_modules(&d).unwrap()[0];
        assert!(are_isomorphic(&p.module, s).unwrap());

        // corner projection of A2 onto vertex 1
        let a = a2();
        let f = AlgebraMap { images: vec![vec![q().one()], vec![q().zero()], vec![q().zero()]] };
        let p = contraction(&a, &f, &k).unwrap();
        assert!(are_isomorphic(&p.module, &simple_modules(&a).unwrap()[0]).unwrap());

        // non-local target
        let kk = Arc::new(Algebra::product(&Algebra::ground(q()), &Algebra::ground(q())).unwrap());
        let (o, z) = (q().one(), q().zero());
        let f = AlgebraMap { images: vec![vec![o.clone(), z.clone()], vec![z.clone(), o], vec![z.clone(), z]] };
        assert!(matches!(contraction(&a2(), &f, &kk), Err(Error::NotLocal(_))));
    }

    #[test]
    fn contraction_rejects_non_homomorphism() {
        let a = poly1(q(), &[0, 0, 1]);
        let k = Arc::new(Algebra::ground(q()));
        let f = AlgebraMap { images: vec![vec![q().one()], vec![q().one()]] };
        assert!(matches!(contraction(&a, &f, &k), Err(Error::NotHomomorphism(1, 1))));
    }
}

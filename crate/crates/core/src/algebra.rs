//! Finite-dimensional associative unital algebras given by structure
//! constants, built from quiver presentations, polynomial quotients or raw
//! multiplication tables.
//!
//! Elements are coordinate vectors over the chosen basis. Paths compose
//! left to right: for arrows `a: i -> j` and `b: j -> l` the product `a·b`
//! is the path "a then b". Modules are right modules throughout.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groebner::{self, MPoly, Monomial};
use crate::linalg::{self, axpy, is_zero_vec, unit_vec, zero_vec, Mat, Subspace, Vector};
use crate::poly::Poly;

/// Largest path length searched before a quiver quotient is declared
/// infinite-dimensional.
pub const DEFAULT_DEGREE_BOUND: usize = 32;
const PATH_CAP: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// One term `coeff · path` of a relation; `path` lists arrow indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerm {
    pub coeff: Scalar,
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<RelationTerm>>,
}

impl QuiverPresentation {
    pub fn new(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<QuiverPresentation> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
        let find = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::InvalidQuiver(format!("unknown vertex '{name}'")))
        };
        let mut out = Vec::new();
        for (name, s, t) in arrows {
            if out.iter().any(|a: &Arrow| a.name == *name) || vertices.iter().any(|v| v == name) {
                return Err(Error::InvalidQuiver(format!("duplicate name '{name}'")));
            }
            out.push(Arrow { name: name.to_string(), source: find(s)?, target: find(t)? });
        }
        Ok(QuiverPresentation { vertices, arrows: out, relations: Vec::new() })
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Parses `a*b*c` into arrow indices.
    pub fn parse_path(&self, text: &str) -> Result<Vec<usize>> {
        text.split('*')
            .map(|n| {
                let n = n.trim();
                self.arrow_index(n).ok_or_else(|| Error::InvalidQuiver(format!("unknown arrow '{n}'")))
            })
            .collect()
    }

    pub fn with_relation(mut self, terms: &[(Scalar, &str)]) -> Result<QuiverPresentation> {
        let rel = terms
            .iter()
            .map(|(c, p)| Ok(RelationTerm { coeff: c.clone(), path: self.parse_path(p)? }))
            .collect::<Result<Vec<_>>>()?;
        self.relations.push(rel);
        Ok(self)
    }

    fn path_end(&self, start: usize, path: &[usize]) -> usize {
        path.last().map_or(start, |&a| self.arrows[a].target)
    }

    fn validate(&self) -> Result<()> {
        for (ri, rel) in self.relations.iter().enumerate() {
            if rel.is_empty() {
                return Err(Error::InvalidQuiver(format!("relation {ri} is empty")));
            }
            let mut ends = None;
            for term in rel {
                if term.path.len() < 2 {
                    return Err(Error::NotAdmissible(format!(
                        "relation {ri} has a term of length {} outside the square of the arrow ideal",
                        term.path.len()
                    )));
                }
                for w in term.path.windows(2) {
                    if self.arrows[w[0]].target != self.arrows[w[1]].source {
                        return Err(Error::InvalidQuiver(format!(
                            "relation {ri}: arrows '{}' and '{}' do not compose",
                            self.arrows[w[0]].name, self.arrows[w[1]].name
                        )));
                    }
                }
                let s = self.arrows[term.path[0]].source;
                let e = self.path_end(s, &term.path);
                match ends {
                    None => ends = Some((s, e)),
                    Some(se) if se != (s, e) => {
                        return Err(Error::InvalidQuiver(format!("relation {ri} has non-parallel terms")))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// A path: starting vertex plus arrow indices (empty for a trivial path).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyQuotient {
    pub var_count: usize,
    pub generators: Vec<MPoly>,
    pub groebner: Vec<MPoly>,
    pub monomials: Vec<Monomial>,
}

impl PolyQuotient {
    /// The defining polynomial of a univariate quotient `k[x]/(f)`.
    pub fn univariate_modulus(&self) -> Option<Poly> {
        if self.var_count != 1 || self.groebner.len() != 1 {
            return None;
        }
        let g = &self.groebner[0];
        let field = g.field();
        let deg = g.leading()?.0 .0 as usize;
        let mut c = vec![field.zero(); deg + 1];
        for (m, s) in g.terms() {
            c[m.0 as usize] = s.clone();
        }
        Some(Poly::new(field, c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Quiver { quiver: QuiverPresentation, paths: Vec<Path> },
    Poly(PolyQuotient),
    Table,
}

/// Jacobson radical together with its nilpotency index `n` (`rad^n = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radical {
    pub basis: Vec<Vector>,
    pub nilpotency: usize,
}

/// A block of the semisimple quotient: a lifted primitive idempotent and the
/// dimension of its residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub idempotent: Vector,
    pub residue_dim: usize,
}

#[derive(Debug)]
pub struct Algebra {
    field: Field,
    labels: Vec<String>,
    table: Vec<Vec<Vector>>,
    unit: Vector,
    idempotents: Option<Vec<Vector>>,
    presentation: Presentation,
    radical: OnceLock<Result<Radical>>,
    blocks: OnceLock<Result<Vec<Block>>>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra {
            field: self.field,
            labels: self.labels.clone(),
            table: self.table.clone(),
            unit: self.unit.clone(),
            idempotents: self.idempotents.clone(),
            presentation: self.presentation.clone(),
            radical: OnceLock::new(),
            blocks: OnceLock::new(),
        }
    }
}

impl PartialEq for Algebra {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.labels == o.labels && self.table == o.table && self.unit == o.unit
    }
}

impl Algebra {
    fn raw(field: Field, labels: Vec<String>, table: Vec<Vec<Vector>>, unit: Vector, presentation: Presentation) -> Algebra {
        Algebra {
            field,
            labels,
            table,
            unit,
            idempotents: None,
            presentation,
            radical: OnceLock::new(),
            blocks: OnceLock::new(),
        }
    }

    /// The ground field `k` as a one-dimensional algebra.
    pub fn ground(field: Field) -> Algebra {
        Algebra::raw(field, vec!["1".into()], vec![vec![vec![field.one()]]], vec![field.one()], Presentation::Table)
    }

    pub fn from_structure_constants(
        field: Field,
        labels: Vec<String>,
        table: Vec<Vec<Vector>>,
        unit: Vector,
    ) -> Result<Algebra> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            return Err(Error::DimensionMismatch(format!("structure constants for dimension {n}")));
        }
        if unit.len() != n {
            return Err(Error::DimensionMismatch("unit vector length".into()));
        }
        let wrong_field = table.iter().flatten().flatten().chain(unit.iter()).any(|s| s.field() != field);
        if wrong_field {
            return Err(Error::FieldMismatch(format!("structure constants not all over {field}")));
        }
        let a = Algebra::raw(field, labels, table, unit, Presentation::Table);
        a.validate()?;
        Ok(a)
    }

    /// Attaches a complete set of orthogonal idempotents.
    pub fn with_idempotents(mut self, idempotents: Vec<Vector>) -> Result<Algebra> {
        let f = self.field;
        let mut sum = zero_vec(f, self.dim());
        for (i, e) in idempotents.iter().enumerate() {
            if e.len() != self.dim() {
                return Err(Error::DimensionMismatch("idempotent length".into()));
            }
            for (j, g) in idempotents.iter().enumerate() {
                let p = self.mul(e, g);
                let expect = if i == j { e.clone() } else { zero_vec(f, self.dim()) };
                if p != expect {
                    return Err(Error::InvalidArgument(format!("idempotents {i} and {j} are not orthogonal idempotents")));
                }
            }
            sum = linalg::add_vec(&sum, e);
        }
        if sum != self.unit {
            return Err(Error::InvalidArgument("idempotents do not sum to 1".into()));
        }
        self.idempotents = Some(idempotents);
        self.blocks = OnceLock::new();
        Ok(self)
    }

    pub fn from_quiver(q: &QuiverPresentation) -> Result<Algebra> {
        Algebra::from_quiver_with_bound(q, DEFAULT_DEGREE_BOUND)
    }

    pub fn from_quiver_with_bound(q: &QuiverPresentation, bound: usize) -> Result<Algebra> {
        Algebra::from_quiver_over(relation_field(q), q, bound)
    }

    /// Path algebra over an explicit field, for quivers whose relations do
    /// not determine it.
    pub fn from_quiver_over(f: Field, q: &QuiverPresentation, bound: usize) -> Result<Algebra> {
        q.validate()?;
        if q.relations.iter().flatten().any(|t| t.coeff.field() != f) {
            return Err(Error::FieldMismatch(format!("relation coefficients not over {f}")));
        }
        let mut m = 1;
        loop {
            if m > bound {
                return Err(Error::InfiniteDimensional(bound));
            }
            // In kQ / J^(m+1): are all paths of length m in the relation ideal?
            let paths = enumerate_paths(q, m).ok_or(Error::InfiniteDimensional(m))?;
            let ideal = relation_span(q, &paths, m + 1, f);
            let closes = paths.iter().enumerate().filter(|(_, p)| p.arrows.len() == m).all(|(i, _)| {
                ideal.contains(&unit_vec(f, paths.len(), i))
            });
            if closes {
                break;
            }
            m += 1;
        }
        // A = kQ / (I + J^m)
        let paths: Vec<Path> = enumerate_paths(q, m - 1).ok_or(Error::InfiniteDimensional(m))?;
        let n = paths.len();
        let ideal = {
            let span = relation_span(q, &paths, m, f);
            Subspace::with_order(f, n, (0..n).rev().collect(), span.basis())?
        };
        let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let pivots: Vec<usize> = ideal.pivots().to_vec();
        let kept: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let to_basis = |v: &Vector| -> Vector { kept.iter().map(|&i| v[i].clone()).collect() };
        let basis_paths: Vec<Path> = kept.iter().map(|&i| paths[i].clone()).collect();
        let dim = basis_paths.len();
        let mut table = vec![vec![zero_vec(f, dim); dim]; dim];
        for (i, p) in basis_paths.iter().enumerate() {
            for (j, r) in basis_paths.iter().enumerate() {
                if q.path_end(p.start, &p.arrows) != r.start || p.arrows.len() + r.arrows.len() >= m {
                    continue;
                }
                let mut arrows = p.arrows.clone();
                arrows.extend_from_slice(&r.arrows);
                let prod = Path { start: p.start, arrows };
                let v = ideal.reduce(&unit_vec(f, n, index[&prod]));
                table[i][j] = to_basis(&v);
            }
        }
        let labels = basis_paths
            .iter()
            .map(|p| {
                if p.arrows.is_empty() {
                    format!("e{}", q.vertices[p.start])
                } else {
                    p.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
                }
            })
            .collect();
        let idempotents: Vec<Vector> = (0..q.vertices.len()).map(|v| unit_vec(f, dim, v)).collect();
        let mut unit = zero_vec(f, dim);
        for e in &idempotents {
            unit = linalg::add_vec(&unit, e);
        }
        let mut a = Algebra::raw(
            f,
            labels,
            table,
            unit,
            Presentation::Quiver { quiver: q.clone(), paths: basis_paths },
        );
        a.idempotents = Some(idempotents);
        Ok(a)
    }

    /// Commutative quotient `k[x]/I` or `k[x,y]/I` with the standard
    /// monomial basis for degree-lex order.
    pub fn from_poly_quotient(field: Field, var_count: usize, generators: Vec<MPoly>) -> Result<Algebra> {
        if var_count == 0 || var_count > 2 {
            return Err(Error::InvalidArgument(format!("{var_count} variables; only 1 or 2 are supported")));
        }
        if generators.iter().any(|g| g.field() != field) {
            return Err(Error::FieldMismatch("ideal generators".into()));
        }
        if var_count == 1 && generators.iter().any(|g| g.terms().any(|(m, _)| m.1 > 0)) {
            return Err(Error::InvalidArgument("generator mentions y in a one-variable quotient".into()));
        }
        let gb = groebner::groebner(&generators);
        let monomials = groebner::standard_monomials(&gb, var_count)?;
        if monomials.is_empty() {
            return Err(Error::InvalidArgument("the ideal is the whole ring".into()));
        }
        let dim = monomials.len();
        let pos: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut table = vec![vec![zero_vec(field, dim); dim]; dim];
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                let prod = MPoly::monomial(field, (a.0 + b.0, a.1 + b.1)).reduce(&gb);
                for (m, c) in prod.terms() {
                    table[i][j][pos[m]] = c.clone();
                }
            }
        }
        let labels = monomials.iter().map(|m| monomial_label(*m)).collect();
        let unit = unit_vec(field, dim, pos[&(0, 0)]);
        let pq = PolyQuotient { var_count, generators, groebner: gb, monomials };
        Ok(Algebra::raw(field, labels, table, unit, Presentation::Poly(pq)))
    }

    /// Direct product `a × b`, with basis `a`'s basis followed by `b`'s.
    pub fn product(a: &Algebra, b: &Algebra) -> Result<Algebra> {
        if a.field != b.field {
            return Err(Error::FieldMismatch("product of algebras over different fields".into()));
        }
        let f = a.field;
        let (n, m) = (a.dim(), b.dim());
        let embed = |v: &Vector, off: usize| {
            let mut out = zero_vec(f, n + m);
            for (i, s) in v.iter().enumerate() {
                out[off + i] = s.clone();
            }
            out
        };
        let mut table = vec![vec![zero_vec(f, n + m); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = embed(&a.table[i][j], 0);
            }
        }
        for i in 0..m {
            for j in 0..m {
                table[n + i][n + j] = embed(&b.table[i][j], n);
            }
        }
        let labels = a.labels.iter().map(|l| format!("{l}.1")).chain(b.labels.iter().map(|l| format!("{l}.2"))).collect();
        let unit = linalg::add_vec(&embed(&a.unit, 0), &embed(&b.unit, n));
        Algebra::from_structure_constants(f, labels, table, unit)
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }
    pub fn structure_constants(&self) -> &[Vec<Vector>] {
        &self.table
    }
    pub fn unit(&self) -> &Vector {
        &self.unit
    }
    pub fn zero(&self) -> Vector {
        zero_vec(self.field, self.dim())
    }
    pub fn basis_element(&self, i: usize) -> Vector {
        unit_vec(self.field, self.dim(), i)
    }
    pub fn idempotents(&self) -> Option<&[Vector]> {
        self.idempotents.as_deref()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                axpy(&mut out, &(x * y), &self.table[i][j]);
            }
        }
        out
    }

    pub fn pow(&self, a: &[Scalar], e: usize) -> Vector {
        (0..e).fold(self.unit.clone(), |acc, _| self.mul(&acc, a))
    }

    /// Matrix of `v ↦ v·x` acting on row coordinate vectors.
    pub fn right_mult(&self, x: &[Scalar]) -> Mat {
        let rows: Vec<Vector> = (0..self.dim()).map(|i| self.mul(&self.basis_element(i), x)).collect();
        Mat::from_rows(self.field, self.dim(), &rows).expect("shape")
    }

    /// Matrix of `v ↦ x·v` acting on row coordinate vectors.
    pub fn left_mult(&self, x: &[Scalar]) -> Mat {
        let rows: Vec<Vector> = (0..self.dim()).map(|i| self.mul(x, &self.basis_element(i))).collect();
        Mat::from_rows(self.field, self.dim(), &rows).expect("shape")
    }

    /// Full associativity and unit check, `O(dim^4)`.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            let bi = self.basis_element(i);
            if self.mul(&self.unit, &bi) != bi || self.mul(&bi, &self.unit) != bi {
                return Err(Error::NotUnital(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = &self.table[i][j];
                for k in 0..n {
                    let left = self.mul(ij, &self.basis_element(k));
                    let right = self.mul(&self.basis_element(i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Two-sided ideal generated by `gens`.
    pub fn ideal_closure(&self, gens: &[Vector]) -> Subspace {
        let mut space = Subspace::zero(self.field, self.dim());
        let mut queue: Vec<Vector> = gens.to_vec();
        while let Some(v) = queue.pop() {
            if !space.insert(&v) {
                continue;
            }
            for k in 0..self.dim() {
                let b = self.basis_element(k);
                queue.push(self.mul(&b, &v));
                queue.push(self.mul(&v, &b));
            }
        }
        space
    }

    /// Products `x·y` with `x` from the first and `y` from the second list.
    pub fn product_space(&self, xs: &[Vector], ys: &[Vector]) -> Subspace {
        let mut s = Subspace::zero(self.field, self.dim());
        for x in xs {
            for y in ys {
                s.insert(&self.mul(x, y));
            }
        }
        s
    }

    /// Quotient by a two-sided ideal.
    pub fn quotient(&self, ideal: &Subspace) -> (Algebra, QuotientMap) {
        let f = self.field;
        let qm = QuotientMap::new(ideal);
        let dim = qm.kept.len();
        let mut table = vec![vec![zero_vec(f, dim); dim]; dim];
        for (a, &i) in qm.kept.iter().enumerate() {
            for (b, &j) in qm.kept.iter().enumerate() {
                table[a][b] = qm.project(&self.table[i][j]);
            }
        }
        let labels = qm.kept.iter().map(|&i| format!("[{}]", self.labels[i])).collect();
        let unit = qm.project(&self.unit);
        (Algebra::raw(f, labels, table, unit, Presentation::Table), qm)
    }

    /// Jacobson radical and its nilpotency index.
    ///
    /// Quiver algebras use the arrow ideal. Otherwise the radical is found as
    /// the preimage of the nilradical of `A / [A, A]`, which is exact when the
    /// semisimple quotient is commutative; anything else is rejected.
    pub fn radical(&self) -> Result<Radical> {
        self.radical.get_or_init(|| self.compute_radical()).clone()
    }

    fn compute_radical(&self) -> Result<Radical> {
        let basis = match &self.presentation {
            Presentation::Quiver { paths, .. } => paths
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.arrows.is_empty())
                .map(|(i, _)| self.basis_element(i))
                .collect(),
            _ => self.radical_via_commutative_quotient()?,
        };
        let nilpotency = self.nilpotency_index(&basis).ok_or_else(|| {
            Error::UnsupportedAlgebra("semisimple quotient is not commutative".into())
        })?;
        Ok(Radical { basis, nilpotency })
    }

    fn radical_via_commutative_quotient(&self) -> Result<Vec<Vector>> {
        let f = self.field;
        let n = self.dim();
        let mut comms = Vec::new();
        for i in 0..n {
            for j in 0..i {
                let c = linalg::sub_vec(&self.table[i][j], &self.table[j][i]);
                if !is_zero_vec(&c) {
                    comms.push(c);
                }
            }
        }
        let c = self.ideal_closure(&comms);
        if c.contains(&self.unit) {
            return Err(Error::UnsupportedAlgebra("semisimple quotient is not commutative".into()));
        }
        let (q, qm) = self.quotient(&c);
        let qn = q.dim();
        let nil_q: Vec<Vector> = match f {
            Field::Rational => {
                // trace-form radical: x with tr(L_{x b_j}) = 0 for all j
                let mut gram = Mat::zeros(f, qn, qn);
                for i in 0..qn {
                    for j in 0..qn {
                        let prod = q.mul(&q.basis_element(i), &q.basis_element(j));
                        let m = q.left_mult(&prod);
                        let tr = (0..qn).fold(f.zero(), |acc, k| &acc + m.get(k, k));
                        gram.set(i, j, tr);
                    }
                }
                linalg::kernel_basis(&gram)
            }
            Field::Prime(p) => {
                // Frobenius x ↦ x^p is F_p-linear on a commutative algebra.
                let mut steps = 1usize;
                let mut reach = p as usize;
                while reach < qn.max(1) {
                    reach = reach.saturating_mul(p as usize);
                    steps += 1;
                }
                let frob_rows: Vec<Vector> = (0..qn).map(|i| q.pow(&q.basis_element(i), p as usize)).collect();
                let frob = Mat::from_rows(f, qn, &frob_rows).expect("shape");
                let mut power = Mat::identity(f, qn);
                for _ in 0..steps {
                    power = power.mul(&frob);
                }
                // row vector v maps to v·power; kernel of the transpose action
                linalg::kernel_basis(&power.transpose())
            }
        };
        let mut rad = c.clone();
        for v in &nil_q {
            rad.insert(&qm.lift(v));
        }
        Ok(rad.basis().to_vec())
    }

    /// Smallest `n` with `I^n = 0`, or `None` if `I` is not nilpotent.
    pub fn nilpotency_index(&self, ideal: &[Vector]) -> Option<usize> {
        let mut power: Vec<Vector> = Subspace::new(self.field, self.dim(), ideal).ok()?.basis().to_vec();
        let mut n = 1;
        while !power.is_empty() {
            if n > self.dim() + 1 {
                return None;
            }
            power = self.product_space(&power, ideal).basis().to_vec();
            n += 1;
        }
        Some(n)
    }

    /// Primitive idempotents lifted from the semisimple quotient, with the
    /// dimension of each residue field.
    pub fn blocks(&self) -> Result<Vec<Block>> {
        self.blocks.get_or_init(|| self.compute_blocks()).clone()
    }

    /// True when `A / rad A ≅ k^r`.
    pub fn is_basic_split(&self) -> Result<bool> {
        Ok(self.blocks()?.iter().all(|b| b.residue_dim == 1))
    }

    fn compute_blocks(&self) -> Result<Vec<Block>> {
        let rad = self.radical()?;
        let rad_space = Subspace::new(self.field, self.dim(), &rad.basis)?;
        let (s, qm) = self.quotient(&rad_space);
        let corner_dim = |e: &Vector| -> usize {
            let vs: Vec<Vector> = (0..s.dim()).map(|i| s.mul(e, &s.basis_element(i))).collect();
            linalg::rank_of(s.field, s.dim(), &vs)
        };
        if let Some(given) = &self.idempotents {
            return Ok(given
                .iter()
                .map(|e| Block { idempotent: e.clone(), residue_dim: corner_dim(&qm.project(e)) })
                .collect());
        }
        let residue = split_commutative_semisimple(&s)?;
        let lifted = lift_idempotents(self, &qm, &residue);
        Ok(lifted
            .into_iter()
            .zip(&residue)
            .map(|(e, r)| Block { idempotent: e, residue_dim: corner_dim(r) })
            .collect())
    }

    /// Coordinates of `x` as a linear combination written with labels.
    pub fn format_element(&self, x: &[Scalar]) -> String {
        format_combination(x, &self.labels)
    }

    /// Parses `2*a - 1/3*e1 + b` over the basis labels.
    pub fn parse_element(&self, text: &str) -> Result<Vector> {
        parse_combination(self.field, text, &self.labels)
    }
}

fn relation_field(q: &QuiverPresentation) -> Field {
    q.relations
        .iter()
        .flatten()
        .map(|t| t.coeff.field())
        .next()
        .unwrap_or(Field::Rational)
}

fn monomial_label(m: Monomial) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        e => Some(format!("{v}^{e}")),
    };
    let parts: Vec<String> = [part("x", m.0), part("y", m.1)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// All paths of length at most `max_len`, ordered by length then
/// lexicographically; `None` if the count exceeds the cap.
fn enumerate_paths(q: &QuiverPresentation, max_len: usize) -> Option<Vec<Path>> {
    let mut out: Vec<Path> = (0..q.vertices.len()).map(|v| Path { start: v, arrows: Vec::new() }).collect();
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            let end = q.path_end(p.start, &p.arrows);
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source == end {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path { start: p.start, arrows });
                }
            }
        }
        out.extend(next.iter().cloned());
        if out.len() > PATH_CAP {
            return None;
        }
        frontier = next;
    }
    Some(out)
}

/// Span of `u·r·v` inside `kQ / J^len_bound`, coordinates over `paths`.
fn relation_span(q: &QuiverPresentation, paths: &[Path], len_bound: usize, f: Field) -> Subspace {
    let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = paths.len();
    let mut span = Subspace::zero(f, n);
    for rel in &q.relations {
        let start = q.arrows[rel[0].path[0]].source;
        let end = q.path_end(start, &rel[0].path);
        let min_len = rel.iter().map(|t| t.path.len()).min().unwrap_or(0);
        for u in paths.iter().filter(|u| q.path_end(u.start, &u.arrows) == start) {
            for v in paths.iter().filter(|v| v.start == end) {
                if u.arrows.len() + min_len + v.arrows.len() >= len_bound {
                    continue;
                }
                let mut vec = zero_vec(f, n);
                for t in rel {
                    let len = u.arrows.len() + t.path.len() + v.arrows.len();
                    if len >= len_bound {
                        continue;
                    }
                    let mut arrows = u.arrows.clone();
                    arrows.extend_from_slice(&t.path);
                    arrows.extend_from_slice(&v.arrows);
                    let key = Path { start: u.start, arrows };
                    let i = index[&key];
                    vec[i] = &vec[i] + &t.coeff;
                }
                span.insert(&vec);
            }
        }
    }
    span
}

/// Projection onto a quotient by a subspace, using the non-pivot
/// coordinates of the subspace's echelon form as the quotient basis.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    ideal: Subspace,
    kept: Vec<usize>,
}

impl QuotientMap {
    pub fn new(ideal: &Subspace) -> QuotientMap {
        let kept = (0..ideal.ambient_dim()).filter(|i| !ideal.pivots().contains(i)).collect();
        QuotientMap { ideal: ideal.clone(), kept }
    }

    pub fn project(&self, v: &[Scalar]) -> Vector {
        let r = self.ideal.reduce(v);
        self.kept.iter().map(|&i| r[i].clone()).collect()
    }

    pub fn lift(&self, w: &[Scalar]) -> Vector {
        let f = self.ideal.field();
        let mut out = zero_vec(f, self.ideal.ambient_dim());
        for (s, &i) in w.iter().zip(&self.kept) {
            out[i] = s.clone();
        }
        out
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }
}

/// Minimal polynomial of `x` in the corner algebra with identity `e`.
pub fn min_poly_in_corner(a: &Algebra, e: &Vector, x: &Vector) -> Poly {
    let f = a.field;
    let mut powers = vec![e.clone()];
    let mut span = Subspace::new(f, a.dim(), &powers).expect("shape");
    loop {
        let next = a.mul(powers.last().unwrap(), x);
        if span.contains(&next) {
            let m = Mat::from_cols(f, a.dim(), &powers).expect("shape");
            let c = linalg::solve(&m, &next).expect("shape").expect("in span");
            let mut coeffs: Vec<Scalar> = c.iter().map(|s| -s).collect();
            coeffs.push(f.one());
            return Poly::new(f, coeffs);
        }
        span.insert(&next);
        powers.push(next);
    }
}

/// `p(x)` in the corner with identity `e`.
pub fn eval_in_corner(a: &Algebra, e: &Vector, x: &Vector, p: &Poly) -> Vector {
    let mut acc = a.zero();
    for c in p.coeffs().iter().rev() {
        acc = a.mul(&acc, x);
        axpy(&mut acc, c, e);
    }
    acc
}

fn split_commutative_semisimple(s: &Algebra) -> Result<Vec<Vector>> {
    let f = s.field;
    let n = s.dim();
    let corner_dim = |e: &Vector| -> usize {
        let vs: Vec<Vector> = (0..n).map(|i| s.mul(e, &s.basis_element(i))).collect();
        linalg::rank_of(f, n, &vs)
    };
    let mut candidates: Vec<Vector> = (0..n).map(|i| s.basis_element(i)).collect();
    for i in 0..n {
        for j in 0..i {
            for c in 1..=3 {
                let mut v = s.basis_element(i);
                axpy(&mut v, &f.int(c), &s.basis_element(j));
                candidates.push(v);
            }
        }
    }
    let mut idems = vec![s.unit.clone()];
    let mut settled = vec![n <= 1];
    for cand in &candidates {
        let mut next = Vec::new();
        let mut next_settled = Vec::new();
        for (e, done) in idems.iter().zip(&settled) {
            let d = corner_dim(e);
            if *done || d <= 1 {
                next.push(e.clone());
                next_settled.push(true);
                continue;
            }
            let x = s.mul(e, cand);
            let mp = min_poly_in_corner(s, e, &x);
            let factors = mp.factor()?;
            if factors.len() == 1 {
                let field_like = factors[0].0.degree() == Some(d);
                next.push(e.clone());
                next_settled.push(field_like);
                continue;
            }
            let total = factors.iter().fold(Poly::one(f), |acc, (g, m)| acc.mul(&g.pow(*m)));
            for (g, m) in &factors {
                let gm = g.pow(*m);
                let cof = total.div_rem(&gm).0;
                let (_, s_coef, _) = cof.ext_gcd(&gm);
                let h = cof.mul(&s_coef).rem(&total);
                next.push(eval_in_corner(s, e, &x, &h));
                next_settled.push(false);
            }
        }
        idems = next;
        settled = next_settled;
        if settled.iter().all(|&b| b) {
            break;
        }
    }
    for (e, done) in idems.iter().zip(&settled) {
        if !done && corner_dim(e) > 1 {
            return Err(Error::UnsupportedAlgebra("could not split the semisimple quotient into fields".into()));
        }
    }
    Ok(idems)
}

fn lift_idempotents(a: &Algebra, qm: &QuotientMap, residue: &[Vector]) -> Vec<Vector> {
    let mut remaining = a.unit.clone();
    let mut out = Vec::new();
    for (k, r) in residue.iter().enumerate() {
        if k + 1 == residue.len() {
            out.push(remaining.clone());
            break;
        }
        let y = qm.lift(r);
        let mut z = a.mul(&a.mul(&remaining, &y), &remaining);
        for _ in 0..64 {
            let z2 = a.mul(&z, &z);
            if z2 == z {
                break;
            }
            let z3 = a.mul(&z2, &z);
            let f = a.field;
            let mut next = linalg::scale_vec(&f.int(3), &z2);
            axpy(&mut next, &f.int(-2), &z3);
            z = next;
        }
        remaining = linalg::sub_vec(&remaining, &z);
        out.push(z);
    }
    out
}

/// Renders coordinates as `c*label + ...`.
pub fn format_combination(x: &[Scalar], labels: &[String]) -> String {
    let mut parts = Vec::new();
    for (c, l) in x.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        if c.is_one() {
            parts.push(l.clone());
        } else {
            parts.push(format!("{c}*{l}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Parses `c1*l1 + c2*l2 - l3`; a bare scalar means that multiple of the
/// label `1` if present.
pub fn parse_combination(field: Field, text: &str, labels: &[String]) -> Result<Vector> {
    let mut out = zero_vec(field, labels.len());
    let normalized = text.replace('-', "+-");
    for raw in normalized.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            continue;
        }
        let (neg, term) = match term.strip_prefix('-') {
            Some(t) => (true, t.trim()),
            None => (false, term),
        };
        let (coeff, label) = split_coefficient(field, term, labels)?;
        let idx = labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown basis label '{label}'")))?;
        let c = if neg { -&coeff } else { coeff };
        out[idx] = &out[idx] + &c;
    }
    Ok(out)
}

fn split_coefficient<'a>(field: Field, term: &'a str, labels: &'a [String]) -> Result<(Scalar, &'a str)> {
    if labels.iter().any(|l| l == term) {
        return Ok((field.one(), term));
    }
    if let Some((c, rest)) = term.split_once('*') {
        if let Ok(s) = field.parse(c) {
            return Ok((s, rest.trim()));
        }
    }
    if let Ok(s) = field.parse(term) {
        if labels.iter().any(|l| l == "1") {
            return Ok((s, "1"));
        }
    }
    Err(Error::InvalidArgument(format!("cannot parse term '{term}'")))
}

/// A linear map between algebras given by the images of the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap {
    pub images: Vec<Vector>,
}

impl AlgebraMap {
    pub fn identity(a: &Algebra) -> AlgebraMap {
        AlgebraMap { images: (0..a.dim()).map(|i| a.basis_element(i)).collect() }
    }

    pub fn apply(&self, field: Field, target_dim: usize, x: &[Scalar]) -> Vector {
        let mut out = zero_vec(field, target_dim);
        for (c, img) in x.iter().zip(&self.images) {
            if !c.is_zero() {
                axpy(&mut out, c, img);
            }
        }
        out
    }

    /// Checks that the map is a unital algebra homomorphism.
    pub fn verify(&self, source: &Algebra, target: &Algebra) -> Result<()> {
        if self.images.len() != source.dim() || self.images.iter().any(|v| v.len() != target.dim()) {
            return Err(Error::DimensionMismatch("algebra map shape".into()));
        }
        let f = target.field();
        if self.apply(f, target.dim(), source.unit()) != *target.unit() {
            return Err(Error::NotHomomorphism(usize::MAX, usize::MAX));
        }
        for i in 0..source.dim() {
            for j in 0..source.dim() {
                let lhs = self.apply(f, target.dim(), &source.structure_constants()[i][j]);
                let rhs = target.mul(&self.images[i], &self.images[j]);
                if lhs != rhs {
                    return Err(Error::NotHomomorphism(i, j));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    pub(crate) fn a2() -> Algebra {
        let qv = QuiverPresentation::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        Algebra::from_quiver(&qv).unwrap()
    }

    fn loop_sq() -> Algebra {
        let qv = QuiverPresentation::new(&["1"], &[("x", "1", "1")])
            .unwrap()
            .with_relation(&[(q().one(), "x*x")])
            .unwrap();
        Algebra::from_quiver(&qv).unwrap()
    }

    fn poly1(field: Field, coeffs: &[i64]) -> Algebra {
        let g = MPoly::from_terms(field, coeffs.iter().enumerate().map(|(i, &c)| ((i as u32, 0), field.int(c))));
        Algebra::from_poly_quotient(field, 1, vec![g]).unwrap()
    }

    #[test]
    fn quiver_examples() {
        let k = Algebra::from_quiver(&QuiverPresentation::new(&["1"], &[]).unwrap()).unwrap();
        assert_eq!(k.dim(), 1);
        let a = a2();
        assert_eq!(a.labels(), &["e1", "e2", "a"]);
        // e1·a = a, a·e2 = a, a·e1 = 0
        assert_eq!(a.mul(&a.basis_element(0), &a.basis_element(2)), a.basis_element(2));
        assert_eq!(a.mul(&a.basis_element(2), &a.basis_element(1)), a.basis_element(2));
        assert!(is_zero_vec(&a.mul(&a.basis_element(2), &a.basis_element(0))));
        let l = loop_sq();
        assert_eq!(l.labels(), &["e1", "x"]);
        assert!(is_zero_vec(&l.mul(&l.basis_element(1), &l.basis_element(1))));
        a.validate().unwrap();
        l.validate().unwrap();
    }

    #[test]
    fn infinite_quiver_rejected() {
        let qv = QuiverPresentation::new(&["1"], &[("x", "1", "1")]).unwrap();
        assert!(matches!(Algebra::from_quiver_with_bound(&qv, 6), Err(Error::InfiniteDimensional(_))));
    }

    #[test]
    fn non_admissible_and_non_composable_relations() {
        let qv = QuiverPresentation::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
        assert!(matches!(qv.clone().with_relation(&[(q().one(), "a")]).map(|p| Algebra::from_quiver(&p)), Ok(Err(Error::NotAdmissible(_)))));
        let bad = qv.with_relation(&[(q().one(), "a*b")]).unwrap();
        assert!(matches!(Algebra::from_quiver(&bad), Err(Error::InvalidQuiver(_))));
    }

    #[test]
    fn poly_quotients() {
        assert_eq!(poly1(q(), &[0, -1, 1]).dim(), 2);
        let d = poly1(q(), &[0, 0, 1]);
        assert_eq!(d.dim(), 2);
        assert!(is_zero_vec(&d.mul(&d.basis_element(1), &d.basis_element(1))));
        assert_eq!(poly1(q(), &[-1, 0, 0, 1]).dim(), 3);
    }

    #[test]
    fn structure_constant_validation() {
        let f = q();
        // lower triangular 2x2: basis E11, E21, E22 with E21 = E22·?; use
        // matrix units where row-vector composition gives E_ij E_jk = E_ik
        let (e11, e21, e22) = (0, 1, 2);
        let mut t = vec![vec![zero_vec(f, 3); 3]; 3];
        t[e11][e11] = unit_vec(f, 3, e11);
        t[e21][e11] = unit_vec(f, 3, e21);
        t[e22][e21] = unit_vec(f, 3, e21);
        t[e22][e22] = unit_vec(f, 3, e22);
        let unit = linalg::add_vec(&unit_vec(f, 3, e11), &unit_vec(f, 3, e22));
        let labels = vec!["E11".into(), "E21".into(), "E22".into()];
        let lt = Algebra::from_structure_constants(f, labels.clone(), t.clone(), unit.clone()).unwrap();
        assert!(!lt.is_commutative());
        let rad = lt.radical().unwrap();
        assert_eq!(rad.basis.len(), 1);
        assert_eq!(rad.nilpotency, 2);
        assert!(lt.is_basic_split().unwrap());

        let mut broken = t.clone();
        broken[e22][e21] = unit_vec(f, 3, e11);
        assert!(matches!(
            Algebra::from_structure_constants(f, labels, broken, unit),
            Err(Error::NotAssociative(..)) | Err(Error::NotUnital(_))
        ));
    }

    #[test]
    fn radical_examples() {
        let d = poly1(q(), &[0, 0, 1]);
        let r = d.radical().unwrap();
        assert_eq!(r.basis.len(), 1);
        assert_eq!(r.nilpotency, 2);
        let kk = Algebra::product(&Algebra::ground(q()), &Algebra::ground(q())).unwrap();
        let r = kk.radical().unwrap();
        assert!(r.basis.is_empty());
        assert_eq!(r.nilpotency, 1);
        let r = a2().radical().unwrap();
        assert_eq!(r.basis, vec![unit_vec(q(), 3, 2)]);
        assert_eq!(r.nilpotency, 2);
        // prime field: k[x]/(x^3) over F2
        let c = poly1(Field::Prime(2), &[0, 0, 0, 1]);
        let r = c.radical().unwrap();
        assert_eq!(r.basis.len(), 2);
        assert_eq!(r.nilpotency, 3);
    }

    #[test]
    fn commutativity() {
        assert!(Algebra::product(&Algebra::ground(q()), &Algebra::ground(q())).unwrap().is_commutative());
        assert!(!a2().is_commutative());
        assert!(poly1(q(), &[0, 0, 1]).is_commutative());
    }

    #[test]
    fn blocks_split_and_nonsplit() {
        let a = poly1(q(), &[0, -1, 1]);
        let b = a.blocks().unwrap();
        assert_eq!(b.len(), 2);
        assert!(a.is_basic_split().unwrap());
        let c = poly1(q(), &[-1, 0, 0, 1]);
        let mut dims: Vec<usize> = c.blocks().unwrap().iter().map(|b| b.residue_dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
        assert!(!c.is_basic_split().unwrap());
    }

    #[test]
    fn semisimple_matrix_algebra_is_unsupported() {
        let f = q();
        // M_2(k) with matrix units E_ij, E_ij E_jk = E_ik
        let idx = |i: usize, j: usize| 2 * i + j;
        let mut t = vec![vec![zero_vec(f, 4); 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    t[idx(i, j)][idx(j, k)] = unit_vec(f, 4, idx(i, k));
                }
            }
        }
        let unit = linalg::add_vec(&unit_vec(f, 4, 0), &unit_vec(f, 4, 3));
        let m2 = Algebra::from_structure_constants(f, (0..4).map(|i| format!("E{i}")).collect(), t, unit).unwrap();
        assert!(matches!(m2.radical(), Err(Error::UnsupportedAlgebra(_))));
    }

    #[test]
    fn element_parsing() {
        let a = a2();
        let v = a.parse_element("2*a - e1 + 1/2*e2").unwrap();
        assert_eq!(v, vec![q().int(-1), q().frac(1, 2).unwrap(), q().int(2)]);
        assert_eq!(a.format_element(&v), "-1*e1 + 1/2*e2 + 2*a");
        assert!(a.parse_element("c").is_err());
    }
}

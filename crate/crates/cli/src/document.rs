//! The input format: a field line, one algebra block, module blocks,
//! declared points and options. Blocks close with `end`; `#` starts a comment.
//!
//! ```text
//! field: Q
//! algebra quiver
//!   vertices: 1 2
//!   arrow a: 1 -> 2
//! end
//! module S dim 1
//!   action e1: [1]
//!   action e2: [0]
//!   action a: [0]
//! end
//! point P: S
//! order: 2
//! elem: e1 + a
//! ```

use std::fmt::Write;
use std::sync::Arc;

use aspec_core::algebra::{Algebra, QuiverPresentation, DEFAULT_DEGREE_BOUND};
use aspec_core::groebner::MPoly;
use aspec_core::linalg::Mat;
use aspec_core::module::ModuleRep;
use aspec_core::{Field, Scalar};

use crate::error::{CliError, CliResult};

/// A linear combination `c₁ w₁ + c₂ w₂ + …` of words.
pub type Terms = Vec<(Scalar, String)>;

#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraBlock {
    Quiver { vertices: Vec<String>, arrows: Vec<(String, String, String)>, relations: Vec<Terms> },
    Poly { vars: Vec<String>, relations: Vec<Terms> },
    Table { basis: Vec<String>, unit: Terms, products: Vec<(String, String, Terms)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleBlock {
    pub name: String,
    pub dim: usize,
    /// Rows of each generator's matrix; vectors act on the left as rows.
    pub actions: Vec<(String, Vec<Vec<Scalar>>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InputDocument {
    pub field: Field,
    pub algebra: AlgebraBlock,
    pub modules: Vec<ModuleBlock>,
    pub points: Vec<(String, String)>,
    pub order: Option<usize>,
    pub elems: Vec<String>,
}

fn parse_field(text: &str, line: usize) -> CliResult<Field> {
    let t = text.trim();
    if t == "Q" {
        return Ok(Field::Rational);
    }
    let p = t
        .strip_prefix('F')
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| CliError::parse(line, format!("unknown field '{t}'")))?;
    Field::prime(p).map_err(|e| CliError::parse(line, e.to_string()))
}

fn field_name(f: Field) -> String {
    match f {
        Field::Rational => "Q".into(),
        Field::Prime(p) => format!("F{p}"),
    }
}

fn parse_scalar(f: Field, text: &str, line: usize) -> CliResult<Scalar> {
    f.parse(text).map_err(|_| CliError::parse(line, format!("unparseable scalar '{text}'")))
}

/// `a*b + -2 c*d - 1/2 e`; a lone scalar is a multiple of `1`.
pub fn parse_terms(f: Field, text: &str, line: usize) -> CliResult<Terms> {
    let text = text.trim();
    if text.is_empty() {
        return Err(CliError::parse(line, "empty combination"));
    }
    let normalized = text.replace(" - ", " + -");
    let mut out = Vec::new();
    for term in normalized.split(" + ") {
        let tokens: Vec<&str> = term.split_whitespace().collect();
        let parsed = match tokens.as_slice() {
            [c, w] => (parse_scalar(f, c, line)?, w.to_string()),
            [w] => match f.parse(w) {
                Ok(c) => (c, "1".to_string()),
                Err(_) => match w.strip_prefix('-') {
                    Some(rest) => (-&f.one(), rest.to_string()),
                    None => (f.one(), w.to_string()),
                },
            },
            _ => return Err(CliError::parse(line, format!("cannot read term '{}'", term.trim()))),
        };
        out.push(parsed);
    }
    Ok(out)
}

pub fn format_terms(terms: &Terms) -> String {
    terms
        .iter()
        .map(|(c, w)| {
            if w == "1" {
                c.to_string()
            } else if c.is_one() {
                w.clone()
            } else {
                format!("{c} {w}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn parse_matrix(f: Field, text: &str, line: usize) -> CliResult<Vec<Vec<Scalar>>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| CliError::parse(line, "matrix must be written as [a b; c d]"))?;
    inner
        .split(';')
        .map(|row| row.split_whitespace().map(|s| parse_scalar(f, s, line)).collect())
        .collect()
}

fn format_matrix(rows: &[Vec<Scalar>]) -> String {
    let rows: Vec<String> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

fn key_value(text: &str) -> Option<(&str, &str)> {
    text.split_once(':').map(|(k, v)| (k.trim(), v.trim()))
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        self.pos += 1;
        item
    }
}

pub fn parse(text: &str) -> CliResult<InputDocument> {
    let items = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut lines = Lines { items, pos: 0 };
    let (first, head) = lines.next().ok_or_else(|| CliError::parse(1, "empty document"))?;
    let field = match key_value(head) {
        Some(("field", v)) => parse_field(v, first)?,
        _ => return Err(CliError::parse(first, "document must start with 'field: Q' or 'field: F<p>'")),
    };
    let mut algebra = None;
    let mut modules: Vec<ModuleBlock> = Vec::new();
    let mut points = Vec::new();
    let mut order = None;
    let mut elems = Vec::new();
    while let Some((n, l)) = lines.next() {
        if let Some(kind) = l.strip_prefix("algebra ") {
            if algebra.is_some() {
                return Err(CliError::parse(n, "second algebra block"));
            }
            algebra = Some(parse_algebra(field, kind.trim(), n, &mut lines)?);
        } else if let Some(rest) = l.strip_prefix("module ") {
            let m = parse_module(field, rest, n, &mut lines)?;
            if modules.iter().any(|o| o.name == m.name) {
                return Err(CliError::parse(n, format!("module '{}' defined twice", m.name)));
            }
            modules.push(m);
        } else if let Some(rest) = l.strip_prefix("point ") {
            let (name, module) =
                key_value(rest).ok_or_else(|| CliError::parse(n, "expected 'point NAME: MODULE'"))?;
            points.push((name.to_string(), module.to_string()));
        } else {
            match key_value(l) {
                Some(("order", v)) => {
                    order = Some(v.parse().map_err(|_| CliError::parse(n, format!("bad order '{v}'")))?);
                }
                Some(("elem", v)) => elems.push(v.to_string()),
                _ => return Err(CliError::parse(n, format!("unexpected line '{l}'"))),
            }
        }
    }
    let algebra = algebra.ok_or_else(|| CliError::parse(first, "no algebra block"))?;
    for (name, module) in &points {
        if !modules.iter().any(|m| &m.name == module) {
            return Err(CliError::Input(format!("point {name} refers to unknown module '{module}'")));
        }
    }
    Ok(InputDocument { field, algebra, modules, points, order, elems })
}

fn block_lines<'a>(lines: &mut Lines<'a>, start: usize) -> CliResult<Vec<(usize, &'a str)>> {
    let mut out = Vec::new();
    loop {
        match lines.next() {
            None => return Err(CliError::parse(start, "block is missing 'end'")),
            Some((_, "end")) => return Ok(out),
            Some(item) => out.push(item),
        }
    }
}

fn parse_algebra(f: Field, kind: &str, start: usize, lines: &mut Lines) -> CliResult<AlgebraBlock> {
    let body = block_lines(lines, start)?;
    match kind {
        "quiver" => {
            let (mut vertices, mut arrows, mut relations) = (Vec::new(), Vec::new(), Vec::new());
            for (n, l) in body {
                if let Some(rest) = l.strip_prefix("arrow ") {
                    let (name, ends) = key_value(rest).ok_or_else(|| CliError::parse(n, "expected 'arrow a: 1 -> 2'"))?;
                    let (s, t) = ends.split_once("->").ok_or_else(|| CliError::parse(n, "expected 'source -> target'"))?;
                    arrows.push((name.to_string(), s.trim().to_string(), t.trim().to_string()));
                    continue;
                }
                match key_value(l) {
                    Some(("vertices", v)) => vertices = v.split_whitespace().map(String::from).collect(),
                    Some(("relation", v)) => relations.push(parse_terms(f, v, n)?),
                    _ => return Err(CliError::parse(n, format!("unexpected line in quiver block '{l}'"))),
                }
            }
            Ok(AlgebraBlock::Quiver { vertices, arrows, relations })
        }
        "poly" => {
            let (mut vars, mut relations) = (Vec::new(), Vec::new());
            for (n, l) in body {
                match key_value(l) {
                    Some(("vars", v)) => vars = v.split_whitespace().map(String::from).collect(),
                    Some(("relation", v)) => relations.push(parse_terms(f, v, n)?),
                    _ => return Err(CliError::parse(n, format!("unexpected line in poly block '{l}'"))),
                }
            }
            let allowed: &[&str] = if vars.len() == 1 { &["x"] } else { &["x", "y"] };
            if vars.is_empty() || vars.len() > 2 || vars.iter().zip(allowed).any(|(v, a)| v != a) {
                return Err(CliError::parse(start, "poly block takes 'vars: x' or 'vars: x y'"));
            }
            Ok(AlgebraBlock::Poly { vars, relations })
        }
        "table" => {
            let (mut basis, mut unit, mut products) = (Vec::new(), None, Vec::new());
            for (n, l) in body {
                if let Some(rest) = l.strip_prefix("product ") {
                    let (pair, value) = key_value(rest).ok_or_else(|| CliError::parse(n, "expected 'product a b: c'"))?;
                    let pair: Vec<&str> = pair.split_whitespace().collect();
                    let [a, b] = pair.as_slice() else {
                        return Err(CliError::parse(n, "a product names two basis elements"));
                    };
                    products.push((a.to_string(), b.to_string(), parse_terms(f, value, n)?));
                    continue;
                }
                match key_value(l) {
                    Some(("basis", v)) => basis = v.split_whitespace().map(String::from).collect(),
                    Some(("unit", v)) => unit = Some(parse_terms(f, v, n)?),
                    _ => return Err(CliError::parse(n, format!("unexpected line in table block '{l}'"))),
                }
            }
            let unit = unit.ok_or_else(|| CliError::parse(start, "table block needs a unit"))?;
            Ok(AlgebraBlock::Table { basis, unit, products })
        }
        other => Err(CliError::parse(start, format!("unknown algebra kind '{other}'"))),
    }
}

fn parse_module(f: Field, header: &str, start: usize, lines: &mut Lines) -> CliResult<ModuleBlock> {
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (name, dim) = match parts.as_slice() {
        [name, "dim", d] => (name.to_string(), d.parse::<usize>().map_err(|_| CliError::parse(start, "bad module dimension"))?),
        _ => return Err(CliError::parse(start, "expected 'module NAME dim N'")),
    };
    let mut actions = Vec::new();
    for (n, l) in block_lines(lines, start)? {
        let rest = l.strip_prefix("action ").ok_or_else(|| CliError::parse(n, format!("unexpected line in module {name}")))?;
        let (g, m) = key_value(rest).ok_or_else(|| CliError::parse(n, "expected 'action g: [..]'"))?;
        let rows = parse_matrix(f, m, n)?;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            let cols = rows.first().map_or(0, Vec::len);
            return Err(CliError::parse(
                n,
                format!("module {name}: action of {g} is {}×{cols}, expected {dim}×{dim}", rows.len()),
            ));
        }
        actions.push((g.to_string(), rows));
    }
    Ok(ModuleBlock { name, dim, actions })
}

pub fn serialize(d: &InputDocument) -> String {
    let mut out = String::new();
    writeln!(out, "field: {}", field_name(d.field)).unwrap();
    match &d.algebra {
        AlgebraBlock::Quiver { vertices, arrows, relations } => {
            writeln!(out, "algebra quiver\n  vertices: {}", vertices.join(" ")).unwrap();
            for (a, s, t) in arrows {
                writeln!(out, "  arrow {a}: {s} -> {t}").unwrap();
            }
            for r in relations {
                writeln!(out, "  relation: {}", format_terms(r)).unwrap();
            }
        }
        AlgebraBlock::Poly { vars, relations } => {
            writeln!(out, "algebra poly\n  vars: {}", vars.join(" ")).unwrap();
            for r in relations {
                writeln!(out, "  relation: {}", format_terms(r)).unwrap();
            }
        }
        AlgebraBlock::Table { basis, unit, products } => {
            writeln!(out, "algebra table\n  basis: {}\n  unit: {}", basis.join(" "), format_terms(unit)).unwrap();
            for (a, b, v) in products {
                writeln!(out, "  product {a} {b}: {}", format_terms(v)).unwrap();
            }
        }
    }
    out.push_str("end\n");
    for m in &d.modules {
        writeln!(out, "module {} dim {}", m.name, m.dim).unwrap();
        for (g, rows) in &m.actions {
            writeln!(out, "  action {g}: {}", format_matrix(rows)).unwrap();
        }
        out.push_str("end\n");
    }
    for (p, m) in &d.points {
        writeln!(out, "point {p}: {m}").unwrap();
    }
    if let Some(n) = d.order {
        writeln!(out, "order: {n}").unwrap();
    }
    for e in &d.elems {
        writeln!(out, "elem: {e}").unwrap();
    }
    out
}

fn core_input(context: &str) -> impl Fn(aspec_core::Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{context}: {e}"))
}

fn monomial(vars: &[String], word: &str) -> CliResult<(u32, u32)> {
    if word == "1" {
        return Ok((0, 0));
    }
    let mut exps = [0u32; 2];
    for factor in word.split('*') {
        let (v, e) = match factor.split_once('^') {
            Some((v, e)) => (v, e.parse::<u32>().map_err(|_| CliError::Input(format!("bad exponent in '{word}'")))?),
            None => (factor, 1),
        };
        let k = vars.iter().position(|x| x == v).ok_or_else(|| CliError::Input(format!("unknown variable '{v}'")))?;
        exps[k] += e;
    }
    Ok((exps[0], exps[1]))
}

impl InputDocument {
    pub fn build_algebra(&self) -> CliResult<Arc<Algebra>> {
        let f = self.field;
        let a = match &self.algebra {
            AlgebraBlock::Quiver { vertices, arrows, relations } => {
                let v: Vec<&str> = vertices.iter().map(String::as_str).collect();
                let ar: Vec<(&str, &str, &str)> = arrows.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
                let mut q = QuiverPresentation::new(&v, &ar).map_err(core_input("quiver"))?;
                for r in relations {
                    let terms: Vec<(Scalar, &str)> = r.iter().map(|(c, p)| (c.clone(), p.as_str())).collect();
                    q = q.with_relation(&terms).map_err(core_input("relation"))?;
                }
                Algebra::from_quiver_over(f, &q, DEFAULT_DEGREE_BOUND).map_err(core_input("quiver algebra"))?
            }
            AlgebraBlock::Poly { vars, relations } => {
                let gens = relations
                    .iter()
                    .map(|r| {
                        let terms = r.iter().map(|(c, w)| Ok((monomial(vars, w)?, c.clone()))).collect::<CliResult<Vec<_>>>()?;
                        Ok(MPoly::from_terms(f, terms))
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Algebra::from_poly_quotient(f, vars.len(), gens).map_err(core_input("polynomial quotient"))?
            }
            AlgebraBlock::Table { basis, unit, products } => {
                let n = basis.len();
                let vec_of = |terms: &Terms| -> CliResult<Vec<Scalar>> {
                    let mut v = vec![f.zero(); n];
                    for (c, w) in terms {
                        let k = basis.iter().position(|b| b == w).ok_or_else(|| CliError::Input(format!("unknown basis element '{w}'")))?;
                        v[k] = &v[k] + c;
                    }
                    Ok(v)
                };
                let mut table = vec![vec![vec![f.zero(); n]; n]; n];
                for (a, b, v) in products {
                    let i = basis.iter().position(|x| x == a).ok_or_else(|| CliError::Input(format!("unknown basis element '{a}'")))?;
                    let j = basis.iter().position(|x| x == b).ok_or_else(|| CliError::Input(format!("unknown basis element '{b}'")))?;
                    table[i][j] = vec_of(v)?;
                }
                Algebra::from_structure_constants(f, basis.clone(), table, vec_of(unit)?).map_err(core_input("structure constants"))?
            }
        };
        Ok(Arc::new(a))
    }

    /// Generators whose actions a module block must give.
    pub fn generators(&self) -> Vec<String> {
        match &self.algebra {
            AlgebraBlock::Quiver { vertices, arrows, .. } => {
                vertices.iter().map(|v| format!("e{v}")).chain(arrows.iter().map(|a| a.0.clone())).collect()
            }
            AlgebraBlock::Poly { vars, .. } => vars.clone(),
            AlgebraBlock::Table { basis, .. } => basis.clone(),
        }
    }

    pub fn build_module(&self, a: &Arc<Algebra>, m: &ModuleBlock) -> CliResult<ModuleRep> {
        let f = self.field;
        let gens = self.generators();
        let mut mats = Vec::new();
        for g in &gens {
            let rows = m
                .actions
                .iter()
                .find(|(h, _)| h == g)
                .map(|(_, r)| r)
                .ok_or_else(|| CliError::Input(format!("module {}: no action for generator {g}", m.name)))?;
            mats.push(Mat::from_rows(f, m.dim, rows).map_err(core_input(&m.name))?);
        }
        if let Some((h, _)) = m.actions.iter().find(|(h, _)| !gens.contains(h)) {
            return Err(CliError::Input(format!("module {}: {h} is not a generator", m.name)));
        }
        let of = |g: &str| mats[gens.iter().position(|x| x == g).unwrap()].clone();
        let action = a
            .labels()
            .iter()
            .map(|label| -> CliResult<Mat> {
                match &self.algebra {
                    AlgebraBlock::Table { .. } => Ok(of(label)),
                    AlgebraBlock::Quiver { .. } if gens.contains(label) => Ok(of(label)),
                    AlgebraBlock::Quiver { .. } => Ok(label.split('*').map(of).reduce(|x, y| x.mul(&y)).unwrap()),
                    AlgebraBlock::Poly { vars, .. } => {
                        let (ex, ey) = monomial(vars, label)?;
                        let mut acc = Mat::identity(f, m.dim);
                        for (v, e) in vars.iter().zip([ex, ey]) {
                            for _ in 0..e {
                                acc = acc.mul(&of(v));
                            }
                        }
                        Ok(acc)
                    }
                }
            })
            .collect::<CliResult<Vec<_>>>()?;
        ModuleRep::new(a.clone(), m.dim, action).map_err(core_input(&format!("module {}", m.name)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_roundtrip() {
        let t = parse_terms(Field::Rational, "a*b + -2 c*d - 1/2 e", 1).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(parse_terms(Field::Rational, &format_terms(&t), 1).unwrap(), t);
    }

    #[test]
    fn table_algebra_builds() {
        let text = "field: F5\nalgebra table\nbasis: 1 e\nunit: 1\nproduct 1 1: 1\nproduct 1 e: e\nproduct e 1: e\nproduct e e: e\nend\n";
        let d = parse(text).unwrap();
        assert_eq!(d.build_algebra().unwrap().dim(), 2);
        assert_eq!(d.generators(), vec!["1".to_string(), "e".to_string()]);
    }

    #[test]
    fn unterminated_block_reports_line() {
        let err = parse("field: Q\nalgebra poly\nvars: x\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { .. }), "{err}");
    }
}

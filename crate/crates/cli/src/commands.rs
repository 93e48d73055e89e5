use std::sync::Arc;

use aspec_core::algebra::Algebra;
use aspec_core::aspec::{global_sections_roundtrip, spec_compare, ASpecSpace, PointSet};
use aspec_core::ext::ext;
use aspec_core::hull::{default_order, hull, rho_apply, HullTower};
use aspec_core::linalg::Mat;
use aspec_core::module::{are_isomorphic, residue_modules, simple_modules, ModuleRep, Provenance, SpectralPoint};
use aspec_core::oalg::{closure_check, maximal_ideals, o_algebra_of};
use aspec_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::document::InputDocument;
use crate::error::{CliError, CliResult};
use crate::report::Node;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Simples,
    Ext,
    Hull,
    Oalg,
    Aspec,
    Dset,
    Stalk,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simples => "simples",
            Command::Ext => "ext",
            Command::Hull => "hull",
            Command::Oalg => "oalg",
            Command::Aspec => "aspec",
            Command::Dset => "dset",
            Command::Stalk => "stalk",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub order: Option<usize>,
    pub modules: Vec<String>,
    pub elems: Vec<String>,
    pub seed: u64,
}

pub struct Context {
    pub command: Command,
    pub doc: InputDocument,
    pub algebra: Arc<Algebra>,
    pub opts: Options,
}

impl Context {
    fn core<T>(&self, r: aspec_core::Result<T>) -> CliResult<T> {
        r.map_err(|source| CliError::Core { command: self.command.name().into(), source })
    }

    fn order(&self) -> CliResult<usize> {
        match self.opts.order.or(self.doc.order) {
            Some(n) => Ok(n),
            None => self.core(default_order(&self.algebra)),
        }
    }

    fn simples(&self) -> CliResult<Vec<ModuleRep>> {
        match simple_modules(&self.algebra) {
            Err(Error::UnsupportedAlgebra(_)) if self.algebra.is_commutative() => self.core(residue_modules(&self.algebra)),
            r => self.core(r),
        }
    }

    /// Declared modules by name, plus `S1, S2, …` for the simples.
    fn named_modules(&self) -> CliResult<Vec<(String, ModuleRep)>> {
        let mut out: Vec<(String, ModuleRep)> =
            self.simples()?.into_iter().enumerate().map(|(i, m)| (format!("S{}", i + 1), m)).collect();
        for m in &self.doc.modules {
            out.push((m.name.clone(), self.doc.build_module(&self.algebra, m)?));
        }
        Ok(out)
    }

    /// The `--modules` selection, defaulting to all simples.
    fn family(&self) -> CliResult<Vec<(String, ModuleRep)>> {
        let all = self.named_modules()?;
        if self.opts.modules.is_empty() {
            return Ok(all.into_iter().filter(|(n, _)| n.starts_with('S') && n[1..].parse::<usize>().is_ok()).take(self.simples()?.len()).collect());
        }
        self.opts
            .modules
            .iter()
            .map(|name| {
                all.iter()
                    .find(|(n, _)| n == name)
                    .cloned()
                    .ok_or_else(|| CliError::Input(format!("unknown module '{name}'")))
            })
            .collect()
    }

    fn elems(&self) -> Vec<String> {
        if self.opts.elems.is_empty() {
            self.doc.elems.clone()
        } else {
            self.opts.elems.clone()
        }
    }

    fn parse_elem(&self, text: &str) -> CliResult<Vec<aspec_core::Scalar>> {
        self.algebra.parse_element(text).map_err(|e| CliError::Input(format!("--elem '{text}': {e}")))
    }

    /// Simples plus declared points, dropping declared points isomorphic to an earlier one.
    fn space(&self) -> CliResult<ASpecSpace> {
        let mut points: Vec<SpectralPoint> = self
            .simples()?
            .into_iter()
            .enumerate()
            .map(|(i, m)| SpectralPoint { name: format!("S{}", i + 1), module: m, provenance: Provenance::Simple })
            .collect();
        for (name, module) in &self.doc.points {
            let block = self.doc.modules.iter().find(|m| &m.name == module).expect("validated by the parser");
            let m = self.doc.build_module(&self.algebra, block)?;
            let mut duplicate = false;
            for p in &points {
                if p.module.dim() == m.dim() && self.core(are_isomorphic(&p.module, &m))? {
                    duplicate = true;
                }
            }
            if !duplicate {
                points.push(SpectralPoint { name: name.clone(), module: m, provenance: Provenance::UserDeclared });
            }
        }
        let extra = self.elems().iter().map(|e| self.parse_elem(e)).collect::<CliResult<Vec<_>>>()?;
        let order = self.order()?;
        self.core(ASpecSpace::new(self.algebra.clone(), points, order, &extra))
    }
}

fn matrix(m: &Mat) -> String {
    let rows: Vec<String> =
        (0..m.rows()).map(|r| m.row(r).iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn simples(cx: &Context) -> CliResult<Vec<Node>> {
    let a = &cx.algebra;
    let s = cx.simples()?;
    let mut out = vec![
        Node::leaf("algebra", format!("dim {}, basis {}", a.dim(), a.labels().join(" "))),
        Node::leaf("simples", s.len()),
    ];
    for (i, m) in s.iter().enumerate() {
        let actions = a.labels().iter().enumerate().map(|(k, l)| Node::leaf(l.clone(), matrix(&m.action()[k]))).collect();
        out.push(Node::branch(format!("S{}", i + 1), actions).with_value(format!("dim {}", m.dim())));
    }
    Ok(out)
}

pub fn ext_report(cx: &Context) -> CliResult<Vec<Node>> {
    let fam = cx.family()?;
    let mut out = Vec::new();
    for (ni, mi) in &fam {
        for (nj, mj) in &fam {
            let dims = (0..=2).map(|d| Ok(Node::leaf(format!("Ext{d}"), cx.core(ext(mi, mj, d))?.dim()))).collect::<CliResult<Vec<_>>>()?;
            out.push(Node::branch(format!("({ni},{nj})"), dims));
        }
    }
    Ok(out)
}

fn presentation(tower: &HullTower) -> String {
    let h = tower.top();
    let gens: Vec<String> =
        tower.generators.iter().map(|g| format!("{}({},{})", g.label, g.source + 1, g.target + 1)).collect();
    let rels: Vec<String> = tower.relations().iter().map(|r| h.format_word_vector(r)).collect();
    let or_none = |v: Vec<String>| if v.is_empty() { "none".to_string() } else { v.join(", ") };
    format!("generators: {}; relations: {}", or_none(gens), or_none(rels))
}

pub fn hull_report(cx: &Context) -> CliResult<Vec<Node>> {
    let fam = cx.family()?;
    let mods: Vec<ModuleRep> = fam.iter().map(|m| m.1.clone()).collect();
    let order = cx.order()?;
    let (tower, ohat) = cx.core(hull(&cx.algebra, &mods, order))?;
    let stages = tower
        .stages
        .iter()
        .enumerate()
        .map(|(k, s)| {
            Node::leaf(
                format!("H{}", k + 1),
                format!("dim {}, relations {}, obstruction {}", s.algebra.dim(), s.relation_count, match &s.obstruction { None => "none", Some(m) if m.vanishes() => "vanishes", Some(_) => "nonzero" }),
            )
        })
        .collect();
    let rho = cx
        .algebra
        .labels()
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let e = cx.algebra.basis_element(k);
            Node::leaf(l.clone(), ohat.layout.format(&rho_apply(&ohat, &e)))
        })
        .collect();
    Ok(vec![
        Node::leaf("family", fam.iter().map(|m| m.0.clone()).collect::<Vec<_>>().join(" ")),
        Node::leaf("order", order),
        Node::leaf("presentation", presentation(&tower)),
        Node::leaf("dim", tower.top().dim()),
        Node::leaf("stabilized", yes(tower.stabilized)),
        Node::branch("stages", stages),
        Node::branch("rho", rho),
    ])
}

pub fn oalg_report(cx: &Context) -> CliResult<Vec<Node>> {
    let fam = cx.family()?;
    let mods: Vec<ModuleRep> = fam.iter().map(|m| m.1.clone()).collect();
    let order = cx.order()?;
    let o = cx.core(o_algebra_of(&cx.algebra, &mods, order))?;
    let m = cx.core(maximal_ideals(&o))?;
    let c = cx.core(closure_check(&cx.algebra, &mods, order))?;
    Ok(vec![
        Node::leaf("family", fam.iter().map(|m| m.0.clone()).collect::<Vec<_>>().join(" ")),
        Node::leaf("order", order),
        Node::leaf("dim A", cx.algebra.dim()),
        Node::leaf("dim O", o.dim()),
        Node::leaf("eta rank", o.eta_rank()),
        Node::leaf("eta bijective", yes(o.eta_bijective())),
        Node::leaf("maximal ideals", m.ideals.len()),
        Node::leaf("r-local", yes(m.ok())),
        Node::leaf("closure", format!("{} (dim {} then {})", yes(c.holds()), c.dim, c.dim_again)),
    ])
}

fn set_name(x: &ASpecSpace, s: PointSet) -> String {
    x.format_set(s)
}

pub fn aspec_report(cx: &Context) -> CliResult<Vec<Node>> {
    let x = cx.space()?;
    let points = x
        .points()
        .iter()
        .map(|p| {
            let kind = match p.provenance {
                Provenance::Simple => "simple",
                Provenance::Contraction { .. } => "contraction",
                Provenance::UserDeclared => "declared",
            };
            Node::leaf(p.name.clone(), format!("dim {}, {kind}", p.module.dim()))
        })
        .collect();
    let sub = x.subbasis().iter().map(|(l, _, d)| Node::leaf(format!("D({l})"), set_name(&x, *d))).collect();
    let mut opens = Vec::new();
    for &u in x.opens() {
        let pre = cx.core(x.sections(u))?.dim();
        let simple = cx.core(x.simples_only_sections(u))?.dim();
        let sheaf = cx.core(x.sheaf_sections(u))?.dim();
        opens.push(Node::leaf(set_name(&x, u), format!("O {pre}, O simples-only {simple}, sheaf {sheaf}")));
    }
    let sheaf = cx.core(x.sheafify_check())?;
    let pre = cx.core(x.presheaf_check())?;
    let mut findings: Vec<Node> = pre.failures.iter().enumerate().map(|(i, f)| Node::leaf(format!("{}", i + 1), f)).collect();
    if findings.is_empty() {
        findings.push(Node::leaf("none", "presheaf satisfies the sheaf axioms"));
    }
    Ok(vec![
        Node::leaf("order", x.order()),
        Node::branch("points", points),
        Node::branch("subbasis", sub),
        Node::branch("opens", opens).with_value(x.opens().len()),
        Node::leaf("closed points", {
            let c: Vec<String> = x.closed_points().iter().map(|&i| x.points()[i].name.clone()).collect();
            if c.is_empty() {
                "none".to_string()
            } else {
                c.join(" ")
            }
        }),
        Node::leaf("sheaf axioms", format!("{} ({} covers)", verdict(sheaf.holds()), sheaf.covers)),
        Node::branch("presheaf findings", findings),
    ])
}

pub fn dset_report(cx: &Context) -> CliResult<Vec<Node>> {
    let elems = cx.elems();
    if elems.is_empty() {
        return Err(CliError::Input("dset needs --elem".into()));
    }
    let x = cx.space()?;
    elems
        .iter()
        .map(|e| {
            let f = cx.parse_elem(e)?;
            Ok(Node::leaf(format!("D({e})"), set_name(&x, x.d_set(&f))))
        })
        .collect()
}

pub fn stalk_report(cx: &Context) -> CliResult<Vec<Node>> {
    let x = cx.space()?;
    let mut set: PointSet = 0;
    if cx.opts.modules.is_empty() {
        set = x.full();
    }
    for name in &cx.opts.modules {
        let i = x
            .points()
            .iter()
            .position(|p| &p.name == name)
            .ok_or_else(|| CliError::Input(format!("unknown point '{name}'")))?;
        set |= 1 << i;
    }
    let st = cx.core(x.stalk(set))?;
    Ok(vec![
        Node::leaf("points", set_name(&x, set)),
        Node::leaf("minimal open", set_name(&x, st.minimal_open)),
        Node::leaf("stalk dim", st.stalk.dim()),
        Node::leaf("O^A dim", st.direct.dim()),
        Node::leaf("comparison bijective", yes(st.bijective)),
        Node::leaf("sheaf dim", st.sheaf_dim),
    ])
}

pub fn verify_report(cx: &Context) -> CliResult<(Vec<Node>, bool)> {
    let a = &cx.algebra;
    let s = cx.simples()?;
    let order = cx.order()?;
    let mut verdicts: Vec<(&str, bool)> = Vec::new();
    let o = cx.core(o_algebra_of(a, &s, order))?;
    verdicts.push(("fin-dim isomorphism", o.dim() == a.dim() && o.eta_bijective()));
    let m = cx.core(maximal_ideals(&o))?;
    verdicts.push(("r-locality", m.ok() && m.ideals.len() == s.len()));
    verdicts.push(("closure", cx.core(closure_check(a, &s, order))?.holds()));
    let (tower, _) = cx.core(hull(a, &s, order))?;
    let counts = tower.tangent_counts(s.len());
    let mut tangent = true;
    for (i, si) in s.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            tangent &= cx.core(ext(si, sj, 1))?.dim() == counts[i][j];
        }
    }
    verdicts.push(("tangent dimensions", tangent));
    verdicts.push(("unit lemma", units_invert(cx, &tower)?));
    let x = cx.core(ASpecSpace::of_simples_at(a, order))?;
    verdicts.push(("sheaf axioms", cx.core(x.sheafify_check())?.holds()));
    verdicts.push(("global sections", cx.core(global_sections_roundtrip(&x))?.holds()));
    if a.is_commutative() {
        verdicts.push(("Spec comparison", cx.core(spec_compare(a))?.agrees()));
    }
    let failed = verdicts.iter().any(|v| !v.1);
    let nodes = verdicts.into_iter().map(|(k, v)| Node::leaf(k, verdict(v))).collect();
    Ok((vec![Node::leaf("order", order), Node::branch("verdicts", nodes)], failed))
}

fn units_invert(cx: &Context, tower: &HullTower) -> CliResult<bool> {
    let h = tower.top();
    let f = h.field();
    let mut rng = ChaCha8Rng::seed_from_u64(cx.opts.seed);
    for _ in 0..20 {
        let mut x = h.unit();
        for c in x.iter_mut().take(h.r()) {
            *c = f.int(rng.gen_range(1..=4));
        }
        for w in h.standard_words() {
            x[h.r() + w] = f.int(rng.gen_range(-3..=3));
        }
        let x = h.reduce(&x);
        let y = cx.core(h.invert_unit(&x))?;
        if h.mul(&x, &y) != h.unit() || h.mul(&y, &x) != h.unit() {
            return Ok(false);
        }
    }
    Ok(true)
}

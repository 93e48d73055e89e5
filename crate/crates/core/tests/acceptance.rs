//! The acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use aspec_core::aspec::{global_sections_roundtrip, spec_compare, ASpecSpace};
use aspec_core::ext::ext;
use aspec_core::hull::{default_order, hull};
use aspec_core::module::simple_modules;
use aspec_core::oalg::{closure_check, maximal_ideals, o_algebra_of};
use aspec_core::polyline::{compare_with_localizations, line_hull};
use aspec_core::{Field, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracle::{self, ext1_dim, hull_morphisms, lifting_classes, Presented, TestRing};
use common::{commutative_corpus, corpus};

type Outcome = Result<Vec<String>>;

fn q() -> Field {
    Field::Rational
}

fn fin_dim_isomorphism() -> Outcome {
    let mut failures = Vec::new();
    for e in corpus(q()) {
        let s = simple_modules(&e.algebra)?;
        let o = o_algebra_of(&e.algebra, &s, default_order(&e.algebra)?)?;
        if !(o.dim() == e.algebra.dim() && o.eta_bijective()) {
            failures.push(format!("{}: dim O = {}, dim A = {}", e.name, o.dim(), e.algebra.dim()));
        }
    }
    Ok(failures)
}

fn hull_oracle() -> Outcome {
    let mut failures = Vec::new();
    for e in corpus(oracle::field()) {
        let s = simple_modules(&e.algebra)?;
        let order = default_order(&e.algebra)?.max(3);
        let (tower, _) = hull(&e.algebra, &s, order)?;
        let p = Presented::new(&e.algebra, &e.generators);
        for ring in TestRing::for_points(s.len()) {
            let lifts = lifting_classes(&p, &ring);
            let maps = hull_morphisms(tower.top(), &ring);
            if lifts != maps {
                failures.push(format!("{} over {}: {lifts} lifting classes, {maps} morphisms", e.name, ring.name));
            }
        }
    }
    Ok(failures)
}

fn tangent_dimensions() -> Outcome {
    let mut failures = Vec::new();
    for e in corpus(oracle::field()) {
        let s = simple_modules(&e.algebra)?;
        let (tower, _) = hull(&e.algebra, &s, default_order(&e.algebra)?)?;
        let counts = tower.tangent_counts(s.len());
        let p = Presented::new(&e.algebra, &e.generators);
        for i in 0..s.len() {
            for j in 0..s.len() {
                let by_resolution = ext(&s[i], &s[j], 1)?.dim();
                let brute = ext1_dim(&p, i, j);
                if counts[i][j] != by_resolution || by_resolution != brute {
                    failures.push(format!(
                        "{} ({},{}): hull {}, resolution {by_resolution}, enumeration {brute}",
                        e.name,
                        i + 1,
                        j + 1,
                        counts[i][j]
                    ));
                }
            }
        }
    }
    Ok(failures)
}

fn unit_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let f = q();
    let hulls = corpus(f)
        .into_iter()
        .map(|e| {
            let s = simple_modules(&e.algebra)?;
            let (tower, _) = hull(&e.algebra, &s, default_order(&e.algebra)?.max(3))?;
            Ok((e.name, tower.top().clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    for k in 0..100 {
        let (name, h) = &hulls[k % hulls.len()];
        let mut x = h.unit();
        for c in x.iter_mut().take(h.r()) {
            let mut v = 0;
            while v == 0 {
                v = rng.gen_range(-4..=4);
            }
            *c = f.int(v);
        }
        for w in h.standard_words() {
            let c = f.frac(rng.gen_range(-3..=3), rng.gen_range(1..=3))?;
            x[h.r() + w] = c;
        }
        let x = h.reduce(&x);
        let y = h.invert_unit(&x)?;
        if h.mul(&x, &y) != h.unit() || h.mul(&y, &x) != h.unit() {
            failures.push(format!("{name}: inverse of {} is not two-sided", h.format_element(&x)));
        }
    }
    Ok(failures)
}

fn r_locality() -> Outcome {
    let mut failures = Vec::new();
    for e in corpus(q()) {
        let s = simple_modules(&e.algebra)?;
        let o = o_algebra_of(&e.algebra, &s, default_order(&e.algebra)?)?;
        let m = maximal_ideals(&o)?;
        if !m.ok() || m.ideals.len() != s.len() {
            failures.push(format!("{}: {:?}", e.name, m.quotients_match));
        }
    }
    Ok(failures)
}

fn closure() -> Outcome {
    let mut failures = Vec::new();
    for e in corpus(q()) {
        let s = simple_modules(&e.algebra)?;
        let c = closure_check(&e.algebra, &s, default_order(&e.algebra)?)?;
        if !c.holds() {
            failures.push(format!("{}: {c:?}", e.name));
        }
    }
    Ok(failures)
}

fn commutative_comparison() -> Outcome {
    let mut failures = Vec::new();
    for (name, a) in commutative_corpus() {
        let c = spec_compare(&a)?;
        if !c.agrees() {
            failures.push(format!("{name}: {c:?}"));
        }
    }
    Ok(failures)
}

fn spaces() -> Result<Vec<(&'static str, ASpecSpace)>> {
    corpus(q()).into_iter().map(|e| Ok((e.name, ASpecSpace::of_simples(&e.algebra)?))).collect()
}

fn sheaf_axioms() -> Outcome {
    let mut failures = Vec::new();
    for (name, x) in spaces()? {
        if x.points().len() > 3 {
            continue;
        }
        let r = x.sheafify_check()?;
        if !r.holds() || r.covers == 0 {
            failures.push(format!("{name}: {:?}", r.failures));
        }
    }
    Ok(failures)
}

fn roundtrip() -> Outcome {
    let mut failures = Vec::new();
    for (name, x) in spaces()? {
        let r = global_sections_roundtrip(&x)?;
        if !r.holds() {
            failures.push(format!("{name}: {:?} {:?}", r.presheaf.failures, r.sheaf.failures));
        }
    }
    Ok(failures)
}

fn line_path() -> Outcome {
    let f = q();
    let mut failures = Vec::new();
    for n in 1..=6 {
        for a in [0, 1, 3] {
            let h = line_hull(f, &[f.int(a)], n)?;
            let free = h.hull().relations().is_empty() && h.hull().dim() == n + 1;
            if !free {
                failures.push(format!("N = {n}: hull of M_{a} is not k[t]/(t^{})", n + 1));
            }
        }
        let c = compare_with_localizations(f, &[f.zero(), f.one()], n)?;
        if !c.agrees() {
            failures.push(format!("N = {n}: {c:?}"));
        }
    }
    Ok(failures)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("fin-dim isomorphism", fin_dim_isomorphism),
        ("hull oracle equivalence", hull_oracle),
        ("tangent dimensions", tangent_dimensions),
        ("unit lemma", unit_lemma),
        ("r-locality and quotients", r_locality),
        ("closure", closure),
        ("commutative comparison", commutative_comparison),
        ("sheaf axioms", sheaf_axioms),
        ("global-sections roundtrip", roundtrip),
        ("k[x] symbolic path", line_path),
    ];
    let mut all = true;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(f) if f.is_empty() => println!("PASS {:>2} {name} ({secs:.2}s)", k + 1),
            Ok(f) => {
                all = false;
                println!("FAIL {:>2} {name} ({secs:.2}s)", k + 1);
                for line in f {
                    println!("       {line}");
                }
            }
            Err(e) => {
                all = false;
                println!("FAIL {:>2} {name} ({secs:.2}s): {e}", k + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Univariate polynomials over an exact field, with factorization into
//! irreducibles over prime fields (distinct/equal-degree splitting) and over
//! ℚ for the shapes used here (rational roots plus an irreducible cofactor
//! of degree at most 3).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_ints(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        let f = c.field();
        Poly::new(f, vec![c])
    }

    /// `x`
    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn monic(&self) -> Poly {
        match self.lead().inv() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(self.field), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let inv = d.lead().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] * &inv;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * dc);
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn divides(&self, f: &Poly) -> bool {
        f.rem(self).is_zero()
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g = gcd`.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.lead().inv().unwrap_or_else(|| f.one());
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.field.int(i as i64) * c)
            .collect();
        Poly::new(self.field, c)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    fn pow_mod_big(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(self.field);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return Poly::one(self.field);
        }
        let d = self.derivative();
        if d.is_zero() {
            // f = h(x^p) = h(x)^p over a prime field
            let p = self.field.characteristic() as usize;
            let h = Poly::new(self.field, self.coeffs.iter().step_by(p).cloned().collect());
            return h.radical();
        }
        let g = self.gcd(&d);
        let r1 = self.div_rem(&g).0.monic();
        let rg = g.radical();
        let common = r1.gcd(&rg);
        r1.mul(&rg).div_rem(&common).0.monic()
    }

    /// Monic irreducible factors with multiplicities, sorted by degree and
    /// then coefficients.
    pub fn factor(&self) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("cannot factor the zero polynomial".into()));
        }
        let rad = self.radical();
        let mut irreducibles = match self.field {
            Field::Prime(p) => factor_squarefree_mod_p(&rad, p),
            Field::Rational => factor_squarefree_rational(&rad)?,
        };
        irreducibles.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.to_string().cmp(&b.to_string())));
        let mut out = Vec::new();
        for g in irreducibles {
            let mut m = 0;
            let mut rest = self.clone();
            while g.divides(&rest) {
                rest = rest.div_rem(&g).0;
                m += 1;
            }
            out.push((g, m));
        }
        Ok(out)
    }

    /// Distinct roots in the base field.
    pub fn roots(&self) -> Result<Vec<Scalar>> {
        Ok(self
            .factor()?
            .into_iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, _)| -&g.coeff(0))
            .collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{c}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

fn factor_squarefree_mod_p(f: &Poly, p: u32) -> Vec<Poly> {
    let field = f.field;
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = Poly::x(field);
    let mut h = x.clone();
    let pb = BigUint::from(p);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod_big(&pb, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            out.extend(equal_degree_split(&g, d, p));
            rest = rest.div_rem(&g).0.monic();
            h = h.rem(&rest);
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest);
    }
    out
}

/// Splits a squarefree product of degree-`d` irreducibles.
fn equal_degree_split(f: &Poly, d: usize, p: u32) -> Vec<Poly> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.monic()];
    }
    let field = f.field;
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    loop {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let coeffs: Vec<Scalar> = (0..n)
            .map(|i| {
                let v = (seed.rotate_left(7 * i as u32 + 3) >> 17) % p as u64;
                field.int(v as i64)
            })
            .collect();
        let a = Poly::new(field, coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            a.pow_mod_big(&e, f).sub(&Poly::one(field))
        };
        let g = f.gcd(&candidate);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree_split(&g, d, p);
            out.extend(equal_degree_split(&f.div_rem(&g).0, d, p));
            return out;
        }
    }
}

fn factor_squarefree_rational(f: &Poly) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    let mut rest = f.monic();
    for r in rational_roots(&rest) {
        let lin = Poly::new(Field::Rational, vec![-&r, Field::Rational.one()]);
        if lin.divides(&rest) {
            rest = rest.div_rem(&lin).0.monic();
            out.push(lin);
        }
    }
    match rest.degree() {
        Some(0) | None => {}
        Some(d) if d <= 3 => out.push(rest),
        Some(d) => {
            return Err(Error::UnsupportedAlgebra(format!(
                "factoring a root-free rational polynomial of degree {d} is not supported"
            )))
        }
    }
    Ok(out)
}

fn rational_roots(f: &Poly) -> Vec<Scalar> {
    // Clear denominators to an integer polynomial.
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        if let Scalar::Rat(r) = c {
            lcm = lcm.lcm(r.denom());
        }
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Rat(r) => (r * num_rational::BigRational::from_integer(lcm.clone())).to_integer(),
            _ => unreachable!(),
        })
        .collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(Field::Rational.zero());
    }
    let a0 = ints[low].abs();
    let an = ints.last().unwrap().abs();
    let divs = |n: &BigInt| -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= *n {
            if (n % &d).is_zero() {
                out.push(d.clone());
                out.push(n / &d);
            }
            d += 1;
        }
        out
    };
    let mut cands = Vec::new();
    for p in divs(&a0) {
        for q in divs(&an) {
            let r = num_rational::BigRational::new(p.clone(), q.clone());
            cands.push(Scalar::Rat(r.clone()));
            cands.push(Scalar::Rat(-r));
        }
    }
    cands.sort_by(|a, b| match (a, b) {
        (Scalar::Rat(x), Scalar::Rat(y)) => x.cmp(y),
        _ => std::cmp::Ordering::Equal,
    });
    cands.dedup();
    for c in cands {
        if f.eval(&c).is_zero() && !roots.contains(&c) {
            roots.push(c);
        }
    }
    roots
}

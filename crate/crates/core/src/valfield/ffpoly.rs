use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{FieldData, Fq};
use crate::error::{Error, Result};

/// Dense univariate polynomial over a finite field, low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FfPoly {
    pub f: &'static FieldData,
    c: Vec<Fq>,
}

impl fmt::Debug for FfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| match i {
                0 => format!("{a:?}"),
                1 => format!("{a:?}*t"),
                _ => format!("{a:?}*t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl FfPoly {
    pub fn new(f: &'static FieldData, mut c: Vec<Fq>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        FfPoly { f, c }
    }
    pub fn zero(f: &'static FieldData) -> Self {
        FfPoly { f, c: vec![] }
    }
    pub fn constant(a: Fq) -> Self {
        Self::new(a.field(), vec![a])
    }
    pub fn one(f: &'static FieldData) -> Self {
        Self::constant(f.one())
    }
    pub fn x(f: &'static FieldData) -> Self {
        Self::new(f, vec![f.zero(), f.one()])
    }
    /// (t - a)
    pub fn linear(a: Fq) -> Self {
        Self::new(a.field(), vec![a.neg(), a.one()])
    }
    pub fn monomial(a: Fq, k: usize) -> Self {
        let mut c = vec![a.zero(); k + 1];
        c[k] = a;
        Self::new(a.field(), c)
    }
    pub fn coeffs(&self) -> &[Fq] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> Fq {
        self.c.get(i).copied().unwrap_or(self.f.zero())
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree; the zero polynomial has degree -1.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn lc(&self) -> Fq {
        self.c.last().copied().unwrap_or(self.f.zero())
    }
    /// Order of vanishing at t = 0.
    pub fn low_order(&self) -> usize {
        self.c.iter().position(|a| !a.is_zero()).unwrap_or(0)
    }
    pub fn low_coeff(&self) -> Fq {
        self.coeff(self.low_order())
    }
    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(self.f, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }
    pub fn neg(&self) -> Self {
        Self::new(self.f, self.c.iter().map(|a| a.neg()).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, a: &Fq) -> Self {
        Self::new(self.f, self.c.iter().map(|b| b.mul(a)).collect())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.f);
        }
        let mut c = vec![self.f.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.f, c)
    }
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.f);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![self.f.zero(); k];
        c.extend_from_slice(&self.c);
        Self::new(self.f, c)
    }
    pub fn eval(&self, x: &Fq) -> Fq {
        self.c.iter().rev().fold(self.f.zero(), |acc, a| acc.mul(x).add(a))
    }
    pub fn derivative(&self) -> Self {
        Self::new(self.f, self.c.iter().enumerate().skip(1).map(|(i, a)| a.scale(i as i64)).collect())
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().unwrap())
    }
    /// Reversed polynomial t^d p(1/t) with d = deg.
    pub fn reversed(&self) -> Self {
        Self::new(self.f, self.c.iter().rev().copied().collect())
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() <= dd {
            return (Self::zero(self.f), self.clone());
        }
        let inv = d.lc().inv().unwrap();
        let mut q = vec![self.f.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = r[k + dd].mul(&inv);
            q[k] = coef;
            if coef.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] = r[k + j].sub(&coef.mul(b));
            }
        }
        r.truncate(dd);
        (Self::new(self.f, q), Self::new(self.f, r))
    }
    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }
    /// Exact quotient, None if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.f).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
    /// Multiplicity of a as a root.
    pub fn ord_at(&self, a: &Fq) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Self::linear(*a);
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(&lin) {
            cur = q;
            k += 1;
        }
        k
    }

    /// Distinct roots in the field, sorted, with multiplicities.
    pub fn roots(&self) -> Vec<(Fq, usize)> {
        if self.deg() < 1 {
            return vec![];
        }
        let x = Self::x(self.f);
        let xq = x.powmod(self.f.q, self);
        let g = self.gcd(&xq.sub(&x));
        let mut rs = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        split_linear(&g, &mut rs, &mut rng);
        rs.sort();
        rs.into_iter().map(|r| (r, self.ord_at(&r))).collect()
    }

    /// lcm of the degrees of the irreducible factors: the tower degree over which this splits.
    pub fn splitting_degree(&self) -> usize {
        let mut h = self.clone();
        if h.deg() < 1 {
            return 1;
        }
        let x = Self::x(self.f);
        let mut xp = x.clone();
        let mut need = 1usize;
        let mut d = 0usize;
        while h.deg() > 0 {
            d += 1;
            xp = xp.powmod(self.f.q, &h);
            let g = h.gcd(&xp.sub(&x));
            if g.deg() > 0 {
                need = num_integer::lcm(need, d);
                loop {
                    let g2 = h.gcd(&g);
                    if g2.deg() < 1 {
                        break;
                    }
                    h = h.divrem(&g2).0;
                }
                if h.deg() > 0 {
                    xp = xp.rem(&h);
                }
            }
        }
        need
    }

    /// Roots if the polynomial splits completely, otherwise the extension degree needed.
    pub fn split_roots(&self) -> Result<Vec<(Fq, usize)>> {
        let rs = self.roots();
        let total: usize = rs.iter().map(|r| r.1).sum();
        if total as i64 == self.deg() {
            Ok(rs)
        } else {
            Err(Error::NoRootInResidueField(self.splitting_degree()))
        }
    }

    pub fn embed(&self, target: &'static FieldData) -> Self {
        Self::new(target, self.c.iter().map(|a| embed(a, target)).collect())
    }
}

fn split_linear(g: &FfPoly, out: &mut Vec<Fq>, rng: &mut ChaCha8Rng) {
    match g.deg() {
        d if d < 1 => {}
        1 => out.push(g.monic().coeff(0).neg()),
        _ => {
            let f = g.f;
            loop {
                let a = f.from_index(rng.gen_range(0..f.q));
                let base = FfPoly::new(f, vec![a, f.one()]);
                let h = base.powmod((f.q - 1) / 2, g).sub(&FfPoly::one(f));
                let d = g.gcd(&h);
                if d.deg() > 0 && d.deg() < g.deg() {
                    split_linear(&d, out, rng);
                    split_linear(&g.divrem(&d).0, out, rng);
                    return;
                }
            }
        }
    }
}

fn embed_memo() -> &'static Mutex<HashMap<(u32, usize, usize), Fq>> {
    static M: OnceLock<Mutex<HashMap<(u32, usize, usize), Fq>>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Image of the generator X of the smaller field: least root of its modulus in the target.
fn embedding_root(src: &'static FieldData, target: &'static FieldData) -> Fq {
    let key = (src.p, src.m, target.m);
    if let Some(r) = embed_memo().lock().unwrap().get(&key) {
        return *r;
    }
    let modulus: Vec<Fq> = src.modulus().iter().map(|&c| target.from_int(c as i64)).collect();
    let r = FfPoly::new(target, modulus).roots()[0].0;
    embed_memo().lock().unwrap().insert(key, r);
    r
}

/// Embed an element into a field whose degree is a multiple of its own.
pub fn embed(a: &Fq, target: &'static FieldData) -> Fq {
    let src = a.field();
    if std::ptr::eq(src, target) {
        return *a;
    }
    assert!(src.p == target.p && target.m.is_multiple_of(src.m), "no embedding {src:?} -> {target:?}");
    if a.in_prime_field() {
        return target.from_int(a.coords()[0] as i64);
    }
    let r = embedding_root(src, target);
    a.coords().iter().rev().fold(target.zero(), |acc, &c| acc.mul(&r).add(&target.from_int(c as i64)))
}

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use super::ffpoly::embed;
use super::field::{FieldData, Fq};
use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

/// Valuation: a rational or the +infinity marker of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Finite(Q),
    Infinity,
}

impl Val {
    pub fn finite(self) -> Option<Q> {
        match self {
            Val::Finite(q) => Some(q),
            Val::Infinity => None,
        }
    }
    pub fn is_infinite(self) -> bool {
        matches!(self, Val::Infinity)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(q) => write!(f, "{q}"),
            Val::Infinity => write!(f, "inf"),
        }
    }
}

/// Truncated Laurent series in pi^(1/e) over a finite field.
///
/// Digit `d[i]` is the coefficient of pi^((v0 + i)/e). `prec = Some(n)` means digits at
/// exponents >= n are unknown; `None` marks an exact element.
#[derive(Clone)]
pub struct Padic {
    f: &'static FieldData,
    e: u32,
    v0: i64,
    d: Vec<Fq>,
    prec: Option<i64>,
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::literal::print_series(self))
    }
}

impl PartialEq for Padic {
    fn eq(&self, o: &Self) -> bool {
        let e = self.e.lcm(&o.e);
        let (a, b) = (self.align(e), o.align(e));
        std::ptr::eq(a.f, b.f) && a.prec == b.prec && a.d == b.d && (a.d.is_empty() || a.v0 == b.v0)
    }
}

fn lcm_e(a: &Padic, b: &Padic) -> u32 {
    a.e.lcm(&b.e)
}

impl Padic {
    pub fn from_digits(f: &'static FieldData, e: u32, v0: i64, d: Vec<Fq>, prec: Option<i64>) -> Self {
        assert!(e > 0);
        let mut x = Padic { f, e, v0, d, prec };
        x.normalize();
        x
    }
    pub fn zero(f: &'static FieldData) -> Self {
        Padic { f, e: 1, v0: 0, d: vec![], prec: None }
    }
    /// Zero known only up to pi^(prec/e).
    pub fn zero_to(f: &'static FieldData, e: u32, prec: i64) -> Self {
        Padic { f, e, v0: 0, d: vec![], prec: Some(prec) }
    }
    pub fn one(f: &'static FieldData) -> Self {
        Self::from_fq(f.one())
    }
    pub fn from_fq(a: Fq) -> Self {
        Self::from_digits(a.field(), 1, 0, vec![a], None)
    }
    pub fn from_int(f: &'static FieldData, n: i64) -> Self {
        Self::from_fq(f.from_int(n))
    }
    /// pi^(k/e)
    pub fn pi_pow(f: &'static FieldData, k: i64, e: u32) -> Self {
        Self::from_digits(f, e, k, vec![f.one()], None)
    }
    /// a * pi^q for rational q.
    pub fn monomial(a: Fq, q: Q) -> Self {
        Self::from_digits(a.field(), *q.denom() as u32, *q.numer(), vec![a], None)
    }

    fn normalize(&mut self) {
        if let Some(n) = self.prec {
            let keep = (n - self.v0).clamp(0, self.d.len() as i64) as usize;
            self.d.truncate(keep);
        }
        let lead = self.d.iter().position(|a| !a.is_zero());
        match lead {
            None => {
                self.d.clear();
                self.v0 = 0;
            }
            Some(k) => {
                self.d.drain(..k);
                self.v0 += k as i64;
                while self.d.last().is_some_and(|a| a.is_zero()) {
                    self.d.pop();
                }
            }
        }
        self.reduce_grid();
    }

    /// Shrink e when all exponents lie on a coarser grid.
    fn reduce_grid(&mut self) {
        if self.e == 1 {
            return;
        }
        let mut g = self.e as i64;
        if !self.d.is_empty() {
            g = g.gcd(&self.v0);
            for (i, a) in self.d.iter().enumerate() {
                if !a.is_zero() {
                    g = g.gcd(&(self.v0 + i as i64));
                }
            }
        }
        if let Some(n) = self.prec {
            g = g.gcd(&n);
        }
        if g <= 1 {
            return;
        }
        let g = g as usize;
        let nd: Vec<Fq> = self.d.iter().step_by(g).copied().collect();
        self.d = nd;
        self.v0 /= g as i64;
        self.e /= g as u32;
        self.prec = self.prec.map(|n| n / g as i64);
    }

    pub fn field(&self) -> &'static FieldData {
        self.f
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }
    /// Absolute precision in grid units (None when exact).
    pub fn prec_grid(&self) -> Option<i64> {
        self.prec
    }
    /// Absolute precision as a rational valuation bound.
    pub fn prec(&self) -> Option<Q> {
        self.prec.map(|n| Q::new(n, self.e as i64))
    }
    pub fn is_zero(&self) -> bool {
        self.d.is_empty()
    }
    pub fn is_exact_zero(&self) -> bool {
        self.d.is_empty() && self.prec.is_none()
    }
    pub fn digits(&self) -> &[Fq] {
        &self.d
    }
    /// Leading exponent in grid units; None for zero.
    pub fn v0(&self) -> Option<i64> {
        (!self.d.is_empty()).then_some(self.v0)
    }
    pub fn val(&self) -> Val {
        match self.v0() {
            Some(v) => Val::Finite(Q::new(v, self.e as i64)),
            None => Val::Infinity,
        }
    }
    /// Valuation, failing on an inexact zero.
    pub fn val_checked(&self) -> Result<Val> {
        if self.d.is_empty() && self.prec.is_some() {
            return Err(Error::InsufficientPrecision("valuation of an inexact zero".into()));
        }
        Ok(self.val())
    }
    /// Lower bound for the valuation in grid units.
    fn v_lower(&self) -> Option<i64> {
        match (self.v0(), self.prec) {
            (Some(v), _) => Some(v),
            (None, p) => p,
        }
    }
    pub fn lead(&self) -> Option<Fq> {
        self.d.first().copied()
    }
    /// Coefficient of pi^(k/e).
    pub fn digit(&self, k: i64) -> Fq {
        if k < self.v0 {
            return self.f.zero();
        }
        self.d.get((k - self.v0) as usize).copied().unwrap_or(self.f.zero())
    }
    /// Coefficient of pi^q for rational q.
    pub fn coeff_at(&self, q: Q) -> Fq {
        let k = q * Q::from(self.e as i64);
        if !k.is_integer() {
            return self.f.zero();
        }
        self.digit(k.to_integer())
    }

    /// Same element on the finer grid e2 (a multiple of e).
    pub fn align(&self, e2: u32) -> Padic {
        if e2 == self.e {
            return self.clone();
        }
        assert!(e2.is_multiple_of(self.e), "grid {e2} does not refine {}", self.e);
        let r = (e2 / self.e) as usize;
        let mut d = Vec::new();
        if !self.d.is_empty() {
            d = vec![self.f.zero(); (self.d.len() - 1) * r + 1];
            for (i, a) in self.d.iter().enumerate() {
                d[i * r] = *a;
            }
        }
        Padic { f: self.f, e: e2, v0: self.v0 * r as i64, d, prec: self.prec.map(|n| n * r as i64) }
    }

    pub fn with_prec(&self, n: Q) -> Padic {
        let e = self.e.lcm(&(*n.denom() as u32));
        let a = self.align(e);
        let nn = (n * Q::from(e as i64)).to_integer();
        let prec = Some(match a.prec {
            Some(p) => p.min(nn),
            None => nn,
        });
        Padic::from_digits(self.f, e, a.v0, a.d, prec)
    }

    /// Exact truncation keeping only exponents strictly below q.
    pub fn truncate_below(&self, q: Q) -> Padic {
        let e = self.e.lcm(&(*q.denom() as u32));
        let a = self.align(e);
        let bound = (q * Q::from(e as i64)).to_integer();
        let keep = (bound - a.v0).clamp(0, a.d.len() as i64) as usize;
        Padic::from_digits(self.f, e, a.v0, a.d[..keep].to_vec(), None)
    }

    pub fn add(&self, o: &Padic) -> Padic {
        let e = lcm_e(self, o);
        let (a, b) = (self.align(e), o.align(e));
        let prec = match (a.prec, b.prec) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        if a.d.is_empty() {
            return Padic::from_digits(self.f, e, b.v0, b.d, prec);
        }
        if b.d.is_empty() {
            return Padic::from_digits(self.f, e, a.v0, a.d, prec);
        }
        let lo = a.v0.min(b.v0);
        let hi = (a.v0 + a.d.len() as i64).max(b.v0 + b.d.len() as i64);
        let d = (lo..hi).map(|k| a.digit(k).add(&b.digit(k))).collect();
        Padic::from_digits(self.f, e, lo, d, prec)
    }
    pub fn neg(&self) -> Padic {
        Padic { f: self.f, e: self.e, v0: self.v0, d: self.d.iter().map(|a| a.neg()).collect(), prec: self.prec }
    }
    pub fn sub(&self, o: &Padic) -> Padic {
        self.add(&o.neg())
    }
    pub fn scale(&self, c: &Fq) -> Padic {
        Padic::from_digits(self.f, self.e, self.v0, self.d.iter().map(|a| a.mul(c)).collect(), self.prec)
    }
    /// Multiply by pi^q.
    pub fn shift(&self, q: Q) -> Padic {
        let e = self.e.lcm(&(*q.denom() as u32));
        let a = self.align(e);
        let k = (q * Q::from(e as i64)).to_integer();
        Padic::from_digits(self.f, e, a.v0 + k, a.d, a.prec.map(|n| n + k))
    }
    pub fn mul(&self, o: &Padic) -> Padic {
        let e = lcm_e(self, o);
        let (a, b) = (self.align(e), o.align(e));
        if a.is_exact_zero() || b.is_exact_zero() {
            return Padic::zero(self.f);
        }
        let prec = match (a.prec, b.prec) {
            (None, None) => None,
            (Some(pa), None) => Some(pa + b.v_lower().unwrap()),
            (None, Some(pb)) => Some(pb + a.v_lower().unwrap()),
            (Some(pa), Some(pb)) => Some((pa + b.v_lower().unwrap()).min(pb + a.v_lower().unwrap())),
        };
        if a.d.is_empty() || b.d.is_empty() {
            return Padic { f: self.f, e, v0: 0, d: vec![], prec };
        }
        let v0 = a.v0 + b.v0;
        let mut len = a.d.len() + b.d.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - v0).max(0) as usize);
        }
        let mut d = vec![self.f.zero(); len];
        for (i, x) in a.d.iter().enumerate() {
            if i >= len || x.is_zero() {
                continue;
            }
            for (j, y) in b.d.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                d[i + j] = d[i + j].add(&x.mul(y));
            }
        }
        Padic::from_digits(self.f, e, v0, d, prec)
    }
    pub fn pow(&self, k: u32) -> Padic {
        let mut acc = Padic::one(self.f);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Inverse with relative precision `rel` grid units (less if the input is less precise).
    pub fn inv(&self, rel: i64) -> Result<Padic> {
        if self.d.is_empty() {
            return Err(Error::InsufficientPrecision("inverse of zero".into()));
        }
        if self.d.len() == 1 && self.prec.is_none() {
            let c = self.d[0].inv().unwrap();
            return Ok(Padic::from_digits(self.f, self.e, -self.v0, vec![c], None));
        }
        let mut r = rel.max(1);
        if let Some(p) = self.prec {
            r = r.min(p - self.v0);
        }
        let r = r.max(0) as usize;
        let w0 = self.d[0].inv().unwrap();
        let mut w = vec![self.f.zero(); r];
        if r > 0 {
            w[0] = w0;
        }
        for k in 1..r {
            let mut s = self.f.zero();
            for j in 1..=k.min(self.d.len() - 1) {
                s = s.add(&self.d[j].mul(&w[k - j]));
            }
            w[k] = s.mul(&w0).neg();
        }
        Ok(Padic::from_digits(self.f, self.e, -self.v0, w, Some(-self.v0 + r as i64)))
    }
    pub fn div(&self, o: &Padic, rel: i64) -> Result<Padic> {
        if o.is_exact() && o.d.len() == 1 {
            return Ok(self.mul(&o.inv(1)?));
        }
        Ok(self.mul(&o.inv(rel)?))
    }

    /// Digit at exponent 0 of an element of nonnegative valuation.
    pub fn reduce(&self) -> Result<Fq> {
        if let Some(v) = self.v0() {
            if v < 0 {
                return Err(Error::NegativeValuation);
            }
        }
        if let Some(p) = self.prec {
            if p <= 0 {
                return Err(Error::InsufficientPrecision("reduction".into()));
            }
        }
        Ok(self.digit(0))
    }

    pub fn embed(&self, target: &'static FieldData) -> Padic {
        Padic::from_digits(target, self.e, self.v0, self.d.iter().map(|a| embed(a, target)).collect(), self.prec)
    }

    /// Tame base change by pi -> pi^(1/factor). With `renormalize`, the new uniformizer gets
    /// valuation 1, so valuations scale by `factor`; otherwise only the grid refines.
    pub fn extend_ramification(&self, factor: u32, renormalize: bool) -> Result<Padic> {
        if factor == 0 || factor.is_multiple_of(self.f.p) {
            return Err(Error::WildExtension(factor));
        }
        let fine = self.align(self.e * factor);
        if renormalize {
            Ok(Padic::from_digits(self.f, self.e, fine.v0, fine.d, fine.prec))
        } else {
            Ok(fine)
        }
    }

    /// Canonical ordering for sorting roots deterministically.
    pub fn cmp_canonical(&self, o: &Padic) -> Ordering {
        let e = lcm_e(self, o);
        let (a, b) = (self.align(e), o.align(e));
        let lo = a.v0.min(b.v0);
        let hi = (a.v0 + a.d.len() as i64).max(b.v0 + b.d.len() as i64);
        for k in lo..hi {
            let c = a.digit(k).cmp(&b.digit(k));
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valfield::field::field;

    fn f13() -> &'static FieldData {
        field(13, 1).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let f = f13();
        let x = Padic::pi_pow(f, 3, 1).add(&Padic::pi_pow(f, 5, 1));
        assert_eq!(x.val(), Val::Finite(Q::from(3)));
        assert_eq!(Padic::from_int(f, 4).val(), Val::Finite(Q::from(0)));
        assert_eq!(Padic::zero(f).val(), Val::Infinity);
    }

    #[test]
    fn reduce_examples() {
        let f = field(7, 1).unwrap();
        let x = Padic::from_int(f, 5).add(&Padic::pi_pow(f, 1, 1));
        assert_eq!(x.reduce().unwrap(), f.from_int(5));
        assert_eq!(Padic::pi_pow(f, 1, 1).reduce().unwrap(), f.zero());
        assert_eq!(Padic::pi_pow(f, -1, 1).reduce(), Err(Error::NegativeValuation));
    }

    #[test]
    fn inverse_of_one_minus_pi() {
        let f = f13();
        let x = Padic::one(f).sub(&Padic::pi_pow(f, 1, 1));
        let y = x.inv(10).unwrap();
        for k in 0..10 {
            assert!(y.digit(k).is_one());
        }
        let z = x.mul(&y);
        assert_eq!(z.val(), Val::Finite(Q::from(0)));
        assert_eq!(z.digit(0), f.one());
        for k in 1..10 {
            assert!(z.digit(k).is_zero());
        }
    }

    #[test]
    fn ramification_extension() {
        let f = f13();
        let pi = Padic::pi_pow(f, 1, 1);
        assert_eq!(pi.extend_ramification(3, true).unwrap().val(), Val::Finite(Q::from(3)));
        assert_eq!(pi.extend_ramification(1, true).unwrap(), pi);
        let half = Padic::pi_pow(f, 1, 2);
        let ext = half.extend_ramification(2, false).unwrap();
        assert_eq!(ext.val(), Val::Finite(Q::new(1, 2)));
        assert_eq!(pi.extend_ramification(13, false), Err(Error::WildExtension(13)));
    }

    #[test]
    fn grid_alignment_in_sums() {
        let f = f13();
        let a = Padic::pi_pow(f, 1, 2);
        let b = Padic::pi_pow(f, 1, 3);
        let s = a.add(&b);
        assert_eq!(s.e(), 6);
        assert_eq!(s.val(), Val::Finite(Q::new(1, 3)));
        assert_eq!(s.sub(&b), a);
    }
}

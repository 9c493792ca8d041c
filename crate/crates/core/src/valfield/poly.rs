use std::fmt;

use num_integer::Integer;

use super::ffpoly::FfPoly;
use super::field::{FieldData, Fq};
use super::series::{Padic, Val, Q};
use crate::error::{Error, Result};

/// Polynomial with series coefficients, low degree first. Trailing exact zeros are trimmed.
#[derive(Clone, PartialEq)]
pub struct ValuedPoly {
    f: &'static FieldData,
    c: Vec<Padic>,
}

impl fmt::Debug for ValuedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::literal::print_poly(self, "x"))
    }
}

/// Newton polygon segment: slope in valuation per degree, horizontal length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Q,
    pub length: usize,
    pub start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub segments: Vec<Segment>,
    /// Multiplicity of the root 0 (exactly vanishing low coefficients).
    pub zero_order: usize,
}

impl NewtonPolygon {
    /// Valuations of the nonzero roots, with multiplicities, increasing.
    pub fn root_valuations(&self) -> Vec<(Q, usize)> {
        let mut v: Vec<(Q, usize)> = self.segments.iter().map(|s| (-s.slope, s.length)).collect();
        v.reverse();
        v
    }
}

impl ValuedPoly {
    pub fn new(f: &'static FieldData, mut c: Vec<Padic>) -> Self {
        while c.last().is_some_and(|a| a.is_exact_zero()) {
            c.pop();
        }
        ValuedPoly { f, c }
    }
    pub fn zero(f: &'static FieldData) -> Self {
        ValuedPoly { f, c: vec![] }
    }
    pub fn constant(a: Padic) -> Self {
        Self::new(a.field(), vec![a])
    }
    pub fn one(f: &'static FieldData) -> Self {
        Self::constant(Padic::one(f))
    }
    pub fn x(f: &'static FieldData) -> Self {
        Self::new(f, vec![Padic::zero(f), Padic::one(f)])
    }
    /// x - a
    pub fn linear(a: &Padic) -> Self {
        Self::new(a.field(), vec![a.neg(), Padic::one(a.field())])
    }
    pub fn from_ints(f: &'static FieldData, c: &[i64]) -> Self {
        Self::new(f, c.iter().map(|&v| Padic::from_int(f, v)).collect())
    }
    pub fn field(&self) -> &'static FieldData {
        self.f
    }
    pub fn coeffs(&self) -> &[Padic] {
        &self.c
    }
    pub fn coeff(&self, i: usize) -> Padic {
        self.c.get(i).cloned().unwrap_or(Padic::zero(self.f))
    }
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn lc(&self) -> Padic {
        self.c.last().cloned().unwrap_or(Padic::zero(self.f))
    }
    /// Common ramification index of the coefficients.
    pub fn e(&self) -> u32 {
        self.c.iter().fold(1u32, |acc, a| acc.lcm(&a.e()))
    }
    pub fn is_exact(&self) -> bool {
        self.c.iter().all(|a| a.is_exact())
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
    pub fn scale(&self, a: &Padic) -> Self {
        Self::new(self.f, self.c.iter().map(|b| b.mul(a)).collect())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.f);
        }
        let mut c = vec![Padic::zero(self.f); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_exact_zero() {
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
    pub fn derivative(&self) -> Self {
        Self::new(
            self.f,
            self.c.iter().enumerate().skip(1).map(|(i, a)| a.scale(&self.f.from_int(i as i64))).collect(),
        )
    }
    pub fn eval(&self, x: &Padic) -> Padic {
        self.c.iter().rev().fold(Padic::zero(self.f), |acc, a| acc.mul(x).add(a))
    }
    /// f(a + s*t) as a polynomial in t.
    pub fn compose_linear(&self, a: &Padic, s: &Padic) -> Self {
        let lin = Self::new(self.f, vec![a.clone(), s.clone()]);
        self.c.iter().rev().fold(Self::zero(self.f), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }
    /// t^d f(1/t) with d = deg f.
    pub fn reversed(&self) -> Self {
        Self::new(self.f, self.c.iter().rev().cloned().collect())
    }

    /// Minimum coefficient valuation (the Gauss valuation at the standard component).
    pub fn gauss_val(&self) -> Val {
        self.c.iter().map(|a| a.val()).min().unwrap_or(Val::Infinity)
    }

    /// Reduction of pi^(-gauss_val) f.
    pub fn reduce_gauss(&self) -> Result<(Q, FfPoly)> {
        let v = self
            .gauss_val()
            .finite()
            .ok_or_else(|| Error::InsufficientPrecision("reduction of the zero polynomial".into()))?;
        for a in &self.c {
            if let Some(p) = a.prec() {
                if p <= v {
                    return Err(Error::InsufficientPrecision("Gauss reduction".into()));
                }
            }
        }
        let c = self.c.iter().map(|a| a.coeff_at(v)).collect();
        Ok((v, FfPoly::new(self.f, c)))
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        let zero_order = self.c.iter().position(|a| !a.is_exact_zero()).unwrap_or(0);
        let pts: Vec<(usize, Q)> = self
            .c
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.val().finite().map(|v| (i, v)))
            .collect();
        let mut hull: Vec<(usize, Q)> = Vec::new();
        for &p in &pts {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let lhs = (b.1 - a.1) * Q::from((p.0 - a.0) as i64);
                let rhs = (p.1 - a.1) * Q::from((b.0 - a.0) as i64);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        if hull.first().map(|h| h.0) != Some(zero_order) && !pts.is_empty() {
            return Err(Error::InsufficientPrecision("Newton polygon: inexact low coefficient".into()));
        }
        let segments: Vec<Segment> = hull
            .windows(2)
            .map(|w| Segment {
                slope: (w[1].1 - w[0].1) / Q::from((w[1].0 - w[0].0) as i64),
                length: w[1].0 - w[0].0,
                start: w[0].0,
            })
            .collect();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() && !a.is_exact() {
                let bound = a.prec().unwrap();
                if let Some(line) = hull_value(&hull, i) {
                    if bound <= line {
                        return Err(Error::InsufficientPrecision("Newton polygon".into()));
                    }
                }
            }
        }
        Ok(NewtonPolygon { segments, zero_order })
    }

    pub fn embed(&self, target: &'static FieldData) -> Self {
        Self::new(target, self.c.iter().map(|a| a.embed(target)).collect())
    }

    pub fn extend_ramification(&self, factor: u32, renormalize: bool) -> Result<Self> {
        Ok(Self::new(self.f, self.c.iter().map(|a| a.extend_ramification(factor, renormalize)).collect::<Result<_>>()?))
    }

    /// Exact coefficient-wise truncation below valuation q.
    pub fn truncate_below(&self, q: Q) -> Self {
        Self::new(self.f, self.c.iter().map(|a| a.truncate_below(q)).collect())
    }

    /// Quotient by (x - a) via synthetic division, and the remainder.
    pub fn div_linear(&self, a: &Padic) -> (Self, Padic) {
        if self.c.is_empty() {
            return (self.clone(), Padic::zero(self.f));
        }
        let n = self.c.len();
        let mut q = vec![Padic::zero(self.f); n - 1];
        let mut acc = Padic::zero(self.f);
        for i in (0..n).rev() {
            acc = acc.mul(a).add(&self.c[i]);
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        (Self::new(self.f, q), acc)
    }
    pub fn residue_coeffs(&self) -> Vec<Fq> {
        self.c.iter().map(|a| a.digit(0)).collect()
    }
}

/// Pi-content: the minimum coefficient valuation.
pub fn pi_content(f: &ValuedPoly) -> Val {
    f.gauss_val()
}

fn hull_value(hull: &[(usize, Q)], i: usize) -> Option<Q> {
    for w in hull.windows(2) {
        if w[0].0 <= i && i <= w[1].0 {
            let t = Q::from((i - w[0].0) as i64) / Q::from((w[1].0 - w[0].0) as i64);
            return Some(w[0].1 + (w[1].1 - w[0].1) * t);
        }
    }
    None
}

use crate::error::{Error, Result};
use crate::septree::Coord;
use crate::valfield::{FfPoly, FieldData, Fq};

/// Rational function num/den in one variable t over a finite field; den is monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: FfPoly,
    pub den: FfPoly,
}

impl RatFn {
    pub fn new(num: FfPoly, den: FfPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.deg() > 0 {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        } else {
            (num, den)
        };
        let l = den.lc();
        let il = l.inv().unwrap();
        num = num.scale(&il);
        den = den.scale(&il);
        RatFn { num, den }
    }
    pub fn poly(p: FfPoly) -> Self {
        let f = p.f;
        RatFn { num: p, den: FfPoly::one(f) }
    }
    pub fn constant(a: Fq) -> Self {
        Self::poly(FfPoly::constant(a))
    }
    pub fn one(f: &'static FieldData) -> Self {
        Self::poly(FfPoly::one(f))
    }
    pub fn field(&self) -> &'static FieldData {
        self.num.f
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_constant(&self) -> bool {
        self.num.deg() <= 0 && self.den.deg() == 0
    }
    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()))
    }
    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }
    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn scale(&self, a: &Fq) -> Self {
        RatFn { num: self.num.scale(a), den: self.den.clone() }
    }
    /// Integer power; negative exponents invert.
    pub fn powi(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv().expect("power of zero") } else { self.clone() };
        let k = k.unsigned_abs() as u32;
        RatFn { num: base.num.pow(k), den: base.den.pow(k) }
    }
    pub fn embed(&self, target: &'static FieldData) -> Self {
        RatFn { num: self.num.embed(target), den: self.den.embed(target) }
    }
    /// Degree num - den.
    pub fn degree(&self) -> i64 {
        self.num.deg() - self.den.deg()
    }

    /// Order of vanishing at a point of P^1.
    pub fn ord(&self, p: &Coord) -> i64 {
        match p {
            Coord::Finite(a) => self.num.ord_at(a) as i64 - self.den.ord_at(a) as i64,
            Coord::Infinity => -self.degree(),
        }
    }

    /// Leading coefficient of the Laurent expansion in t - a, or lc(num)/lc(den) at infinity.
    pub fn lead(&self, p: &Coord) -> Fq {
        match p {
            Coord::Finite(a) => {
                let n = strip(&self.num, a);
                let d = strip(&self.den, a);
                n.eval(a).div(&d.eval(a)).unwrap()
            }
            Coord::Infinity => self.num.lc().div(&self.den.lc()).unwrap(),
        }
    }

    pub fn eval(&self, a: &Fq) -> Option<Fq> {
        self.num.eval(a).div(&self.den.eval(a))
    }

    /// Zeros and poles with orders, finite points sorted, infinity last; fails if they are not rational.
    pub fn divisor(&self) -> Result<Vec<(Coord, i64)>> {
        let mut out: Vec<(Coord, i64)> = Vec::new();
        for (a, k) in self.num.split_roots()? {
            out.push((Coord::Finite(a), k as i64));
        }
        for (a, k) in self.den.split_roots()? {
            out.push((Coord::Finite(a), -(k as i64)));
        }
        out.sort();
        let d = self.degree();
        if d != 0 {
            out.push((Coord::Infinity, -d));
        }
        Ok(out)
    }

    /// Some h with h^n = self, if one exists over the current field.
    pub fn nth_root(&self, n: u64) -> Result<Option<RatFn>> {
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        let f = self.field();
        let mut num = FfPoly::one(f);
        let mut den = FfPoly::one(f);
        for (p, k) in self.divisor()? {
            if k % n as i64 != 0 {
                return Ok(None);
            }
            if let Coord::Finite(a) = p {
                let lin = FfPoly::linear(a).pow((k.unsigned_abs() / n) as u32);
                if k > 0 {
                    num = num.mul(&lin);
                } else {
                    den = den.mul(&lin);
                }
            }
        }
        let c = self.num.lc().div(&self.den.lc()).unwrap();
        match c.nth_root(n) {
            Some(r) => Ok(Some(RatFn::new(num.scale(&r), den))),
            None => Err(Error::NoRootInResidueField(root_extension_degree(&c, n))),
        }
    }
}

fn strip(p: &FfPoly, a: &Fq) -> FfPoly {
    let lin = FfPoly::linear(*a);
    let mut cur = p.clone();
    while let Some(q) = cur.div_exact(&lin) {
        cur = q;
    }
    cur
}

/// Smallest m with an n-th root of c in the degree-m extension.
pub fn root_extension_degree(c: &Fq, n: u64) -> usize {
    let f = c.field();
    let mut m = 2usize;
    loop {
        if let Ok(big) = crate::valfield::field(f.p, f.m * m) {
            if crate::valfield::ffpoly::embed(c, big).is_nth_power(n) {
                return m;
            }
        }
        m += 1;
        if m > 64 {
            return m;
        }
    }
}

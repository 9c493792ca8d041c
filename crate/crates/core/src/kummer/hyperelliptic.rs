//! Functions A + B*Y on hyperelliptic components Y^2 = H(t), and principal-divisor tests.

use super::ratfn::RatFn;
use crate::error::{Error, Result};
use crate::septree::Coord;
use crate::valfield::{FfPoly, Fq};

/// Y^2 = H(t) with H squarefree of positive degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperelliptic {
    pub h: FfPoly,
}

/// A point: affine (t, Y), or a point at infinity with Y / t^(g+1) -> the given value
/// (zero for the single branch point of an odd-degree model).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HPoint {
    Affine(Fq, Fq),
    Infinity(Fq),
}

/// The function A(t) + B(t) * Y.
#[derive(Clone, Debug, PartialEq)]
pub struct HFun {
    pub a: RatFn,
    pub b: RatFn,
}

impl HFun {
    /// N = A^2 - B^2 H, the norm to the t-line.
    pub fn norm(&self, h: &FfPoly) -> RatFn {
        self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&RatFn::poly(h.clone())))
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

fn ord0(r: &RatFn, c: &Coord) -> i64 {
    if r.is_zero() {
        i64::MAX
    } else {
        r.ord(c)
    }
}

fn lead0(r: &RatFn, c: &Coord) -> Fq {
    if r.is_zero() {
        r.field().zero()
    } else {
        r.lead(c)
    }
}

impl Hyperelliptic {
    pub fn new(h: FfPoly) -> Result<Self> {
        if h.deg() < 1 {
            return Err(Error::Input("hyperelliptic model needs a nonconstant H".into()));
        }
        if h.gcd(&h.derivative()).deg() > 0 {
            return Err(Error::Input("H is not squarefree".into()));
        }
        Ok(Hyperelliptic { h })
    }

    pub fn genus(&self) -> u32 {
        ((self.h.deg() - 1) / 2) as u32
    }

    fn g1(&self) -> u64 {
        self.genus() as u64 + 1
    }

    /// Points lying over a point of the t-line.
    pub fn points_above(&self, c: &Coord) -> Result<Vec<HPoint>> {
        let f = self.h.f;
        match c {
            Coord::Finite(t) => {
                let y2 = self.h.eval(t);
                if y2.is_zero() {
                    return Ok(vec![HPoint::Affine(*t, y2)]);
                }
                let y = y2.nth_root(2).ok_or(Error::NoRootInResidueField(2))?;
                let mut v = vec![HPoint::Affine(*t, y), HPoint::Affine(*t, y.neg())];
                v.sort();
                Ok(v)
            }
            Coord::Infinity => {
                if self.h.deg() % 2 == 1 {
                    return Ok(vec![HPoint::Infinity(f.zero())]);
                }
                let y = self.h.lc().nth_root(2).ok_or(Error::NoRootInResidueField(2))?;
                let mut v = vec![HPoint::Infinity(y), HPoint::Infinity(y.neg())];
                v.sort();
                Ok(v)
            }
        }
    }

    pub fn base_coord(p: &HPoint) -> Coord {
        match p {
            HPoint::Affine(t, _) => Coord::Finite(*t),
            HPoint::Infinity(_) => Coord::Infinity,
        }
    }

    /// Order of A + B*Y at a point.
    pub fn ord(&self, fun: &HFun, p: &HPoint) -> i64 {
        let n = fun.norm(&self.h);
        match p {
            HPoint::Affine(t, y) => {
                let c = Coord::Finite(*t);
                if y.is_zero() {
                    return n.ord(&c);
                }
                let (oa, ob) = (ord0(&fun.a, &c), ord0(&fun.b, &c));
                if oa != ob {
                    return oa.min(ob);
                }
                let lead = lead0(&fun.a, &c).add(&lead0(&fun.b, &c).mul(y));
                if !lead.is_zero() {
                    oa
                } else {
                    n.ord(&c) - oa
                }
            }
            HPoint::Infinity(y) => {
                let c = Coord::Infinity;
                if self.h.deg() % 2 == 1 {
                    return n.ord(&c);
                }
                let oa = ord0(&fun.a, &c);
                let ob = ord0(&fun.b, &c).saturating_sub(self.g1() as i64);
                if oa != ob {
                    return oa.min(ob);
                }
                let lead = lead0(&fun.a, &c).add(&lead0(&fun.b, &c).mul(y));
                if !lead.is_zero() {
                    oa
                } else {
                    n.ord(&c) - oa
                }
            }
        }
    }

    /// Zeros and poles of A + B*Y; fails when they are not rational over the current field.
    pub fn divisor(&self, fun: &HFun) -> Result<Vec<(HPoint, i64)>> {
        if fun.is_zero() {
            return Err(Error::Input("divisor of zero".into()));
        }
        let n = fun.norm(&self.h);
        let mut ts: Vec<Coord> = vec![Coord::Infinity];
        for p in [&n.num, &n.den, &fun.a.den, &fun.b.den] {
            for (t, _) in p.split_roots()? {
                ts.push(Coord::Finite(t));
            }
        }
        ts.sort();
        ts.dedup();
        let mut out = Vec::new();
        for c in ts {
            for p in self.points_above(&c)? {
                let k = self.ord(fun, &p);
                if k != 0 {
                    out.push((p, k));
                }
            }
        }
        Ok(out)
    }

    /// Whether a degree-0 divisor is principal.
    pub fn is_principal(&self, d: &[(HPoint, i64)]) -> Result<bool> {
        let deg: i64 = d.iter().map(|x| x.1).sum();
        if deg != 0 {
            return Ok(false);
        }
        if self.genus() == 0 {
            return Ok(true);
        }
        let model = OddModel::new(self)?;
        let mut acc = Mumford::zero(model.f.f);
        for (p, k) in d {
            if let Some((x, y)) = model.map(p) {
                let pt = Mumford { u: FfPoly::linear(x), v: FfPoly::constant(y) };
                let pt = if *k < 0 { pt.neg() } else { pt };
                for _ in 0..k.unsigned_abs() {
                    acc = model.add(&acc, &pt);
                }
            }
        }
        Ok(acc.u.deg() == 0)
    }

    /// Whether f = c * h^s for a function h, over an algebraic closure of the residue field.
    pub fn is_power_class(&self, fun: &HFun, s: u64) -> Result<bool> {
        let div = self.divisor(fun)?;
        if div.iter().any(|(_, k)| k % s as i64 != 0) {
            return Ok(false);
        }
        let half: Vec<(HPoint, i64)> = div.iter().map(|(p, k)| (*p, k / s as i64)).collect();
        self.is_principal(&half)
    }
}

/// Decomposition order of z^n = f over a hyperelliptic component: the smallest divisor r of n
/// such that f is an (n/r)-th power up to constants.
pub fn decomposition_order(n: u64, curve: &Hyperelliptic, fun: &HFun) -> Result<u64> {
    let mut divs: Vec<u64> = (1..=n).filter(|r| n.is_multiple_of(*r)).collect();
    divs.sort();
    for r in divs {
        if curve.is_power_class(fun, n / r)? {
            return Ok(r);
        }
    }
    Ok(n)
}

/// Mumford representation (u, v) of a reduced divisor class on an odd-degree model.
#[derive(Clone, Debug, PartialEq)]
struct Mumford {
    u: FfPoly,
    v: FfPoly,
}

impl Mumford {
    fn zero(f: &'static crate::valfield::FieldData) -> Self {
        Mumford { u: FfPoly::one(f), v: FfPoly::zero(f) }
    }
    fn neg(&self) -> Self {
        Mumford { u: self.u.clone(), v: self.v.neg() }
    }
}

/// y^2 = f(x), f monic of odd degree, with the map from the original model.
struct OddModel {
    f: FfPoly,
    g: i64,
    /// t0 moved to infinity when H has even degree.
    t0: Option<Fq>,
    g1: u64,
    /// Scaling X = c x, y' = y c^((d-1)/2).
    c: Fq,
    ypow: Fq,
}

impl OddModel {
    fn new(curve: &Hyperelliptic) -> Result<Self> {
        let h = &curve.h;
        let fd = h.f;
        let g1 = curve.genus() as u64 + 1;
        let (hp, t0) = if h.deg() % 2 == 1 {
            (h.clone(), None)
        } else {
            let roots = h.roots();
            if roots.is_empty() {
                return Err(Error::NoRootInResidueField(h.splitting_degree()));
            }
            let t0 = roots[0].0;
            let shift = FfPoly::new(fd, vec![t0, fd.one()]);
            let mut gsh = FfPoly::zero(fd);
            for a in h.coeffs().iter().rev() {
                gsh = gsh.mul(&shift).add(&FfPoly::constant(*a));
            }
            let top = (2 * g1) as usize;
            let coeffs: Vec<Fq> = (0..=top).map(|j| gsh.coeff(top - j)).collect();
            (FfPoly::new(fd, coeffs), Some(t0))
        };
        let d = hp.deg() as usize;
        let c = hp.lc();
        let m = hp.monic();
        let coeffs: Vec<Fq> = (0..=d).map(|i| m.coeff(i).mul(&c.pow((d - i) as u64))).collect();
        let f = FfPoly::new(fd, coeffs);
        Ok(OddModel { g: ((d - 1) / 2) as i64, f, t0, g1, c, ypow: c.pow(((d - 1) / 2) as u64) })
    }

    /// Affine coordinates in the monic odd model, or None for its point at infinity.
    fn map(&self, p: &HPoint) -> Option<(Fq, Fq)> {
        let (s, y) = match (self.t0, p) {
            (None, HPoint::Infinity(_)) => return None,
            (None, HPoint::Affine(t, y)) => (*t, *y),
            (Some(t0), HPoint::Affine(t, y)) => {
                if *t == t0 {
                    return None;
                }
                let s = t.sub(&t0).inv().unwrap();
                (s, y.mul(&s.pow(self.g1)))
            }
            (Some(_), HPoint::Infinity(y)) => (self.c.zero(), *y),
        };
        Some((s.mul(&self.c), y.mul(&self.ypow)))
    }

    fn add(&self, a: &Mumford, b: &Mumford) -> Mumford {
        let (d0, e1, e2) = xgcd(&a.u, &b.u);
        let (d, c1, c2) = xgcd(&d0, &a.v.add(&b.v));
        let s1 = c1.mul(&e1);
        let s2 = c1.mul(&e2);
        let s3 = c2;
        let u = a.u.mul(&b.u).div_exact(&d.mul(&d)).unwrap();
        let num = s1
            .mul(&a.u)
            .mul(&b.v)
            .add(&s2.mul(&b.u).mul(&a.v))
            .add(&s3.mul(&a.v.mul(&b.v).add(&self.f)));
        let v = num.div_exact(&d).unwrap().rem(&u);
        self.reduce(Mumford { u, v })
    }

    fn reduce(&self, mut m: Mumford) -> Mumford {
        while m.u.deg() > self.g {
            let u2 = self.f.sub(&m.v.mul(&m.v)).div_exact(&m.u).unwrap();
            let u2 = u2.monic();
            let v2 = m.v.neg().rem(&u2);
            m = Mumford { u: u2, v: v2 };
        }
        let u = m.u.monic();
        let v = m.v.rem(&u);
        Mumford { u, v }
    }
}

/// Extended gcd: (d, s, t) with d = s a + t b monic.
fn xgcd(a: &FfPoly, b: &FfPoly) -> (FfPoly, FfPoly, FfPoly) {
    let f = a.f;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (FfPoly::one(f), FfPoly::zero(f));
    let (mut t0, mut t1) = (FfPoly::zero(f), FfPoly::one(f));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = s0.sub(&q.mul(&s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = t0.sub(&q.mul(&t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_zero() {
        return (r0, s0, t0);
    }
    let inv = r0.lc().inv().unwrap();
    (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valfield::field;

    fn poly(c: &[i64]) -> FfPoly {
        let f = field(13, 1).unwrap();
        FfPoly::new(f, c.iter().map(|&a| f.from_int(a)).collect())
    }

    #[test]
    fn orders_sum_to_zero() {
        // genus 2, odd degree
        let c = Hyperelliptic::new(poly(&[1, 2, 0, 3, 0, 1])).unwrap();
        let fun = HFun { a: RatFn::poly(poly(&[1, 1])), b: RatFn::poly(poly(&[2])) };
        let d = c.divisor(&fun);
        if let Ok(d) = d {
            assert_eq!(d.iter().map(|x| x.1).sum::<i64>(), 0);
        }
        // even degree, a conic: t Y - sqrt27 (t^2 + 1) style cancellation at infinity
        let f = field(13, 1).unwrap();
        let s27 = f.from_int(27).nth_root(2).unwrap();
        let conic = Hyperelliptic::new(poly(&[54, 0, 27])).unwrap();
        let fun = HFun { a: RatFn::poly(poly(&[1, 0, 1]).scale(&s27.neg())), b: RatFn::poly(poly(&[0, 1])) };
        let d = conic.divisor(&fun).unwrap();
        let mut ks: Vec<i64> = d.iter().map(|x| x.1).collect();
        ks.sort();
        assert_eq!(ks, vec![-2, 2]);
    }

    #[test]
    fn principal_divisors_of_functions() {
        let c = Hyperelliptic::new(poly(&[1, 2, 0, 3, 0, 1])).unwrap();
        let f = field(13, 1).unwrap();
        for (a, b) in [(vec![1, 1], vec![2]), (vec![0, 3, 1], vec![1, 1]), (vec![5], vec![0, 0, 1])] {
            let fun = HFun { a: RatFn::poly(poly(&a)), b: RatFn::poly(poly(&b)) };
            let Ok(d) = c.divisor(&fun) else { continue };
            assert!(c.is_principal(&d).unwrap());
        }
        // a single point minus infinity is not principal in genus >= 1
        let pts: Vec<HPoint> = f
            .elements()
            .filter_map(|t| c.points_above(&Coord::Finite(t)).ok())
            .flatten()
            .collect();
        let p = pts[0];
        let inf = c.points_above(&Coord::Infinity).unwrap()[0];
        assert!(!c.is_principal(&[(p, 1), (inf, -1)]).unwrap());
        // a point plus its conjugate is the divisor of t - t0
        if let HPoint::Affine(t, y) = p {
            assert!(c.is_principal(&[(p, 1), (HPoint::Affine(t, y.neg()), 1), (inf, -2)]).unwrap());
        }
    }

    #[test]
    fn even_degree_model() {
        // genus 1 with two points at infinity
        let c = Hyperelliptic::new(poly(&[-1, 0, 0, 0, 1])).unwrap();
        let fun = HFun { a: RatFn::poly(poly(&[0, 0, 1])), b: RatFn::poly(poly(&[1])) };
        let d = c.divisor(&fun).unwrap();
        assert_eq!(d.iter().map(|x| x.1).sum::<i64>(), 0);
        assert!(c.is_principal(&d).unwrap());
        let cube = HFun { a: RatFn::poly(poly(&[0, 1])), b: RatFn::poly(poly(&[0])) };
        assert!(!c.is_power_class(&cube, 3).unwrap());
    }
}

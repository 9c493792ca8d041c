//! Degree-three covers z^3 + p z + q = 0 of the line: classification, the S3 Galois closure
//! w^3 = y - sqrt(27) q over y^2 = 4p^3 + 27q^2, and its quotient back to the curve.

pub mod closure;
pub mod elliptic;
pub mod inertia;
pub mod quadratic;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::septree::Point;
use crate::valfield::{field, roots_padic, Padic, ValuedPoly, Val, Q, DEFAULT_PREC};

pub use closure::{galois_closure, GenusLedger, S3Result};
pub use elliptic::{elliptic_case, elliptic_skeleton, EllipticCase, EllipticResult, Reduction};
pub use inertia::{closure_covering_data_inertia, vertical_inertia, InertiaRoute};
pub use quadratic::{quadratic_subcover, w_divisor, QuadraticCover, WDivisor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CubicClass {
    Abelian,
    S3,
    Reducible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    I,
    II,
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InertiaCase {
    pub case: Case,
    pub order: u64,
}

/// Inertia of the S3 closure over a discrete valuation with v(p), v(q), v(Delta) given.
pub fn inertia_case(vp: i64, vq: i64, vd: i64) -> InertiaCase {
    use std::cmp::Ordering::*;
    match (3 * vp).cmp(&(2 * vq)) {
        Greater => InertiaCase { case: Case::I, order: if vq.rem_euclid(3) != 0 { 3 } else { 1 } },
        Less => InertiaCase { case: Case::II, order: if vp.rem_euclid(2) != 0 { 2 } else { 1 } },
        Equal => InertiaCase { case: Case::III, order: if vd.rem_euclid(2) != 0 { 2 } else { 1 } },
    }
}

#[derive(Clone, Debug)]
pub struct S3Options {
    pub precision: i64,
    /// Length of leaves attached at every marked point, if any.
    pub point_leaves: Option<Q>,
}

impl Default for S3Options {
    fn default() -> Self {
        S3Options { precision: DEFAULT_PREC, point_leaves: None }
    }
}

/// z^3 + p z + q with its discriminant and the valuation table on Supp(p, q, Delta) and infinity.
#[derive(Clone, Debug)]
pub struct CubicCover {
    pub p: ValuedPoly,
    pub q: ValuedPoly,
    pub delta: ValuedPoly,
    /// Roots of p, of q, of Delta, then infinity.
    pub points: Vec<Point>,
    /// (v(p), v(q), v(Delta)) at each point; minus the degrees at infinity.
    pub table: Vec<[i64; 3]>,
}

pub fn discriminant(p: &ValuedPoly, q: &ValuedPoly) -> ValuedPoly {
    let f = p.field();
    p.pow(3).scale(&Padic::from_int(f, 4)).add(&q.pow(2).scale(&Padic::from_int(f, 27)))
}

impl CubicCover {
    pub fn new(p: &ValuedPoly, q: &ValuedPoly, precision: i64) -> Result<Self> {
        if p.is_zero() || q.is_zero() {
            return Err(Error::Input("p and q must both be nonzero".into()));
        }
        let delta = discriminant(p, q);
        if delta.is_zero() {
            return Err(Error::Singular);
        }
        if share_root(p, q, precision)? {
            return Err(Error::Input("p and q share a factor".into()));
        }
        let mut points = Vec::new();
        let mut table = Vec::new();
        for (k, f) in [p, q, &delta].into_iter().enumerate() {
            for (a, m) in roots_padic(f, precision)? {
                let mut row = [0i64; 3];
                row[k] = m as i64;
                points.push(Point::Finite(a));
                table.push(row);
            }
        }
        points.push(Point::Infinity);
        table.push([-p.deg(), -q.deg(), -delta.deg()]);
        Ok(CubicCover { p: p.clone(), q: q.clone(), delta, points, table })
    }

    pub fn field(&self) -> &'static crate::valfield::FieldData {
        self.p.field()
    }

    /// S3 inertia order at each point of the table.
    pub fn point_inertia(&self) -> Vec<u64> {
        self.table.iter().map(|r| inertia_case(r[0], r[1], r[2]).order).collect()
    }
}

/// Whether some root of p is a root of q, at the working precision and again at twice it.
fn share_root(p: &ValuedPoly, q: &ValuedPoly, precision: i64) -> Result<bool> {
    for prec in [precision, 2 * precision] {
        let hit = roots_padic(p, prec)?.iter().any(|(a, _)| q.eval(a).is_zero());
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Run a computation, enlarging the residue field whenever a root is missing.
pub(crate) fn with_tower<T>(
    p: &ValuedPoly,
    q: &ValuedPoly,
    mut run: impl FnMut(&ValuedPoly, &ValuedPoly) -> Result<T>,
) -> Result<T> {
    let (mut p, mut q) = (p.clone(), q.clone());
    loop {
        match run(&p, &q) {
            Err(Error::NoRootInResidueField(d)) if d > 1 => {
                let f = p.field();
                let big = field(f.p, f.m * d)?;
                p = p.embed(big);
                q = q.embed(big);
            }
            r => return r,
        }
    }
}

/// Abelian, S3 or reducible over the function field.
pub fn classify(p: &ValuedPoly, q: &ValuedPoly) -> Result<CubicClass> {
    classify_with(p, q, DEFAULT_PREC)
}

pub fn classify_with(p: &ValuedPoly, q: &ValuedPoly, precision: i64) -> Result<CubicClass> {
    if q.is_zero() {
        return Ok(CubicClass::Reducible);
    }
    if discriminant(p, q).is_zero() {
        return Err(Error::Singular);
    }
    with_tower(p, q, |p, q| {
        if share_root(p, q, precision)? {
            return Err(Error::Input("p and q share a factor".into()));
        }
        if has_polynomial_root(p, q, precision)? {
            return Ok(CubicClass::Reducible);
        }
        let delta = discriminant(p, q);
        let square = roots_padic(&delta, precision)?.iter().all(|(_, m)| m % 2 == 0);
        Ok(if square { CubicClass::Abelian } else { CubicClass::S3 })
    })
}

/// Search for r in K[x] with r^3 + p r + q = 0: r = c R with R a monic divisor of q.
fn has_polynomial_root(p: &ValuedPoly, q: &ValuedPoly, precision: i64) -> Result<bool> {
    let f = p.field();
    let roots = roots_padic(q, precision)?;
    let mut counts = vec![0usize; roots.len()];
    loop {
        let mut r = ValuedPoly::one(f);
        let mut cof = q.clone();
        for (i, &k) in counts.iter().enumerate() {
            for _ in 0..k {
                r = r.mul(&ValuedPoly::new(f, vec![roots[i].0.neg(), Padic::one(f)]));
                cof = cof.div_linear(&roots[i].0).0;
            }
        }
        if root_multiple_works(p, &r, &cof, precision)? {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == counts.len() {
                return Ok(false);
            }
            counts[i] += 1;
            if counts[i] <= roots[i].1 {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// Whether c^3 R^2 + c p + Q' vanishes for some nonzero constant c.
fn root_multiple_works(p: &ValuedPoly, r: &ValuedPoly, cof: &ValuedPoly, precision: i64) -> Result<bool> {
    let f = p.field();
    let r2 = r.mul(r);
    let deg = r2.deg().max(p.deg()).max(cof.deg());
    let Some(k) = (0..=deg as usize).find(|&k| !r2.coeff(k).is_zero() || !p.coeff(k).is_zero()) else {
        return Ok(cof.is_zero());
    };
    let z = Padic::zero(f);
    let cubic = ValuedPoly::new(f, vec![cof.coeff(k), p.coeff(k), z, r2.coeff(k)]);
    if cubic.deg() < 1 {
        return Ok(false);
    }
    for (c, _) in roots_padic(&cubic, precision / 2)? {
        if c.is_zero() {
            continue;
        }
        let c3 = c.pow(3);
        let total = r2.scale(&c3).add(&p.scale(&c)).add(cof);
        let floor = [r2.scale(&c3).gauss_val(), p.scale(&c).gauss_val(), cof.gauss_val()]
            .into_iter()
            .filter_map(Val::finite)
            .min()
            .unwrap_or(Q::from(0));
        let ok = total.coeffs().iter().all(|a| match a.val() {
            Val::Infinity => true,
            Val::Finite(v) => v >= floor + Q::from(precision / 4),
        });
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

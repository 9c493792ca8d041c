//! Elliptic curves x^3 + A x + B + y^2 = 0 as trigonal covers of the y-line.

use serde::Serialize;

use super::closure::{galois_closure, S3Result};
use super::S3Options;
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::valfield::{Padic, Val, ValuedPoly, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EllipticCase {
    /// v(A) = v(B) = 0 and v(4A^3 + 27B^2) > 0.
    One,
    /// v(A) = 0 and v(4A^3 + 27B^2) = 0.
    Two,
    /// v(A) > 0 and v(B) = 0.
    Three,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Reduction {
    Good,
    Multiplicative { cycle_length: String },
    Other,
}

#[derive(Clone, Debug)]
pub struct EllipticResult {
    pub case: EllipticCase,
    pub v_delta: Q,
    pub skeleton: MetricGraph,
    pub reduction: Reduction,
    pub closure: S3Result,
}

fn val(a: &Padic) -> Val {
    a.val()
}

pub fn elliptic_case(a: &Padic, b: &Padic) -> Result<(EllipticCase, Q)> {
    let f = a.field();
    let delta = a.pow(3).mul(&Padic::from_int(f, 4)).add(&b.pow(2).mul(&Padic::from_int(f, 27)));
    let vd = delta.val().finite().ok_or(Error::Singular)?;
    let zero = Val::Finite(Q::from(0));
    let (va, vb) = (val(a), val(b));
    if va < zero || vb < zero || (va > zero && vb > zero) {
        return Err(Error::Input("scale A and B so that min(v(A), v(B)) = 0".into()));
    }
    let case = if va > zero {
        EllipticCase::Three
    } else if vd > Q::from(0) {
        EllipticCase::One
    } else {
        EllipticCase::Two
    };
    Ok((case, vd))
}

/// Minimal skeleton of x^3 + A x + B + y^2 = 0 and its reduction type.
pub fn elliptic_skeleton(a: &Padic, b: &Padic, opts: &S3Options) -> Result<EllipticResult> {
    let (case, v_delta) = elliptic_case(a, b)?;
    let f = a.field();
    let p = ValuedPoly::constant(a.clone());
    let q = ValuedPoly::new(f, vec![b.clone(), Padic::zero(f), Padic::one(f)]);
    let closure = galois_closure(&p, &q, opts)?;
    let skeleton = closure.skeleton.clone();
    let reduction = if skeleton.n_edges() == 0 && skeleton.weights() == [1] {
        Reduction::Good
    } else if skeleton.betti()? == 1 && skeleton.weights().iter().all(|&w| w == 0) {
        Reduction::Multiplicative { cycle_length: skeleton.total_length().to_string() }
    } else {
        Reduction::Other
    };
    Ok(EllipticResult { case, v_delta, skeleton, reduction, closure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valfield::field;

    fn fd() -> &'static crate::valfield::FieldData {
        field(13, 1).unwrap()
    }

    fn int(n: i64) -> Padic {
        Padic::from_int(fd(), n)
    }

    fn opts() -> S3Options {
        S3Options { precision: 24, point_leaves: None }
    }

    #[test]
    fn multiplicative_cycle_has_length_v_delta() {
        // A = -3a^2, B = 2a^3 + pi^k gives v(4A^3 + 27B^2) = k
        for k in 1..=4 {
            let a = int(-3);
            let b = int(2).add(&Padic::pi_pow(fd(), k, 1));
            let r = elliptic_skeleton(&a, &b, &opts()).unwrap();
            assert_eq!(r.case, EllipticCase::One);
            assert_eq!(r.v_delta, Q::from(k));
            assert_eq!(r.reduction, Reduction::Multiplicative { cycle_length: k.to_string() }, "k = {k}");
        }
    }

    #[test]
    fn good_reduction_cases() {
        let r = elliptic_skeleton(&int(1), &int(1), &opts()).unwrap();
        assert_eq!(r.case, EllipticCase::Two);
        assert_eq!(r.reduction, Reduction::Good);
        let r = elliptic_skeleton(&Padic::pi_pow(fd(), 2, 1), &int(1), &opts()).unwrap();
        assert_eq!(r.case, EllipticCase::Three);
        assert_eq!(r.reduction, Reduction::Good);
    }

    #[test]
    fn unscaled_input_rejected() {
        let pi = Padic::pi_pow(fd(), 1, 1);
        assert!(matches!(elliptic_skeleton(&pi, &pi, &opts()), Err(Error::Input(_))));
    }
}

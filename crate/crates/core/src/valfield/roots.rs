use super::ffpoly::FfPoly;
use super::poly::ValuedPoly;
use super::series::{Padic, Val, Q};
use crate::error::{Error, Result};

/// All roots of f with multiplicities, each known modulo pi^target.
///
/// Newton-Puiseux descent along the Newton polygon; a root that becomes simple is finished by
/// Newton iteration. Clusters still unresolved at the target height are reported once with
/// their total multiplicity. Roots come out on a common grid, sorted canonically.
pub fn roots_padic(f: &ValuedPoly, target: i64) -> Result<Vec<(Padic, usize)>> {
    if f.deg() < 1 {
        return Ok(vec![]);
    }
    let target = Q::from(target);
    let mut out = Vec::new();
    descend(f, &Padic::zero(f.field()), None, f, target, &mut out)?;
    let total: usize = out.iter().map(|r| r.1).sum();
    if total as i64 != f.deg() {
        return Err(Error::Inconsistent(format!("root count {total} != degree {}", f.deg())));
    }
    let e = out.iter().fold(1u32, |acc, r| num_integer::lcm(acc, r.0.e()));
    let mut out: Vec<(Padic, usize)> = out.into_iter().map(|(x, m)| (x.align(e), m)).collect();
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0));
    Ok(out)
}

fn descend(
    g: &ValuedPoly,
    prefix: &Padic,
    floor: Option<Q>,
    orig: &ValuedPoly,
    target: Q,
    out: &mut Vec<(Padic, usize)>,
) -> Result<()> {
    let np = g.newton_polygon()?;
    if np.zero_order > 0 {
        out.push((prefix.clone(), np.zero_order));
    }
    let p = g.field().p as i64;
    let mut deep = 0usize;
    for seg in &np.segments {
        let lam = -seg.slope;
        if floor.is_some_and(|m| lam <= m) {
            continue;
        }
        if lam >= target {
            deep += seg.length;
            continue;
        }
        if lam.denom() % p == 0 {
            return Err(Error::WildSlope(*lam.denom()));
        }
        let base = g.coeff(seg.start).val().finite().unwrap() + lam * Q::from(seg.start as i64);
        let res: Vec<_> = (seg.start..=seg.start + seg.length)
            .map(|i| {
                let a = g.coeff(i);
                match a.val() {
                    Val::Finite(v) if v + lam * Q::from(i as i64) == base => a.lead().unwrap(),
                    _ => g.field().zero(),
                }
            })
            .collect();
        let residual = FfPoly::new(g.field(), res);
        for (c, r) in residual.split_roots()? {
            let step = Padic::monomial(c, lam);
            let next = prefix.add(&step);
            if r == 1 {
                out.push((newton(orig, &next, target)?, 1));
            } else {
                let shifted = g.compose_linear(&step, &Padic::one(g.field()));
                descend(&shifted, &next, Some(lam), orig, target, out)?;
            }
        }
    }
    if deep > 0 {
        out.push((prefix.with_prec(target), deep));
    }
    Ok(())
}

/// Newton iteration from an approximation strictly closer to one root than to any other.
fn newton(f: &ValuedPoly, x0: &Padic, target: Q) -> Result<Padic> {
    let df = f.derivative();
    let mut x = x0.clone();
    let mut guard = Q::from(4);
    for _ in 0..400 {
        let work = target + Q::from(1) + guard;
        let xa = x.with_prec(work);
        let fx = f.eval(&xa);
        let dfx = df.eval(&xa);
        let vd = match dfx.val() {
            Val::Finite(v) => v,
            Val::Infinity => {
                guard += Q::from(4);
                continue;
            }
        };
        if fx.is_zero() {
            let bound = fx.prec().map(|p| p - vd);
            match bound {
                None => return Ok(x),
                Some(b) if b >= target => return Ok(x.truncate_below(target).with_prec(target)),
                Some(b) => {
                    guard += target - b + Q::from(1);
                    continue;
                }
            }
        }
        let step = fx.div(&dfx, ((work - vd + Q::from(2)) * Q::from(fx.e().max(dfx.e()) as i64)).ceil().to_integer())?;
        let sv = step.val().finite().unwrap();
        let sp = step.prec().unwrap_or(work);
        if sv >= target {
            return Ok(x.truncate_below(target).with_prec(target));
        }
        if sp < target + Q::from(1) {
            guard += target + Q::from(1) - sp + Q::from(1);
            continue;
        }
        x = x.sub(&step.truncate_below(sp)).truncate_below(target + Q::from(1));
    }
    Err(Error::InsufficientPrecision("Newton iteration did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valfield::field::field;

    #[test]
    fn square_root_of_pi() {
        let f = field(13, 1).unwrap();
        let g = ValuedPoly::new(f, vec![Padic::pi_pow(f, 1, 1).neg(), Padic::zero(f), Padic::one(f)]);
        let rs = roots_padic(&g, 10).unwrap();
        assert_eq!(rs.len(), 2);
        for (r, m) in &rs {
            assert_eq!(*m, 1);
            assert_eq!(r.e(), 2);
            assert_eq!(r.val(), Val::Finite(Q::new(1, 2)));
        }
        assert_eq!(rs[0].0.add(&rs[1].0).val(), Val::Infinity);
    }

    #[test]
    fn planted_roots_height_two() {
        let f = field(13, 1).unwrap();
        let pi = Padic::pi_pow(f, 1, 1);
        let pi2 = Padic::pi_pow(f, 2, 1);
        let planted = [Padic::zero(f), pi.clone(), pi.add(&pi2), pi.add(&pi2.scale(&f.from_int(2)))];
        let g = planted.iter().fold(ValuedPoly::one(f), |acc, a| acc.mul(&ValuedPoly::linear(a)));
        let rs = roots_padic(&g, 20).unwrap();
        assert_eq!(rs.len(), 4);
        for a in &planted {
            assert!(rs.iter().any(|(r, _)| r.sub(a).val() >= Val::Finite(Q::from(20))));
        }
    }

    #[test]
    fn repeated_exact_root() {
        let f = field(13, 1).unwrap();
        let g = ValuedPoly::x(f).pow(3).add(&ValuedPoly::constant(Padic::pi_pow(f, 3, 1)));
        let rs = roots_padic(&g, 8).unwrap();
        assert_eq!(rs.len(), 3);
        let h = ValuedPoly::x(f).pow(3);
        assert_eq!(roots_padic(&h, 8).unwrap(), vec![(Padic::zero(f), 3)]);
    }

    #[test]
    fn residue_extension_requested() {
        let f = field(13, 1).unwrap();
        // x^2 - 2 has no root over F_13
        let g = ValuedPoly::from_ints(f, &[-2, 0, 1]);
        assert_eq!(roots_padic(&g, 4), Err(Error::NoRootInResidueField(2)));
        let f2 = field(13, 2).unwrap();
        assert_eq!(roots_padic(&g.embed(f2), 4).unwrap().len(), 2);
    }

    #[test]
    fn wild_slope_rejected() {
        let f = field(5, 1).unwrap();
        let mut c = vec![Padic::zero(f); 6];
        c[0] = Padic::pi_pow(f, 1, 1);
        c[5] = Padic::one(f);
        assert_eq!(roots_padic(&ValuedPoly::new(f, c), 4), Err(Error::WildSlope(5)));
    }
}

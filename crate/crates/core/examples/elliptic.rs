//! Reduction of x^3 + A x + B + y^2 = 0 for seeded random (A, B) in each case of the trichotomy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skeleta::s3cover::{elliptic_skeleton, S3Options};
use skeleta::valfield::{field, Padic};

fn main() -> skeleta::Result<()> {
    let f = field(13, 1)?;
    let opts = S3Options { precision: 24, point_leaves: None };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let a = rng.gen_range(1..13i64);
        let k = rng.gen_range(1..5i64);
        let u = rng.gen_range(1..13i64);
        // v(4A^3 + 27B^2) = k
        let aa = Padic::from_int(f, -3 * a * a);
        let bb = Padic::from_int(f, 2 * a * a * a).add(&Padic::from_int(f, u).mul(&Padic::pi_pow(f, k, 1)));
        let r = elliptic_skeleton(&aa, &bb, &opts)?;
        println!("A = -3*{a}^2, B = 2*{a}^3 + {u} pi^{k}: {:?}, v(disc) = {}, {:?}", r.case, r.v_delta, r.reduction);
    }
    let r = elliptic_skeleton(&Padic::pi_pow(f, 2, 1), &Padic::from_int(f, 5), &opts)?;
    println!("A = pi^2, B = 5: {:?}, {:?}", r.case, r.reduction);
    Ok(())
}

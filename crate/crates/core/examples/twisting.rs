//! Twisting data on a cycle: the same covering data glue to different covers.

use skeleta::graph::{iso_check, MetricGraph};
use skeleta::kummer::{assemble_cover, CoveringData, TwistCocycle};
use skeleta::valfield::{field, Q};

fn main() -> skeleta::Result<()> {
    let f = field(13, 1)?;
    let one = Q::from(1);
    let base = MetricGraph::from_parts(&[0, 0], &[(0, 1, one), (0, 1, one)]);
    let data = CoveringData {
        n: 3,
        edge_slope: vec![0, 0],
        edge_inertia: vec![1, 1],
        decomposition: vec![1, 1],
        genus: vec![0, 0],
        ramified: vec![0, 0],
        orders: vec![vec![0, 0], vec![0, 0]],
    };
    let z = f.zeta(3).expect("13 = 1 mod 3");
    let m1 = f.from_int(-1);
    let twist = TwistCocycle { values: vec![Some((m1, m1.mul(&z))), Some((m1, m1.mul(&z.pow(2))))] };
    let c = assemble_cover(&base, &data, Some(&twist))?;
    println!("twisted: {} vertices, {} edges, betti {}", c.cover.n_vertices(), c.cover.n_edges(), c.cover.betti()?);
    let gauged = assemble_cover(&base, &data, Some(&twist.gauge(&base, 1, &z)))?;
    println!("gauge change preserves the cover: {}", iso_check(&c.cover, &gauged.cover)?);
    let trivial = TwistCocycle { values: vec![Some((f.one(), f.one())); 2] };
    match assemble_cover(&base, &data, Some(&trivial)) {
        Err(e) => println!("trivial cocycle: {e}"),
        Ok(_) => unreachable!(),
    }
    let q = c.quotient_by_power(0)?;
    println!("quotient by the full group is the base: {}", iso_check(&q.graph, &base)?);
    Ok(())
}

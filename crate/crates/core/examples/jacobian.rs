//! Laplacian, principal divisors and the tropical Jacobian of the banana graph.

use skeleta::graph::{spanning_tree_count, to_dot, GraphDivisor, MetricGraph};
use skeleta::valfield::Q;

fn main() -> skeleta::Result<()> {
    let one = Q::from(1);
    let banana = MetricGraph::from_parts(&[0, 0], &[(0, 1, one), (0, 1, one), (0, 1, one)]);
    let jac = banana.jacobian()?;
    println!("Jacobian order {} factors {:?}", jac.order, jac.factors);
    println!("spanning trees {}", spanning_tree_count(&banana));
    let rho = banana.apply_laplacian(&[one, Q::from(0)])?;
    println!("Laplacian of the indicator of v0: {:?}", rho.0);
    let phi = banana.solve_laplacian(&GraphDivisor(vec![3, -3]), 1)?;
    println!("potential for 3(v0) - 3(v1): {:?}", phi.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    match banana.solve_laplacian(&GraphDivisor(vec![1, -1]), 1) {
        Err(e) => println!("(v0) - (v1): {e}"),
        Ok(_) => unreachable!(),
    }
    print!("{}", to_dot(&banana, "banana"));
    Ok(())
}

//! Tropical separating tree of a marked set in P^1.

use skeleta::septree::{separate, Point};
use skeleta::valfield::{field, parse_series, Q};

fn main() -> skeleta::Result<()> {
    let f = field(13, 1)?;
    let mut points: Vec<Point> = ["0", "pi", "2*pi", "pi^2", "1"]
        .iter()
        .map(|s| parse_series(s, f).map(Point::Finite))
        .collect::<skeleta::Result<_>>()?;
    points.push(Point::Infinity);
    let tree = separate(&points)?;
    for (v, tv) in tree.vertices.iter().enumerate() {
        println!("vertex {v}: height {} parent {:?}", tv.height, tv.parent);
    }
    for (i, (v, c)) in tree.reduction.iter().enumerate() {
        println!("point {i} reduces to vertex {v} at {}", c.literal());
    }
    let leafy = tree.attach_point_leaves(Q::from(1))?;
    println!("with point leaves: {} vertices", leafy.n_vertices());
    println!("{}", serde_json::to_string_pretty(&tree.to_json()).unwrap());
    Ok(())
}

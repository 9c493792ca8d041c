//! Galois closure of a degree-three cover y^3 + p y + q = 0, by both routes.

use skeleta::s3cover::{classify, closure_covering_data_inertia, galois_closure, S3Options};
use skeleta::valfield::{field, parse_poly};

fn main() -> skeleta::Result<()> {
    let f = field(13, 1)?;
    let opts = S3Options { precision: 32, point_leaves: None };
    for (p, q) in [("x^3", "x^3+pi^3"), ("x^3", "x^4+pi^4")] {
        let (pp, qq) = (parse_poly(p, f, "x")?, parse_poly(q, f, "x")?);
        println!("p = {p}, q = {q}: {:?}", classify(&pp, &qq)?);
        let r = galois_closure(&pp, &qq, &opts)?;
        let d = &r.quadratic.cover.cover;
        println!("  D: {} vertices, {} edges, genus {}", d.n_vertices(), d.n_edges(), d.total_genus()?);
        println!("  closure: {} vertices, {} edges, genus {}", r.closure.cover.n_vertices(), r.closure.cover.n_edges(), r.closure.cover.total_genus()?);
        println!("  edge preimages {:?}, vertex preimages {:?}", r.edge_preimages(), r.vertex_preimages());
        let ir = closure_covering_data_inertia(&r.cubic, &opts)?;
        println!("  inertia route {:?} {:?}", ir.edge_preimages(), ir.vertex_preimages());
        println!("  skeleton weights {:?}, {} edges", r.skeleton.weights(), r.skeleton.n_edges());
        println!("  ledger {:?}", r.ledger);
    }
    Ok(())
}

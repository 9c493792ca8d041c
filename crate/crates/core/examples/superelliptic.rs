//! Skeleton of z^n = f: tree, Laplacian, covering data and the assembled cover.

use skeleta::kummer::superelliptic::SuperellipticOptions;
use skeleta::kummer::{superelliptic, SuperellipticInput};
use skeleta::valfield::{field, parse_poly};

fn main() -> skeleta::Result<()> {
    let f = field(13, 1)?;
    let cases = [
        (2, "x*(x-pi)*(x-1)*(x-2)*(x-3)"),
        (2, "x*(x-pi)*(x-pi^2)*(x-1)*(x-2)"),
        (3, "x*(x-pi)*(x-2*pi)*(x-1)*(x-2)"),
        (3, "x*(x-pi)*(x-2*pi)*(x-pi^2)*(x-2*pi^2)*(x-pi^3)*(x-1)*(x-2)"),
    ];
    for (n, s) in cases {
        let poly = parse_poly(s, f, "x")?;
        let r = superelliptic(n, &SuperellipticInput::Poly(poly), &SuperellipticOptions::default())?;
        let cover = &r.cover.cover;
        println!("z^{n} = {s}");
        println!("  potential {:?}", r.phi.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        println!("  edge inertia {:?}, decomposition {:?}", r.data.edge_inertia, r.data.decomposition);
        println!(
            "  cover: {} vertices, {} edges, weights {:?}, genus {} (generic fibre {})",
            cover.n_vertices(),
            cover.n_edges(),
            cover.weights(),
            cover.total_genus()?,
            r.genus
        );
    }
    Ok(())
}

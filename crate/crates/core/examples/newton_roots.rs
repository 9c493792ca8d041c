//! Newton polygon and p-adic roots of a polynomial over F_13((pi)).

use skeleta::valfield::{field, parse_poly, print_series, roots_padic};

fn main() -> skeleta::Result<()> {
    let f = field(13, 1)?;
    let poly = parse_poly("x*(x-pi)*(x-2*pi)*(x-pi^2)*(x-1)", f, "x")?;
    for seg in poly.newton_polygon()?.segments {
        println!("segment slope {} length {}", seg.slope, seg.length);
    }
    for (root, mult) in roots_padic(&poly, 12)? {
        println!("root {} (multiplicity {mult}, valuation {:?})", print_series(&root), root.val());
    }
    Ok(())
}

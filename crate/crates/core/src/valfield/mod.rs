//! Exact arithmetic over k((pi^(1/e))) with k a finite field, Newton polygons and roots.

pub mod ffpoly;
pub mod field;
pub mod literal;
pub mod poly;
pub mod roots;
pub mod series;

pub use ffpoly::FfPoly;
pub use field::{field, FieldData, Fq};
pub use literal::{parse_poly, parse_series, print_poly, print_series};
pub use poly::{pi_content, NewtonPolygon, Segment, ValuedPoly};
pub use roots::roots_padic;
pub use series::{Padic, Val, Q};

/// Default working precision in grid units.
pub const DEFAULT_PREC: i64 = 64;

//! Valued power series over the rationals: Gauss norms, Newton polygons,
//! zero counting and the non-Archimedean Jensen identity.

mod newton;
mod power;
mod valuation;

pub use newton::{jensen_check, newton_polygon, zero_counting, NewtonPolygon, Segment, ZeroCounting};
pub use power::{iterated_composition, iterated_power_series, GaussNorm, PowerLawTail, Series, Tail, DEFAULT_ORDER_CAP};
pub use valuation::Valuation;

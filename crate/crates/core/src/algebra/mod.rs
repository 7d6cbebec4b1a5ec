pub mod field;
pub mod multipoly;
pub mod parse;
pub mod poly;
pub mod quotient;
pub mod ratfunc;
pub mod ring;
pub mod series;
pub mod series_ring;

pub use field::{FiniteField, Fq};
pub use multipoly::{MultiPoly, MultiPolyRing};
pub use poly::{Poly, PolyRing};
pub use quotient::QuotientAlgebra;
pub use ratfunc::{RatFunc, RatFuncField};
pub use ring::{AAlgebra, FqAlgebra, KAlgebra, Ring};
pub use series::FracLaurentSeries;
pub use series_ring::SeriesRing;

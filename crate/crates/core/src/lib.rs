pub mod cgb;
pub mod config;
pub mod decompose;
pub mod error;
pub mod factor;
pub mod groebner;
pub mod hilbert;
pub mod ideal_ops;
pub mod order;
pub mod parse;
pub mod poly;
pub mod realization;
pub mod ring;
pub mod sample;
pub mod upoly;
pub mod zzlinalg;

pub use error::{Error, Result};
pub use groebner::Ideal;
pub use order::MonomialOrder;
pub use poly::Poly;
pub use ring::{ParamPoint, Ring};

pub mod classes;
pub mod error;
pub mod hexagon;
pub mod intlat;
pub mod lambda;
pub mod laurent;
pub mod selfcheck;
pub mod whitehead;

pub use classes::GClass;
pub use error::{Error, Result};
pub use hexagon::{HexElement, HexNormalForm, HexOrbit};
pub use intlat::{Cokernel, CokernelCoords, IntMatrix, QuotientStructure};
pub use lambda::{AlphaCombination, LambdaContext, LambdaElement};
pub use laurent::{AffineMap2, LaurentPoly, LaurentPoly1, LaurentPoly2, Sign};
pub use selfcheck::{SelfcheckConfig, SelfcheckReport};

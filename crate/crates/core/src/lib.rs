//! Exact p-adic arithmetic, universal weight characters and the
//! Gauss–Manin calculus on Serre–Tate q-expansions.
//!
//! Grids, series and operators are generic over a coefficient ring
//! implementing [`Coeff`]. The aliases below name the instances used in
//! practice.

pub mod config;
pub mod error;
pub mod gm;
pub mod iwasawa;
pub mod padic;
pub mod qexp;
pub mod report;
pub mod ring;
pub mod triple;
pub mod verify;

pub use error::{Error, Result};
pub use iwasawa::{IwasawaSeries, WeightChar, WeightPoint};
pub use padic::{Cyclo, Padic, Unram};
pub use qexp::{Basis, DirichletChar, NearlyForm, QExpansion};
pub use ring::{Coeff, PadicModule};

pub type PadicForm = NearlyForm<Padic>;
pub type CycloForm = NearlyForm<Cyclo>;
pub type LambdaForm = NearlyForm<IwasawaSeries>;
pub type RationalForm = NearlyForm<num_rational::BigRational>;
pub type PadicQExpansion = QExpansion<Padic>;

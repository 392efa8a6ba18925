//! Exact symbolic kernel for differential operators in the divided-power
//! (Taylor) basis, Hasse-Schmidt derivations, the graded-dual shuffle
//! algebra, and logarithmic integrability testing over k[x1..xn] with
//! coefficients in F_p or Q.

pub mod coeff;
pub mod diffop;
pub mod dual;
pub mod error;
pub mod hs;
pub mod ideal;
pub mod multiindex;
pub mod poly;
pub mod sample;
pub mod series;
pub mod text;
pub mod verify;

/// Desk-scale bound on the number of variables.
pub const MAX_VARS: usize = 8;
/// Desk-scale bound on truncation orders and derivation lengths.
pub const MAX_ORDER: usize = 16;

pub use coeff::{Coeff, Ring};
pub use diffop::{DiffOp, Symbol};
pub use dual::MultiDerivation;
pub use error::{KernelError, Result};
pub use hs::{HSDerivation, TotalSymbol};
pub use ideal::{Ideal, ObstructionReport};
pub use multiindex::MultiIndex;
pub use poly::Poly;
pub use series::TruncSeries;

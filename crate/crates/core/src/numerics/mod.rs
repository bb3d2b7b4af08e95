//! Shared numerical machinery.

pub mod fit;
pub mod gauss_legendre;
pub mod gregory;
pub mod kernels;
pub mod quadrature;
pub mod roots;

pub use fit::{fit_line, LineFit};
pub use quadrature::{integrate_adaptive, QuadratureResult};
pub use roots::find_root_bracketed;

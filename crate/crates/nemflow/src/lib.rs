//! Flow of a nematic liquid crystal around a small sphere in the reduced
//! regime: harmonic Q-tensor plus an anisotropic Stokes system.
//!
//! The analytic building blocks are generic over [`Real`]; the grid solver
//! works in `f64`. Concrete `f64` aliases live at the crate root.

pub mod aniso;
pub mod error;
pub mod farfield;
pub mod forcing;
pub mod nematic;
pub mod quad;
pub mod solver;
pub mod stokes_iso;
pub mod tensor_core;

pub use error::{Error, Result};
pub use tensor_core::{Dual, Mat3, QTensor, Rank3, Rank4, Real, Ring, Tensor4, Vec3};

/// `f64` vector.
pub type Vec3d = Vec3<f64>;
/// `f64` matrix.
pub type Mat3d = Mat3<f64>;
/// `f64` Q-tensor.
pub type QTensord = QTensor<f64>;
/// `f64` fourth-order tensor.
pub type Tensor4d = Tensor4<f64>;
/// `f64` anisotropy parameters.
pub type GammaSetd = aniso::GammaSet<f64>;
/// `f64` nematic parameters.
pub type NematicParamsd = nematic::NematicParams<f64>;
/// `f64` forcing context.
pub type ForcingContextd = forcing::ForcingContext<f64>;
/// `f64` sphere rule.
pub type SphereRuled = quad::SphereRule<f64>;

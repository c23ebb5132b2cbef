//! Weighted bilateral shift operators on ℓ²(ℤ), their doublings `U ⊕ U^{*-1}`
//! (which are J-unitary and symplectic), and the continuous transport
//! semigroups obtained from the same weights.
//!
//! Every quantity is carried in the log domain. Weights such as
//! `3^{8191}` are never materialized; vectors store a shared log-scale next
//! to O(1) coefficients, and norms are accumulated with log-sum-exp.
//!
//! Module map:
//!
//! - [`weights`]: the weight families and their log-weights `L(n) = ln u_n`.
//! - [`shift_ops`]: [`ScaledVector`], powers `U^N` / `U^{*-N}`, orbit norms,
//!   windowed operator norms and spectral-radius estimates.
//! - [`doubled`]: the doubled operator, the indefinite form `J` and the
//!   symplectic form, and form-preservation checks.
//! - [`growth`]: orbit records, Lyapunov estimates, `S₀ / S / S₊` evidence
//!   and checkpoint witnesses.
//! - [`continuous`]: the transport semigroup `V(t)` on a uniform grid and its
//!   generator.

pub mod continuous;
pub mod doubled;
mod error;
pub mod growth;
pub mod logsum;
pub mod sampling;
pub mod shift_ops;
pub mod weights;

pub use error::{Error, Result};
pub use shift_ops::{PowerAction, PowerMode, ScaledVector};
pub use weights::{WeightFamily, WeightSequence};

pub use num_complex::Complex64;

pub mod error;
pub mod gate;
pub mod pauli;
pub mod rng;
pub mod scalar;
pub mod tableau;

pub use error::{Result, SimError};
pub use gate::{Circuit, Gate};
pub use pauli::{BellLabel, Pauli1, PauliOperator};
pub use rng::SimRng;
pub use scalar::Real;
pub use tableau::StabilizerState;
pub mod dense;
pub mod density;

pub use dense::DenseState;
pub use density::DensityMatrix;

/// Single-precision dense engine.
pub type DenseState32 = DenseState<f32>;
pub mod channels;
pub mod register;

pub use channels::{PauliChannel, Preset};
pub use register::Register;
pub mod qvc;
pub mod pqc;
pub mod transcript;

pub use transcript::{Party, Transcript};
pub mod secret_sharing;
pub mod baselines;
pub mod resources;
pub mod stats;
pub mod scenario;

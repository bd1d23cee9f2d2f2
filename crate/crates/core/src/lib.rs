//! Fock-space simulation of multi-photon Mach-Zehnder interferometry.
//!
//! The crate builds photon-number states, sends them through beam splitters
//! and phase shifters, and analyses the resulting coincidence fringes:
//!
//! * [`fock`]: sparse pure states and ladder operators
//! * [`network`]: optical elements, the Mach-Zehnder preset
//! * [`oracle`]: brute-force and permanent transition amplitudes
//! * [`sources`]: squeezed vacuum, pair Fock, NOON and kitten inputs
//! * [`detection`]: coincidence patterns, fringe scans, detector models
//! * [`spectrum`]: visibility and harmonic analysis
//!
//! ```
//! use noonsim::{detection, sources, spectrum};
//!
//! let table = detection::fringe_scan(&sources::pair_fock(2), 256).unwrap();
//! let p31 = table.series(&"3:1".parse().unwrap()).unwrap();
//! assert!((spectrum::visibility(p31).unwrap() - 1.0).abs() < 1e-10);
//! assert_eq!(spectrum::debroglie_reduction_factor(p31, 1e-9).unwrap(), 4);
//! ```

pub mod detection;
pub mod error;
pub mod fock;
pub mod network;
pub mod oracle;
pub mod sources;
pub mod spectrum;

pub use detection::{DetectionPattern, FringeTable, Injection};
pub use error::{Error, Result};
pub use fock::{BasisKet, PureState};
pub use network::{BeamSplitter, Element, Network, PhaseShifter};
pub use num_complex::Complex64;

//! Phase-slope design and verification for analog beamforming in periodic
//! broadcast vehicle-to-vehicle links.
//!
//! A transmitter drives its antennas through phase shifters whose phase grows
//! linearly in time (the *phase slope*), or switches between antennas from
//! packet to packet. The receiver combines its antennas with the same kind of
//! time-linear phase shifters. Over a burst of `K` periodic packets the
//! slopes decide how the unknown channel phases rotate, and well-chosen slopes
//! make the burst sum-SNR independent of those phases.
//!
//! Modules:
//!
//! * [`antennas`]: azimuth far-field patterns (loading, synthesis, interpolation).
//! * [`channel`]: array geometry, the single-path channel matrix, effective phases.
//! * [`schemes`]: per-packet and burst SNR for beamforming, switching and Alamouti transmitters.
//! * [`slopes`]: the geometric-series kernel, optimality predicates and slope constructions.
//! * [`oracle`]: brute-force grid and Monte-Carlo checks of the sup-inf claims.
//! * [`hybrid`]: per-port analog combining followed by maximal-ratio combining.
//! * [`metrics`]: burst error probability, sum-SNR CDFs, equivalent patterns.
//! * [`cli`]: the configuration-driven front end behind the `phaseslope` binary.

pub mod antennas;
pub mod channel;
pub mod cli;
pub mod error;
pub mod hybrid;
pub mod metrics;
pub mod oracle;
pub mod phase;
pub mod schemes;
pub mod slopes;

pub use error::{Error, Result};
pub use num_complex::Complex64;

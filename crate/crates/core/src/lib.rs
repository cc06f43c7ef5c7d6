//! DFT-invariant sequences and multiuser transmission over the real adder
//! channel.
//!
//! The crate is organized around four layers:
//!
//! * [`sequence`] and [`dft`] — length-N complex sequences with circular
//!   index arithmetic, and the unitary discrete Fourier operator (the `1/√N`
//!   normalization in both directions, so the operator has order four).
//! * [`eigen`] — construction, classification and family generation of
//!   sequences invariant under that operator. Invariant sequences exist for
//!   the four eigenvalues `±1, ±j` and form real vector spaces.
//! * [`rac`] — the t-user real adder channel. Signatures drawn from distinct
//!   eigenspaces superpose into a single frame and are separated exactly,
//!   either by per-case closed forms or by solving a small linear system in
//!   the powers of the transform.
//! * [`transceiver`] and [`session`] — the digital path: bitstreams are cut
//!   into b-bit words, each word selects one of `2^b` quantizer levels used
//!   as that user's coefficient, and the receiver recovers every bit exactly
//!   over the noiseless channel.

pub mod dft;
pub mod eigen;
pub mod error;
pub mod rac;
pub mod sequence;
pub mod session;
pub mod transceiver;

pub use error::{Error, Result};
pub use sequence::{ComplexSequence, Tolerance};

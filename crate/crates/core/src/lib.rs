//! Models of series-resonant, energy-recycling SRAM bitlines.
//!
//! The write path of an SRAM array is treated as a lumped series RLC tank:
//! every connected bitline is a capacitor, the write drivers and the
//! transmission gates are the series resistance, and a single shared
//! inductor biased at `V_DD/2` stores the bitline charge as magnetic energy
//! during the falling edge and hands it back on the rising edge.
//!
//! The crate is organised bottom-up:
//!
//! - [`circuit`]: the lumped parameters and the derived resonance figures
//!   (damping rate, damped frequency, half period, quality factor).
//! - [`analytic`]: closed-form inductor current, capacitor voltage and the
//!   resonant swing extrema.
//! - [`transient`]: control-signal generation and a fixed-step RK4 simulator
//!   of the switched five-phase write cycle.
//! - [`array`]: maps rows/columns/MUX factor onto lumped parameters.
//! - [`energy`]: per-cycle energy ledger against conventional CMOS switching.
//! - [`sizing`]: the inductor sizing optimizer.
//! - [`sweep`]: design-space sweeps over size, height, supply and corner.
//! - [`config`]: the flat key/value configuration format with engineering
//!   notation.
//!
//! All quantities are SI base units internally. Engineering suffixes such as
//! `nH` or `ps` are only understood by [`units`] and [`config`].
//!
//! ```
//! use resram::circuit::{derive_resonance, RlcParams};
//!
//! let params = RlcParams::new(0.5, 0.621e-9, 10.10e-12, 0.9).unwrap();
//! let res = derive_resonance(&params).unwrap();
//! let half = res.t_r_half.unwrap();
//! assert!((half - 248.9e-12).abs() < 0.1e-12);
//! ```

pub mod analytic;
pub mod array;
pub mod circuit;
pub mod config;
pub mod energy;
mod error;
pub mod sizing;
pub mod sweep;
pub mod transient;
pub mod units;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/resonance.md")]
    mod resonance {}
    #[doc = include_str!("../../../book/src/waveforms.md")]
    mod waveforms {}
    #[doc = include_str!("../../../book/src/write-cycle.md")]
    mod write_cycle {}
    #[doc = include_str!("../../../book/src/array.md")]
    mod array {}
    #[doc = include_str!("../../../book/src/energy.md")]
    mod energy {}
    #[doc = include_str!("../../../book/src/sizing.md")]
    mod sizing {}
    #[doc = include_str!("../../../book/src/configuration.md")]
    mod configuration {}
}

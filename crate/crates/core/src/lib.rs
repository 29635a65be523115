//! Link-level simulation of bit-interleaved coded modulation with quantized
//! soft information: channel models, max-log demodulation, equiprobable LLR
//! quantizers, equivalent-channel information measures, regular LDPC codes and
//! experiment drivers.

pub mod analytic;
pub mod channel;
pub mod demod;
pub mod error;
pub mod harness;
pub mod estimator;
pub mod infotheory;
pub mod ldpc;
pub mod link;
pub mod modem;
pub mod numeric;
pub mod quant;
pub mod rng;
pub mod special;

pub use analytic::{Resolution, SisoLlrDensity};
pub use channel::{ChannelMatrix, Fading, LinkConfig};
pub use demod::{LabeledLlrSample, MaxLogDemodulator};
pub use error::{Error, Result};
pub use infotheory::{DiscreteChannel, OutageEstimate, RateSample, TransitionCounts};
pub use modem::{Constellation, ConstellationKind, Interleaver, ScramblerSequence};
pub use quant::{BinEdges, LlrQuantizer};
pub use rng::{Domain, MasterSeed};

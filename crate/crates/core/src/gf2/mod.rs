//! GF(2) kernels: the serial LFSR, symbolic derivation and evaluation of
//! byte-wise update networks, CRC computation, and feed-forward circuits.

pub mod audit;
pub mod crc;
pub mod exhaustive;
pub mod feedforward;
pub mod lfsr;
pub mod network;
pub mod poly;

pub use audit::{audit, audit_published, discover_conventions, DiscrepancyReport, LineStatus};
pub use crc::{crc_compute, Engine};
pub use exhaustive::{exhaustive_equivalence, ExhaustiveReport};
pub use feedforward::{feedforward_encode, FeedForwardCircuit};
pub use lfsr::{serial_shift, serial_shift_word, BitConvention, DataBitOrder, LfsrState, RegisterOrder};
pub use network::{apply_network, derive_network, Term, TermKind, UpdateNetwork};
pub use poly::GeneratorPolynomial;

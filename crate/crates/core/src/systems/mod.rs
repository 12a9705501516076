//! The application families and the fixed example instances.

mod cs;
mod degree;
pub mod examples;
mod gldpc;
mod isi;
mod ldgm;
mod ldpc;
mod pathological;

pub use cs::{mmse_two_point, CsParams, CsSystem, Prior};
pub use degree::DegreeDistribution;
pub use gldpc::GldpcSystem;
pub use isi::{dec_phi, DicodeErasure, ErasureTransfer, IsiSystem};
pub use ldgm::LdgmSystem;
pub use ldpc::LdpcSystem;
pub use pathological::Pathological;

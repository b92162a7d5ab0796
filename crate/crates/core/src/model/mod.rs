//! Problem instances, their text format, and the benchmark families.

pub mod crypto;
pub mod format;
mod instance;
pub mod kakuro;
pub mod magic;
pub mod wqg;

pub use crypto::{encode_crypto, gen_crypto, CryptoWord};
pub use format::{parse_instance, write_instance};
pub use instance::{Constraint, DomainSpec, LinearSpec, Metadata, ProblemInstance, VarDecl};
pub use kakuro::{encode_kakuro, gen_kakuro, Cell, KakuroGrid};
pub use magic::{encode_magic, gen_magic, Given};
pub use wqg::{encode_wqg, gen_wqg, WqgInstance};

//! Domain model for a two-user MIMO interference channel instance:
//! ingestion, validation, serialization and the derived null-space offset
//! machinery other modules consume. Instances are immutable after
//! construction.

mod doc;
mod error;
mod instance;
mod offset;

pub use doc::{matrix_from_str, matrix_from_value, matrix_to_value};
pub use error::ChannelError;
pub use instance::{
    load_instance, load_power_document, serialize_instance, ChannelInstance, PowerDocument,
};
pub use offset::{membership_b, null_offset_space, offset_residual, NullOffsetSpace};

use std::path::PathBuf;

/// Locate the bundled example directory. Checked relative to the
/// current directory first (repo root), then walking up, then via the
/// `ICAP_FIXTURES` environment variable.
pub fn find_fixture_dir() -> Option<PathBuf> {
    if let Ok(dir) = std::env::var("ICAP_FIXTURES") {
        let p = PathBuf::from(dir);
        if p.is_dir() {
            return Some(p);
        }
    }
    let mut base = std::env::current_dir().ok()?;
    for _ in 0..4 {
        let candidate = base.join("examples/paper");
        if candidate.is_dir() {
            return Some(candidate);
        }
        if !base.pop() {
            break;
        }
    }
    None
}

#[cfg(test)]
mod tests;

//! End-to-end constructions with automated property checklists.

use crate::profile::InitialData;

/// Placeholder during bring-up.
pub fn _todo(_: &InitialData) {}

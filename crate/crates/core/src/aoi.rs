//! AoI evolution at the MBS and the RSU caches.
//!
//! Within a slot the master copies are generated or aged first, then
//! refreshed RSU entries copy the master's current age, then every other
//! cached entry ages by one slot.

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::model::{Aoi, CacheState, UpdateAction};

/// New master ages after one slot: 1 where content was regenerated,
/// otherwise one slot older.
pub fn advance_mbs_aoi(mbs_aoi: &[Aoi], generated: &[bool]) -> Result<Vec<Aoi>> {
    if mbs_aoi.len() != generated.len() {
        return Err(Error::LengthMismatch {
            expected: mbs_aoi.len(),
            actual: generated.len(),
        });
    }
    Ok(mbs_aoi
        .iter()
        .zip(generated)
        .map(|(&a, &fresh)| if fresh { 1 } else { a.saturating_add(1) })
        .collect())
}

/// Age of the cached copy `(rsu, content)` once `action` has been applied.
#[inline]
pub fn post_action_aoi(
    state: &CacheState,
    action: &UpdateAction,
    rsu: usize,
    content: usize,
) -> Aoi {
    if action.get(rsu, content) {
        state.mbs_aoi[content]
    } else {
        state.rsu_aoi[(rsu, content)].saturating_add(1)
    }
}

/// Applies refreshes and ages the rest of the cache. `state.mbs_aoi` must
/// already reflect this slot's generation events.
pub fn advance_rsu_aoi(
    state: &CacheState,
    action: &UpdateAction,
    cfg: &SystemConfig,
) -> Result<CacheState> {
    action.check(cfg)?;
    let mut next = state.clone();
    for (k, h) in cfg.covered_pairs() {
        next.rsu_aoi[(k, h)] = post_action_aoi(state, action, k, h);
    }
    Ok(next)
}

//! Thread-local operation counter used to report arithmetic work.
//!
//! One unit is one complex multiply-add in an inner loop. Counting is
//! approximate by design: it exists to compare growth rates, not to model
//! hardware cost.

use std::cell::Cell;

thread_local! {
    static COUNT: Cell<u64> = const { Cell::new(0) };
}

/// Adds `ops` units to the current thread's counter.
#[inline]
pub fn add(ops: u64) {
    COUNT.with(|c| c.set(c.get().wrapping_add(ops)));
}

pub fn reset() {
    COUNT.with(|c| c.set(0));
}

pub fn get() -> u64 {
    COUNT.with(|c| c.get())
}

/// Runs `f` and returns its result with the number of units it recorded.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = get();
    let out = f();
    (out, get().wrapping_sub(before))
}

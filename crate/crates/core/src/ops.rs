//! Per-thread operation counter.
//!
//! Multiplication kernels charge an estimate of the number of base-field
//! operations they perform. Benchmarks read the counter to report an
//! empirical operation count next to wall-clock time.

use std::cell::Cell;

thread_local! {
    static COUNTER: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub fn charge(n: u64) {
    COUNTER.with(|c| c.set(c.get().wrapping_add(n)));
}

/// Current counter value for this thread.
pub fn read() -> u64 {
    COUNTER.with(|c| c.get())
}

/// Reset the counter and return its previous value.
pub fn take() -> u64 {
    COUNTER.with(|c| c.replace(0))
}

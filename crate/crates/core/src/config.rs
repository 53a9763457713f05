//! Resource caps and the random seed, scoped per thread.

use std::cell::RefCell;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Maximum branching depth of comprehensive-basis recursion.
    pub cgb_depth: usize,
    /// Largest coefficient-matrix width for which minors are enumerated.
    pub minor_cols: usize,
    /// Maximum recursion depth of the component-splitting ladder.
    pub decompose_depth: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cgb_depth: 32,
            minor_cols: 12,
            decompose_depth: 64,
            seed: 0,
        }
    }
}

thread_local! {
    static CURRENT: RefCell<Config> = RefCell::new(Config::default());
}

pub fn current() -> Config {
    CURRENT.with(|c| c.borrow().clone())
}

/// Runs `f` with `cfg` installed, restoring the previous config afterwards.
pub fn with_config<T>(cfg: Config, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<Config>);
    impl Drop for Restore {
        fn drop(&mut self) {
            if let Some(c) = self.0.take() {
                CURRENT.with(|cur| *cur.borrow_mut() = c);
            }
        }
    }
    let prev = CURRENT.with(|cur| std::mem::replace(&mut *cur.borrow_mut(), cfg));
    let _restore = Restore(Some(prev));
    f()
}

use alloc::vec::Vec;

/// Maps independent block computations to results, preserving order.
///
/// The engine hands every weight block of a row to one `map` call; an
/// implementation may evaluate the closure on any number of threads.
pub trait TaskRunner {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send;
}

/// Runs every task on the calling thread.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sequential;

impl TaskRunner for Sequential {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}

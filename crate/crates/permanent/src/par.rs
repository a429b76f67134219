//! Tiny indexed-map helper that runs on a thread pool when the `parallel`
//! feature is enabled and sequentially otherwise.
//!
//! Results are collected **in index order**, so callers that combine the
//! returned partial values serially get bit-identical answers regardless of
//! feature flags or thread count.  Work is always partitioned by logical
//! index, never by thread, which is what makes that guarantee possible.

/// Applies `f` to `0..count` and returns the results in index order.
pub(crate) fn indexed_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if count <= 1 {
        return (0..count).map(f).collect();
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_index_order() {
        let got = indexed_map(100, |i| i * i);
        let want: Vec<usize> = (0..100).map(|i| i * i).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn empty_and_single() {
        assert_eq!(indexed_map(0, |i| i), Vec::<usize>::new());
        assert_eq!(indexed_map(1, |i| i + 7), vec![7]);
    }
}

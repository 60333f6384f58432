//! Execution-mode switch for the bulk checks.
//!
//! The heavy entry points (axiom verification, sampled law checks) take an
//! explicit `Parallelism` so callers and benchmarks can compare the rayon
//! path against the sequential one on identical inputs.  Without the
//! `parallel` feature the rayon mode silently degrades to sequential.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Rayon,
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism::Rayon
    }
}

/// Map a fallible job over owned items, honoring the requested mode.
pub fn par_map<T, R, F>(mode: Parallelism, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match mode {
        Parallelism::Sequential => items.into_iter().map(f).collect(),
        Parallelism::Rayon => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.into_iter().map(f).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let items: Vec<u64> = (0..100).collect();
        let seq = par_map(Parallelism::Sequential, items.clone(), |x| x * x);
        let par = par_map(Parallelism::Rayon, items, |x| x * x);
        assert_eq!(seq, par);
    }
}

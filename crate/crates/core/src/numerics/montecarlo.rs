use rayon::prelude::*;

use super::random::RandomStream;
use crate::error::{domain, Result};

/// Monte-Carlo mean of `f` over `n` draws from `sampler`, with its standard error.
pub fn mc_mean<T, S, F>(f: F, mut sampler: S, n: usize, stream: &mut RandomStream) -> Result<(f64, f64)>
where
    S: FnMut(&mut RandomStream) -> T,
    F: Fn(&T) -> f64,
{
    if n < 2 {
        return domain(format!("Monte-Carlo mean needs n >= 2, got {n}"));
    }
    let mut acc = Welford::default();
    for _ in 0..n {
        let x = sampler(stream);
        acc.push(f(&x));
    }
    Ok(acc.finish())
}

/// [`mc_mean`] spread over `chunks` substreams of `stream`, evaluated in
/// parallel and merged in chunk order; the result does not depend on the
/// number of worker threads.
pub fn mc_mean_split<T, S, F>(f: F, sampler: S, n: usize, stream: &RandomStream, chunks: usize) -> Result<(f64, f64)>
where
    S: Fn(&mut RandomStream) -> T + Sync,
    F: Fn(&T) -> f64 + Sync,
{
    if n < 2 || chunks == 0 {
        return domain(format!("Monte-Carlo mean needs n >= 2 and chunks >= 1, got n={n}"));
    }
    let chunks = chunks.min(n);
    let parts: Vec<Welford> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sub = stream.split(c as u64);
            let len = n / chunks + usize::from(c < n % chunks);
            let mut acc = Welford::default();
            for _ in 0..len {
                let x = sampler(&mut sub);
                acc.push(f(&x));
            }
            acc
        })
        .collect();
    let mut total = Welford::default();
    for p in &parts {
        total.merge(p);
    }
    Ok(total.finish())
}

#[derive(Debug, Default, Clone, Copy)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Welford) {
        if o.n == 0.0 {
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n / n;
        self.m2 += o.m2 + d * d * self.n * o.n / n;
        self.n = n;
    }

    fn finish(&self) -> (f64, f64) {
        let var = self.m2 / (self.n - 1.0);
        (self.mean, (var / self.n).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mean() {
        let mut s = RandomStream::new(1);
        let (m, se) = mc_mean(|x: &f64| *x, |r| r.uniform_open(), 100_000, &mut s).unwrap();
        assert!((m - 0.5).abs() < 3.0 * se, "{m} ± {se}");
        let (m, se) = mc_mean(|x: &f64| x * x, |r| r.uniform_open(), 100_000, &mut s).unwrap();
        assert!((m - 1.0 / 3.0).abs() < 3.0 * se, "{m} ± {se}");
    }

    #[test]
    fn constant_has_zero_error() {
        let mut s = RandomStream::new(1);
        let (m, se) = mc_mean(|_: &f64| 7.0, |r| r.uniform_open(), 1000, &mut s).unwrap();
        assert_eq!(m, 7.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let run = || mc_mean(|x: &f64| *x, |r| r.standard_normal(), 500, &mut RandomStream::new(9)).unwrap();
        assert_eq!(run(), run());
        let split = || mc_mean_split(|x: &f64| *x, |r| r.standard_normal(), 5000, &RandomStream::new(9), 8).unwrap();
        assert_eq!(split(), split());
    }

    #[test]
    fn rejects_tiny_n() {
        assert!(mc_mean(|x: &f64| *x, |r| r.uniform_open(), 1, &mut RandomStream::new(0)).is_err());
    }
}

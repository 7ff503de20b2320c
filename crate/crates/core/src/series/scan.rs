//! Deterministic chunked summation: fixed chunks, compensated partials,
//! combined in ascending order so results do not depend on thread count.

use rayon::prelude::*;

use crate::error::Result;

pub const CHUNK: u64 = 4096;

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

struct ChunkOut {
    total: Neumaier,
    marks: Vec<(usize, Neumaier)>,
}

/// `Σ_{k=1}^{K} f(k)` for every `K` in `checkpoints` (ascending, each `≤ upto`).
pub fn chunked_prefix_sums<F>(upto: u64, checkpoints: &[u64], f: F) -> Result<Vec<f64>>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    debug_assert!(checkpoints.windows(2).all(|w| w[0] <= w[1]));
    let n_chunks = upto.div_ceil(CHUNK);
    let outs: Vec<ChunkOut> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(upto);
            let mut acc = Neumaier::default();
            let mut marks = Vec::new();
            let mut next = checkpoints.partition_point(|&x| x < lo);
            for k in lo..=hi {
                acc.add(f(k)?);
                while next < checkpoints.len() && checkpoints[next] == k {
                    marks.push((next, acc));
                    next += 1;
                }
            }
            Ok(ChunkOut { total: acc, marks })
        })
        .collect::<Result<_>>()?;
    let mut out = vec![0.0; checkpoints.len()];
    let mut running = Neumaier::default();
    for o in &outs {
        for (i, part) in &o.marks {
            let mut r = running;
            r.merge(part);
            out[*i] = r.total();
        }
        running.merge(&o.total);
    }
    Ok(out)
}

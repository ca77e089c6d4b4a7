use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, ObjectId, Result};

fn check_params(alpha: f64, q: f64, population: u64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Validation(format!("zipf alpha {alpha} must be positive")));
    }
    if !(q >= 0.0 && q.is_finite()) {
        return Err(Error::Validation(format!("zipf q {q} must be non-negative")));
    }
    if population == 0 {
        return Err(Error::Validation("population must be at least 1".into()));
    }
    Ok(())
}

/// Zipf-Mandelbrot probability of 1-based rank `k`:
/// `(k+q)^-alpha / sum_{j=1..n_p} (j+q)^-alpha`.
pub fn zm_pmf(k: u64, alpha: f64, q: f64, population: u64) -> Result<f64> {
    check_params(alpha, q, population)?;
    if k == 0 || k > population {
        return Err(Error::Validation(format!("rank {k} outside [1, {population}]")));
    }
    let weight = |j: u64| (j as f64 + q).powf(-alpha);
    let norm: f64 = (1..=population).map(weight).sum();
    Ok(weight(k) / norm)
}

/// Inverse-CDF Zipf-Mandelbrot sampler. Ranks map to object ids through a
/// seeded Fisher–Yates permutation so popularity is unrelated to id order.
#[derive(Debug, Clone)]
pub struct ZmSampler {
    alpha: f64,
    q: f64,
    cdf: Vec<f64>,
    rank_to_id: Vec<ObjectId>,
    rng: ChaCha8Rng,
}

impl ZmSampler {
    pub fn new(population: u64, alpha: f64, q: f64, seed: u64, permutation_seed: u64) -> Result<Self> {
        check_params(alpha, q, population)?;
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = (1..=population)
            .map(|k| {
                acc += (k as f64 + q).powf(-alpha);
                acc
            })
            .collect();
        for c in &mut cdf {
            *c /= acc;
        }
        *cdf.last_mut().unwrap() = 1.0;

        let mut rank_to_id: Vec<ObjectId> = (0..population).map(ObjectId).collect();
        rank_to_id.shuffle(&mut ChaCha8Rng::seed_from_u64(permutation_seed));
        Ok(ZmSampler {
            alpha,
            q,
            cdf,
            rank_to_id,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn population(&self) -> u64 {
        self.cdf.len() as u64
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Object id at 1-based popularity rank `rank`.
    pub fn id_of_rank(&self, rank: u64) -> Option<ObjectId> {
        rank.checked_sub(1).and_then(|r| self.rank_to_id.get(r as usize)).copied()
    }

    /// Draws a 1-based rank.
    pub fn sample_rank(&mut self) -> u64 {
        let u: f64 = self.rng.gen();
        let idx = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        idx as u64 + 1
    }

    pub fn sample(&mut self) -> ObjectId {
        let rank = self.sample_rank();
        self.rank_to_id[rank as usize - 1]
    }
}

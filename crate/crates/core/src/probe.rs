//! Finite direction sets standing in for "every v in R^m".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RANDOM_DIRECTIONS: usize = 8;

/// Standard basis plus seeded pseudo-random unit directions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet {
    rank: usize,
    vectors: Vec<Vec<f64>>,
}

impl ProbeSet {
    pub fn new(rank: usize, random: usize, seed: u64) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("probe rank must be positive"));
        }
        let mut vectors: Vec<Vec<f64>> = (0..rank)
            .map(|i| {
                let mut e = vec![0.0; rank];
                e[i] = 1.0;
                e
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while vectors.len() < rank + random {
            let v: Vec<f64> = (0..rank).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue;
            }
            vectors.push(v.into_iter().map(|x| x / norm).collect());
        }
        Ok(ProbeSet { rank, vectors })
    }

    /// Basis plus the default 8 random directions for `seed`.
    pub fn with_seed(rank: usize, seed: u64) -> Result<Self> {
        Self::new(rank, DEFAULT_RANDOM_DIRECTIONS, seed)
    }

    pub fn standard(rank: usize) -> Result<Self> {
        Self::with_seed(rank, DEFAULT_SEED)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymMatrix;

    #[test]
    fn contains_basis_and_unit_vectors() {
        let p = ProbeSet::standard(3).unwrap();
        assert_eq!(p.len(), 11);
        for i in 0..3 {
            assert!(p.vectors().iter().any(|v| v[i] == 1.0 && v.iter().sum::<f64>() == 1.0));
        }
        for v in p.vectors() {
            let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn seeded_and_deterministic() {
        assert_eq!(ProbeSet::with_seed(4, 7).unwrap(), ProbeSet::with_seed(4, 7).unwrap());
        assert_ne!(ProbeSet::with_seed(4, 7).unwrap(), ProbeSet::with_seed(4, 8).unwrap());
    }

    #[test]
    fn spd_is_positive_on_probes() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        for v in ProbeSet::standard(2).unwrap().vectors() {
            assert!(m.quad_form(v) > 0.0);
        }
    }
}

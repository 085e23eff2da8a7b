//! Deterministic random polyhedron generator, used by the benchmark
//! command and the test fixtures in place of an external instance
//! corpus.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::poly::Polyhedron;
use crate::rat::{rat_int, Rat, RatVec};

#[derive(Debug, Clone)]
pub struct GenParams {
    pub nvars: usize,
    pub nrows: usize,
    /// Probability that a coefficient is nonzero.
    pub density: f64,
    pub seed: u64,
}

/// Random constraint system with a strictly interior integer point baked
/// in, so the instance is never empty or flat.
pub fn random_polyhedron(params: &GenParams) -> Polyhedron {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let center: Vec<i64> = (0..params.nvars).map(|_| rng.gen_range(-3i64..=3)).collect();
    let mut rows: Vec<(RatVec, Rat)> = Vec::with_capacity(params.nrows);
    while rows.len() < params.nrows {
        let mut coeffs = vec![0i64; params.nvars];
        for c in coeffs.iter_mut() {
            if rng.gen_bool(params.density.clamp(0.05, 1.0)) {
                *c = loop {
                    let v = rng.gen_range(-4i64..=4);
                    if v != 0 {
                        break v;
                    }
                };
            }
        }
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let at_center: i64 = coeffs.iter().zip(&center).map(|(c, x)| c * x).sum();
        let slack = rng.gen_range(1i64..=5);
        rows.push((
            coeffs.into_iter().map(rat_int).collect(),
            rat_int(at_center + slack),
        ));
    }
    Polyhedron::new(params.nvars, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::interior_point;

    #[test]
    fn deterministic_and_full_dimensional() {
        let params = GenParams {
            nvars: 4,
            nrows: 9,
            density: 0.6,
            seed: 99,
        };
        let a = random_polyhedron(&params);
        let b = random_polyhedron(&params);
        assert_eq!(a, b);
        assert_eq!(a.nvars(), 4);
        assert_eq!(a.rows().len(), 9);
        assert!(interior_point(&a).is_ok());
    }
}

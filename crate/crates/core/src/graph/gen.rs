use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng;

/// Up to this many vertices every pair is decided by `hash(seed, i, j)`,
/// which is reproducible bit-for-bit. Larger graphs use geometric skipping.
pub const PAIRWISE_LIMIT: usize = 20_000;

/// Erdős–Rényi `G(n, d/n)`.
pub fn gen_gnp(n: usize, d: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::param(format!("average degree must be positive, got {d}")));
    }
    if d > n as f64 {
        return Err(Error::param(format!("d = {d} exceeds n = {n}")));
    }
    let p = d / n as f64;
    let edges = if n <= PAIRWISE_LIMIT {
        pairwise(n, p, seed)
    } else {
        skipping(n, p, seed)
    };
    Ok(Graph::from_checked(n, edges))
}

fn pairwise(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng::unit_f64(rng::hash3(seed, i as u64, j as u64)) < p {
                edges.push((i, j));
            }
        }
    }
    edges
}

// Batagelj–Brandes skipping over the lexicographic pair order.
fn skipping(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    if p >= 1.0 {
        return pairwise(n, p, seed);
    }
    let mut rand = ChaCha8Rng::seed_from_u64(seed);
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::new();
    let (mut v, mut w): (usize, i64) = (1, -1);
    while v < n {
        let r: f64 = rand.random();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    edges.sort_unstable();
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_cases() {
        let g = gen_gnp(1, 0.5, 3).unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (1, 0));
        let g = gen_gnp(4, 4.0, 1).unwrap();
        assert_eq!(g.n_edges(), 6);
        assert!(gen_gnp(4, 4.5, 1).is_err());
        assert!(gen_gnp(4, 0.0, 1).is_err());
        assert!(gen_gnp(0, 1.0, 1).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(gen_gnp(300, 3.0, 9).unwrap(), gen_gnp(300, 3.0, 9).unwrap());
        assert_ne!(gen_gnp(300, 3.0, 9).unwrap(), gen_gnp(300, 3.0, 10).unwrap());
    }

    #[test]
    fn skipping_matches_density() {
        let n = 3000;
        let edges = skipping(n, 4.0 / n as f64, 5);
        let expected = (n * (n - 1) / 2) as f64 * 4.0 / n as f64;
        let sigma = expected.sqrt();
        assert!((edges.len() as f64 - expected).abs() < 5.0 * sigma);
        assert!(edges.iter().all(|&(a, b)| a < b && b < n));
        let g = Graph::new(n, edges).unwrap();
        g.validate().unwrap();
    }
}

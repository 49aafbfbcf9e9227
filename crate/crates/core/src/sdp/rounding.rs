//! Recovery of a unit-modulus vector from a relaxed solution `V`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::hermitian::HermitianMatrix;

pub const DEFAULT_DRAWS: usize = 200;

/// Projects onto unit modulus, rotated so the last entry is exactly `1`.
fn project(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let reference = v[n - 1].arg();
    let mut out: Vec<Complex64> = v
        .iter()
        .map(|z| Complex64::from_polar(1.0, z.arg() - reference))
        .collect();
    out[n - 1] = Complex64::new(1.0, 0.0);
    out
}

/// Picks the best of the phase-projected leading eigenvector and `n_draws`
/// projected samples from `CN(0, V)`, scored by `score`.
///
/// Candidates are evaluated in order (eigenvector first) and only a strictly
/// better score replaces the incumbent. The same `seed` reproduces the same
/// draws.
pub fn extract_rank_one<F>(
    v: &HermitianMatrix,
    n_draws: usize,
    seed: u64,
    mut score: F,
) -> (Vec<Complex64>, f64)
where
    F: FnMut(&[Complex64]) -> f64,
{
    let n = v.order();
    if n <= 1 {
        let one = vec![Complex64::new(1.0, 0.0); n];
        let s = score(&one);
        return (one, s);
    }
    let (values, vectors) = v.eigen();
    let leading: Vec<Complex64> = vectors.column(n - 1).iter().copied().collect();
    let mut best = project(&leading);
    let mut best_score = score(&best);

    // ξ = Q Λ^{1/2} r with r ~ CN(0, I)
    let roots: Vec<f64> = values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut sample = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..n_draws {
        let r: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re * half, im * half)
            })
            .collect();
        for (i, s) in sample.iter_mut().enumerate() {
            *s = (0..n).map(|j| vectors[(i, j)] * (roots[j] * r[j])).sum();
        }
        let candidate = project(&sample);
        let s = score(&candidate);
        if s > best_score {
            best_score = s;
            best = candidate;
        }
    }
    (best, best_score)
}

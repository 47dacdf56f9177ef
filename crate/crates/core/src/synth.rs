//! Deterministic synthetic scalar fields for tests and benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::GridDims;

fn coords(dims: GridDims, index: usize) -> [usize; 3] {
    let axes = dims.axes();
    let x = index % axes[0];
    let rest = index / axes[0];
    if axes.len() == 2 {
        [x, rest, 0]
    } else {
        [x, rest % axes[1], rest / axes[1]]
    }
}

/// Strictly monotone linear ramp: no vertex of any level is non-monotonic.
pub fn ramp(dims: GridDims) -> Vec<f64> {
    (0..dims.vertex_count())
        .map(|i| {
            let c = coords(dims, i);
            c[0] as f64 + 2.0 * c[1] as f64 + 4.0 * c[2] as f64
        })
        .collect()
}

/// Independent uniform noise in `[0, 1)`.
pub fn uniform_noise(dims: GridDims, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dims.vertex_count())
        .map(|_| rng.random_range(0.0..1.0))
        .collect()
}

/// Three well-separated Gaussian bumps of decreasing height on a flat
/// base; the classic three-feature fixture.
pub fn multi_bump(dims: GridDims) -> Vec<f64> {
    let bumps: [([f64; 3], f64); 3] = [
        ([0.25, 0.3, 0.3], 1.0),
        ([0.72, 0.25, 0.7], 0.8),
        ([0.55, 0.78, 0.45], 0.6),
    ];
    let axes = dims.axes();
    let sigma = 0.11;
    (0..dims.vertex_count())
        .map(|i| {
            let c = coords(dims, i);
            let mut value = 0.0;
            for (center, height) in &bumps {
                let mut d2 = 0.0;
                for a in 0..axes.len() {
                    let t = c[a] as f64 / (axes[a] - 1) as f64 - center[a];
                    d2 += t * t;
                }
                value += height * (-d2 / (2.0 * sigma * sigma)).exp();
            }
            value
        })
        .collect()
}

/// Gaussian bumps with additive uniform noise of amplitude `noise_amp`
/// (relative to the unit bump height).
pub fn bump_noise(dims: GridDims, seed: u64, noise_amp: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    multi_bump(dims)
        .into_iter()
        .map(|v| v + rng.random_range(-noise_amp..noise_amp))
        .collect()
}

//! Seeded random streams and the samplers built on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ModelConfig, Observation, SimulationPoint};
use crate::specfn::ln_gamma;

/// A seeded generator.
///
/// Substreams are addressed by `(seed, index)`: the ChaCha key comes from the
/// seed and the stream id from the index, so replication `i` sees the same
/// draws no matter which worker runs it or in what order.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The substream for replication `index` under `seed`.
    pub fn for_replication(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomStream { rng }
    }

    /// An independent child stream keyed by this stream's next output and `index`.
    pub fn split(&mut self, index: u64) -> Self {
        let key: u64 = self.rng.random();
        Self::for_replication(key, index)
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            if u > 0.0 {
                return u;
            }
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// `Gamma(shape, scale)` by Marsaglia and Tsang's squeeze-and-reject method.
/// Shapes below one use the boost `G(shape + 1) · U^{1/shape}`.
pub fn sample_gamma(shape: f64, scale: f64, stream: &mut RandomStream) -> f64 {
    debug_assert!(shape > 0.0 && scale > 0.0);
    if shape < 1.0 {
        let g = sample_gamma(shape + 1.0, 1.0, stream);
        let u = stream.uniform();
        return scale * g * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = stream.standard_normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = stream.uniform();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return scale * d * v;
        }
    }
}

/// Chi-squared with any real `dof > 0`, as `Gamma(dof/2, 2)`.
pub fn sample_chi_squared(dof: f64, stream: &mut RandomStream) -> f64 {
    sample_gamma(0.5 * dof, 2.0, stream)
}

// Below this mean, inversion by sequential search is cheaper than rejection.
const POISSON_INVERSION_MAX: f64 = 10.0;

/// `Poisson(mean)`: sequential inversion for small means, otherwise Hörmann's
/// transformed rejection with squeeze (PTRS).
pub fn sample_poisson(mean: f64, stream: &mut RandomStream) -> u64 {
    debug_assert!(mean >= 0.0);
    if mean == 0.0 {
        return 0;
    }
    if mean < POISSON_INVERSION_MAX {
        let u = stream.uniform();
        let mut k = 0u64;
        let mut p = (-mean).exp();
        let mut cdf = p;
        while u > cdf {
            k += 1;
            p *= mean / k as f64;
            cdf += p;
            if p == 0.0 {
                break;
            }
        }
        return k;
    }
    let slam = mean.sqrt();
    let loglam = mean.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let vr = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = stream.uniform() - 0.5;
        let v = stream.uniform();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
        if us >= 0.07 && v <= vr {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        if v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln() <= -mean + k * loglam - ln_gamma(k + 1.0) {
            return k as u64;
        }
    }
}

/// One joint draw of `(‖X‖², V)` and the target `W`.
///
/// `eta‖X‖²` is drawn as the Poisson mixture `Z ~ Po(theta/2)`,
/// `T | Z ~ chi2(p + 2Z)`; `mu` itself is never formed. Draw order is fixed:
/// `Z`, `T`, `V`, `W`.
pub fn sample_observation(
    point: &SimulationPoint,
    config: &ModelConfig,
    stream: &mut RandomStream,
) -> (Observation, f64) {
    let z = sample_poisson(0.5 * point.theta, stream);
    let t = sample_chi_squared(config.p as f64 + 2.0 * z as f64, stream);
    let v = sample_chi_squared(config.n1, stream);
    let w = sample_chi_squared(config.n2, stream);
    let inv_eta = 1.0 / point.eta;
    (
        Observation {
            x_norm_sq: t * inv_eta,
            v: v * inv_eta,
        },
        w * inv_eta,
    )
}

//! Helpers shared by unit tests across modules.

use crate::model::{make_params, ModelParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random valid parameters with `m` colors: rates drawn from (0.2, 3.0)
/// and rescaled so the total edge mass stays at or below 0.9.
pub(crate) fn random_params(rng: &mut ChaCha8Rng, n: usize, m: usize) -> ModelParams {
    loop {
        let alphas: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..3.0)).collect();
        let betas: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..3.0)).collect();
        let scale = (n as f64).ln() / n as f64;
        let mass = alphas.iter().sum::<f64>().max(betas.iter().sum()) * scale;
        let shrink = (0.9 / mass).min(1.0);
        let alphas: Vec<f64> = alphas.iter().map(|a| a * shrink).collect();
        let betas: Vec<f64> = betas.iter().map(|b| b * shrink).collect();
        if let Ok(p) = make_params(n, alphas, betas) {
            return p;
        }
    }
}

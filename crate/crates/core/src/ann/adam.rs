use serde::{Deserialize, Serialize};

use super::TrainConfig;

/// First and second moment estimates for a list of parameter tensors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub t: u64,
}

impl AdamState {
    pub fn new(sizes: &[usize]) -> Self {
        Self {
            m: sizes.iter().map(|&n| vec![0.0; n]).collect(),
            v: sizes.iter().map(|&n| vec![0.0; n]).collect(),
            t: 0,
        }
    }
}

/// One bias-corrected Adam update of every tensor in `params`.
pub fn adam_step(state: &mut AdamState, params: &mut [&mut [f64]], grads: &[&[f64]], cfg: &TrainConfig) {
    assert_eq!(params.len(), grads.len());
    assert_eq!(params.len(), state.m.len());
    state.t += 1;
    let t = state.t as i32;
    let (b1, b2) = (cfg.adam_beta1, cfg.adam_beta2);
    let c1 = 1.0 - b1.powi(t);
    let c2 = 1.0 - b2.powi(t);
    for (k, (p, g)) in params.iter_mut().zip(grads).enumerate() {
        let (m, v) = (&mut state.m[k], &mut state.v[k]);
        assert_eq!(p.len(), g.len());
        for i in 0..p.len() {
            m[i] = b1 * m[i] + (1.0 - b1) * g[i];
            v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
            let m_hat = m[i] / c1;
            let v_hat = v[i] / c2;
            p[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.adam_eps);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_parameters() {
        let cfg = TrainConfig::default();
        let mut st = AdamState::new(&[3]);
        let mut p = vec![1.0, -2.0, 0.5];
        for _ in 0..5 {
            adam_step(&mut st, &mut [&mut p], &[&[0.0; 3]], &cfg);
        }
        assert_eq!(p, vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        let cfg = TrainConfig::default();
        let mut st = AdamState::new(&[3]);
        let mut p = vec![0.0; 3];
        adam_step(&mut st, &mut [&mut p], &[&[3.0, -0.02, 100.0]], &cfg);
        for (x, s) in p.iter().zip([-1.0, 1.0, -1.0]) {
            assert!((x - s * cfg.learning_rate).abs() < 1e-8, "{x}");
        }
    }
}

//! Adam with bias correction.

use ndarray::Array2;

use super::{real, Real};

#[derive(Clone, Debug)]
pub struct AdamState<F: Real> {
    pub first: Vec<Array2<F>>,
    pub second: Vec<Array2<F>>,
    pub step: u64,
}

impl<F: Real> AdamState<F> {
    pub fn new(shapes: &[(usize, usize)]) -> Self {
        AdamState {
            first: shapes.iter().map(|&s| Array2::zeros(s)).collect(),
            second: shapes.iter().map(|&s| Array2::zeros(s)).collect(),
            step: 0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamConfig {
    pub fn with_lr(lr: f64) -> Self {
        AdamConfig { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

pub fn adam_step<F: Real>(
    params: &mut [Array2<F>],
    grads: &[Array2<F>],
    state: &mut AdamState<F>,
    cfg: &AdamConfig,
) {
    assert_eq!(params.len(), grads.len());
    assert_eq!(params.len(), state.first.len());
    state.step += 1;
    let t = state.step as i32;
    let b1 = real::<F>(cfg.beta1);
    let b2 = real::<F>(cfg.beta2);
    let one = F::one();
    let bc1 = one - b1.powi(t);
    let bc2 = one - b2.powi(t);
    let lr = real::<F>(cfg.lr);
    let eps = real::<F>(cfg.eps);
    for ((p, g), (m, v)) in params
        .iter_mut()
        .zip(grads)
        .zip(state.first.iter_mut().zip(state.second.iter_mut()))
    {
        assert_eq!(p.dim(), g.dim(), "adam shape mismatch");
        azip(m, g, |m, &g| *m = b1 * *m + (one - b1) * g);
        azip(v, g, |v, &g| *v = b2 * *v + (one - b2) * g * g);
        for ((p, &m), &v) in p.iter_mut().zip(m.iter()).zip(v.iter()) {
            let m_hat = m / bc1;
            let v_hat = v / bc2;
            *p = *p - lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
}

fn azip<F: Real>(a: &mut Array2<F>, b: &Array2<F>, f: impl Fn(&mut F, &F)) {
    a.zip_mut_with(b, f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    #[test]
    fn first_step_moves_by_about_lr() {
        let mut params = vec![arr2(&[[0.0f64]])];
        let grads = vec![arr2(&[[0.37f64]])];
        let mut state = AdamState::new(&[(1, 1)]);
        adam_step(&mut params, &grads, &mut state, &AdamConfig::with_lr(0.01));
        // bias-corrected first step: Δ = -lr * g / (|g| + eps') ≈ -lr
        assert!((params[0][[0, 0]] + 0.01).abs() < 1e-6);
    }

    #[test]
    fn zero_gradient_leaves_params_unchanged() {
        let mut params = vec![arr2(&[[1.5f64, -2.0]])];
        let grads = vec![arr2(&[[0.0f64, 0.0]])];
        let mut state = AdamState::new(&[(1, 2)]);
        adam_step(&mut params, &grads, &mut state, &AdamConfig::with_lr(0.01));
        assert_eq!(params[0], arr2(&[[1.5, -2.0]]));
    }

    #[test]
    fn two_steps_match_hand_recursion() {
        // scalar Adam with constant gradient g, hand-unrolled
        let g = 0.2f64;
        let (lr, b1, b2, eps) = (0.1, 0.9, 0.999, 1e-8);
        let mut theta = 1.0;
        let mut m = 0.0;
        let mut v = 0.0;
        for t in 1..=2 {
            m = b1 * m + (1.0 - b1) * g;
            v = b2 * v + (1.0 - b2) * g * g;
            let m_hat = m / (1.0 - b1.powi(t));
            let v_hat = v / (1.0 - b2.powi(t));
            theta -= lr * m_hat / (v_hat.sqrt() + eps);
        }

        let mut params = vec![arr2(&[[1.0f64]])];
        let grads = vec![arr2(&[[g]])];
        let mut state = AdamState::new(&[(1, 1)]);
        let cfg = AdamConfig { lr, beta1: b1, beta2: b2, eps };
        adam_step(&mut params, &grads, &mut state, &cfg);
        adam_step(&mut params, &grads, &mut state, &cfg);
        assert!((params[0][[0, 0]] - theta).abs() < 1e-14);
    }
}

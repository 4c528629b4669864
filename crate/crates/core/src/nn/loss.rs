//! Softmax cross-entropy over masked rows.

use ndarray::Array2;

use super::{real, Real};

pub struct LossOutput<F: Real> {
    /// Mean cross-entropy over masked rows (0 when no row is masked).
    pub loss: F,
    /// Gradient of the mean loss w.r.t. the logits; zero on unmasked rows.
    pub grad: Array2<F>,
    /// Number of masked rows.
    pub count: usize,
}

/// `labels[r]` is the class id of row `r`; only rows with `mask[r]` enter
/// the mean.
pub fn softmax_xent<F: Real>(logits: &Array2<F>, labels: &[usize], mask: &[bool]) -> LossOutput<F> {
    let n = logits.nrows();
    assert_eq!(labels.len(), n);
    assert_eq!(mask.len(), n);
    let count = mask.iter().filter(|&&m| m).count();
    let mut grad = Array2::zeros(logits.dim());
    if count == 0 {
        return LossOutput { loss: F::zero(), grad, count };
    }
    let inv = real::<F>(1.0 / count as f64);
    let mut loss = F::zero();
    for r in 0..n {
        if !mask[r] {
            continue;
        }
        let row = logits.row(r);
        let max = row.iter().cloned().fold(F::neg_infinity(), F::max);
        let mut denom = F::zero();
        for &x in row.iter() {
            denom = denom + (x - max).exp();
        }
        let log_denom = denom.ln();
        let y = labels[r];
        loss = loss + (log_denom - (row[y] - max)) * inv;
        let mut grow = grad.row_mut(r);
        for (c, &x) in row.iter().enumerate() {
            let p = (x - max).exp() / denom;
            grow[c] = if c == y { (p - F::one()) * inv } else { p * inv };
        }
    }
    LossOutput { loss, grad, count }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    #[test]
    fn uniform_logits_loss_is_ln_c() {
        let logits = arr2(&[[0.0f64, 0.0, 0.0, 0.0]]);
        let out = softmax_xent(&logits, &[2], &[true]);
        assert!((out.loss - 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn confident_correct_logit_drives_loss_to_zero() {
        let mut prev = f64::INFINITY;
        for margin in [5.0, 20.0, 80.0] {
            let logits = arr2(&[[margin, 0.0]]);
            let out = softmax_xent(&logits, &[0], &[true]);
            assert!(out.loss < prev);
            prev = out.loss;
        }
        assert!(prev < 1e-12);
    }

    #[test]
    fn empty_mask_is_zero() {
        let logits = arr2(&[[1.0f64, 2.0]]);
        let out = softmax_xent(&logits, &[0], &[false]);
        assert_eq!(out.loss, 0.0);
        assert!(out.grad.iter().all(|&g| g == 0.0));
        assert_eq!(out.count, 0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let logits = arr2(&[[0.3f64, -1.2, 0.7], [2.0, 0.1, -0.4], [0.0, 0.0, 1.0]]);
        let labels = [2, 0, 1];
        let mask = [true, true, false];
        let out = softmax_xent(&logits, &labels, &mask);
        let h = 1e-6;
        for r in 0..3 {
            for c in 0..3 {
                let mut plus = logits.clone();
                plus[[r, c]] += h;
                let mut minus = logits.clone();
                minus[[r, c]] -= h;
                let fd = (softmax_xent(&plus, &labels, &mask).loss
                    - softmax_xent(&minus, &labels, &mask).loss)
                    / (2.0 * h);
                let g = out.grad[[r, c]];
                let denom = fd.abs().max(g.abs()).max(1e-8);
                assert!(((fd - g) / denom).abs() < 1e-6, "r={r} c={c} fd={fd} g={g}");
            }
        }
    }
}

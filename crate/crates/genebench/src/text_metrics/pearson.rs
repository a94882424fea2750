//! Sample Pearson correlation with a two-sided t-distribution p-value.

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PearsonError {
    #[error("input columns have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least 2 paired observations, got {0}")]
    NotEnoughData(usize),
    #[error("a column is constant; the correlation is undefined")]
    ConstantColumn,
}

/// Result of a correlation test.
#[derive(Debug, Clone, Copy)]
pub struct PearsonTest {
    pub r: f64,
    /// Two-sided p-value from the t-distribution with n-2 degrees of freedom.
    pub p_value: f64,
    pub n: usize,
}

/// Sample Pearson correlation coefficient of two equal-length columns.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, PearsonError> {
    if xs.len() != ys.len() {
        return Err(PearsonError::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(PearsonError::NotEnoughData(xs.len()));
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(PearsonError::ConstantColumn);
    }
    Ok(cov / (var_x * var_y).sqrt())
}

/// Pearson coefficient plus its two-sided p-value.
pub fn pearson_test(xs: &[f64], ys: &[f64]) -> Result<PearsonTest, PearsonError> {
    let r = pearson(xs, ys)?;
    let n = xs.len();
    let p_value = if r.abs() >= 1.0 {
        0.0
    } else {
        let df = (n - 2) as f64;
        let t = r * (df / (1.0 - r * r)).sqrt();
        t_two_sided_p(t, df)
    };
    Ok(PearsonTest { r, p_value, n })
}

/// Two-sided tail probability of Student's t with `df` degrees of freedom:
/// `P(|T| >= |t|) = I_x(df/2, 1/2)` with `x = df / (df + t^2)`.
fn t_two_sided_p(t: f64, df: f64) -> f64 {
    reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))
}

/// Regularized incomplete beta function `I_x(a, b)` via the continued
/// fraction expansion (Lentz's method).
fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b);
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 3e-16;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_columns_give_one() {
        let xs = [0.1, 0.4, 0.9, 0.2];
        assert!((pearson(&xs, &xs).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negated_columns_give_minus_one() {
        let xs = [0.1, 0.4, 0.9, 0.2];
        let ys: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &ys).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_column_is_rejected() {
        let xs = [1.0, 1.0, 1.0];
        let ys = [0.1, 0.2, 0.3];
        assert_eq!(pearson(&xs, &ys), Err(PearsonError::ConstantColumn));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert_eq!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(PearsonError::LengthMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn affine_transform_invariance() {
        let xs = [0.3, 0.8, 0.1, 0.55, 0.9];
        let ys = [1.0, 2.5, 0.7, 1.9, 3.1];
        let scaled: Vec<f64> = xs.iter().map(|x| 3.7 * x + 11.0).collect();
        let base = pearson(&xs, &ys).unwrap();
        let transformed = pearson(&scaled, &ys).unwrap();
        assert!((base - transformed).abs() < 1e-12);
    }

    /// t = 2.100922 with 18 df sits at the textbook two-sided 5% critical
    /// value, an oracle independent of this implementation.
    #[test]
    fn t_p_value_matches_critical_table() {
        let p = t_two_sided_p(2.10092204024096, 18.0);
        assert!((p - 0.05).abs() < 1e-6, "got {p}");
    }

    #[test]
    fn perfect_correlation_p_is_zero() {
        let xs = [1.0, 2.0, 3.0];
        let test = pearson_test(&xs, &xs).unwrap();
        assert_eq!(test.p_value, 0.0);
    }
}

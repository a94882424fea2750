//! Normalized Mutual Information between two labelings.

use super::EmbedError;

/// NMI with arithmetic-mean normalization: `MI / ((H_a + H_b) / 2)`.
///
/// Conventions: two constant labelings are perfectly aligned (1.0 by
/// convention); exactly one constant labeling carries no information (0.0).
/// Inputs are canonicalized to first-appearance ids before counting, so the
/// value is exactly invariant under bijective relabeling of either side.
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64, EmbedError> {
    if a.len() != b.len() {
        return Err(EmbedError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(EmbedError::LengthMismatch { left: 0, right: 0 });
    }

    let a = canonicalize(a);
    let b = canonicalize(b);
    let n = a.len() as f64;
    let k_a = a.iter().max().unwrap() + 1;
    let k_b = b.iter().max().unwrap() + 1;

    let mut joint = vec![vec![0usize; k_b]; k_a];
    let mut count_a = vec![0usize; k_a];
    let mut count_b = vec![0usize; k_b];
    for (&x, &y) in a.iter().zip(&b) {
        joint[x][y] += 1;
        count_a[x] += 1;
        count_b[y] += 1;
    }

    let h_a = entropy(&count_a, n);
    let h_b = entropy(&count_b, n);
    if h_a == 0.0 && h_b == 0.0 {
        return Ok(1.0);
    }
    if h_a == 0.0 || h_b == 0.0 {
        return Ok(0.0);
    }

    let mut mi = 0.0;
    for (x, row) in joint.iter().enumerate() {
        for (y, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p_xy = c as f64 / n;
            let ratio = (n * c as f64) / (count_a[x] as f64 * count_b[y] as f64);
            mi += p_xy * ratio.ln();
        }
    }
    let mi = mi.max(0.0);
    Ok((mi / ((h_a + h_b) / 2.0)).clamp(0.0, 1.0))
}

fn entropy(counts: &[usize], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// First-appearance dense relabeling; bijectively equivalent inputs map to
/// the identical canonical form.
fn canonicalize(labels: &[usize]) -> Vec<usize> {
    let mut mapping = std::collections::BTreeMap::new();
    let mut next = 0usize;
    labels
        .iter()
        .map(|&l| {
            *mapping.entry(l).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect()
}

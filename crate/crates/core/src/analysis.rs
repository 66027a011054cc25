//! Small helpers for reading features off computed spectra.

/// Indices of interior local maxima: `v[i−1] < v[i] ≥ v[i+1]`.
///
/// A flat top is reported once, at its first index.
pub fn local_maxima(v: &[f64]) -> Vec<usize> {
    if v.len() < 3 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut i = 1;
    while i < v.len() - 1 {
        if v[i] > v[i - 1] {
            let mut j = i;
            while j + 1 < v.len() && v[j + 1] == v[i] {
                j += 1;
            }
            if j + 1 < v.len() && v[j + 1] < v[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Interior local minima, the mirror image of [`local_maxima`].
pub fn local_minima(v: &[f64]) -> Vec<usize> {
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    local_maxima(&neg)
}

/// Local maxima whose value is at least `fraction` of the largest value.
pub fn prominent_maxima(v: &[f64], fraction: f64) -> Vec<usize> {
    let top = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    local_maxima(v).into_iter().filter(|&i| v[i] >= fraction * top).collect()
}

/// Pearson correlation coefficient; NaN if either input is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "pearson needs equal lengths");
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    sab / (saa * sbb).sqrt()
}

/// Least-squares fit of `y = A·exp(−k t²)` through `ln y` against `t²`.
/// Returns `(A, k)`; points with `y ≤ 0` are skipped.
pub fn fit_gaussian_decay(t: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(y)
        .filter(|(_, &y)| y > 0.0)
        .map(|(&t, &y)| (t * t, y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(((my - slope * mx).exp(), -slope))
}

/// Index of the sample nearest to `x` on a sorted axis.
pub fn nearest_index(axis: &[f64], x: f64) -> usize {
    let mut best = 0;
    for (i, a) in axis.iter().enumerate() {
        if (a - x).abs() < (axis[best] - x).abs() {
            best = i;
        }
    }
    best
}

use num_complex::Complex64;

const SERIES_RADIUS: f64 = 1e-4;

/// `sin(z) / z` for complex `z`, continuous through the removable singularity.
pub fn complex_sinc(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

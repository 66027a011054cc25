use num_complex::Complex64;

/// Complex samples and derivatives on a uniform grid, evaluated by cubic
/// Hermite interpolation. Zero outside the tabulated range.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    start: f64,
    step: f64,
    values: Vec<Complex64>,
    derivatives: Vec<Complex64>,
}

impl HermiteTable {
    pub fn new(start: f64, step: f64, values: Vec<Complex64>, derivatives: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), derivatives.len());
        assert!(step > 0.0);
        HermiteTable {
            start,
            step,
            values,
            derivatives,
        }
    }

    /// Builds a table from samples alone, estimating derivatives by centered differences.
    pub fn from_samples(start: f64, step: f64, values: Vec<Complex64>) -> Self {
        let n = values.len();
        let derivatives = (0..n)
            .map(|i| match n {
                0 | 1 => Complex64::new(0.0, 0.0),
                _ if i == 0 => (values[1] - values[0]) / step,
                _ if i == n - 1 => (values[n - 1] - values[n - 2]) / step,
                _ => (values[i + 1] - values[i - 1]) / (2.0 * step),
            })
            .collect();
        Self::new(start, step, values, derivatives)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len().saturating_sub(1)) as f64
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.values.len();
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let u = (x - self.start) / self.step;
        if !(u >= 0.0 && u <= (n - 1) as f64) {
            return Complex64::new(0.0, 0.0);
        }
        let i = (u.floor() as usize).min(n.saturating_sub(2));
        if n == 1 {
            return self.values[0];
        }
        let t = u - i as f64;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        self.values[i] * h00
            + self.derivatives[i] * (h10 * self.step)
            + self.values[i + 1] * h01
            + self.derivatives[i + 1] * (h11 * self.step)
    }
}

/// Dense polynomial with coefficients in ascending order.
/// Derivative coefficients are computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly {
    derivs: [Vec<f64>; 4],
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

impl Poly {
    pub fn new(coeffs: &[f64]) -> Self {
        let p0 = coeffs.to_vec();
        let p1 = derivative(&p0);
        let p2 = derivative(&p1);
        let p3 = derivative(&p2);
        Self {
            derivs: [p0, p1, p2, p3],
        }
    }

    /// Value and first three derivatives at `x`.
    pub fn jet(&self, x: f64) -> [f64; 4] {
        let [p0, p1, p2, p3] = &self.derivs;
        [horner(p0, x), horner(p1, x), horner(p2, x), horner(p3, x)]
    }
}

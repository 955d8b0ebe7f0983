//! Module-wide finite-difference stencils: 4th-order central differences in
//! the interior, one-sided 2nd-order at boundaries (2nd-order central at the
//! nodes adjacent to a boundary). A single stated stencil keeps all
//! downstream tolerances reproducible.

/// First derivative at node `j` of uniformly sampled `values` with spacing `dx`.
pub fn gradient_at(values: &[f64], j: usize, dx: f64) -> f64 {
    let n = values.len();
    assert!(n >= 3, "gradient needs at least 3 samples");
    assert!(j < n);
    let f = values;
    if j == 0 {
        (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx)
    } else if j == n - 1 {
        (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx)
    } else if j == 1 || j == n - 2 || n < 5 {
        (f[j + 1] - f[j - 1]) / (2.0 * dx)
    } else {
        (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * dx)
    }
}

/// Second derivative at node `j`.
pub fn second_derivative_at(values: &[f64], j: usize, dx: f64) -> f64 {
    let n = values.len();
    assert!(n >= 4, "second derivative needs at least 4 samples");
    assert!(j < n);
    let f = values;
    let dx2 = dx * dx;
    if j == 0 {
        (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / dx2
    } else if j == n - 1 {
        (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / dx2
    } else if j == 1 || j == n - 2 || n < 5 {
        (f[j - 1] - 2.0 * f[j] + f[j + 1]) / dx2
    } else {
        (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) / (12.0 * dx2)
    }
}

/// First derivative of the whole sample vector.
pub fn gradient(values: &[f64], dx: f64) -> Vec<f64> {
    (0..values.len()).map(|j| gradient_at(values, j, dx)).collect()
}

/// Second derivative of the whole sample vector.
pub fn second_derivative(values: &[f64], dx: f64) -> Vec<f64> {
    (0..values.len()).map(|j| second_derivative_at(values, j, dx)).collect()
}

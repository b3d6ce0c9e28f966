//! Minimal 3x3 real matrix helpers used by the stability analysis.

/// Row-major 3x3 matrix.
pub type Mat3 = [[f64; 3]; 3];

pub fn trace(m: &Mat3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

pub fn det(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Sum of the three principal 2x2 minors (the second elementary symmetric
/// function of the eigenvalues).
pub fn principal_minor_sum(m: &Mat3) -> f64 {
    let m01 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let m02 = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    let m12 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    m01 + m02 + m12
}

/// `alpha * a + beta * b`, entrywise.
pub fn lin_comb(alpha: f64, a: &Mat3, beta: f64, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = alpha * a[i][j] + beta * b[i][j];
        }
    }
    out
}

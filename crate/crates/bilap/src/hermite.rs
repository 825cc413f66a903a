//! Cubic Hermite shape functions on a single element, the C¹ building block
//! of all assemblies. Dof order per element: (u₀, u₀′, u₁, u₁′).

/// Values of the four shape functions at local coordinate s ∈ [0, 1] on an
/// element of length h.
pub fn shape(s: f64, h: f64) -> [f64; 4] {
    let s2 = s * s;
    let s3 = s2 * s;
    [
        1.0 - 3.0 * s2 + 2.0 * s3,
        h * (s - 2.0 * s2 + s3),
        3.0 * s2 - 2.0 * s3,
        h * (s3 - s2),
    ]
}

/// First derivatives d/dx at s.
pub fn shape_d1(s: f64, h: f64) -> [f64; 4] {
    let s2 = s * s;
    [
        (6.0 * s2 - 6.0 * s) / h,
        1.0 - 4.0 * s + 3.0 * s2,
        (6.0 * s - 6.0 * s2) / h,
        3.0 * s2 - 2.0 * s,
    ]
}

/// Second derivatives d²/dx² at s.
pub fn shape_d2(s: f64, h: f64) -> [f64; 4] {
    [
        (12.0 * s - 6.0) / (h * h),
        (6.0 * s - 4.0) / h,
        (6.0 - 12.0 * s) / (h * h),
        (6.0 * s - 2.0) / h,
    ]
}

/// Third derivatives d³/dx³ (constant on the element).
pub fn shape_d3(h: f64) -> [f64; 4] {
    [12.0 / (h * h * h), 6.0 / (h * h), -12.0 / (h * h * h), 6.0 / (h * h)]
}

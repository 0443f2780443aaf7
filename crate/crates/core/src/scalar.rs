//! Complex scalars and the two scalar functions that appear everywhere.

pub use num_complex::Complex64 as C64;

/// Shorthand constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `z - 1/z`, the Baxterization weight.
#[inline]
pub fn omega(z: C64) -> C64 {
    z - z.inv()
}

/// `z + 1/z`. For the deformation parameter this equals `-tau`.
#[inline]
pub fn nu(z: C64) -> C64 {
    z + z.inv()
}

#[inline]
pub fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

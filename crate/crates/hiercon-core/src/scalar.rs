//! Float intrinsics that resolve to `std` or `libm` depending on features.

#[cfg(feature = "std")]
mod imp {
    #[inline]
    pub fn ceil(x: f64) -> f64 {
        x.ceil()
    }
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    #[inline]
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }
    #[inline]
    pub fn acos(x: f64) -> f64 {
        x.acos()
    }
    #[inline]
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
mod imp {
    #[inline]
    pub fn ceil(x: f64) -> f64 {
        libm::ceil(x)
    }
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    #[inline]
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
    #[inline]
    pub fn acos(x: f64) -> f64 {
        libm::acos(x)
    }
    #[inline]
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
}

pub(crate) use imp::{acos, ceil, cos, ln, sqrt};

// These two have stable `core` implementations, so they need no std/libm
// split; wrapped anyway so numeric modules import everything from one place.
#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    x.abs()
}
#[inline]
pub(crate) fn copysign(x: f64, sign: f64) -> f64 {
    x.copysign(sign)
}

//! Field abstraction shared by the real and complex code paths.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Scalar type of signals and sensing vectors: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + Default
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    const IS_COMPLEX: bool;

    /// The same type viewed as a `nalgebra` field, for dense factorizations.
    type Na: nalgebra::ComplexField<RealField = f64> + Copy;

    fn zero() -> Self;
    fn from_real(v: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn abs(self) -> f64;
    fn abs_sqr(self) -> f64;
    fn scale(self, k: f64) -> Self;
    /// Unit-modulus factor `z/|z|`, or one when `z = 0`.
    fn phase(self) -> Self;
    /// Standard normal draw; complex draws are circularly symmetric with `E|z|^2 = 1`.
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
    fn to_na(self) -> Self::Na;
    fn from_na(v: Self::Na) -> Self;
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;
    type Na = f64;

    fn to_na(self) -> f64 {
        self
    }

    fn from_na(v: f64) -> Self {
        v
    }

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn from_real(v: f64) -> Self {
        v
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn abs_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }
    #[inline]
    fn phase(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;
    type Na = Complex64;

    fn to_na(self) -> Complex64 {
        self
    }

    fn from_na(v: Complex64) -> Self {
        v
    }

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn from_real(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn abs(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }
    #[inline]
    fn phase(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self / r
        }
    }
    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Hermitian inner product `<a, b> = sum conj(a_i) b_i`.
#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (&ai, &bi) in a.iter().zip(b) {
        acc += ai.conj() * bi;
    }
    acc
}

#[inline]
pub fn norm_sqr<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|v| v.abs_sqr()).sum()
}

#[inline]
pub fn norm<T: Scalar>(a: &[T]) -> f64 {
    norm_sqr(a).sqrt()
}

/// `y += k * x`
#[inline]
pub fn axpy<T: Scalar>(k: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += k * xi;
    }
}

pub fn scaled<T: Scalar>(x: &[T], k: f64) -> Vec<T> {
    x.iter().map(|v| v.scale(k)).collect()
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn dist<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).abs_sqr())
        .sum::<f64>()
        .sqrt()
}

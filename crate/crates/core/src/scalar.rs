//! Scalar abstractions.
//!
//! [`Real`] is the floating point base type (f32 or f64). [`Scalar`] is anything the
//! geometry code can be evaluated on: a plain [`Real`], or a forward-mode [`Dual`] number
//! whose components are themselves scalars. Nesting duals gives exact mixed partial
//! derivatives of any order, which is how metric jets up to order three are produced.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, One, Zero};

/// Floating point base type.
pub trait Real: Float + FloatConst + FromPrimitive + Default + Display + Sum + Scalar<Real = Self> {
    /// Converts an `f64` literal; every constant used by the crate is representable.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in the scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A value the geometric formulas can be evaluated on.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    type Real: Real;

    /// Embeds a constant (all derivative parts zero).
    fn cst(v: Self::Real) -> Self;

    /// The primal value with every infinitesimal part dropped.
    fn re(&self) -> Self::Real;

    /// Multiplies by a base-type constant.
    fn scale(self, k: Self::Real) -> Self {
        self * Self::cst(k)
    }

    /// Evaluates a function only available on base reals at a scalar argument.
    ///
    /// Infinitesimal parts are propagated by central differences with step `h`, one level
    /// per nesting depth.
    fn lift_fd(x: &[Self], f: &dyn Fn(&[Self::Real]) -> Vec<Self::Real>, h: Self::Real) -> Vec<Self>;
}

macro_rules! impl_scalar_for_float {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;

            #[inline]
            fn cst(v: $t) -> Self {
                v
            }

            #[inline]
            fn re(&self) -> $t {
                *self
            }

            fn lift_fd(x: &[Self], f: &dyn Fn(&[$t]) -> Vec<$t>, _h: $t) -> Vec<Self> {
                f(x)
            }
        }
    };
}

impl_scalar_for_float!(f32);
impl_scalar_for_float!(f64);

/// First-order dual number `re + du·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual<S> {
    pub re: S,
    pub du: S,
}

impl<S: Scalar> Dual<S> {
    pub fn new(re: S, du: S) -> Self {
        Self { re, du }
    }

    /// A constant: derivative part zero.
    pub fn constant(re: S) -> Self {
        Self { re, du: S::zero() }
    }

    /// Seeds `x + ε·v` componentwise.
    pub fn seed(x: &[S], v: &[S]) -> Vec<Self> {
        x.iter().zip(v).map(|(&re, &du)| Self { re, du }).collect()
    }

    /// Seeds `x + ε·e_k`.
    pub fn seed_axis(x: &[S], k: usize) -> Vec<Self> {
        x.iter().enumerate().map(|(i, &re)| Self { re, du: if i == k { S::one() } else { S::zero() } }).collect()
    }
}

impl<S: Scalar> Zero for Dual<S> {
    fn zero() -> Self {
        Self::constant(S::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.re() == <S::Real as Zero>::zero() && self.du.re() == <S::Real as Zero>::zero()
    }
}

impl<S: Scalar> One for Dual<S> {
    fn one() -> Self {
        Self::constant(S::one())
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.du + o.du)
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.du - o.du)
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re, self.re * o.du + self.du * o.re)
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let inv = S::one() / o.re;
        let q = self.re * inv;
        Self::new(q, (self.du - q * o.du) * inv)
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.du)
    }
}

impl<S: Scalar> AddAssign for Dual<S> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<S: Scalar> SubAssign for Dual<S> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<S: Scalar> MulAssign for Dual<S> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<S: Scalar> DivAssign for Dual<S> {
    fn div_assign(&mut self, o: Self) {
        *self = *self / o;
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    type Real = S::Real;

    fn cst(v: S::Real) -> Self {
        Self::constant(S::cst(v))
    }

    fn re(&self) -> S::Real {
        self.re.re()
    }

    fn lift_fd(x: &[Self], f: &dyn Fn(&[S::Real]) -> Vec<S::Real>, h: S::Real) -> Vec<Self> {
        let re: Vec<S> = x.iter().map(|d| d.re).collect();
        let hs = S::cst(h);
        let plus: Vec<S> = x.iter().map(|d| d.re + d.du * hs).collect();
        let minus: Vec<S> = x.iter().map(|d| d.re - d.du * hs).collect();
        let f0 = S::lift_fd(&re, f, h);
        let fp = S::lift_fd(&plus, f, h);
        let fm = S::lift_fd(&minus, f, h);
        let two_h = S::cst(h + h);
        f0.into_iter().zip(fp.into_iter().zip(fm)).map(|(v, (p, m))| Self::new(v, (p - m) / two_h)).collect()
    }
}

/// Derivative part of every entry.
pub fn du_parts<S: Scalar>(v: &[Dual<S>]) -> Vec<S> {
    v.iter().map(|d| d.du).collect()
}

/// Primal part of every entry.
pub fn re_parts<S: Scalar>(v: &[Dual<S>]) -> Vec<S> {
    v.iter().map(|d| d.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube<S: Scalar>(x: S) -> S {
        x * x * x
    }

    #[test]
    fn nested_duals_give_third_derivative() {
        // d/dx at three nesting levels of x^3 at x = 2: 8, 12, 12, 6
        type D3 = Dual<Dual<Dual<f64>>>;
        let x = D3::new(
            Dual::new(Dual::new(2.0, 1.0), Dual::new(1.0, 0.0)),
            Dual::new(Dual::new(1.0, 0.0), Dual::new(0.0, 0.0)),
        );
        let y = cube(x);
        assert_eq!(y.re.re.re, 8.0);
        assert_eq!(y.re.re.du, 12.0);
        assert_eq!(y.re.du.re, 12.0);
        assert_eq!(y.du.re.re, 12.0);
        assert_eq!(y.du.du.du, 6.0);
    }

    #[test]
    fn division_matches_quotient_rule() {
        let x = Dual::new(3.0_f64, 1.0);
        let y = Dual::constant(1.0) / (Dual::constant(1.0) + x * x);
        assert!((y.re - 0.1).abs() < 1e-15);
        assert!((y.du + 6.0 / 100.0).abs() < 1e-15);
    }

    #[test]
    fn lift_fd_approximates_derivative() {
        let f = |x: &[f64]| vec![x[0].sin()];
        let x = [Dual::new(0.3_f64, 1.0)];
        let y = Dual::lift_fd(&x, &f, 1e-5);
        assert!((y[0].du - 0.3_f64.cos()).abs() < 1e-9);
    }
}

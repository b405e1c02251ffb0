//! Value algebras for the chart recursions.
//!
//! Energies enter the tables through [`ValueAlgebra::lift`]; the pattern
//! correction `−f(γ)` is applied with [`ValueAlgebra::retract`].

use crate::scalar::Scalar;

pub trait ValueAlgebra: Copy + Default + std::fmt::Debug + 'static {
    /// True when `combine` selects one of its operands.
    const SUPPORTS_ARGMIN: bool;

    fn zero<T: Scalar>() -> T;
    fn one<T: Scalar>() -> T;
    fn combine<T: Scalar>(a: T, b: T) -> T;
    fn extend<T: Scalar>(a: T, b: T) -> T;
    fn retract<T: Scalar>(a: T, b: T) -> T;

    /// Maps an energy to a value of the algebra.
    fn lift<T: Scalar>(energy: T) -> T;

    /// `a` strictly preferred over `b`; only meaningful for selective
    /// algebras.
    fn improves<T: Scalar>(a: T, b: T) -> bool;

    fn is_zero<T: Scalar>(a: T) -> bool {
        a == Self::zero()
    }
}

/// `(min, +, −, +∞, 0)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Tropical;

/// `(log-add-exp, +, −, −∞, 0)` over negated energies.
#[derive(Clone, Copy, Debug, Default)]
pub struct LogSum;

/// `(max, ×, ÷, 0, 1)` over `exp(−energy)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxProduct;

impl ValueAlgebra for Tropical {
    const SUPPORTS_ARGMIN: bool = true;

    fn zero<T: Scalar>() -> T {
        T::infinity()
    }
    fn one<T: Scalar>() -> T {
        T::zero()
    }
    #[inline]
    fn combine<T: Scalar>(a: T, b: T) -> T {
        if b < a {
            b
        } else {
            a
        }
    }
    #[inline]
    fn extend<T: Scalar>(a: T, b: T) -> T {
        a + b
    }
    #[inline]
    fn retract<T: Scalar>(a: T, b: T) -> T {
        a - b
    }
    fn lift<T: Scalar>(energy: T) -> T {
        energy
    }
    #[inline]
    fn improves<T: Scalar>(a: T, b: T) -> bool {
        a < b
    }
}

impl ValueAlgebra for LogSum {
    const SUPPORTS_ARGMIN: bool = false;

    fn zero<T: Scalar>() -> T {
        T::neg_infinity()
    }
    fn one<T: Scalar>() -> T {
        T::zero()
    }
    #[inline]
    fn combine<T: Scalar>(a: T, b: T) -> T {
        T::log_add_exp(a, b)
    }
    #[inline]
    fn extend<T: Scalar>(a: T, b: T) -> T {
        a + b
    }
    #[inline]
    fn retract<T: Scalar>(a: T, b: T) -> T {
        a - b
    }
    fn lift<T: Scalar>(energy: T) -> T {
        -energy
    }
    fn improves<T: Scalar>(a: T, b: T) -> bool {
        a > b
    }
}

impl ValueAlgebra for MaxProduct {
    const SUPPORTS_ARGMIN: bool = true;

    fn zero<T: Scalar>() -> T {
        T::zero()
    }
    fn one<T: Scalar>() -> T {
        T::one()
    }
    #[inline]
    fn combine<T: Scalar>(a: T, b: T) -> T {
        if b > a {
            b
        } else {
            a
        }
    }
    #[inline]
    fn extend<T: Scalar>(a: T, b: T) -> T {
        a * b
    }
    #[inline]
    fn retract<T: Scalar>(a: T, b: T) -> T {
        a / b
    }
    fn lift<T: Scalar>(energy: T) -> T {
        (-energy).exp()
    }
    #[inline]
    fn improves<T: Scalar>(a: T, b: T) -> bool {
        a > b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laws<A: ValueAlgebra>(samples: &[f64]) {
        for &a in samples {
            let a = A::lift(a);
            assert_eq!(A::combine(a, A::zero()), a);
            assert_eq!(A::extend(a, A::one::<f64>()), a);
            assert!(A::is_zero(A::extend(A::zero::<f64>(), a)) || !a.is_finite());
            for &b in samples {
                let b = A::lift(b);
                assert_eq!(A::combine(a, b), A::combine(b, a));
                let round = A::retract(A::extend(a, b), b);
                assert!((round - a).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn algebra_laws() {
        let samples = [-3.0, -0.5, 0.0, 1.25, 7.0];
        laws::<Tropical>(&samples);
        laws::<LogSum>(&samples);
        laws::<MaxProduct>(&samples);
    }

    #[test]
    fn lifted_values_agree() {
        let (a, b) = (2.0f64, 5.0);
        let t = Tropical::combine(Tropical::lift(a), Tropical::lift(b));
        let m = MaxProduct::combine(MaxProduct::lift(a), MaxProduct::lift(b));
        assert!((m - (-t).exp()).abs() < 1e-15);
        let l = LogSum::combine(LogSum::lift(a), LogSum::lift(b));
        assert!((l - ((-a).exp() + (-b).exp()).ln()).abs() < 1e-14);
    }
}

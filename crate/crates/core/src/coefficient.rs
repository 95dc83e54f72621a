//! Integer coefficient rings used by the series and group-ring types.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

/// An exact integer ring with overflow-checked arithmetic.
///
/// Machine integers report overflow instead of wrapping; `BigInt` never
/// overflows.
pub trait Coefficient:
    Clone + Debug + Display + PartialEq + Zero + One + Signed + CheckedAdd + CheckedSub + CheckedMul + Send + Sync + 'static
{
    fn from_i64(x: i64) -> Option<Self>;

    fn add_checked(&self, rhs: &Self) -> Option<Self> {
        self.checked_add(rhs)
    }

    fn sub_checked(&self, rhs: &Self) -> Option<Self> {
        self.checked_sub(rhs)
    }

    fn mul_checked(&self, rhs: &Self) -> Option<Self> {
        self.checked_mul(rhs)
    }
}

macro_rules! machine_coefficient {
    ($($t:ty),*) => {$(
        impl Coefficient for $t {
            fn from_i64(x: i64) -> Option<Self> {
                <$t>::try_from(x).ok()
            }
        }
    )*};
}

machine_coefficient!(i32, i64, i128);

impl Coefficient for BigInt {
    fn from_i64(x: i64) -> Option<Self> {
        Some(BigInt::from(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_overflow_is_reported() {
        assert_eq!(i32::MAX.add_checked(&1), None);
        assert_eq!(i64::from_i64(5), Some(5));
        assert_eq!(i32::from_i64(1 << 40), None);
        let big = BigInt::from(i64::MAX);
        assert!(big.mul_checked(&big).is_some());
    }
}

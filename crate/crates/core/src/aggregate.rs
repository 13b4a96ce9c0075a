//! Aggregation functions over edge and vertex values.

use std::fmt::Debug;

/// An associative, commutative combining function with identity.
///
/// `length` maps an edge value to a non-negative distance, used by diameter
/// and nearest-marked queries. `bottom` is the value assigned to fake edges
/// introduced by ternarization; its length must be 0.
pub trait AggregateSpec: Clone + Send + Sync + 'static {
    type Value: Copy + PartialEq + Debug + Send + Sync + 'static;

    fn identity(&self) -> Self::Value;
    fn combine(&self, a: Self::Value, b: Self::Value) -> Self::Value;

    /// `inverse(combine(x, y), y) == x` when supported.
    fn inverse(&self, _total: Self::Value, _part: Self::Value) -> Option<Self::Value> {
        None
    }

    fn invertible(&self) -> bool {
        false
    }

    fn bottom(&self) -> Self::Value {
        self.identity()
    }

    fn length(&self, w: Self::Value) -> u64;
}

/// Sum of `i64`; edge lengths are weights clamped at 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct SumI64;

impl AggregateSpec for SumI64 {
    type Value = i64;
    fn identity(&self) -> i64 {
        0
    }
    fn combine(&self, a: i64, b: i64) -> i64 {
        a.wrapping_add(b)
    }
    fn inverse(&self, total: i64, part: i64) -> Option<i64> {
        Some(total.wrapping_sub(part))
    }
    fn invertible(&self) -> bool {
        true
    }
    fn length(&self, w: i64) -> u64 {
        w.max(0) as u64
    }
}

/// Max of `i64`; every real edge has unit length. `i64::MIN` acts as the
/// identity and as the fake-edge value, so it has length 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxI64;

impl AggregateSpec for MaxI64 {
    type Value = i64;
    fn identity(&self) -> i64 {
        i64::MIN
    }
    fn combine(&self, a: i64, b: i64) -> i64 {
        a.max(b)
    }
    fn length(&self, w: i64) -> u64 {
        if w == i64::MIN {
            0
        } else {
            1
        }
    }
}

/// Sum and max carried together as a pair. Lengths follow the sum part.
#[derive(Clone, Copy, Debug, Default)]
pub struct SumMaxI64;

impl AggregateSpec for SumMaxI64 {
    type Value = (i64, i64);
    fn identity(&self) -> (i64, i64) {
        (0, i64::MIN)
    }
    fn combine(&self, a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
        (a.0.wrapping_add(b.0), a.1.max(b.1))
    }
    fn length(&self, w: (i64, i64)) -> u64 {
        w.0.max(0) as u64
    }
}

/// Connectivity only. Every edge has unit length.
#[derive(Clone, Copy, Debug, Default)]
pub struct Unit;

impl AggregateSpec for Unit {
    type Value = ();
    fn identity(&self) {}
    fn combine(&self, _: (), _: ()) {}
    fn length(&self, _: ()) -> u64 {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_inverse_roundtrip() {
        let s = SumI64;
        for (x, y) in [(3i64, 4i64), (-7, 11), (i64::MAX, 1)] {
            assert_eq!(s.inverse(s.combine(x, y), y), Some(x));
        }
    }

    #[test]
    fn max_identity() {
        let m = MaxI64;
        assert_eq!(m.combine(5, m.identity()), 5);
        assert_eq!(m.length(m.bottom()), 0);
        assert_eq!(SumI64.length(SumI64.bottom()), 0);
    }
}

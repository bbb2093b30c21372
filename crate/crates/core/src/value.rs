//! Extended non-negative cost values.
//!
//! Unreachability is penalised with an explicit infinite element rather than
//! a large sentinel, so comparisons between "disconnected" states are never
//! silently treated as ordinary arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Scalar;

/// A non-negative cost, or the infinite unreachability penalty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CostValue<T = f64> {
    Finite(T),
    Infinite,
}

/// Signed difference between two [`CostValue`]s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CostDelta<T = f64> {
    /// The earlier state was infinite and the later one is finite.
    NegInfinite,
    Finite(T),
    /// The later state is infinite and the earlier one is finite.
    Infinite,
}

/// Raised when both sides of a subtraction are infinite.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("infinite minus infinite has no defined sign")]
pub struct InfiniteMinusInfinite;

impl<T: Scalar> CostValue<T> {
    pub fn zero() -> Self {
        CostValue::Finite(T::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CostValue::Finite(_))
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            CostValue::Finite(v) => Some(v),
            CostValue::Infinite => None,
        }
    }

    /// Multiplication by a non-negative weight.
    pub fn scale(self, weight: T) -> Self {
        match self {
            CostValue::Finite(v) => CostValue::Finite(v * weight),
            CostValue::Infinite => CostValue::Infinite,
        }
    }

    /// `self - earlier`, i.e. the change in cost when moving from `earlier`
    /// to `self`.
    pub fn delta_from(self, earlier: Self) -> Result<CostDelta<T>, InfiniteMinusInfinite> {
        match (earlier, self) {
            (CostValue::Finite(a), CostValue::Finite(b)) => Ok(CostDelta::Finite(b - a)),
            (CostValue::Infinite, CostValue::Finite(_)) => Ok(CostDelta::NegInfinite),
            (CostValue::Finite(_), CostValue::Infinite) => Ok(CostDelta::Infinite),
            (CostValue::Infinite, CostValue::Infinite) => Err(InfiniteMinusInfinite),
        }
    }

    /// Total order; finite values compare by `total_cmp` on their magnitude.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => {
                a.partial_cmp(b).unwrap_or(Ordering::Equal)
            }
            (CostValue::Finite(_), CostValue::Infinite) => Ordering::Less,
            (CostValue::Infinite, CostValue::Finite(_)) => Ordering::Greater,
            (CostValue::Infinite, CostValue::Infinite) => Ordering::Equal,
        }
    }
}

impl<T: Scalar> PartialOrd for CostValue<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => a.partial_cmp(b),
            _ => Some(self.total_cmp(other)),
        }
    }
}

impl<T: Scalar> Add for CostValue<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => CostValue::Finite(a + b),
            _ => CostValue::Infinite,
        }
    }
}

impl<T: Scalar> std::iter::Sum for CostValue<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(CostValue::zero(), |acc, v| acc + v)
    }
}

impl<T: Scalar> fmt::Display for CostValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Finite(v) => write!(f, "{v}"),
            CostValue::Infinite => f.write_str("inf"),
        }
    }
}

impl<T: Scalar> CostDelta<T> {
    /// Strict improvement (negative change).
    pub fn is_improvement(&self) -> bool {
        match *self {
            CostDelta::NegInfinite => true,
            CostDelta::Finite(v) => v < T::zero(),
            CostDelta::Infinite => false,
        }
    }
}

impl<T: Scalar> fmt::Display for CostDelta<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostDelta::NegInfinite => f.write_str("-inf"),
            CostDelta::Finite(v) => write!(f, "{v}"),
            CostDelta::Infinite => f.write_str("inf"),
        }
    }
}

// JSON has no infinity literal, so infinite values travel as the strings
// "inf" / "-inf" and finite values as plain numbers.

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Wire<T> {
    Number(T),
    Text(String),
}

impl<T: Serialize> Serialize for CostValue<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            CostValue::Finite(v) => v.serialize(serializer),
            CostValue::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for CostValue<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match Wire::<T>::deserialize(deserializer)? {
            Wire::Number(v) => Ok(CostValue::Finite(v)),
            Wire::Text(s) if s == "inf" => Ok(CostValue::Infinite),
            Wire::Text(s) => Err(serde::de::Error::custom(format!("unexpected cost `{s}`"))),
        }
    }
}

impl<T: Serialize> Serialize for CostDelta<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            CostDelta::NegInfinite => serializer.serialize_str("-inf"),
            CostDelta::Finite(v) => v.serialize(serializer),
            CostDelta::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for CostDelta<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match Wire::<T>::deserialize(deserializer)? {
            Wire::Number(v) => Ok(CostDelta::Finite(v)),
            Wire::Text(s) if s == "inf" => Ok(CostDelta::Infinite),
            Wire::Text(s) if s == "-inf" => Ok(CostDelta::NegInfinite),
            Wire::Text(s) => Err(serde::de::Error::custom(format!("unexpected delta `{s}`"))),
        }
    }
}

use std::ops::Index;

use crate::error::{Error, Result};
use crate::netcore::network::{ArcId, FlowNetwork};
use crate::scalar::Scalar;

/// Nonnegative value per arc. Preflows, flows and circulations all use
/// this representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcFunction<T> {
    values: Vec<T>,
}

impl<T: Scalar> ArcFunction<T> {
    pub fn zeros(num_arcs: usize) -> Self {
        ArcFunction {
            values: vec![T::zero(); num_arcs],
        }
    }

    pub fn zeros_for(net: &FlowNetwork<T>) -> Self {
        Self::zeros(net.num_arcs())
    }

    pub fn from_vec(values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| v.is_negative()) {
            return Err(Error::Invariant(format!(
                "arc function negative on arc {i}"
            )));
        }
        Ok(ArcFunction { values })
    }

    /// Canonical function from antisymmetric net flows: the positive part
    /// of `net[e]` on each arc.
    pub fn from_net_flows(net: &[T]) -> Self {
        ArcFunction {
            values: net.iter().map(|v| v.positive_part()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, e: ArcId) -> &T {
        &self.values[e.0]
    }

    pub fn set(&mut self, e: ArcId, v: T) {
        debug_assert!(!v.is_negative(), "negative value on arc {e}");
        self.values[e.0] = v;
    }

    pub fn add(&mut self, e: ArcId, v: &T) {
        self.values[e.0] += v.clone();
        debug_assert!(!self.values[e.0].is_negative(), "negative value on arc {e}");
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArcId, &T)> {
        self.values.iter().enumerate().map(|(i, v)| (ArcId(i), v))
    }

    /// `rho(e) - rho(rev(e))`.
    pub fn net_flow(&self, e: ArcId) -> T {
        self.values[e.0].clone() - self.values[e.rev().0].clone()
    }

    pub fn net_flows(&self) -> Vec<T> {
        (0..self.values.len())
            .map(|i| self.net_flow(ArcId(i)))
            .collect()
    }

    /// `(c rho)(e) = c * rho(e)`.
    pub fn scaled(&self, c: &T) -> Self {
        assert!(!c.is_negative(), "scaling factor must be nonnegative");
        ArcFunction {
            values: self.values.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    /// Cancels two-way flow so at most one arc of each pair is positive.
    pub fn canonical(&self) -> Self {
        ArcFunction::from_net_flows(&self.net_flows())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integral())
    }

    pub fn support(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.iter().filter(|(_, v)| v.is_positive()).map(|(e, _)| e)
    }
}

impl<T> Index<ArcId> for ArcFunction<T> {
    type Output = T;

    fn index(&self, e: ArcId) -> &T {
        &self.values[e.0]
    }
}

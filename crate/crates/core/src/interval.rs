use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` of the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval [{lo}, {hi}] is not a finite ordered pair"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn diam(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, u: f64) -> bool {
        u >= self.lo && u <= self.hi
    }

    pub fn check(&self, u: f64) -> Result<()> {
        // One ulp-scale slack so that states produced by arithmetic on the
        // endpoints are not rejected.
        let slack = 1e-12 * (1.0 + self.lo.abs().max(self.hi.abs()));
        if u.is_finite() && u >= self.lo - slack && u <= self.hi + slack {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                value: u,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    pub fn clamp(&self, u: f64) -> f64 {
        u.clamp(self.lo, self.hi)
    }

    /// `n` equally spaced points including both endpoints.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![0.5 * (self.lo + self.hi)],
            _ => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.hi
                    } else {
                        self.lo + self.diam() * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

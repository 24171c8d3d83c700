//! Closed-form expected exit iteration of the exact search on N(mu, sigma^2)
//! rows.
//!
//! With `z = quantile(1 - k/M)`:
//!
//! - expected threshold `mu + sigma * z`
//! - borderline width `delta = 1 / (M * pdf(expected threshold))`
//! - initial interval `D = 2 sigma sqrt(2 ln M)`
//! - expected iterations `log2(2M sqrt(ln M / pi)) - z^2 / (2 ln 2)`, which
//!   equals `log2(D / delta)`.

use std::f64::consts::{LN_2, PI};

use super::normal::{normal_pdf, normal_quantile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryParams {
    pub m: usize,
    pub k: usize,
    pub mu: f64,
    pub sigma: f64,
}

impl TheoryParams {
    pub fn standard(m: usize, k: usize) -> Self {
        Self {
            m,
            k,
            mu: 0.0,
            sigma: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 || self.k == 0 || self.k >= self.m {
            return Err(Error::KOutOfRange {
                k: self.k,
                m: self.m.saturating_sub(1),
            });
        }
        if self.sigma.is_nan() || self.sigma <= 0.0 {
            return Err(Error::NonPositiveSigma(self.sigma));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryReport {
    pub expected_thres: f64,
    pub borderline_delta: f64,
    pub initial_interval: f64,
    pub expected_iterations: f64,
}

impl TheoryReport {
    /// `log2(D / delta)`, the unsimplified form of the iteration estimate.
    pub fn interval_ratio_iterations(&self) -> f64 {
        (self.initial_interval / self.borderline_delta).log2()
    }
}

pub fn theory_report(p: &TheoryParams) -> Result<TheoryReport> {
    p.validate()?;
    let m = p.m as f64;
    let z = normal_quantile(1.0 - p.k as f64 / m)?;
    let expected_thres = p.mu + p.sigma * z;
    let density = normal_pdf(expected_thres, p.mu, p.sigma)?;
    let ln_m = m.ln();
    Ok(TheoryReport {
        expected_thres,
        borderline_delta: 1.0 / (m * density),
        initial_interval: 2.0 * p.sigma * (2.0 * ln_m).sqrt(),
        expected_iterations: (2.0 * m * (ln_m / PI).sqrt()).log2() - z * z / (2.0 * LN_2),
    })
}

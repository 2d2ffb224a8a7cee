//! Mixing-time bounds from conductance. The constants `C` and `gamma` are
//! not quantified by the underlying theorems; they are plain parameters
//! (default 1) and are carried into every report.

use serde::Serialize;

use super::profile::{ConductanceProfile, Method};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::scalar::Scalar;

/// `max_S pi(S) / (10 Q(S)) = max_S d(S) / (10 e_out(S))` over candidates
/// with `0 < pi(S) <= 1/2`. Any chain needs at least this many steps.
pub fn bound_lower_exact<S: Scalar>(
    g: &Graph,
    component: &VertexSet,
    candidates: &[VertexSet],
) -> Result<S> {
    if candidates.is_empty() {
        return Err(Error::param("candidates", "empty list"));
    }
    let volume = g.volume(component.as_slice());
    let mut best: Option<S> = None;
    for s in candidates {
        if !s.is_subset(component) {
            return Err(Error::param("candidates", "set outside the component"));
        }
        let stats = g.subset_stats(s);
        let d = stats.total_degree;
        if d == 0 || 2 * d > volume {
            return Err(Error::param("candidates", "need 0 < pi(S) <= 1/2"));
        }
        if stats.e_out == 0 {
            return Err(Error::param("candidates", "set has no outgoing edge"));
        }
        let v = S::ratio(d, 10 * stats.e_out);
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    Ok(best.expect("nonempty"))
}

pub fn bound_lower(g: &Graph, component: &VertexSet, candidates: &[VertexSet]) -> Result<f64> {
    bound_lower_exact::<f64>(g, component, candidates)
}

/// `C ln(1 / pi_min) / Phi^2`.
pub fn bound_jerrum_sinclair(phi: f64, pi_min: f64, c: f64) -> Result<f64> {
    if !(phi > 0.0 && phi.is_finite()) {
        return Err(Error::param("phi", format!("{phi} must be positive")));
    }
    if !(pi_min > 0.0 && pi_min <= 1.0) {
        return Err(Error::param("pi_min", format!("{pi_min} is outside (0, 1]")));
    }
    Ok(c * (1.0 / pi_min).ln() / (phi * phi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicBound<S> {
    /// `C sum_j Phi_j^{-2}`.
    pub sum: S,
    /// Trapezoid estimate of `C int dx / (x Phi(x)^2)` over `[2^{-J}, 1/2]`
    /// on the dyadic grid, i.e. in `ln x` with step `ln 2`.
    pub integral: f64,
    pub scales: usize,
}

/// `C sum_{j=1}^{J} Phi^{-2}(2^{-j})` from a complete profile.
pub fn bound_dyadic_sum<S: Scalar>(profile: &ConductanceProfile, c: f64) -> Result<DyadicBound<S>> {
    let expected = super::scale_count(profile.volume, profile.min_degree);
    let complete = profile.scales.len() == expected
        && profile.scales.iter().enumerate().all(|(i, e)| e.j == i + 1);
    if !complete {
        return Err(Error::param("profile", "scales 1..=J are not all present"));
    }
    if profile.scales.iter().any(|e| e.phi.num == 0) {
        return Err(Error::param("profile", "zero conductance at some scale"));
    }
    let terms: Vec<S> = profile.scales.iter().map(|e| e.phi.inverse_square::<S>()).collect();
    let cc = S::from_param(c);
    let sum = terms.iter().fold(S::zero(), |a, t| a + t.clone()) * cc;
    let f: Vec<f64> = profile
        .scales
        .iter()
        .map(|e| e.phi.inverse_square::<f64>())
        .collect();
    let integral = match f.len() {
        0 => 0.0,
        1 => 0.0,
        k => {
            let inner: f64 = f[1..k - 1].iter().sum();
            c * std::f64::consts::LN_2 * (0.5 * f[0] + inner + 0.5 * f[k - 1])
        }
    };
    Ok(DyadicBound {
        sum,
        integral,
        scales: profile.scales.len(),
    })
}

/// `4 exp(-gamma t^2 / (E + t))`, the binomial concentration tail for
/// `P(|X - E| >= t)`.
pub fn talagrand_tail(expectation: f64, t: f64, gamma: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param("t", format!("{t} must be positive")));
    }
    if !(gamma > 0.0) {
        return Err(Error::param("gamma", format!("{gamma} must be positive")));
    }
    if !(expectation >= 0.0) {
        return Err(Error::param("expectation", format!("{expectation} is negative")));
    }
    Ok(4.0 * (-gamma * t * t / (expectation + t)).exp())
}

/// All three bounds for one component, reported per unit of `C`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub c: f64,
    pub note: String,
    pub phi_global: f64,
    pub phi_method: Method,
    pub lower: f64,
    pub jerrum_sinclair: f64,
    pub dyadic_sum: f64,
    pub dyadic_integral: f64,
}

impl BoundsReport {
    /// Lower bound over the profile's witnesses; the upper bounds use the
    /// global conductance and the profile.
    pub fn compute(
        g: &Graph,
        component: &VertexSet,
        profile: &ConductanceProfile,
        c: f64,
    ) -> Result<Self> {
        let n = g.n();
        let mut candidates = vec![VertexSet::from_vertices(
            n,
            profile.global_witness.iter().copied(),
        )?];
        for e in &profile.scales {
            if !e.witness.is_empty() {
                candidates.push(VertexSet::from_vertices(n, e.witness.iter().copied())?);
            }
        }
        let dyadic = bound_dyadic_sum::<f64>(profile, c)?;
        Ok(BoundsReport {
            c,
            note: format!("upper bounds scale with C; reported assuming C={c}"),
            phi_global: profile.global.to_f64(),
            phi_method: profile.global_method,
            lower: bound_lower(g, component, &candidates)?,
            jerrum_sinclair: bound_jerrum_sinclair(profile.global.to_f64(), profile.pi_min(), c)?,
            dyadic_sum: dyadic.sum,
            dyadic_integral: dyadic.integral,
        })
    }
}

//! The fellow-travelling constant k(rho, L, A) and the two neighborhood
//! tests built on it.
//!
//! k = max{3A, 3L^2, 1 + inf{R > 0 : 3L^2 rho(r) <= r for all r >= R}},
//! evaluated in exact rational arithmetic against a measured profile.
//! rho is read as the step function rho(r) = rho_hat(ceil r), so the inf
//! lands on rational points: an interval (m-1, m] contributes nothing
//! when 3L^2 rho_hat(m) <= m-1, pins the inf to the value 3L^2 rho_hat(m)
//! when that lands inside the interval, and pushes the inf past m when
//! even the right endpoint fails. The scan stops at the measured support;
//! if the tail inequality still fails there the result carries an
//! UNRESOLVED flag and k is only a lower bound.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GeodesicPath, UnitGraph, VertexId};
use crate::morse::gauge::MorseGaugeTable;
use crate::morse::profile::ContractionProfile;
use crate::morse::projection::check_path;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Serialize)]
pub struct FqParams {
    pub l: Rational,
    pub a: Rational,
    /// First integer radius from which the tail inequality holds through
    /// the measured support; support + 1 when unresolved.
    pub r: u32,
    pub k_value: Rational,
    /// Set when 3L^2 rho(r) <= r never holds tail-wise within support;
    /// k_value is then a lower bound.
    pub unresolved: bool,
}

pub fn k_of(profile: &ContractionProfile, l: Rational, a: Rational) -> Result<FqParams> {
    if l < Rational::one() {
        return Err(Error::input(format!("L must be at least 1, got {l}")));
    }
    if a < Rational::zero() {
        return Err(Error::input(format!("A must be non-negative, got {a}")));
    }
    let three = Rational::from_integer(3);
    let coeff = three * l * l;
    let support = profile.support;

    // inf of the tail condition over the step extension of rho_hat.
    let mut inf = Rational::zero();
    let mut unresolved = false;
    let mut r_tail = 1u32;
    for m in 1..=support {
        let v = coeff * Rational::from_integer(profile.value(m) as i64);
        let m_q = Rational::from_integer(m as i64);
        let m_prev = m_q - Rational::one();
        if v <= m_prev {
            continue;
        }
        if v <= m_q {
            inf = inf.max(v);
            r_tail = r_tail.max(m);
        } else {
            inf = inf.max(m_q);
            r_tail = r_tail.max(m + 1);
            if m == support {
                unresolved = true;
            }
        }
    }
    if support == 0 {
        // Only rho_hat(0) = 0 measured; the tail condition is vacuous.
        inf = Rational::zero();
    }
    let k_value = (three * a).max(coeff).max(Rational::one() + inf);
    Ok(FqParams { l, a, r: r_tail.min(support + 1), k_value, unresolved })
}

#[derive(Debug, Clone, Serialize)]
pub struct FqTestReport {
    pub params: FqParams,
    pub anchor_radius: u32,
    /// Distance from beta to the part of alpha at distance >= r from o.
    pub distance: u32,
    pub tail_size: usize,
    pub pass: bool,
}

/// Does beta stay k-close to the far part of alpha? The far part is the
/// set of alpha vertices at distance at least `r` from `o`.
pub fn fq_neighbor_test(
    g: &UnitGraph,
    o: VertexId,
    alpha: &GeodesicPath,
    r: u32,
    beta: &[VertexId],
    l: Rational,
    a: Rational,
    profile: &ContractionProfile,
) -> Result<FqTestReport> {
    check_path(g, alpha.vertices())?;
    check_path(g, beta)?;
    if beta[0] != o {
        return Err(Error::input(format!(
            "beta must start at the anchor {o}, starts at {}",
            beta[0]
        )));
    }
    let dist_o = g.bfs(o);
    let tail: Vec<VertexId> = alpha
        .vertices()
        .iter()
        .copied()
        .filter(|v| dist_o[v.idx()] >= r)
        .collect();
    if tail.is_empty() {
        return Err(Error::input(format!(
            "alpha never leaves the {r}-ball around {o}; r too large for this truncation"
        )));
    }
    let params = k_of(profile, l, a)?;
    let dist_tail = g.bfs_multi(&tail);
    let distance = beta.iter().map(|v| dist_tail[v.idx()]).min().expect("beta non-empty");
    let pass = Rational::from_integer(distance as i64) <= params.k_value;
    Ok(FqTestReport { params, anchor_radius: r, distance, tail_size: tail.len(), pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct DlTestReport {
    pub n: usize,
    pub delta_n: u32,
    pub gauge_bound: u32,
    pub pass: bool,
    /// First time step where the paths drift at least delta_n apart.
    pub first_violation: Option<(usize, u32)>,
}

/// Pointwise fellow-travelling up to time n: d(alpha(t), gamma(t)) <
/// delta_n for all t < n. delta_n must exceed 4 * N(3,0) from the gauge
/// table, mirroring the neighborhood-basis hypothesis.
pub fn dl_neighbor_test(
    g: &UnitGraph,
    p: VertexId,
    alpha: &[VertexId],
    n: usize,
    gamma: &[VertexId],
    delta_n: u32,
    gauge: &MorseGaugeTable,
) -> Result<DlTestReport> {
    check_path(g, alpha)?;
    check_path(g, gamma)?;
    if alpha[0] != p || gamma[0] != p {
        return Err(Error::input(format!("both paths must start at {p}")));
    }
    if alpha.len() < n || gamma.len() < n {
        return Err(Error::input(format!(
            "paths too short for n = {n}: lengths {} and {}",
            alpha.len(),
            gamma.len()
        )));
    }
    let n30 = gauge.n30().ok_or_else(|| {
        Error::input("gauge table has no (3,0) entry; probe it before dl tests")
    })?;
    if delta_n <= 4 * n30 {
        return Err(Error::input(format!(
            "delta_n must exceed 4*N(3,0) = {}, got {delta_n}",
            4 * n30
        )));
    }
    let mut first_violation = None;
    for t in 0..n {
        let d = g.distance(alpha[t], gamma[t])?;
        if d >= delta_n {
            first_violation = Some((t, d));
            break;
        }
    }
    Ok(DlTestReport {
        n,
        delta_n,
        gauge_bound: 4 * n30,
        pass: first_violation.is_none(),
        first_violation,
    })
}

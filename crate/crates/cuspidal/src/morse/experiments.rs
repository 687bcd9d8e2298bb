//! Audits that run on cusped balls: contraction profiles along vertical
//! rays compared across cosets, and distance growth of subgroup powers.

use serde::Serialize;

use crate::cusped::CuspedBall;
use crate::error::{Error, Result};
use crate::graph::GeodesicPath;
use crate::groups::Word;
use crate::morse::profile::{contraction_profile, ContractionProfile};

#[derive(Debug, Clone, Serialize)]
pub struct CosetRayProfile {
    pub patch: usize,
    /// Display form of the patch representative.
    pub rep: String,
    pub base_size: usize,
    pub profile: ContractionProfile,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerticalAudit {
    pub per_coset: Vec<CosetRayProfile>,
    /// Max over coset pairs of the sup-norm gap between their profiles,
    /// each extended by its last value to the common support.
    pub uniformity_gap: u32,
    pub depth_used: u32,
}

/// Compares contraction along the vertical ray over each patch
/// representative, anchored on the certified region. Translation between
/// cosets of the same subgroup preserves ray geometry, so a large gap
/// flags either truncation bias or a numbering bug.
pub fn vertical_ray_contraction_audit(
    cb: &CuspedBall,
    patches: &[usize],
    depth_used: u32,
) -> Result<VerticalAudit> {
    let mut idxs: Vec<usize> = patches.to_vec();
    idxs.sort_unstable();
    idxs.dedup();
    if idxs.len() < 2 {
        return Err(Error::input("vertical audit needs at least two distinct patches"));
    }
    if depth_used == 0 || depth_used > cb.depth() {
        return Err(Error::input(format!(
            "depth_used must lie in 1..={}, got {depth_used}",
            cb.depth()
        )));
    }
    let region = cb.certified_vertices();
    if region.is_empty() {
        return Err(Error::input("certified region is empty; grow the radius"));
    }
    let model = cb.ball().model();
    let mut per_coset = Vec::with_capacity(idxs.len());
    for &pi in &idxs {
        let Some(p) = cb.patches().get(pi) else {
            return Err(Error::input(format!("patch index {pi} out of range")));
        };
        let rep_v = cb
            .ball()
            .vertex_of(&p.rep)
            .ok_or_else(|| Error::input("patch representative missing from ball"))?;
        let base_idx = p
            .level0
            .iter()
            .position(|&v| v == rep_v)
            .ok_or_else(|| Error::input("patch representative missing from trace"))?;
        let full = cb.vertical_ray(pi, base_idx);
        let ids = full.vertices()[..=depth_used as usize].to_vec();
        let ray = GeodesicPath::from_trusted(ids);
        let profile = contraction_profile(cb.graph(), &[ray], &region)?;
        per_coset.push(CosetRayProfile {
            patch: pi,
            rep: model.display_word(&p.rep),
            base_size: p.base_size(),
            profile,
        });
    }
    let max_support = per_coset.iter().map(|c| c.profile.support).max().unwrap();
    let mut gap = 0u32;
    for i in 0..per_coset.len() {
        for j in i + 1..per_coset.len() {
            for r in 0..=max_support {
                let a = per_coset[i].profile.value(r);
                let b = per_coset[j].profile.value(r);
                gap = gap.max(a.abs_diff(b));
            }
        }
    }
    Ok(VerticalAudit { per_coset, uniformity_gap: gap, depth_used })
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionSeries {
    /// Display form of the base word h.
    pub word: String,
    /// (n, d(e, h^n)) for each power that landed inside the ball.
    pub distances: Vec<(u32, u32)>,
    /// (n, d / log2 n) for n >= 2.
    pub ratios: Vec<(u32, f64)>,
    /// Some h^n fell outside the ball before n_max.
    pub truncated: bool,
    /// Least-squares d ~ slope * log2 n + intercept over the top half of
    /// the measured points.
    pub fit_slope: f64,
    pub fit_intercept: f64,
}

/// Distance from the origin to successive powers of h in the cusped
/// metric. Parabolic words show logarithmic growth; undistorted ones
/// stay linear.
pub fn power_path_distortion(cb: &CuspedBall, h: &Word, n_max: u32) -> Result<DistortionSeries> {
    let model = cb.ball().model();
    let base = model.normal_form(h);
    if base.len() == 0 {
        return Err(Error::input("distortion base word must be non-trivial"));
    }
    if n_max == 0 {
        return Err(Error::input("n_max must be positive"));
    }
    let mut distances = Vec::new();
    let mut truncated = false;
    let mut w = Word::identity();
    for n in 1..=n_max {
        w = model.multiply(&w, &base);
        let Some(v) = cb.ball().vertex_of(&w) else {
            truncated = true;
            break;
        };
        distances.push((n, cb.distance_from_origin(v)));
    }
    if distances.is_empty() {
        return Err(Error::input("no power of the base word lies in the ball"));
    }
    let ratios: Vec<(u32, f64)> = distances
        .iter()
        .filter(|(n, _)| *n >= 2)
        .map(|&(n, d)| (n, d as f64 / (n as f64).log2()))
        .collect();
    // Fit over the top half; small n is dominated by the additive constant.
    let tail = &distances[distances.len() / 2..];
    let m = tail.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(n, d) in tail {
        let x = (n as f64).log2();
        let y = d as f64;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = m * sxx - sx * sx;
    let (fit_slope, fit_intercept) = if denom.abs() < 1e-12 {
        (0.0, sy / m)
    } else {
        let slope = (m * sxy - sx * sy) / denom;
        (slope, (sy - slope * sx) / m)
    };
    Ok(DistortionSeries {
        word: model.display_word(&base),
        distances,
        ratios,
        truncated,
        fit_slope,
        fit_intercept,
    })
}

//! Skyline quality metrics: non-dominated region areas, optimality gap,
//! and coverage gap.
//!
//! A skyline's region is the part of its own bounding box that no entry
//! dominates; the box spans from the origin to the last entry's shopping
//! time and the first entry's shopping cost. All areas are exact integer
//! counts of (time unit x cent) cells.

use thiserror::Error;

use crate::skyline::CostVector;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("skyline region is undefined for an empty skyline")]
    EmptySkyline,
    #[error("region area exceeds the 64-bit range")]
    AreaOverflow,
}

/// Non-dominated region of one skyline within its own bounding box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkylineRegion {
    /// Pareto-minimal points defining the dominated staircase.
    pub points: Vec<CostVector>,
    pub x_max: u64,
    pub y_max: u64,
    pub area: u64,
}

/// Gap measures between an optimal and an approximate skyline.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GapReport {
    pub a_opt: u64,
    pub a_apx: u64,
    pub a_cover: u64,
    pub a_miss: u64,
    pub optimality_gap: f64,
    pub coverage_gap: f64,
}

impl GapReport {
    /// Fields in the harness CSV order:
    /// `a_opt,a_apx,a_cover,a_miss,opt_gap,cov_gap`.
    pub fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6}",
            self.a_opt, self.a_apx, self.a_cover, self.a_miss, self.optimality_gap, self.coverage_gap
        )
    }
}

/// Keep the points no other point dominates (componentwise minima),
/// ascending by `st`, strictly descending `sc`.
fn pareto_minima(vectors: &[CostVector]) -> Vec<CostVector> {
    let mut vs = vectors.to_vec();
    vs.sort();
    vs.dedup();
    let mut out: Vec<CostVector> = Vec::new();
    for v in vs {
        if out.last().map_or(true, |p| v.sc < p.sc) {
            out.push(v);
        }
    }
    out
}

/// Exact area of the box minus the union of the points' dominated
/// quadrants, clipped to the box.
fn region_area(points: &[CostVector], x_max: u64, y_max: u64) -> Result<u64, MetricsError> {
    let total = x_max as u128 * y_max as u128;
    let mut dominated: u128 = 0;
    let mut upper = y_max;
    for p in points.iter().filter(|p| p.st <= x_max && p.sc <= y_max) {
        dominated += (x_max - p.st) as u128 * (upper - p.sc) as u128;
        upper = p.sc;
    }
    u64::try_from(total - dominated).map_err(|_| MetricsError::AreaOverflow)
}

/// Region of the points within the skyline's own bounding box.
pub fn nondominated_region(skyline: &[CostVector]) -> Result<SkylineRegion, MetricsError> {
    if skyline.is_empty() {
        return Err(MetricsError::EmptySkyline);
    }
    let points = pareto_minima(skyline);
    let x_max = points.last().unwrap().st;
    let y_max = points.first().unwrap().sc;
    let area = region_area(&points, x_max, y_max)?;
    Ok(SkylineRegion {
        points,
        x_max,
        y_max,
        area,
    })
}

/// Compare an approximate skyline against the optimal one.
pub fn gap_report(opt: &[CostVector], apx: &[CostVector]) -> Result<GapReport, MetricsError> {
    let opt_region = nondominated_region(opt)?;
    let apx_region = nondominated_region(apx)?;
    let x_c = opt_region.x_max.min(apx_region.x_max);
    let y_c = opt_region.y_max.min(apx_region.y_max);
    let mut merged: Vec<CostVector> = opt_region.points.clone();
    merged.extend_from_slice(&apx_region.points);
    let merged = pareto_minima(&merged);
    let a_cover = region_area(&merged, x_c, y_c)?;
    let a_opt = opt_region.area;
    let a_apx = apx_region.area;
    debug_assert!(a_cover <= a_opt.min(a_apx));
    let a_miss = a_opt - a_cover;
    let ratio = |num: u64, den: u64| -> f64 {
        if den == 0 {
            0.0
        } else {
            round6(num as f64 / den as f64)
        }
    };
    Ok(GapReport {
        a_opt,
        a_apx,
        a_cover,
        a_miss,
        optimality_gap: ratio(a_apx - a_cover, a_apx),
        coverage_gap: ratio(a_miss, a_opt),
    })
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

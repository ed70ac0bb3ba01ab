//! Equal circles packed in the unit circle, the packing-density altitude bound,
//! and the radius/altitude relation of a directional beam.
//!
//! Stored layouts carry centers only. The common radius is derived from them as
//! the largest value satisfying both the non-overlap and the containment
//! constraint, so a layout is valid by construction and `verify_layout` is the
//! independent check.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{ensure, Error, Result};

/// Largest UAV count with a stored layout.
pub const MAX_LAYOUT_COUNT: usize = 10;

/// Geometric tolerance of the non-overlap and containment checks.
pub const GEOMETRY_TOL: f64 = 1e-9;

/// Ten-circle optimum; no symmetric closed form exists.
const TEN_CIRCLES: [[f64; 2]; 10] = [
    [0.253372163991707, 0.139448317527568],
    [-0.206146998478546, -0.113457025619170],
    [-0.187331267834263, 0.713560712924037],
    [-0.614172028093001, 0.408723151834076],
    [0.502612195179340, -0.540039698720433],
    [0.016702866430067, -0.737551970501110],
    [0.734456059532140, -0.069542731852960],
    [-0.477649595130165, -0.562239058772192],
    [-0.730554938276904, -0.102719896301938],
    [0.334203584638672, 0.657700432531190],
];

/// Optimal placement of `count` equal circles in the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingLayout {
    pub count: usize,
    pub radius_norm: f64,
    pub centers_norm: Vec<[f64; 2]>,
    pub total_coverage: f64,
}

impl PackingLayout {
    /// Builds a layout whose radius is the largest the centers admit.
    pub fn from_centers(centers_norm: Vec<[f64; 2]>) -> Self {
        let count = centers_norm.len();
        let boundary = centers_norm
            .iter()
            .map(|c| 1.0 - norm(*c))
            .fold(f64::INFINITY, f64::min);
        let radius_norm = match min_spacing(&centers_norm) {
            Some(s) => boundary.min(0.5 * s),
            None => boundary,
        };
        Self {
            count,
            radius_norm,
            total_coverage: count as f64 * radius_norm * radius_norm,
            centers_norm,
        }
    }

    /// Smallest distance between two centers, `None` for a single circle.
    pub fn min_center_spacing(&self) -> Option<f64> {
        min_spacing(&self.centers_norm)
    }
}

fn norm(c: [f64; 2]) -> f64 {
    c[0].hypot(c[1])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn min_spacing(centers: &[[f64; 2]]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, &a) in centers.iter().enumerate() {
        for &b in &centers[i + 1..] {
            let d = dist(a, b);
            best = Some(best.map_or(d, |m| m.min(d)));
        }
    }
    best
}

/// `k` circles tangent to each other and to the boundary, optionally around a central one.
fn ring(k: usize, ring_radius: f64, with_center: bool) -> Vec<[f64; 2]> {
    let mut centers = Vec::with_capacity(k + 1);
    if with_center {
        centers.push([0.0, 0.0]);
    }
    for i in 0..k {
        let a = PI / 2.0 + TAU * i as f64 / k as f64;
        centers.push([ring_radius * a.cos(), ring_radius * a.sin()]);
    }
    centers
}

/// Radius of `k` mutually tangent circles inscribed along the boundary.
fn boundary_ring_radius(k: usize) -> f64 {
    let s = (PI / k as f64).sin();
    s / (1.0 + s)
}

/// Stored optimal layout for `count` circles.
pub fn layout(count: usize) -> Result<PackingLayout> {
    let centers = match count {
        1 => vec![[0.0, 0.0]],
        2..=5 => ring(count, 1.0 - boundary_ring_radius(count), false),
        // Hexagon of radius-1/3 circles; the seven-circle layout adds the center.
        6 => ring(6, 2.0 / 3.0, false),
        7 => ring(6, 2.0 / 3.0, true),
        8 | 9 => ring(count - 1, 1.0 - boundary_ring_radius(count - 1), true),
        10 => TEN_CIRCLES.to_vec(),
        0 => {
            return Err(Error::Unsupported {
                count,
                reason: "at least one UAV is required",
            })
        }
        _ => {
            return Err(Error::Unsupported {
                count,
                reason: "layouts are stored for 1 to 10 UAVs only",
            })
        }
    };
    Ok(PackingLayout::from_centers(centers))
}

/// A broken packing constraint.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Overlap {
        first: usize,
        second: usize,
        spacing: f64,
        required: f64,
    },
    Containment {
        index: usize,
        extent: f64,
    },
}

/// Lists every pair that overlaps and every circle that leaves the unit disk.
pub fn verify_layout(layout: &PackingLayout) -> Vec<Violation> {
    let rho = layout.radius_norm;
    let mut out = Vec::new();
    let c = &layout.centers_norm;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            let spacing = dist(c[i], c[j]);
            if spacing < 2.0 * rho - GEOMETRY_TOL {
                out.push(Violation::Overlap {
                    first: i,
                    second: j,
                    spacing,
                    required: 2.0 * rho,
                });
            }
        }
    }
    for (index, &ci) in c.iter().enumerate() {
        let extent = norm(ci) + rho;
        if extent > 1.0 + GEOMETRY_TOL {
            out.push(Violation::Containment { index, extent });
        }
    }
    out
}

/// Left-hand side of the density-bound inequality in `q`.
pub fn qm_lhs(q: f64, count: usize) -> f64 {
    let arc = (q / 2.0).asin();
    PI / arc * ((q * 3f64.sqrt() + (4.0 - q * q).max(0.0).sqrt()) / q)
        + 12f64.sqrt() * (1.0 - count as f64)
}

/// Largest `q` in (0, 2] with a non-negative left-hand side.
pub fn qm_solve(count: usize) -> Result<f64> {
    if count < 2 {
        return Err(Error::Unsupported {
            count,
            reason: "the density bound needs at least two UAVs",
        });
    }
    if qm_lhs(2.0, count) >= 0.0 {
        return Ok(2.0);
    }
    // The LHS diverges to +∞ as q → 0 and decreases on (0, 2].
    let (mut lo, mut hi) = (1e-6, 2.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if qm_lhs(mid, count) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Upper bound on the normalized coverage radius, `q_m / (2 + q_m)`.
pub fn radius_bound_norm(count: usize) -> Result<f64> {
    qm_solve(count).map(|q| q / (2.0 + q))
}

/// Altitude above which `count` beams of width `beamwidth_deg` must overlap.
pub fn altitude_upper_bound(count: usize, area_radius_m: f64, beamwidth_deg: f64) -> Result<f64> {
    ensure(
        area_radius_m > 0.0,
        "area_radius_m",
        area_radius_m,
        "must be > 0",
    )?;
    check_beamwidth(beamwidth_deg)?;
    let bound = radius_bound_norm(count)?;
    Ok(bound * area_radius_m / (beamwidth_deg.to_radians() / 2.0).tan())
}

/// Altitude whose beam footprint has radius `radius_m`.
pub fn altitude_for_radius(radius_m: f64, beamwidth_deg: f64) -> Result<f64> {
    ensure(radius_m > 0.0, "radius_m", radius_m, "must be > 0")?;
    check_beamwidth(beamwidth_deg)?;
    Ok(radius_m / (beamwidth_deg.to_radians() / 2.0).tan())
}

fn check_beamwidth(beamwidth_deg: f64) -> Result<()> {
    ensure(
        beamwidth_deg > 0.0 && beamwidth_deg < 180.0,
        "beamwidth_deg",
        beamwidth_deg,
        "must lie in (0, 180)",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Radius and total-coverage columns of the published table.
    const TABLE: [(usize, f64, f64); 10] = [
        (1, 1.0, 1.0),
        (2, 0.5, 0.5),
        (3, 0.464, 0.646),
        (4, 0.413, 0.686),
        (5, 0.370, 0.685),
        (6, 0.333, 0.666),
        (7, 0.333, 0.778),
        (8, 0.302, 0.733),
        (9, 0.275, 0.689),
        (10, 0.261, 0.687),
    ];

    #[test]
    fn stored_layouts_match_table() {
        for (m, rho, total) in TABLE {
            let l = layout(m).unwrap();
            assert_eq!(l.count, m);
            assert_eq!(l.centers_norm.len(), m);
            assert!(
                (l.radius_norm - rho).abs() <= 0.002,
                "M={m}: {}",
                l.radius_norm
            );
            assert!((l.total_coverage - total).abs() <= 0.01, "M={m}");
            assert!((l.total_coverage - m as f64 * l.radius_norm.powi(2)).abs() <= 1e-12);
            assert!(l.total_coverage <= 1.0 + 1e-12);
            assert!(
                verify_layout(&l).is_empty(),
                "M={m}: {:?}",
                verify_layout(&l)
            );
        }
    }

    #[test]
    fn radius_non_increasing() {
        let radii: Vec<f64> = (1..=10).map(|m| layout(m).unwrap().radius_norm).collect();
        for w in radii.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn specific_layouts() {
        let one = layout(1).unwrap();
        assert_eq!(one.radius_norm, 1.0);
        assert_eq!(one.centers_norm, vec![[0.0, 0.0]]);

        let three = layout(3).unwrap();
        let rho = 3f64.sqrt() / (2.0 + 3f64.sqrt());
        assert!((three.radius_norm - rho).abs() < 1e-12);
        for c in &three.centers_norm {
            assert!((norm(*c) - (1.0 - rho)).abs() < 1e-12);
        }
        let a0 = three.centers_norm[0][1].atan2(three.centers_norm[0][0]);
        let a1 = three.centers_norm[1][1].atan2(three.centers_norm[1][0]);
        assert!(((a1 - a0).rem_euclid(TAU) - TAU / 3.0).abs() < 1e-12);

        let seven = layout(7).unwrap();
        assert!((seven.radius_norm - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(seven.centers_norm[0], [0.0, 0.0]);
        for c in &seven.centers_norm[1..] {
            assert!((norm(*c) - 2.0 * seven.radius_norm).abs() < 1e-12);
        }
    }

    #[test]
    fn unsupported_counts() {
        assert!(matches!(layout(0), Err(Error::Unsupported { .. })));
        assert!(matches!(
            layout(11),
            Err(Error::Unsupported { count: 11, .. })
        ));
        assert!(matches!(qm_solve(1), Err(Error::Unsupported { .. })));
        assert!(altitude_upper_bound(1, 5000.0, 80.0).is_err());
    }

    #[test]
    fn verify_detects_violations() {
        let overlap = PackingLayout {
            count: 2,
            radius_norm: 0.6,
            centers_norm: vec![[-0.5, 0.0], [0.5, 0.0]],
            total_coverage: 0.72,
        };
        let v = verify_layout(&overlap);
        assert_eq!(
            v.iter()
                .filter(|v| matches!(v, Violation::Overlap { .. }))
                .count(),
            1
        );

        let outside = PackingLayout {
            count: 1,
            radius_norm: 0.3,
            centers_norm: vec![[0.8, 0.0]],
            total_coverage: 0.09,
        };
        assert_eq!(
            verify_layout(&outside),
            vec![Violation::Containment {
                index: 0,
                extent: 0.8 + 0.3
            }]
        );
    }

    #[test]
    fn qm_values() {
        assert!((qm_solve(2).unwrap() - 2.0).abs() < 1e-6);
        assert!((qm_solve(3).unwrap() - 3f64.sqrt()).abs() < 1e-6);
        assert!((radius_bound_norm(2).unwrap() - 0.5).abs() < 1e-6);
        // Equality at q = √3 for three circles.
        assert!(qm_lhs(3f64.sqrt(), 3).abs() < 1e-12);
        assert!(qm_lhs(2.0, 2).abs() < 1e-12);
    }

    #[test]
    fn qm_lhs_decreasing() {
        for m in 2..=10 {
            let mut prev = f64::INFINITY;
            for i in 1..=2000 {
                let v = qm_lhs(2.0 * i as f64 / 2000.0, m);
                assert!(v < prev, "M={m} at step {i}");
                prev = v;
            }
        }
    }

    #[test]
    fn bound_dominates_packing() {
        for m in 2..=10 {
            let bound = radius_bound_norm(m).unwrap();
            assert!(bound >= layout(m).unwrap().radius_norm - 0.002, "M={m}");
        }
        for m in [2, 3] {
            assert!((radius_bound_norm(m).unwrap() - layout(m).unwrap().radius_norm).abs() < 1e-3);
        }
    }

    #[test]
    fn altitude_bound_values() {
        let h = altitude_upper_bound(3, 5000.0, 80.0).unwrap();
        assert!((h - 2766.0).abs() < 1.0, "{h}");
        let h = altitude_upper_bound(2, 5000.0, 90.0).unwrap();
        assert!((h - 2500.0).abs() < 1e-6, "{h}");
        for m in 2..=10 {
            let h = altitude_upper_bound(m, 5000.0, 80.0).unwrap();
            let rho = h * 40f64.to_radians().tan() / 5000.0;
            assert!(rho >= layout(m).unwrap().radius_norm - 0.002);
        }
    }

    #[test]
    fn altitude_for_radius_values() {
        assert!((altitude_for_radius(1000.0, 90.0).unwrap() - 1000.0).abs() < 1e-9);
        assert!((altitude_for_radius(2320.0, 80.0).unwrap() - 2765.0).abs() < 1.0);
        let h = 1234.5;
        let r = h * 40f64.to_radians().tan();
        assert!((altitude_for_radius(r, 80.0).unwrap() - h).abs() <= 1e-9 * h);
        assert!(altitude_for_radius(0.0, 80.0).is_err());
    }
}

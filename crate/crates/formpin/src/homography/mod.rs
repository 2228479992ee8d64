//! Planar homography estimation from point correspondences.
//!
//! The map is a 3x3 matrix acting on homogeneous coordinates with eight
//! degrees of freedom. Two estimation paths are provided and tested
//! against each other: a normalized DLT that extracts the null space of
//! the stacked constraint system via shifted inverse iteration (any number
//! of points, least-squares when overdetermined), and an exact 8x8 solve
//! for minimal four-point samples. [`ransac_estimate`] wraps them in a
//! seeded consensus loop that tolerates mismatched correspondences.
//!
//! All estimators map the *test*-page point of each correspondence onto
//! the *template*-page point.

pub(crate) mod linalg;

use linalg::{mat3_det, mat3_inv, mat3_mul, Mat3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correspond::Correspondence;
use crate::raster::Point;

#[derive(Debug, Error)]
pub enum HomographyError {
    #[error("matrix entries must be finite")]
    NotFinite,
    #[error("matrix is numerically singular (|det| = {det:.3e})")]
    Singular { det: f64 },
    #[error("point maps to infinity (denominator {den:.3e})")]
    PointAtInfinity { den: f64 },
    #[error("need at least {needed} correspondences, got {got}")]
    TooFewCorrespondences { needed: usize, got: usize },
    #[error("minimal solver requires exactly 4 correspondences, got {got}")]
    MinimalSampleSize { got: usize },
    #[error("degenerate point configuration")]
    DegenerateConfiguration,
    #[error("no model reached {required} inliers (best found {found})")]
    MinInliersNotReached { found: usize, required: usize },
}

/// Invertible plane projective transform.
///
/// Stored normalized: `h33 = 1` whenever `|h33| > 1e-8`, otherwise unit
/// Frobenius norm with the largest-magnitude entry positive. The
/// determinant of the normalized matrix always exceeds 1e-12 in absolute
/// value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Homography {
    m: Mat3,
}

impl Homography {
    /// Builds from an arbitrary matrix, normalizing scale and validating
    /// invertibility.
    pub fn from_matrix(m: Mat3) -> Result<Self, HomographyError> {
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(HomographyError::NotFinite);
        }
        let h33 = m[2][2];
        let scale = if h33.abs() > 1e-8 {
            1.0 / h33
        } else {
            let frob = m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
            if frob < 1e-300 {
                return Err(HomographyError::Singular { det: 0.0 });
            }
            // Fix the sign so normalization is unique: largest-magnitude
            // entry (first in row-major order on ties) becomes positive.
            let largest = m
                .iter()
                .flatten()
                .copied()
                .fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
            if largest < 0.0 {
                -1.0 / frob
            } else {
                1.0 / frob
            }
        };
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = m[i][j] * scale;
            }
        }
        if out.iter().flatten().any(|v| !v.is_finite()) {
            return Err(HomographyError::NotFinite);
        }
        let det = mat3_det(&out);
        if det.abs() <= 1e-12 {
            return Err(HomographyError::Singular { det: det.abs() });
        }
        Ok(Homography { m: out })
    }

    pub fn from_row_major(v: [f64; 9]) -> Result<Self, HomographyError> {
        Self::from_matrix([[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]])
    }

    pub fn identity() -> Self {
        Homography {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn translation(dx: f64, dy: f64) -> Self {
        Homography {
            m: [[1.0, 0.0, dx], [0.0, 1.0, dy], [0.0, 0.0, 1.0]],
        }
    }

    pub fn entries(&self) -> Mat3 {
        self.m
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.m;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }

    pub fn det(&self) -> f64 {
        mat3_det(&self.m)
    }

    /// Applies the transform to a point; errors when the point lies on the
    /// line mapped to infinity.
    pub fn apply_point(&self, p: Point) -> Result<Point, HomographyError> {
        let m = &self.m;
        let den = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
        if den.abs() <= 1e-12 {
            return Err(HomographyError::PointAtInfinity { den });
        }
        let x = (m[0][0] * p.x + m[0][1] * p.y + m[0][2]) / den;
        let y = (m[1][0] * p.x + m[1][1] * p.y + m[1][2]) / den;
        Ok(Point::new(x, y))
    }

    pub fn invert(&self) -> Result<Homography, HomographyError> {
        let inv = mat3_inv(&self.m).ok_or(HomographyError::Singular { det: 0.0 })?;
        Homography::from_matrix(inv)
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Homography) -> Result<Homography, HomographyError> {
        Homography::from_matrix(mat3_mul(&self.m, &other.m))
    }
}

/// Consensus-loop tuning; the defaults are what the alignment pipeline
/// uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RansacParams {
    /// Reprojection error below which a correspondence counts as an
    /// inlier, in pixels.
    pub inlier_threshold: f64,
    /// Target probability of having seen at least one all-inlier sample;
    /// drives the adaptive iteration count.
    pub confidence: f64,
    pub max_iterations: usize,
    /// Minimum consensus size for a model to be accepted.
    pub min_inliers: usize,
    pub rng_seed: u64,
}

impl Default for RansacParams {
    fn default() -> Self {
        RansacParams {
            inlier_threshold: 3.0,
            confidence: 0.995,
            max_iterations: 2000,
            min_inliers: 8,
            rng_seed: 7,
        }
    }
}

/// Accepted model plus its consensus statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub homography: Homography,
    /// Per-correspondence inlier flags, same order as the input slice.
    pub inlier_mask: Vec<bool>,
    pub inlier_count: usize,
    /// Mean reprojection error over the inliers; always below the
    /// threshold.
    pub mean_inlier_reproj_error: f64,
    pub iterations_run: usize,
}

/// Distance between the transformed test point and the template point.
pub fn reprojection_error(
    h: &Homography,
    c: &Correspondence,
) -> Result<f64, HomographyError> {
    Ok(h.apply_point(c.test_pt)?.distance(c.template_pt))
}

fn residual(h: &Homography, c: &Correspondence) -> f64 {
    match h.apply_point(c.test_pt) {
        Ok(p) => p.distance(c.template_pt),
        Err(_) => f64::INFINITY,
    }
}

/// Isotropic normalization: centroid to the origin, mean distance to √2.
/// Returns the mapped points and the transform that performs the mapping.
fn hartley_normalize(pts: &[Point]) -> Option<(Vec<Point>, Mat3)> {
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.y).sum::<f64>() / n;
    let mean_dist = pts
        .iter()
        .map(|p| (p.x - cx).hypot(p.y - cy))
        .sum::<f64>()
        / n;
    if mean_dist < 1e-12 {
        return None;
    }
    let s = std::f64::consts::SQRT_2 / mean_dist;
    let t = [[s, 0.0, -s * cx], [0.0, s, -s * cy], [0.0, 0.0, 1.0]];
    let mapped = pts
        .iter()
        .map(|p| Point::new(s * (p.x - cx), s * (p.y - cy)))
        .collect();
    Some((mapped, t))
}

fn accumulate_row(m: &mut [[f64; 9]; 9], r: [f64; 9]) {
    for i in 0..9 {
        for j in 0..9 {
            m[i][j] += r[i] * r[j];
        }
    }
}

fn denormalize(
    h_norm: Mat3,
    t_src: Mat3,
    t_dst: Mat3,
) -> Result<Homography, HomographyError> {
    let t_dst_inv = mat3_inv(&t_dst).ok_or(HomographyError::DegenerateConfiguration)?;
    let h = mat3_mul(&t_dst_inv, &mat3_mul(&h_norm, &t_src));
    Homography::from_matrix(h).map_err(|_| HomographyError::DegenerateConfiguration)
}

fn dlt_points(src: &[Point], dst: &[Point]) -> Result<Homography, HomographyError> {
    let (ns, t_src) =
        hartley_normalize(src).ok_or(HomographyError::DegenerateConfiguration)?;
    let (nd, t_dst) =
        hartley_normalize(dst).ok_or(HomographyError::DegenerateConfiguration)?;
    let mut m = [[0.0f64; 9]; 9];
    let mut rows: Vec<[f64; 9]> = Vec::with_capacity(2 * ns.len());
    for (p, q) in ns.iter().zip(nd.iter()) {
        let (x, y) = (p.x, p.y);
        let (u, v) = (q.x, q.y);
        rows.push([-x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u]);
        rows.push([0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v]);
        accumulate_row(&mut m, rows[rows.len() - 2]);
        accumulate_row(&mut m, rows[rows.len() - 1]);
    }
    let (h_vec, _) =
        linalg::smallest_eigenpair(&m).ok_or(HomographyError::DegenerateConfiguration)?;
    let h_vec = linalg::refine_null_vector(&m, &rows, h_vec);
    // A proper homography leaves exactly one direction in the null space.
    // A second near-zero eigenvalue means the points do not constrain the
    // model (collinear or coincident configurations).
    let trace: f64 = (0..9).map(|i| m[i][i]).sum();
    let lambda2 = linalg::second_smallest_eigenvalue(&m, &h_vec)
        .ok_or(HomographyError::DegenerateConfiguration)?;
    if lambda2 <= 1e-10 * trace.max(1.0) {
        return Err(HomographyError::DegenerateConfiguration);
    }
    let h_norm = [
        [h_vec[0], h_vec[1], h_vec[2]],
        [h_vec[3], h_vec[4], h_vec[5]],
        [h_vec[6], h_vec[7], h_vec[8]],
    ];
    denormalize(h_norm, t_src, t_dst)
}

fn dlt_minimal_points(src: &[Point; 4], dst: &[Point; 4]) -> Result<Homography, HomographyError> {
    let (ns, t_src) =
        hartley_normalize(src).ok_or(HomographyError::DegenerateConfiguration)?;
    let (nd, t_dst) =
        hartley_normalize(dst).ok_or(HomographyError::DegenerateConfiguration)?;
    // Eight unknowns with h33 pinned to 1 in the normalized frame.
    let mut a = [[0.0f64; 8]; 8];
    let mut b = [0.0f64; 8];
    for i in 0..4 {
        let (x, y) = (ns[i].x, ns[i].y);
        let (u, v) = (nd[i].x, nd[i].y);
        a[2 * i] = [x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y];
        b[2 * i] = u;
        a[2 * i + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y];
        b[2 * i + 1] = v;
    }
    let s = linalg::solve_linear(a, b).ok_or(HomographyError::DegenerateConfiguration)?;
    let h_norm = [
        [s[0], s[1], s[2]],
        [s[3], s[4], s[5]],
        [s[6], s[7], 1.0],
    ];
    denormalize(h_norm, t_src, t_dst)
}

/// Least-squares direct linear transform over all correspondences.
///
/// Estimates the homography taking each test point to its template point.
/// Requires at least four pairs in general position; both point sets are
/// Hartley-normalized before the constraint system is solved.
pub fn dlt(correspondences: &[Correspondence]) -> Result<Homography, HomographyError> {
    if correspondences.len() < 4 {
        return Err(HomographyError::TooFewCorrespondences {
            needed: 4,
            got: correspondences.len(),
        });
    }
    let src: Vec<Point> = correspondences.iter().map(|c| c.test_pt).collect();
    let dst: Vec<Point> = correspondences.iter().map(|c| c.template_pt).collect();
    dlt_points(&src, &dst)
}

/// Exact homography through four correspondences via an 8x8 linear solve.
pub fn dlt_minimal(correspondences: &[Correspondence]) -> Result<Homography, HomographyError> {
    if correspondences.len() != 4 {
        return Err(HomographyError::MinimalSampleSize {
            got: correspondences.len(),
        });
    }
    let src = [
        correspondences[0].test_pt,
        correspondences[1].test_pt,
        correspondences[2].test_pt,
        correspondences[3].test_pt,
    ];
    let dst = [
        correspondences[0].template_pt,
        correspondences[1].template_pt,
        correspondences[2].template_pt,
        correspondences[3].template_pt,
    ];
    dlt_minimal_points(&src, &dst)
}

fn dist2(a: Point, b: Point) -> f64 {
    (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y)
}

/// A four-point sample pins down nothing if any three of its template
/// points are (nearly) collinear, judged relative to the sample's spatial
/// extent.
fn template_sample_degenerate(pts: &[Point; 4]) -> bool {
    let mut span2 = 0.0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            span2 = span2.max(dist2(pts[i], pts[j]));
        }
    }
    if span2 < 1e-12 {
        return true;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                let ax = pts[j].x - pts[i].x;
                let ay = pts[j].y - pts[i].y;
                let bx = pts[k].x - pts[i].x;
                let by = pts[k].y - pts[i].y;
                let area = 0.5 * (ax * by - ay * bx).abs();
                if area < 1e-6 * span2 {
                    return true;
                }
            }
        }
    }
    false
}

fn classify(
    correspondences: &[Correspondence],
    h: &Homography,
    threshold: f64,
) -> (Vec<bool>, usize, f64) {
    let mut mask = vec![false; correspondences.len()];
    let mut count = 0usize;
    let mut sum = 0.0f64;
    for (i, c) in correspondences.iter().enumerate() {
        let err = residual(h, c);
        if err < threshold {
            mask[i] = true;
            count += 1;
            sum += err;
        }
    }
    let mean = if count > 0 {
        sum / count as f64
    } else {
        f64::INFINITY
    };
    (mask, count, mean)
}

struct BestModel {
    homography: Homography,
    mask: Vec<bool>,
    count: usize,
    mean: f64,
}

/// Robust estimation by random minimal samples with consensus scoring.
///
/// Runs a seeded, fully deterministic RANSAC loop: draw four distinct
/// correspondences, reject template-side collinear samples, fit exactly,
/// and score by inlier count (ties broken by lower mean inlier error).
/// The iteration budget shrinks adaptively as the best inlier ratio `w`
/// grows, using `log(1-confidence) / log(1-w^4)`, never exceeding
/// `max_iterations`. The winning model is refit with the least-squares
/// DLT on its inliers. Fails unless the best model reaches
/// `max(min_inliers, 4)` inliers.
pub fn ransac_estimate(
    correspondences: &[Correspondence],
    params: &RansacParams,
) -> Result<EstimateReport, HomographyError> {
    assert!(params.inlier_threshold > 0.0, "inlier threshold must be positive");
    assert!(
        params.confidence > 0.0 && params.confidence < 1.0,
        "confidence must be in (0, 1)"
    );
    assert!(params.max_iterations >= 1, "need at least one iteration");

    let n = correspondences.len();
    if n < 4 {
        return Err(HomographyError::TooFewCorrespondences { needed: 4, got: n });
    }
    let required = params.min_inliers.max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let mut best: Option<BestModel> = None;
    let mut limit = params.max_iterations;
    let mut iterations = 0usize;

    while iterations < limit {
        iterations += 1;
        let picks = rand::seq::index::sample(&mut rng, n, 4);
        let mut src = [Point::new(0.0, 0.0); 4];
        let mut dst = [Point::new(0.0, 0.0); 4];
        for (slot, idx) in picks.iter().enumerate() {
            src[slot] = correspondences[idx].test_pt;
            dst[slot] = correspondences[idx].template_pt;
        }
        if template_sample_degenerate(&dst) {
            continue;
        }
        let Ok(h) = dlt_minimal_points(&src, &dst) else {
            continue;
        };
        let (mask, count, mean) = classify(correspondences, &h, params.inlier_threshold);
        let improved = match &best {
            None => count > 0,
            Some(b) => count > b.count || (count == b.count && mean < b.mean),
        };
        if improved {
            best = Some(BestModel {
                homography: h,
                mask,
                count,
                mean,
            });
            let w = count as f64 / n as f64;
            let denom = (1.0 - w.powi(4)).ln();
            let needed = if denom.is_finite() && denom < 0.0 {
                ((1.0 - params.confidence).ln() / denom).ceil() as usize
            } else {
                // Every correspondence is an inlier; no further samples
                // can improve on this.
                0
            };
            limit = limit.min(needed.max(iterations));
        }
    }

    let Some(best) = best else {
        return Err(HomographyError::MinInliersNotReached {
            found: 0,
            required,
        });
    };
    if best.count < required {
        return Err(HomographyError::MinInliersNotReached {
            found: best.count,
            required,
        });
    }

    // Refit on the consensus set: a least-squares fit over all inliers is
    // far better conditioned for extrapolation than any minimal sample.
    // Reclassifying against the refit can recover inliers the crooked
    // minimal model missed, so the refit iterates until the consensus set
    // reaches a fixed point (bounded; alternation is theoretically
    // possible).
    let mut homography = best.homography;
    let mut mask = best.mask;
    let mut count = best.count;
    let mut mean = best.mean;
    for _ in 0..16 {
        let inliers: Vec<Correspondence> = correspondences
            .iter()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(c, _)| c.clone())
            .collect();
        let Ok(refit) = dlt(&inliers) else { break };
        let (mask2, count2, mean2) = classify(correspondences, &refit, params.inlier_threshold);
        if count2 < 4 {
            break;
        }
        homography = refit;
        let stable = mask2 == mask;
        mask = mask2;
        count = count2;
        mean = mean2;
        if stable {
            break;
        }
    }

    Ok(EstimateReport {
        homography,
        inlier_mask: mask,
        inlier_count: count,
        mean_inlier_reproj_error: mean,
        iterations_run: iterations,
    })
}

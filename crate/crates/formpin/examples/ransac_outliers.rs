//! Estimates a homography from correspondences where a third of the pairs
//! are garbage, and shows the consensus step finding exactly the planted
//! inliers.
//!
//! Run with `cargo run --example ransac_outliers`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use formpin::correspond::Correspondence;
use formpin::homography::{ransac_estimate, reprojection_error, Homography, RansacParams};
use formpin::keypoint::TipClass;
use formpin::raster::Point;

fn pair(test: (f64, f64), template: (f64, f64)) -> Correspondence {
    Correspondence {
        template_pt: Point::new(template.0, template.1),
        test_pt: Point::new(test.0, test.1),
        tip: TipClass::Left,
        word_text: String::new(),
    }
}

fn main() {
    let truth = Homography::from_matrix([
        [1.08, -0.09, 40.0],
        [0.09, 1.08, -25.0],
        [1.0e-5, -2.0e-5, 1.0],
    ])
    .unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut corr = Vec::new();
    for _ in 0..40 {
        let p = Point::new(rng.gen_range(50.0..1550.0), rng.gen_range(50.0..2350.0));
        let q = truth.apply_point(p).unwrap();
        corr.push(pair((p.x, p.y), (q.x, q.y)));
    }
    let planted = corr.len();
    while corr.len() < 60 {
        let c = pair(
            (rng.gen_range(50.0..1550.0), rng.gen_range(50.0..2350.0)),
            (rng.gen_range(50.0..1550.0), rng.gen_range(50.0..2350.0)),
        );
        // A random pair can land near the true surface by accident; keep
        // the planted labels unambiguous.
        if reprojection_error(&truth, &c).unwrap() > 10.0 {
            corr.push(c);
        }
    }

    let report = ransac_estimate(&corr, &RansacParams::default()).unwrap();
    let false_negatives = report.inlier_mask[..planted].iter().filter(|&&m| !m).count();
    let false_positives = report.inlier_mask[planted..].iter().filter(|&&m| m).count();
    println!(
        "{} correspondences ({} planted inliers): consensus {}, {} iterations",
        corr.len(),
        planted,
        report.inlier_count,
        report.iterations_run,
    );
    println!(
        "misclassified: {false_negatives} planted pairs lost, {false_positives} outliers admitted"
    );
    println!("mean inlier reprojection error {:.2e} px", report.mean_inlier_reproj_error);

    let est = report.homography.to_row_major();
    let want = truth.to_row_major();
    let worst = (0..9)
        .map(|i| (est[i] - want[i]).abs() / want[i].abs().max(1.0))
        .fold(0.0, f64::max);
    println!("worst relative entry error vs truth: {worst:.2e}");
}

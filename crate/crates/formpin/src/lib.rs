//! Alignment of scanned single-page forms to their blank reference template.
//!
//! A filled, rescanned form differs from its template by a perspective
//! transform (page placement, scanner optics) plus the filled-in content.
//! This crate recovers that transform without any image-gradient feature
//! detector. It relies on structure every printed form already has: the
//! characters of its static text.
//!
//! The pipeline, start to finish:
//!
//! 1. [`raster`] loads both pages, resizes them onto a common canvas and
//!    thresholds them into ink masks.
//! 2. [`ocr`] supplies word text and bounding boxes, either from a
//!    ground-truth sidecar file or an external recognizer subprocess.
//! 3. [`correspond`] pairs template words with test words, disambiguating
//!    repeated words by the bag of words around them.
//! 4. [`keypoint`] turns each matched word into sub-word anchor points:
//!    the extremal ink pixels (left/right/top/bottom tips) of its first
//!    and last characters.
//! 5. [`homography`] estimates the 3x3 projective map from those point
//!    pairs with a normalized DLT inside a seeded RANSAC loop.
//! 6. [`raster::warp_perspective`] resamples the test page into template
//!    coordinates; [`pipeline`] reports an XOR residual and crops annotated
//!    field regions out of the aligned page.
//!
//! [`synth`] renders synthetic form pages with exact word geometry, which
//! gives every stage above a ground-truth oracle; the stress harness in
//! [`pipeline`] sweeps rotation/translation/scale perturbations through the
//! full loop and checks corner accuracy against the known transform.

pub mod correspond;
pub mod homography;
pub mod keypoint;
pub mod ocr;
pub mod pipeline;
pub mod raster;
pub mod synth;

pub use homography::{Homography, RansacParams};
pub use pipeline::{AlignmentReport, PipelineConfig, PipelineError};
pub use raster::{BinaryImage, GrayImage, Point, Rect};

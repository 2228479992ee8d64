//! Connected-component labeling of ink pixels inside a window of a mask.
//!
//! Characters inside an OCR word box are recovered as 8-connected ink
//! components; downstream code picks the leftmost/rightmost of them, so
//! label order and bounding boxes must be deterministic.

use super::{BinaryImage, RasterError, Rect};

/// Result of labeling `region`: a region-local label raster (0 =
/// background, components numbered from 1) plus per-component bounding
/// boxes in absolute image coordinates.
#[derive(Debug, Clone)]
pub struct ComponentLabeling {
    region: Rect,
    labels: Vec<u32>,
    boxes: Vec<Rect>,
}

impl ComponentLabeling {
    pub fn region(&self) -> Rect {
        self.region
    }

    pub fn count(&self) -> usize {
        self.boxes.len()
    }

    /// Bounding box of component `label` (1-based) in image coordinates.
    pub fn bounding_box(&self, label: u32) -> Rect {
        self.boxes[(label - 1) as usize]
    }

    pub fn boxes(&self) -> &[Rect] {
        &self.boxes
    }

    /// Label at an absolute image coordinate inside the region; 0 means
    /// background.
    pub fn label_at(&self, x: u32, y: u32) -> u32 {
        let lx = x as i64 - self.region.x as i64;
        let ly = y as i64 - self.region.y as i64;
        assert!(
            lx >= 0 && ly >= 0 && (lx as u32) < self.region.w && (ly as u32) < self.region.h,
            "coordinate outside labeled region"
        );
        self.labels[ly as usize * self.region.w as usize + lx as usize]
    }

    /// Absolute coordinates of all pixels carrying `label`, in raster
    /// order.
    pub fn pixels(&self, label: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        let mut idx = 0;
        for ly in 0..self.region.h {
            for lx in 0..self.region.w {
                if self.labels[idx] == label {
                    out.push((self.region.x as u32 + lx, self.region.y as u32 + ly));
                }
                idx += 1;
            }
        }
        out
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new() -> Self {
        // Slot 0 is the background placeholder.
        UnionFind { parent: vec![0] }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        // Keeping the smaller root preserves raster-scan discovery order.
        if ra < rb {
            self.parent[rb as usize] = ra;
        } else {
            self.parent[ra as usize] = rb;
        }
    }
}

/// Labels 8-connected ink components within `region`.
///
/// Components are numbered 1..=count in order of their first pixel in a
/// top-to-bottom, left-to-right scan of the region. Connectivity is
/// evaluated inside the region only: ink that continues past the window
/// edge is clipped.
pub fn connected_components(
    mask: &BinaryImage,
    region: Rect,
) -> Result<ComponentLabeling, RasterError> {
    if !region.fits_in(mask.width(), mask.height()) {
        return Err(RasterError::RegionOutOfBounds {
            rect: region,
            w: mask.width(),
            h: mask.height(),
        });
    }
    let rw = region.w as usize;
    let rh = region.h as usize;
    let mut labels = vec![0u32; rw * rh];
    let mut uf = UnionFind::new();

    // First pass: provisional labels, merging with the four already-seen
    // neighbors (west, northwest, north, northeast).
    for ly in 0..rh {
        let iy = region.y as u32 + ly as u32;
        for lx in 0..rw {
            let ix = region.x as u32 + lx as u32;
            if mask.get(ix, iy) == 0 {
                continue;
            }
            let idx = ly * rw + lx;
            let mut neighbor = 0u32;
            let consider = |lab: u32, uf: &mut UnionFind, neighbor: &mut u32| {
                if lab == 0 {
                    return;
                }
                if *neighbor == 0 {
                    *neighbor = lab;
                } else if lab != *neighbor {
                    uf.union(lab, *neighbor);
                }
            };
            if lx > 0 {
                consider(labels[idx - 1], &mut uf, &mut neighbor);
            }
            if ly > 0 {
                let up = idx - rw;
                if lx > 0 {
                    consider(labels[up - 1], &mut uf, &mut neighbor);
                }
                consider(labels[up], &mut uf, &mut neighbor);
                if lx + 1 < rw {
                    consider(labels[up + 1], &mut uf, &mut neighbor);
                }
            }
            labels[idx] = if neighbor == 0 { uf.make() } else { neighbor };
        }
    }

    // Second pass: resolve each provisional label to its root, then
    // renumber roots by first raster-scan appearance.
    let mut remap = vec![0u32; uf.parent.len()];
    let mut boxes: Vec<Rect> = Vec::new();
    let mut next = 0u32;
    for ly in 0..rh {
        for lx in 0..rw {
            let idx = ly * rw + lx;
            if labels[idx] == 0 {
                continue;
            }
            let root = uf.find(labels[idx]);
            if remap[root as usize] == 0 {
                next += 1;
                remap[root as usize] = next;
                boxes.push(Rect::new(
                    region.x + lx as i32,
                    region.y + ly as i32,
                    1,
                    1,
                ));
            }
            let label = remap[root as usize];
            labels[idx] = label;
            let b = &mut boxes[(label - 1) as usize];
            let ax = region.x + lx as i32;
            let ay = region.y + ly as i32;
            let x1 = b.x.min(ax);
            let y1 = b.y.min(ay);
            let x2 = (b.x + b.w as i32).max(ax + 1);
            let y2 = (b.y + b.h as i32).max(ay + 1);
            *b = Rect::new(x1, y1, (x2 - x1) as u32, (y2 - y1) as u32);
        }
    }

    Ok(ComponentLabeling {
        region,
        labels,
        boxes,
    })
}

//! Turning resolution and landmark attachment.
//!
//! Residual shapes left by the scans are the places where corridors meet.
//! Each one that touches the skeleton in at least two places is eroded layer
//! by layer to find a single centre pixel, which becomes a turning node and is
//! wired to the touching corridor ends with straight pixel lines.

use crate::error::{Error, Result};
use crate::geom::{bresenham_line, PixelCoord, Side};
use crate::mask::{GridMask, PixelClass};
use crate::medial::{CorridorParams, Skeleton};
use crate::raster::{centroid, connected_components, nearest_to, Connectivity};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurningNode {
    pub center: PixelCoord,
    /// One line per touching corridor, from `center` to the corridor pixel.
    pub connectors: Vec<Vec<PixelCoord>>,
    /// Set when erosion never produced an interior pixel and the centre is
    /// the rounded centroid instead.
    pub fallback: bool,
}

/// Outcome of eroding one shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShapeCenter {
    pub pixel: PixelCoord,
    pub fallback: bool,
}

/// Peels border layers off `shape` and returns the deepest pixel whose 8
/// neighbours all lie in the shape at that depth (smallest `(y, x)` among
/// equals). Shapes that never have such a pixel fall back to the shape pixel
/// nearest the centroid.
pub fn erode_to_center(shape: &[PixelCoord]) -> Option<ShapeCenter> {
    if shape.is_empty() {
        return None;
    }
    let mut current: BTreeSet<PixelCoord> = shape.iter().copied().collect();
    let mut best: Option<PixelCoord> = None;
    loop {
        let (interior, border): (Vec<PixelCoord>, Vec<PixelCoord>) = current
            .iter()
            .partition(|p| p.neighbors8().iter().all(|n| current.contains(n)));
        match interior.first() {
            // BTreeSet iteration is raster order, so the first is the smallest (y, x)
            Some(&p) => best = Some(p),
            None => break,
        }
        for p in border {
            current.remove(&p);
        }
    }
    Some(match best {
        Some(pixel) => ShapeCenter {
            pixel,
            fallback: false,
        },
        None => ShapeCenter {
            pixel: nearest_to(shape, centroid(shape))?,
            fallback: true,
        },
    })
}

/// Skeleton pixels touching `shape`, grouped into 8-connected clusters.
fn touching_clusters(skeleton: &Skeleton, shape: &[PixelCoord]) -> Vec<Vec<PixelCoord>> {
    let members: BTreeSet<PixelCoord> = shape.iter().copied().collect();
    let touching: BTreeSet<PixelCoord> = shape
        .iter()
        .flat_map(|p| p.neighbors8())
        .filter(|n| !members.contains(n) && skeleton.contains(*n))
        .collect();
    let mut clusters = Vec::new();
    let mut left = touching;
    while let Some(&seed) = left.iter().next() {
        left.remove(&seed);
        let mut cluster = vec![seed];
        let mut i = 0;
        while i < cluster.len() {
            let cur = cluster[i];
            for n in cur.neighbors8() {
                if left.remove(&n) {
                    cluster.push(n);
                }
            }
            i += 1;
        }
        cluster.sort();
        clusters.push(cluster);
    }
    clusters
}

/// Replaces every qualifying residual shape with a turning node and its
/// connectors. Shapes touching fewer than two separate skeleton pieces are
/// dropped into `removed`.
pub fn resolve_turnings(skeleton: &Skeleton) -> (Vec<TurningNode>, Skeleton) {
    let mut updated = skeleton.clone();
    let mut nodes = Vec::new();
    for shape in &skeleton.residual_shapes {
        let clusters = touching_clusters(skeleton, shape);
        if clusters.len() < 2 {
            updated.removed.extend(shape.iter().copied());
            continue;
        }
        let Some(center) = erode_to_center(shape) else {
            continue;
        };
        let origin = (f64::from(center.pixel.x), f64::from(center.pixel.y));
        let connectors: Vec<Vec<PixelCoord>> = clusters
            .iter()
            .filter_map(|c| nearest_to(c, origin))
            .map(|target| bresenham_line(center.pixel, target))
            .collect();
        for line in &connectors {
            updated.pixels.extend(line.iter().copied());
        }
        updated
            .removed
            .extend(shape.iter().filter(|p| !updated.pixels.contains(p)).copied());
        nodes.push(TurningNode {
            center: center.pixel,
            connectors,
            fallback: center.fallback,
        });
    }
    updated.residual_shapes.clear();
    let keep: BTreeSet<PixelCoord> = nodes.iter().map(|n| n.center).collect();
    thin(&mut updated.pixels, &keep);
    let pixels = &updated.pixels;
    updated.removed.retain(|p| !pixels.contains(p));
    (nodes, updated)
}

/// Drops corner pixels that do not carry 8-connectivity: a pixel with at least
/// two skeleton neighbours that are all mutually 8-connected without it. Keeps
/// one-pixel-wide lines walkable without stray corner pixels.
pub fn thin(pixels: &mut BTreeSet<PixelCoord>, keep: &BTreeSet<PixelCoord>) {
    loop {
        let mut changed = false;
        let snapshot: Vec<PixelCoord> = pixels.iter().copied().collect();
        for p in snapshot {
            if keep.contains(&p) {
                continue;
            }
            let nbrs: Vec<PixelCoord> = p
                .neighbors8()
                .into_iter()
                .filter(|n| pixels.contains(n))
                .collect();
            if nbrs.len() < 2 || !single_cluster(&nbrs) || !is_corner(p, pixels) {
                continue;
            }
            pixels.remove(&p);
            changed = true;
        }
        if !changed {
            break;
        }
    }
}

/// Has both a horizontal and a vertical 4-neighbour, so removing it cannot
/// shorten a line end.
fn is_corner(p: PixelCoord, pixels: &BTreeSet<PixelCoord>) -> bool {
    let horizontal = pixels.contains(&p.offset(-1, 0)) || pixels.contains(&p.offset(1, 0));
    let vertical = pixels.contains(&p.offset(0, -1)) || pixels.contains(&p.offset(0, 1));
    horizontal && vertical
}

fn single_cluster(pts: &[PixelCoord]) -> bool {
    let mut reached = vec![false; pts.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..pts.len() {
            if !reached[j] && pts[i].is_adjacent8(pts[j]) {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoorLandmark {
    /// Skeleton pixel the door is attached to.
    pub pixel: PixelCoord,
    pub side: Side,
    pub is_target: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandmarkSet {
    pub doors: Vec<DoorLandmark>,
    pub start: PixelCoord,
    pub end: PixelCoord,
}

impl LandmarkSet {
    pub fn target(&self) -> Option<&DoorLandmark> {
        self.doors.iter().find(|d| d.is_target)
    }
}

/// Attaches door hits, the target door and the start marker to skeleton
/// pixels.
///
/// Hits are grouped by the door region they saw; each region keeps the one
/// hit whose skeleton pixel is nearest the region centroid.
pub fn attach_landmarks(
    skeleton: &Skeleton,
    mask: &GridMask,
    params: &CorridorParams,
) -> Result<LandmarkSet> {
    if skeleton.pixels.is_empty() {
        return Err(Error::NoNavigableCorridor);
    }
    let w = mask.width();
    let door_regions = connected_components(w, mask.height(), Connectivity::Four, |p| {
        mask.get(p) == PixelClass::Door
    });
    let target_regions = connected_components(w, mask.height(), Connectivity::Four, |p| {
        mask.get(p) == PixelClass::TargetDoor
    });
    let mut region_of: BTreeMap<PixelCoord, usize> = BTreeMap::new();
    let regions: Vec<(&Vec<PixelCoord>, bool)> = door_regions
        .iter()
        .map(|r| (r, false))
        .chain(target_regions.iter().map(|r| (r, true)))
        .collect();
    for (i, (r, _)) in regions.iter().enumerate() {
        for p in r.iter() {
            region_of.insert(*p, i);
        }
    }

    // region -> candidate (skeleton pixel, side)
    let mut candidates: BTreeMap<usize, Vec<(PixelCoord, Side)>> = BTreeMap::new();
    for hit in &skeleton.hits {
        if hit.door_hits.is_empty() {
            continue;
        }
        let pixel = if skeleton.contains(hit.center) {
            hit.center
        } else {
            let c = (f64::from(hit.center.x), f64::from(hit.center.y));
            match nearest_to(&skeleton.pixels, c) {
                Some(p) => p,
                None => continue,
            }
        };
        for dh in &hit.door_hits {
            if let Some(&region) = region_of.get(&dh.door_pixel) {
                candidates.entry(region).or_default().push((pixel, dh.side));
            }
        }
    }

    let mut doors = Vec::new();
    for (region, cands) in candidates {
        let (pixels, is_target) = regions[region];
        let c = centroid(pixels);
        let best = cands
            .iter()
            .min_by(|a, b| {
                crate::raster::dist_sq_to(a.0, c)
                    .total_cmp(&crate::raster::dist_sq_to(b.0, c))
                    .then(a.0.cmp(&b.0))
                    .then(a.1.cmp(&b.1))
            })
            .copied();
        if let Some((pixel, side)) = best {
            doors.push(DoorLandmark {
                pixel,
                side,
                is_target,
            });
        }
    }
    doors.sort_by(|a, b| a.pixel.cmp(&b.pixel).then(a.side.cmp(&b.side)));

    let end = doors
        .iter()
        .find(|d| d.is_target)
        .map(|d| d.pixel)
        .ok_or(Error::TargetDoorUnreachable)?;

    let start_regions = mask.regions(PixelClass::StartMarker);
    let start_region = start_regions.first().ok_or(Error::StartNotOnMainPath)?;
    let c = centroid(start_region);
    let start = nearest_to(&skeleton.pixels, c).ok_or(Error::StartNotOnMainPath)?;
    if crate::raster::dist_sq_to(start, c) > f64::from(params.max_width).powi(2) {
        return Err(Error::StartNotOnMainPath);
    }

    Ok(LandmarkSet { doors, start, end })
}

//! Corridor centre extraction by border-pair scanning.
//!
//! Each row (and then each column) of the mask is split into maximal runs of
//! walkable pixels. A run is one pair of facing borders. Runs narrower than
//! `min_width` are erased, runs wider than `max_width` are left for junction
//! resolution, and every other run contributes its midpoint as a skeleton
//! pixel. While a run is measured, the pixels just beyond each end are probed
//! for doors.

use crate::error::{Error, Result};
use crate::geom::{Axis, PixelCoord, Side};
use crate::mask::{GridMask, PixelClass};
use crate::raster::{connected_components, Connectivity};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Corridor width gates and door probe length, all in pixels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorridorParams {
    pub min_width: u32,
    pub max_width: u32,
    pub door_probe: u32,
}

impl CorridorParams {
    /// Door probe defaults to `max_width`.
    pub fn new(min_width: u32, max_width: u32) -> Self {
        Self {
            min_width,
            max_width,
            door_probe: max_width,
        }
    }

    pub fn with_door_probe(mut self, door_probe: u32) -> Self {
        self.door_probe = door_probe;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_width < 1 {
            return Err(Error::Params("min_width must be at least 1".into()));
        }
        if self.min_width >= self.max_width {
            return Err(Error::Params(format!(
                "min_width {} must be below max_width {}",
                self.min_width, self.max_width
            )));
        }
        if self.door_probe < 1 {
            return Err(Error::Params("door_probe must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for CorridorParams {
    fn default() -> Self {
        CorridorParams::new(8, 60)
    }
}

/// Border pixels in raster order.
pub type BorderList = Vec<PixelCoord>;

/// Walkable pixels with at least one non-walkable 8-neighbour. Pixels outside
/// the image count as non-walkable.
pub fn find_border_pixels(mask: &GridMask) -> BorderList {
    mask.pixels()
        .filter(|(p, c)| {
            c.is_walkable() && p.neighbors8().iter().any(|&n| !mask.is_walkable(n))
        })
        .map(|(p, _)| p)
        .collect()
}

/// A door seen from a run endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoorHit {
    pub side: Side,
    pub is_target: bool,
    /// First door pixel met by the probe.
    pub door_pixel: PixelCoord,
}

/// One measured run with its centre.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanHit {
    pub center: PixelCoord,
    pub axis: Axis,
    /// `(near, far)` border pixels: left/right for row scans, top/bottom for
    /// column scans.
    pub span: (PixelCoord, PixelCoord),
    pub door_hits: Vec<DoorHit>,
}

impl ScanHit {
    pub fn width(&self) -> u32 {
        let (a, b) = self.span;
        ((b.x - a.x) + (b.y - a.y)) as u32 + 1
    }
}

/// Output of a single-axis scan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxisScan {
    pub hits: Vec<ScanHit>,
    /// Pixels of runs below `min_width`.
    pub narrow: BTreeSet<PixelCoord>,
    /// Non-centre pixels of runs inside the width window.
    pub swept: BTreeSet<PixelCoord>,
}

impl AxisScan {
    /// Everything this scan marks for removal.
    pub fn removed(&self) -> BTreeSet<PixelCoord> {
        self.narrow.union(&self.swept).copied().collect()
    }
}

/// Scans every row (`Axis::Vertical`) or every column (`Axis::Horizontal`).
pub fn scan_axis(mask: &GridMask, params: &CorridorParams, axis: Axis) -> AxisScan {
    let (lines, len) = match axis {
        Axis::Vertical => (mask.height() as i32, mask.width() as i32),
        Axis::Horizontal => (mask.width() as i32, mask.height() as i32),
    };
    // (line, position) -> pixel
    let at = |line: i32, pos: i32| match axis {
        Axis::Vertical => PixelCoord::new(pos, line),
        Axis::Horizontal => PixelCoord::new(line, pos),
    };
    let (back, fwd) = match axis {
        Axis::Vertical => ((Side::Left, (-1, 0)), (Side::Right, (1, 0))),
        Axis::Horizontal => ((Side::Top, (0, -1)), (Side::Bottom, (0, 1))),
    };

    let mut out = AxisScan::default();
    for line in 0..lines {
        let mut pos = 0;
        while pos < len {
            if !mask.is_walkable(at(line, pos)) {
                pos += 1;
                continue;
            }
            let start = pos;
            while pos < len && mask.is_walkable(at(line, pos)) {
                pos += 1;
            }
            let end = pos - 1;
            let width = (end - start + 1) as u32;
            if width < params.min_width {
                out.narrow.extend((start..=end).map(|p| at(line, p)));
            } else if width <= params.max_width {
                let mid = start + (end - start) / 2;
                let near = at(line, start);
                let far = at(line, end);
                let mut door_hits = probe(mask, near, back, params.door_probe);
                door_hits.extend(probe(mask, far, fwd, params.door_probe));
                out.swept
                    .extend((start..=end).filter(|&p| p != mid).map(|p| at(line, p)));
                out.hits.push(ScanHit {
                    center: at(line, mid),
                    axis,
                    span: (near, far),
                    door_hits,
                });
            }
        }
    }
    out
}

/// Walks `distance` pixels from `from` in `dir`, reporting the first plain
/// door and the first target door seen.
fn probe(mask: &GridMask, from: PixelCoord, (side, (dx, dy)): (Side, (i32, i32)), distance: u32) -> Vec<DoorHit> {
    let mut hits = Vec::new();
    let (mut door, mut target) = (false, false);
    for k in 1..=distance as i32 {
        let p = from.offset(dx * k, dy * k);
        if !mask.in_bounds(p) {
            break;
        }
        match mask.get(p) {
            PixelClass::Door if !door => {
                door = true;
                hits.push(DoorHit {
                    side,
                    is_target: false,
                    door_pixel: p,
                });
            }
            PixelClass::TargetDoor if !target => {
                target = true;
                hits.push(DoorHit {
                    side,
                    is_target: true,
                    door_pixel: p,
                });
            }
            _ => {}
        }
        if door && target {
            break;
        }
    }
    hits
}

/// Centre pixels from both scans plus the regions no scan could measure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Skeleton {
    pub pixels: BTreeSet<PixelCoord>,
    /// 8-connected walkable regions that are neither centres nor removed,
    /// each in raster order, ordered by first pixel.
    pub residual_shapes: Vec<Vec<PixelCoord>>,
    pub removed: BTreeSet<PixelCoord>,
    /// Scan hits whose centre survived, row scan first.
    pub hits: Vec<ScanHit>,
}

impl Skeleton {
    pub fn contains(&self, p: PixelCoord) -> bool {
        self.pixels.contains(&p)
    }

    /// Skeleton pixels among the 8 neighbours of `p`, in N..NW order.
    pub fn neighbors(&self, p: PixelCoord) -> impl Iterator<Item = PixelCoord> + '_ {
        p.neighbors8().into_iter().filter(move |n| self.pixels.contains(n))
    }
}

/// Runs both scans and merges them.
///
/// A pixel inside a run narrower than `min_width` in either direction never
/// becomes a centre, so necks stay empty.
pub fn skeletonize(mask: &GridMask, params: &CorridorParams) -> Result<Skeleton> {
    params.validate()?;
    let rows = scan_axis(mask, params, Axis::Vertical);
    let cols = scan_axis(mask, params, Axis::Horizontal);

    let narrow: BTreeSet<PixelCoord> = rows.narrow.union(&cols.narrow).copied().collect();
    let hits: Vec<ScanHit> = rows
        .hits
        .into_iter()
        .chain(cols.hits)
        .filter(|h| !narrow.contains(&h.center))
        .collect();
    let pixels: BTreeSet<PixelCoord> = hits.iter().map(|h| h.center).collect();
    if pixels.is_empty() {
        return Err(Error::NoNavigableCorridor);
    }
    let removed: BTreeSet<PixelCoord> = narrow
        .iter()
        .chain(rows.swept.iter())
        .chain(cols.swept.iter())
        .filter(|p| !pixels.contains(p))
        .copied()
        .collect();

    let residual_shapes =
        connected_components(mask.width(), mask.height(), Connectivity::Eight, |p| {
            mask.is_walkable(p) && !pixels.contains(&p) && !removed.contains(&p)
        });

    Ok(Skeleton {
        pixels,
        residual_shapes,
        removed,
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corridor_mask(w: usize, h: usize, rects: &[(i32, i32, i32, i32)]) -> GridMask {
        let mut m = GridMask::filled(w, h, PixelClass::Background).unwrap();
        for &(x0, y0, x1, y1) in rects {
            m.fill_rect(x0, y0, x1, y1, PixelClass::Path);
        }
        m
    }

    #[test]
    fn all_path_3x3_is_border_except_middle() {
        // the middle pixel has eight in-bounds Path neighbours
        let m = GridMask::filled(3, 3, PixelClass::Path).unwrap();
        let border = find_border_pixels(&m);
        assert_eq!(border.len(), 8);
        assert!(!border.contains(&PixelCoord::new(1, 1)));
    }

    #[test]
    fn interior_pixel_is_not_border() {
        // 5x5 path with a background ring: only (2,2) has an all-path neighbourhood
        let mut m = GridMask::filled(5, 5, PixelClass::Background).unwrap();
        m.fill_rect(1, 1, 3, 3, PixelClass::Path);
        let border = find_border_pixels(&m);
        assert_eq!(border.len(), 8);
        assert!(!border.contains(&PixelCoord::new(2, 2)));
        let mut sorted = border.clone();
        sorted.sort();
        assert_eq!(border, sorted, "raster order");
    }

    #[test]
    fn start_marker_is_walkable_for_borders() {
        let mut m = GridMask::filled(5, 5, PixelClass::Background).unwrap();
        m.fill_rect(1, 1, 3, 3, PixelClass::Path);
        m.set(PixelCoord::new(2, 1), PixelClass::StartMarker);
        let border = find_border_pixels(&m);
        assert_eq!(border.len(), 8);
    }

    #[test]
    fn odd_run_centre() {
        let m = corridor_mask(80, 15, &[(10, 7, 14, 7)]);
        let scan = scan_axis(&m, &CorridorParams::new(3, 40), Axis::Vertical);
        assert_eq!(scan.hits.len(), 1);
        let hit = &scan.hits[0];
        assert_eq!(hit.center, PixelCoord::new(12, 7));
        assert_eq!(hit.span, (PixelCoord::new(10, 7), PixelCoord::new(14, 7)));
        assert_eq!(hit.width(), 5);
        assert!(scan.narrow.is_empty());
        assert_eq!(scan.swept.len(), 4);
    }

    #[test]
    fn even_run_takes_lower_median() {
        let m = corridor_mask(30, 3, &[(4, 1, 9, 1)]);
        let scan = scan_axis(&m, &CorridorParams::new(3, 40), Axis::Vertical);
        assert_eq!(scan.hits[0].center, PixelCoord::new(6, 1));
    }

    #[test]
    fn narrow_run_is_removed() {
        let m = corridor_mask(80, 15, &[(10, 7, 11, 7)]);
        let scan = scan_axis(&m, &CorridorParams::new(3, 40), Axis::Vertical);
        assert!(scan.hits.is_empty());
        assert_eq!(
            scan.narrow.iter().copied().collect::<Vec<_>>(),
            vec![PixelCoord::new(10, 7), PixelCoord::new(11, 7)]
        );
    }

    #[test]
    fn wide_run_is_deferred() {
        let m = corridor_mask(80, 15, &[(10, 7, 70, 7)]);
        let scan = scan_axis(&m, &CorridorParams::new(3, 40), Axis::Vertical);
        assert!(scan.hits.is_empty());
        assert!(scan.narrow.is_empty());
        assert!(scan.swept.is_empty());
    }

    #[test]
    fn door_probe_left() {
        let mut m = corridor_mask(80, 15, &[(10, 7, 14, 7)]);
        m.set(PixelCoord::new(9, 7), PixelClass::Door);
        let scan = scan_axis(&m, &CorridorParams::new(3, 40), Axis::Vertical);
        assert_eq!(
            scan.hits[0].door_hits,
            vec![DoorHit {
                side: Side::Left,
                is_target: false,
                door_pixel: PixelCoord::new(9, 7)
            }]
        );
    }

    #[test]
    fn door_probe_respects_distance_and_kind() {
        let mut m = corridor_mask(60, 40, &[(20, 10, 20, 20)]);
        // target 4 px above the top end, plain door 6 px below the bottom end
        m.set(PixelCoord::new(20, 6), PixelClass::TargetDoor);
        m.set(PixelCoord::new(20, 26), PixelClass::Door);
        let params = CorridorParams::new(3, 40).with_door_probe(5);
        let scan = scan_axis(&m, &params, Axis::Horizontal);
        assert_eq!(scan.hits.len(), 1);
        assert_eq!(scan.hits[0].center, PixelCoord::new(20, 15));
        assert_eq!(
            scan.hits[0].door_hits,
            vec![DoorHit {
                side: Side::Top,
                is_target: true,
                door_pixel: PixelCoord::new(20, 6)
            }]
        );
        let scan = scan_axis(&m, &params.with_door_probe(6), Axis::Horizontal);
        assert_eq!(scan.hits[0].door_hits.len(), 2);
        assert_eq!(scan.hits[0].door_hits[1].side, Side::Bottom);
    }

    #[test]
    fn straight_corridor_is_one_centre_row() {
        // 100 x 20 horizontal corridor at rows 40..=59
        let m = corridor_mask(140, 100, &[(20, 40, 119, 59)]);
        let sk = skeletonize(&m, &CorridorParams::new(3, 40)).unwrap();
        assert_eq!(sk.pixels.len(), 100);
        assert!(sk.pixels.iter().all(|p| p.y == 49));
        assert!(sk.residual_shapes.is_empty());
        assert_eq!(sk.removed.len(), 100 * 19);
    }

    #[test]
    fn plus_crossing_leaves_one_residual_shape() {
        let m = corridor_mask(
            200,
            200,
            &[(10, 90, 189, 109), (90, 10, 109, 189)],
        );
        let sk = skeletonize(&m, &CorridorParams::new(3, 40)).unwrap();
        assert_eq!(sk.residual_shapes.len(), 1);
        let shape = &sk.residual_shapes[0];
        assert_eq!(shape.len(), 400);
        assert_eq!(shape[0], PixelCoord::new(90, 90));
        // two straight segments, split by the crossing
        let row: Vec<_> = sk.pixels.iter().filter(|p| p.y == 99).collect();
        let col: Vec<_> = sk.pixels.iter().filter(|p| p.x == 99).collect();
        assert_eq!(row.len() + col.len(), sk.pixels.len());
        assert_eq!(row.len(), 160);
        assert_eq!(col.len(), 160);
    }

    #[test]
    fn too_narrow_everywhere() {
        let m = corridor_mask(50, 20, &[(5, 5, 44, 6)]);
        assert!(matches!(
            skeletonize(&m, &CorridorParams::new(3, 40)),
            Err(Error::NoNavigableCorridor)
        ));
    }

    #[test]
    fn invalid_params() {
        let m = corridor_mask(10, 10, &[(0, 0, 9, 9)]);
        assert!(matches!(
            skeletonize(&m, &CorridorParams::new(5, 5)),
            Err(Error::Params(_))
        ));
        assert!(CorridorParams::new(0, 5).validate().is_err());
        assert!(CorridorParams::new(1, 5).with_door_probe(0).validate().is_err());
    }

    #[test]
    fn neck_never_holds_centres() {
        // corridor rows 40..=59 with a 4 px neck for x in 80..=109
        let mut m = corridor_mask(200, 100, &[(10, 40, 79, 59), (110, 40, 189, 59)]);
        m.fill_rect(80, 48, 109, 51, PixelClass::Path);
        let sk = skeletonize(&m, &CorridorParams::new(8, 60)).unwrap();
        assert!(sk.pixels.iter().all(|p| !(80..=109).contains(&p.x)));
    }
}

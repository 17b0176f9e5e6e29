//! Connected-component labelling on boolean rasters.

use crate::geom::PixelCoord;
use std::collections::VecDeque;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

/// Components of the pixels where `member` holds. Each component is sorted in
/// raster order and the components are ordered by their first pixel.
pub fn connected_components<F>(
    width: usize,
    height: usize,
    connectivity: Connectivity,
    member: F,
) -> Vec<Vec<PixelCoord>>
where
    F: Fn(PixelCoord) -> bool,
{
    let mut seen = vec![false; width * height];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for y in 0..height {
        for x in 0..width {
            let idx = y * width + x;
            let p = PixelCoord::new(x as i32, y as i32);
            if seen[idx] || !member(p) {
                continue;
            }
            seen[idx] = true;
            queue.push_back(p);
            let mut comp = Vec::new();
            while let Some(cur) = queue.pop_front() {
                comp.push(cur);
                let mut visit = |n: PixelCoord| {
                    if n.x < 0 || n.y < 0 || n.x as usize >= width || n.y as usize >= height {
                        return;
                    }
                    let ni = n.y as usize * width + n.x as usize;
                    if !seen[ni] && member(n) {
                        seen[ni] = true;
                        queue.push_back(n);
                    }
                };
                match connectivity {
                    Connectivity::Four => cur.neighbors4().into_iter().for_each(&mut visit),
                    Connectivity::Eight => cur.neighbors8().into_iter().for_each(&mut visit),
                }
            }
            comp.sort();
            out.push(comp);
        }
    }
    out
}

/// Mean position of a non-empty pixel set.
pub fn centroid(pixels: &[PixelCoord]) -> (f64, f64) {
    let n = pixels.len() as f64;
    let (sx, sy) = pixels.iter().fold((0.0, 0.0), |(sx, sy), p| {
        (sx + f64::from(p.x), sy + f64::from(p.y))
    });
    (sx / n, sy / n)
}

/// Squared distance from a real-valued point to a pixel centre.
pub(crate) fn dist_sq_to(p: PixelCoord, (cx, cy): (f64, f64)) -> f64 {
    let dx = f64::from(p.x) - cx;
    let dy = f64::from(p.y) - cy;
    dx * dx + dy * dy
}

/// The pixel of `candidates` closest to `target`; ties go to raster order.
pub fn nearest_to<'a, I>(candidates: I, target: (f64, f64)) -> Option<PixelCoord>
where
    I: IntoIterator<Item = &'a PixelCoord>,
{
    candidates.into_iter().copied().min_by(|a, b| {
        dist_sq_to(*a, target)
            .total_cmp(&dist_sq_to(*b, target))
            .then(a.cmp(b))
    })
}

//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use navmap::directions::{direction_for_angle, triangle_angle};
use navmap::doors::TravelSide;
use navmap::graph::{NavGraph, NodeKind};
use navmap::mask::{ColorMap, GridMask, PixelClass};
use navmap::pipeline::{analyze_file, Analysis};
use navmap::{CorridorParams, PixelCoord};
use rand::{Rng, RngExt};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use std::path::PathBuf;

pub const FIXTURES: [&str; 5] = ["lshape", "plus", "loop", "zigzag", "westward"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.png"))
}

pub fn analyze_fixture(name: &str) -> Analysis {
    analyze_file(&fixture_path(name), CorridorParams::default(), &ColorMap::default(), 3)
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

// ---------------------------------------------------------------- masks

pub fn mask_with(width: usize, height: usize, rects: &[(i32, i32, i32, i32, PixelClass)]) -> GridMask {
    let mut m = GridMask::filled(width, height, PixelClass::Background).unwrap();
    for &(x0, y0, x1, y1, c) in rects {
        m.fill_rect(x0, y0, x1, y1, c);
    }
    m
}

/// Copy of `mask` shifted by `(dx, dy)` on a larger canvas.
pub fn translated(mask: &GridMask, dx: i32, dy: i32) -> GridMask {
    let mut out = GridMask::filled(
        mask.width() + dx as usize,
        mask.height() + dy as usize,
        PixelClass::Background,
    )
    .unwrap();
    for (p, c) in mask.pixels() {
        out.set(p.offset(dx, dy), c);
    }
    out
}

/// 512x512 map with one to three axis-aligned bars of a common width.
pub fn random_corridor_mask<R: Rng>(rng: &mut R, width: i32) -> GridMask {
    let mut rects = Vec::new();
    let bars = rng.random_range(1..=3);
    for _ in 0..bars {
        let len = rng.random_range(120..=400);
        let along = rng.random_range(10..=(500 - len));
        let across = rng.random_range(10..=(500 - width));
        if rng.random_bool(0.5) {
            rects.push((along, across, along + len - 1, across + width - 1, PixelClass::Path));
        } else {
            rects.push((across, along, across + width - 1, along + len - 1, PixelClass::Path));
        }
    }
    mask_with(512, 512, &rects)
}

// ---------------------------------------------------------------- distance transform

/// Exact squared Euclidean distance from each walkable pixel to the nearest
/// non-walkable pixel, counting everything outside the image as
/// non-walkable. Two-pass lower-envelope method.
pub fn squared_edt(mask: &GridMask) -> Vec<f64> {
    let (w, h) = (mask.width() + 2, mask.height() + 2);
    let inf = 1e20;
    // padded grid so the image border is a wall
    let mut f = vec![0.0; w * h];
    for (p, c) in mask.pixels() {
        if c.is_walkable() {
            f[(p.y as usize + 1) * w + p.x as usize + 1] = inf;
        }
    }
    let mut g = vec![0.0; w * h];
    for x in 0..w {
        let col: Vec<f64> = (0..h).map(|y| f[y * w + x]).collect();
        let d = edt_1d(&col);
        for y in 0..h {
            g[y * w + x] = d[y];
        }
    }
    let mut out = vec![0.0; mask.width() * mask.height()];
    for y in 0..h {
        let d = edt_1d(&g[y * w..(y + 1) * w]);
        if y == 0 || y == h - 1 {
            continue;
        }
        for x in 1..w - 1 {
            out[(y - 1) * mask.width() + x - 1] = d[x];
        }
    }
    out
}

fn edt_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];
    let mut k = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * q as f64 - 2.0 * p as f64);
            if s <= z[k] {
                k -= 1;
                continue;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    k = 0;
    for (q, slot) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        *slot = (q as f64 - p as f64).powi(2) + f[p];
    }
    d
}

// ---------------------------------------------------------------- graphs

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra: usize) -> NavGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, rng.random_range(1..=9) as f64));
    }
    for _ in 0..extra {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            edges.push((a, b, rng.random_range(1..=9) as f64));
        }
    }
    NavGraph::from_weighted_edges(n, &edges)
}

#[derive(PartialEq)]
struct Item(f64, usize);
impl Eq for Item {}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// Single-source Dijkstra over the edge list.
pub fn dijkstra(graph: &NavGraph, src: usize) -> Vec<f64> {
    let n = graph.nodes.len();
    let mut adj = vec![Vec::new(); n];
    for e in &graph.edges {
        adj[e.a].push((e.b, e.length));
        adj[e.b].push((e.a, e.length));
    }
    let mut dist = vec![f64::INFINITY; n];
    dist[src] = 0.0;
    let mut heap = BinaryHeap::from([Item(0.0, src)]);
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
                heap.push(Item(d + w, v));
            }
        }
    }
    dist
}

/// Every simple path from `from` to `to` with its length, sorted by length
/// then node sequence.
pub fn all_simple_paths(graph: &NavGraph, from: usize, to: usize) -> Vec<(f64, Vec<usize>)> {
    let n = graph.nodes.len();
    let mut w = vec![vec![None; n]; n];
    for e in &graph.edges {
        w[e.a][e.b] = Some(e.length);
        w[e.b][e.a] = Some(e.length);
    }
    let mut out = Vec::new();
    let mut path = vec![from];
    fn rec(
        w: &[Vec<Option<f64>>],
        to: usize,
        path: &mut Vec<usize>,
        len: f64,
        out: &mut Vec<(f64, Vec<usize>)>,
    ) {
        let u = *path.last().unwrap();
        if u == to {
            out.push((len, path.clone()));
            return;
        }
        for v in 0..w.len() {
            if let Some(l) = w[u][v] {
                if !path.contains(&v) {
                    path.push(v);
                    rec(w, to, path, len + l, out);
                    path.pop();
                }
            }
        }
    }
    rec(&w, to, &mut path, 0.0, &mut out);
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    out
}

// ---------------------------------------------------------------- angles

/// Signed-turn oracle: 180 minus the counter-rotation from the first leg to
/// the second, measured with atan2 in y-down coordinates.
pub fn atan2_angle(p1: PixelCoord, p2: PixelCoord, p3: PixelCoord) -> f64 {
    let (ux, uy) = ((p2.x - p1.x) as f64, (p2.y - p1.y) as f64);
    let (vx, vy) = ((p3.x - p2.x) as f64, (p3.y - p2.y) as f64);
    let cross = ux * vy - uy * vx;
    let dot = ux * vx + uy * vy;
    180.0 - cross.atan2(dot).to_degrees()
}

// ---------------------------------------------------------------- replay

/// Drives a walker over the graph using only the script. The walker starts
/// on the start node facing the first route node, and at every node picks
/// the neighbour whose turn falls in the instructed bucket, closest angle
/// first. Returns the visited node ids.
pub fn replay(analysis: &Analysis) -> Result<Vec<usize>, String> {
    let kb = &analysis.kb;
    let g = &kb.graph;
    let start = g.node_of_kind(NodeKind::Start).ok_or("no start")?.id;
    let first = *kb.route.node_sequence.get(1).ok_or("short route")?;
    let adj = g.adjacency();
    let mut visited = vec![start, first];
    for ins in &kb.directions.instructions {
        let cur = *visited.last().unwrap();
        let prev = visited[visited.len() - 2];
        let mut best: Option<(f64, usize)> = None;
        for &(next, _) in &adj[cur] {
            if next == prev {
                continue;
            }
            let Ok(angle) = triangle_angle(g.nodes[prev].pixel, g.nodes[cur].pixel, g.nodes[next].pixel) else {
                continue;
            };
            if direction_for_angle(angle).ok() != Some(ins.direction) {
                continue;
            }
            let score = (angle - ins.angle).abs();
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, next));
            }
        }
        let (_, next) = best.ok_or_else(|| format!("no {:?} exit at node {cur}", ins.direction))?;
        visited.push(next);
    }
    Ok(visited)
}

/// Door directive computed from the raw mask: door regions beside the final
/// corridor are ordered along the heading and sided by the sign of the
/// cross product between heading and the offset to the region centroid.
pub fn geometric_directive(analysis: &Analysis) -> Result<(TravelSide, usize), String> {
    let kb = &analysis.kb;
    let g = &kb.graph;
    let seq = &kb.route.node_sequence;
    let end = g.nodes[*seq.last().unwrap()].pixel;
    let pen = g.nodes[seq[seq.len() - 2]].pixel;
    let mut anchor_i = seq.len() - 2;
    while anchor_i > 0 && g.nodes[seq[anchor_i]].kind == NodeKind::Door {
        anchor_i -= 1;
    }
    let anchor = g.nodes[seq[anchor_i]].pixel;
    let (dx, dy) = (end.x - pen.x, end.y - pen.y);
    let heading = if dy.abs() >= dx.abs() {
        (0.0, f64::from(dy.signum()))
    } else {
        (f64::from(dx.signum()), 0.0)
    };
    let along = |x: f64, y: f64| x * heading.0 + y * heading.1;
    let a0 = along(f64::from(anchor.x), f64::from(anchor.y));
    let a1 = along(f64::from(end.x), f64::from(end.y));
    let reach = f64::from(kb.params.max_width + kb.params.door_probe);

    let mut doors: Vec<(f64, TravelSide, bool)> = Vec::new();
    let mask = &analysis.mask;
    for (class, is_target) in [(PixelClass::Door, false), (PixelClass::TargetDoor, true)] {
        for region in mask.regions(class) {
            let n = region.len() as f64;
            let cx = region.iter().map(|p| f64::from(p.x)).sum::<f64>() / n;
            let cy = region.iter().map(|p| f64::from(p.y)).sum::<f64>() / n;
            let t = along(cx, cy);
            // offset from the corridor line through the end pixel; with y
            // down a negative cross product is a turn to the left
            let (ox, oy) = (cx - f64::from(end.x), cy - f64::from(end.y));
            let cross = heading.0 * oy - heading.1 * ox;
            if !is_target && (t <= a0 + 0.5 || t > a1 + 0.5 || cross.abs() > reach) {
                continue;
            }
            let side = if cross < 0.0 {
                TravelSide::Left
            } else {
                TravelSide::Right
            };
            doors.push((t, side, is_target));
        }
    }
    doors.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ti = doors.iter().position(|d| d.2).ok_or("no target region")?;
    let side = doors[ti].1;
    let ordinal = doors[..=ti].iter().filter(|d| d.1 == side).count();
    Ok((side, ordinal))
}

// ---------------------------------------------------------------- flood fill

/// 8-connected flood fill over a pixel set.
pub fn flood_reaches(pixels: &BTreeSet<PixelCoord>, from: PixelCoord, to: PixelCoord) -> bool {
    if !pixels.contains(&from) {
        return false;
    }
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(p) = queue.pop_front() {
        if p == to {
            return true;
        }
        for dy in -1..=1 {
            for dx in -1..=1 {
                let q = p.offset(dx, dy);
                if pixels.contains(&q) && seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
    }
    false
}

/// Border pixels by direct neighbour inspection.
pub fn brute_border(mask: &GridMask) -> Vec<PixelCoord> {
    let mut out = Vec::new();
    for y in 0..mask.height() as i32 {
        for x in 0..mask.width() as i32 {
            let p = PixelCoord::new(x, y);
            if !mask.get(p).is_walkable() {
                continue;
            }
            let mut border = false;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    let inside = nx >= 0 && ny >= 0 && nx < mask.width() as i32 && ny < mask.height() as i32;
                    if !inside || !mask.get(PixelCoord::new(nx, ny)).is_walkable() {
                        border = true;
                    }
                }
            }
            if border {
                out.push(p);
            }
        }
    }
    out
}

pub fn counts_by_kind(graph: &NavGraph) -> BTreeMap<NodeKind, usize> {
    let mut m = BTreeMap::new();
    for n in &graph.nodes {
        *m.entry(n.kind).or_insert(0) += 1;
    }
    m
}

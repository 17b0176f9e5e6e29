//! Loading, validating and rendering the classified floor-plan raster.

use crate::error::{Error, Result};
use crate::geom::PixelCoord;
use crate::graph::NavGraph;
use crate::medial::Skeleton;
use crate::raster::{connected_components, Connectivity};
use crate::route::RoutePlan;
use image::{ImageFormat, Rgb, RgbImage};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Cursor;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PixelClass {
    Background,
    Path,
    Door,
    TargetDoor,
    StartMarker,
}

impl PixelClass {
    pub const ALL: [PixelClass; 5] = [
        PixelClass::Background,
        PixelClass::Path,
        PixelClass::Door,
        PixelClass::TargetDoor,
        PixelClass::StartMarker,
    ];

    /// Pixels a walker can stand on. The start marker is painted over the
    /// corridor, so it counts as corridor for every geometric stage.
    pub fn is_walkable(self) -> bool {
        matches!(self, PixelClass::Path | PixelClass::StartMarker)
    }

    pub fn is_door(self) -> bool {
        matches!(self, PixelClass::Door | PixelClass::TargetDoor)
    }

    fn index(self) -> usize {
        self as usize
    }
}

pub type Rgb8 = [u8; 3];

/// Colour assignment for the four meaningful classes. Any other colour reads
/// as background; `background` is what the renderer paints background with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMap {
    pub path: Rgb8,
    pub door: Rgb8,
    pub target_door: Rgb8,
    pub start: Rgb8,
    pub background: Rgb8,
}

impl Default for ColorMap {
    fn default() -> Self {
        Self {
            path: [0xff, 0xff, 0xff],
            door: [0x00, 0xff, 0x00],
            target_door: [0x00, 0x00, 0xff],
            start: [0xff, 0x00, 0x00],
            background: [0x00, 0x00, 0x00],
        }
    }
}

impl ColorMap {
    pub fn classify(&self, rgb: Rgb8) -> PixelClass {
        if rgb == self.path {
            PixelClass::Path
        } else if rgb == self.door {
            PixelClass::Door
        } else if rgb == self.target_door {
            PixelClass::TargetDoor
        } else if rgb == self.start {
            PixelClass::StartMarker
        } else {
            PixelClass::Background
        }
    }

    pub fn color_of(&self, class: PixelClass) -> Rgb8 {
        match class {
            PixelClass::Background => self.background,
            PixelClass::Path => self.path,
            PixelClass::Door => self.door,
            PixelClass::TargetDoor => self.target_door,
            PixelClass::StartMarker => self.start,
        }
    }

    /// All five colours must differ, otherwise the map is not injective and a
    /// rendered mask would not load back to the same classes.
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("path", self.path),
            ("door", self.door),
            ("target_door", self.target_door),
            ("start", self.start),
            ("background", self.background),
        ];
        for (i, (a, ca)) in named.iter().enumerate() {
            for (b, cb) in &named[i + 1..] {
                if ca == cb {
                    return Err(Error::ColorMap(format!(
                        "{a} and {b} share colour {}",
                        hex::encode(ca)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parses `key = hex` lines. Keys: `path`, `door`, `target_door`,
    /// `start` (or `start_marker`), `background`. Unset keys keep defaults.
    pub fn parse(text: &str) -> Result<ColorMap> {
        let mut map = ColorMap::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::ColorMap(format!("line {}: expected key = hex", lineno + 1))
            })?;
            let rgb = parse_hex(value.trim()).ok_or_else(|| {
                Error::ColorMap(format!("line {}: bad colour {:?}", lineno + 1, value.trim()))
            })?;
            match key.trim() {
                "path" => map.path = rgb,
                "door" => map.door = rgb,
                "target_door" => map.target_door = rgb,
                "start" | "start_marker" => map.start = rgb,
                "background" => map.background = rgb,
                other => {
                    return Err(Error::ColorMap(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        map.validate()?;
        Ok(map)
    }

    pub fn from_file(path: &Path) -> Result<ColorMap> {
        let text = fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_owned(),
            source,
        })?;
        ColorMap::parse(&text)
    }
}

fn parse_hex(s: &str) -> Option<Rgb8> {
    let s = s.trim_matches('"').trim_matches('\'');
    let s = s.strip_prefix('#').unwrap_or(s);
    let s = s.strip_prefix("0x").unwrap_or(s);
    let bytes = hex::decode(s).ok()?;
    bytes.try_into().ok()
}

/// Classified raster, row-major, origin top-left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMask {
    width: usize,
    height: usize,
    cells: Vec<PixelClass>,
}

impl GridMask {
    /// Builds a mask checking only the shape. Use [`GridMask::validate`] for
    /// the landmark rules.
    pub fn new(width: usize, height: usize, cells: Vec<PixelClass>) -> Result<GridMask> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if cells.len() != width * height {
            return Err(Error::Consistency(format!(
                "{} cells for a {width}x{height} mask",
                cells.len()
            )));
        }
        Ok(GridMask {
            width,
            height,
            cells,
        })
    }

    pub fn filled(width: usize, height: usize, class: PixelClass) -> Result<GridMask> {
        GridMask::new(width, height, vec![class; width * height])
    }

    pub fn from_rgb(image: &RgbImage, colors: &ColorMap) -> Result<GridMask> {
        let cells = image.pixels().map(|p| colors.classify(p.0)).collect();
        GridMask::new(image.width() as usize, image.height() as usize, cells)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[PixelClass] {
        &self.cells
    }

    pub fn in_bounds(&self, p: PixelCoord) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as usize) < self.width && (p.y as usize) < self.height
    }

    /// Class at `p`; out-of-bounds reads as background.
    pub fn get(&self, p: PixelCoord) -> PixelClass {
        if self.in_bounds(p) {
            self.cells[p.y as usize * self.width + p.x as usize]
        } else {
            PixelClass::Background
        }
    }

    pub fn set(&mut self, p: PixelCoord, class: PixelClass) {
        if self.in_bounds(p) {
            self.cells[p.y as usize * self.width + p.x as usize] = class;
        }
    }

    /// Fills the inclusive rectangle `[x0, x1] x [y0, y1]`, clipped.
    pub fn fill_rect(&mut self, x0: i32, y0: i32, x1: i32, y1: i32, class: PixelClass) {
        for y in y0..=y1 {
            for x in x0..=x1 {
                self.set(PixelCoord::new(x, y), class);
            }
        }
    }

    pub fn is_walkable(&self, p: PixelCoord) -> bool {
        self.get(p).is_walkable()
    }

    pub fn pixels(&self) -> impl Iterator<Item = (PixelCoord, PixelClass)> + '_ {
        let w = self.width;
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, c)| (PixelCoord::new((i % w) as i32, (i / w) as i32), *c))
    }

    /// Pixel count per class, indexed like [`PixelClass::ALL`].
    pub fn class_counts(&self) -> [usize; 5] {
        let mut counts = [0; 5];
        for c in &self.cells {
            counts[c.index()] += 1;
        }
        counts
    }

    pub fn count(&self, class: PixelClass) -> usize {
        self.class_counts()[class.index()]
    }

    /// 4-connected regions of one class.
    pub fn regions(&self, class: PixelClass) -> Vec<Vec<PixelCoord>> {
        connected_components(self.width, self.height, Connectivity::Four, |p| {
            self.get(p) == class
        })
    }

    /// Checks at least one Path pixel, exactly one start region and exactly
    /// one target-door region.
    pub fn validate(&self) -> Result<()> {
        if self.count(PixelClass::Path) == 0 {
            return Err(Error::NoPathPixels);
        }
        match self.regions(PixelClass::StartMarker).len() {
            0 => return Err(Error::NoStartRegion),
            1 => {}
            n => return Err(Error::DuplicateStartRegion(n)),
        }
        match self.regions(PixelClass::TargetDoor).len() {
            0 => return Err(Error::NoTargetDoorRegion),
            1 => {}
            n => return Err(Error::DuplicateTargetDoorRegion(n)),
        }
        Ok(())
    }

    /// Image of the mask in the map's colours.
    pub fn to_rgb(&self, colors: &ColorMap) -> RgbImage {
        let mut img = RgbImage::new(self.width as u32, self.height as u32);
        for (p, c) in self.pixels() {
            img.put_pixel(p.x as u32, p.y as u32, Rgb(colors.color_of(c)));
        }
        img
    }
}

/// Decodes an in-memory PNG or PNM and classifies it without validation.
pub fn decode_mask(bytes: &[u8], colors: &ColorMap) -> std::result::Result<GridMask, DecodeError> {
    let format = image::guess_format(bytes).map_err(DecodeError::Image)?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Pnm) {
        return Err(DecodeError::Image(image::ImageError::Unsupported(
            image::error::UnsupportedError::from_format_and_kind(
                format.into(),
                image::error::UnsupportedErrorKind::Format(format.into()),
            ),
        )));
    }
    let img = image::load(Cursor::new(bytes), format).map_err(DecodeError::Image)?;
    GridMask::from_rgb(&img.to_rgb8(), colors).map_err(DecodeError::Mask)
}

#[derive(Debug)]
pub enum DecodeError {
    Image(image::ImageError),
    Mask(Error),
}

/// Reads, classifies and validates a mask file.
pub fn load_mask(file_path: &Path, colors: &ColorMap) -> Result<GridMask> {
    colors.validate()?;
    let bytes = fs::read(file_path).map_err(|source| Error::Read {
        path: file_path.to_owned(),
        source,
    })?;
    let mask = decode_mask(&bytes, colors).map_err(|e| match e {
        DecodeError::Image(source) => Error::Decode {
            path: file_path.to_owned(),
            source,
        },
        DecodeError::Mask(e) => e,
    })?;
    mask.validate()?;
    Ok(mask)
}

pub const SKELETON_COLOR: Rgb8 = [0x00, 0x00, 0x00];
pub const NODE_COLOR: Rgb8 = [0xff, 0x00, 0x00];
pub const ROUTE_COLOR: Rgb8 = [0xff, 0x80, 0x00];

/// Optional layers drawn over the mask.
#[derive(Clone, Copy, Default)]
pub struct Overlay<'a> {
    pub skeleton: Option<&'a Skeleton>,
    pub graph: Option<&'a NavGraph>,
    pub route: Option<&'a RoutePlan>,
}

/// Paints the mask, then skeleton pixels, route traces and 3x3 node markers,
/// in that order.
pub fn render_image(mask: &GridMask, colors: &ColorMap, layers: Overlay<'_>) -> Result<RgbImage> {
    let mut img = mask.to_rgb(colors);
    let paint = |img: &mut RgbImage, p: PixelCoord, rgb: Rgb8| -> Result<()> {
        if !mask.in_bounds(p) {
            return Err(Error::OutOfBounds(p));
        }
        img.put_pixel(p.x as u32, p.y as u32, Rgb(rgb));
        Ok(())
    };
    if let Some(skeleton) = layers.skeleton {
        for &p in &skeleton.pixels {
            paint(&mut img, p, SKELETON_COLOR)?;
        }
    }
    if let Some(route) = layers.route {
        let graph = layers.graph.ok_or_else(|| {
            Error::Consistency("route layer needs the graph layer for edge traces".into())
        })?;
        for pair in route.node_sequence.windows(2) {
            let edge = graph.edge_between(pair[0], pair[1]).ok_or_else(|| {
                Error::Consistency(format!("route hop {}-{} is not a graph edge", pair[0], pair[1]))
            })?;
            for &p in &edge.trace {
                paint(&mut img, p, ROUTE_COLOR)?;
            }
        }
    }
    if let Some(graph) = layers.graph {
        for node in &graph.nodes {
            paint(&mut img, node.pixel, NODE_COLOR)?;
            for q in node.pixel.neighbors8() {
                if mask.in_bounds(q) {
                    paint(&mut img, q, NODE_COLOR)?;
                }
            }
        }
    }
    Ok(img)
}

/// Renders the overlay and writes it as PNG.
pub fn render_overlay(
    mask: &GridMask,
    colors: &ColorMap,
    layers: Overlay<'_>,
    out_path: &Path,
) -> Result<()> {
    let img = render_image(mask, colors, layers)?;
    let bytes = encode_png(&img).map_err(|source| Error::Encode {
        path: out_path.to_owned(),
        source,
    })?;
    fs::write(out_path, bytes).map_err(|source| Error::Write {
        path: out_path.to_owned(),
        source,
    })
}

pub fn encode_png(img: &RgbImage) -> image::ImageResult<Vec<u8>> {
    let mut buf = Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png)?;
    Ok(buf.into_inner())
}

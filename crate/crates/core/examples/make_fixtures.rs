//! Regenerates the bundled mask fixtures under `fixtures/`.
//!
//! cargo run -p navmap --example make_fixtures

use navmap::mask::{encode_png, ColorMap, GridMask, PixelClass};
use std::path::Path;

type Rect = (i32, i32, i32, i32);

struct Fixture {
    name: &'static str,
    size: (usize, usize),
    path: &'static [Rect],
    holes: &'static [Rect],
    start: Rect,
    doors: &'static [Rect],
    target: Rect,
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "lshape",
        size: (160, 180),
        path: &[(10, 20, 129, 39), (110, 20, 129, 159)],
        holes: &[],
        start: (16, 27, 21, 32),
        doors: &[(50, 14, 57, 19), (130, 70, 135, 77)],
        target: (130, 110, 135, 117),
    },
    Fixture {
        name: "plus",
        size: (200, 200),
        path: &[(10, 90, 189, 109), (90, 10, 109, 189)],
        holes: &[],
        start: (20, 96, 25, 101),
        doors: &[(150, 110, 157, 115), (84, 150, 89, 157)],
        target: (110, 30, 115, 37),
    },
    Fixture {
        name: "loop",
        size: (230, 160),
        path: &[(10, 10, 209, 149)],
        holes: &[(30, 30, 189, 129)],
        start: (16, 57, 21, 62),
        doors: &[(70, 4, 77, 9), (130, 4, 137, 9), (210, 100, 215, 107)],
        target: (210, 60, 215, 67),
    },
    Fixture {
        name: "zigzag",
        size: (240, 160),
        path: &[(10, 20, 119, 39), (100, 20, 119, 129), (100, 110, 229, 129)],
        holes: &[],
        start: (16, 27, 21, 32),
        doors: &[(150, 104, 157, 109), (170, 130, 177, 135)],
        target: (196, 130, 203, 135),
    },
    Fixture {
        name: "westward",
        size: (220, 80),
        path: &[(10, 30, 209, 49)],
        holes: &[],
        start: (196, 37, 201, 42),
        doors: &[(40, 24, 47, 29), (120, 24, 127, 29), (80, 50, 87, 55), (150, 50, 157, 55)],
        target: (60, 24, 67, 29),
    },
];

fn build(f: &Fixture) -> GridMask {
    let mut m = GridMask::filled(f.size.0, f.size.1, PixelClass::Background).expect("size");
    for &(x0, y0, x1, y1) in f.path {
        m.fill_rect(x0, y0, x1, y1, PixelClass::Path);
    }
    for &(x0, y0, x1, y1) in f.holes {
        m.fill_rect(x0, y0, x1, y1, PixelClass::Background);
    }
    for &(x0, y0, x1, y1) in f.doors {
        m.fill_rect(x0, y0, x1, y1, PixelClass::Door);
    }
    let (x0, y0, x1, y1) = f.target;
    m.fill_rect(x0, y0, x1, y1, PixelClass::TargetDoor);
    let (x0, y0, x1, y1) = f.start;
    m.fill_rect(x0, y0, x1, y1, PixelClass::StartMarker);
    m
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let colors = ColorMap::default();
    for f in FIXTURES {
        let mask = build(f);
        let bytes = encode_png(&mask.to_rgb(&colors)).expect("encode");
        let path = dir.join(format!("{}.png", f.name));
        std::fs::write(&path, bytes).expect("write");
        println!("{}", path.display());
    }
}

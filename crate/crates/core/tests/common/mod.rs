#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svgforge::model::{PathCommand, Point};
use svgforge::pipeline::{discover_svgs, record_id};
use svgforge::{Document, Paint, PathElement, Rgb};

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus")
}

/// `(record id, source text)` for every fixture icon, in id order.
pub fn corpus() -> Vec<(String, String)> {
    let root = corpus_dir();
    discover_svgs(&root)
        .expect("fixture corpus is readable")
        .into_iter()
        .map(|rel| {
            let text = fs::read_to_string(root.join(&rel)).expect("fixture is utf-8");
            (record_id(&rel), text)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn num(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> String {
    let v: f64 = rng.random_range(lo..hi);
    format!("{:.3}", v)
}

fn color(rng: &mut ChaCha8Rng) -> String {
    format!("#{:06x}", rng.random_range(0..0x100_0000u32))
}

/// Path data using a random mix of all twenty opcodes.
pub fn random_path_data(rng: &mut ChaCha8Rng, size: f64) -> String {
    let mut d = format!("M{} {}", num(rng, 0.0, size), num(rng, 0.0, size));
    let n = rng.random_range(1..12);
    let s = size / 4.0;
    for _ in 0..n {
        let op = rng.random_range(0..20);
        let c = |rng: &mut ChaCha8Rng| num(rng, 0.0, size);
        let r = |rng: &mut ChaCha8Rng| num(rng, -s, s);
        let seg = match op {
            0 => format!("L{} {}", c(rng), c(rng)),
            1 => format!("l{} {}", r(rng), r(rng)),
            2 => format!("H{}", c(rng)),
            3 => format!("h{}", r(rng)),
            4 => format!("V{}", c(rng)),
            5 => format!("v{}", r(rng)),
            6 => format!("C{} {} {} {} {} {}", c(rng), c(rng), c(rng), c(rng), c(rng), c(rng)),
            7 => format!("c{} {} {} {} {} {}", r(rng), r(rng), r(rng), r(rng), r(rng), r(rng)),
            8 => format!("S{} {} {} {}", c(rng), c(rng), c(rng), c(rng)),
            9 => format!("s{} {} {} {}", r(rng), r(rng), r(rng), r(rng)),
            10 => format!("Q{} {} {} {}", c(rng), c(rng), c(rng), c(rng)),
            11 => format!("q{} {} {} {}", r(rng), r(rng), r(rng), r(rng)),
            12 => format!("T{} {}", c(rng), c(rng)),
            13 => format!("t{} {}", r(rng), r(rng)),
            14 | 15 => {
                let letter = if op == 14 { 'A' } else { 'a' };
                let end = if op == 14 { (c(rng), c(rng)) } else { (r(rng), r(rng)) };
                format!(
                    "{letter}{} {} {} {} {} {} {}",
                    num(rng, 0.5, s),
                    num(rng, 0.5, s),
                    num(rng, 0.0, 360.0),
                    rng.random_range(0..2),
                    rng.random_range(0..2),
                    end.0,
                    end.1
                )
            }
            16 => "Z".to_owned(),
            17 => "z".to_owned(),
            18 => format!("M{} {}", c(rng), c(rng)),
            _ => format!("m{} {}", r(rng), r(rng)),
        };
        d.push_str(&seg);
    }
    d
}

fn random_shape(rng: &mut ChaCha8Rng, size: f64) -> String {
    let fill = color(rng);
    match rng.random_range(0..7) {
        0 => format!(
            r#"<rect x="{}" y="{}" width="{}" height="{}" rx="{}" fill="{fill}"/>"#,
            num(rng, 0.0, size / 2.0),
            num(rng, 0.0, size / 2.0),
            num(rng, 1.0, size / 2.0),
            num(rng, 1.0, size / 2.0),
            num(rng, 0.0, size / 8.0),
        ),
        1 => format!(
            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
            num(rng, 0.0, size),
            num(rng, 0.0, size),
            num(rng, 0.5, size / 3.0),
        ),
        2 => format!(
            r#"<ellipse cx="{}" cy="{}" rx="{}" ry="{}" fill="{fill}"/>"#,
            num(rng, 0.0, size),
            num(rng, 0.0, size),
            num(rng, 0.5, size / 3.0),
            num(rng, 0.5, size / 3.0),
        ),
        3 => format!(
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" fill="{fill}"/>"#,
            num(rng, 0.0, size),
            num(rng, 0.0, size),
            num(rng, 0.0, size),
            num(rng, 0.0, size),
        ),
        4 | 5 => {
            let tag = if rng.random_bool(0.5) { "polygon" } else { "polyline" };
            let mut pts = String::new();
            for _ in 0..rng.random_range(2..7) {
                let _ = write!(pts, "{},{} ", num(rng, 0.0, size), num(rng, 0.0, size));
            }
            format!(r#"<{tag} points="{}" fill="{fill}"/>"#, pts.trim_end())
        }
        _ => format!(r#"<path d="{}" fill="{fill}"/>"#, random_path_data(rng, size)),
    }
}

fn random_transform(rng: &mut ChaCha8Rng) -> String {
    match rng.random_range(0..5) {
        0 => format!("translate({} {})", num(rng, -5.0, 5.0), num(rng, -5.0, 5.0)),
        1 => format!("rotate({})", num(rng, -180.0, 180.0)),
        2 => format!("scale({} {})", num(rng, 0.5, 2.0), num(rng, 0.5, 2.0)),
        3 => format!("skewX({})", num(rng, -30.0, 30.0)),
        _ => format!(
            "matrix(1 {} {} 1 {} {})",
            num(rng, -0.3, 0.3),
            num(rng, -0.3, 0.3),
            num(rng, -3.0, 3.0),
            num(rng, -3.0, 3.0)
        ),
    }
}

/// A random document with shapes, paths, nested groups and transforms.
pub fn random_svg(rng: &mut ChaCha8Rng) -> String {
    let w: f64 = [16.0, 24.0, 48.0, 100.0][rng.random_range(0..4)];
    let h = if rng.random_bool(0.8) { w } else { w * 1.5 };
    let mut body = String::new();
    let mut depth = 0;
    for _ in 0..rng.random_range(1..6) {
        if depth < 2 && rng.random_bool(0.25) {
            let _ = write!(body, r#"<g transform="{}">"#, random_transform(rng));
            depth += 1;
        }
        body.push_str(&random_shape(rng, w));
        if depth > 0 && rng.random_bool(0.3) {
            body.push_str("</g>");
            depth -= 1;
        }
    }
    // Always leave at least one plain filled path so the document is never empty.
    body.push_str(&format!(r#"<path d="M1 1H{w}V{h}z" fill="{}"/>"#, color(rng)));
    for _ in 0..depth {
        body.push_str("</g>");
    }
    format!(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}">{body}</svg>"#)
}

/// A colored icon: a row of 2-5 shapes in distinct colors with disjoint bounds.
pub fn colored_icon(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(2..6);
    let mut body = String::new();
    let mut colors: Vec<String> = Vec::new();
    while colors.len() < n {
        let c = color(rng);
        if !colors.contains(&c) {
            colors.push(c);
        }
    }
    for (i, c) in colors.iter().enumerate() {
        let x = 2 + i * 20;
        let kind = rng.random_range(0..3);
        let shape = match kind {
            0 => format!(r#"<rect x="{x}" y="40" width="16" height="16" fill="{c}"/>"#),
            1 => format!(r#"<circle cx="{}" cy="48" r="8" fill="{c}"/>"#, x + 8),
            _ => format!(r#"<path d="M{x} 56l8-16 8 16z" fill="{c}"/>"#),
        };
        body.push_str(&shape);
    }
    format!(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 104 104">{body}</svg>"#)
}

/// A normalized document with exactly `commands` commands in one or two colors.
pub fn document_with_commands(commands: usize, multicolor: bool) -> Document {
    if commands == 0 {
        return Document::empty();
    }
    let fills = [Rgb::BLACK, Rgb([255, 0, 0])];
    let n_paths = if multicolor { 2.min(commands) } else { 1 };
    let mut paths = Vec::new();
    let mut remaining = commands;
    for (i, fill) in fills.iter().take(n_paths).enumerate() {
        let len = if i + 1 == n_paths { remaining } else { remaining / 2 };
        remaining -= len;
        let mut cmds = vec![PathCommand::MoveTo(Point::new(i as f64, 0.0))];
        cmds.extend((1..len).map(|k| PathCommand::LineTo(Point::new(i as f64, k as f64))));
        paths.push(PathElement::new(cmds, Paint::Hex(*fill)).expect("valid path"));
    }
    Document::new_normalized(paths).expect("canvas document")
}

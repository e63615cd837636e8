//! Raster of the slice `s₁ + s₂ + s₃ = 1` of the moduli space.
//!
//! Grid points are `(i, j, k)/N` with `i + j + k = N`, and the p-polynomials
//! are evaluated on the integer triple, so the six-fold symmetry of the
//! picture is exact.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{FlagError, Result};
use crate::lie::FlagModel;
use crate::moduli::{classify_flags, p_polys_int, p_polys_raw, Flags, Reason};

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub ijk: [u32; 3],
    /// `N² p_r(s)`.
    pub p_scaled: [i64; 3],
    /// All `p_r ≥ 0` (boundary points included).
    pub region: bool,
    /// `None` on the boundary of the simplex, where the metric degenerates.
    pub class: Option<(Flags, Reason)>,
}

impl ScanPoint {
    pub fn s(&self, n: u32) -> [f64; 3] {
        self.ijk.map(|x| x as f64 / n as f64)
    }
}

#[derive(Debug, Clone)]
pub struct Scan {
    pub model: FlagModel,
    pub resolution: u32,
    pub points: Vec<ScanPoint>,
}

pub fn scan(model: FlagModel, resolution: u32) -> Result<Scan> {
    if resolution == 0 {
        return Err(FlagError::Domain("resolution must be positive".into()));
    }
    let n = resolution;
    let points = (0..=n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (0..=n - i).map(move |j| {
                let ijk = [i, j, n - i - j];
                let p = p_polys_int(ijk.map(i64::from));
                let region = p.iter().all(|v| *v >= 0);
                let class = ijk.iter().all(|x| *x > 0).then(|| {
                    let ties = [0, 1, 2].map(|r| ijk[(r + 1) % 3] == ijk[(r + 2) % 3]);
                    classify_flags(model, p.map(|v| v as f64), ties, 0.0)
                });
                ScanPoint {
                    ijk,
                    p_scaled: p,
                    region,
                    class,
                }
            })
        })
        .collect();
    Ok(Scan {
        model,
        resolution,
        points,
    })
}

fn bit(b: bool) -> u8 {
    u8::from(b)
}

impl Scan {
    pub fn to_csv(&self) -> String {
        let n = self.resolution;
        let n2 = f64::from(n) * f64::from(n);
        let mut out = String::from("s1,s2,s3,p1,p2,p3,region,sec_nonneg,sec_pos,strongly_nonneg,strongly_pos,reason\n");
        for pt in &self.points {
            let s = pt.s(n);
            let p = pt.p_scaled.map(|v| v as f64 / n2);
            let (f, reason) = match pt.class {
                Some((f, r)) => ([f.sec_nonneg, f.sec_pos, f.strongly_nonneg, f.strongly_pos], r.as_str()),
                None => ([false; 4], "boundary"),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                s[0],
                s[1],
                s[2],
                p[0],
                p[1],
                p[2],
                bit(pt.region),
                bit(f[0]),
                bit(f[1]),
                bit(f[2]),
                bit(f[3]),
                reason
            );
        }
        out
    }

    /// Number of points whose classification changes under some
    /// permutation of `(s₁, s₂, s₃)`.
    pub fn symmetry_defects(&self) -> usize {
        let index: HashMap<[u32; 3], &ScanPoint> = self.points.iter().map(|p| (p.ijk, p)).collect();
        let perms = [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        self.points
            .iter()
            .filter(|pt| {
                perms.iter().any(|perm| {
                    let q = index[&perm.map(|k| pt.ijk[k])];
                    q.region != pt.region || q.class.map(|c| c.0) != pt.class.map(|c| c.0)
                })
            })
            .count()
    }

    /// Largest distance, in grid steps, from an edge midpoint to the nearest
    /// region point on the boundary of the simplex, and whether any other
    /// boundary point lies in the region.
    pub fn boundary_contact(&self) -> (f64, bool) {
        let n = f64::from(self.resolution);
        let on_boundary: Vec<&ScanPoint> =
            self.points.iter().filter(|p| p.region && p.ijk.contains(&0)).collect();
        let mid = [[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]];
        let dist = |p: &ScanPoint, m: &[f64; 3]| {
            let s = p.s(self.resolution);
            (0..3).map(|k| (s[k] - m[k]).abs()).fold(0.0, f64::max) * n
        };
        let worst = mid
            .iter()
            .map(|m| on_boundary.iter().map(|p| dist(p, m)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        let stray = on_boundary.iter().any(|p| mid.iter().all(|m| dist(p, m) > 1.0));
        (worst, stray)
    }

    pub fn count_region(&self) -> usize {
        self.points.iter().filter(|p| p.region).count()
    }
}

/// Smallest value of `min_r p_r` on the segment from `s` (normalized to the
/// slice) to the center `(⅓, ⅓, ⅓)`. Each `p_r` is quadratic along the
/// segment, so the minimum is found exactly.
pub fn segment_min_p(s: [f64; 3]) -> f64 {
    let sum: f64 = s.iter().sum();
    let s0 = s.map(|x| x / sum);
    let at = |t: f64| p_polys_raw([0, 1, 2].map(|k| (1.0 - t) * s0[k] + t / 3.0));
    let (f0, fh, f1) = (at(0.0), at(0.5), at(1.0));
    (0..3)
        .map(|r| {
            // f(t) = c + b t + a t²
            let c = f0[r];
            let a = 2.0 * (f1[r] + c - 2.0 * fh[r]);
            let b = f1[r] - c - a;
            let mut m = c.min(f1[r]);
            if a > 0.0 {
                let t = -b / (2.0 * a);
                if (0.0..=1.0).contains(&t) {
                    m = m.min(c + b * t + a * t * t);
                }
            }
            m
        })
        .fold(f64::INFINITY, f64::min)
}

const WIDTH: f64 = 600.0;
const SIDE: f64 = 520.0;
const MARGIN: f64 = 40.0;

fn to_xy(s: [f64; 3]) -> (f64, f64) {
    let h = SIDE * 3f64.sqrt() / 2.0;
    let base = MARGIN + h;
    // s₁ bottom left, s₂ bottom right, s₃ top
    let x = MARGIN + s[1] * SIDE + s[2] * SIDE / 2.0;
    let y = base - s[2] * h;
    (x, y)
}

/// Boundary of `{p_r ≥ 0}` traced by bisection along rays from the center.
pub fn region_outline(samples: usize) -> Vec<[f64; 3]> {
    let c = [1.0 / 3.0; 3];
    let u = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
    let v = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
    (0..samples)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / samples as f64;
            let d = [0, 1, 2].map(|i| th.cos() * u[i] + th.sin() * v[i]);
            let point = |t: f64| [0, 1, 2].map(|i| c[i] + t * d[i]);
            // largest t keeping the point in the closed simplex
            let t_edge = (0..3)
                .filter(|&i| d[i] < 0.0)
                .map(|i| -c[i] / d[i])
                .fold(f64::INFINITY, f64::min);
            let inside = |t: f64| p_polys_raw(point(t)).iter().all(|p| *p >= 0.0);
            let (mut lo, mut hi) = (0.0, t_edge);
            // the region meets the boundary in a cusp; allow rounding there
            if p_polys_raw(point(hi)).iter().all(|p| *p >= -1e-12) {
                lo = hi;
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if inside(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            point(lo)
        })
        .collect()
}

/// SVG 1.1 drawing of the region, the equality lines `s_r = s_t` and the
/// boundary of the slice.
pub fn region_svg(model: FlagModel) -> String {
    let height = MARGIN * 2.0 + SIDE * 3f64.sqrt() / 2.0 + 20.0;
    let pt = |s: [f64; 3]| {
        let (x, y) = to_xy(s);
        format!("{x:.3},{y:.3}")
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height:.0}" viewBox="0 0 {WIDTH} {height:.0}">"#
    );
    let _ = writeln!(out, "<title>{} metrics with sec &#8805; 0 on s1+s2+s3=1</title>", model.name());
    let outline: Vec<String> = region_outline(720).into_iter().map(pt).collect();
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="#c8d8ec" stroke="#2b4c7e" stroke-width="1"/>"##,
        outline.join(" ")
    );
    let corners = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let _ = writeln!(
        out,
        r#"<polygon points="{} {} {}" fill="none" stroke="black" stroke-width="1" stroke-dasharray="2,4"/>"#,
        pt(corners[0]),
        pt(corners[1]),
        pt(corners[2])
    );
    for r in 0..3 {
        // s_{r+1} = s_{r+2}: from the r-th vertex to the opposite midpoint
        let mut mid = [0.5; 3];
        mid[r] = 0.0;
        let (x1, y1) = to_xy(corners[r]);
        let (x2, y2) = to_xy(mid);
        let _ = writeln!(
            out,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="black" stroke-width="1"/>"#
        );
    }
    for (r, c) in corners.iter().enumerate() {
        let (x, y) = to_xy(*c);
        let dy = if r == 2 { -8.0 } else { 16.0 };
        let _ = writeln!(
            out,
            r#"<text x="{x:.3}" y="{:.3}" font-family="sans-serif" font-size="12" text-anchor="middle">s{}=1</text>"#,
            y + dy,
            r + 1
        );
    }
    let (cx, cy) = to_xy([1.0 / 3.0; 3]);
    let _ = writeln!(out, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="2.5" fill="black"/>"#);
    let _ = writeln!(out, "</svg>");
    out
}

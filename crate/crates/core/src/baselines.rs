//! Reference interpolators used as comparison anchors.

use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation};

use crate::error::{FsrError, Result};
use crate::grid::{ImageGrid, SamplingMask};

/// Where an output pixel's value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PixelSource {
    Known,
    /// Barycentric interpolation in the triangle with these pixel indices.
    Triangle([usize; 3]),
    /// Copied from the nearest known pixel (linear index).
    Nearest(usize),
}

/// Index of the Euclidean-nearest known pixel, ties broken by smallest
/// `(row, col)`.
fn nearest_known(mask: &SamplingMask, row: usize, col: usize) -> Option<usize> {
    let (w, h) = (mask.width() as isize, mask.height() as isize);
    let (y, x) = (row as isize, col as isize);
    let mut best: Option<(isize, isize, isize)> = None; // (d2, row, col)
    let max_r = w.max(h);
    let consider = |yy: isize, xx: isize, best: &mut Option<(isize, isize, isize)>| {
        if yy < 0 || xx < 0 || yy >= h || xx >= w || !mask.is_known(yy as usize, xx as usize) {
            return;
        }
        let cand = ((yy - y).pow(2) + (xx - x).pow(2), yy, xx);
        if best.is_none_or(|b| cand < b) {
            *best = Some(cand);
        }
    };
    for r in 0..=max_r {
        // Every pixel on ring r is at least r away.
        if best.is_some_and(|b| r * r > b.0) {
            break;
        }
        if r == 0 {
            consider(y, x, &mut best);
            continue;
        }
        for yy in (y - r)..=(y + r) {
            if yy == y - r || yy == y + r {
                for xx in (x - r)..=(x + r) {
                    consider(yy, xx, &mut best);
                }
            } else {
                consider(yy, x - r, &mut best);
                consider(yy, x + r, &mut best);
            }
        }
    }
    best.map(|(_, yy, xx)| yy as usize * mask.width() + xx as usize)
}

/// Fills each unknown pixel with its nearest known sample.
pub fn nearest_neighbor_fill(image: &ImageGrid, mask: &SamplingMask) -> Result<ImageGrid> {
    image.check_same_dims(mask.width(), mask.height())?;
    if mask.known_count() == 0 {
        return Err(FsrError::EmptyMask);
    }
    let mut out = mask.apply(image)?;
    for row in 0..image.height() {
        for col in 0..image.width() {
            if mask.is_known(row, col) {
                continue;
            }
            let src = nearest_known(mask, row, col).expect("mask has known samples");
            out.set(row, col, image.samples()[src]);
        }
    }
    Ok(out)
}

struct Sample {
    position: Point2<f64>,
    index: usize,
}

impl HasPosition for Sample {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.position
    }
}

/// Result of [`linear_triangulation_fill`].
#[derive(Clone, Debug)]
pub struct LinearFill {
    pub image: ImageGrid,
    pub sources: Vec<PixelSource>,
    /// True when no triangle could be formed and every unknown pixel was
    /// filled by nearest neighbour.
    pub nearest_fallback: bool,
}

/// Piecewise-linear interpolation over the Delaunay triangulation of the
/// known positions; pixels outside the convex hull take their nearest known
/// sample.
pub fn linear_triangulation_fill(image: &ImageGrid, mask: &SamplingMask) -> Result<LinearFill> {
    image.check_same_dims(mask.width(), mask.height())?;
    if mask.known_count() == 0 {
        return Err(FsrError::EmptyMask);
    }
    let (width, height) = (image.width(), image.height());
    let samples: Vec<Sample> = mask
        .flags()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k)
        .map(|(i, _)| Sample {
            position: Point2::new((i % width) as f64, (i / width) as f64),
            index: i,
        })
        .collect();
    let triangulation: DelaunayTriangulation<Sample> = DelaunayTriangulation::bulk_load(samples)
        .map_err(|e| FsrError::Format {
            format: "triangulation",
            reason: e.to_string(),
        })?;

    let values = image.samples();
    let mut out = mask.apply(image)?;
    let mut sources: Vec<Option<PixelSource>> = mask
        .flags()
        .iter()
        .map(|&k| k.then_some(PixelSource::Known))
        .collect();

    let mut triangles = 0;
    for face in triangulation.inner_faces() {
        triangles += 1;
        let idx = face.vertices().map(|v| v.data().index);
        let pos = idx.map(|i| ((i % width) as f64, (i / width) as f64));
        let (x0, y0) = pos[0];
        let (x1, y1) = pos[1];
        let (x2, y2) = pos[2];
        let det = (y1 - y2) * (x0 - x2) + (x2 - x1) * (y0 - y2);
        if det == 0.0 {
            continue;
        }
        let xmin = x0.min(x1).min(x2) as usize;
        let xmax = x0.max(x1).max(x2) as usize;
        let ymin = y0.min(y1).min(y2) as usize;
        let ymax = y0.max(y1).max(y2) as usize;
        for y in ymin..=ymax {
            for x in xmin..=xmax {
                let i = y * width + x;
                if sources[i].is_some() {
                    continue;
                }
                let (px, py) = (x as f64, y as f64);
                let l0 = ((y1 - y2) * (px - x2) + (x2 - x1) * (py - y2)) / det;
                let l1 = ((y2 - y0) * (px - x2) + (x0 - x2) * (py - y2)) / det;
                let l2 = 1.0 - l0 - l1;
                const EPS: f64 = 1e-12;
                if l0 < -EPS || l1 < -EPS || l2 < -EPS {
                    continue;
                }
                let lambda = [l0.max(0.0), l1.max(0.0), l2.max(0.0)];
                let norm: f64 = lambda.iter().sum();
                let v = lambda
                    .iter()
                    .zip(idx)
                    .map(|(l, j)| l * values[j])
                    .sum::<f64>()
                    / norm;
                let lo = idx.iter().map(|&j| values[j]).fold(f64::INFINITY, f64::min);
                let hi = idx
                    .iter()
                    .map(|&j| values[j])
                    .fold(f64::NEG_INFINITY, f64::max);
                out.set(y, x, v.clamp(lo, hi));
                sources[i] = Some(PixelSource::Triangle(idx));
            }
        }
    }

    let mut resolved = Vec::with_capacity(width * height);
    for (i, src) in sources.into_iter().enumerate() {
        let src = match src {
            Some(s) => s,
            None => {
                let j = nearest_known(mask, i / width, i % width).expect("mask has known samples");
                out.set(i / width, i % width, values[j]);
                PixelSource::Nearest(j)
            }
        };
        resolved.push(src);
    }
    Ok(LinearFill {
        image: out,
        sources: resolved,
        nearest_fallback: triangles == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::generate_mask;

    fn textured(w: usize, h: usize) -> ImageGrid {
        ImageGrid::from_fn(w, h, |r, c| ((r * 37 + c * 91 + r * c * 7) % 256) as f64).unwrap()
    }

    #[test]
    fn single_sample_floods_image() {
        let img = textured(9, 7);
        let mut mask = SamplingMask::empty(9, 7).unwrap();
        mask.set(3, 4, true);
        let out = nearest_neighbor_fill(&img, &mask).unwrap();
        assert!(out.samples().iter().all(|&v| v == img.get(3, 4)));
        let lin = linear_triangulation_fill(&img, &mask).unwrap();
        assert!(lin.nearest_fallback);
        assert_eq!(lin.image, out);
    }

    #[test]
    fn full_mask_is_identity() {
        let img = textured(10, 6);
        let mask = SamplingMask::full(10, 6).unwrap();
        assert_eq!(nearest_neighbor_fill(&img, &mask).unwrap(), img);
        assert_eq!(linear_triangulation_fill(&img, &mask).unwrap().image, img);
    }

    #[test]
    fn empty_mask_is_an_error() {
        let img = textured(4, 4);
        let mask = SamplingMask::empty(4, 4).unwrap();
        assert!(matches!(
            nearest_neighbor_fill(&img, &mask),
            Err(FsrError::EmptyMask)
        ));
        assert!(matches!(
            linear_triangulation_fill(&img, &mask),
            Err(FsrError::EmptyMask)
        ));
    }

    #[test]
    fn opposite_corners_split_on_bisector() {
        let img =
            ImageGrid::from_fn(8, 6, |r, c| if (r, c) == (0, 0) { 10.0 } else { 200.0 }).unwrap();
        let mut mask = SamplingMask::empty(8, 6).unwrap();
        mask.set(0, 0, true);
        mask.set(5, 7, true);
        let out = nearest_neighbor_fill(&img, &mask).unwrap();
        for r in 0..6i64 {
            for c in 0..8i64 {
                let d0 = r * r + c * c;
                let d1 = (r - 5).pow(2) + (c - 7).pow(2);
                // ties go to the smaller (row, col), i.e. the (0, 0) sample
                let expected = if d0 <= d1 { 10.0 } else { 200.0 };
                assert_eq!(out.get(r as usize, c as usize), expected, "({r},{c})");
            }
        }
    }

    #[test]
    fn nearest_matches_brute_force() {
        let img = textured(23, 17);
        let mask = generate_mask(23, 17, 0.07, 5).unwrap();
        let out = nearest_neighbor_fill(&img, &mask).unwrap();
        for r in 0..17 {
            for c in 0..23 {
                let mut best = (i64::MAX, 0, 0);
                for rr in 0..17 {
                    for cc in 0..23 {
                        if mask.is_known(rr, cc) {
                            let d = (rr as i64 - r as i64).pow(2) + (cc as i64 - c as i64).pow(2);
                            best = best.min((d, rr, cc));
                        }
                    }
                }
                assert_eq!(out.get(r, c), img.get(best.1, best.2));
            }
        }
    }

    #[test]
    fn plane_is_reproduced() {
        let img =
            ImageGrid::from_fn(32, 32, |r, c| 0.7 * r as f64 - 1.3 * c as f64 + 60.0).unwrap();
        let mask = generate_mask(32, 32, 0.2, 3).unwrap();
        let fill = linear_triangulation_fill(&img, &mask).unwrap();
        assert!(!fill.nearest_fallback);
        for (i, src) in fill.sources.iter().enumerate() {
            if let PixelSource::Triangle(_) = src {
                assert!((fill.image.samples()[i] - img.samples()[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn collinear_samples_fall_back() {
        let img = textured(8, 8);
        let mut mask = SamplingMask::empty(8, 8).unwrap();
        for c in [1, 3, 6] {
            mask.set(2, c, true);
        }
        let fill = linear_triangulation_fill(&img, &mask).unwrap();
        assert!(fill.nearest_fallback);
        assert_eq!(fill.image, nearest_neighbor_fill(&img, &mask).unwrap());
    }

    #[test]
    fn interpolation_stays_within_triangle_range() {
        let img = textured(32, 32);
        let mask = generate_mask(32, 32, 0.3, 9).unwrap();
        let fill = linear_triangulation_fill(&img, &mask).unwrap();
        let v = img.samples();
        for (i, src) in fill.sources.iter().enumerate() {
            let out = fill.image.samples()[i];
            match *src {
                PixelSource::Known => assert_eq!(out, v[i]),
                PixelSource::Triangle(t) => {
                    let lo = t.iter().map(|&j| v[j]).fold(f64::INFINITY, f64::min);
                    let hi = t.iter().map(|&j| v[j]).fold(f64::NEG_INFINITY, f64::max);
                    assert!(
                        out >= lo && out <= hi,
                        "pixel {i}: {out} not in [{lo}, {hi}]"
                    );
                }
                PixelSource::Nearest(j) => {
                    assert!(mask.flags()[j]);
                    assert_eq!(out, v[j]);
                }
            }
        }
    }
}

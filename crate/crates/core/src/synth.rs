//! Seeded generators of test inputs.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::BifilteredComplex;
use crate::field::{Coeff, FieldChar};
use crate::grade::{Coord, Grade};
use crate::ingest::{sort_and_index, Mesh, MultiCriticalGenerator, RawGenerator};
use crate::reduce::order_preserving_addition;

/// Upper bound on generators produced by [`random_complex`].
pub const MAX_GENERATORS: usize = 60;

/// Side of the grade grid used by [`random_complex`].
pub const GRID: u32 = 4;

/// Closed simplicial complex on a few vertices, faces sorted by dimension
/// then vertex tuple, at most `cap` simplices and dimension at most 3.
fn random_simplices(rng: &mut ChaCha8Rng, cap: usize) -> Vec<Vec<usize>> {
    let nv = rng.gen_range(1..=9usize);
    let mut simplices: Vec<Vec<usize>> = (0..nv).map(|v| vec![v]).collect();
    let tops = rng.gen_range(0..=12usize);
    for _ in 0..tops {
        let size = rng.gen_range(2..=4usize).min(nv);
        if size < 2 {
            break;
        }
        let mut verts: Vec<usize> = (0..nv).collect();
        verts.shuffle(rng);
        verts.truncate(size);
        verts.sort_unstable();
        let mut faces = Vec::new();
        for mask in 1u32..(1 << size) {
            if mask.count_ones() >= 2 {
                faces.push(
                    (0..size)
                        .filter(|b| mask & (1 << b) != 0)
                        .map(|b| verts[b])
                        .collect::<Vec<usize>>(),
                );
            }
        }
        let mut merged = simplices.clone();
        merged.extend(faces);
        merged.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        merged.dedup();
        if merged.len() > cap {
            break;
        }
        simplices = merged;
    }
    simplices
}

fn oriented_boundary(
    simplices: &[Vec<usize>],
    s: &[usize],
    field: FieldChar,
) -> Vec<(usize, Coeff)> {
    if s.len() < 2 {
        return Vec::new();
    }
    (0..s.len())
        .map(|j| {
            let face: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &v)| v)
                .collect();
            let pos = simplices
                .iter()
                .position(|t| *t == face)
                .expect("complex is closed");
            let sign = if j % 2 == 0 { 1 } else { field.reduce(-1) };
            (pos, sign)
        })
        .collect()
}

/// Random valid complex over `Z/p` with at most [`MAX_GENERATORS`]
/// generators, dimension at most 3 and grades on a [`GRID`]-square grid.
///
/// A simplicial complex gets monotone grades, then a few random
/// order-preserving additions scramble its boundaries.
pub fn random_complex(seed: u64, p: u32) -> BifilteredComplex {
    let field = FieldChar::new(p).expect("prime characteristic");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let simplices = random_simplices(&mut rng, MAX_GENERATORS);

    let mut grades: Vec<Grade> = Vec::with_capacity(simplices.len());
    let mut raw = Vec::with_capacity(simplices.len());
    for s in &simplices {
        let boundary = oriented_boundary(&simplices, s, field);
        let base = boundary
            .iter()
            .fold(Grade::new(0, 0), |acc, &(f, _)| acc.lub(grades[f]));
        let bump = |rng: &mut ChaCha8Rng, v: u32| {
            if rng.gen_bool(0.4) {
                rng.gen_range(v..GRID)
            } else {
                v
            }
        };
        let g = Grade::new(bump(&mut rng, base.x), bump(&mut rng, base.y));
        grades.push(g);
        raw.push(RawGenerator {
            x: Coord::from_int(g.x as i64),
            y: Coord::from_int(g.y as i64),
            dim: s.len() - 1,
            boundary,
        });
    }
    let mut complex = sort_and_index(&raw, field).expect("generated complex is valid");

    let n = complex.len();
    for _ in 0..rng.gen_range(0..=10usize) {
        if n < 2 {
            break;
        }
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let lambda = rng.gen_range(1..p);
        if let Ok(next) = order_preserving_addition(&complex, a, b, lambda) {
            complex = next;
        }
    }
    complex
}

/// Random antichain of `h` points on the grid, sorted by x.
fn antichain(rng: &mut ChaCha8Rng, h: usize, floor: Grade) -> Vec<(u32, u32)> {
    let span_x = GRID + 2 - floor.x;
    let span_y = GRID + 2 - floor.y;
    let h = h.min(span_x as usize).min(span_y as usize);
    let mut xs: Vec<u32> = (floor.x..floor.x + span_x).collect();
    let mut ys: Vec<u32> = (floor.y..floor.y + span_y).collect();
    xs.shuffle(rng);
    ys.shuffle(rng);
    xs.truncate(h);
    ys.truncate(h);
    xs.sort_unstable();
    ys.sort_unstable_by(|a, b| b.cmp(a));
    xs.into_iter().zip(ys).collect()
}

fn minimal(points: &mut Vec<(u32, u32)>) {
    points.sort_unstable();
    points.dedup();
    let all = points.clone();
    points.retain(|&(x, y)| {
        !all.iter()
            .any(|&(a, b)| (a, b) != (x, y) && a <= x && b <= y)
    });
}

/// Random valid multi-critical simplicial input: every generator has one to
/// `h_max` pairwise incomparable grades, and each of them lies above some
/// grade of every face.
pub fn random_multicritical(seed: u64, p: u32, h_max: usize) -> Vec<MultiCriticalGenerator> {
    let field = FieldChar::new(p).expect("prime characteristic");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let simplices = random_simplices(&mut rng, 24);
    let mut grades: Vec<Vec<(u32, u32)>> = Vec::with_capacity(simplices.len());
    let mut out = Vec::with_capacity(simplices.len());
    for s in &simplices {
        let boundary = oriented_boundary(&simplices, s, field);
        let h = rng.gen_range(1..=h_max);
        let mut pts = if boundary.is_empty() {
            antichain(&mut rng, h, Grade::new(0, 0))
        } else {
            let mut pts = Vec::with_capacity(h);
            for _ in 0..h {
                let mut g = Grade::new(0, 0);
                for &(f, _) in &boundary {
                    let opts = &grades[f];
                    let (x, y) = opts[rng.gen_range(0..opts.len())];
                    g = g.lub(Grade::new(x, y));
                }
                if rng.gen_bool(0.3) {
                    g.x += rng.gen_range(0..2);
                }
                if rng.gen_bool(0.3) {
                    g.y += rng.gen_range(0..2);
                }
                pts.push((g.x, g.y));
            }
            pts
        };
        minimal(&mut pts);
        grades.push(pts.clone());
        out.push(MultiCriticalGenerator {
            dim: s.len() - 1,
            grades: pts
                .into_iter()
                .map(|(x, y)| (Coord::from_int(x as i64), Coord::from_int(y as i64)))
                .collect(),
            boundary,
        });
    }
    out
}

/// Triangulated `side × side` vertex grid, two triangles per square, with
/// randomly perturbed integer vertex coordinates.
pub fn grid_mesh(side: usize, seed: u64) -> Mesh {
    const SPACING: i64 = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let x = j as i64 * SPACING + rng.gen_range(0..SPACING);
            let y = i as i64 * SPACING + rng.gen_range(0..SPACING);
            vertices.push((Coord::from_int(x), Coord::from_int(y)));
        }
    }
    let mut cells = Vec::with_capacity(2 * side * side);
    for i in 0..side.saturating_sub(1) {
        for j in 0..side - 1 {
            let a = i * side + j;
            let (b, c, d) = (a + 1, a + side, a + side + 1);
            cells.push(vec![a, b, d]);
            cells.push(vec![a, c, d]);
        }
    }
    Mesh { vertices, cells }
}

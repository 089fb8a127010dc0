//! Simplicial meshes in the plane: structured builders, P1 shape-function
//! gradients, triangle quadrature, point location and the convex-polygon
//! machinery used by the deformation surgery.

use crate::error::CoreError;
use crate::tensor::{Mat, Vector};
use crate::Result;

pub type Point = [f64; 2];

/// Triangle mesh with shared vertices.
///
/// Meshes produced by surgery may contain hanging nodes (a vertex on the
/// interior of a neighbor's edge); piecewise-affine data remains continuous
/// there as long as the hanging value lies on the neighbor's affine edge
/// function, which every constructor in this crate guarantees.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point>,
    cells: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Point>, cells: Vec<[usize; 3]>) -> TriMesh {
        TriMesh { vertices, cells }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i]
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cell(&self, c: usize) -> [usize; 3] {
        self.cells[c]
    }

    pub fn cells(&self) -> &[[usize; 3]] {
        &self.cells
    }

    pub fn cell_points(&self, c: usize) -> [Point; 3] {
        let [a, b, d] = self.cells[c];
        [self.vertices[a], self.vertices[b], self.vertices[d]]
    }

    /// Signed area of a cell (positive for counter-clockwise orientation).
    pub fn cell_signed_area(&self, c: usize) -> f64 {
        let [p0, p1, p2] = self.cell_points(c);
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]))
    }

    pub fn cell_area(&self, c: usize) -> f64 {
        self.cell_signed_area(c).abs()
    }

    pub fn total_area(&self) -> f64 {
        (0..self.cell_count()).map(|c| self.cell_area(c)).sum()
    }

    pub fn cell_centroid(&self, c: usize) -> Point {
        let [p0, p1, p2] = self.cell_points(c);
        [
            (p0[0] + p1[0] + p2[0]) / 3.0,
            (p0[1] + p1[1] + p2[1]) / 3.0,
        ]
    }

    /// Gradients of the three P1 shape functions on a cell, with the node
    /// indices they belong to.
    pub fn shape_gradients(&self, c: usize) -> ([usize; 3], [Vector; 3]) {
        let nodes = self.cells[c];
        let pts = self.cell_points(c);
        let two_a = 2.0 * self.cell_signed_area(c);
        let mut grads = [Vector::zero(2); 3];
        for k in 0..3 {
            let e = [
                pts[(k + 2) % 3][0] - pts[(k + 1) % 3][0],
                pts[(k + 2) % 3][1] - pts[(k + 1) % 3][1],
            ];
            grads[k] = Vector::D2([-e[1] / two_a, e[0] / two_a]);
        }
        (nodes, grads)
    }

    /// Constant gradient of a piecewise-affine vector field on a cell:
    /// `(Du)_{ij} = ∂u_i/∂x_j`.
    pub fn value_gradient(&self, c: usize, values: &[Vector]) -> Mat {
        let (nodes, grads) = self.shape_gradients(c);
        let mut du = Mat::zero(2);
        for k in 0..3 {
            let u = &values[nodes[k]];
            let g = &grads[k];
            for i in 0..2 {
                for j in 0..2 {
                    du.set(i, j, du.e(i, j) + u.component(i) * g.component(j));
                }
            }
        }
        du
    }

    /// Affine interpolation of nodal vector values at barycentric
    /// coordinates of a cell.
    pub fn interpolate_in_cell(&self, c: usize, bary: [f64; 3], values: &[Vector]) -> Vector {
        let nodes = self.cells[c];
        let mut out = Vector::zero(2);
        for k in 0..3 {
            out = out.add(&values[nodes[k]].scale(bary[k]));
        }
        out
    }

    pub fn point_in_cell(&self, c: usize, p: Point) -> Option<[f64; 3]> {
        let [p0, p1, p2] = self.cell_points(c);
        let two_a = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        if two_a.abs() < 1e-300 {
            return None;
        }
        let l1 = ((p[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p[1] - p0[1])) / two_a;
        let l2 = ((p1[0] - p0[0]) * (p[1] - p0[1]) - (p[0] - p0[0]) * (p1[1] - p0[1])) / two_a;
        let l0 = 1.0 - l1 - l2;
        let eps = 1e-10;
        if l0 >= -eps && l1 >= -eps && l2 >= -eps {
            Some([l0.max(0.0), l1.max(0.0), l2.max(0.0)])
        } else {
            None
        }
    }

    /// Edges that belong to exactly one cell, as (cell, local edge) pairs.
    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        use std::collections::HashMap;
        let mut seen: HashMap<(usize, usize), (usize, usize, usize)> = HashMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (cell[k], cell[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                seen.entry(key)
                    .and_modify(|e| e.2 += 1)
                    .or_insert((c, k, 1));
            }
        }
        let mut out: Vec<(usize, usize)> = seen
            .values()
            .filter(|(_, _, count)| *count == 1)
            .map(|(c, k, _)| (*c, *k))
            .collect();
        out.sort_unstable();
        out
    }

    /// Vertices on the boundary, sorted.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        let mut nodes: Vec<usize> = self
            .boundary_edges()
            .iter()
            .flat_map(|&(c, k)| {
                let cell = self.cells[c];
                [cell[k], cell[(k + 1) % 3]]
            })
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }

    /// The boundary as closed vertex loops, each oriented as stored in the
    /// cells (counter-clockwise for positively oriented meshes).
    pub fn boundary_loops(&self) -> Vec<Vec<usize>> {
        use std::collections::HashMap;
        let mut next: HashMap<usize, usize> = HashMap::new();
        for (c, k) in self.boundary_edges() {
            let cell = self.cells[c];
            next.insert(cell[k], cell[(k + 1) % 3]);
        }
        let mut loops = Vec::new();
        let mut starts: Vec<usize> = next.keys().copied().collect();
        starts.sort_unstable();
        let mut used = std::collections::HashSet::new();
        for start in starts {
            if used.contains(&start) {
                continue;
            }
            let mut walk = vec![start];
            used.insert(start);
            let mut cur = start;
            while let Some(&n) = next.get(&cur) {
                if n == start {
                    break;
                }
                if !used.insert(n) {
                    break;
                }
                walk.push(n);
                cur = n;
            }
            loops.push(walk);
        }
        loops
    }

    /// Structured unit-square mesh with `n × n` quads split into triangles.
    pub fn unit_square(n: usize) -> TriMesh {
        TriMesh::rectangle([0.0, 0.0], [1.0, 1.0], n, n)
    }

    pub fn rectangle(lo: Point, hi: Point, nx: usize, ny: usize) -> TriMesh {
        let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push([
                    lo[0] + (hi[0] - lo[0]) * i as f64 / nx as f64,
                    lo[1] + (hi[1] - lo[1]) * j as f64 / ny as f64,
                ]);
            }
        }
        let idx = |i: usize, j: usize| j * (nx + 1) + i;
        let mut cells = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                cells.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
                cells.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        TriMesh::new(vertices, cells)
    }

    /// Concentric disk triangulation of the unit ball: `rings` rings with a
    /// common angular resolution.
    pub fn disk(rings: usize) -> TriMesh {
        let sectors = (3 * rings).max(12);
        let mut vertices = vec![[0.0, 0.0]];
        for ring in 1..=rings {
            let r = ring as f64 / rings as f64;
            for s in 0..sectors {
                let t = 2.0 * std::f64::consts::PI * s as f64 / sectors as f64;
                vertices.push([r * t.cos(), r * t.sin()]);
            }
        }
        let ring_start = |ring: usize| 1 + (ring - 1) * sectors;
        let mut cells = Vec::new();
        for s in 0..sectors {
            cells.push([0, ring_start(1) + s, ring_start(1) + (s + 1) % sectors]);
        }
        for ring in 1..rings {
            let inner = ring_start(ring);
            let outer = ring_start(ring + 1);
            for s in 0..sectors {
                let sn = (s + 1) % sectors;
                cells.push([inner + s, outer + s, outer + sn]);
                cells.push([inner + s, outer + sn, inner + sn]);
            }
        }
        TriMesh::new(vertices, cells)
    }

    /// Annulus with geometrically graded radii from `inner` to `outer`,
    /// suitable for resolving a near-puncture.
    pub fn annulus_graded(inner: f64, outer: f64, rings: usize, sectors: usize) -> TriMesh {
        let mut vertices = Vec::new();
        for ring in 0..=rings {
            let t = ring as f64 / rings as f64;
            let r = inner * (outer / inner).powf(t);
            for s in 0..sectors {
                let a = 2.0 * std::f64::consts::PI * s as f64 / sectors as f64;
                vertices.push([r * a.cos(), r * a.sin()]);
            }
        }
        let mut cells = Vec::new();
        for ring in 0..rings {
            let lo = ring * sectors;
            let hi = (ring + 1) * sectors;
            for s in 0..sectors {
                let sn = (s + 1) % sectors;
                cells.push([lo + s, hi + s, hi + sn]);
                cells.push([lo + s, hi + sn, lo + sn]);
            }
        }
        TriMesh::new(vertices, cells)
    }
}

/// Uniform-bin point locator over a mesh.
pub struct Locator {
    bbox: [Point; 2],
    nx: usize,
    ny: usize,
    bins: Vec<Vec<u32>>,
}

impl Locator {
    pub fn build(mesh: &TriMesh) -> Locator {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in mesh.vertices() {
            for k in 0..2 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        let n = (mesh.cell_count() as f64).sqrt().ceil() as usize;
        let (nx, ny) = (n.max(1), n.max(1));
        let mut bins = vec![Vec::new(); nx * ny];
        let span = [
            (hi[0] - lo[0]).max(1e-300),
            (hi[1] - lo[1]).max(1e-300),
        ];
        for c in 0..mesh.cell_count() {
            let pts = mesh.cell_points(c);
            let (mut bx0, mut by0, mut bx1, mut by1) = (usize::MAX, usize::MAX, 0, 0);
            for p in pts {
                let ix = (((p[0] - lo[0]) / span[0] * nx as f64) as usize).min(nx - 1);
                let iy = (((p[1] - lo[1]) / span[1] * ny as f64) as usize).min(ny - 1);
                bx0 = bx0.min(ix);
                by0 = by0.min(iy);
                bx1 = bx1.max(ix);
                by1 = by1.max(iy);
            }
            for iy in by0..=by1 {
                for ix in bx0..=bx1 {
                    bins[iy * nx + ix].push(c as u32);
                }
            }
        }
        Locator {
            bbox: [lo, hi],
            nx,
            ny,
            bins,
        }
    }

    /// Find a cell containing the point, with barycentric coordinates.
    pub fn locate(&self, mesh: &TriMesh, p: Point) -> Option<(usize, [f64; 3])> {
        let [lo, hi] = self.bbox;
        let margin = 1e-9 * ((hi[0] - lo[0]).abs() + (hi[1] - lo[1]).abs() + 1.0);
        if p[0] < lo[0] - margin
            || p[0] > hi[0] + margin
            || p[1] < lo[1] - margin
            || p[1] > hi[1] + margin
        {
            return None;
        }
        let span = [
            (hi[0] - lo[0]).max(1e-300),
            (hi[1] - lo[1]).max(1e-300),
        ];
        let ix = (((p[0] - lo[0]) / span[0] * self.nx as f64) as isize)
            .clamp(0, self.nx as isize - 1) as usize;
        let iy = (((p[1] - lo[1]) / span[1] * self.ny as f64) as isize)
            .clamp(0, self.ny as isize - 1) as usize;
        for &c in &self.bins[iy * self.nx + ix] {
            if let Some(bary) = mesh.point_in_cell(c as usize, p) {
                return Some((c as usize, bary));
            }
        }
        // fall back to neighboring bins; points on bin edges can miss
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let jx = ix as i64 + dx;
                let jy = iy as i64 + dy;
                if jx < 0 || jy < 0 || jx >= self.nx as i64 || jy >= self.ny as i64 {
                    continue;
                }
                for &c in &self.bins[jy as usize * self.nx + jx as usize] {
                    if let Some(bary) = mesh.point_in_cell(c as usize, p) {
                        return Some((c as usize, bary));
                    }
                }
            }
        }
        None
    }
}

/// Symmetric triangle quadrature rules (barycentric points, weights summing
/// to one). Orders 1, 2, 4 and 5 are available; requests in between round
/// up.
pub fn triangle_quadrature(order: usize) -> Vec<([f64; 3], f64)> {
    match order {
        0 | 1 => vec![([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 1.0)],
        2 | 3 => {
            let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
            vec![
                ([a, b, b], 1.0 / 3.0),
                ([b, a, b], 1.0 / 3.0),
                ([b, b, a], 1.0 / 3.0),
            ]
        }
        4 => {
            let (a1, w1) = (0.445_948_490_915_965, 0.223_381_589_678_011);
            let (a2, w2) = (0.091_576_213_509_771, 0.109_951_743_655_322);
            let mut pts = Vec::with_capacity(6);
            for (a, w) in [(a1, w1), (a2, w2)] {
                let c = 1.0 - 2.0 * a;
                pts.push(([c, a, a], w));
                pts.push(([a, c, a], w));
                pts.push(([a, a, c], w));
            }
            pts
        }
        _ => {
            let mut pts = vec![([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225)];
            let (a1, w1) = (0.470_142_064_105_115, 0.132_394_152_788_506);
            let (a2, w2) = (0.101_286_507_323_456, 0.125_939_180_544_827);
            for (a, w) in [(a1, w1), (a2, w2)] {
                let c = 1.0 - 2.0 * a;
                pts.push(([c, a, a], w));
                pts.push(([a, c, a], w));
                pts.push(([a, a, c], w));
            }
            pts
        }
    }
}

/// Map barycentric coordinates to a point of a triangle.
pub fn bary_to_point(tri: &[Point; 3], bary: [f64; 3]) -> Point {
    [
        bary[0] * tri[0][0] + bary[1] * tri[1][0] + bary[2] * tri[2][0],
        bary[0] * tri[0][1] + bary[1] * tri[1][1] + bary[2] * tri[2][1],
    ]
}

// ------------------------------------------------------------------
// Convex polygon machinery
// ------------------------------------------------------------------

/// Shoelace area (positive for counter-clockwise polygons).
pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        acc += poly[i][0] * poly[j][1] - poly[j][0] * poly[i][1];
    }
    0.5 * acc
}

/// Regular polygon approximation of a disk, counter-clockwise.
pub fn regular_polygon(center: Point, radius: f64, segments: usize) -> Vec<Point> {
    (0..segments)
        .map(|s| {
            let t = 2.0 * std::f64::consts::PI * s as f64 / segments as f64;
            [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
        })
        .collect()
}

/// Clip a polygon against the half-plane left of the directed line
/// `a -> b` (Sutherland–Hodgman step).
pub fn clip_halfplane(poly: &[Point], a: Point, b: Point) -> Vec<Point> {
    let side = |p: Point| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    let mut out = Vec::with_capacity(poly.len() + 2);
    let n = poly.len();
    for i in 0..n {
        let cur = poly[i];
        let nxt = poly[(i + 1) % n];
        let (sc, sn) = (side(cur), side(nxt));
        if sc >= 0.0 {
            out.push(cur);
        }
        if (sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0) {
            let t = sc / (sc - sn);
            out.push([
                cur[0] + t * (nxt[0] - cur[0]),
                cur[1] + t * (nxt[1] - cur[1]),
            ]);
        }
    }
    out
}

/// Intersection of a polygon with a convex counter-clockwise clip polygon.
pub fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut poly = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if poly.len() < 3 {
            return Vec::new();
        }
        poly = clip_halfplane(&poly, clip[i], clip[(i + 1) % n]);
    }
    dedup_polygon(poly)
}

/// Convex-polygon difference `subject ∖ hole` as a list of convex pieces.
///
/// Walks the hole edges, peeling off the part of the subject strictly
/// outside each edge; the pieces partition the difference.
pub fn subtract_convex(subject: &[Point], hole: &[Point]) -> Vec<Vec<Point>> {
    let mut pieces = Vec::new();
    let mut remaining = subject.to_vec();
    let n = hole.len();
    for i in 0..n {
        if remaining.len() < 3 {
            break;
        }
        let (a, b) = (hole[i], hole[(i + 1) % n]);
        // part of `remaining` right of the edge (outside the hole)
        let outside = dedup_polygon(clip_halfplane(&remaining, b, a));
        if outside.len() >= 3 && polygon_area(&outside).abs() > 1e-14 {
            pieces.push(outside);
        }
        remaining = dedup_polygon(clip_halfplane(&remaining, a, b));
    }
    pieces
}

fn dedup_polygon(poly: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(poly.len());
    let scale: f64 = poly
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1.0, f64::max);
    let tol = 1e-12 * scale;
    for p in poly {
        if let Some(last) = out.last() {
            if (last[0] - p[0]).abs() <= tol && (last[1] - p[1]).abs() <= tol {
                continue;
            }
        }
        out.push(p);
    }
    while out.len() >= 2 {
        let first = out[0];
        let last = *out.last().unwrap();
        if (first[0] - last[0]).abs() <= tol && (first[1] - last[1]).abs() <= tol {
            out.pop();
        } else {
            break;
        }
    }
    out
}

/// Fan triangulation of a convex polygon.
pub fn fan_triangulate(poly: &[Point]) -> Vec<[Point; 3]> {
    let mut tris = Vec::new();
    for i in 1..poly.len().saturating_sub(1) {
        tris.push([poly[0], poly[i], poly[i + 1]]);
    }
    tris
}

/// Builder assembling a mesh from triangles with vertex deduplication.
pub struct MeshBuilder {
    vertices: Vec<Point>,
    cells: Vec<[usize; 3]>,
    lookup: std::collections::HashMap<(i64, i64), usize>,
    quantum: f64,
}

impl MeshBuilder {
    pub fn new(quantum: f64) -> MeshBuilder {
        MeshBuilder {
            vertices: Vec::new(),
            cells: Vec::new(),
            lookup: std::collections::HashMap::new(),
            quantum,
        }
    }

    pub fn add_vertex(&mut self, p: Point) -> usize {
        let key = (
            (p[0] / self.quantum).round() as i64,
            (p[1] / self.quantum).round() as i64,
        );
        if let Some(&i) = self.lookup.get(&key) {
            return i;
        }
        let i = self.vertices.len();
        self.vertices.push(p);
        self.lookup.insert(key, i);
        i
    }

    /// Add a triangle, fixing orientation to counter-clockwise and
    /// dropping degenerate slivers below the quantum scale.
    pub fn add_triangle(&mut self, tri: [Point; 3]) {
        let area = 0.5
            * ((tri[1][0] - tri[0][0]) * (tri[2][1] - tri[0][1])
                - (tri[2][0] - tri[0][0]) * (tri[1][1] - tri[0][1]));
        if area.abs() < self.quantum * self.quantum {
            return;
        }
        let t = if area > 0.0 {
            tri
        } else {
            [tri[0], tri[2], tri[1]]
        };
        let a = self.add_vertex(t[0]);
        let b = self.add_vertex(t[1]);
        let c = self.add_vertex(t[2]);
        if a != b && b != c && a != c {
            self.cells.push([a, b, c]);
        }
    }

    pub fn build(self) -> TriMesh {
        TriMesh::new(self.vertices, self.cells)
    }
}

/// Validate that every cell of a mesh is positively oriented.
pub fn check_positive_orientation(mesh: &TriMesh) -> Result<()> {
    for c in 0..mesh.cell_count() {
        let a = mesh.cell_signed_area(c);
        if a <= 0.0 {
            return Err(CoreError::NonPositiveDet { cell: c, det: a });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_square_area_and_boundary() {
        let mesh = TriMesh::unit_square(4);
        assert_abs_diff_eq!(mesh.total_area(), 1.0, epsilon = 1e-14);
        assert_eq!(mesh.boundary_nodes().len(), 16);
        let loops = mesh.boundary_loops();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), 16);
        check_positive_orientation(&mesh).unwrap();
    }

    #[test]
    fn disk_mesh_approximates_unit_disk() {
        let mesh = TriMesh::disk(8);
        let err = (mesh.total_area() - std::f64::consts::PI).abs();
        assert!(err < 0.05, "disk area error {err}");
        check_positive_orientation(&mesh).unwrap();
        // boundary nodes all on the unit circle
        for b in mesh.boundary_nodes() {
            let v = mesh.vertex(b);
            assert_abs_diff_eq!((v[0].powi(2) + v[1].powi(2)).sqrt(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn annulus_has_two_loops() {
        let mesh = TriMesh::annulus_graded(1e-3, 1.0, 12, 16);
        check_positive_orientation(&mesh).unwrap();
        assert_eq!(mesh.boundary_loops().len(), 2);
    }

    #[test]
    fn shape_gradients_reproduce_affine_fields() {
        let mesh = TriMesh::unit_square(3);
        // u(x) = A x + b
        let a = Mat::D2([[1.3, -0.4], [0.2, 0.9]]);
        let values: Vec<Vector> = mesh
            .vertices()
            .iter()
            .map(|&p| a.apply(&Vector::D2(p)).add(&Vector::D2([0.1, -0.2])))
            .collect();
        for c in 0..mesh.cell_count() {
            let du = mesh.value_gradient(c, &values);
            assert!(du.sub(&a).norm() < 1e-12);
        }
    }

    #[test]
    fn quadrature_integrates_polynomials() {
        // integrate x^2 y over the reference triangle (0,0),(1,0),(0,1):
        // exact value 1/60
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        for order in [4usize, 5] {
            let mut acc = 0.0;
            for (bary, w) in triangle_quadrature(order) {
                let p = bary_to_point(&tri, bary);
                acc += w * p[0] * p[0] * p[1];
            }
            acc *= 0.5; // area of reference triangle
            assert_abs_diff_eq!(acc, 1.0 / 60.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn locator_finds_points() {
        let mesh = TriMesh::disk(6);
        let loc = Locator::build(&mesh);
        let inside = [[0.0, 0.0], [0.5, 0.1], [-0.3, 0.6], [0.9, 0.0]];
        for p in inside {
            let (c, bary) = loc.locate(&mesh, p).expect("point should be found");
            let q = bary_to_point(&mesh.cell_points(c), bary);
            assert_abs_diff_eq!(q[0], p[0], epsilon = 1e-9);
            assert_abs_diff_eq!(q[1], p[1], epsilon = 1e-9);
        }
        assert!(loc.locate(&mesh, [2.0, 0.0]).is_none());
    }

    #[test]
    fn clipping_and_subtraction_partition_area() {
        let tri = vec![[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]];
        let hole = regular_polygon([0.5, 0.5], 0.3, 12);
        let inter = clip_convex(&tri, &hole);
        let pieces = subtract_convex(&tri, &hole);
        let total: f64 =
            polygon_area(&inter) + pieces.iter().map(|p| polygon_area(p)).sum::<f64>();
        assert_abs_diff_eq!(total, polygon_area(&tri), epsilon = 1e-10);
    }

    #[test]
    fn mesh_builder_dedups_vertices() {
        let mut b = MeshBuilder::new(1e-9);
        b.add_triangle([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        b.add_triangle([[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let mesh = b.build();
        assert_eq!(mesh.vertex_count(), 4);
        assert_eq!(mesh.cell_count(), 2);
        check_positive_orientation(&mesh).unwrap();
    }
}

//! The complete hyperbolic structure: Newton solution of the gluing
//! equations, interval certification, and hyperbolic volume.
//!
//! The completeness system consists of all edge equations but one (their sum
//! is dependent) with value `2 i pi`, plus the vanishing of the meridian
//! holonomy. Solutions with every shape in the upper half plane are
//! geometric; certification encloses the approximate solution in a small
//! rectangle box and runs a Krawczyk contraction test with interval
//! arithmetic.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::cusp::{
    edge_rows, holonomy, longitude_from_basis, meridian_from_basis, peripheral_basis,
    CuspTriangulation, HolonomyRow, PeripheralCurve,
};
use crate::homology::H1Presentation;
use crate::interval::{CInterval, Interval};
use crate::tri::{IdealTriangulation, TriError};

pub const PI: f64 = core::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub enum GeomError {
    NoConvergence,
    DegenerateShape,
    CertificationFailed,
    NonPositiveShape,
    Tri(TriError),
}

impl From<TriError> for GeomError {
    fn from(e: TriError) -> GeomError {
        GeomError::Tri(e)
    }
}

/// Complex shapes of the tetrahedra, `z_i` not in `{0, 1}`.
#[derive(Clone, Debug)]
pub struct ShapeVector {
    pub z: Vec<Complex64>,
}

impl ShapeVector {
    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// `(Log z, Log z', Log z'')` of one tetrahedron, principal branch.
    pub fn logs(&self, t: usize) -> (Complex64, Complex64, Complex64) {
        let z = self.z[t];
        let zp = 1.0 / (1.0 - z);
        let zpp = (z - 1.0) / z;
        (z.ln(), zp.ln(), zpp.ln())
    }

    pub fn min_im(&self) -> f64 {
        self.z.iter().map(|z| z.im).fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates a holonomy row at a shape vector (principal logs), including
/// its `i pi` constant.
pub fn eval_row(row: &HolonomyRow, shapes: &ShapeVector) -> Complex64 {
    let mut acc = Complex64::new(0.0, row.const_pi as f64 * PI);
    for t in 0..row.n() {
        let (lz, lzp, lzpp) = shapes.logs(t);
        acc += lz * row.c[t] as f64 + lzp * row.c1[t] as f64 + lzpp * row.c2[t] as f64;
    }
    acc
}

/// The square system imposed for the complete structure: `N - 1` edge rows
/// (all but `dropped_edge`) with target `2 i pi`, and the meridian row with
/// target `0`.
pub struct CompletenessSystem {
    pub rows: Vec<HolonomyRow>,
    /// Target of each equation as an integer multiple of `i pi`.
    pub targets_ipi: Vec<i64>,
    pub meridian: PeripheralCurve,
    pub longitude: PeripheralCurve,
}

impl CompletenessSystem {
    pub fn new(tri: &IdealTriangulation, cusp: &CuspTriangulation) -> Result<Self, TriError> {
        let n = cusp.n_tetrahedra();
        let (b1, b2) = peripheral_basis(cusp);
        let pres = H1Presentation::new(tri, &cusp.quotient);
        let (longitude, a, b) = longitude_from_basis(cusp, &pres, &b1, &b2)?;
        let meridian = meridian_from_basis(cusp, &b1, &b2, &longitude, a, b);

        let dropped = cusp.quotient.n_edges() - 1;
        let mut rows: Vec<HolonomyRow> = edge_rows(cusp)
            .into_iter()
            .enumerate()
            .filter(|(j, _)| *j != dropped)
            .map(|(_, r)| r)
            .collect();
        let mut targets = vec![2i64; rows.len()];
        rows.push(holonomy(cusp, &meridian));
        targets.push(0);
        debug_assert_eq!(rows.len(), n);
        Ok(CompletenessSystem {
            rows,
            targets_ipi: targets,
            meridian,
            longitude,
        })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Residual vector at a shape assignment.
    pub fn residual(&self, shapes: &ShapeVector) -> Vec<Complex64> {
        self.rows
            .iter()
            .zip(&self.targets_ipi)
            .map(|(row, &t)| eval_row(row, shapes) - Complex64::new(0.0, t as f64 * PI))
            .collect()
    }

    /// Holomorphic Jacobian `d residual / d z`.
    pub fn jacobian(&self, shapes: &ShapeVector) -> Vec<Vec<Complex64>> {
        let n = self.n();
        let mut j = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for (r, row) in self.rows.iter().enumerate() {
            for t in 0..n {
                let z = shapes.z[t];
                j[r][t] = row.c[t] as f64 / z + row.c1[t] as f64 / (1.0 - z)
                    + row.c2[t] as f64 / (z * (z - 1.0));
            }
        }
        j
    }

    pub fn max_residual(&self, shapes: &ShapeVector) -> f64 {
        self.residual(shapes)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Dense complex linear solve with partial pivoting. Returns `None` on a
/// (numerically) singular matrix.
fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .norm_sqr()
                .partial_cmp(&a[j][col].norm_sqr())
                .unwrap_or(core::cmp::Ordering::Equal)
        })?;
        if a[piv][col].norm_sqr() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for c in col..n {
                let d = f * a[col][c];
                a[r][c] -= d;
            }
            let d = f * b[col];
            b[r] -= d;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in (row + 1)..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

const RESIDUAL_TOL: f64 = 1e-12;
const DEGENERATE_TOL: f64 = 1e-8;
const MAX_ITER: usize = 200;
const RESTARTS: usize = 20;

/// The meridian representative may wind around the cusp, shifting its
/// holonomy at the complete structure by a multiple of `2 i pi`; the solver
/// scans these windings.
const WINDINGS: [i64; 7] = [0, 1, -1, 2, -2, 3, -3];

/// A solved completeness system: the shapes together with the meridian
/// winding that made the equations consistent.
#[derive(Clone, Debug)]
pub struct SolvedStructure {
    pub shapes: ShapeVector,
    pub meridian_winding: i64,
}

impl CompletenessSystem {
    /// The same system with the meridian target shifted to `2 k i pi`.
    pub fn with_winding(&self, k: i64) -> CompletenessSystem {
        let mut sys = CompletenessSystem {
            rows: self.rows.clone(),
            targets_ipi: self.targets_ipi.clone(),
            meridian: self.meridian.clone(),
            longitude: self.longitude.clone(),
        };
        let last = sys.targets_ipi.len() - 1;
        sys.targets_ipi[last] = 2 * k;
        sys
    }
}

/// Newton iteration for the complete structure, starting from the regular
/// shape `exp(i pi / 3)` with deterministic pseudo-random restarts in the
/// upper half plane.
pub fn solve_complete_structure(
    tri: &IdealTriangulation,
    cusp: &CuspTriangulation,
) -> Result<ShapeVector, GeomError> {
    let system = CompletenessSystem::new(tri, cusp)?;
    solve_system(&system).map(|s| s.shapes)
}

/// Solves the system over the meridian windings; a solution with all shapes
/// in the upper half plane wins over any other converged solution.
pub fn solve_system(system: &CompletenessSystem) -> Result<SolvedStructure, GeomError> {
    let mut fallback: Option<SolvedStructure> = None;
    let mut saw_degenerate = false;
    for &k in &WINDINGS {
        let sys_k = system.with_winding(k);
        match solve_fixed(&sys_k) {
            Ok(shapes) => {
                let solved = SolvedStructure {
                    shapes,
                    meridian_winding: k,
                };
                if solved.shapes.min_im() > 0.0 {
                    return Ok(solved);
                }
                fallback.get_or_insert(solved);
            }
            Err(GeomError::DegenerateShape) => saw_degenerate = true,
            Err(_) => {}
        }
    }
    if let Some(s) = fallback {
        return Ok(s);
    }
    if saw_degenerate {
        Err(GeomError::DegenerateShape)
    } else {
        Err(GeomError::NoConvergence)
    }
}

/// Newton with restarts for one fixed winding.
fn solve_fixed(system: &CompletenessSystem) -> Result<ShapeVector, GeomError> {
    let n = system.n();
    let regular = Complex64::new(0.5, 0.5 * Float::sqrt(3.0));
    let mut rng = XorShift64(0x5DEECE66D);
    let mut saw_degenerate = false;

    for attempt in 0..=RESTARTS {
        let start: Vec<Complex64> = if attempt == 0 {
            vec![regular; n]
        } else {
            (0..n)
                .map(|_| Complex64::new(rng.next_in(-1.0, 2.0), rng.next_in(0.2, 2.0)))
                .collect()
        };
        match newton(system, start) {
            NewtonOutcome::Converged(z) => return Ok(ShapeVector { z }),
            NewtonOutcome::Degenerate => saw_degenerate = true,
            NewtonOutcome::Stuck => {}
        }
    }
    if saw_degenerate {
        Err(GeomError::DegenerateShape)
    } else {
        Err(GeomError::NoConvergence)
    }
}

enum NewtonOutcome {
    Converged(Vec<Complex64>),
    Degenerate,
    Stuck,
}

fn newton(system: &CompletenessSystem, start: Vec<Complex64>) -> NewtonOutcome {
    let mut shapes = ShapeVector { z: start };
    for _ in 0..MAX_ITER {
        if shapes
            .z
            .iter()
            .any(|z| z.norm() < DEGENERATE_TOL || (z - 1.0).norm() < DEGENERATE_TOL)
        {
            return NewtonOutcome::Degenerate;
        }
        let f = system.residual(&shapes);
        let worst = f.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if worst < RESIDUAL_TOL {
            return NewtonOutcome::Converged(shapes.z);
        }
        if !worst.is_finite() {
            return NewtonOutcome::Stuck;
        }
        let j = system.jacobian(&shapes);
        let rhs: Vec<Complex64> = f.iter().map(|c| -c).collect();
        let Some(delta) = solve_complex(j, rhs) else {
            return NewtonOutcome::Stuck;
        };
        // Step limiting keeps the iteration away from the singular points.
        let max_step = delta.iter().map(|d| d.norm()).fold(0.0, f64::max);
        let scale = if max_step > 0.5 { 0.5 / max_step } else { 1.0 };
        for (z, d) in shapes.z.iter_mut().zip(&delta) {
            *z += d * scale;
        }
    }
    NewtonOutcome::Stuck
}

struct XorShift64(u64);

impl XorShift64 {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }
}

/// A certified enclosure of a solution of the completeness system.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedBox {
    pub boxes: Vec<CInterval>,
    /// Krawczyk contraction succeeded: the box contains exactly one
    /// solution of the completeness system.
    pub certified: bool,
    /// Every box has strictly positive imaginary part.
    pub positivity: bool,
}

impl CertifiedBox {
    pub fn geometric(&self) -> bool {
        self.certified && self.positivity
    }
}

const RADII: [f64; 7] = [1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-11, 1e-12];

/// Interval certification of an approximate solution.
///
/// Each shape is inflated to a rectangle; the Krawczyk operator
/// `K = m - Y F(m) + (I - Y J(Z)) (Z - m)` is evaluated with outward
/// rounding, and strict containment `K` inside `Z` certifies existence and
/// uniqueness of a true solution in the box. Positivity of every box then
/// certifies geometricity. Shapes at or below the real axis cannot be
/// enclosed this way and come back uncertified with `positivity = false`.
pub fn certify_solution(
    system: &CompletenessSystem,
    solved: &SolvedStructure,
) -> Result<CertifiedBox, GeomError> {
    let system = &system.with_winding(solved.meridian_winding);
    let shapes = &solved.shapes;
    if shapes.min_im() <= 0.0 {
        return Ok(CertifiedBox {
            boxes: shapes
                .z
                .iter()
                .map(|&z| CInterval::around(z, RADII[0]))
                .collect(),
            certified: false,
            positivity: false,
        });
    }

    for &r in &RADII {
        let boxes: Vec<CInterval> = shapes.z.iter().map(|&z| CInterval::around(z, r)).collect();
        if boxes.iter().any(|b| !b.im.is_strictly_positive()) {
            continue;
        }
        if let Some(k) = krawczyk_contracts(system, &boxes) {
            if k {
                let positivity = boxes.iter().all(|b| b.im.is_strictly_positive());
                return Ok(CertifiedBox {
                    boxes,
                    certified: true,
                    positivity,
                });
            }
        }
    }
    Err(GeomError::CertificationFailed)
}

/// Evaluates the interval residual of the system on boxes with strictly
/// positive imaginary part, where `Log z' = -Log(1-z)` and
/// `Log z'' = Log(z-1) - Log z` hold on the principal branch.
fn interval_residual(
    system: &CompletenessSystem,
    boxes: &[CInterval],
) -> Option<Vec<CInterval>> {
    let one = CInterval::point(Complex64::new(1.0, 0.0));
    let mut logs = Vec::with_capacity(boxes.len());
    for b in boxes {
        let lz = b.clog()?;
        let lzp = one.sub(b).clog()?.neg();
        let lzpp = b.sub(&one).clog()?.sub(&lz);
        logs.push((lz, lzp, lzpp));
    }
    let mut out = Vec::with_capacity(system.n());
    for (row, &t) in system.rows.iter().zip(&system.targets_ipi) {
        let mut acc = CInterval {
            re: Interval::point(0.0),
            im: ipi_interval(row.const_pi - t),
        };
        for (tet, (lz, lzp, lzpp)) in logs.iter().enumerate() {
            if row.c[tet] != 0 {
                acc = acc.add(&lz.scale(row.c[tet] as f64));
            }
            if row.c1[tet] != 0 {
                acc = acc.add(&lzp.scale(row.c1[tet] as f64));
            }
            if row.c2[tet] != 0 {
                acc = acc.add(&lzpp.scale(row.c2[tet] as f64));
            }
        }
        out.push(acc);
    }
    Some(out)
}

/// Encloses `k * pi`: the stored `PI` is off by at most half an ulp, so the
/// product error is below `|k| * 3e-16` plus one rounding.
fn ipi_interval(k: i64) -> Interval {
    let v = k as f64 * PI;
    let slack = (k.unsigned_abs() as f64) * 3e-16 + 1e-300;
    Interval::new((v - slack).next_down(), (v + slack).next_up())
}

fn interval_jacobian(system: &CompletenessSystem, boxes: &[CInterval]) -> Option<Vec<Vec<CInterval>>> {
    let n = system.n();
    let one = CInterval::point(Complex64::new(1.0, 0.0));
    let mut j = vec![vec![CInterval::point(Complex64::new(0.0, 0.0)); n]; n];
    for (r, row) in system.rows.iter().enumerate() {
        for t in 0..n {
            let z = &boxes[t];
            let mut acc = CInterval::point(Complex64::new(0.0, 0.0));
            if row.c[t] != 0 {
                acc = acc.add(&CInterval::point(Complex64::new(row.c[t] as f64, 0.0)).div(z)?);
            }
            if row.c1[t] != 0 {
                let denom = one.sub(z);
                acc = acc.add(
                    &CInterval::point(Complex64::new(row.c1[t] as f64, 0.0)).div(&denom)?,
                );
            }
            if row.c2[t] != 0 {
                let denom = z.mul(&z.sub(&one));
                acc = acc.add(
                    &CInterval::point(Complex64::new(row.c2[t] as f64, 0.0)).div(&denom)?,
                );
            }
            j[r][t] = acc;
        }
    }
    Some(j)
}

fn krawczyk_contracts(
    system: &CompletenessSystem,
    boxes: &[CInterval],
) -> Option<bool> {
    let n = system.n();
    let m: Vec<Complex64> = boxes.iter().map(CInterval::mid).collect();
    let mid_shapes = ShapeVector { z: m.clone() };

    // Y: floating point inverse of the midpoint Jacobian.
    let jmid = system.jacobian(&mid_shapes);
    let mut y = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for col in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[col] = Complex64::new(1.0, 0.0);
        let x = solve_complex(jmid.clone(), e)?;
        for r in 0..n {
            y[r][col] = x[r];
        }
    }
    // F(m) with outward rounding (point boxes).
    let point_boxes: Vec<CInterval> = m.iter().map(|&z| CInterval::point(z)).collect();
    let fm = interval_residual(system, &point_boxes)?;

    // J(Z) on the full boxes.
    let jz = interval_jacobian(system, boxes)?;

    // K = m - Y F(m) + (I - Y J(Z)) (Z - m), componentwise.
    let mut k = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = CInterval::point(m[i]);
        for c in 0..n {
            acc = acc.sub(&fm[c].mul_scalar(y[i][c]));
        }
        for c in 0..n {
            // (I - Y J(Z))_{i,c}
            let mut entry = CInterval::point(Complex64::new(0.0, 0.0));
            for t in 0..n {
                entry = entry.add(&jz[t][c].mul_scalar(y[i][t]));
            }
            let mut ident = entry.neg();
            if i == c {
                ident = ident.add(&CInterval::point(Complex64::new(1.0, 0.0)));
            }
            let dz = boxes[c].sub(&CInterval::point(m[c]));
            acc = acc.add(&ident.mul(&dz));
        }
        k.push(acc);
    }

    Some(k.iter().zip(boxes).all(|(ki, zi)| ki.inside(zi)))
}

/// `Li_2` by inversion/reflection into the region `|z| <= 1`,
/// `Re z <= 1/2`, then the Bernoulli series in `u = -Log(1-z)`.
pub fn dilog(z: Complex64) -> Complex64 {
    let pi2_6 = PI * PI / 6.0;
    if z.norm_sqr() > 1.0 {
        // Li2(z) = -Li2(1/z) - pi^2/6 - Log^2(-z)/2
        let inv = 1.0 / z;
        let lm = (-z).ln();
        return -dilog(inv) - pi2_6 - 0.5 * lm * lm;
    }
    if z.re > 0.5 {
        // Li2(z) = pi^2/6 - Log(z) Log(1-z) - Li2(1-z)
        let w = 1.0 - z;
        return pi2_6 - z.ln() * w.ln() - dilog(w);
    }
    // Bernoulli series: Li2(z) = sum B_n u^{n+1} / (n+1)!, u = -Log(1-z).
    let u = -(1.0 - z).ln();
    let mut term = u; // u^1 / 1!
    let mut acc = term * BERNOULLI_OVER_FACTORIAL[0];
    for (n, &coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate().skip(1) {
        term = term * u / (n as f64 + 1.0);
        if coeff != 0.0 {
            let delta = term * coeff;
            acc += delta;
            if delta.norm_sqr() < 1e-64 {
                break;
            }
        }
    }
    acc
}

/// `B_n / 1` for the series above; entry `n` multiplies `u^{n+1}/(n+1)!`
/// after accumulation of the factorial into `term`, i.e. these are the raw
/// Bernoulli numbers `B_0, B_1, B_2, ...` (odd ones vanish past `B_1`).
const BERNOULLI_OVER_FACTORIAL: [f64; 45] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
    0.0,
    8553103.0 / 6.0,
    0.0,
    -23749461029.0 / 870.0,
    0.0,
    8615841276005.0 / 14322.0,
    0.0,
    -7709321041217.0 / 510.0,
    0.0,
    2577687858367.0 / 6.0,
    0.0,
    -26315271553053477373.0 / 1919190.0,
    0.0,
    2929993913841559.0 / 6.0,
    0.0,
    -261082718496449122051.0 / 13530.0,
    0.0,
    1520097643918070802691.0 / 1806.0,
    0.0,
    -27833269579301024235023.0 / 690.0,
];

/// Bloch-Wigner function `D(z) = Im Li_2(z) + log|z| arg(1 - z)`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return 0.0;
    }
    dilog(z).im + z.norm().ln() * (1.0 - z).arg()
}

/// Hyperbolic volume of a positively oriented solution: the sum of the
/// Bloch-Wigner values of the shapes.
pub fn volume(shapes: &ShapeVector) -> Result<f64, GeomError> {
    if shapes.min_im() <= 0.0 {
        return Err(GeomError::NonPositiveShape);
    }
    Ok(shapes.z.iter().map(|&z| bloch_wigner(z)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    fn fig8_system() -> (IdealTriangulation, CuspTriangulation) {
        let tri = sample::figure_eight();
        let cusp = CuspTriangulation::new(&tri).unwrap();
        (tri, cusp)
    }

    #[test]
    fn fig8_complete_structure_is_regular() {
        let (tri, cusp) = fig8_system();
        let shapes = solve_complete_structure(&tri, &cusp).unwrap();
        let regular = Complex64::new(0.5, 0.5 * 3.0_f64.sqrt());
        for z in &shapes.z {
            assert!((z - regular).norm() < 1e-9, "z = {z}");
        }
    }

    #[test]
    fn fig8_edge_equations_hold_at_solution() {
        let (tri, cusp) = fig8_system();
        let shapes = solve_complete_structure(&tri, &cusp).unwrap();
        // All edge rows evaluate to 2 i pi, including the dropped one.
        for row in edge_rows(&cusp) {
            let v = eval_row(&row, &shapes);
            let target = Complex64::new(0.0, 2.0 * PI);
            assert!((v - target).norm() < 1e-10);
        }
    }

    #[test]
    fn solved_arguments_form_an_angle_structure_point() {
        // The shape arguments at the complete solution satisfy the angular
        // equations: sum pi per tetrahedron, sum 2 pi per edge.
        let (tri, cusp) = fig8_system();
        let shapes = solve_complete_structure(&tri, &cusp).unwrap();
        let n = shapes.n();
        for t in 0..n {
            let (lz, lzp, lzpp) = shapes.logs(t);
            assert!((lz.im + lzp.im + lzpp.im - PI).abs() < 1e-9);
        }
        for row in edge_rows(&cusp) {
            let mut acc = 0.0;
            for t in 0..n {
                let (lz, lzp, lzpp) = shapes.logs(t);
                acc += row.c[t] as f64 * lz.im
                    + row.c1[t] as f64 * lzp.im
                    + row.c2[t] as f64 * lzpp.im;
            }
            assert!((acc - 2.0 * PI).abs() < 1e-9);
        }
    }

    #[test]
    fn fig8_longitude_vanishes_at_solution() {
        let (tri, cusp) = fig8_system();
        let system = CompletenessSystem::new(&tri, &cusp).unwrap();
        let solved = solve_system(&system).unwrap();
        let lrow = holonomy(&cusp, &system.longitude);
        let v = eval_row(&lrow, &solved.shapes);
        // Zero modulo the tracked 2 i pi windings.
        let k = (v.im / (2.0 * PI)).round();
        assert!((v - Complex64::new(0.0, 2.0 * PI * k)).norm() < 1e-9);
    }

    #[test]
    fn fig8_certification_succeeds() {
        let (tri, cusp) = fig8_system();
        let system = CompletenessSystem::new(&tri, &cusp).unwrap();
        let solved = solve_system(&system).unwrap();
        assert_eq!(solved.meridian_winding, 0);
        let cert = certify_solution(&system, &solved).unwrap();
        assert!(cert.certified);
        assert!(cert.positivity);
        assert!(cert.geometric());
        for (b, z) in cert.boxes.iter().zip(&solved.shapes.z) {
            assert!(b.contains_point(*z));
        }
    }

    #[test]
    fn perturbed_point_fails_certification() {
        let (tri, cusp) = fig8_system();
        let system = CompletenessSystem::new(&tri, &cusp).unwrap();
        let mut solved = solve_system(&system).unwrap();
        solved.shapes.z[0] += Complex64::new(1e-2, 0.0);
        assert_eq!(
            certify_solution(&system, &solved),
            Err(GeomError::CertificationFailed)
        );
    }

    #[test]
    fn real_shape_reports_no_positivity() {
        let (tri, cusp) = fig8_system();
        let system = CompletenessSystem::new(&tri, &cusp).unwrap();
        let solved = SolvedStructure {
            shapes: ShapeVector {
                z: vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.8)],
            },
            meridian_winding: 0,
        };
        let cert = certify_solution(&system, &solved).unwrap();
        assert!(!cert.positivity);
        assert!(!cert.certified);
    }

    #[test]
    fn dilog_at_special_points() {
        // Li2(1) = pi^2/6 approached through 0.999...; use D instead:
        // D(i) is Catalan's constant.
        let catalan = 0.915_965_594_177_219_f64;
        assert!((bloch_wigner(Complex64::new(0.0, 1.0)) - catalan).abs() < 1e-12);
        // D is zero on the reals.
        assert_eq!(bloch_wigner(Complex64::new(0.37, 0.0)), 0.0);
    }

    #[test]
    fn fig8_volume() {
        let (tri, cusp) = fig8_system();
        let shapes = solve_complete_structure(&tri, &cusp).unwrap();
        let v = volume(&shapes).unwrap();
        assert!((v - 2.029883212819).abs() < 1e-9, "volume {v}");
    }

    #[test]
    fn volume_invariant_under_shape_rotation() {
        // D(z) = D(1/(1-z)).
        let z = Complex64::new(0.3, 0.8);
        let zp = 1.0 / (1.0 - z);
        assert!((bloch_wigner(z) - bloch_wigner(zp)).abs() < 1e-10);
    }

    #[test]
    fn nonpositive_volume_is_rejected() {
        let shapes = ShapeVector {
            z: vec![Complex64::new(0.5, -0.1)],
        };
        assert_eq!(volume(&shapes), Err(GeomError::NonPositiveShape));
    }
}

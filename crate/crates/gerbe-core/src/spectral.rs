//! Circle-ordered spectral theory of unitary matrices: the space
//! `Y = {(z, g) : z not in spec(g)}`, triple classification over `Y^{[2]}`,
//! eigenprojections, the integer cocycles `epsilon_i`, and the branch
//! logarithm `log_z`.
//!
//! Eigendecompositions of a unitary `g` are obtained from a Hermitian
//! eigenproblem: `H = (g + g^*)/2` and `K = (g - g^*)/2i` commute with `g`
//! and act as `Re(lambda)`, `Im(lambda)` on its eigenspaces, so a generic
//! combination `cos(a) H + sin(a) K` separates the spectrum. A failed
//! separation is detected by the eigenvector residuals and retried with the
//! next angle.

use alloc::vec::Vec;

use nalgebra::Complex;
use num_traits::Float;
use rand::Rng;

use crate::lie::{SpecialUnitary, TorusElement};
use crate::matutil::{max_diff, unitarity_defect};
use crate::{tol, C64, CMat, Error, Result};

use core::f64::consts::TAU;

/// Point of `Z = U(1) \ {1}`, carrying its argument in `(0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZPoint {
    value: C64,
    arg: f64,
}

impl ZPoint {
    /// From a unit-modulus complex number; rejects the excluded point `1`.
    pub fn new(value: C64) -> Result<Self> {
        let r = (value.norm() - 1.0).abs();
        if r > tol::STRUCT {
            return Err(Error::NotOnCircle { residual: r });
        }
        let value = value / value.norm();
        let d = (value - C64::new(1.0, 0.0)).norm();
        if d <= tol::ONE {
            return Err(Error::ZPointAtOne { distance: d });
        }
        let mut arg = value.arg();
        if arg < 0.0 {
            arg += TAU;
        }
        Ok(Self { value, arg })
    }

    /// From an argument in `(0, 2 pi)`.
    pub fn from_arg(arg: f64) -> Result<Self> {
        Self::new(C64::from_polar(1.0, arg))
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    /// Chord distance to another unit-circle point.
    pub fn chord_to(&self, w: C64) -> f64 {
        (self.value - w).norm()
    }
}

/// Spectral data of a unitary matrix: distinct clustered eigenvalues on the
/// circle with their (possibly higher-rank) eigenprojections.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pairs: Vec<(C64, CMat)>,
}

impl EigenDecomposition {
    pub fn pairs(&self) -> &[(C64, CMat)] {
        &self.pairs
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = C64> + '_ {
        self.pairs.iter().map(|(l, _)| *l)
    }

    /// `sum lambda E`, for certification.
    pub fn reconstruct(&self) -> CMat {
        let n = self.pairs[0].1.nrows();
        let mut m = CMat::zeros(n, n);
        for (l, e) in &self.pairs {
            m += e * *l;
        }
        m
    }

    /// Minimal chord distance from `w` to the spectrum.
    pub fn distance_to_spectrum(&self, w: C64) -> f64 {
        self.pairs.iter().map(|(l, _)| (l - w).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Rank of the projection associated with a subset of eigenvalues.
    fn rank_sum(&self, mask: &[bool]) -> usize {
        self.pairs
            .iter()
            .zip(mask)
            .filter(|(_, m)| **m)
            .map(|((_, e), _)| {
                let t: C64 = e.diagonal().iter().sum();
                t.re.round() as usize
            })
            .sum()
    }
}

/// Deterministic separation angles; irrational stepping avoids aligning
/// twice with the same accidental degeneracy.
const SEPARATION_ANGLES: [f64; 8] = [0.723, 4.606, 2.207, 6.090, 3.691, 1.292, 5.175, 2.776];

/// Eigendecomposition of a unitary matrix, with eigenvalues snapped to the
/// unit circle and clustered by chord distance `cluster_tol`.
pub fn eigen_circle(g: &CMat, cluster_tol: f64) -> Result<EigenDecomposition> {
    let n = g.nrows();
    let ud = unitarity_defect(g);
    if ud > 1e-10 {
        return Err(Error::NotUnitary { residual: ud });
    }
    let h = (g + g.adjoint()) * Complex::new(0.5, 0.0);
    let k = (g - g.adjoint()) * Complex::new(0.0, -0.5);

    let mut best_residual = f64::INFINITY;
    for a in SEPARATION_ANGLES {
        let m = &h * Complex::new(a.cos(), 0.0) + &k * Complex::new(a.sin(), 0.0);
        let eig = m.symmetric_eigen();
        let u = &eig.eigenvectors;

        // Rayleigh quotients; the residuals certify that every column is an
        // eigenvector of g itself, not only of the combination.
        let mut lambdas = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let col = u.column(j);
            let gu = g * col;
            let lam: C64 = col.iter().zip(gu.iter()).map(|(a, b)| a.conj() * b).sum();
            let res = (&gu - col * lam).iter().map(|c| c.norm()).fold(0.0, f64::max);
            if res > 1e-9 {
                best_residual = best_residual.min(res);
                ok = false;
                break;
            }
            lambdas.push(lam / lam.norm());
        }
        if !ok {
            continue;
        }

        let pairs = cluster_on_circle(&lambdas, u, cluster_tol);
        let dec = EigenDecomposition { pairs };
        let res = max_diff(&dec.reconstruct(), g);
        if res <= tol::EIGEN {
            return Ok(dec);
        }
        best_residual = best_residual.min(res);
    }
    Err(Error::EigenFailure { residual: best_residual })
}

/// Eigendecomposition of a torus element: exactly the clustered diagonal
/// phases with coordinate projections summed per cluster.
pub fn eigen_circle_torus(t: &TorusElement, cluster_tol: f64) -> Result<EigenDecomposition> {
    eigen_circle(t.as_matrix().matrix(), cluster_tol)
}

fn cluster_on_circle(lambdas: &[C64], vectors: &CMat, cluster_tol: f64) -> Vec<(C64, CMat)> {
    let n = lambdas.len();
    let mut order: Vec<usize> = (0..n).collect();
    let arg_of = |l: C64| {
        let mut a = l.arg();
        if a < 0.0 {
            a += TAU;
        }
        a
    };
    order.sort_by(|&a, &b| arg_of(lambdas[a]).partial_cmp(&arg_of(lambdas[b])).unwrap());

    // single linkage along the sorted circle, then merge across the wrap
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &j in &order {
        let start_new = match groups.last() {
            Some(g) => {
                let prev = lambdas[*g.last().unwrap()];
                (lambdas[j] - prev).norm() > cluster_tol
            }
            None => true,
        };
        if start_new {
            groups.push(Vec::new());
        }
        groups.last_mut().unwrap().push(j);
    }
    if groups.len() > 1 {
        let first = lambdas[groups[0][0]];
        let last = lambdas[*groups.last().unwrap().last().unwrap()];
        if (first - last).norm() <= cluster_tol {
            let tail = groups.pop().unwrap();
            groups[0].extend(tail);
        }
    }

    groups
        .into_iter()
        .map(|idx| {
            let mut lam = C64::new(0.0, 0.0);
            let mut e = CMat::zeros(n, n);
            for &j in &idx {
                lam += lambdas[j];
                let col = vectors.column(j);
                e += CMat::from_fn(n, n, |r, c| col[r] * col[c].conj());
            }
            let lam = lam / lam.norm();
            // symmetrise away the roundoff skew
            let e = (&e + e.adjoint()) * Complex::new(0.5, 0.0);
            (lam, e)
        })
        .collect()
}

/// Classification of a triple `(z_1, z_2, g)` of `Y^{[2]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleClass {
    Positive,
    Null,
    Negative,
}

impl TripleClass {
    pub fn flipped(self) -> Self {
        match self {
            TripleClass::Positive => TripleClass::Negative,
            TripleClass::Null => TripleClass::Null,
            TripleClass::Negative => TripleClass::Positive,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            TripleClass::Positive => 1.0,
            TripleClass::Null => 0.0,
            TripleClass::Negative => -1.0,
        }
    }
}

/// A classified point of `Y^{[2]}`.
#[derive(Debug, Clone)]
pub struct SpectralTriple {
    pub z1: ZPoint,
    pub z2: ZPoint,
    pub g: SpecialUnitary,
    pub class: TripleClass,
}

/// Point of the pullback space `p^{-1}(Y)`: a flag, a torus element, and a
/// `Z`-point off the torus spectrum.
#[derive(Debug, Clone)]
pub struct PullbackPoint {
    pub flag: crate::lie::ProjectionTuple,
    pub t: TorusElement,
    pub z: ZPoint,
}

impl PullbackPoint {
    pub fn new(flag: crate::lie::ProjectionTuple, t: TorusElement, z: ZPoint) -> Result<Self> {
        if flag.dim() != t.dim() {
            return Err(Error::DimensionMismatch { left: flag.dim(), right: t.dim() });
        }
        let d = (0..t.dim()).map(|i| z.chord_to(t.p(i))).fold(f64::INFINITY, f64::min);
        if d <= tol::SPEC {
            return Err(Error::OnSpectrum { distance: d });
        }
        Ok(Self { flag, t, z })
    }
}

/// Whether `lam` lies on the arc between `z_1` and `z_2` not containing `1`;
/// equivalently its argument lies strictly between theirs.
pub fn between(lam: &ZPoint, z1: &ZPoint, z2: &ZPoint) -> Result<bool> {
    for z in [z1, z2] {
        let d = lam.chord_to(z.value());
        if d <= tol::SPEC {
            return Err(Error::DegenerateArc { distance: d });
        }
    }
    let (lo, hi) = if z1.arg() < z2.arg() { (z1.arg(), z2.arg()) } else { (z2.arg(), z1.arg()) };
    Ok(lo < lam.arg() && lam.arg() < hi)
}

fn check_off_spectrum(dec: &EigenDecomposition, z: &ZPoint) -> Result<()> {
    let d = dec.distance_to_spectrum(z.value());
    if d <= tol::SPEC {
        return Err(Error::OnSpectrum { distance: d });
    }
    Ok(())
}

/// Mask of clustered eigenvalues lying between `z_1` and `z_2`.
fn between_mask(dec: &EigenDecomposition, z1: &ZPoint, z2: &ZPoint) -> Vec<bool> {
    let (lo, hi) = if z1.arg() < z2.arg() { (z1.arg(), z2.arg()) } else { (z2.arg(), z1.arg()) };
    dec.eigenvalues()
        .map(|l| {
            let mut a = l.arg();
            if a < 0.0 {
                a += TAU;
            }
            lo < a && a < hi
        })
        .collect()
}

/// Classify `(z_1, z_2, g)` as positive, null or negative.
pub fn classify_triple(z1: &ZPoint, z2: &ZPoint, g: &SpecialUnitary) -> Result<SpectralTriple> {
    let dec = eigen_circle(g.matrix(), tol::CLUSTER)?;
    check_off_spectrum(&dec, z1)?;
    check_off_spectrum(&dec, z2)?;
    let any = between_mask(&dec, z1, z2).into_iter().any(|b| b);
    let class = if !any {
        TripleClass::Null
    } else if z1.arg() > z2.arg() {
        TripleClass::Positive
    } else {
        TripleClass::Negative
    };
    Ok(SpectralTriple { z1: *z1, z2: *z2, g: g.clone(), class })
}

/// The orthogonal projection onto the sum of eigenspaces between `z_1` and
/// `z_2` (the fibre of the spectral line bundle; zero matrix on null
/// triples, the swapped pair's projection on negative ones), together with
/// the data needed for its exact directional derivative.
#[derive(Debug, Clone)]
pub struct SpectralProjection {
    matrix: CMat,
    /// `(1/(lambda_k - lambda_l), E_k, E_l)` over `k` between, `l` not.
    cross: Vec<(C64, CMat, CMat)>,
}

impl SpectralProjection {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Derivative along an ambient tangent `v = dg`, from the resolvent
    /// integral: `dP(v) = sum (E_k v E_l + E_l v E_k) / (lambda_k - lambda_l)`
    /// over `k` between and `l` not.
    pub fn derivative(&self, v: &CMat) -> CMat {
        let n = self.matrix.nrows();
        let mut out = CMat::zeros(n, n);
        for (w, ek, el) in &self.cross {
            out += (ek * v * el + el * v * ek) * *w;
        }
        out
    }

    /// Curvature 2-form value `tr(P [dP(x), dP(y)])` on ambient tangents.
    pub fn curvature(&self, x: &CMat, y: &CMat) -> C64 {
        let dx = self.derivative(x);
        let dy = self.derivative(y);
        let m = &self.matrix * (&dx * &dy - &dy * &dx);
        m.diagonal().iter().sum()
    }
}

/// Projection onto the eigenvalues of `g` between `z_1` and `z_2`.
pub fn spectral_projection(z1: &ZPoint, z2: &ZPoint, g: &SpecialUnitary) -> Result<SpectralProjection> {
    let dec = eigen_circle(g.matrix(), tol::CLUSTER)?;
    check_off_spectrum(&dec, z1)?;
    check_off_spectrum(&dec, z2)?;
    let mask = between_mask(&dec, z1, z2);
    let n = g.dim();
    let mut p = CMat::zeros(n, n);
    let mut cross = Vec::new();
    for (j, (lj, ej)) in dec.pairs().iter().enumerate() {
        if !mask[j] {
            continue;
        }
        p += ej;
        for (l, (ll, el)) in dec.pairs().iter().enumerate() {
            if mask[l] {
                continue;
            }
            cross.push((C64::new(1.0, 0.0) / (lj - ll), ej.clone(), el.clone()));
        }
    }
    Ok(SpectralProjection { matrix: p, cross })
}

/// Rank of the between-projection, counted with multiplicity.
pub fn between_rank(z1: &ZPoint, z2: &ZPoint, g: &SpecialUnitary) -> Result<usize> {
    let dec = eigen_circle(g.matrix(), tol::CLUSTER)?;
    check_off_spectrum(&dec, z1)?;
    check_off_spectrum(&dec, z2)?;
    let mask = between_mask(&dec, z1, z2);
    Ok(dec.rank_sum(&mask))
}

/// The integer sign `epsilon_i(z_1, z_2, t)`: `+1` if `z_1 > p_i(t) > z_2`,
/// `-1` if `z_2 > p_i(t) > z_1`, `0` otherwise.
pub fn epsilon_i(z1: &ZPoint, z2: &ZPoint, t: &TorusElement, i: usize) -> Result<i32> {
    for j in 0..t.dim() {
        let p = t.p(j);
        for z in [z1, z2] {
            let d = z.chord_to(p);
            if d <= tol::SPEC {
                return Err(Error::OnSpectrum { distance: d });
            }
        }
    }
    let p = t.p(i);
    let mut a = p.arg();
    if a < 0.0 {
        a += TAU;
    }
    let (a1, a2) = (z1.arg(), z2.arg());
    if a1 > a && a > a2 {
        Ok(1)
    } else if a2 > a && a > a1 {
        Ok(-1)
    } else {
        Ok(0)
    }
}

/// The branch `log_z` on the cut plane `C \ R_z`, normalised by
/// `log_z(1) = 0`; the imaginary part lies in `(arg(z) - 2 pi, arg(z))`.
pub fn log_branch(zeta: C64, z: &ZPoint) -> Result<C64> {
    let w = zeta * C64::from_polar(1.0, -z.arg());
    let dist = if w.re >= 0.0 { w.im.abs() } else { zeta.norm() };
    if dist <= tol::RAY {
        return Err(Error::OnBranchCut { distance: dist });
    }
    let mut theta = zeta.arg();
    while theta >= z.arg() {
        theta -= TAU;
    }
    while theta <= z.arg() - TAU {
        theta += TAU;
    }
    Ok(C64::new(zeta.norm().ln(), theta))
}

/// Random `Z`-point with chord distance at least `margin` from every point
/// of `avoid` and from `1`.
pub fn random_z<R: Rng>(rng: &mut R, avoid: &[C64], margin: f64) -> ZPoint {
    loop {
        let a: f64 = rng.gen_range(0.0..TAU);
        let cand = C64::from_polar(1.0, a);
        if (cand - C64::new(1.0, 0.0)).norm() <= margin {
            continue;
        }
        if avoid.iter().any(|p| (cand - p).norm() <= margin) {
            continue;
        }
        return ZPoint::new(cand).unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{haar_sample_with, random_generator, random_torus};
    use crate::matutil::max_abs;
    use crate::RVec;
    use alloc::vec;
    use core::f64::consts::PI;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn zp(arg: f64) -> ZPoint {
        ZPoint::from_arg(arg).unwrap()
    }

    #[test]
    fn zpoint_rejects_one_and_off_circle() {
        assert!(matches!(ZPoint::new(C64::new(1.0, 0.0)), Err(Error::ZPointAtOne { .. })));
        assert!(matches!(ZPoint::new(C64::new(0.5, 0.0)), Err(Error::NotOnCircle { .. })));
        let z = zp(PI / 3.0);
        assert!((C64::from_polar(1.0, z.arg()) - z.value()).norm() <= 1e-12);
    }

    #[test]
    fn eigen_identity_and_diagonal() {
        let id = SpecialUnitary::identity(3);
        let dec = eigen_circle(id.matrix(), tol::CLUSTER).unwrap();
        assert_eq!(dec.pairs().len(), 1);
        assert!((dec.pairs()[0].0 - C64::new(1.0, 0.0)).norm() <= 1e-12);
        assert!(max_diff(&dec.pairs()[0].1, &CMat::identity(3, 3)) <= 1e-12);

        let t = TorusElement::new(RVec::from_vec(vec![0.25, -0.25])).unwrap();
        let dec = eigen_circle_torus(&t, tol::CLUSTER).unwrap();
        assert_eq!(dec.pairs().len(), 2);
        for (lam, e) in dec.pairs() {
            let which = if (lam - C64::new(0.0, 1.0)).norm() < 1e-10 { 0 } else { 1 };
            let o = crate::lie::ProjectionTuple::standard(2);
            assert!(max_diff(e, o.projection(which)) <= 1e-12);
        }
    }

    #[test]
    fn eigen_reconstruction_random() {
        let mut r = rng(11);
        for _ in 0..20 {
            let g = haar_sample_with(4, &mut r).unwrap();
            let dec = eigen_circle(g.matrix(), tol::CLUSTER).unwrap();
            assert!(max_diff(&dec.reconstruct(), g.matrix()) <= 1e-10);
            for (lam, _) in dec.pairs() {
                assert!((lam.norm() - 1.0).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn eigen_torus_clusters_degenerate_phases() {
        let a = 0.21;
        let t = TorusElement::new(RVec::from_vec(vec![a, a, -2.0 * a])).unwrap();
        let dec = eigen_circle_torus(&t, tol::CLUSTER).unwrap();
        assert_eq!(dec.pairs().len(), 2);
        let std = crate::lie::ProjectionTuple::standard(3);
        for (lam, e) in dec.pairs() {
            if (lam - t.p(0)).norm() < 1e-10 {
                let want = std.projection(0) + std.projection(1);
                assert!(max_diff(e, &want) <= 1e-12);
            } else {
                assert!(max_diff(e, std.projection(2)) <= 1e-12);
            }
        }
    }

    #[test]
    fn eigen_rejects_non_unitary() {
        let m = CMat::from_fn(2, 2, |r, c| C64::new((r + 2 * c) as f64, 0.0));
        assert!(matches!(eigen_circle(&m, tol::CLUSTER), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn between_cases_and_symmetry() {
        let lam = zp(PI / 2.0);
        assert!(between(&lam, &zp(PI), &zp(PI / 4.0)).unwrap());
        assert!(!between(&zp(3.0 * PI / 2.0), &zp(PI), &zp(PI / 4.0)).unwrap());
        let mut r = rng(12);
        for _ in 0..10_000 {
            let a = random_z(&mut r, &[], 1e-6);
            let b = random_z(&mut r, &[a.value()], 1e-6);
            let l = random_z(&mut r, &[a.value(), b.value()], 1e-6);
            assert_eq!(between(&l, &a, &b).unwrap(), between(&l, &b, &a).unwrap());
        }
    }

    #[test]
    fn classify_cases() {
        // -I has both eigenvalues at arg pi
        let minus_i = SpecialUnitary::new(CMat::identity(2, 2) * C64::new(-1.0, 0.0)).unwrap();
        let t = classify_triple(&zp(3.0 * PI / 2.0), &zp(PI / 2.0), &minus_i).unwrap();
        assert_eq!(t.class, TripleClass::Positive);

        let t = classify_triple(&zp(0.7), &zp(0.7), &minus_i).unwrap();
        assert_eq!(t.class, TripleClass::Null);

        let mut r = rng(13);
        for _ in 0..2000 {
            let g = haar_sample_with(3, &mut r).unwrap();
            let dec = eigen_circle(g.matrix(), tol::CLUSTER).unwrap();
            let avoid: Vec<C64> = dec.eigenvalues().collect();
            let z1 = random_z(&mut r, &avoid, 1e-4);
            let z2 = random_z(&mut r, &avoid, 1e-4);
            if z1.chord_to(z2.value()) < 1e-6 {
                continue;
            }
            let ab = classify_triple(&z1, &z2, &g).unwrap().class;
            let ba = classify_triple(&z2, &z1, &g).unwrap().class;
            assert_eq!(ab, ba.flipped());
        }
    }

    #[test]
    fn projection_cases() {
        // null triple: zero matrix
        let minus_i = SpecialUnitary::new(CMat::identity(2, 2) * C64::new(-1.0, 0.0)).unwrap();
        let p = spectral_projection(&zp(0.3), &zp(0.9), &minus_i).unwrap();
        assert!(max_abs(p.matrix()) == 0.0);

        // diag(i, -i): only eigenvalue i lies between arg pi and arg pi/4
        let t = TorusElement::new(RVec::from_vec(vec![0.25, -0.25])).unwrap();
        let g = t.as_matrix();
        let p = spectral_projection(&zp(PI), &zp(PI / 4.0), &g).unwrap();
        let std = crate::lie::ProjectionTuple::standard(2);
        assert!(max_diff(p.matrix(), std.projection(0)) <= 1e-12);

        // commutes with g
        let mut r = rng(14);
        let g = haar_sample_with(4, &mut r).unwrap();
        let dec = eigen_circle(g.matrix(), tol::CLUSTER).unwrap();
        let avoid: Vec<C64> = dec.eigenvalues().collect();
        let z1 = random_z(&mut r, &avoid, 1e-4);
        let z2 = random_z(&mut r, &avoid, 1e-4);
        let p = spectral_projection(&z1, &z2, &g).unwrap();
        let c = p.matrix() * g.matrix() - g.matrix() * p.matrix();
        assert!(max_abs(&c) <= 1e-10);
    }

    #[test]
    fn rank_additivity_over_ordered_triples() {
        let mut r = rng(15);
        for _ in 0..10_000 {
            let g = haar_sample_with(3, &mut r).unwrap();
            let dec = eigen_circle(g.matrix(), tol::CLUSTER).unwrap();
            let avoid: Vec<C64> = dec.eigenvalues().collect();
            let mut args = [0.0f64; 3];
            for a in args.iter_mut() {
                *a = random_z(&mut r, &avoid, 1e-4).arg();
            }
            args.sort_by(|a, b| b.partial_cmp(a).unwrap());
            if args[0] - args[1] < 1e-6 || args[1] - args[2] < 1e-6 {
                continue;
            }
            let (z1, z2, z3) = (zp(args[0]), zp(args[1]), zp(args[2]));
            let r12 = between_rank(&z1, &z2, &g).unwrap();
            let r23 = between_rank(&z2, &z3, &g).unwrap();
            let r13 = between_rank(&z1, &z3, &g).unwrap();
            assert_eq!(r12 + r23, r13);
        }
    }

    #[test]
    fn epsilon_cases() {
        let t = TorusElement::new(RVec::from_vec(vec![0.25, -0.25])).unwrap();
        assert_eq!(epsilon_i(&zp(PI), &zp(PI / 4.0), &t, 0).unwrap(), 1);
        let z = zp(0.9);
        assert_eq!(epsilon_i(&z, &z, &t, 0).unwrap(), 0);
        // p_i(t) = 1 is never between
        let t1 = TorusElement::new(RVec::from_vec(vec![0.0, 0.5, -0.5])).unwrap();
        assert_eq!(epsilon_i(&zp(5.0), &zp(0.4), &t1, 0).unwrap(), 0);
    }

    #[test]
    fn epsilon_cocycle() {
        let mut r = rng(16);
        for n in 2..=5 {
            for _ in 0..2000 {
                let t = random_torus(n, &mut r);
                let avoid: Vec<C64> = (0..n).map(|i| t.p(i)).collect();
                let z1 = random_z(&mut r, &avoid, 1e-4);
                let z2 = random_z(&mut r, &avoid, 1e-4);
                let z3 = random_z(&mut r, &avoid, 1e-4);
                for i in 0..n {
                    let d = epsilon_i(&z2, &z3, &t, i).unwrap()
                        - epsilon_i(&z1, &z3, &t, i).unwrap()
                        + epsilon_i(&z1, &z2, &t, i).unwrap();
                    assert_eq!(d, 0);
                }
            }
        }
    }

    #[test]
    fn log_branch_windows() {
        let z_pi = zp(PI);
        assert!(log_branch(C64::new(1.0, 0.0), &z_pi).unwrap().norm() <= 1e-15);
        let l = log_branch(C64::from_polar(1.0, PI / 2.0), &z_pi).unwrap();
        assert!((l - C64::new(0.0, PI / 2.0)).norm() <= 1e-14);
        let l = log_branch(C64::from_polar(1.0, PI / 2.0), &zp(PI / 4.0)).unwrap();
        assert!((l - C64::new(0.0, PI / 2.0 - TAU)).norm() <= 1e-14);

        // exp(log_z(zeta)) = zeta and window bounds, on random inputs
        let mut r = rng(17);
        for _ in 0..2000 {
            let z = random_z(&mut r, &[], 1e-6);
            let zeta = C64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            match log_branch(zeta, &z) {
                Ok(l) => {
                    assert!((l.exp() - zeta).norm() <= 1e-12 * zeta.norm().max(1.0));
                    assert!(l.im > z.arg() - TAU && l.im < z.arg());
                }
                Err(Error::OnBranchCut { .. }) => {}
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
        // on-ray rejection
        assert!(matches!(
            log_branch(C64::from_polar(2.0, PI), &z_pi),
            Err(Error::OnBranchCut { .. })
        ));
    }

    #[test]
    fn log_branch_equals_epsilon_difference() {
        // epsilon_i(z, w, t) = (log_z p_i - log_w p_i) / 2 pi i, exactly
        let mut r = rng(18);
        for n in 2..=5 {
            for _ in 0..2500 {
                let t = random_torus(n, &mut r);
                let avoid: Vec<C64> = (0..n).map(|i| t.p(i)).collect();
                let z = random_z(&mut r, &avoid, 1e-4);
                let w = random_z(&mut r, &avoid, 1e-4);
                for i in 0..n {
                    let lhs = epsilon_i(&z, &w, &t, i).unwrap();
                    let diff = (log_branch(t.p(i), &z).unwrap() - log_branch(t.p(i), &w).unwrap())
                        / C64::new(0.0, TAU);
                    assert!((diff.re - lhs as f64).abs() <= 1e-12, "re {} vs {}", diff.re, lhs);
                    assert!(diff.im.abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn projection_conjugation_equivariance() {
        let mut r = rng(19);
        for _ in 0..20 {
            let g = haar_sample_with(3, &mut r).unwrap();
            let h = haar_sample_with(3, &mut r).unwrap();
            let dec = eigen_circle(g.matrix(), tol::CLUSTER).unwrap();
            let avoid: Vec<C64> = dec.eigenvalues().collect();
            let z1 = random_z(&mut r, &avoid, 1e-4);
            let z2 = random_z(&mut r, &avoid, 1e-4);
            let p = spectral_projection(&z1, &z2, &g).unwrap();
            let gc = g.conjugated_by(&h).unwrap();
            let pc = spectral_projection(&z1, &z2, &gc).unwrap();
            let want = h.matrix() * p.matrix() * h.matrix().adjoint();
            assert!(max_diff(pc.matrix(), &want) <= 1e-10);
        }
    }

    #[test]
    fn projection_derivative_matches_finite_difference() {
        let mut r = rng(20);
        let hstep = 1e-5;
        for _ in 0..10 {
            let g = haar_sample_with(3, &mut r).unwrap();
            let dec = eigen_circle(g.matrix(), tol::CLUSTER).unwrap();
            let avoid: Vec<C64> = dec.eigenvalues().collect();
            let z1 = random_z(&mut r, &avoid, 0.05);
            let z2 = random_z(&mut r, &avoid, 0.05);
            let p = spectral_projection(&z1, &z2, &g).unwrap();
            let xi = random_generator(3, &mut r);
            let v = g.matrix() * &xi;
            let exact = p.derivative(&v);
            let at = |s: f64| {
                let gs = g.flow(&xi, s).unwrap();
                spectral_projection(&z1, &z2, &gs).unwrap().matrix().clone()
            };
            let fd = (at(hstep) - at(-hstep)) / C64::new(2.0 * hstep, 0.0);
            assert!(max_diff(&exact, &fd) <= 1e-7);
        }
    }
}

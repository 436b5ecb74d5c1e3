//! `SU(n)`, its diagonal maximal torus, the flag manifold as projection
//! tuples, the Weyl map, tangent data, and Haar sampling.
//!
//! A coset `gT` is always stored as its projection tuple
//! `(g O_1 g^{-1}, ..., g O_n g^{-1})`, which removes the choice of coset
//! representative. Torus phases are kept in turns, so the `i`-th diagonal
//! entry is `exp(2 pi i x_i)` and integrality statements round exactly.

use alloc::vec::Vec;

use nalgebra::Complex;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matutil::{anti_hermitian_defect, exp_anti_hermitian, max_abs, max_diff, trace, unitarity_defect};
use crate::{tol, C64, CMat, Error, RVec, Result};

pub const TAU: f64 = core::f64::consts::TAU;

/// Element of `SU(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialUnitary {
    m: CMat,
}

impl SpecialUnitary {
    /// Validates `‖U^*U − I‖_max` and `|det U − 1|` against `tol::STRUCT`.
    pub fn new(m: CMat) -> Result<Self> {
        let n = m.nrows();
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        let ud = unitarity_defect(&m);
        if ud > tol::STRUCT {
            return Err(Error::NotSpecialUnitary { residual: ud });
        }
        let dd = (m.determinant() - C64::new(1.0, 0.0)).norm();
        if dd > tol::STRUCT {
            return Err(Error::NotSpecialUnitary { residual: dd });
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self { m: CMat::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    /// Group product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Self::new(&self.m * &other.m)
    }

    /// Conjugate `h g h^{-1}`.
    pub fn conjugated_by(&self, h: &Self) -> Result<Self> {
        check_dims(self.dim(), h.dim())?;
        Self::new(&h.m * &self.m * h.m.adjoint())
    }

    /// Flow `g exp(s xi)` along a right-translated generator.
    pub fn flow(&self, xi: &CMat, s: f64) -> Result<Self> {
        check_generator(self.dim(), xi)?;
        Self::new(&self.m * exp_anti_hermitian(&(xi * Complex::new(s, 0.0))))
    }
}

/// Point of the diagonal maximal torus `T < SU(n)`, stored as phases in
/// turns with `sum x_i = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusElement {
    phases: RVec,
}

impl TorusElement {
    pub fn new(phases: RVec) -> Result<Self> {
        let n = phases.len();
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        let s = phases.sum().abs();
        if s > tol::STRUCT {
            return Err(Error::PhasesNotClosed { residual: s });
        }
        Ok(Self { phases })
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &RVec {
        &self.phases
    }

    /// `p_i(t) = exp(2 pi i x_i)`, the `i`-th diagonal entry.
    pub fn p(&self, i: usize) -> C64 {
        C64::from_polar(1.0, TAU * self.phases[i])
    }

    pub fn as_matrix(&self) -> SpecialUnitary {
        let n = self.dim();
        let d = CMat::from_fn(n, n, |r, c| if r == c { self.p(r) } else { C64::new(0.0, 0.0) });
        SpecialUnitary { m: d }
    }
}

/// Point of `Proj_n ~ SU(n)/T`: an ordered tuple of rank-one mutually
/// orthogonal Hermitian idempotents summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionTuple {
    projs: Vec<CMat>,
}

impl ProjectionTuple {
    pub fn new(projs: Vec<CMat>) -> Result<Self> {
        let n = projs.len();
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        let mut sum = CMat::zeros(n, n);
        for (i, p) in projs.iter().enumerate() {
            if p.nrows() != n || p.ncols() != n {
                return Err(Error::DimensionMismatch { left: n, right: p.nrows() });
            }
            let h = max_diff(p, &p.adjoint());
            if h > tol::STRUCT {
                return Err(Error::NotProjectionTuple { what: "hermiticity", residual: h });
            }
            let idem = max_diff(&(p * p), p);
            if idem > tol::STRUCT {
                return Err(Error::NotProjectionTuple { what: "idempotence", residual: idem });
            }
            let rk = (trace(p) - C64::new(1.0, 0.0)).norm();
            if rk > tol::STRUCT {
                return Err(Error::NotProjectionTuple { what: "rank one", residual: rk });
            }
            for q in projs.iter().skip(i + 1) {
                let o = max_abs(&(p * q));
                if o > tol::STRUCT {
                    return Err(Error::NotProjectionTuple { what: "orthogonality", residual: o });
                }
            }
            sum += p;
        }
        let c = max_diff(&sum, &CMat::identity(n, n));
        if c > tol::STRUCT {
            return Err(Error::NotProjectionTuple { what: "completeness", residual: c });
        }
        Ok(Self { projs })
    }

    /// The standard flag `e = (O_1, ..., O_n)` of coordinate projections.
    pub fn standard(n: usize) -> Self {
        let projs = (0..n)
            .map(|i| {
                CMat::from_fn(n, n, |r, c| {
                    if r == i && c == i {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Self { projs }
    }

    pub fn dim(&self) -> usize {
        self.projs.len()
    }

    pub fn projection(&self, i: usize) -> &CMat {
        &self.projs[i]
    }

    pub fn projections(&self) -> &[CMat] {
        &self.projs
    }

    /// Conjugated tuple `(h P_1 h^{-1}, ..., h P_n h^{-1})`.
    pub fn conjugated_by(&self, h: &SpecialUnitary) -> Result<Self> {
        check_dims(self.dim(), h.dim())?;
        let hm = h.matrix();
        let ha = hm.adjoint();
        Ok(Self { projs: self.projs.iter().map(|p| hm * p * &ha).collect() })
    }

    /// Flow `exp(s xi) . F` of the conjugation action.
    pub fn flow(&self, xi: &CMat, s: f64) -> Result<Self> {
        check_generator(self.dim(), xi)?;
        let u = exp_anti_hermitian(&(xi * Complex::new(s, 0.0)));
        let ua = u.adjoint();
        Ok(Self { projs: self.projs.iter().map(|p| &u * p * &ua).collect() })
    }
}

/// Point of `R^{n-1} x Proj_n`, with `R^{n-1}` realised as the `sum = 0`
/// hyperplane in `R^n`.
#[derive(Debug, Clone)]
pub struct CupPoint {
    pub x: RVec,
    pub flag: ProjectionTuple,
}

impl CupPoint {
    pub fn new(x: RVec, flag: ProjectionTuple) -> Result<Self> {
        check_dims(x.len(), flag.dim())?;
        let s = x.sum().abs();
        if s > tol::STRUCT {
            return Err(Error::PhasesNotClosed { residual: s });
        }
        Ok(Self { x, flag })
    }

    /// Torus point under `x -> diag([x_1], ..., [x_n])`: phases congruent to
    /// `x` mod 1, shifted by integers summing to zero.
    pub fn torus_image(&self) -> TorusElement {
        let n = self.x.len();
        let mut k: Vec<i64> = self.x.iter().map(|&v| v.round() as i64).collect();
        let s: i64 = k.iter().sum();
        k[n - 1] -= s;
        let phases = RVec::from_fn(n, |i, _| self.x[i] - k[i] as f64);
        TorusElement { phases }
    }
}

/// Tangent data at a point of any of the spaces in play, stored blockwise.
/// Blocks that do not exist at the base are left empty; pulling a form back
/// along a projection just ignores the complementary blocks.
#[derive(Debug, Clone, Default)]
pub struct Tangent {
    /// Rate of real coordinates: torus phases (turns), the `sum = 0` vector
    /// of a cup point, or plain chart parameters.
    pub dx: Option<RVec>,
    /// Arg-rates of the circle coordinates `z_1, ..., z_p` at the base.
    pub dz: Vec<f64>,
    /// Flag direction: anti-Hermitian traceless generator acting on
    /// projections by commutator.
    pub xi: Option<CMat>,
    /// Ambient derivative of a unitary coordinate.
    pub dg: Option<CMat>,
}

impl Tangent {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Flag direction; the generator must be anti-Hermitian and traceless.
    pub fn flag(xi: CMat) -> Result<Self> {
        check_generator(xi.nrows(), &xi)?;
        Ok(Self { xi: Some(xi), ..Self::default() })
    }

    /// Torus direction; rates must sum to zero.
    pub fn torus(dx: RVec) -> Result<Self> {
        let s = dx.sum().abs();
        if s > tol::STRUCT {
            return Err(Error::PhasesNotClosed { residual: s });
        }
        Ok(Self { dx: Some(dx), ..Self::default() })
    }

    /// Plain parameter direction (no closure constraint).
    pub fn params(dx: RVec) -> Self {
        Self { dx: Some(dx), ..Self::default() }
    }

    /// Arg-rates for the `Z`-coordinates of the base.
    pub fn z_rates(dz: Vec<f64>) -> Self {
        Self { dz, ..Self::default() }
    }

    /// Ambient derivative of a unitary coordinate.
    pub fn unitary(dg: CMat) -> Self {
        Self { dg: Some(dg), ..Self::default() }
    }

    pub fn with_xi(mut self, xi: CMat) -> Result<Self> {
        check_generator(xi.nrows(), &xi)?;
        self.xi = Some(xi);
        Ok(self)
    }

    /// `a * self + b * other`, blockwise.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        fn lin<T: Clone + core::ops::Mul<f64, Output = T> + core::ops::Add<Output = T>>(
            x: &Option<T>,
            a: f64,
            y: &Option<T>,
            b: f64,
        ) -> Option<T> {
            match (x, y) {
                (Some(x), Some(y)) => Some(x.clone() * a + y.clone() * b),
                (Some(x), None) => Some(x.clone() * a),
                (None, Some(y)) => Some(y.clone() * b),
                (None, None) => None,
            }
        }
        let dx = lin(&self.dx, a, &other.dx, b);
        let xi = match (&self.xi, &other.xi) {
            (Some(x), Some(y)) => Some(x * Complex::new(a, 0.0) + y * Complex::new(b, 0.0)),
            (Some(x), None) => Some(x * Complex::new(a, 0.0)),
            (None, Some(y)) => Some(y * Complex::new(b, 0.0)),
            (None, None) => None,
        };
        let dg = match (&self.dg, &other.dg) {
            (Some(x), Some(y)) => Some(x * Complex::new(a, 0.0) + y * Complex::new(b, 0.0)),
            (Some(x), None) => Some(x * Complex::new(a, 0.0)),
            (None, Some(y)) => Some(y * Complex::new(b, 0.0)),
            (None, None) => None,
        };
        let len = self.dz.len().max(other.dz.len());
        let dz = (0..len)
            .map(|i| {
                a * self.dz.get(i).copied().unwrap_or(0.0) + b * other.dz.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        Self { dx, dz, xi, dg }
    }

    pub fn scaled(&self, a: f64) -> Self {
        self.combine(a, &Self::zero(), 0.0)
    }

    /// Rate of the `i`-th real coordinate, zero if absent.
    pub fn dx_at(&self, i: usize) -> f64 {
        self.dx.as_ref().map_or(0.0, |v| v[i])
    }

    /// Arg-rate of the `j`-th circle coordinate, zero if absent.
    pub fn dz_at(&self, j: usize) -> f64 {
        self.dz.get(j).copied().unwrap_or(0.0)
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

fn check_generator(n: usize, xi: &CMat) -> Result<()> {
    if xi.nrows() != n || xi.ncols() != n {
        return Err(Error::DimensionMismatch { left: n, right: xi.nrows() });
    }
    let ah = anti_hermitian_defect(xi);
    if ah > tol::STRUCT {
        return Err(Error::BadGenerator { residual: ah });
    }
    let tr = trace(xi).norm();
    if tr > tol::STRUCT {
        return Err(Error::BadGenerator { residual: tr });
    }
    Ok(())
}

/// Haar-distributed element of `SU(n)`: QR of a complex Gaussian matrix with
/// the phase correction `R -> R |R|^{-1}` on the diagonal, then a scalar
/// determinant normalisation. Deterministic in the seed.
pub fn haar_sample(n: usize, seed: u64) -> Result<SpecialUnitary> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_sample_with(n, &mut rng)
}

/// Haar sampling from a caller-managed RNG stream.
pub fn haar_sample_with<R: Rng>(n: usize, rng: &mut R) -> Result<SpecialUnitary> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let inv_sqrt2 = 0.5f64.sqrt();
    let z = CMat::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * inv_sqrt2, im * inv_sqrt2)
    });
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    let corr = C64::from_polar(1.0, -det.arg() / n as f64);
    SpecialUnitary::new(q * corr)
}

/// The flag of `g`: `P_i = g O_i g^{-1}`, computed as outer products of the
/// columns of `g`.
pub fn flag_of(g: &SpecialUnitary) -> ProjectionTuple {
    let n = g.dim();
    let m = g.matrix();
    let projs = (0..n)
        .map(|i| {
            let col = m.column(i);
            CMat::from_fn(n, n, |r, c| col[r] * col[c].conj())
        })
        .collect();
    ProjectionTuple { projs }
}

/// The Weyl map on projections, `p(t, F) = sum_i p_i(t) P_i`.
pub fn weyl_map(t: &TorusElement, flag: &ProjectionTuple) -> Result<SpecialUnitary> {
    check_dims(t.dim(), flag.dim())?;
    let n = t.dim();
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m += flag.projection(i) * t.p(i);
    }
    SpecialUnitary::new(m)
}

/// Derivative of the Weyl map along a tangent `(dx, xi)` at `(t, F)`:
/// `sum_i (2 pi i dx_i p_i P_i + p_i [xi, P_i])`, returned as an ambient
/// tangent at `weyl_map(t, F)`.
pub fn weyl_pushforward(t: &TorusElement, flag: &ProjectionTuple, v: &Tangent) -> Result<Tangent> {
    check_dims(t.dim(), flag.dim())?;
    let n = t.dim();
    if let Some(dx) = &v.dx {
        check_dims(dx.len(), n)?;
    }
    if let Some(xi) = &v.xi {
        check_dims(xi.nrows(), n)?;
    }
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        let p = flag.projection(i);
        let pi = t.p(i);
        if let Some(dx) = &v.dx {
            out += p * (pi * C64::new(0.0, TAU * dx[i]));
        }
        if let Some(xi) = &v.xi {
            out += (xi * p - p * xi) * pi;
        }
    }
    Ok(Tangent::unitary(out))
}

/// Random anti-Hermitian traceless generator with entries of unit scale.
pub fn random_generator<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let m = CMat::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    });
    let mut a = (&m - m.adjoint()) * Complex::new(0.5, 0.0);
    let t = trace(&a) / C64::new(n as f64, 0.0);
    for i in 0..n {
        a[(i, i)] -= t;
    }
    a
}

/// Random vector on the `sum = 0` hyperplane.
pub fn random_sum_zero<R: Rng>(n: usize, rng: &mut R) -> RVec {
    let mut v = RVec::from_fn(n, |_, _| {
        let x: f64 = StandardNormal.sample(rng);
        x
    });
    let mean = v.sum() / n as f64;
    v.add_scalar_mut(-mean);
    v
}

/// Random torus element.
pub fn random_torus<R: Rng>(n: usize, rng: &mut R) -> TorusElement {
    TorusElement { phases: random_sum_zero(n, rng) }
}

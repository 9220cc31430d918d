//! The torsion volume form on the representation circle: the reference class
//! `h_ρ`, evaluation `τ_[ρ](v)`, and arc-length metrization.
//!
//! `τ` is evaluated on the cochain complex `C^{-*}_{Ad∘ρ}(E; su₂)` regraded so
//! that `C²` sits in degree 0, with homology basis `⟨v, h_ρ⟩`.

use nalgebra::{DMatrix, DVector, Matrix3};
use serde::{Deserialize, Serialize};

use crate::chain::{BasedComplex, LiftChoice, RANK_TOL};
use crate::cwmodel::{ad_rows, CwPairModel};
use crate::error::VolformError;
use crate::linalg;
use crate::repspace::{Circle, RepPoint, RepSystem};
use crate::su2::{adjoint, extract_axis_angle, killing, Su2, Su2Vector};

/// `|ψ(h)|` relative to `|h|` below this means the restriction degenerates.
pub const RESTRICTION_TOL: f64 = 1e-9;
/// `|τ(unit tangent)|` below this is treated as a zero of the form.
pub const NONZERO_TOL: f64 = 1e-10;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
const GAUSS_LEGENDRE: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// A 2-cocycle representing `h_ρ = ψ⁻¹(P_ρ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceClass {
    /// Values on the 2-cells of `E`, stacked.
    pub cocycle: DVector<f64>,
    /// `⟨ψ(h), P_ρ⟩`, equal to `killing(P_ρ, P_ρ)` by construction.
    pub pairing: f64,
    /// `P_ρ`.
    pub axis: Su2Vector,
}

/// `P_ρ`, the unit axis of `ρ(μ)`.
pub fn meridian_axis(model: &CwPairModel, images: &[Su2]) -> Result<Su2Vector, VolformError> {
    Ok(extract_axis_angle(&model.peripheral().mu.eval_su2(images))?.axis)
}

fn check_regular(c: &BasedComplex<f64>) -> Result<(), VolformError> {
    // regraded: degree 0 is H², degree 2 is H⁰
    let h = c.homology_dims();
    if h != [1, 1, 0] {
        return Err(VolformError::NotRegular { dims: [h[2], h[1], h[0]] });
    }
    Ok(())
}

/// The class in `H²(E; Ad∘ρ)` whose restriction to `∂E`, cup-paired with
/// `P_ρ` on the torus 2-cell, gives `killing(P_ρ, P_ρ)`.
///
/// The representative is orthogonal to the coboundaries.
pub fn compute_h_rho(model: &CwPairModel, images: &[Su2]) -> Result<ReferenceClass, VolformError> {
    let axis = meridian_axis(model, images)?;
    let cob = model.exterior.ad_coboundaries(images);
    let d1 = &cob[1];
    let r = linalg::rank(d1, RANK_TOL);
    if d1.nrows() - r != 1 {
        let dims = model.exterior.ad_cohomology_dims(images)?;
        return Err(VolformError::NotRegular { dims: [dims[0], dims[1], dims[2]] });
    }
    let h0: DVector<f64> = linalg::null_space(&d1.transpose(), r).column(0).into_owned();
    let restricted = ad_rows(&model.inclusion[2], images) * &h0;
    let w = Su2Vector::new(restricted[0], restricted[1], restricted[2]);
    let back = model.cup_vertex.eval_su2(images).conjugate_vector(axis);
    let psi = killing(w, back);
    if psi.abs() < RESTRICTION_TOL {
        return Err(VolformError::DegenerateRestriction);
    }
    let target = killing(axis, axis);
    Ok(ReferenceClass { cocycle: h0 * (target / psi), pairing: target, axis })
}

/// `τ₀`: sign of the torsion of `C^{-*}(E; R)` with homology basis `⟨[pt]*, [μ]*⟩`.
pub fn cochain_orientation_sign(model: &CwPairModel) -> Result<i8, VolformError> {
    let c = model.exterior.untwisted_cochains_regraded();
    let n = model.exterior.dims.len() - 1;
    let alpha = model.alpha().map_err(|_| VolformError::DegenerateRestriction)?;
    let pt = DMatrix::from_element(model.exterior.dims[0], 1, 1.0);
    let mu = DMatrix::from_iterator(alpha.exponents.len(), 1, alpha.exponents.iter().map(|&e| e as f64));
    let c = c.with_homology(n, pt)?.with_homology(n - 1, mu)?;
    Ok(crate::chain::sign_torsion_tau0(&c)?)
}

/// Cell lifts and a basis `⟨ξ₁, ξ₂, ξ₃⟩` of `su₂` (columns of `basis`).
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub lifts: LiftChoice,
    pub basis: Matrix3<f64>,
}

impl Frame {
    pub fn standard(model: &CwPairModel) -> Frame {
        Frame { lifts: LiftChoice::reference(&model.exterior.dims), basis: Matrix3::identity() }
    }
}

fn stack(u: &[Su2Vector]) -> DVector<f64> {
    DVector::from_iterator(3 * u.len(), u.iter().flat_map(|v| v.0))
}

/// Rewrites cochain coordinates for new lifts `g_σ ẽ_σ` and basis `Q`:
/// `f ↦ Q⁻¹ Ad(ρ(g_σ)) f`, blockwise.
fn to_frame(v: &DVector<f64>, lifts: &[crate::algebra::Word], images: &[Su2], qinv: &Matrix3<f64>) -> DVector<f64> {
    let mut out = v.clone();
    for (b, g) in lifts.iter().enumerate() {
        let m = qinv * adjoint(&g.eval_su2(images));
        let block = m * v.fixed_rows::<3>(3 * b);
        out.fixed_rows_mut::<3>(3 * b).copy_from(&block);
    }
    out
}

/// `τ_[ρ](v)` for a 1-cocycle given by its values on the generators.
pub fn tau_eval(model: &CwPairModel, images: &[Su2], v: &[Su2Vector]) -> Result<f64, VolformError> {
    tau_eval_in_frame(model, images, v, &Frame::standard(model))
}

/// [`tau_eval`] with explicit lifts and `su₂` basis; the value does not
/// depend on either.
pub fn tau_eval_in_frame(model: &CwPairModel, images: &[Su2], v: &[Su2Vector], frame: &Frame) -> Result<f64, VolformError> {
    let qinv = frame.basis.try_inverse().ok_or(VolformError::DegenerateRestriction)?;
    let q = frame.basis;
    let href = compute_h_rho(model, images)?;
    let harmonic = crate::repspace::harmonic_part(v, images);
    let v = stack(v);
    let coboundaries: Vec<DMatrix<f64>> = model
        .exterior
        .with_lifts(&frame.lifts)
        .ad_coboundaries(images)
        .into_iter()
        .map(|d| {
            let mut out = d.clone();
            for i in 0..d.nrows() / 3 {
                for j in 0..d.ncols() / 3 {
                    let blk: Matrix3<f64> = d.fixed_view::<3, 3>(3 * i, 3 * j).into_owned();
                    out.fixed_view_mut::<3, 3>(3 * i, 3 * j).copy_from(&(qinv * blk * q));
                }
            }
            out
        })
        .collect();
    let dims = model.exterior.dims.iter().map(|d| 3 * d).collect();
    let complex = BasedComplex::from_cochains(dims, coboundaries)?;
    check_regular(&complex)?;
    if harmonic.norm() <= NONZERO_TOL * v.norm().max(1.0) {
        return Ok(0.0);
    }
    let v = to_frame(&v, &frame.lifts.cells[1], images, &qinv);
    let h = to_frame(&href.cocycle, &frame.lifts.cells[2], images, &qinv);
    let col = |x: DVector<f64>| DMatrix::from_column_slice(x.len(), 1, x.as_slice());
    let based = complex.with_homology(1, col(v))?.with_homology(0, col(h))?;
    let tau0 = cochain_orientation_sign(model)? as f64;
    Ok(tau0 * based.torsion()?)
}

/// A representation with a velocity cocycle along some path parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct PathPoint {
    pub images: Vec<Su2>,
    pub velocity: Vec<Su2Vector>,
}

impl PathPoint {
    pub fn of(p: &RepPoint) -> PathPoint {
        PathPoint { images: p.images.clone(), velocity: p.cocycle.clone() }
    }
}

/// Quadrature node on a segment: `weight` already includes the segment length.
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub weight: f64,
    pub point: PathPoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetrizedSample {
    pub point: RepPoint,
    /// Arc length from the first sample along the traced order.
    pub s: f64,
    /// `τ` of the unit gauge tangent.
    pub speed: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetrizedCircle {
    pub samples: Vec<MetrizedSample>,
    pub total_volume: f64,
    /// Sign of `τ` on the forward tangent of the traced order.
    pub orientation: i8,
    /// Quadrature nodes of the segment from sample `k` to `k + 1` (the last closes up).
    pub segments: Vec<Vec<Node>>,
    /// The same volume by the composite trapezoid rule on gauge chords.
    pub trapezoid_volume: f64,
}

/// Summary written to `circle.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetrizationSummary {
    pub total_volume: f64,
    pub trapezoid_volume: f64,
    pub orientation: i8,
    pub samples: usize,
}

impl MetrizedCircle {
    pub fn summary(&self) -> MetrizationSummary {
        MetrizationSummary {
            total_volume: self.total_volume,
            trapezoid_volume: self.trapezoid_volume,
            orientation: self.orientation,
            samples: self.samples.len(),
        }
    }

    /// Oriented arc-length coordinate: `s` measured along the `τ`-orientation.
    pub fn oriented_positions(&self) -> Vec<f64> {
        self.samples.iter().map(|x| self.orientation as f64 * x.s).collect()
    }

    /// Cumulative signed integral of `τ` along the image of the sampled path
    /// under a map on path points (for example an isometry of the circle).
    pub fn transported_positions(
        &self,
        model: &CwPairModel,
        map: impl Fn(&PathPoint) -> PathPoint,
    ) -> Result<Vec<f64>, VolformError> {
        let mut out = Vec::with_capacity(self.samples.len());
        let mut acc = 0.0;
        for (k, seg) in self.segments.iter().enumerate() {
            out.push(acc);
            if k + 1 == self.segments.len() {
                break;
            }
            for n in seg {
                let q = map(&n.point);
                acc += n.weight * tau_eval(model, &q.images, &q.velocity)?;
            }
        }
        Ok(out)
    }
}

/// Integrates `|τ|` along a traced circle with Gauss–Legendre nodes placed on
/// each segment by the continuation corrector.
pub fn metrize(model: &CwPairModel, sys: &RepSystem, circle: &Circle) -> Result<MetrizedCircle, VolformError> {
    let pts = &circle.points;
    let n = pts.len();
    let mut speeds = Vec::with_capacity(n);
    for (index, p) in pts.iter().enumerate() {
        if !p.regularity.in_circle() {
            return Err(VolformError::NonRegularSample { index });
        }
        let t = tau_eval(model, &p.images, &p.cocycle)?;
        if t.abs() < NONZERO_TOL {
            return Err(VolformError::ZeroClass);
        }
        speeds.push(t);
    }
    let orientation: i8 = if speeds[0] > 0.0 { 1 } else { -1 };
    if speeds.iter().any(|&t| (t > 0.0) != (orientation > 0)) {
        return Err(VolformError::NonRegularSample { index: speeds.iter().position(|&t| (t > 0.0) != (orientation > 0)).unwrap_or(0) });
    }
    let mut segments = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let (mut acc, mut trap) = (0.0, 0.0);
    for k in 0..n {
        s.push(acc);
        let (a, b) = (&pts[k], &pts[(k + 1) % n]);
        let sigma = a.tangent.dot(&b.gauge.difference(&a.gauge));
        trap += 0.5 * (speeds[k].abs() + speeds[(k + 1) % n].abs()) * b.gauge.difference(&a.gauge).norm();
        let mut nodes = Vec::with_capacity(GAUSS_LEGENDRE.len());
        for &(x, w) in &GAUSS_LEGENDRE {
            let q = sys
                .project(&a.gauge, &a.tangent, x * sigma, &a.tangent)
                .map_err(|_| VolformError::NonRegularSample { index: k })?;
            // velocity along σ: the unit tangent rescaled so that ⟨t_k, ·⟩ = 1
            let scale = 1.0 / a.tangent.dot(&q.tangent);
            let velocity: Vec<Su2Vector> = q.cocycle.iter().map(|u| u.scale(scale)).collect();
            let point = PathPoint { images: q.images, velocity };
            let weight = w * sigma;
            acc += weight * tau_eval(model, &point.images, &point.velocity)?.abs();
            nodes.push(Node { weight, point });
        }
        segments.push(nodes);
    }
    let samples = pts
        .iter()
        .zip(s)
        .zip(&speeds)
        .map(|((p, s), &speed)| MetrizedSample { point: p.clone(), s, speed })
        .collect();
    Ok(MetrizedCircle { samples, total_volume: acc, orientation, segments, trapezoid_volume: trap })
}

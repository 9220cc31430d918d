//! Numerical tracing of the space of irreducible SU(2) representations.
//!
//! Representations are kept in a gauge slice: `ρ(x₁) = exp(θ₁ e₃)` and
//! `ρ(x₂) = exp(θ₂ n(φ))` with `n(φ) = (sin φ, 0, cos φ)`, `θ₁, θ₂, φ ∈ (0, π)`.
//! Further generators are unconstrained and move by left multiplication
//! with `exp(v)`. Gauge coordinates are `(θ₁, θ₂, φ, v₃, …)`.

use nalgebra::{DMatrix, DVector, Matrix3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{fox_derivative, AbelianizationMap, GroupPresentation, Word};
use crate::chain::{EquivariantComplex, RANK_TOL};
use crate::error::RepError;
use crate::linalg;
use crate::su2::{extract_axis_angle, is_irreducible, rotation_between, Su2, Su2Vector};

/// Newton stops once the relator residual is below this.
pub const NEWTON_TOL: f64 = 1e-13;
/// Accepted relator residual for a representation.
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const MAX_NEWTON: usize = 50;
/// `|n₁ × n₂|` below this means the axes have collapsed.
pub const REDUCIBLE_TOL: f64 = 1e-8;
/// Smallest step the continuation will try before giving up.
pub const MIN_STEP: f64 = 1e-5;

/// Gauge coordinates of a representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gauge {
    pub theta1: f64,
    pub theta2: f64,
    pub phi: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<Su2>,
}

fn axis(phi: f64) -> Su2Vector {
    Su2Vector::new(phi.sin(), 0.0, phi.cos())
}

impl Gauge {
    pub fn new(theta1: f64, theta2: f64, phi: f64) -> Gauge {
        Gauge { theta1, theta2, phi, extra: Vec::new() }
    }

    pub fn generator_count(&self) -> usize {
        2 + self.extra.len()
    }

    pub fn dimension(&self) -> usize {
        3 + 3 * self.extra.len()
    }

    pub fn images(&self) -> Vec<Su2> {
        let mut v = vec![
            Su2::from_axis_angle(self.theta1, Su2Vector::E3),
            Su2::from_axis_angle(self.theta2, axis(self.phi)),
        ];
        v.extend(self.extra.iter().copied());
        v
    }

    /// Moves by `delta` in gauge coordinates.
    pub fn apply(&self, delta: &DVector<f64>) -> Gauge {
        let extra = self
            .extra
            .iter()
            .enumerate()
            .map(|(j, g)| {
                let v = Su2Vector::new(delta[3 + 3 * j], delta[4 + 3 * j], delta[5 + 3 * j]);
                Su2::exp(v) * *g
            })
            .collect();
        Gauge { theta1: self.theta1 + delta[0], theta2: self.theta2 + delta[1], phi: self.phi + delta[2], extra }
    }

    /// `self − other` in local gauge coordinates.
    pub fn difference(&self, other: &Gauge) -> DVector<f64> {
        let mut d = DVector::zeros(self.dimension());
        d[0] = self.theta1 - other.theta1;
        d[1] = self.theta2 - other.theta2;
        d[2] = self.phi - other.phi;
        for (j, (a, b)) in self.extra.iter().zip(&other.extra).enumerate() {
            let v = (*a * b.inverse()).log();
            d.rows_mut(3 + 3 * j, 3).copy_from_slice(&v.0);
        }
        d
    }

    /// `∂ρ(x_j)/∂q · ρ(x_j)⁻¹` for each gauge coordinate `q`, stacked per generator.
    pub fn differential(&self) -> DMatrix<f64> {
        let m = self.generator_count();
        let mut g = DMatrix::zeros(3 * m, self.dimension());
        let put = |g: &mut DMatrix<f64>, block: usize, col: usize, v: Su2Vector| {
            g.view_mut((3 * block, col), (3, 1)).copy_from_slice(&v.0);
        };
        put(&mut g, 0, 0, Su2Vector::E3);
        put(&mut g, 1, 1, axis(self.phi));
        // ∂_φ exp(θ n(φ)) · exp(−θ n(φ)) = s c n′ + s² (n × n′)
        let (s, c) = self.theta2.sin_cos();
        let n = axis(self.phi);
        let dn = Su2Vector::new(self.phi.cos(), 0.0, -self.phi.sin());
        put(&mut g, 1, 2, dn.scale(s * c) + n.cross(&dn).scale(s * s));
        for j in 0..self.extra.len() {
            for k in 0..3 {
                g[(3 * (j + 2) + k, 3 + 3 * j + k)] = 1.0;
            }
        }
        g
    }
}

/// Brings arbitrary images into the gauge slice by conjugation.
pub fn gauge_fix(images: &[Su2]) -> Result<Gauge, RepError> {
    if images.len() < 2 {
        return Err(RepError::TooFewGenerators);
    }
    let a1 = extract_axis_angle(&images[0]).map_err(|_| RepError::ReducibleLimit)?;
    let g = rotation_between(a1.axis, Su2Vector::E3);
    let conj = |h: &Su2, q: &Su2| *h * *q * h.inverse();
    let x2 = conj(&g, &images[1]);
    let a2 = extract_axis_angle(&x2).map_err(|_| RepError::ReducibleLimit)?;
    let [bx, by, _] = a2.axis.0;
    if bx.hypot(by) < REDUCIBLE_TOL {
        return Err(RepError::ReducibleLimit);
    }
    // Ad(exp(ψ e₃)) rotates by 2ψ about e₃
    let h = Su2::exp(Su2Vector::E3.scale(-0.5 * by.atan2(bx))) * g;
    let n2 = extract_axis_angle(&conj(&h, &images[1])).map_err(|_| RepError::ReducibleLimit)?;
    let phi = n2.axis.0[0].atan2(n2.axis.0[2]);
    let extra = images[2..].iter().map(|q| conj(&h, q)).collect();
    Ok(Gauge { theta1: a1.theta, theta2: n2.theta, phi, extra })
}

/// `(dims of H⁰, H¹, H²)` of `Ad∘ρ` and the meridian condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regularity {
    pub dims: [usize; 3],
    pub mu_noncentral: bool,
    /// A singular value lies within 10× of the rank threshold.
    pub near_singular: bool,
}

impl Regularity {
    pub fn in_circle(&self) -> bool {
        self.dims == [0, 1, 1] && self.mu_noncentral
    }
}

/// Traces of `ρ` on all subproducts `x_{i₁}⋯x_{i_k}` with `i₁ < … < i_k`,
/// ordered by the bitmask of the index set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFingerprint(pub Vec<f64>);

impl TraceFingerprint {
    pub fn of(images: &[Su2]) -> TraceFingerprint {
        let m = images.len();
        let v = (1u32..1 << m)
            .map(|mask| {
                (0..m).filter(|i| mask >> i & 1 == 1).fold(Su2::IDENTITY, |acc, i| acc * images[i]).trace()
            })
            .collect();
        TraceFingerprint(v)
    }

    pub fn distance(&self, other: &TraceFingerprint) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// A gauge-fixed representation with its tangent data.
#[derive(Clone, Debug, PartialEq)]
pub struct RepPoint {
    pub gauge: Gauge,
    pub images: Vec<Su2>,
    pub residual: f64,
    /// Unit tangent of the solution curve in gauge coordinates.
    pub tangent: DVector<f64>,
    /// `u(x_j) = (d/dℓ ρ(x_j)) ρ(x_j)⁻¹` along the unit tangent.
    pub cocycle: Vec<Su2Vector>,
    pub regularity: Regularity,
}

impl RepPoint {
    pub fn fingerprint(&self) -> TraceFingerprint {
        TraceFingerprint::of(&self.images)
    }
}

/// The relator system of a presentation together with its Ad-twisted complex.
#[derive(Clone, Debug)]
pub struct RepSystem {
    pub presentation: GroupPresentation,
    pub complex: EquivariantComplex,
    fox: Vec<Vec<crate::algebra::GroupRingElement>>,
}

impl RepSystem {
    pub fn new(presentation: &GroupPresentation) -> Result<RepSystem, RepError> {
        if presentation.generator_count() < 2 {
            return Err(RepError::TooFewGenerators);
        }
        Ok(RepSystem {
            presentation: presentation.clone(),
            complex: EquivariantComplex::from_presentation(presentation),
            fox: presentation.fox_matrix(),
        })
    }

    /// Uses a different cell structure for the regularity computation.
    pub fn with_complex(mut self, complex: EquivariantComplex) -> RepSystem {
        self.complex = complex;
        self
    }

    /// Imaginary parts of `ρ(r_i)` and the full deviation `max_i |ρ(r_i) − I|`.
    pub fn residual(&self, images: &[Su2]) -> (DVector<f64>, f64) {
        let rels = &self.presentation.relators;
        let mut f = DVector::zeros(3 * rels.len());
        let mut dev = 0.0f64;
        for (i, r) in rels.iter().enumerate() {
            let q = r.eval_su2(images);
            f.rows_mut(3 * i, 3).copy_from_slice(&q.imag().0);
            dev = dev.max(q.distance(&Su2::IDENTITY));
        }
        (f, dev)
    }

    /// `δ¹` of the Ad-twisted cochains of the presentation: the Fox matrix under `Ad∘ρ`.
    pub fn fox_ad(&self, images: &[Su2]) -> DMatrix<f64> {
        let m = self.presentation.generator_count();
        let mut a = DMatrix::zeros(3 * self.fox.len(), 3 * m);
        for (i, row) in self.fox.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                a.view_mut((3 * i, 3 * j), (3, 3)).copy_from(&e.ad_matrix(images));
            }
        }
        a
    }

    /// Jacobian of [`Self::residual`] in gauge coordinates.
    pub fn jacobian(&self, gauge: &Gauge, images: &[Su2]) -> DMatrix<f64> {
        let fox = self.fox_ad(images);
        let g = gauge.differential();
        let rels = &self.presentation.relators;
        let mut out = DMatrix::zeros(3 * rels.len(), gauge.dimension());
        for (i, r) in rels.iter().enumerate() {
            // d im(ρ(r)) = im(δ·ρ(r)) = a δ − v × δ
            let q = r.eval_su2(images);
            let v = q.imag().0;
            let cross = Matrix3::new(0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0);
            let m = Matrix3::identity() * q.a - cross;
            let block = fox.rows(3 * i, 3) * &g;
            let mm = DMatrix::from_fn(3, 3, |a, b| m[(a, b)]);
            out.rows_mut(3 * i, 3).copy_from(&(mm * block));
        }
        out
    }

    fn check_gauge(&self, gauge: &Gauge) -> Result<Gauge, RepError> {
        let fixed = gauge_fix(&gauge.images())?;
        if fixed.phi.sin() * fixed.theta2.sin() < REDUCIBLE_TOL || fixed.theta1.sin() < REDUCIBLE_TOL {
            return Err(RepError::ReducibleLimit);
        }
        if !is_irreducible(&fixed.images()).irreducible {
            return Err(RepError::ReducibleLimit);
        }
        Ok(fixed)
    }

    /// Newton iteration with minimum-norm steps from a gauge seed.
    pub fn solve_near(&self, seed: &Gauge) -> Result<RepPoint, RepError> {
        let mut g = self.check_gauge(seed)?;
        let mut last = f64::INFINITY;
        for _ in 0..MAX_NEWTON {
            let images = g.images();
            let (f, dev) = self.residual(&images);
            last = dev;
            if f.norm() < NEWTON_TOL && dev < RESIDUAL_TOL {
                return self.point(g, None);
            }
            let j = self.jacobian(&g, &images);
            let step = linalg::lstsq(&j, &(-f), 1e-7);
            g = self.check_gauge(&g.apply(&step))?;
        }
        Err(RepError::NoConvergence { iterations: MAX_NEWTON, residual: last })
    }

    /// Solves a seed given as arbitrary (not gauge-fixed) images.
    pub fn solve_near_images(&self, images: &[Su2]) -> Result<RepPoint, RepError> {
        self.solve_near(&gauge_fix(images)?)
    }

    /// Corrector on the hyperplane `⟨tangent, q − base⟩ = σ`.
    pub fn project(&self, base: &Gauge, tangent: &DVector<f64>, sigma: f64, hint: &DVector<f64>) -> Result<RepPoint, RepError> {
        let mut d = tangent * sigma;
        for _ in 0..MAX_NEWTON {
            let g = base.apply(&d);
            let images = g.images();
            let (f, dev) = self.residual(&images);
            let c = tangent.dot(&d) - sigma;
            if f.norm() < NEWTON_TOL && c.abs() < 1e-14 && dev < RESIDUAL_TOL {
                let fixed = self.check_gauge(&g)?;
                return self.point(fixed, Some(hint));
            }
            let j = self.jacobian(&g, &images);
            let n = j.nrows();
            let mut a = DMatrix::zeros(n + 1, j.ncols());
            a.rows_mut(0, n).copy_from(&j);
            a.row_mut(n).copy_from(&tangent.transpose());
            let mut rhs = DVector::zeros(n + 1);
            rhs.rows_mut(0, n).copy_from(&(-f));
            rhs[n] = -c;
            let step = linalg::lstsq(&a, &rhs, 1e-12);
            if !step.iter().all(|x| x.is_finite()) || step.norm() > 1.0 {
                break;
            }
            d += step;
        }
        Err(RepError::PathLost { at: sigma })
    }

    /// Assembles tangent, cocycle and regularity at a solved gauge point.
    pub fn point(&self, gauge: Gauge, orient: Option<&DVector<f64>>) -> Result<RepPoint, RepError> {
        let images = gauge.images();
        let (_, residual) = self.residual(&images);
        let j = self.jacobian(&gauge, &images);
        let n = gauge.dimension();
        let mut tangent: DVector<f64> = linalg::null_space(&j, n - 1).column(0).into_owned();
        let flip = match orient {
            Some(h) => tangent.dot(h) < 0.0,
            // deterministic default: largest component positive
            None => tangent.iamax() < n && tangent[tangent.iamax()] < 0.0,
        };
        if flip {
            tangent = -tangent;
        }
        let du = gauge.differential() * &tangent;
        let cocycle = (0..gauge.generator_count())
            .map(|k| Su2Vector::new(du[3 * k], du[3 * k + 1], du[3 * k + 2]))
            .collect();
        let regularity = regularity(&self.complex, &self.presentation, &images);
        Ok(RepPoint { gauge, images, residual, tangent, cocycle, regularity })
    }
}

/// Cohomology dimensions of `Ad∘ρ`, the meridian condition, and a flag for
/// singular values close to the threshold.
pub fn regularity(complex: &EquivariantComplex, p: &GroupPresentation, images: &[Su2]) -> Regularity {
    let cob = complex.ad_coboundaries(images);
    let mut near = false;
    let mut ranks = Vec::new();
    for d in &cob {
        let s = linalg::singular_values(d);
        let top = s.first().copied().unwrap_or(0.0);
        ranks.push(s.iter().filter(|&&x| x > RANK_TOL * top).count());
        near |= s.iter().any(|&x| x > RANK_TOL * top && x < 10.0 * RANK_TOL * top);
    }
    let dims = &complex.dims;
    let h = |q: usize| 3 * dims[q] - if q < ranks.len() { ranks[q] } else { 0 } - if q > 0 { ranks[q - 1] } else { 0 };
    let mu_noncentral = p.peripheral.as_ref().map_or(true, |per| !per.mu.eval_su2(images).is_central());
    Regularity { dims: [h(0), h(1), h(2)], mu_noncentral, near_singular: near }
}

/// `u(w)` for a cocycle given on generators: `Σ_j Ad(∂w/∂x_j) u(x_j)`.
pub fn cocycle_on_word(u: &[Su2Vector], images: &[Su2], w: &Word) -> Su2Vector {
    (0..u.len()).fold(Su2Vector::ZERO, |acc, j| acc + fox_derivative(w, j).ad_matrix(images) * u[j])
}

/// Coboundary `b(x_j) = ξ − Ad ρ(x_j) ξ`.
pub fn coboundary(xi: Su2Vector, images: &[Su2]) -> Vec<Su2Vector> {
    images.iter().map(|g| xi - g.conjugate_vector(xi)).collect()
}

fn stack(u: &[Su2Vector]) -> DVector<f64> {
    DVector::from_iterator(3 * u.len(), u.iter().flat_map(|v| v.0))
}

/// Component of a 1-cochain orthogonal to the coboundaries `B¹`.
pub fn harmonic_part(u: &[Su2Vector], images: &[Su2]) -> DVector<f64> {
    let mut b = DMatrix::zeros(3 * images.len(), 3);
    for k in 0..3 {
        let e = Su2Vector(std::array::from_fn(|i| (i == k) as i64 as f64));
        b.column_mut(k).copy_from(&stack(&coboundary(e, images)));
    }
    let r = linalg::rank(&b, RANK_TOL);
    let q = linalg::column_space(&b, r);
    let v = stack(u);
    &v - &q * (q.transpose() * &v)
}

/// Tangent cocycle scaled to unit norm on its H¹ class.
pub fn tangent_cocycle(p: &RepPoint) -> Result<Vec<Su2Vector>, RepError> {
    if p.regularity.dims[1] != 1 {
        return Err(RepError::NotRegular { dim_h1: p.regularity.dims[1] });
    }
    let n = harmonic_part(&p.cocycle, &p.images).norm();
    Ok(p.cocycle.iter().map(|v| v.scale(1.0 / n)).collect())
}

/// Options for [`continue_circle`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    pub step: f64,
    /// Upper bound on the number of samples before giving up.
    pub max_points: usize,
}

impl TraceOptions {
    pub fn new(step: f64) -> TraceOptions {
        TraceOptions { step, max_points: (200.0 / step) as usize + 1000 }
    }
}

/// A traced closed component.
#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub points: Vec<RepPoint>,
    /// Fingerprint distance between the start and the continuation past the last sample.
    pub closure_gap: f64,
    /// Gauge-coordinate length of the final segment (last sample back to the first).
    pub closing_step: f64,
}

/// Pseudo-arclength continuation from `start` until the path closes up.
pub fn continue_circle(sys: &RepSystem, start: &RepPoint, opts: TraceOptions) -> Result<Circle, RepError> {
    let step = opts.step;
    let mut points = vec![start.clone()];
    let mut h = step;
    let mut far = false;
    let start_fp = start.fingerprint();
    while points.len() < opts.max_points {
        let cur = points.last().expect("nonempty");
        // close when the start lies just ahead along the tangent
        let to_start = start.gauge.difference(&cur.gauge);
        let ahead = cur.tangent.dot(&to_start);
        if far && to_start.norm() < 1.5 * step && ahead > 0.0 {
            let end = sys.project(&cur.gauge, &cur.tangent, ahead, &cur.tangent)?;
            let gap = end.fingerprint().distance(&start_fp);
            return Ok(Circle { points, closure_gap: gap, closing_step: ahead });
        }
        match sys.project(&cur.gauge, &cur.tangent, h, &cur.tangent) {
            Ok(next) if next.fingerprint().distance(&cur.fingerprint()) <= 2.0 * step => {
                if next.regularity.dims[1] > 1 {
                    return Err(RepError::Bifurcation { index: points.len(), ratio: 0.0 });
                }
                if !next.regularity.mu_noncentral || next.regularity.dims[0] > 0 {
                    return Err(RepError::ReducibleLimit);
                }
                far |= next.gauge.difference(&start.gauge).norm() > 5.0 * step;
                points.push(next);
                h = (2.0 * h).min(step);
            }
            Ok(_) | Err(RepError::PathLost { .. }) => {
                h *= 0.5;
                if h < MIN_STEP {
                    return Err(RepError::PathLost { at: points.len() as f64 });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(RepError::PathLost { at: points.len() as f64 })
}

/// Abelian representations `x_j ↦ g^{α(x_j)}`, conjugated at random.
pub fn abelian_representations<R: Rng + ?Sized>(alpha: &AbelianizationMap, count: usize, rng: &mut R) -> Vec<Vec<Su2>> {
    (0..count)
        .map(|_| {
            let g = Su2::random(rng);
            alpha.exponents.iter().map(|&e| g.pow(e)).collect()
        })
        .collect()
}

/// Irreducible representations from random seeds, randomly conjugated.
pub fn sample_irreducible<R: Rng + ?Sized>(sys: &RepSystem, count: usize, rng: &mut R) -> Vec<Vec<Su2>> {
    let m = sys.presentation.generator_count();
    let mut out = Vec::new();
    for _ in 0..50 * count {
        if out.len() == count {
            break;
        }
        let mut seed = Gauge::new(rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
        seed.extra = (2..m).map(|_| Su2::random(rng)).collect();
        if let Ok(p) = sys.solve_near(&seed) {
            let c = Su2::random(rng);
            out.push(p.images.iter().map(|q| c * *q * c.inverse()).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{abelianize, Letter};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn system() -> RepSystem {
        RepSystem::new(&GroupPresentation::figure_eight()).unwrap()
    }

    #[test]
    fn seed_near_trace_one_converges() {
        // tr ρ(x) = 1 at θ = π/3
        let p = system().solve_near(&Gauge::new(1.05, 1.05, 1.9)).unwrap();
        assert!(p.residual <= RESIDUAL_TOL);
        assert_eq!(p.regularity.dims, [0, 1, 1]);
        assert!(p.gauge.phi > 0.0 && p.gauge.phi < std::f64::consts::PI);
    }

    #[test]
    fn hardcoded_point_is_a_solution() {
        let sys = system();
        let imgs = crate::algebra::tests_support::figure_eight_point();
        assert!(sys.residual(&imgs).1 < 1e-14);
        let p = sys.solve_near_images(&imgs).unwrap();
        assert!(p.fingerprint().distance(&TraceFingerprint::of(&imgs)) < 1e-12);
    }

    #[test]
    fn abelian_seed_is_reducible() {
        assert_eq!(system().solve_near(&Gauge::new(1.0, 1.0, 0.0)), Err(RepError::ReducibleLimit));
    }

    #[test]
    fn conjugated_seed_gives_same_fingerprint() {
        let sys = system();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let base = sys.solve_near(&Gauge::new(1.2, 1.2, 1.5)).unwrap();
        for _ in 0..10 {
            let c = Su2::random(&mut rng);
            let imgs: Vec<Su2> = base.images.iter().map(|q| c * *q * c.inverse()).collect();
            let p = sys.solve_near_images(&imgs).unwrap();
            assert!(p.fingerprint().distance(&base.fingerprint()) < 1e-9);
        }
    }

    #[test]
    fn gauge_fix_is_idempotent_on_the_slice() {
        let g = Gauge::new(0.7, 1.9, 2.2);
        let f = gauge_fix(&g.images()).unwrap();
        assert!(f.difference(&g).norm() < 1e-12);
    }

    #[test]
    fn differential_matches_finite_differences() {
        let g = Gauge::new(0.8, 1.4, 2.0);
        let d = g.differential();
        let imgs = g.images();
        for k in 0..3 {
            let mut e = DVector::zeros(3);
            e[k] = 1e-7;
            let moved = g.apply(&e).images();
            for j in 0..2 {
                let fd = (moved[j] * imgs[j].inverse()).log().scale(1e7);
                for c in 0..3 {
                    assert!((fd.0[c] - d[(3 * j + c, k)]).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn tangent_is_a_cocycle() {
        let sys = system();
        let p = sys.solve_near(&Gauge::new(1.3, 1.3, 1.4)).unwrap();
        let u = tangent_cocycle(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let rand_word = |rng: &mut ChaCha8Rng| {
            Word::reduce((0..6).map(|_| Letter::new(rng.gen_range(0..2), if rng.gen_bool(0.5) { 1 } else { -1 })))
        };
        for _ in 0..20 {
            let (a, b) = (rand_word(&mut rng), rand_word(&mut rng));
            let lhs = cocycle_on_word(&u, &p.images, &(&a * &b));
            let rhs = cocycle_on_word(&u, &p.images, &a) + a.eval_su2(&p.images).conjugate_vector(cocycle_on_word(&u, &p.images, &b));
            assert!((lhs - rhs).norm() < 1e-7);
        }
        // vanishes on the relator and is not a coboundary
        let r = &sys.presentation.relators[0];
        assert!(cocycle_on_word(&u, &p.images, r).norm() < 1e-9);
        assert!((harmonic_part(&u, &p.images).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coboundary_has_zero_class() {
        let p = system().solve_near(&Gauge::new(1.3, 1.3, 1.4)).unwrap();
        let b = coboundary(Su2Vector::new(0.3, -1.0, 0.2), &p.images);
        assert!(harmonic_part(&b, &p.images).norm() < 1e-12);
    }

    #[test]
    fn abelian_representation_has_invariant_vector() {
        let alpha = abelianize(&GroupPresentation::figure_eight()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let sys = system();
        for imgs in abelian_representations(&alpha, 5, &mut rng) {
            assert!(sys.residual(&imgs).1 < 1e-12);
            let r = regularity(&sys.complex, &sys.presentation, &imgs);
            assert_eq!(r.dims[0], 1);
            assert_eq!(r.dims[0] + r.dims[2], r.dims[1]);
        }
    }

    #[test]
    fn trace_derivative_matches_cocycle() {
        // d/dℓ tr ρ(γ) = killing-type pairing of u(γ) with ρ(γ): d tr = 2·Re(u ρ) = −2 u·im(ρ)
        let sys = system();
        let p = sys.solve_near(&Gauge::new(1.3, 1.3, 1.4)).unwrap();
        let w = sys.presentation.word("x y").unwrap();
        let h = 1e-6;
        let fwd = sys.project(&p.gauge, &p.tangent, h, &p.tangent).unwrap();
        let bwd = sys.project(&p.gauge, &p.tangent, -h, &p.tangent).unwrap();
        let fd = (w.eval_su2(&fwd.images).trace() - w.eval_su2(&bwd.images).trace()) / (2.0 * h);
        let u = cocycle_on_word(&p.cocycle, &p.images, &w);
        let analytic = -2.0 * crate::su2::killing(u, w.eval_su2(&p.images).imag());
        assert!((fd - analytic).abs() < 1e-6, "{fd} vs {analytic}");
        assert!(analytic.abs() > 1e-3);
    }

    #[test]
    fn circle_closes() {
        let sys = system();
        let start = sys.solve_near(&Gauge::new(1.05, 1.05, 1.9)).unwrap();
        let c = continue_circle(&sys, &start, TraceOptions::new(0.05)).unwrap();
        assert!(c.closure_gap < 1e-6, "gap {}", c.closure_gap);
        assert!(c.points.iter().all(|p| p.regularity.in_circle()));
        let fps: Vec<_> = c.points.iter().map(|p| p.fingerprint()).collect();
        for w in fps.windows(2) {
            assert!(w[0].distance(&w[1]) <= 0.1);
        }
    }
}

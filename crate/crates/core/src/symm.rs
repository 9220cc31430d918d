//! Symmetries of the representation circle: the involution `ι`, peripheral
//! outer automorphisms with their sign `δ_D`, the torsion function
//! `T_D(s, t)`, and numerical checks of the symmetry relations.

use serde::{Deserialize, Serialize};

use crate::algebra::{AbelianizationMap, GroupPresentation, Word};
use crate::cwmodel::CwPairModel;
use crate::error::{SymmError, VolformError};
use crate::laurent::LaurentPoly;
use crate::repspace::{cocycle_on_word, gauge_fix, RepPoint, RepSystem, TraceFingerprint};
use crate::su2::{extract_axis_angle, killing, Su2, Su2Vector};
use crate::torsion::normalized_torsion;
use crate::volform::{tau_eval, MetrizedCircle, PathPoint};

/// Residual allowed when certifying relator images and peripheral data.
pub const CERTIFY_TOL: f64 = 1e-9;
/// Points of the dense grid used to bracket the best translation.
pub const TRANSLATION_GRID: usize = 2000;
/// Fingerprint distance below which `[ρ*] = [ρ]`.
pub const FIXED_POINT_TOL: f64 = 1e-6;
/// Points used by the local interpolant of a periodic function.
const STENCIL: usize = 6;

/// `ρ*(x_j) = (−1)^{α(x_j)} ρ(x_j)`.
pub fn iota_images(alpha: &AbelianizationMap, images: &[Su2]) -> Vec<Su2> {
    images.iter().zip(&alpha.exponents).map(|(g, &e)| if e.rem_euclid(2) == 0 { *g } else { -*g }).collect()
}

/// `d/dℓ tr ρ(w)` on every fingerprint word: `−2 ⟨u(w), Im ρ(w)⟩`.
pub fn fingerprint_velocity(images: &[Su2], u: &[Su2Vector]) -> Vec<f64> {
    let m = images.len();
    (1u32..1 << m)
        .map(|mask| {
            let w = Word::reduce((0..m).filter(|i| mask >> i & 1 == 1).map(|i| crate::algebra::Letter::new(i, 1)));
            -2.0 * killing(cocycle_on_word(u, images, &w), w.eval_su2(images).imag())
        })
        .collect()
}

/// Gauge-fixes `images` and orients the tangent along `velocity`.
fn oriented_point(sys: &RepSystem, images: &[Su2], velocity: &[Su2Vector]) -> Result<RepPoint, SymmError> {
    let p = sys.solve_near(&gauge_fix(images)?)?;
    let target = fingerprint_velocity(images, velocity);
    let have = fingerprint_velocity(&p.images, &p.cocycle);
    let dot: f64 = target.iter().zip(&have).map(|(a, b)| a * b).sum();
    if dot < 0.0 {
        return Ok(sys.point(p.gauge.clone(), Some(&(-&p.tangent)))?);
    }
    Ok(p)
}

/// `ι(p)`, re-gauged, with the tangent `ι_*(v) = v`.
pub fn iota(sys: &RepSystem, alpha: &AbelianizationMap, p: &RepPoint) -> Result<RepPoint, SymmError> {
    oriented_point(sys, &iota_images(alpha, &p.images), &p.cocycle)
}

/// `ι` on a path point; the velocity cocycle is unchanged.
pub fn iota_path(alpha: &AbelianizationMap, q: &PathPoint) -> PathPoint {
    PathPoint { images: iota_images(alpha, &q.images), velocity: q.velocity.clone() }
}

/// Peripheral data of an automorphism: `φ(λ) = w λ^δ w⁻¹`, `φ(μ) = w μ^e w⁻¹`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedPeripheral {
    pub delta: i8,
    /// `e` above; also the exponent of `α(φ(μ))`.
    pub mu_exponent: i8,
    pub conjugator: Option<String>,
}

/// An automorphism of `π₁E` given on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct OuterAutomorphism {
    pub name: String,
    pub images: Vec<Word>,
    pub peripheral: Option<CertifiedPeripheral>,
    conjugator: Word,
}

impl OuterAutomorphism {
    pub fn new(name: &str, images: Vec<Word>) -> OuterAutomorphism {
        OuterAutomorphism { name: name.to_string(), images, peripheral: None, conjugator: Word::identity() }
    }

    pub fn parse(name: &str, p: &GroupPresentation, images: &[&str]) -> Result<OuterAutomorphism, SymmError> {
        let words = images.iter().map(|w| p.word(w)).collect::<Result<Vec<_>, _>>()?;
        Ok(OuterAutomorphism::new(name, words))
    }

    pub fn identity(generators: usize) -> OuterAutomorphism {
        OuterAutomorphism::new("id", (0..generators).map(Word::generator).collect())
    }

    /// Amphicheiral symmetry of the figure-eight: `x ↦ x⁻¹`, `y ↦ y x⁻¹ y⁻¹`.
    pub fn figure_eight_phi1(p: &GroupPresentation) -> OuterAutomorphism {
        OuterAutomorphism::parse("phi1", p, &["x^-1", "y x^-1 y^-1"]).expect("figure-eight generators")
    }

    /// Inversion of the figure-eight: `x ↦ x⁻¹`, `y ↦ y⁻¹`.
    pub fn figure_eight_phi2(p: &GroupPresentation) -> OuterAutomorphism {
        OuterAutomorphism::parse("phi2", p, &["x^-1", "y^-1"]).expect("figure-eight generators")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OuterAutomorphism) -> OuterAutomorphism {
        let images = other.images.iter().map(|w| w.substitute(&self.images)).collect();
        OuterAutomorphism::new(&format!("{}*{}", self.name, other.name), images)
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// `φ*ρ = ρ∘φ` on generators.
    pub fn pullback(&self, images: &[Su2]) -> Vec<Su2> {
        self.images.iter().map(|w| w.eval_su2(images)).collect()
    }

    /// `(φ* u)(x_j) = u(φ(x_j))`.
    pub fn pullback_cocycle(&self, images: &[Su2], u: &[Su2Vector]) -> Vec<Su2Vector> {
        self.images.iter().map(|w| cocycle_on_word(u, images, w)).collect()
    }

    pub fn pullback_path(&self, q: &PathPoint) -> PathPoint {
        PathPoint { images: self.pullback(&q.images), velocity: self.pullback_cocycle(&q.images, &q.velocity) }
    }

    /// Largest `|ρ(φ(r)) − I|` over the relators and representations.
    pub fn relator_residual(&self, p: &GroupPresentation, reps: &[Vec<Su2>]) -> f64 {
        reps.iter()
            .flat_map(|imgs| p.relators.iter().map(move |r| self.apply(r).eval_su2(imgs).distance(&Su2::IDENTITY)))
            .fold(0.0, f64::max)
    }

    /// Searches for `w` with `φ(λ) = w λ^δ w⁻¹` and `φ(μ) = w μ^e w⁻¹` on
    /// all given representations, shortest words first.
    pub fn certify(&mut self, p: &GroupPresentation, reps: &[Vec<Su2>], max_len: usize) -> Result<&CertifiedPeripheral, SymmError> {
        let per = p.peripheral()?.clone();
        let (fl, fm) = (self.apply(&per.lambda), self.apply(&per.mu));
        let m = p.generator_count();
        let mut frontier = vec![Word::identity()];
        for len in 0..=max_len {
            for w in &frontier {
                for (delta, e) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
                    let tl = &(w * &per.lambda.pow(delta as i64)) * &w.inverse();
                    let tm = &(w * &per.mu.pow(e as i64)) * &w.inverse();
                    let ok = reps.iter().all(|r| {
                        fl.eval_su2(r).distance(&tl.eval_su2(r)) < CERTIFY_TOL && fm.eval_su2(r).distance(&tm.eval_su2(r)) < CERTIFY_TOL
                    });
                    if ok {
                        let conjugator = (!w.is_empty()).then(|| w.display(&p.names));
                        self.peripheral = Some(CertifiedPeripheral { delta, mu_exponent: e, conjugator });
                        self.conjugator = w.clone();
                        return Ok(self.peripheral.as_ref().expect("just set"));
                    }
                }
            }
            if len == max_len {
                break;
            }
            frontier = frontier
                .iter()
                .flat_map(|w| {
                    (0..m).flat_map(move |g| [1i8, -1].map(|e| w * &Word::reduce([crate::algebra::Letter::new(g, e)])))
                })
                .filter(|w| w.len() == len + 1)
                .collect();
            frontier.sort();
            frontier.dedup();
        }
        Err(SymmError::Uncertified { name: self.name.clone() })
    }

    pub fn conjugator(&self) -> &Word {
        &self.conjugator
    }
}

/// `φ*p`, re-gauged, with the pushed-forward tangent.
pub fn act(sys: &RepSystem, phi: &OuterAutomorphism, p: &RepPoint) -> Result<RepPoint, SymmError> {
    let images = phi.pullback(&p.images);
    let mu = &sys.presentation.peripheral()?.mu;
    if mu.eval_su2(&images).is_central() {
        return Err(SymmError::CentralMuImage);
    }
    oriented_point(sys, &images, &phi.pullback_cocycle(&p.images, &p.cocycle))
}

/// `δ′` with `P_{φ*ρ} = δ′ P_ρ`, after undoing the certificate's conjugator.
pub fn delta_prime(model: &CwPairModel, phi: &OuterAutomorphism, images: &[Su2]) -> Result<i8, SymmError> {
    let mu = &model.peripheral().mu;
    let p = extract_axis_angle(&mu.eval_su2(images)).map_err(VolformError::from)?.axis;
    let moved = phi.apply(mu).eval_su2(images);
    let back = phi.conjugator().eval_su2(images).inverse();
    let q = extract_axis_angle(&(back * moved * back.inverse())).map_err(|_| SymmError::CentralMuImage)?.axis;
    let c = killing(p, q);
    if (c.abs() - 1.0).abs() > 1e-6 {
        return Err(SymmError::InconsistentSign);
    }
    Ok(if c > 0.0 { 1 } else { -1 })
}

/// `δ_D = δ δ′`, checked to be constant over the given samples of `D`.
pub fn delta_sign(model: &CwPairModel, phi: &OuterAutomorphism, samples: &[Vec<Su2>]) -> Result<i8, SymmError> {
    let delta = phi.peripheral.as_ref().ok_or_else(|| SymmError::Uncertified { name: phi.name.clone() })?.delta;
    let mut sign = None;
    for imgs in samples {
        let d = delta * delta_prime(model, phi, imgs)?;
        if sign.is_some_and(|s| s != d) {
            return Err(SymmError::InconsistentSign);
        }
        sign = Some(d);
    }
    sign.ok_or(SymmError::InconsistentSign)
}

/// A fixed point of `ι` on a metrized circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    /// Oriented arc-length position.
    pub s: f64,
    pub trace_mu: f64,
    /// Fingerprint distance between `[ρ]` and `[ρ*]`.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetabelianLocus {
    pub points: Vec<FixedPoint>,
    /// The ambient manifold is an integral homology sphere, so the fixed
    /// points are exactly the metabelian classes.
    pub metabelian: bool,
}

/// Fixed points of `ι`: zeros of `tr ρ_s(μ)`, refined on the curve and
/// confirmed by comparing fingerprints of `ρ` and `ρ*`.
pub fn metabelian_locus(model: &CwPairModel, sys: &RepSystem, mc: &MetrizedCircle) -> Result<MetabelianLocus, SymmError> {
    let alpha = model.alpha()?;
    let mu = &model.peripheral().mu;
    let n = mc.samples.len();
    let tr = |imgs: &[Su2]| mu.eval_su2(imgs).trace();
    let mut points = Vec::new();
    for k in 0..n {
        let (a, b) = (&mc.samples[k].point, &mc.samples[(k + 1) % n].point);
        let (fa, fb) = (tr(&a.images), tr(&b.images));
        if fa != 0.0 && fa * fb >= 0.0 {
            continue;
        }
        let sigma_end = a.tangent.dot(&b.gauge.difference(&a.gauge));
        let at = |sigma: f64| sys.project(&a.gauge, &a.tangent, sigma, &a.tangent);
        // bisection with a secant guess
        let (mut lo, mut hi, mut flo) = (0.0, sigma_end, fa);
        let mut root = if fa == 0.0 { Some(a.clone()) } else { None };
        for _ in 0..200 {
            if root.is_some() {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let q = at(mid)?;
            let fm = tr(&q.images);
            if fm == 0.0 || (hi - lo) < 1e-15 {
                root = Some(q);
                break;
            }
            if (fm > 0.0) == (flo > 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let q = match root {
            Some(q) => q,
            None => at(0.5 * (lo + hi))?,
        };
        let sigma = a.tangent.dot(&q.gauge.difference(&a.gauge));
        let mut s = mc.samples[k].s;
        for &(x, w) in &GL_PARTIAL {
            let node = at(x * sigma)?;
            let scale = 1.0 / a.tangent.dot(&node.tangent);
            let v: Vec<Su2Vector> = node.cocycle.iter().map(|u| u.scale(scale)).collect();
            s += w * sigma * tau_eval(model, &node.images, &v)?.abs();
        }
        let gap = TraceFingerprint::of(&q.images).distance(&TraceFingerprint::of(&iota_images(&alpha, &q.images)));
        if gap < FIXED_POINT_TOL {
            points.push(FixedPoint { s: mc.orientation as f64 * s, trace_mu: tr(&q.images), gap });
        }
    }
    Ok(MetabelianLocus { points, metabelian: model.ambient_zhs })
}

const GL_PARTIAL: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_93),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_07),
    (0.669_990_521_792_428_1, 0.326_072_577_431_273_07),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_93),
];

/// Periodic function sampled at sorted abscissae, evaluated by local
/// Lagrange interpolation.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSeries {
    pub x: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub period: f64,
}

impl PeriodicSeries {
    /// Sorts the samples and shifts them into `[x₀, x₀ + period)`.
    pub fn new(x: Vec<f64>, y: Vec<Vec<f64>>, period: f64) -> PeriodicSeries {
        let x0 = x[0];
        let mut pairs: Vec<(f64, Vec<f64>)> =
            x.into_iter().map(|v| x0 + (v - x0).rem_euclid(period)).zip(y).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (x, y) = pairs.into_iter().unzip();
        PeriodicSeries { x, y, period }
    }

    pub fn eval(&self, at: f64) -> Vec<f64> {
        let n = self.x.len();
        let x0 = self.x[0];
        let t = x0 + (at - x0).rem_euclid(self.period);
        let idx = self.x.partition_point(|&v| v <= t);
        let start = idx as i64 - (STENCIL / 2) as i64;
        let nodes: Vec<(f64, &Vec<f64>)> = (0..STENCIL as i64)
            .map(|k| {
                let j = start + k;
                let wrap = j.div_euclid(n as i64);
                let jj = j.rem_euclid(n as i64) as usize;
                (self.x[jj] + wrap as f64 * self.period, &self.y[jj])
            })
            .collect();
        let dim = self.y[0].len();
        let mut out = vec![0.0; dim];
        for (i, (xi, yi)) in nodes.iter().enumerate() {
            let l: f64 = nodes.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, (xj, _))| (t - xj) / (xi - xj)).product();
            for d in 0..dim {
                out[d] += l * yi[d];
            }
        }
        out
    }
}

/// `T_D(s, t)` sampled along a metrized circle.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionFunction {
    pub component: usize,
    /// Oriented arc-length positions, one per sample, in traced order.
    pub s: Vec<f64>,
    pub polys: Vec<LaurentPoly>,
    pub period: f64,
}

impl TorsionFunction {
    /// Smallest and largest exponent over all samples.
    pub fn exponent_range(&self) -> (i64, i64) {
        let lo = self.polys.iter().map(|p| p.lo()).min().unwrap_or(0);
        let hi = self.polys.iter().map(|p| p.hi()).max().unwrap_or(0);
        (lo, hi)
    }

    fn coefficient_rows(&self, range: (i64, i64)) -> Vec<Vec<f64>> {
        self.polys.iter().map(|p| (range.0..=range.1).map(|k| p.coeff(k).re).collect()).collect()
    }

    pub fn series(&self, range: (i64, i64)) -> PeriodicSeries {
        PeriodicSeries::new(self.s.clone(), self.coefficient_rows(range), self.period)
    }

    /// `f(s) = −½ · [t⁰] T_D(s, t)` at the samples, sorted by `s ∈ [0, period)`.
    pub fn f_of_s(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> =
            self.s.iter().zip(&self.polys).map(|(s, p)| (s.rem_euclid(self.period) + 0.0, -0.5 * p.coeff(0).re)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    }
}

pub fn torsion_function(model: &CwPairModel, mc: &MetrizedCircle) -> Result<TorsionFunction, SymmError> {
    let polys = mc
        .samples
        .iter()
        .map(|x| normalized_torsion(model, &x.point.images).map(|t| t.poly))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TorsionFunction { component: 0, s: mc.oriented_positions(), polys, period: mc.total_volume })
}

/// A map of the circle to itself used in a symmetry check.
#[derive(Clone, Debug, PartialEq)]
pub enum Transform {
    Identity,
    Iota,
    Automorphism(OuterAutomorphism),
}

impl Transform {
    pub fn name(&self) -> String {
        match self {
            Transform::Identity => "id".into(),
            Transform::Iota => "iota".into(),
            Transform::Automorphism(phi) => phi.name.clone(),
        }
    }

    pub fn map(&self, alpha: &AbelianizationMap, q: &PathPoint) -> PathPoint {
        match self {
            Transform::Identity => q.clone(),
            Transform::Iota => iota_path(alpha, q),
            Transform::Automorphism(phi) => phi.pullback_path(q),
        }
    }
}

/// One line of `symmetry-report.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub transform: String,
    /// The compared right-hand side, e.g. `-T(-s,-t)`.
    pub relation: String,
    /// Whether this is the relation the theory predicts.
    pub predicted: bool,
    pub s0: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The image function `F(s) = T_{g(D)}(s, t)` on the image of the sampled path.
pub struct ImageFunction {
    pub s: Vec<f64>,
    pub polys: Vec<LaurentPoly>,
    pub length: f64,
}

pub fn image_function(model: &CwPairModel, mc: &MetrizedCircle, transform: &Transform) -> Result<ImageFunction, SymmError> {
    let alpha = model.alpha()?;
    let mut s = Vec::with_capacity(mc.samples.len());
    let mut acc = 0.0;
    for seg in &mc.segments {
        s.push(acc);
        for n in seg {
            let q = transform.map(&alpha, &n.point);
            acc += n.weight * tau_eval(model, &q.images, &q.velocity)?;
        }
    }
    let polys = mc
        .samples
        .iter()
        .map(|x| {
            let q = transform.map(&alpha, &PathPoint::of(&x.point));
            normalized_torsion(model, &q.images).map(|t| t.poly)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ImageFunction { s, polys, length: acc.abs() })
}

/// Right-hand side `T_D(ε s, ±t^{e})` of a symmetry relation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Relation {
    /// `ε`: sign on `s`.
    pub s_sign: f64,
    /// `e`: `t ↦ t^e`.
    pub t_exponent: i64,
    /// Substitute `t ↦ −t` and negate.
    pub negate: bool,
}

impl Relation {
    pub fn label(&self) -> String {
        let s = if self.s_sign < 0.0 { "-s" } else { "s" };
        let t = match (self.t_exponent, self.negate) {
            (1, false) => "t",
            (-1, false) => "t^-1",
            (1, true) => "-t",
            _ => "-t^-1",
        };
        format!("{}T({s},{t})", if self.negate { "-" } else { "" })
    }
}

/// Finds `s₀` minimizing `sup_j ‖F(s_j) − G(s_j + s₀)‖∞`.
pub fn best_translation(f: &ImageFunction, d: &TorsionFunction, rel: Relation) -> (f64, f64) {
    let (dlo, dhi) = d.exponent_range();
    let lo = f.polys.iter().map(|p| p.lo()).fold(dlo, i64::min);
    let hi = f.polys.iter().map(|p| p.hi()).fold(dhi, i64::max);
    // closed under k ↦ −k so that t ↦ t⁻¹ stays in range
    let range = (lo.min(-hi), hi.max(-lo));
    let series = d.series(range);
    let residual = |s0: f64| -> f64 {
        let mut worst = 0.0f64;
        for (s, p) in f.s.iter().zip(&f.polys) {
            let g = series.eval(rel.s_sign * (s + s0));
            for k in range.0..=range.1 {
                // coefficient of t^k in ±T(±t^e) comes from t^{e k}
                let src = rel.t_exponent * k;
                let mut c = g[(src - range.0) as usize];
                if rel.negate {
                    c = if src.rem_euclid(2) == 1 { c } else { -c };
                }
                worst = worst.max((p.coeff(k).re - c).abs());
            }
        }
        worst
    };
    let period = d.period;
    let h = period / TRANSLATION_GRID as f64;
    let (mut best, mut val) = (0.0, f64::INFINITY);
    for i in 0..TRANSLATION_GRID {
        let s0 = i as f64 * h;
        let r = residual(s0);
        if r < val {
            best = s0;
            val = r;
        }
    }
    // golden-section refinement inside the bracketing cell
    let (mut a, mut b) = (best - h, best + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d2) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (residual(c), residual(d2));
    for _ in 0..80 {
        if fc < fd {
            b = d2;
            d2 = c;
            fd = fc;
            c = b - g * (b - a);
            fc = residual(c);
        } else {
            a = c;
            c = d2;
            fc = fd;
            d2 = a + g * (b - a);
            fd = residual(d2);
        }
    }
    let s0 = 0.5 * (a + b);
    let r = residual(s0);
    if r < val {
        (s0.rem_euclid(period), r)
    } else {
        (best, val)
    }
}

/// Checks `T_{g(D)}(s, t) ∼ RHS` for the relations predicted for `transform`.
///
/// For automorphisms both `t^{±1}` variants are reported and the one matching
/// `α(φ(μ))` is marked as predicted.
pub fn check_symmetry(
    model: &CwPairModel,
    mc: &MetrizedCircle,
    d: &TorsionFunction,
    transform: &Transform,
    tol: f64,
) -> Result<Vec<SymmetryReport>, SymmError> {
    let f = image_function(model, mc, transform)?;
    if (f.length - d.period).abs() > 1e-4 * d.period {
        return Err(SymmError::ComponentMismatch { left: f.length, right: d.period });
    }
    let relations: Vec<(Relation, bool)> = match transform {
        Transform::Identity => vec![(Relation { s_sign: 1.0, t_exponent: 1, negate: false }, true)],
        Transform::Iota => vec![(Relation { s_sign: -1.0, t_exponent: 1, negate: true }, true)],
        Transform::Automorphism(phi) => {
            let per = phi.peripheral.as_ref().ok_or_else(|| SymmError::Uncertified { name: phi.name.clone() })?;
            let samples: Vec<Vec<Su2>> = mc.samples.iter().map(|x| x.point.images.clone()).collect();
            let sign = delta_sign(model, phi, &samples)? as f64;
            [1i64, -1]
                .into_iter()
                .map(|e| (Relation { s_sign: sign, t_exponent: e, negate: false }, e == per.mu_exponent as i64))
                .collect()
        }
    };
    Ok(relations
        .into_iter()
        .map(|(rel, predicted)| {
            let (s0, residual) = best_translation(&f, d, rel);
            SymmetryReport {
                transform: transform.name(),
                relation: rel.label(),
                predicted,
                s0,
                residual,
                tolerance: tol,
                pass: residual <= tol,
            }
        })
        .collect())
}

/// `τ_{g(ρ)}(g_* v) / τ_ρ(v)` at a path point.
pub fn pullback_ratio(model: &CwPairModel, transform: &Transform, q: &PathPoint) -> Result<f64, SymmError> {
    let alpha = model.alpha()?;
    let img = transform.map(&alpha, q);
    Ok(tau_eval(model, &img.images, &img.velocity)? / tau_eval(model, &q.images, &q.velocity)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repspace::{continue_circle, Gauge, TraceOptions};

    struct Fixture {
        model: CwPairModel,
        sys: RepSystem,
        mc: MetrizedCircle,
    }

    fn fixture(step: f64) -> Fixture {
        let model = CwPairModel::figure_eight();
        let sys = model.rep_system().unwrap();
        let start = sys.solve_near(&Gauge::new(1.05, 1.05, 1.9)).unwrap();
        let circle = continue_circle(&sys, &start, TraceOptions::new(step)).unwrap();
        let mc = crate::volform::metrize(&model, &sys, &circle).unwrap();
        Fixture { model, sys, mc }
    }

    fn certified(model: &CwPairModel, mut phi: OuterAutomorphism) -> OuterAutomorphism {
        let reps = model.validation_representations(11);
        phi.certify(&model.presentation, &reps[50..], 4).unwrap();
        phi
    }

    #[test]
    fn iota_is_involution() {
        let f = fixture(0.05);
        let alpha = f.model.alpha().unwrap();
        let p = &f.mc.samples[3].point;
        let q = iota(&f.sys, &alpha, &iota(&f.sys, &alpha, p).unwrap()).unwrap();
        assert!(q.fingerprint().distance(&p.fingerprint()) < 1e-10);
        let twice = iota_images(&alpha, &iota_images(&alpha, &p.images));
        assert_eq!(twice, p.images);
        let fp = TraceFingerprint::of(&p.images);
        let fs = TraceFingerprint::of(&iota_images(&alpha, &p.images));
        // masks 1, 2 are odd length, 3 is even
        assert!((fs.0[0] + fp.0[0]).abs() < 1e-15 && (fs.0[1] + fp.0[1]).abs() < 1e-15);
        assert!((fs.0[2] - fp.0[2]).abs() < 1e-15);
    }

    #[test]
    fn certificates() {
        let model = CwPairModel::figure_eight();
        let p = &model.presentation;
        let phi1 = certified(&model, OuterAutomorphism::figure_eight_phi1(p));
        let phi2 = certified(&model, OuterAutomorphism::figure_eight_phi2(p));
        let reps = model.validation_representations(3);
        assert!(phi1.relator_residual(p, &reps) < CERTIFY_TOL);
        assert!(phi2.relator_residual(p, &reps) < CERTIFY_TOL);
        let a = model.alpha().unwrap();
        for phi in [&phi1, &phi2] {
            let e = phi.peripheral.as_ref().unwrap().mu_exponent as i64;
            assert_eq!(a.apply(&phi.apply(&p.peripheral().unwrap().mu)), e);
        }
    }

    #[test]
    fn identity_translation_is_zero() {
        let f = fixture(0.05);
        let d = torsion_function(&f.model, &f.mc).unwrap();
        let r = check_symmetry(&f.model, &f.mc, &d, &Transform::Identity, 1e-6).unwrap();
        assert!(r[0].residual < 1e-12, "{:?}", r);
        let s0 = r[0].s0.min(d.period - r[0].s0);
        assert!(s0 < 1e-6);
    }

    #[test]
    fn iota_symmetry_and_fixed_points() {
        let f = fixture(0.05);
        let d = torsion_function(&f.model, &f.mc).unwrap();
        let r = check_symmetry(&f.model, &f.mc, &d, &Transform::Iota, 1e-6).unwrap();
        assert!(r[0].pass, "{:?}", r);
        let locus = metabelian_locus(&f.model, &f.sys, &f.mc).unwrap();
        assert_eq!(locus.points.len(), 2);
        let sep = (locus.points[0].s - locus.points[1].s).rem_euclid(d.period);
        assert!((sep - 0.5 * d.period).abs() < 1e-3 * d.period, "{sep} vs {}", d.period);
    }

    #[test]
    fn automorphism_signs() {
        let f = fixture(0.05);
        let p = &f.model.presentation;
        let phi1 = certified(&f.model, OuterAutomorphism::figure_eight_phi1(p));
        let phi2 = certified(&f.model, OuterAutomorphism::figure_eight_phi2(p));
        let samples: Vec<Vec<Su2>> = f.mc.samples.iter().map(|x| x.point.images.clone()).collect();
        assert_eq!(delta_sign(&f.model, &phi1, &samples).unwrap(), -1);
        assert_eq!(delta_sign(&f.model, &phi2, &samples).unwrap(), 1);
        for x in f.mc.samples.iter().step_by(5) {
            let q = PathPoint::of(&x.point);
            let r1 = pullback_ratio(&f.model, &Transform::Automorphism(phi1.clone()), &q).unwrap();
            assert!((r1 + 1.0).abs() < 1e-5, "{r1}");
            let r2 = pullback_ratio(&f.model, &Transform::Automorphism(phi2.clone()), &q).unwrap();
            assert!((r2 - 1.0).abs() < 1e-5, "{r2}");
        }
    }

    #[test]
    fn automorphism_symmetry() {
        let f = fixture(0.05);
        let d = torsion_function(&f.model, &f.mc).unwrap();
        let phi1 = certified(&f.model, OuterAutomorphism::figure_eight_phi1(&f.model.presentation));
        let r = check_symmetry(&f.model, &f.mc, &d, &Transform::Automorphism(phi1), 1e-6).unwrap();
        assert!(r.iter().find(|x| x.predicted).unwrap().pass, "{:?}", r);
    }

    #[test]
    fn outer_relations() {
        let f = fixture(0.05);
        let p = &f.model.presentation;
        let phi1 = OuterAutomorphism::figure_eight_phi1(p);
        let phi2 = OuterAutomorphism::figure_eight_phi2(p);
        let p12 = phi1.compose(&phi2);
        let words = [phi1.compose(&phi1).compose(&phi1.compose(&phi1)), phi2.compose(&phi2), p12.compose(&p12)];
        for x in f.mc.samples.iter().step_by(7) {
            let fp = x.point.fingerprint();
            for w in &words {
                assert!(TraceFingerprint::of(&w.pullback(&x.point.images)).distance(&fp) < 1e-8);
            }
            assert!(TraceFingerprint::of(&phi2.pullback(&x.point.images)).distance(&fp) < 1e-8);
        }
    }

    #[test]
    fn act_identity_and_phi2() {
        let f = fixture(0.05);
        let p = &f.mc.samples[4].point;
        let id = OuterAutomorphism::identity(2);
        assert!(act(&f.sys, &id, p).unwrap().fingerprint().distance(&p.fingerprint()) < 1e-10);
        let phi2 = OuterAutomorphism::figure_eight_phi2(&f.model.presentation);
        assert!(act(&f.sys, &phi2, p).unwrap().fingerprint().distance(&p.fingerprint()) < 1e-8);
    }

    #[test]
    fn periodic_interpolation_is_accurate() {
        let n = 200;
        let period = 3.0;
        let x: Vec<f64> = (0..n).map(|i| 0.7 + period * (i as f64 + 0.3 * ((i * 7 % 5) as f64) / 5.0) / n as f64).collect();
        let y = x.iter().map(|&t| vec![(2.0 * std::f64::consts::PI * t / period).sin()]).collect();
        let s = PeriodicSeries::new(x, y, period);
        for k in 0..50 {
            let t = -5.0 + 0.37 * k as f64;
            assert!((s.eval(t)[0] - (2.0 * std::f64::consts::PI * t / period).sin()).abs() < 1e-9);
        }
    }
}

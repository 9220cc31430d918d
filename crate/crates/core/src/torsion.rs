//! The twisted Alexander (Wada) invariant and the normalized Reidemeister
//! torsion `T̃_ρ(t)` of the `α⊗ρ`-twisted chain complex.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{evaluate, AbelianizationMap, GroupPresentation};
use crate::chain::{sign_torsion_tau0, LaurentTorsion, LiftChoice};
use crate::cwmodel::CwPairModel;
use crate::error::TorsionError;
use crate::laurent::{self, LaurentMatrix, LaurentPoly, SignRule, UnitClass};
use crate::su2::Su2;

/// Relative tolerance for cancelling the torsion denominator.
pub const DIVISION_TOL: f64 = 1e-9;
/// `|det(α⊗ρ(x_j) − I)|` at a probe point below this counts as singular.
pub const SINGULAR_TOL: f64 = 1e-10;
/// Dimension of the twisting representation.
const RANK: usize = 2;

/// Twisted Alexander invariant of a deficiency-one presentation, dropping
/// the Fox column block of generator `drop`.
pub fn wada_invariant(
    p: &GroupPresentation,
    images: &[Su2],
    alpha: &AbelianizationMap,
    drop: usize,
) -> Result<UnitClass, TorsionError> {
    if p.deficiency() != 1 {
        return Err(TorsionError::NotDeficiencyOne);
    }
    let m = p.generator_count();
    let fox = p.fox_matrix();
    let kept: Vec<usize> = (0..m).filter(|&j| j != drop).collect();
    let rows = p.relators.len();
    let mut minor = LaurentMatrix::zeros(2 * rows, 2 * kept.len());
    for (r, row) in fox.iter().enumerate() {
        for (c, &j) in kept.iter().enumerate() {
            minor.set_block(2 * r, 2 * c, &evaluate(&row[j], Some(images), Some(alpha)));
        }
    }
    let x = evaluate(&crate::algebra::GroupRingElement::from_word(crate::algebra::Word::generator(drop)), Some(images), Some(alpha));
    let den = laurent::det(&(&x + &LaurentMatrix::identity(2).scale_entries(|e| -e))).trim();
    if den.is_zero() || den.max_abs() < SINGULAR_TOL {
        return Err(TorsionError::SingularDenominator { generator: drop });
    }
    let num = if rows == 0 { LaurentPoly::one() } else { laurent::det(&minor).trim() };
    Ok(UnitClass::new(num, den))
}

/// [`wada_invariant`] with the first generator whose denominator is nonsingular.
pub fn wada_any(p: &GroupPresentation, images: &[Su2], alpha: &AbelianizationMap) -> Result<(usize, UnitClass), TorsionError> {
    for j in 0..p.generator_count() {
        match wada_invariant(p, images, alpha, j) {
            Ok(w) => return Ok((j, w)),
            Err(TorsionError::SingularDenominator { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(TorsionError::ExceptionalRepresentation)
}

/// Where the sign and `t`-power of a normalized torsion came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignProvenance {
    /// Sign of the untwisted real torsion with orientation `{[pt], [μ]}`.
    pub tau0: i8,
    /// `T̃ = τ₀ⁿ · t^shift · T` for the raw chain torsion `T`.
    pub shift: i64,
}

/// Palindromic normalized torsion `T̃_ρ(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedTorsion {
    pub poly: LaurentPoly,
    pub provenance: SignProvenance,
}

impl NormalizedTorsion {
    /// Real parts of the coefficients from `t^lo` upward.
    pub fn real_coefficients(&self) -> (i64, Vec<f64>) {
        (self.poly.lo(), self.poly.coeffs().iter().map(|c| c.re).collect())
    }

    pub fn coeff(&self, k: i64) -> f64 {
        self.poly.coeff(k).re
    }

    /// `T̃(t) ↦ −T̃(−t)`, the effect of the involution.
    pub fn iota_image(&self) -> LaurentPoly {
        -&self.poly.negate_variable()
    }
}

/// `τ₀`: sign of the torsion of `C_*(E; R)` based by cells, with homology
/// basis the base point and the meridian.
pub fn homology_orientation_sign(model: &CwPairModel) -> Result<i8, TorsionError> {
    let chains = model.exterior.untwisted_chains();
    let m = model.presentation.generator_count();
    let mu = model.peripheral().mu.exponent_sums(m);
    let pt = DMatrix::from_element(1, 1, 1.0);
    let mu = DMatrix::from_iterator(m, 1, mu.iter().map(|&e| e as f64));
    let based = chains.with_homology(0, pt)?.with_homology(1, mu)?;
    Ok(sign_torsion_tau0(&based)?)
}

/// Torsion of `C_*(E; C(t)²)` for the given lifts, before any normalization.
pub fn raw_torsion(model: &CwPairModel, images: &[Su2], lifts: &LiftChoice) -> Result<LaurentTorsion, TorsionError> {
    let alpha = model.alpha().map_err(|_| TorsionError::NotDeficiencyOne)?;
    let complex = model.exterior.with_lifts(lifts).alpha_rho_chains(images, &alpha)?;
    Ok(complex.torsion()?)
}

pub fn normalized_torsion(model: &CwPairModel, images: &[Su2]) -> Result<NormalizedTorsion, TorsionError> {
    normalized_torsion_with_lifts(model, images, &LiftChoice::reference(&model.exterior.dims))
}

/// Sign-refined torsion made palindromic by a power of `t`.
///
/// The homology orientation enters as `τ₀ⁿ` with `n = 2`, so the sign is that
/// of the raw torsion. No leading-coefficient rule is applied.
pub fn normalized_torsion_with_lifts(
    model: &CwPairModel,
    images: &[Su2],
    lifts: &LiftChoice,
) -> Result<NormalizedTorsion, TorsionError> {
    let tau0 = homology_orientation_sign(model)?;
    let raw = raw_torsion(model, images, lifts)?;
    let poly = raw.num.exact_div(&raw.den, DIVISION_TOL)?;
    let sym = laurent::symmetrize(&poly, SignRule::Keep)?;
    let poly = sym.poly.scale(Complex64::new((tau0 as f64).powi(RANK as i32), 0.0));
    Ok(NormalizedTorsion { poly, provenance: SignProvenance { tau0, shift: sym.shift } })
}

/// One row of `torsion-samples.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionSample {
    pub s: f64,
    /// Exponent of the first coefficient.
    pub lo: i64,
    pub coefficients: Vec<f64>,
    pub provenance: SignProvenance,
}

impl TorsionSample {
    pub fn new(s: f64, t: &NormalizedTorsion) -> TorsionSample {
        let (lo, coefficients) = t.real_coefficients();
        TorsionSample { s, lo, coefficients, provenance: t.provenance }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{abelianize, tests_support::figure_eight_point};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fig8() -> (CwPairModel, AbelianizationMap) {
        let m = CwPairModel::figure_eight();
        let a = m.alpha().unwrap();
        (m, a)
    }

    #[test]
    fn wada_generators_agree() {
        let (m, a) = fig8();
        let imgs = figure_eight_point();
        let wx = wada_invariant(&m.presentation, &imgs, &a, 0).unwrap();
        let wy = wada_invariant(&m.presentation, &imgs, &a, 1).unwrap();
        assert!(wx.equal_up_to_unit(&wy, 1e-8));
    }

    #[test]
    fn wada_alexander_polynomial() {
        let p = GroupPresentation::figure_eight();
        let a = abelianize(&p).unwrap();
        let fox = p.fox_matrix();
        let num = evaluate(&fox[0][1], None, Some(&a))[(0, 0)].clone();
        let den = LaurentPoly::from_real(0, &[-1.0, 1.0]);
        let w = UnitClass::new(num, den.clone());
        let expected = UnitClass::new(LaurentPoly::from_real(0, &[1.0, -3.0, 1.0]), den);
        assert!(w.equal_up_to_unit(&expected, 1e-12));
    }

    #[test]
    fn wada_unknot() {
        let p = GroupPresentation::parse(&["x"], &[], Some(("1", "x"))).unwrap();
        let a = abelianize(&p).unwrap();
        let x = Su2::from_axis_angle(0.7, crate::su2::Su2Vector::E3);
        let w = wada_invariant(&p, &[x], &a, 0).unwrap();
        assert_eq!(w.num, LaurentPoly::one());
        // det(t ρ(x) − I) = t² − tr ρ(x) t + 1
        let expected = LaurentPoly::from_real(0, &[1.0, -x.trace(), 1.0]);
        assert!(w.den.max_distance(&expected) < 1e-12);
    }

    #[test]
    fn figure_eight_formula() {
        let (m, _) = fig8();
        let imgs = figure_eight_point();
        let t = normalized_torsion(&m, &imgs).unwrap();
        let f = imgs[0].trace();
        let expected = LaurentPoly::from_real(-1, &[1.0, -2.0 * f, 1.0]);
        assert!(t.poly.max_distance(&expected) < 1e-8, "{} vs {}", t.poly, expected);
    }

    #[test]
    fn lift_independence() {
        let (m, _) = fig8();
        let imgs = figure_eight_point();
        let base = normalized_torsion(&m, &imgs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let lifts = LiftChoice::random(&m.exterior.dims, 2, 4, &mut rng);
            let t = normalized_torsion_with_lifts(&m, &imgs, &lifts).unwrap();
            assert!(t.poly.max_distance(&base.poly) < 1e-9);
        }
    }

    #[test]
    fn iota_negates_variable() {
        let (m, a) = fig8();
        let imgs = figure_eight_point();
        let star: Vec<Su2> = imgs.iter().enumerate().map(|(j, g)| if a.exponents[j] % 2 == 0 { *g } else { -*g }).collect();
        let t = normalized_torsion(&m, &imgs).unwrap();
        let ts = normalized_torsion(&m, &star).unwrap();
        assert!(ts.poly.max_distance(&t.iota_image()) < 1e-8);
    }

    #[test]
    fn conjugation_invariance() {
        let (m, _) = fig8();
        let imgs = figure_eight_point();
        let base = normalized_torsion(&m, &imgs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let g = Su2::random(&mut rng);
            let conj: Vec<Su2> = imgs.iter().map(|h| g * *h * g.inverse()).collect();
            assert!(normalized_torsion(&m, &conj).unwrap().poly.max_distance(&base.poly) < 1e-9);
        }
    }

    #[test]
    fn metabelian_point() {
        let (m, _) = fig8();
        let g = crate::repspace::Gauge::new(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, 0.4 * std::f64::consts::PI);
        let imgs = g.images();
        assert!(m.presentation.relators[0].eval_su2(&imgs).distance(&Su2::IDENTITY) < 1e-12);
        let t = normalized_torsion(&m, &imgs).unwrap();
        assert!(t.poly.max_distance(&LaurentPoly::from_real(-1, &[1.0, 0.0, 1.0])) < 1e-8);
    }

    #[test]
    fn wada_matches_torsion() {
        let (m, a) = fig8();
        let imgs = figure_eight_point();
        let t = normalized_torsion(&m, &imgs).unwrap();
        let (_, w) = wada_any(&m.presentation, &imgs, &a).unwrap();
        assert!(w.equal_up_to_unit(&UnitClass::from_poly(t.poly), 1e-8));
    }

    #[test]
    fn deficiency_checked() {
        let p = GroupPresentation::parse(&["x", "y"], &[], Some(("1", "x"))).unwrap();
        let a = AbelianizationMap { exponents: vec![1, 0], torsion: vec![] };
        let imgs = figure_eight_point();
        assert_eq!(wada_invariant(&p, &imgs, &a, 0), Err(TorsionError::NotDeficiencyOne));
    }
}

//! Equivariant CW models of a knot exterior with its boundary torus.
//!
//! A model bundles a presentation, the equivariant boundary matrices of the
//! exterior `E`, a one-vertex torus `∂E` and a cellular inclusion. The
//! torus 2-cell maps to the chain given by an identity among relators for
//! `[λ, μ]`; the file carries that identity so it can be re-certified.
//!
//! The file format is documented in `models/FORMAT.md`.

use std::path::Path;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    abelianize, certify_zero, find_identity, fox_derivative, product_of_conjugates, AbelianizationMap,
    ConjugateFactor, GroupPresentation, GroupRingElement, Peripheral, Word,
};
use crate::chain::EquivariantComplex;
use crate::error::ModelError;
use crate::repspace::{abelian_representations, sample_irreducible, RepSystem};
use crate::su2::Su2;

/// Numeric tolerance for boundary and chain-map identities under `Ad∘ρ`.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Abelian plus irreducible representations used for numeric validation.
pub const VALIDATION_SAMPLES: usize = 50;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationSection {
    generators: Vec<String>,
    relators: Vec<String>,
    longitude: String,
    meridian: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellsSection {
    dim0: Vec<String>,
    dim1: Vec<String>,
    dim2: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundarySection {
    d1: Vec<Vec<String>>,
    d2: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusSection {
    dim0: Vec<String>,
    dim1: Vec<String>,
    dim2: Vec<String>,
    d1: Vec<Vec<String>>,
    d2: Vec<Vec<String>>,
    cup_vertex: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InclusionSection {
    d0: Vec<Vec<String>>,
    d1: Vec<Vec<String>>,
    d2: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorEntry {
    conjugator: String,
    relator: usize,
    exponent: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdentitySection {
    factors: Vec<FactorEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: String,
    ambient_zhs: bool,
    presentation: PresentationSection,
    cells: CellsSection,
    boundary: BoundarySection,
    torus: TorusSection,
    inclusion: InclusionSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    identity: Option<IdentitySection>,
}

/// A validated (or to-be-validated) CW pair model.
#[derive(Clone, Debug, PartialEq)]
pub struct CwPairModel {
    pub name: String,
    /// The ambient manifold is an integral homology sphere.
    pub ambient_zhs: bool,
    pub presentation: GroupPresentation,
    pub cell_names: [Vec<String>; 3],
    pub exterior: EquivariantComplex,
    pub torus_cell_names: [Vec<String>; 3],
    /// Torus boundaries in the torus generators (the two 1-cells).
    pub torus_local: EquivariantComplex,
    /// `inclusion[i][σ][τ]`: coefficient of the `E` cell `τ` in the image of the torus `i`-cell `σ`.
    pub inclusion: Vec<Vec<Vec<GroupRingElement>>>,
    /// Vertex of the torus 2-cell used by the front-face cup product, in `π₁E`.
    pub cup_vertex: Word,
    pub identity: Option<Vec<ConjugateFactor>>,
}

/// Which part of the pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Exterior,
    Boundary,
}

/// Rank and torsion divisors of one integral homology group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

/// Outcome of one validation check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// `Some(true)` when certified in `Z[π]` by word reduction, `None` when not attempted.
    pub symbolic: Option<bool>,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    pub errors: Vec<ModelError>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty()
    }
}

fn parse_rows(rows: &[Vec<String>], names: &[String], shape: (usize, usize), what: &str) -> Result<Vec<Vec<GroupRingElement>>, ModelError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(ModelError::Parse(format!("{what}: expected {}×{} entries", shape.0, shape.1)));
    }
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|e| GroupRingElement::parse(e, names).map_err(|err| ModelError::Parse(format!("{what}: {err}"))))
                .collect()
        })
        .collect()
}

fn show_rows(rows: &[Vec<GroupRingElement>], names: &[String]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|e| e.display(names)).collect()).collect()
}

impl CwPairModel {
    pub fn from_toml(text: &str) -> Result<CwPairModel, ModelError> {
        let f: ModelFile = toml::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        let names = f.presentation.generators.clone();
        let word = |s: &str| Word::parse(s, &names).map_err(ModelError::from);
        let relators = f.presentation.relators.iter().map(|r| word(r)).collect::<Result<Vec<_>, _>>()?;
        let peripheral = Peripheral { lambda: word(&f.presentation.longitude)?, mu: word(&f.presentation.meridian)? };
        let presentation = GroupPresentation::new(names.clone(), relators, Some(peripheral))?;
        let cell_names = [f.cells.dim0.clone(), f.cells.dim1.clone(), f.cells.dim2.clone()];
        let dims: Vec<usize> = cell_names.iter().map(|c| c.len()).collect();
        let d1 = parse_rows(&f.boundary.d1, &names, (dims[1], dims[0]), "boundary.d1")?;
        let d2 = parse_rows(&f.boundary.d2, &names, (dims[2], dims[1]), "boundary.d2")?;
        let exterior = EquivariantComplex::new(dims.clone(), vec![d1, d2]).map_err(|e| ModelError::Parse(e.to_string()))?;

        let t = &f.torus;
        if t.dim0.len() != 1 || t.dim1.len() != 2 || t.dim2.len() != 1 {
            return Err(ModelError::Parse("torus must have cells of counts 1, 2, 1".into()));
        }
        let torus_cell_names = [t.dim0.clone(), t.dim1.clone(), t.dim2.clone()];
        let tnames = t.dim1.clone();
        let tdims = vec![1, 2, 1];
        let td1 = parse_rows(&t.d1, &tnames, (2, 1), "torus.d1")?;
        let td2 = parse_rows(&t.d2, &tnames, (1, 2), "torus.d2")?;
        let torus_local = EquivariantComplex::new(tdims.clone(), vec![td1, td2]).map_err(|e| ModelError::Parse(e.to_string()))?;
        let cup_vertex = word(&t.cup_vertex)?;

        let inc = &f.inclusion;
        let inclusion = vec![
            parse_rows(&inc.d0, &names, (1, dims[0]), "inclusion.d0")?,
            parse_rows(&inc.d1, &names, (2, dims[1]), "inclusion.d1")?,
            parse_rows(&inc.d2, &names, (1, dims[2]), "inclusion.d2")?,
        ];
        let identity = match &f.identity {
            Some(sec) => Some(
                sec.factors
                    .iter()
                    .map(|e| {
                        if e.relator >= presentation.relators.len() || e.exponent.abs() != 1 {
                            return Err(ModelError::Parse(format!("bad identity factor for relator {}", e.relator)));
                        }
                        Ok(ConjugateFactor { conjugator: word(&e.conjugator)?, relator: e.relator, exponent: e.exponent })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        Ok(CwPairModel {
            name: f.name,
            ambient_zhs: f.ambient_zhs,
            presentation,
            cell_names,
            exterior,
            torus_cell_names,
            torus_local,
            inclusion,
            cup_vertex,
            identity,
        })
    }

    pub fn to_toml(&self) -> String {
        let names = &self.presentation.names;
        let per = self.presentation.peripheral.as_ref().expect("model has peripheral data");
        let tnames = &self.torus_cell_names[1];
        let f = ModelFile {
            name: self.name.clone(),
            ambient_zhs: self.ambient_zhs,
            presentation: PresentationSection {
                generators: names.clone(),
                relators: self.presentation.relators.iter().map(|r| r.display(names)).collect(),
                longitude: per.lambda.display(names),
                meridian: per.mu.display(names),
            },
            cells: CellsSection {
                dim0: self.cell_names[0].clone(),
                dim1: self.cell_names[1].clone(),
                dim2: self.cell_names[2].clone(),
            },
            boundary: BoundarySection {
                d1: show_rows(self.exterior.boundary(1), names),
                d2: show_rows(self.exterior.boundary(2), names),
            },
            torus: TorusSection {
                dim0: self.torus_cell_names[0].clone(),
                dim1: self.torus_cell_names[1].clone(),
                dim2: self.torus_cell_names[2].clone(),
                d1: show_rows(self.torus_local.boundary(1), tnames),
                d2: show_rows(self.torus_local.boundary(2), tnames),
                cup_vertex: self.cup_vertex.display(names),
            },
            inclusion: InclusionSection {
                d0: show_rows(&self.inclusion[0], names),
                d1: show_rows(&self.inclusion[1], names),
                d2: show_rows(&self.inclusion[2], names),
            },
            identity: self.identity.as_ref().map(|fs| IdentitySection {
                factors: fs
                    .iter()
                    .map(|f| FactorEntry { conjugator: f.conjugator.display(names), relator: f.relator, exponent: f.exponent })
                    .collect(),
            }),
        };
        toml::to_string(&f).expect("model serializes")
    }

    /// Builds the model of a presentation 2-complex, searching for the
    /// identity among relators that bounds the torus 2-cell.
    pub fn from_presentation(name: &str, p: &GroupPresentation, ambient_zhs: bool) -> Result<CwPairModel, ModelError> {
        let per = p.peripheral()?.clone();
        let comm = &(&(&per.lambda * &per.mu) * &per.lambda.inverse()) * &per.mu.inverse();
        let factors = find_identity(&comm, &p.relators, 10, 2).ok_or(ModelError::IdentityNotFound)?;
        let m = p.generator_count();
        let mut d2_incl = vec![GroupRingElement::zero(); p.relators.len()];
        for f in &factors {
            let e = GroupRingElement::from_word(f.conjugator.clone()).scale(f.exponent);
            d2_incl[f.relator] = &d2_incl[f.relator] + &e;
        }
        let fox_row = |w: &Word| (0..m).map(|j| fox_derivative(w, j)).collect::<Vec<_>>();
        let tn = vec!["lambda".to_string(), "mu".to_string()];
        let tw = |s: &str| GroupRingElement::parse(s, &tn).expect("static torus entry");
        let torus_local = EquivariantComplex::new(
            vec![1, 2, 1],
            vec![vec![vec![tw("lambda - 1")], vec![tw("mu - 1")]], vec![vec![tw("1 - mu"), tw("lambda - 1")]]],
        )
        .expect("static torus");
        let relator_names = if p.relators.len() == 1 {
            vec!["r".to_string()]
        } else {
            (1..=p.relators.len()).map(|i| format!("r{i}")).collect()
        };
        Ok(CwPairModel {
            name: name.to_string(),
            ambient_zhs,
            presentation: p.clone(),
            cell_names: [vec!["p".into()], p.names.clone(), relator_names],
            exterior: EquivariantComplex::from_presentation(p),
            torus_cell_names: [vec!["q".into()], tn, vec!["T".into()]],
            torus_local,
            inclusion: vec![
                vec![vec![GroupRingElement::one()]],
                vec![fox_row(&per.lambda), fox_row(&per.mu)],
                vec![d2_incl],
            ],
            cup_vertex: Word::identity(),
            identity: Some(factors),
        })
    }

    /// The bundled figure-eight model.
    pub fn figure_eight() -> CwPairModel {
        CwPairModel::from_toml(include_str!("../../../models/figure8.cwp")).expect("bundled model parses")
    }

    pub fn alpha(&self) -> Result<AbelianizationMap, ModelError> {
        Ok(abelianize(&self.presentation)?)
    }

    pub fn peripheral(&self) -> &Peripheral {
        self.presentation.peripheral.as_ref().expect("model has peripheral data")
    }

    /// Torus complex with its group-ring entries pushed into `Z[π₁E]`.
    pub fn torus(&self) -> EquivariantComplex {
        let per = self.peripheral();
        let images = [per.lambda.clone(), per.mu.clone()];
        let boundaries = self
            .torus_local
            .boundaries
            .iter()
            .map(|d| d.iter().map(|row| row.iter().map(|e| e.substitute(&images)).collect()).collect())
            .collect();
        EquivariantComplex { dims: self.torus_local.dims.clone(), boundaries }
    }

    pub fn rep_system(&self) -> Result<RepSystem, ModelError> {
        RepSystem::new(&self.presentation)
            .map(|s| s.with_complex(self.exterior.clone()))
            .map_err(|e| ModelError::Parse(e.to_string()))
    }

    /// Abelian and irreducible representations for numeric validation.
    pub fn validation_representations(&self, seed: u64) -> Vec<Vec<Su2>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reps = match self.alpha() {
            Ok(a) => abelian_representations(&a, VALIDATION_SAMPLES, &mut rng),
            Err(_) => Vec::new(),
        };
        if let Ok(sys) = self.rep_system() {
            reps.extend(sample_irreducible(&sys, VALIDATION_SAMPLES, &mut rng));
        }
        reps
    }

    /// Chain-map defect `incl_i(σ)·D^E_i − D^T_i(σ)·incl_{i-1}` per torus cell.
    fn chain_map_defects(&self) -> Vec<(usize, usize, Vec<GroupRingElement>)> {
        let torus = self.torus();
        let mut out = Vec::new();
        for i in 1..=2 {
            let de = self.exterior.boundary(i);
            let dt = torus.boundary(i);
            for (s, inc_row) in self.inclusion[i].iter().enumerate() {
                let row = (0..self.exterior.dims[i - 1])
                    .map(|t| {
                        let lhs = inc_row.iter().zip(de).fold(GroupRingElement::zero(), |acc, (a, drow)| &acc + &(a * &drow[t]));
                        let rhs = dt[s]
                            .iter()
                            .zip(&self.inclusion[i - 1])
                            .fold(GroupRingElement::zero(), |acc, (a, irow)| &acc + &(a * &irow[t]));
                        &lhs - &rhs
                    })
                    .collect();
                out.push((i, s, row));
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(&self.validation_representations(0x5eed))
    }

    /// Runs every check, collecting failures in a fixed order.
    pub fn validate_with(&self, reps: &[Vec<Su2>]) -> ValidationReport {
        let mut checks = Vec::new();
        let mut errors = Vec::new();
        let relators = &self.presentation.relators;
        let alpha = match self.alpha() {
            Ok(a) => Some(a),
            Err(e) => {
                errors.push(e);
                None
            }
        };
        let zero_ab = |z: &GroupRingElement| alpha.as_ref().map_or(true, |a| z.abelianize(a).is_empty());
        let ad = |z: &GroupRingElement, imgs: &[Su2]| (z.ad_matrix(imgs)).abs().max();

        // ∂∂ = 0 on each part
        for (part, cx, names) in [
            ("E", self.exterior.clone(), &self.cell_names),
            ("dE", self.torus(), &self.torus_cell_names),
        ] {
            let comp = cx.composite(2);
            for (s, row) in comp.iter().enumerate() {
                let cell = format!("{part}:{}", names[2][s]);
                let symbolic = row.iter().all(|z| certify_zero(z, relators));
                let exact = row.iter().all(zero_ab);
                let residual = reps.iter().flat_map(|r| row.iter().map(move |z| ad(z, r))).fold(0.0, f64::max);
                let passed = exact && residual <= VALIDATION_TOL;
                checks.push(CheckResult { name: format!("boundary {cell}"), passed, symbolic: Some(symbolic), max_residual: residual });
                if !passed {
                    errors.push(ModelError::BoundaryViolation { cell, residual });
                }
            }
        }

        // untwisted homology
        for (part, label, expected) in [
            (Part::Exterior, "E", [(1, Vec::<i64>::new()), (1, Vec::new()), (0, Vec::new())]),
            (Part::Boundary, "dE", [(1, Vec::<i64>::new()), (2, vec![]), (1, vec![])]),
        ] {
            let h = self.untwisted_homology(part);
            for (degree, (g, (rank, tors))) in h.iter().zip(expected.iter()).enumerate() {
                // torsion in H_1(E) is allowed for rational homology spheres
                let torsion_ok = g.torsion == *tors || (part == Part::Exterior && degree == 1 && !self.ambient_zhs);
                let passed = g.rank == *rank && torsion_ok;
                checks.push(CheckResult { name: format!("homology {label} H_{degree}"), passed, symbolic: None, max_residual: 0.0 });
                if !passed {
                    errors.push(ModelError::HomologyMismatch {
                        part: label.into(),
                        degree,
                        expected: format!("rank {rank}"),
                        found: format!("rank {} torsion {:?}", g.rank, g.torsion),
                    });
                }
            }
        }

        // torus 1-cells carry the Fox chains of λ and μ
        let per = self.peripheral();
        let m = self.presentation.generator_count();
        for (k, w) in [&per.lambda, &per.mu].into_iter().enumerate() {
            let cell = self.torus_cell_names[1][k].clone();
            let fox: Vec<GroupRingElement> = (0..m).map(|j| fox_derivative(w, j)).collect();
            let passed = self.inclusion[1][k].len() == m
                && self.inclusion[1][k].iter().zip(&fox).all(|(a, b)| certify_zero(&(a - b), relators));
            checks.push(CheckResult { name: format!("peripheral {cell}"), passed, symbolic: Some(passed), max_residual: 0.0 });
            if !passed {
                errors.push(ModelError::PeripheralMismatch { cell });
            }
        }

        // identity certificate for the torus 2-cell
        if let Some(fs) = &self.identity {
            let comm = &(&(&per.lambda * &per.mu) * &per.lambda.inverse()) * &per.mu.inverse();
            let passed = product_of_conjugates(fs, relators) == comm;
            checks.push(CheckResult { name: "identity [lambda, mu]".into(), passed, symbolic: Some(passed), max_residual: 0.0 });
            if !passed {
                errors.push(ModelError::ChainMapViolation { cell: self.torus_cell_names[2][0].clone(), residual: f64::NAN });
            }
        }

        // inclusion is a chain map
        for (i, s, row) in self.chain_map_defects() {
            let cell = self.torus_cell_names[i][s].clone();
            let symbolic = row.iter().all(|z| certify_zero(z, relators));
            let exact = row.iter().all(zero_ab);
            let residual = reps.iter().flat_map(|r| row.iter().map(move |z| ad(z, r))).fold(0.0, f64::max);
            let passed = exact && residual <= VALIDATION_TOL;
            checks.push(CheckResult { name: format!("chain map {cell}"), passed, symbolic: Some(symbolic), max_residual: residual });
            if !passed {
                errors.push(ModelError::ChainMapViolation { cell, residual });
            }
        }
        ValidationReport { checks, errors }
    }

    /// Integral homology from Smith normal forms of the augmented boundaries.
    pub fn untwisted_homology(&self, part: Part) -> Vec<HomologyGroup> {
        let cx = match part {
            Part::Exterior => self.exterior.clone(),
            Part::Boundary => self.torus(),
        };
        let ints = cx.integer_boundaries();
        let n = cx.dims.len();
        let snf: Vec<Option<crate::algebra::SmithForm>> = (0..=n)
            .map(|i| {
                if i == 0 || i >= n || cx.dims[i] == 0 || cx.dims[i - 1] == 0 {
                    None
                } else {
                    Some(crate::algebra::smith_normal_form(&ints[i - 1], cx.dims[i - 1]))
                }
            })
            .collect();
        let rank = |i: usize| snf[i].as_ref().map_or(0, |s| s.rank());
        (0..n)
            .map(|i| HomologyGroup {
                rank: cx.dims[i] - rank(i) - rank(i + 1),
                torsion: snf[i + 1].as_ref().map_or(Vec::new(), |s| s.torsion()),
            })
            .collect()
    }
}

/// Reads and validates a model file; the first failing check is returned.
pub fn parse_model(path: &Path) -> Result<CwPairModel, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModelError::Parse(format!("{}: {e}", path.display())))?;
    let model = CwPairModel::from_toml(&text)?;
    let report = model.validate();
    match report.errors.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(model),
    }
}

/// Block matrix of `Ad` images of group-ring rows.
pub fn ad_rows(rows: &[Vec<GroupRingElement>], images: &[Su2]) -> DMatrix<f64> {
    let (r, c) = (rows.len(), rows.first().map_or(0, |x| x.len()));
    let mut m = DMatrix::zeros(3 * r, 3 * c);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            m.view_mut((3 * i, 3 * j), (3, 3)).copy_from(&e.ad_matrix(images));
        }
    }
    m
}

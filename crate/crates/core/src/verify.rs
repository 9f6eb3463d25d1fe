//! Named numerical checks of the model's identities for one group.
//!
//! Site-space checks run on the six edges of one site of a 2×2 torus and
//! need `|G|⁶ ≤ SITE_CAPACITY`. Trace deviations are divided by the
//! dimension of the space, so they measure error per basis state.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::anyon::{braid, enumerate_anyons, monodromy, total_quantum_dimension_sq, AnyonModel, FluxPairState};
use crate::error::{QdError, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::hamiltonian::{site_refined, Couplings};
use crate::lattice::{build_torus, TorusLattice};
use crate::operators::{verify_flux_permutation, OperatorBuilder, Region, SiteOperators};
use crate::rep::{decompose, explicit_irreps, induce_character, inner_product, restrict_character, verify_got_swap};
use crate::sectors::{sector_to_anyons, verify_sector_operator_identities};
use crate::sparse::SparseOperator;
use crate::spectrum::{spectrum, SpectrumMode};

pub const SITE_CAPACITY: usize = 1 << 26;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

pub const CHECK_NAMES: &[&str] = &[
    "character-table",
    "frobenius",
    "quantum-dimension",
    "braiding",
    "got-swap",
    "vertex-representation",
    "charge-projectors",
    "flux-projectors",
    "trace-formulas",
    "commutation",
    "flux-permutation",
    "anyon-projectors",
    "sector-identities",
    "site-spectrum",
];

const SITE_CHECKS: &[&str] =
    &["commutation", "flux-permutation", "anyon-projectors", "sector-identities", "site-spectrum"];

#[derive(Debug, Clone, Serialize)]
pub struct Detail {
    pub item: String,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub skipped: bool,
    pub max_deviation: f64,
    pub details: Vec<Detail>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub tolerance: f64,
    /// Subset of [`CHECK_NAMES`]; all checks when `None`.
    pub checks: Option<Vec<String>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tolerance: DEFAULT_TOLERANCE, checks: None }
    }
}

/// Runs the selected checks in [`CHECK_NAMES`] order.
pub fn run_checks(group: &FiniteGroup, options: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let selected: Vec<&str> = match &options.checks {
        None => CHECK_NAMES.to_vec(),
        Some(list) => {
            if let Some(bad) = list.iter().find(|c| !CHECK_NAMES.contains(&c.as_str())) {
                return Err(QdError::Argument(format!(
                    "unknown check {bad:?}; known checks: {}",
                    CHECK_NAMES.join(", ")
                )));
            }
            CHECK_NAMES.iter().copied().filter(|n| list.iter().any(|c| c == n)).collect()
        }
    };
    if selected.iter().any(|n| SITE_CHECKS.contains(n)) {
        site_capacity(group)?;
    }
    let ctx = Context::new(group)?;
    selected.into_iter().map(|name| ctx.run(name, options.tolerance)).collect()
}

/// Errors unless the six-edge site space of `group` fits [`SITE_CAPACITY`].
pub fn site_capacity(group: &FiniteGroup) -> Result<usize> {
    let n = group.order();
    n.checked_pow(6)
        .filter(|&d| d <= SITE_CAPACITY)
        .ok_or_else(|| QdError::Capacity(format!("site space |G|^6 = {n}^6 exceeds {SITE_CAPACITY}")))
}

struct Context {
    group: FiniteGroup,
    model: AnyonModel,
    lattice: TorusLattice,
}

fn detail(item: impl Into<String>, deviation: f64) -> Detail {
    Detail { item: item.into(), deviation }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl Context {
    fn new(group: &FiniteGroup) -> Result<Self> {
        Ok(Context { group: group.clone(), model: enumerate_anyons(group)?, lattice: build_torus(2, 2)? })
    }

    fn run(&self, name: &str, tol: f64) -> Result<CheckResult> {
        let outcome = match name {
            "character-table" => self.character_table(),
            "frobenius" => self.frobenius(),
            "quantum-dimension" => self.quantum_dimension(),
            "braiding" => self.braiding(),
            "got-swap" => self.got_swap(),
            "vertex-representation" => self.vertex_representation(),
            "charge-projectors" => self.charge_projectors(),
            "flux-projectors" => self.flux_projectors(),
            "trace-formulas" => self.trace_formulas(),
            "commutation" => self.commutation(),
            "flux-permutation" => self.flux_permutation(),
            "anyon-projectors" => self.anyon_projectors(),
            "sector-identities" => self.sector_identities(),
            "site-spectrum" => self.site_spectrum(),
            _ => unreachable!("names are validated"),
        }?;
        let (details, note) = outcome;
        let skipped = details.is_empty() && note.is_some();
        let max_deviation = details.iter().map(|d| d.deviation).fold(0.0, f64::max);
        Ok(CheckResult { name: name.to_string(), passed: max_deviation <= tol, skipped, max_deviation, details, note })
    }

    fn builder(&self, region: Region) -> Result<OperatorBuilder> {
        OperatorBuilder::new(&self.group, &self.lattice, region)
    }

    fn star_builder(&self) -> Result<OperatorBuilder> {
        self.builder(Region::star(&self.lattice, 0, self.group.order())?)
    }

    fn loop_builder(&self) -> Result<OperatorBuilder> {
        self.builder(Region::plaquette(&self.lattice, 0, self.group.order())?)
    }

    fn site_builder(&self) -> Result<OperatorBuilder> {
        let site = self.lattice.site_of(0)?;
        self.builder(Region::site(&site, self.group.order())?)
    }

    /// Corners of plaquette 0 other than its site vertex.
    fn other_corners(&self) -> [usize; 3] {
        [self.lattice.vertex(0, 1), self.lattice.vertex(1, 0), self.lattice.vertex(1, 1)]
    }

    fn character_table(&self) -> Result<Outcome> {
        let t = &self.model.table;
        let mut out = vec![detail("orthogonality", t.orthogonality_deviation())];
        let dims: usize = t.dims.iter().map(|d| d * d).sum();
        out.push(detail("sum of squared dimensions", (dims as f64 - self.group.order() as f64).abs()));
        Ok((out, None))
    }

    fn frobenius(&self) -> Result<Outcome> {
        let g = &self.group;
        let t = &self.model.table;
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for s in &self.model.flux_sectors {
            for i in 0..s.table.num_irreps() {
                let psi = s.table.character(i);
                let up = induce_character(&s.normalizer, &psi, g)?;
                for j in 0..t.num_irreps() {
                    let chi = t.character(j);
                    let down = restrict_character(g, &chi, &s.normalizer)?;
                    let lhs = inner_product(g, &up, &chi);
                    let rhs = inner_product(s.normalizer.as_group(), &psi, &down);
                    worst = worst.max((lhs - rhs).norm());
                    count += 1;
                }
            }
        }
        let whole = Subgroup::whole(g);
        let mut roundtrip: f64 = 0.0;
        for j in 0..t.num_irreps() {
            let chi = t.character(j);
            let down = restrict_character(g, &chi, &whole)?;
            let parts = decompose(whole.as_group(), &down, t)?;
            roundtrip = roundtrip.max(if parts.len() == 1 && parts[0].irrep == j { 0.0 } else { 1.0 });
        }
        Ok((
            vec![detail(format!("reciprocity over {count} pairs"), worst), detail("restriction to G", roundtrip)],
            None,
        ))
    }

    fn quantum_dimension(&self) -> Result<Outcome> {
        let n = self.group.order();
        let dev = match total_quantum_dimension_sq(&self.model) {
            Ok(_) => 0.0,
            Err(_) => {
                let s: usize = self.model.anyons.iter().map(|a| a.quantum_dimension().pow(2)).sum();
                (s as f64 - (n * n) as f64).abs()
            }
        };
        Ok((vec![detail("sum of d^2 - |G|^2", dev)], None))
    }

    fn braiding(&self) -> Result<Outcome> {
        let g = &self.group;
        let mut twice: f64 = 0.0;
        let mut classes: f64 = 0.0;
        for a in g.elements() {
            for b in g.elements() {
                let s = FluxPairState::basis(g, a, b);
                let bb = braid(g, &braid(g, &s));
                let m = monodromy(g, &s);
                let d = bb.amplitudes().iter().zip(m.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                twice = twice.max(d);
                if let Some((x, y)) = m.as_basis_pair() {
                    if g.class_of(x) != g.class_of(a) || g.class_of(y) != g.class_of(b) {
                        classes = 1.0;
                    }
                } else {
                    classes = 1.0;
                }
            }
        }
        Ok((vec![detail("monodromy vs braid twice", twice), detail("class preservation", classes)], None))
    }

    fn got_swap(&self) -> Result<Outcome> {
        let Some(irreps) = explicit_irreps(&self.group, &self.model.table) else {
            return Ok((Vec::new(), Some("no explicit irrep matrices for this group".into())));
        };
        let mut out = Vec::new();
        for a in &irreps {
            for b in &irreps {
                out.push(detail(format!("{}/{}", a.label, b.label), verify_got_swap(&self.group, a, b)?));
            }
        }
        Ok((out, None))
    }

    fn vertex_representation(&self) -> Result<Outcome> {
        let b = self.star_builder()?;
        let a = b.vertex_family(0)?;
        let g = &self.group;
        let mut worst: f64 = 0.0;
        for x in g.elements() {
            for y in g.elements() {
                worst = worst.max(a[x].matmul(&a[y])?.max_abs_diff(&a[g.mul(x, y)])?);
            }
        }
        Ok((vec![detail("A_g A_h = A_gh", worst)], None))
    }

    fn charge_projectors(&self) -> Result<Outcome> {
        let b = self.star_builder()?;
        let family = b.vertex_family(0)?;
        let labels = &self.model.table.labels;
        let p: Vec<SparseOperator> =
            (0..labels.len()).map(|i| b.charge_projector_from(&family, i)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for (i, pi) in p.iter().enumerate() {
            out.push(detail(format!("hermitian {}", labels[i]), pi.hermiticity_residue()));
            for (j, pj) in p.iter().enumerate() {
                let prod = pi.matmul(pj)?;
                let dev = if i == j { prod.max_abs_diff(pi)? } else { prod.max_abs() };
                out.push(detail(format!("A_{} A_{}", labels[i], labels[j]), dev));
            }
        }
        let total = SparseOperator::linear_combination(b.dim(), p.iter().map(|x| (c(1.0), x)))?;
        out.push(detail("sum = identity", total.max_abs_diff(&b.identity())?));
        Ok((out, None))
    }

    fn flux_projectors(&self) -> Result<Outcome> {
        let b = self.loop_builder()?;
        let family = b.plaquette_family(0)?;
        let g = &self.group;
        let p: Vec<SparseOperator> =
            (0..g.num_classes()).map(|k| b.flux_projector_from(&family, k)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for (i, pi) in p.iter().enumerate() {
            out.push(detail(format!("diagonal {}", g.class_label(i)), if pi.is_diagonal() { 0.0 } else { 1.0 }));
            for (j, pj) in p.iter().enumerate() {
                let prod = pi.matmul(pj)?;
                let dev = if i == j { prod.max_abs_diff(pi)? } else { prod.max_abs() };
                out.push(detail(format!("B_{} B_{}", g.class_label(i), g.class_label(j)), dev));
            }
        }
        let total = SparseOperator::linear_combination(b.dim(), p.iter().map(|x| (c(1.0), x)))?;
        out.push(detail("sum = identity", total.max_abs_diff(&b.identity())?));
        Ok((out, None))
    }

    fn trace_formulas(&self) -> Result<Outcome> {
        let g = &self.group;
        let n = g.order() as f64;
        let t = &self.model.table;
        let mut out = Vec::new();
        let sb = self.star_builder()?;
        let family = sb.vertex_family(0)?;
        for x in g.elements() {
            let expected = if x == 0 { n.powi(4) } else { 0.0 };
            out.push(detail(
                format!("Tr A_{}", g.label(x)),
                (family[x].trace() - c(expected)).norm() / sb.dim() as f64,
            ));
        }
        for i in 0..t.num_irreps() {
            let d = t.dims[i] as f64;
            let tr = sb.charge_projector_from(&family, i)?.trace();
            out.push(detail(format!("Tr A_{}", t.labels[i]), (tr - c(n.powi(3) * d * d)).norm() / sb.dim() as f64));
        }
        let lb = self.loop_builder()?;
        for k in 0..g.num_classes() {
            let size = g.conjugacy_classes()[k].size() as f64;
            let tr = lb.flux_projector(0, k)?.trace();
            out.push(detail(format!("Tr B_{}", g.class_label(k)), (tr - c(size * n.powi(3))).norm() / lb.dim() as f64));
        }
        Ok((out, None))
    }

    fn commutation(&self) -> Result<Outcome> {
        let mut out = Vec::new();
        let site = self.lattice.site_of(0)?;
        let b = self.site_builder()?;
        let ops = SiteOperators::new(&b, &site)?;
        out.push(detail("same site", max_commutator(&ops.charge_projectors()?, &ops.flux_projectors()?)?));
        for w in self.other_corners() {
            let b = self.builder(Region::star_and_loop(&self.lattice, w, 0, self.group.order())?)?;
            let fam = b.vertex_family(w)?;
            let charges: Vec<SparseOperator> =
                (0..self.model.table.num_irreps()).map(|i| b.charge_projector_from(&fam, i)).collect::<Result<_>>()?;
            let fluxes: Vec<SparseOperator> =
                (0..self.group.num_classes()).map(|k| b.flux_projector(0, k)).collect::<Result<_>>()?;
            out.push(detail(format!("vertex {w}, plaquette 0"), max_commutator(&charges, &fluxes)?));
        }
        Ok((out, None))
    }

    fn flux_permutation(&self) -> Result<Outcome> {
        let mut out = vec![detail("same site", verify_flux_permutation(&self.site_builder()?, 0, 0)?)];
        for w in self.other_corners() {
            let b = self.builder(Region::star_and_loop(&self.lattice, w, 0, self.group.order())?)?;
            out.push(detail(format!("vertex {w}, plaquette 0"), verify_flux_permutation(&b, 0, w)?));
        }
        Ok((out, None))
    }

    fn anyon_projectors(&self) -> Result<Outcome> {
        let site = self.lattice.site_of(0)?;
        let b = self.site_builder()?;
        let ops = SiteOperators::new(&b, &site)?;
        let p = ops.anyon_projectors(&self.model)?;
        let names: Vec<&str> = self.model.anyons.iter().map(|a| a.name.as_str()).collect();
        let mut out = Vec::new();
        let total = SparseOperator::linear_combination(b.dim(), p.iter().map(|x| (c(1.0), x)))?;
        out.push(detail("sum = identity", total.max_abs_diff(&b.identity())?));
        let mut herm: f64 = 0.0;
        let mut orth: f64 = 0.0;
        let mut comm: f64 = 0.0;
        let mut gauge: f64 = 0.0;
        for (i, pi) in p.iter().enumerate() {
            herm = herm.max(pi.hermiticity_residue());
            for (j, pj) in p.iter().enumerate() {
                let prod = pi.matmul(pj)?;
                orth = orth.max(if i == j { prod.max_abs_diff(pi)? } else { prod.max_abs() });
            }
            for a in &ops.vertex {
                comm = comm.max(pi.commutator_norm(a)?);
            }
            let alt = ops.anyon_projector(&self.model, &self.model.anyons[i], 1)?;
            gauge = gauge.max(alt.max_abs_diff(pi)?);
        }
        out.push(detail("hermitian", herm));
        out.push(detail(format!("P_a P_b = delta P_a over {}", names.join(",")), orth));
        out.push(detail("commute with every A_g", comm));
        out.push(detail("independent of conjugator", gauge));
        let fluxes = ops.flux_projectors()?;
        out.push(detail("commute with every B_C", max_commutator(&p, &fluxes)?));
        Ok((out, None))
    }

    fn sector_identities(&self) -> Result<Outcome> {
        let site = self.lattice.site_of(0)?;
        let b = self.site_builder()?;
        let ops = SiteOperators::new(&b, &site)?;
        let checks = verify_sector_operator_identities(&ops, &self.model)?;
        Ok((checks.into_iter().map(|c| detail(c.name, c.deviation)).collect(), None))
    }

    fn site_spectrum(&self) -> Result<Outcome> {
        let site = self.lattice.site_of(0)?;
        let b = self.site_builder()?;
        let ops = SiteOperators::new(&b, &site)?;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = &self.model.table;
        let g = &self.group;
        let couplings = Couplings {
            alpha: (0..t.num_irreps()).map(|_| rng.gen_range(0..4) as f64).collect(),
            beta: (0..g.num_classes()).map(|_| rng.gen_range(0..4) as f64 * 10.0).collect(),
        };
        let h = site_refined(&ops, &couplings)?;
        let report = spectrum(&h, SpectrumMode::Full)?;
        let scale = b.dim() / (g.order() * g.order());
        let mut expected: BTreeMap<i64, usize> = BTreeMap::new();
        for k in 0..g.num_classes() {
            for i in 0..t.num_irreps() {
                let e = couplings.sector_energy(i, k).round() as i64;
                *expected.entry(e).or_default() += g.conjugacy_classes()[k].size() * t.dims[i] * t.dims[i] * scale;
            }
        }
        let mut worst: f64 = 0.0;
        let mut count_mismatch = 0.0;
        if report.levels.len() != expected.len() {
            count_mismatch = 1.0;
        }
        for (level, (&e, &m)) in report.levels.iter().zip(&expected) {
            worst = worst.max((level.eigenvalue - e as f64).abs());
            if level.multiplicity != m {
                count_mismatch = 1.0;
            }
        }
        // content of every sector is non-empty
        let mut empty = 0.0;
        for k in 0..g.num_classes() {
            for i in 0..t.num_irreps() {
                if sector_to_anyons(&self.model, k, i)?.is_empty() {
                    empty = 1.0;
                }
            }
        }
        Ok((
            vec![
                detail("eigenvalues", worst),
                detail("multiplicities", count_mismatch),
                detail("sector anyon content", empty),
            ],
            None,
        ))
    }
}

type Outcome = (Vec<Detail>, Option<String>);

fn max_commutator(a: &[SparseOperator], b: &[SparseOperator]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in a {
        for y in b {
            worst = worst.max(x.commutator_norm(y)?);
        }
    }
    Ok(worst)
}

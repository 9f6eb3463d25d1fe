//! Kitaev, refined four-body and six-body Hamiltonians.
//!
//! Couplings are translation invariant: one value per irrep of G for every
//! vertex and one per conjugacy class for every plaquette.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::anyon::AnyonModel;
use crate::error::{QdError, Result};
use crate::group::FiniteGroup;
use crate::lattice::Site;
use crate::operators::{OperatorBuilder, SiteOperators};
use crate::rep::CharacterTable;
use crate::sparse::SparseOperator;

/// Charge couplings keyed by irrep label and flux couplings keyed by class label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct CouplingConfig {
    pub alpha: BTreeMap<String, f64>,
    pub beta: BTreeMap<String, f64>,
}

/// Couplings resolved to irrep and class indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Couplings {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl CouplingConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QdError::Config(format!("couplings: {e}")))
    }

    pub fn zeros(group: &FiniteGroup, table: &CharacterTable) -> Self {
        CouplingConfig {
            alpha: table.labels.iter().map(|l| (l.clone(), 0.0)).collect(),
            beta: (0..group.num_classes()).map(|c| (group.class_label(c), 0.0)).collect(),
        }
    }

    /// `α_Γ1 = −|G|`, `β_Ce = −1`, everything else zero: Kitaev's literal Hamiltonian.
    pub fn kitaev(group: &FiniteGroup, table: &CharacterTable) -> Self {
        let mut c = Self::zeros(group, table);
        c.alpha.insert(table.labels[0].clone(), -(group.order() as f64));
        c.beta.insert(group.class_label(0), -1.0);
        c
    }

    /// Resolves labels; keys must cover every irrep and class exactly.
    pub fn resolve(&self, group: &FiniteGroup, table: &CharacterTable) -> Result<Couplings> {
        let class_labels: Vec<String> = (0..group.num_classes()).map(|c| group.class_label(c)).collect();
        let alpha = pick(&self.alpha, &table.labels, "alpha", "irrep")?;
        let beta = pick(&self.beta, &class_labels, "beta", "class")?;
        Ok(Couplings { alpha, beta })
    }
}

fn pick(map: &BTreeMap<String, f64>, labels: &[String], field: &str, what: &str) -> Result<Vec<f64>> {
    if let Some(k) = map.keys().find(|k| !labels.contains(k)) {
        return Err(QdError::Config(format!("{field}: unknown {what} {k:?} (expected one of {labels:?})")));
    }
    labels
        .iter()
        .map(|l| {
            let v = *map.get(l).ok_or_else(|| QdError::Config(format!("{field}: missing {what} {l:?}")))?;
            if !v.is_finite() {
                return Err(QdError::Config(format!("{field}: {l:?} is not finite")));
            }
            Ok(v)
        })
        .collect()
}

impl Couplings {
    /// `α_Γ + β_C`.
    pub fn sector_energy(&self, irrep: usize, class: usize) -> f64 {
        self.alpha[irrep] + self.beta[class]
    }
}

/// The three normalizations of the vacuum Hamiltonian in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KitaevForm {
    /// `−Σ_v Σ_g A_g − Σ_p B_e`.
    Literal,
    /// `−Σ_v A_Γ1 − Σ_p B_e`; the vacuum has energy −2 per site.
    Projector,
    /// `Σ_v (1 − 2A_Γ1) + Σ_p (1 − 2B_e)`; for Z2 this is `−Σ XXXX − Σ ZZZZ`.
    Stabilizer,
}

impl std::str::FromStr for KitaevForm {
    type Err = QdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(KitaevForm::Literal),
            "projector" => Ok(KitaevForm::Projector),
            "stabilizer" => Ok(KitaevForm::Stabilizer),
            _ => Err(QdError::Argument(format!("unknown Kitaev form {s:?} (literal, projector, stabilizer)"))),
        }
    }
}

/// One local summand of a Hamiltonian.
#[derive(Debug, Clone)]
pub struct Term {
    pub label: String,
    pub op: SparseOperator,
}

pub fn sum_terms(dim: usize, terms: &[Term]) -> Result<SparseOperator> {
    SparseOperator::linear_combination(dim, terms.iter().map(|t| (Complex64::new(1.0, 0.0), &t.op)))
}

/// Largest `‖[h_i, h_j]‖_max` over pairs of summands.
pub fn max_pairwise_commutator(terms: &[Term]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            worst = worst.max(a.op.commutator_norm(&b.op)?);
        }
    }
    Ok(worst)
}

/// Vertex and plaquette terms of the vacuum Hamiltonian on every vertex and plaquette.
pub fn kitaev_terms(builder: &OperatorBuilder, form: KitaevForm) -> Result<Vec<Term>> {
    let lat = builder.lattice();
    let id = builder.identity();
    let mut terms = Vec::new();
    for v in 0..lat.num_vertices() {
        let op = match form {
            KitaevForm::Literal => builder.kitaev_vertex_sum(v)?.scale_real(-1.0),
            KitaevForm::Projector => builder.charge_projector(v, 0)?.scale_real(-1.0),
            KitaevForm::Stabilizer => id.add_scaled(&builder.charge_projector(v, 0)?, Complex64::new(-2.0, 0.0))?,
        };
        terms.push(Term { label: format!("vertex {v}"), op });
    }
    for p in 0..lat.num_plaquettes() {
        let b = builder.plaquette(p, builder.group().identity())?;
        let op = match form {
            KitaevForm::Literal | KitaevForm::Projector => b.scale_real(-1.0),
            KitaevForm::Stabilizer => id.add_scaled(&b, Complex64::new(-2.0, 0.0))?,
        };
        terms.push(Term { label: format!("plaquette {p}"), op });
    }
    Ok(terms)
}

pub fn build_kitaev(builder: &OperatorBuilder, form: KitaevForm) -> Result<SparseOperator> {
    sum_terms(builder.dim(), &kitaev_terms(builder, form)?)
}

/// `Σ_v Σ_Γ α_Γ A_Γ + Σ_p Σ_C β_C B_C` on every vertex and plaquette.
pub fn refined_terms(builder: &OperatorBuilder, couplings: &Couplings) -> Result<Vec<Term>> {
    let lat = builder.lattice();
    let mut terms = Vec::new();
    for v in 0..lat.num_vertices() {
        let family = builder.vertex_family(v)?;
        let projectors = (0..couplings.alpha.len())
            .map(|i| builder.charge_projector_from(&family, i))
            .collect::<Result<Vec<_>>>()?;
        let op = SparseOperator::linear_combination(
            builder.dim(),
            couplings.alpha.iter().zip(&projectors).map(|(&a, p)| (Complex64::new(a, 0.0), p)),
        )?;
        terms.push(Term { label: format!("vertex {v}"), op });
    }
    for p in 0..lat.num_plaquettes() {
        let family = builder.plaquette_family(p)?;
        let projectors =
            (0..couplings.beta.len()).map(|c| builder.flux_projector_from(&family, c)).collect::<Result<Vec<_>>>()?;
        let op = SparseOperator::linear_combination(
            builder.dim(),
            couplings.beta.iter().zip(&projectors).map(|(&b, q)| (Complex64::new(b, 0.0), q)),
        )?;
        terms.push(Term { label: format!("plaquette {p}"), op });
    }
    Ok(terms)
}

pub fn build_refined(builder: &OperatorBuilder, couplings: &Couplings) -> Result<SparseOperator> {
    sum_terms(builder.dim(), &refined_terms(builder, couplings)?)
}

/// Refined Hamiltonian of a single site: `Σ_Γ α_Γ A_Γ + Σ_C β_C B_C`.
pub fn site_refined(ops: &SiteOperators, couplings: &Couplings) -> Result<SparseOperator> {
    let charges = ops.charge_projectors()?;
    let fluxes = ops.flux_projectors()?;
    let terms = couplings
        .alpha
        .iter()
        .zip(&charges)
        .chain(couplings.beta.iter().zip(&fluxes))
        .map(|(&c, p)| (Complex64::new(c, 0.0), p));
    SparseOperator::linear_combination(ops.builder.dim(), terms)
}

/// Resolves an anyon-name → mass map; every anyon must be listed.
pub fn resolve_masses(model: &AnyonModel, masses: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
    let names: Vec<String> = model.anyons.iter().map(|a| a.name.clone()).collect();
    pick(masses, &names, "masses", "anyon")
}

/// `Σ_s Σ_a m_a P^s_a` over the given sites.
pub fn build_massive6(
    builder: &OperatorBuilder,
    model: &AnyonModel,
    sites: &[Site],
    masses: &[f64],
) -> Result<SparseOperator> {
    if masses.len() != model.anyons.len() {
        return Err(QdError::Config(format!("{} masses for {} anyons", masses.len(), model.anyons.len())));
    }
    let mut total = SparseOperator::zeros(builder.dim());
    for site in sites {
        let ops = SiteOperators::new(builder, site)?;
        for (a, &m) in model.anyons.iter().zip(masses) {
            if m != 0.0 {
                total = total.add_scaled(&ops.anyon_projector(model, a, 0)?, Complex64::new(m, 0.0))?;
            }
        }
    }
    Ok(total)
}

/// Per-anyon masses reproducing the refined couplings, when every anyon's
/// flavors share one energy; otherwise a configuration error naming the anyon.
pub fn masses_from_couplings(model: &AnyonModel, couplings: &Couplings) -> Result<Vec<f64>> {
    let table = &model.table;
    model
        .anyons
        .iter()
        .map(|a| {
            let energies: Vec<f64> = crate::sectors::flavor_irreps(model, a)?
                .into_iter()
                .map(|i| couplings.sector_energy(i, a.class))
                .collect();
            let first = energies[0];
            if energies.iter().any(|e| (e - first).abs() > 1e-12) {
                return Err(QdError::Config(format!(
                    "anyon {} has flavors in irreps {:?} with different energies {energies:?}; use the flavor-resolved form",
                    a.name,
                    crate::sectors::flavor_irreps(model, a)?.iter().map(|&i| table.labels[i].clone()).collect::<Vec<_>>()
                )));
            }
            Ok(first)
        })
        .collect()
}

/// `Σ_a Σ_Γ (α_Γ + β_C) A_Γ P_a` on one site; equals [`site_refined`].
pub fn flavor_resolved_site(ops: &SiteOperators, model: &AnyonModel, couplings: &Couplings) -> Result<SparseOperator> {
    let charges = ops.charge_projectors()?;
    let mut total = SparseOperator::zeros(ops.builder.dim());
    for a in &model.anyons {
        let p = ops.anyon_projector(model, a, 0)?;
        for i in crate::sectors::flavor_irreps(model, a)? {
            let e = couplings.sector_energy(i, a.class);
            if e != 0.0 {
                total = total.add_scaled(&charges[i].matmul(&p)?, Complex64::new(e, 0.0))?;
            }
        }
    }
    Ok(total)
}

//! Anyons of the quantum double D(G) and flux-pair braiding.
//!
//! An anyon is a pair (conjugacy class C, irrep of the normalizer of C's
//! representative). Anyons are listed with the trivial class first and then
//! by decreasing class size, charges in character-table order; for S3 this is
//! A..H with quantum dimensions (1, 1, 2, 3, 3, 2, 2, 2).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QdError, Result};
use crate::group::{Element, FiniteGroup, Subgroup};
use crate::rep::{character_table, CharacterTable, ClassFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnyonKind {
    Vacuum,
    Chargeon,
    Fluxon,
    Dyon,
}

impl std::fmt::Display for AnyonKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AnyonKind::Vacuum => "vacuum",
            AnyonKind::Chargeon => "chargeon",
            AnyonKind::Fluxon => "fluxon",
            AnyonKind::Dyon => "dyon",
        };
        f.write_str(s)
    }
}

/// Flux data shared by all anyons of one conjugacy class.
#[derive(Debug, Clone)]
pub struct FluxSector {
    pub class: usize,
    pub representative: Element,
    pub normalizer: Subgroup,
    pub table: CharacterTable,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnyonLabel {
    pub name: String,
    /// Index into [`AnyonModel::flux_sectors`].
    #[serde(skip)]
    pub sector: usize,
    pub class: usize,
    pub class_label: String,
    pub representative: Element,
    pub class_size: usize,
    pub normalizer_order: usize,
    /// Irrep index in the normalizer's character table.
    pub charge: usize,
    pub charge_label: String,
    pub charge_dim: usize,
    pub kind: AnyonKind,
}

impl AnyonLabel {
    /// `d = |C| · d_Γ`.
    pub fn quantum_dimension(&self) -> usize {
        self.class_size * self.charge_dim
    }
}

/// The anyon content of D(G) together with the tables needed to use it.
#[derive(Debug, Clone)]
pub struct AnyonModel {
    pub group: FiniteGroup,
    pub table: CharacterTable,
    pub flux_sectors: Vec<FluxSector>,
    pub anyons: Vec<AnyonLabel>,
}

impl AnyonModel {
    pub fn anyon(&self, name: &str) -> Option<&AnyonLabel> {
        self.anyons.iter().find(|a| a.name == name)
    }

    pub fn sector_for_class(&self, class: usize) -> &FluxSector {
        self.flux_sectors.iter().find(|s| s.class == class).expect("every class has a flux sector")
    }

    /// Character of the anyon's charge on its normalizer.
    pub fn charge_character(&self, a: &AnyonLabel) -> ClassFunction {
        self.flux_sectors[a.sector].table.character(a.charge)
    }

    pub fn anyons_of_class(&self, class: usize) -> impl Iterator<Item = &AnyonLabel> {
        self.anyons.iter().filter(move |a| a.class == class)
    }
}

/// Enumerates all anyons of D(G).
pub fn enumerate_anyons(group: &FiniteGroup) -> Result<AnyonModel> {
    let table = character_table(group)?;
    let classes = group.conjugacy_classes();
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&c| (c != 0, std::cmp::Reverse(classes[c].size()), c));

    let mut flux_sectors = Vec::with_capacity(classes.len());
    let mut raw = Vec::new();
    for &c in &order {
        let rep = classes[c].representative;
        let normalizer = group.normalizer(rep)?;
        let ntable = character_table(normalizer.as_group())?;
        let sector = flux_sectors.len();
        for i in 0..ntable.num_irreps() {
            let kind = match (c == 0, i == 0) {
                (true, true) => AnyonKind::Vacuum,
                (true, false) => AnyonKind::Chargeon,
                (false, true) => AnyonKind::Fluxon,
                (false, false) => AnyonKind::Dyon,
            };
            raw.push(AnyonLabel {
                name: String::new(),
                sector,
                class: c,
                class_label: group.class_label(c),
                representative: rep,
                class_size: classes[c].size(),
                normalizer_order: normalizer.order(),
                charge: i,
                charge_label: ntable.labels[i].clone(),
                charge_dim: ntable.dims[i],
                kind,
            });
        }
        flux_sectors.push(FluxSector { class: c, representative: rep, normalizer, table: ntable });
    }
    let names = anyon_names(group, raw.len());
    for (a, n) in raw.iter_mut().zip(names) {
        a.name = n;
    }
    Ok(AnyonModel { group: group.clone(), table, flux_sectors, anyons: raw })
}

fn anyon_names(group: &FiniteGroup, count: usize) -> Vec<String> {
    if group.order() == 2 {
        // toric code: vacuum, electric charge, magnetic flux, dyon
        return ["1", "e", "m", "eps"].iter().map(|s| s.to_string()).collect();
    }
    (0..count).map(|i| if count <= 26 { ((b'A' + i as u8) as char).to_string() } else { format!("X{i}") }).collect()
}

/// `Σ_k d_k²`, checked against `|G|²`.
pub fn total_quantum_dimension_sq(model: &AnyonModel) -> Result<usize> {
    let total: usize = model.anyons.iter().map(|a| a.quantum_dimension().pow(2)).sum();
    let n = model.group.order();
    if total != n * n {
        return Err(QdError::InvariantViolation(format!("Σ d² = {total} but |G|² = {}", n * n)));
    }
    Ok(total)
}

/// One row of the exported anyon table.
#[derive(Debug, Clone, Serialize)]
pub struct AnyonRow {
    pub label: String,
    pub class: String,
    pub class_representative: String,
    pub normalizer_order: usize,
    pub irrep: String,
    pub quantum_dimension: usize,
    #[serde(rename = "type")]
    pub kind: AnyonKind,
}

pub fn anyon_table(model: &AnyonModel) -> Vec<AnyonRow> {
    model
        .anyons
        .iter()
        .map(|a| AnyonRow {
            label: a.name.clone(),
            class: a.class_label.clone(),
            class_representative: model.group.label(a.representative).to_string(),
            normalizer_order: a.normalizer_order,
            irrep: a.charge_label.clone(),
            quantum_dimension: a.quantum_dimension(),
            kind: a.kind,
        })
        .collect()
}

/// A state of two fluxes, amplitudes over ordered pairs `(a, b)` at `a·|G| + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxPairState {
    order: usize,
    amplitudes: Vec<Complex64>,
}

impl FluxPairState {
    pub fn new(group: &FiniteGroup, amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = group.order();
        if amplitudes.len() != n * n {
            return Err(QdError::Argument(format!("expected {} amplitudes, got {}", n * n, amplitudes.len())));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(QdError::Argument(format!("flux-pair state has norm {norm}")));
        }
        Ok(FluxPairState { order: n, amplitudes })
    }

    pub fn basis(group: &FiniteGroup, a: Element, b: Element) -> Self {
        let n = group.order();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n * n];
        amplitudes[a * n + b] = Complex64::new(1.0, 0.0);
        FluxPairState { order: n, amplitudes }
    }

    pub fn amplitude(&self, a: Element, b: Element) -> Complex64 {
        self.amplitudes[a * self.order + b]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// The single basis pair carrying all weight, if any.
    pub fn as_basis_pair(&self) -> Option<(Element, Element)> {
        let mut hit = None;
        for (i, z) in self.amplitudes.iter().enumerate() {
            if z.norm() > 1e-12 {
                if hit.is_some() {
                    return None;
                }
                hit = Some((i / self.order, i % self.order));
            }
        }
        hit
    }

    fn map_basis(&self, f: impl Fn(Element, Element) -> (Element, Element)) -> FluxPairState {
        let n = self.order;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for a in 0..n {
            for b in 0..n {
                let (c, d) = f(a, b);
                out[c * n + d] += self.amplitudes[a * n + b];
            }
        }
        FluxPairState { order: n, amplitudes: out }
    }
}

/// Exchange of two fluxes: `|a, b⟩ ↦ |a b a⁻¹, a⟩`.
pub fn braid(group: &FiniteGroup, state: &FluxPairState) -> FluxPairState {
    state.map_basis(|a, b| (group.conjugate(a, b), a))
}

/// Full monodromy: `|a, b⟩ ↦ |(ab) a (ab)⁻¹, (ab) b (ab)⁻¹⟩`.
pub fn monodromy(group: &FiniteGroup, state: &FluxPairState) -> FluxPairState {
    state.map_basis(|a, b| {
        let ab = group.mul(a, b);
        (group.conjugate(ab, a), group.conjugate(ab, b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn s3_anyons() {
        let g = FiniteGroup::s3();
        let m = enumerate_anyons(&g).unwrap();
        let dims: Vec<usize> = m.anyons.iter().map(|a| a.quantum_dimension()).collect();
        assert_eq!(dims, vec![1, 1, 2, 3, 3, 2, 2, 2]);
        let names: Vec<&str> = m.anyons.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, vec!["A", "B", "C", "D", "E", "F", "G", "H"]);
        let kinds: Vec<AnyonKind> = m.anyons.iter().map(|a| a.kind).collect();
        use AnyonKind::*;
        assert_eq!(kinds, vec![Vacuum, Chargeon, Chargeon, Fluxon, Dyon, Fluxon, Dyon, Dyon]);
        let h = m.anyon("H").unwrap();
        assert_eq!((h.class_label.as_str(), h.charge_label.as_str()), ("C_y", "wbar"));
        let d = m.anyon("D").unwrap();
        assert_eq!((d.class_label.as_str(), d.normalizer_order), ("C_x", 2));
        assert_eq!(total_quantum_dimension_sq(&m).unwrap(), 36);
    }

    #[test]
    fn toric_code_anyons() {
        let m = enumerate_anyons(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        let names: Vec<&str> = m.anyons.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, vec!["1", "e", "m", "eps"]);
        assert!(m.anyons.iter().all(|a| a.quantum_dimension() == 1));
        assert_eq!(total_quantum_dimension_sq(&m).unwrap(), 4);
    }

    #[test]
    fn trivial_and_abelian_doubles() {
        let m = enumerate_anyons(&FiniteGroup::cyclic(1).unwrap()).unwrap();
        assert_eq!(m.anyons.len(), 1);
        assert_eq!(m.anyons[0].kind, AnyonKind::Vacuum);
        assert_eq!(total_quantum_dimension_sq(&m).unwrap(), 1);
        let m = enumerate_anyons(&FiniteGroup::cyclic(3).unwrap()).unwrap();
        assert_eq!(m.anyons.len(), 9);
        assert!(m.anyons.iter().all(|a| a.quantum_dimension() == 1));
    }

    #[test]
    fn total_dimension_for_nonabelian_groups() {
        for g in
            [FiniteGroup::dihedral(4).unwrap(), FiniteGroup::symmetric(4).unwrap(), FiniteGroup::dihedral(5).unwrap()]
        {
            let m = enumerate_anyons(&g).unwrap();
            let n = g.order();
            assert_eq!(total_quantum_dimension_sq(&m).unwrap(), n * n);
        }
    }

    #[test]
    fn braid_examples() {
        let g = FiniteGroup::s3();
        let el = |s| g.element_by_label(s).unwrap();
        let out = braid(&g, &FluxPairState::basis(&g, el("x"), el("y")));
        assert_eq!(out.as_basis_pair(), Some((el("y2"), el("x"))));
        for b in g.elements() {
            let out = braid(&g, &FluxPairState::basis(&g, 0, b));
            assert_eq!(out.as_basis_pair(), Some((b, 0)));
        }
        let z5 = FiniteGroup::cyclic(5).unwrap();
        let out = braid(&z5, &FluxPairState::basis(&z5, 2, 3));
        assert_eq!(out.as_basis_pair(), Some((3, 2)));
        assert_eq!(monodromy(&z5, &FluxPairState::basis(&z5, 2, 3)).as_basis_pair(), Some((2, 3)));
    }

    #[test]
    fn monodromy_examples() {
        let g = FiniteGroup::s3();
        let (x, y) = (3, 1);
        let xy = g.mul(x, y);
        let out = monodromy(&g, &FluxPairState::basis(&g, x, y));
        assert_eq!(out.as_basis_pair(), Some((g.conjugate(xy, x), g.conjugate(xy, y))));
        for a in g.elements() {
            assert_eq!(monodromy(&g, &FluxPairState::basis(&g, a, a)).as_basis_pair(), Some((a, a)));
        }
    }

    #[test]
    fn state_validation() {
        let g = FiniteGroup::cyclic(2).unwrap();
        assert!(FluxPairState::new(&g, vec![Complex64::new(1.0, 0.0); 4]).is_err());
        assert!(FluxPairState::new(&g, vec![Complex64::new(0.5, 0.0); 4]).is_ok());
        assert!(FluxPairState::new(&g, vec![Complex64::new(1.0, 0.0); 3]).is_err());
    }

    fn random_state(n: usize, seed: &[f64]) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::new(seed[i % seed.len()] + i as f64 * 0.01, seed[(i + 1) % seed.len()]))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        v
    }

    proptest! {
        #[test]
        fn braid_properties(seed in proptest::collection::vec(-1.0f64..1.0, 4..12), which in 0usize..3) {
            let g = [FiniteGroup::s3(), FiniteGroup::dihedral(4).unwrap(), crate::group::tests::quaternion_regular()][which].clone();
            let n = g.order();
            let s = FluxPairState::new(&g, random_state(n, &seed)).unwrap();
            let b = braid(&g, &s);
            let norm: f64 = b.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
            let bb = braid(&g, &b);
            let m = monodromy(&g, &s);
            for (p, q) in bb.amplitudes().iter().zip(m.amplitudes()) {
                prop_assert_eq!(p, q);
            }
        }
    }

    #[test]
    fn braid_is_a_permutation_preserving_classes() {
        let g = FiniteGroup::s3();
        for a in g.elements() {
            for b in g.elements() {
                let s = FluxPairState::basis(&g, a, b);
                let (c, d) = braid(&g, &s).as_basis_pair().unwrap();
                assert_eq!((g.class_of(c), g.class_of(d)), (g.class_of(b), g.class_of(a)));
                let (c, d) = monodromy(&g, &s).as_basis_pair().unwrap();
                assert_eq!((g.class_of(c), g.class_of(d)), (g.class_of(a), g.class_of(b)));
            }
        }
    }
}

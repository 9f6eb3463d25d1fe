//! Energy sectors of the refined Hamiltonian and their anyon content.
//!
//! A sector is a pair (flux class C, irrep Γ of G): the common image of
//! `B_C` and `A_Γ`, with dimension `|C|·d_Γ²` inside the `|G|²` of one site.
//! Anyon `a = (C, Λ)` sits in the sectors whose irrep occurs in the induced
//! character `Ind Λ`; equivalently, restricting Γ to the normalizer of C
//! yields the anyon charges of the sector. Within a sector, anyon `a` with
//! multiplicity `m` covers an area `m · d_Λ · |C| · d_Γ`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::anyon::{AnyonKind, AnyonLabel, AnyonModel};
use crate::error::{QdError, Result};
use crate::hamiltonian::Couplings;
use crate::operators::SiteOperators;
use crate::rep::{decompose, induce_character, restrict_character};
use crate::sparse::SparseOperator;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnyonContent {
    pub label: String,
    pub flavor: String,
    pub mult: usize,
    pub area: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergySector {
    pub class: String,
    pub irrep: String,
    #[serde(skip)]
    pub class_index: usize,
    #[serde(skip)]
    pub irrep_index: usize,
    pub class_size: usize,
    pub irrep_dim: usize,
    pub dim: usize,
    pub energy: Option<f64>,
    pub label: String,
    pub anyons: Vec<AnyonContent>,
}

/// G-irreps in which anyon `a` appears, with multiplicity, ordered by
/// dimension and then table order.
pub fn anyon_irreps(model: &AnyonModel, a: &AnyonLabel) -> Result<Vec<(usize, usize)>> {
    let sector = &model.flux_sectors[a.sector];
    let induced = induce_character(&sector.normalizer, &sector.table.character(a.charge), &model.group)?;
    let mut out: Vec<(usize, usize)> =
        decompose(&model.group, &induced, &model.table)?.into_iter().map(|c| (c.irrep, c.multiplicity)).collect();
    out.sort_by_key(|&(i, _)| (model.table.dims[i], i));
    Ok(out)
}

/// G-irreps of the sectors anyon `a` appears in, flavor order.
pub fn flavor_irreps(model: &AnyonModel, a: &AnyonLabel) -> Result<Vec<usize>> {
    Ok(anyon_irreps(model, a)?.into_iter().map(|(i, _)| i).collect())
}

/// Name of anyon `a`'s flavor in the sector with irrep `irrep`.
pub fn flavor_label(model: &AnyonModel, a: &AnyonLabel, irrep: usize) -> Result<String> {
    let irreps = flavor_irreps(model, a)?;
    let pos = irreps.iter().position(|&i| i == irrep).ok_or_else(|| {
        QdError::Argument(format!("anyon {} does not occur with irrep {}", a.name, model.table.labels[irrep]))
    })?;
    if a.kind == AnyonKind::Chargeon && a.charge_dim > 1 {
        return Ok((1..=a.charge_dim).map(|k| format!("{}{k}", a.name)).collect::<Vec<_>>().join("⊕"));
    }
    if irreps.len() > 1 {
        return Ok(format!("{}{}", a.name, pos + 1));
    }
    Ok(a.name.clone())
}

/// Anyons in sector `(class, irrep)` with multiplicities, from restricting the irrep.
pub fn sector_to_anyons(model: &AnyonModel, class: usize, irrep: usize) -> Result<Vec<(usize, usize)>> {
    if class >= model.group.num_classes() || irrep >= model.table.num_irreps() {
        return Err(QdError::Argument(format!("no sector ({class}, {irrep})")));
    }
    let sector = model.sector_for_class(class);
    let restricted = restrict_character(&model.group, &model.table.character(irrep), &sector.normalizer)?;
    let parts = decompose(sector.normalizer.as_group(), &restricted, &sector.table)?;
    Ok(parts
        .into_iter()
        .map(|c| {
            let idx = model
                .anyons
                .iter()
                .position(|a| a.class == class && a.charge == c.irrep)
                .expect("anyon for every charge");
            (idx, c.multiplicity)
        })
        .collect())
}

/// Sectors anyon `a` occupies: `(irrep, multiplicity, flavor label)`.
pub fn anyon_to_sectors(model: &AnyonModel, a: &AnyonLabel) -> Result<Vec<(usize, usize, String)>> {
    anyon_irreps(model, a)?.into_iter().map(|(i, m)| Ok((i, m, flavor_label(model, a, i)?))).collect()
}

/// All `(class, irrep)` sectors, classes in group order and irreps in table order.
pub fn energy_sectors(model: &AnyonModel, couplings: Option<&Couplings>) -> Result<Vec<EnergySector>> {
    let group = &model.group;
    let table = &model.table;
    let mut out = Vec::new();
    for class in 0..group.num_classes() {
        let class_size = group.conjugacy_classes()[class].size();
        for irrep in 0..table.num_irreps() {
            let d = table.dims[irrep];
            let mut anyons = Vec::new();
            for (idx, mult) in sector_to_anyons(model, class, irrep)? {
                let a = &model.anyons[idx];
                anyons.push(AnyonContent {
                    label: a.name.clone(),
                    flavor: flavor_label(model, a, irrep)?,
                    mult,
                    area: mult * a.charge_dim * class_size * d,
                });
            }
            let label = anyons.iter().map(|c| c.flavor.clone()).collect::<Vec<_>>().join("⊕");
            let sector = EnergySector {
                class: group.class_label(class),
                irrep: table.labels[irrep].clone(),
                class_index: class,
                irrep_index: irrep,
                class_size,
                irrep_dim: d,
                dim: class_size * d * d,
                energy: couplings.map(|c| c.sector_energy(irrep, class)),
                label,
                anyons,
            };
            let area: usize = sector.anyons.iter().map(|c| c.area).sum();
            if area != sector.dim {
                return Err(QdError::InvariantViolation(format!(
                    "sector ({}, {}) has dimension {} but anyon areas sum to {area}",
                    sector.class, sector.irrep, sector.dim
                )));
            }
            out.push(sector);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramRow {
    pub class: String,
    pub width: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramCol {
    pub irrep: String,
    pub width: usize,
}

/// Grid of sectors: rows are classes of width `|C|`, columns irreps of width `d_Γ²`.
#[derive(Debug, Clone, Serialize)]
pub struct SplittingDiagram {
    pub group: String,
    pub rows: Vec<DiagramRow>,
    pub cols: Vec<DiagramCol>,
    pub cells: Vec<EnergySector>,
}

pub fn splitting_diagram(model: &AnyonModel, couplings: Option<&Couplings>) -> Result<SplittingDiagram> {
    let group = &model.group;
    let diagram = SplittingDiagram {
        group: group.name().to_string(),
        rows: group
            .conjugacy_classes()
            .iter()
            .enumerate()
            .map(|(c, cl)| DiagramRow { class: group.class_label(c), width: cl.size() })
            .collect(),
        cols: model
            .table
            .labels
            .iter()
            .zip(&model.table.dims)
            .map(|(l, &d)| DiagramCol { irrep: l.clone(), width: d * d })
            .collect(),
        cells: energy_sectors(model, couplings)?,
    };
    let total: usize = diagram.cells.iter().map(|c| c.dim).sum();
    let n = group.order();
    if total != n * n {
        return Err(QdError::InvariantViolation(format!("diagram area {total} != |G|² = {}", n * n)));
    }
    for (a, area) in model.anyons.iter().zip(anyon_areas(&diagram, model)) {
        let d = a.quantum_dimension();
        if area != d * d {
            return Err(QdError::InvariantViolation(format!("anyon {} covers {area}, expected {}", a.name, d * d)));
        }
    }
    Ok(diagram)
}

/// Total area covered by each anyon, in anyon order.
pub fn anyon_areas(diagram: &SplittingDiagram, model: &AnyonModel) -> Vec<usize> {
    model
        .anyons
        .iter()
        .map(|a| diagram.cells.iter().flat_map(|c| &c.anyons).filter(|x| x.label == a.name).map(|x| x.area).sum())
        .collect()
}

impl SplittingDiagram {
    pub fn to_text(&self) -> String {
        let cell = |c: &EnergySector| match c.energy {
            Some(e) => format!("{} [{}] E={}", c.label, c.dim, fmt_energy(e)),
            None => format!("{} [{}]", c.label, c.dim),
        };
        let mut header = vec![format!("{} ", self.group)];
        header.extend(self.cols.iter().map(|c| format!("{} ({})", c.irrep, c.width)));
        let mut lines = vec![header];
        for r in &self.rows {
            let mut line = vec![format!("{} ({})", r.class, r.width)];
            line.extend(self.cells.iter().filter(|c| c.class == r.class).map(cell));
            lines.push(line);
        }
        let ncols = lines[0].len();
        let widths: Vec<usize> =
            (0..ncols).map(|j| lines.iter().map(|l| l[j].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for l in &lines {
            let padded: Vec<String> =
                l.iter().zip(&widths).map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
            let _ = writeln!(out, "{}", padded.join(" | ").trim_end());
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph splitting {\n  node [shape=plaintext];\n  grid [label=<\n    <table border=\"0\" cellborder=\"1\" cellspacing=\"0\">\n");
        let _ = write!(out, "      <tr><td>{}</td>", escape(&self.group));
        for c in &self.cols {
            let _ = write!(out, "<td>{} ({})</td>", escape(&c.irrep), c.width);
        }
        out.push_str("</tr>\n");
        for r in &self.rows {
            let _ = write!(out, "      <tr><td>{} ({})</td>", escape(&r.class), r.width);
            for c in self.cells.iter().filter(|c| c.class == r.class) {
                let energy = c.energy.map(|e| format!("<br/>E={}", fmt_energy(e))).unwrap_or_default();
                let _ = write!(out, "<td>{}<br/>dim {}{energy}</td>", escape(&c.label), c.dim);
            }
            out.push_str("</tr>\n");
        }
        out.push_str("    </table>\n  >];\n}\n");
        out
    }
}

fn fmt_energy(e: f64) -> String {
    if e == e.round() && e.abs() < 1e15 {
        format!("{}", e as i64)
    } else {
        format!("{e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One named identity and its worst deviation.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub deviation: f64,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sum_ops<'a>(dim: usize, ops: impl IntoIterator<Item = &'a SparseOperator>) -> Result<SparseOperator> {
    SparseOperator::linear_combination(dim, ops.into_iter().map(|o| (c(1.0), o)))
}

/// Operator identities tying anyon projectors to sectors on one site.
///
/// * per class, `Σ_{a∈C} P_a = B_C`;
/// * per group of anyons and irreps linked by sector membership,
///   `Σ_a P_a = Σ_Γ A_Γ B_C`;
/// * for sectors holding a single anyon, `P_a A_Γ B_C = A_Γ B_C`;
/// * `Tr(A_Γ B_C) = |C| d_Γ² |G|⁴` and `Tr(A_Γ P_a) = m |C| d_a d_Γ |G|⁴`,
///   with trace deviations divided by the space dimension;
/// * the mass relation `J(C,Γ) − J_0 = (J(C,1) − J_0) + (J(e,Γ) − J_0)` for
///   seeded random couplings.
pub fn verify_sector_operator_identities(ops: &SiteOperators, model: &AnyonModel) -> Result<Vec<IdentityCheck>> {
    let group = &model.group;
    let table = &model.table;
    let dim = ops.builder.dim();
    let scale = dim as f64 / (group.order() * group.order()) as f64;
    let charges = ops.charge_projectors()?;
    let fluxes = ops.flux_projectors()?;
    let projectors = ops.anyon_projectors(model)?;
    let mut checks = Vec::new();

    let mut worst_class: f64 = 0.0;
    let mut worst_component: f64 = 0.0;
    let mut worst_single: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    let mut worst_anyon_trace: f64 = 0.0;
    for (class, flux) in fluxes.iter().enumerate() {
        let members: Vec<usize> = (0..model.anyons.len()).filter(|&i| model.anyons[i].class == class).collect();
        let total = sum_ops(dim, members.iter().map(|&i| &projectors[i]))?;
        worst_class = worst_class.max(total.max_abs_diff(flux)?);

        let sector_ops: Vec<SparseOperator> = charges.iter().map(|a| a.matmul(flux)).collect::<Result<_>>()?;
        let contents: Vec<Vec<(usize, usize)>> =
            (0..table.num_irreps()).map(|i| sector_to_anyons(model, class, i)).collect::<Result<_>>()?;

        for (irrep, content) in contents.iter().enumerate() {
            let size = group.conjugacy_classes()[class].size() as f64;
            let d = table.dims[irrep] as f64;
            let tr = sector_ops[irrep].trace();
            worst_trace = worst_trace.max((tr - c(size * d * d * scale)).norm() / dim as f64);
            for &i in &members {
                let m = content.iter().find(|&&(j, _)| j == i).map(|&(_, m)| m).unwrap_or(0) as f64;
                let expected = m * size * model.anyons[i].charge_dim as f64 * d * scale;
                let tr = charges[irrep].matmul(&projectors[i])?.trace();
                worst_anyon_trace = worst_anyon_trace.max((tr - c(expected)).norm() / dim as f64);
            }
            if let [(i, _)] = content[..] {
                let lhs = projectors[i].matmul(&sector_ops[irrep])?;
                worst_single = worst_single.max(lhs.max_abs_diff(&sector_ops[irrep])?);
            }
        }

        for (anyons, irreps) in linked_groups(&members, &contents) {
            let lhs = sum_ops(dim, anyons.iter().map(|&i| &projectors[i]))?;
            let rhs = sum_ops(dim, irreps.iter().map(|&i| &sector_ops[i]))?;
            worst_component = worst_component.max(lhs.max_abs_diff(&rhs)?);
        }
    }
    checks.push(IdentityCheck { name: "class-sum".into(), deviation: worst_class });
    checks.push(IdentityCheck { name: "linked-sectors".into(), deviation: worst_component });
    checks.push(IdentityCheck { name: "single-anyon-sector".into(), deviation: worst_single });
    checks.push(IdentityCheck { name: "sector-trace".into(), deviation: worst_trace });
    checks.push(IdentityCheck { name: "anyon-charge-trace".into(), deviation: worst_anyon_trace });
    checks.push(IdentityCheck { name: "mass-relation".into(), deviation: mass_relation_deviation(model, 16) });
    Ok(checks)
}

/// Connected components of the anyon–irrep membership graph for one class.
fn linked_groups(members: &[usize], contents: &[Vec<(usize, usize)>]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut seen_irreps = BTreeSet::new();
    let mut out = Vec::new();
    for start in 0..contents.len() {
        if seen_irreps.contains(&start) {
            continue;
        }
        let mut irreps = BTreeSet::from([start]);
        let mut anyons = BTreeSet::new();
        loop {
            let before = (irreps.len(), anyons.len());
            for &i in &irreps {
                anyons.extend(contents[i].iter().map(|&(a, _)| a));
            }
            for (i, content) in contents.iter().enumerate() {
                if content.iter().any(|(a, _)| anyons.contains(a)) {
                    irreps.insert(i);
                }
            }
            if (irreps.len(), anyons.len()) == before {
                break;
            }
        }
        debug_assert!(anyons.iter().all(|a| members.contains(a)));
        seen_irreps.extend(irreps.iter().copied());
        out.push((anyons.into_iter().collect(), irreps.into_iter().collect()));
    }
    out
}

/// Worst violation of `J(C,Γ) − J_0 = (J(C,1) − J_0) + (J(e,Γ) − J_0)` over
/// `trials` seeded random couplings.
pub fn mass_relation_deviation(model: &AnyonModel, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec7);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let couplings = Couplings {
            alpha: (0..model.table.num_irreps()).map(|_| rng.gen_range(-5.0..5.0)).collect(),
            beta: (0..model.group.num_classes()).map(|_| rng.gen_range(-5.0..5.0)).collect(),
        };
        let j0 = couplings.sector_energy(0, 0);
        for class in 0..model.group.num_classes() {
            for irrep in 0..model.table.num_irreps() {
                let lhs = couplings.sector_energy(irrep, class) - j0;
                let rhs = (couplings.sector_energy(0, class) - j0) + (couplings.sector_energy(irrep, 0) - j0);
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon::enumerate_anyons;
    use crate::group::FiniteGroup;

    fn s3() -> AnyonModel {
        enumerate_anyons(&FiniteGroup::s3()).unwrap()
    }

    fn cell<'a>(cells: &'a [EnergySector], class: &str, irrep: &str) -> &'a EnergySector {
        cells.iter().find(|c| c.class == class && c.irrep == irrep).unwrap()
    }

    #[test]
    fn s3_sectors() {
        let m = s3();
        let c = Couplings { alpha: vec![0.0, 1.0, 2.0], beta: vec![0.0, 5.0, 3.0] };
        let cells = energy_sectors(&m, Some(&c)).unwrap();
        assert_eq!(cells.len(), 9);
        let x2 = cell(&cells, "C_x", "2");
        assert_eq!((x2.label.as_str(), x2.dim, x2.energy), ("D2⊕E2", 12, Some(5.0)));
        let e1 = cell(&cells, "C_e", "1");
        assert_eq!((e1.label.as_str(), e1.dim), ("A", 1));
        assert_eq!(cell(&cells, "C_e", "2").label, "C1⊕C2");
        assert_eq!(cell(&cells, "C_y", "2").label, "G⊕H");
        assert_eq!(cell(&cells, "C_x", "-1").label, "E1");
        assert_eq!(cell(&cells, "C_x", "1").label, "D1");
        assert_eq!(cell(&cells, "C_y", "1").label, "F1");
        assert_eq!(cell(&cells, "C_y", "-1").label, "F2");
        let labels: BTreeSet<&str> = cells.iter().map(|c| c.label.as_str()).collect();
        let expected: BTreeSet<&str> = ["A", "B", "C1⊕C2", "D1", "E1", "D2⊕E2", "F1", "F2", "G⊕H"].into();
        assert_eq!(labels, expected);
    }

    #[test]
    fn s3_anyon_sector_maps() {
        let m = s3();
        let table = &m.table;
        let names = |v: Vec<(usize, usize, String)>| {
            v.into_iter().map(|(i, _, f)| (table.labels[i].clone(), f)).collect::<Vec<_>>()
        };
        assert_eq!(
            names(anyon_to_sectors(&m, m.anyon("F").unwrap()).unwrap()),
            vec![("1".into(), "F1".into()), ("-1".into(), "F2".into())]
        );
        assert_eq!(
            names(anyon_to_sectors(&m, m.anyon("D").unwrap()).unwrap()),
            vec![("1".into(), "D1".into()), ("2".into(), "D2".into())]
        );
        assert_eq!(names(anyon_to_sectors(&m, m.anyon("A").unwrap()).unwrap()), vec![("1".into(), "A".into())]);

        let cy = m.group.class_by_label("C_y").unwrap();
        let cx = m.group.class_by_label("C_x").unwrap();
        let an = |v: Vec<(usize, usize)>| v.into_iter().map(|(i, k)| (m.anyons[i].name.clone(), k)).collect::<Vec<_>>();
        assert_eq!(an(sector_to_anyons(&m, cy, 2).unwrap()), vec![("G".into(), 1), ("H".into(), 1)]);
        assert_eq!(an(sector_to_anyons(&m, cx, 1).unwrap()), vec![("E".into(), 1)]);
        assert_eq!(an(sector_to_anyons(&m, 0, 2).unwrap()), vec![("C".into(), 1)]);
    }

    #[test]
    fn s3_diagram() {
        let m = s3();
        let d = splitting_diagram(&m, None).unwrap();
        assert_eq!(d.cells.len(), 9);
        assert_eq!(d.cells.iter().map(|c| c.dim).sum::<usize>(), 36);
        assert_eq!(anyon_areas(&d, &m), vec![1, 1, 4, 9, 9, 4, 4, 4]);
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["rows"][2]["width"], 3);
        assert_eq!(json["cols"][2]["width"], 4);
        assert!(d.to_text().contains("D2⊕E2"));
        assert!(d.to_dot().starts_with("digraph"));
    }

    #[test]
    fn toric_code_sectors_are_anyons() {
        let m = enumerate_anyons(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        let cells = energy_sectors(&m, None).unwrap();
        assert_eq!(cells.len(), 4);
        let labels: BTreeSet<String> = cells.iter().map(|c| c.label.clone()).collect();
        assert_eq!(labels, ["1", "e", "m", "eps"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn frobenius_consistency_for_several_groups() {
        for g in [
            FiniteGroup::s3(),
            FiniteGroup::dihedral(4).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            crate::group::tests::quaternion_regular(),
        ] {
            let m = enumerate_anyons(&g).unwrap();
            for (idx, a) in m.anyons.iter().enumerate() {
                for (irrep, mult) in anyon_irreps(&m, a).unwrap() {
                    let back = sector_to_anyons(&m, a.class, irrep).unwrap();
                    assert!(back.contains(&(idx, mult)));
                }
            }
            let d = splitting_diagram(&m, None).unwrap();
            let areas = anyon_areas(&d, &m);
            for (a, area) in m.anyons.iter().zip(areas) {
                assert_eq!(area, a.quantum_dimension().pow(2));
            }
        }
    }

    #[test]
    fn mass_relation_holds() {
        assert!(mass_relation_deviation(&s3(), 32) < 1e-12);
    }
}

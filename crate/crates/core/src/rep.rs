//! Characters and representations of finite groups.
//!
//! Character tables are computed without irrep matrices: the class sums span
//! the centre of the group algebra, which is commutative and semisimple. In
//! the orthonormal basis `C_i / sqrt|C_i|`, multiplication by a class sum is a
//! normal operator whose adjoint is multiplication by the inverse class, so a
//! random Hermitian combination of these operators has the central primitive
//! idempotents as eigenvectors. Each idempotent is proportional to
//! `Σ_i conj(χ(C_i)) C_i`, from which the character is read off.
//!
//! Irreps are ordered by dimension, then by their character values in
//! descending lexicographic order over classes (real part first, then
//! imaginary part). This puts the trivial character first and, for Z3, gives
//! `1, w, wbar` with `w = exp(2πi/3)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{QdError, Result};
use crate::group::{FiniteGroup, GroupKind, Subgroup};

/// Tolerance for character identities (orthogonality, reciprocity).
pub const CHAR_TOL: f64 = 1e-9;
/// Residual allowed when rounding multiplicities.
pub const MULTIPLICITY_TOL: f64 = 1e-6;

const MAX_ATTEMPTS: u64 = 8;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `exp(2πi·p/q)`.
pub fn root_of_unity(p: i64, q: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * p as f64 / q as f64)
}

/// A function on the conjugacy classes of some group, in class order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFunction {
    pub values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        ClassFunction { values }
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        ClassFunction::new(vec![c64(1.0, 0.0); group.num_classes()])
    }

    /// Character of the regular representation.
    pub fn regular(group: &FiniteGroup) -> Self {
        let mut v = vec![c64(0.0, 0.0); group.num_classes()];
        v[0] = c64(group.order() as f64, 0.0);
        ClassFunction::new(v)
    }

    pub fn at(&self, group: &FiniteGroup, g: usize) -> Complex64 {
        self.values[group.class_of(g)]
    }

    pub fn degree(&self) -> f64 {
        self.values[0].re
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }
}

/// `⟨a, b⟩ = (1/|G|) Σ_C |C| a(C) conj(b(C))`.
pub fn inner_product(group: &FiniteGroup, a: &ClassFunction, b: &ClassFunction) -> Complex64 {
    let sum: Complex64 = group
        .conjugacy_classes()
        .iter()
        .zip(a.values.iter().zip(&b.values))
        .map(|(c, (x, y))| x * y.conj() * c.size() as f64)
        .sum();
    sum / group.order() as f64
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterTable {
    pub group_name: String,
    pub group_order: usize,
    pub class_sizes: Vec<usize>,
    pub class_labels: Vec<String>,
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    /// `chi[irrep][class]`.
    pub chi: Vec<Vec<Complex64>>,
}

impl CharacterTable {
    pub fn num_irreps(&self) -> usize {
        self.labels.len()
    }

    pub fn character(&self, irrep: usize) -> ClassFunction {
        ClassFunction::new(self.chi[irrep].clone())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `χ_Γ(g)` for an element.
    pub fn value(&self, group: &FiniteGroup, irrep: usize, g: usize) -> Complex64 {
        self.chi[irrep][group.class_of(g)]
    }

    /// Worst deviation from row and column orthogonality and `Σ d² = |G|`.
    pub fn orthogonality_deviation(&self) -> f64 {
        let k = self.num_irreps();
        let n = self.group_order as f64;
        let mut worst: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let s: Complex64 = (0..self.class_sizes.len())
                    .map(|c| self.chi[a][c] * self.chi[b][c].conj() * self.class_sizes[c] as f64)
                    .sum();
                let expect = if a == b { n } else { 0.0 };
                worst = worst.max((s - c64(expect, 0.0)).norm() / n);
            }
        }
        for c in 0..self.class_sizes.len() {
            for d in 0..self.class_sizes.len() {
                let s: Complex64 = (0..k).map(|i| self.chi[i][c] * self.chi[i][d].conj()).sum();
                let expect = if c == d { n / self.class_sizes[c] as f64 } else { 0.0 };
                worst = worst.max((s - c64(expect, 0.0)).norm() / n);
            }
        }
        let sum_d2: usize = self.dims.iter().map(|d| d * d).sum();
        worst.max((sum_d2 as f64 - n).abs())
    }
}

/// Computes the complete character table.
pub fn character_table(group: &FiniteGroup) -> Result<CharacterTable> {
    character_table_with(group, CHAR_TOL)
}

pub fn character_table_with(group: &FiniteGroup, tol: f64) -> Result<CharacterTable> {
    if group.order() > crate::group::DEFAULT_MAX_ORDER {
        return Err(QdError::Capacity(format!(
            "character table limited to order ≤ {}",
            crate::group::DEFAULT_MAX_ORDER
        )));
    }
    let classes = group.conjugacy_classes();
    let k = classes.len();
    let sizes: Vec<f64> = classes.iter().map(|c| c.size() as f64).collect();

    // coeff[j][i][l]: multiplicity of g_l (class rep) in C_j · C_i.
    let mut coeff = vec![vec![vec![0.0f64; k]; k]; k];
    for (j, cj) in classes.iter().enumerate() {
        for &a in &cj.members {
            let ainv = group.inv(a);
            for (l, cl) in classes.iter().enumerate() {
                let b = group.mul(ainv, cl.representative);
                coeff[j][group.class_of(b)][l] += 1.0;
            }
        }
    }
    // Normal operators N_j[l][i] in the orthonormal class-sum basis.
    let ops: Vec<DMatrix<Complex64>> = (0..k)
        .map(|j| DMatrix::from_fn(k, k, |l, i| c64(coeff[j][i][l] * (sizes[l] / sizes[i]).sqrt(), 0.0)))
        .collect();

    let mut last_gap = 0.0;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC4A2 + attempt);
        let mut h = DMatrix::<Complex64>::zeros(k, k);
        for op in &ops {
            let w = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h += op * w + op.adjoint() * w.conj();
        }
        let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let eig = h.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let gap = vals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        last_gap = gap;
        if k > 1 && gap < tol * scale * 1e3 {
            continue;
        }
        let mut rows = Vec::with_capacity(k);
        for col in 0..k {
            let v = eig.eigenvectors.column(col);
            let v0 = v[0];
            if v0.norm() < 1e-12 {
                return Err(QdError::NumericDegeneracy { gap, tol });
            }
            let psi: Vec<Complex64> = (0..k).map(|i| (v[i] / v0).conj() / sizes[i].sqrt()).collect();
            let norm: f64 = (0..k).map(|i| sizes[i] * psi[i].norm_sqr()).sum();
            let degree = (group.order() as f64 / norm).sqrt();
            let dim = degree.round();
            if (degree - dim).abs() > 1e-6 || dim < 1.0 {
                return Err(QdError::NumericDegeneracy { gap, tol });
            }
            let chi: Vec<Complex64> = psi.iter().map(|p| clean(p * dim)).collect();
            rows.push((dim as usize, chi));
        }
        rows.sort_by(canonical_cmp);
        let table = CharacterTable {
            group_name: group.name().to_string(),
            group_order: group.order(),
            class_sizes: classes.iter().map(|c| c.size()).collect(),
            class_labels: (0..k).map(|c| group.class_label(c)).collect(),
            labels: irrep_labels(&rows),
            dims: rows.iter().map(|r| r.0).collect(),
            chi: rows.into_iter().map(|r| r.1).collect(),
        };
        let dev = table.orthogonality_deviation();
        if dev > tol * 10.0 {
            return Err(QdError::InvariantViolation(format!("character table orthogonality deviation {dev:.3e}")));
        }
        return Ok(table);
    }
    Err(QdError::NumericDegeneracy { gap: last_gap, tol })
}

fn clean(z: Complex64) -> Complex64 {
    let snap = |x: f64| {
        let r = x.round();
        if (x - r).abs() < 1e-12 {
            r
        } else {
            x
        }
    };
    c64(snap(z.re), snap(z.im))
}

fn canonical_cmp(a: &(usize, Vec<Complex64>), b: &(usize, Vec<Complex64>)) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    a.0.cmp(&b.0).then_with(|| {
        for (x, y) in a.1.iter().zip(&b.1) {
            for (p, q) in [(x.re, y.re), (x.im, y.im)] {
                if (p - q).abs() > 1e-6 {
                    // descending
                    return q.partial_cmp(&p).unwrap_or(Ordering::Equal);
                }
            }
        }
        Ordering::Equal
    })
}

fn irrep_labels(rows: &[(usize, Vec<Complex64>)]) -> Vec<String> {
    let omega = root_of_unity(1, 3);
    let mut out: Vec<String> = Vec::with_capacity(rows.len());
    for (dim, chi) in rows {
        let base = if *dim > 1 {
            dim.to_string()
        } else if chi.iter().all(|z| (z - 1.0).norm() < 1e-6) {
            "1".to_string()
        } else {
            match chi.iter().find(|z| z.im.abs() > 1e-6) {
                None => "-1".to_string(),
                Some(z) if (z - omega).norm() < 1e-6 => "w".to_string(),
                Some(z) if (z - omega.conj()).norm() < 1e-6 => "wbar".to_string(),
                Some(z) => {
                    let turns = z.arg() / (2.0 * PI);
                    let turns = if turns < 0.0 { turns + 1.0 } else { turns };
                    let (p, q) = small_fraction(turns);
                    format!("e({p}/{q})")
                }
            }
        };
        let mut label = base.clone();
        let mut n = 2;
        while out.contains(&label) {
            label = format!("{base}_{n}");
            n += 1;
        }
        out.push(label);
    }
    out
}

fn small_fraction(x: f64) -> (i64, i64) {
    for q in 1..=5040i64 {
        let p = (x * q as f64).round();
        if (x * q as f64 - p).abs() < 1e-6 {
            return (p as i64, q);
        }
    }
    (0, 1)
}

/// Restricts a character of `parent` to the subgroup `sub`.
pub fn restrict_character(parent: &FiniteGroup, chi: &ClassFunction, sub: &Subgroup) -> Result<ClassFunction> {
    check_parent(parent, sub)?;
    check_len(parent, chi)?;
    let h = sub.as_group();
    let values =
        h.conjugacy_classes().iter().map(|c| chi.values[parent.class_of(sub.embed(c.representative))]).collect();
    Ok(ClassFunction::new(values))
}

/// Frobenius induction `χ↑(g) = (1/|H|) Σ_{t : t⁻¹gt ∈ H} χ(t⁻¹gt)`.
pub fn induce_character(sub: &Subgroup, chi: &ClassFunction, parent: &FiniteGroup) -> Result<ClassFunction> {
    check_parent(parent, sub)?;
    let h = sub.as_group();
    check_len(h, chi)?;
    let values = parent
        .conjugacy_classes()
        .iter()
        .map(|c| {
            let g = c.representative;
            let sum: Complex64 = parent
                .elements()
                .filter_map(|t| {
                    let x = parent.mul(parent.mul(parent.inv(t), g), t);
                    sub.local_index(x).map(|loc| chi.values[h.class_of(loc)])
                })
                .sum();
            sum / sub.order() as f64
        })
        .collect();
    Ok(ClassFunction::new(values))
}

fn check_parent(parent: &FiniteGroup, sub: &Subgroup) -> Result<()> {
    let ok = sub.parent_order() == parent.order()
        && sub.elements().iter().all(|&a| sub.elements().iter().all(|&b| sub.contains(parent.mul(a, b))));
    if ok {
        Ok(())
    } else {
        Err(QdError::Argument(format!("subgroup is not a subgroup of {}", parent.name())))
    }
}

fn check_len(group: &FiniteGroup, chi: &ClassFunction) -> Result<()> {
    if chi.values.len() == group.num_classes() {
        Ok(())
    } else {
        Err(QdError::Argument(format!(
            "class function has {} values but {} has {} classes",
            chi.values.len(),
            group.name(),
            group.num_classes()
        )))
    }
}

/// One irreducible constituent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constituent {
    pub irrep: usize,
    pub label: String,
    pub multiplicity: usize,
}

/// Decomposes a character into irreducibles; zero multiplicities are omitted.
pub fn decompose(group: &FiniteGroup, chi: &ClassFunction, table: &CharacterTable) -> Result<Vec<Constituent>> {
    check_len(group, chi)?;
    if table.group_order != group.order() || table.class_sizes.len() != group.num_classes() {
        return Err(QdError::Argument("character table belongs to a different group".into()));
    }
    let mut out = Vec::new();
    for i in 0..table.num_irreps() {
        let m = inner_product(group, chi, &table.character(i));
        let r = m.re.round();
        let residual = (m - c64(r, 0.0)).norm();
        if residual > MULTIPLICITY_TOL || r < 0.0 {
            return Err(QdError::NotACharacter { irrep: table.labels[i].clone(), residual: residual.max(-r) });
        }
        if r > 0.0 {
            out.push(Constituent { irrep: i, label: table.labels[i].clone(), multiplicity: r as usize });
        }
    }
    Ok(out)
}

/// Unitary matrices of an irrep, one per group element.
#[derive(Debug, Clone)]
pub struct ExplicitIrrep {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<DMatrix<Complex64>>,
}

impl ExplicitIrrep {
    /// Worst deviation from `D(g)D(h) = D(gh)` and `D(e) = 1`.
    pub fn homomorphism_deviation(&self, group: &FiniteGroup) -> f64 {
        let mut worst = max_abs(&(&self.matrices[0] - DMatrix::identity(self.dim, self.dim)));
        for g in group.elements() {
            for h in group.elements() {
                let d = &self.matrices[g] * &self.matrices[h] - &self.matrices[group.mul(g, h)];
                worst = worst.max(max_abs(&d));
            }
        }
        worst
    }

    pub fn character(&self, group: &FiniteGroup) -> ClassFunction {
        ClassFunction::new(group.conjugacy_classes().iter().map(|c| self.matrices[c.representative].trace()).collect())
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Bundled irrep matrices: all irreps of cyclic groups and of the triangle S3.
pub fn explicit_irreps(group: &FiniteGroup, table: &CharacterTable) -> Option<Vec<ExplicitIrrep>> {
    let irreps: Vec<(Vec<Complex64>, usize, Vec<DMatrix<Complex64>>)> = match group.kind() {
        GroupKind::Cyclic(n) => (0..n)
            .map(|k| {
                let mats: Vec<_> =
                    (0..n).map(|j| DMatrix::from_element(1, 1, root_of_unity((j * k) as i64, n as i64))).collect();
                let chi = group.conjugacy_classes().iter().map(|c| mats[c.representative][(0, 0)]).collect();
                (chi, 1, mats)
            })
            .collect(),
        GroupKind::S3Triangle => {
            let w = root_of_unity(1, 3);
            let wb = w.conj();
            let one = c64(1.0, 0.0);
            let zero = c64(0.0, 0.0);
            let m2 = |a, b, c, d| DMatrix::from_row_slice(2, 2, &[a, b, c, d]);
            let gamma2 = vec![
                m2(one, zero, zero, one),
                m2(wb, zero, zero, w),
                m2(w, zero, zero, wb),
                m2(zero, one, one, zero),
                m2(zero, w, wb, zero),
                m2(zero, wb, w, zero),
            ];
            let scalar = |signs: [f64; 6]| -> Vec<DMatrix<Complex64>> {
                signs.iter().map(|&s| DMatrix::from_element(1, 1, c64(s, 0.0))).collect()
            };
            let mats = [scalar([1.0; 6]), scalar([1.0, 1.0, 1.0, -1.0, -1.0, -1.0]), gamma2];
            mats.into_iter()
                .map(|m| {
                    let chi = group.conjugacy_classes().iter().map(|c| m[c.representative].trace()).collect();
                    let d = m[0].nrows();
                    (chi, d, m)
                })
                .collect()
        }
        _ => return None,
    };
    let mut out = Vec::with_capacity(irreps.len());
    for (chi, dim, matrices) in irreps {
        let row =
            (0..table.num_irreps()).find(|&i| table.chi[i].iter().zip(&chi).all(|(a, b)| (a - b).norm() < 1e-9))?;
        out.push(ExplicitIrrep { label: table.labels[row].clone(), dim, matrices });
    }
    out.sort_by_key(|ir| table.index_of(&ir.label));
    Some(out)
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    DMatrix::from_fn(ra * rb, ca * cb, |r, c| a[(r / rb, c / cb)] * b[(r % rb, c % cb)])
}

/// Swap on `C^d ⊗ C^d`: `S(|i⟩⊗|j⟩) = |j⟩⊗|i⟩`.
pub fn swap_matrix(d: usize) -> DMatrix<Complex64> {
    let mut s = DMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = c64(1.0, 0.0);
        }
    }
    s
}

/// `Σ_g Γ(g) ⊗ Λ(g⁻¹)`.
pub fn got_sum(group: &FiniteGroup, a: &ExplicitIrrep, b: &ExplicitIrrep) -> DMatrix<Complex64> {
    let mut acc = DMatrix::zeros(a.dim * b.dim, a.dim * b.dim);
    for g in group.elements() {
        acc += kron(&a.matrices[g], &b.matrices[group.inv(g)]);
    }
    acc
}

/// Max-entry deviation of `Σ_g Γ(g)⊗Λ(g⁻¹)` from `(|G|/d_Γ) δ_ΓΛ S`.
pub fn verify_got_swap(group: &FiniteGroup, a: &ExplicitIrrep, b: &ExplicitIrrep) -> Result<f64> {
    if a.matrices.len() != group.order() || b.matrices.len() != group.order() {
        return Err(QdError::Argument("irreps are not over the given group".into()));
    }
    let sum = got_sum(group, a, b);
    let expected = if a.label == b.label {
        swap_matrix(a.dim) * c64(group.order() as f64 / a.dim as f64, 0.0)
    } else {
        DMatrix::zeros(a.dim * b.dim, a.dim * b.dim)
    };
    Ok(max_abs(&(sum - expected)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn s3_table_matches_triangle_irreps() {
        let g = FiniteGroup::s3();
        let t = character_table(&g).unwrap();
        assert_eq!(t.labels, vec!["1", "-1", "2"]);
        assert_eq!(t.dims, vec![1, 1, 2]);
        // classes: C_e, C_y, C_x
        let expect = [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [2.0, -1.0, 0.0]];
        for (row, exp) in t.chi.iter().zip(expect) {
            for (z, e) in row.iter().zip(exp) {
                assert!(close(*z, c64(e, 0.0)), "{row:?}");
            }
        }
        assert!(t.orthogonality_deviation() < 1e-9);
    }

    #[test]
    fn cyclic_tables() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let t = character_table(&z2).unwrap();
        assert_eq!(t.labels, vec!["1", "-1"]);
        assert!(close(t.chi[1][1], c64(-1.0, 0.0)));

        let z3 = FiniteGroup::cyclic(3).unwrap();
        let t = character_table(&z3).unwrap();
        let w = root_of_unity(1, 3);
        assert_eq!(t.labels, vec!["1", "w", "wbar"]);
        assert!(close(t.chi[1][1], w) && close(t.chi[1][2], w.conj()));
        assert!(close(t.chi[2][1], w.conj()) && close(t.chi[2][2], w));

        let t1 = character_table(&FiniteGroup::cyclic(1).unwrap()).unwrap();
        assert_eq!(t1.labels, vec!["1"]);
    }

    #[test]
    fn larger_tables_are_consistent() {
        for g in [
            FiniteGroup::dihedral(4).unwrap(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::symmetric(5).unwrap(),
            FiniteGroup::cyclic(7).unwrap(),
            crate::group::tests::quaternion_regular(),
        ] {
            let t = character_table(&g).unwrap();
            assert_eq!(t.num_irreps(), g.num_classes(), "{}", g.name());
            assert!(t.orthogonality_deviation() < 1e-9, "{}", g.name());
            for i in 0..t.num_irreps() {
                assert!(close(t.chi[i][0], c64(t.dims[i] as f64, 0.0)));
            }
        }
        let s4 = character_table(&FiniteGroup::symmetric(4).unwrap()).unwrap();
        assert_eq!(s4.dims, vec![1, 1, 2, 3, 3]);
        let q8 = character_table(&crate::group::tests::quaternion_regular()).unwrap();
        assert_eq!(q8.dims, vec![1, 1, 1, 1, 2]);
        assert_eq!(q8.labels, vec!["1", "-1", "-1_2", "-1_3", "2"]);
    }

    #[test]
    fn restriction_examples() {
        let g = FiniteGroup::s3();
        let t = character_table(&g).unwrap();
        let ny = g.normalizer(1).unwrap();
        let nx = g.normalizer(3).unwrap();
        let tny = character_table(ny.as_group()).unwrap();
        let tnx = character_table(nx.as_group()).unwrap();

        let r = restrict_character(&g, &t.character(2), &ny).unwrap();
        let d = decompose(ny.as_group(), &r, &tny).unwrap();
        let labels: Vec<_> = d.iter().map(|c| (c.label.as_str(), c.multiplicity)).collect();
        assert_eq!(labels, vec![("w", 1), ("wbar", 1)]);

        let r = restrict_character(&g, &t.character(0), &nx).unwrap();
        assert_eq!(r, ClassFunction::trivial(nx.as_group()));

        let r = restrict_character(&g, &t.character(2), &nx).unwrap();
        let d = decompose(nx.as_group(), &r, &tnx).unwrap();
        assert_eq!(d.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![1, 1]);

        // other group's subgroup is rejected
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let sub = z4.normalizer(0).unwrap();
        assert!(restrict_character(&g, &t.character(0), &sub).is_err());
    }

    #[test]
    fn induction_examples() {
        let g = FiniteGroup::s3();
        let t = character_table(&g).unwrap();
        let ny = g.normalizer(1).unwrap();
        let nx = g.normalizer(3).unwrap();
        let ind = induce_character(&ny, &ClassFunction::trivial(ny.as_group()), &g).unwrap();
        let d = decompose(&g, &ind, &t).unwrap();
        assert_eq!(d.iter().map(|c| c.label.as_str()).collect::<Vec<_>>(), vec!["1", "-1"]);

        let ind = induce_character(&nx, &ClassFunction::trivial(nx.as_group()), &g).unwrap();
        // Direct Frobenius values: χ(e) = 3, χ(y) = 0, χ(x) = 1.
        assert!(close(ind.values[0], c64(3.0, 0.0)));
        assert!(close(ind.values[1], c64(0.0, 0.0)));
        assert!(close(ind.values[2], c64(1.0, 0.0)));
        let d = decompose(&g, &ind, &t).unwrap();
        assert_eq!(d.iter().map(|c| c.label.as_str()).collect::<Vec<_>>(), vec!["1", "2"]);

        let triv = crate::group::Subgroup::new(&g, vec![0]).unwrap();
        let reg = induce_character(&triv, &ClassFunction::trivial(triv.as_group()), &g).unwrap();
        assert_eq!(reg, ClassFunction::regular(&g));
        let d = decompose(&g, &reg, &t).unwrap();
        assert_eq!(d.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![1, 1, 2]);
    }

    #[test]
    fn decompose_rejects_non_characters() {
        let g = FiniteGroup::s3();
        let t = character_table(&g).unwrap();
        let half = ClassFunction::new(vec![c64(0.5, 0.0); 3]);
        assert!(matches!(decompose(&g, &half, &t), Err(QdError::NotACharacter { .. })));
        let virt = ClassFunction::new(t.chi[0].iter().zip(&t.chi[1]).map(|(a, b)| a - b).collect());
        assert!(decompose(&g, &virt, &t).is_err());
        for i in 0..3 {
            let d = decompose(&g, &t.character(i), &t).unwrap();
            assert_eq!(d, vec![Constituent { irrep: i, label: t.labels[i].clone(), multiplicity: 1 }]);
        }
    }

    #[test]
    fn frobenius_reciprocity_all_subgroups_of_s3() {
        let g = FiniteGroup::s3();
        let t = character_table(&g).unwrap();
        let subsets: Vec<Vec<usize>> =
            vec![vec![0], vec![0, 3], vec![0, 4], vec![0, 5], vec![0, 1, 2], (0..6).collect()];
        for s in subsets {
            let h = Subgroup::new(&g, s).unwrap();
            let th = character_table(h.as_group()).unwrap();
            for i in 0..th.num_irreps() {
                let chi = th.character(i);
                let ind = induce_character(&h, &chi, &g).unwrap();
                for j in 0..t.num_irreps() {
                    let psi = t.character(j);
                    let res = restrict_character(&g, &psi, &h).unwrap();
                    let lhs = inner_product(&g, &ind, &psi);
                    let rhs = inner_product(h.as_group(), &chi, &res);
                    assert!((lhs - rhs).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn explicit_irreps_are_representations() {
        for g in [FiniteGroup::s3(), FiniteGroup::cyclic(5).unwrap(), FiniteGroup::cyclic(1).unwrap()] {
            let t = character_table(&g).unwrap();
            let irreps = explicit_irreps(&g, &t).unwrap();
            assert_eq!(irreps.len(), t.num_irreps());
            for (i, ir) in irreps.iter().enumerate() {
                assert_eq!(ir.label, t.labels[i]);
                assert!(ir.homomorphism_deviation(&g) < 1e-10);
                let chi = ir.character(&g);
                for (a, b) in chi.values.iter().zip(&t.chi[i]) {
                    assert!((a - b).norm() < 1e-10);
                }
            }
        }
        assert!(explicit_irreps(
            &FiniteGroup::dihedral(4).unwrap(),
            &character_table(&FiniteGroup::dihedral(4).unwrap()).unwrap()
        )
        .is_none());
    }

    #[test]
    fn got_swap_s3() {
        let g = FiniteGroup::s3();
        let t = character_table(&g).unwrap();
        let irreps = explicit_irreps(&g, &t).unwrap();
        let g2 = &irreps[2];
        assert!(verify_got_swap(&g, g2, g2).unwrap() < 1e-12);
        let sum = got_sum(&g, g2, g2);
        assert_eq!(sum.shape(), (4, 4));
        assert!((sum[(1, 2)] - c64(3.0, 0.0)).norm() < 1e-12);
        let cross = got_sum(&g, &irreps[0], &irreps[1]);
        assert!(cross[(0, 0)].norm() < 1e-12);
        for a in &irreps {
            for b in &irreps {
                assert!(verify_got_swap(&g, a, b).unwrap() < 1e-12);
            }
        }
        let triv = FiniteGroup::cyclic(1).unwrap();
        let tt = character_table(&triv).unwrap();
        let ir = explicit_irreps(&triv, &tt).unwrap();
        assert!((got_sum(&triv, &ir[0], &ir[0])[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
    }
}

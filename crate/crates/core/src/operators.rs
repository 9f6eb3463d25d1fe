//! Vertex, plaquette, charge, flux and anyon operators on edge qudits.
//!
//! Operators live on a [`Region`], an ordered list of lattice edges; the
//! position of an edge in that list is its digit in the basis index. Every
//! lemma in this crate is local, so checks run on the smallest region that
//! contains the operators involved.
//!
//! Kitaev's vertex term `Σ_g A_g` is `|G|` times the trivial charge
//! projector; both are exposed ([`OperatorBuilder::kitaev_vertex_sum`] and
//! [`OperatorBuilder::charge_projector`]).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::anyon::{AnyonLabel, AnyonModel};
use crate::error::{QdError, Result};
use crate::group::{Element, FiniteGroup};
use crate::lattice::{Loop, Site, Star, TorusLattice};
use crate::rep::{character_table, CharacterTable};
use crate::sparse::{HilbertSpace, SparseOperator};

/// Which side a group element multiplies from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    /// `|z⟩ ↦ |g z⟩`, or the projector on `|h⟩`.
    Plus,
    /// `|z⟩ ↦ |z g⁻¹⟩`, or the projector on `|h⁻¹⟩`.
    Minus,
}

/// Single-qudit multiplication operator.
pub fn left_mult(group: &FiniteGroup, g: Element, sign: Sign) -> Result<SparseOperator> {
    group.check(g)?;
    let gi = group.inv(g);
    let image: Vec<usize> = group
        .elements()
        .map(|z| match sign {
            Sign::Plus => group.mul(g, z),
            Sign::Minus => group.mul(z, gi),
        })
        .collect();
    SparseOperator::from_permutation(&image)
}

/// Single-qudit rank-one projector on `|h⟩` (plus) or `|h⁻¹⟩` (minus).
pub fn diag_flux(group: &FiniteGroup, h: Element, sign: Sign) -> Result<SparseOperator> {
    group.check(h)?;
    let target = match sign {
        Sign::Plus => h,
        Sign::Minus => group.inv(h),
    };
    let diag = group.elements().map(|z| Complex64::new(if z == target { 1.0 } else { 0.0 }, 0.0)).collect();
    Ok(SparseOperator::from_diagonal(diag))
}

/// An ordered set of lattice edges with its Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    edges: Vec<usize>,
    space: HilbertSpace,
}

impl Region {
    pub fn new(qudit_dim: usize, edges: Vec<usize>) -> Result<Self> {
        Self::with_limit(qudit_dim, edges, crate::sparse::MAX_TOTAL_DIM)
    }

    pub fn with_limit(qudit_dim: usize, edges: Vec<usize>, limit: usize) -> Result<Self> {
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != edges.len() {
            return Err(QdError::Argument("region lists an edge twice".into()));
        }
        let space = HilbertSpace::with_limit(qudit_dim, edges.len(), limit)?;
        Ok(Region { edges, space })
    }

    pub fn full(lattice: &TorusLattice, qudit_dim: usize) -> Result<Self> {
        Self::new(qudit_dim, (0..lattice.num_edges()).collect())
    }

    pub fn star(lattice: &TorusLattice, v: usize, qudit_dim: usize) -> Result<Self> {
        Self::new(qudit_dim, lattice.star(v)?.edges.to_vec())
    }

    pub fn plaquette(lattice: &TorusLattice, p: usize, qudit_dim: usize) -> Result<Self> {
        Self::new(qudit_dim, lattice.plaquette_loop(p)?.edges.to_vec())
    }

    pub fn site(site: &Site, qudit_dim: usize) -> Result<Self> {
        Self::new(qudit_dim, site.edges.to_vec())
    }

    /// Star of `v` followed by the loop edges of `p` not already in it.
    pub fn star_and_loop(lattice: &TorusLattice, v: usize, p: usize, qudit_dim: usize) -> Result<Self> {
        let mut edges = lattice.star(v)?.edges.to_vec();
        for e in lattice.plaquette_loop(p)?.edges {
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        Self::new(qudit_dim, edges)
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn position(&self, edge: usize) -> Option<usize> {
        self.edges.iter().position(|&e| e == edge)
    }

    fn positions(&self, edges: &[usize]) -> Result<Vec<usize>> {
        edges
            .iter()
            .map(|&e| self.position(e).ok_or_else(|| QdError::Argument(format!("edge {e} is not in the region"))))
            .collect()
    }
}

/// Builds operators for one group on one region of one lattice.
#[derive(Debug, Clone)]
pub struct OperatorBuilder {
    group: FiniteGroup,
    table: CharacterTable,
    lattice: TorusLattice,
    region: Region,
}

impl OperatorBuilder {
    pub fn new(group: &FiniteGroup, lattice: &TorusLattice, region: Region) -> Result<Self> {
        if region.space().qudit_dim() != group.order() {
            return Err(QdError::Argument(format!(
                "region qudits have dimension {}, group order is {}",
                region.space().qudit_dim(),
                group.order()
            )));
        }
        if let Some(&e) = region.edges().iter().find(|&&e| e >= lattice.num_edges()) {
            return Err(QdError::Argument(format!("edge {e} is not on the lattice")));
        }
        Ok(OperatorBuilder { group: group.clone(), table: character_table(group)?, lattice: lattice.clone(), region })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn dim(&self) -> usize {
        self.region.dim()
    }

    pub fn identity(&self) -> SparseOperator {
        SparseOperator::identity(self.dim())
    }

    fn star(&self, v: usize) -> Result<(Star, Vec<usize>)> {
        let star = self.lattice.star(v)?;
        let pos = self.region.positions(&star.edges)?;
        Ok((star, pos))
    }

    fn plaquette_loop(&self, p: usize) -> Result<(Loop, Vec<usize>)> {
        let lp = self.lattice.plaquette_loop(p)?;
        let pos = self.region.positions(&lp.edges)?;
        Ok((lp, pos))
    }

    /// `A_g` at vertex `v`: `z ↦ g z` on outgoing edges, `z ↦ z g⁻¹` on incoming ones.
    pub fn vertex(&self, v: usize, g: Element) -> Result<SparseOperator> {
        self.group.check(g)?;
        let (star, pos) = self.star(v)?;
        let space = self.region.space();
        let strides: Vec<usize> = pos.iter().map(|&k| space.stride(k)).collect();
        let q = space.qudit_dim();
        let gi = self.group.inv(g);
        let image: Vec<usize> = (0..space.total_dim())
            .into_par_iter()
            .map(|j| {
                let mut out = j;
                for (k, &s) in strides.iter().enumerate() {
                    let z = (j / s) % q;
                    let w = if star.outgoing[k] { self.group.mul(g, z) } else { self.group.mul(z, gi) };
                    out = out + w * s - z * s;
                }
                out
            })
            .collect();
        SparseOperator::from_permutation(&image)
    }

    /// `A_g` for every `g`, indexed by element.
    pub fn vertex_family(&self, v: usize) -> Result<Vec<SparseOperator>> {
        self.group.elements().map(|g| self.vertex(v, g)).collect()
    }

    /// Oriented loop product of `p` in each basis state.
    fn fluxes(&self, p: usize) -> Result<Vec<Element>> {
        let (lp, pos) = self.plaquette_loop(p)?;
        let space = self.region.space();
        Ok((0..space.total_dim())
            .into_par_iter()
            .map(|j| {
                pos.iter().zip(lp.along).fold(self.group.identity(), |acc, (&k, along)| {
                    let z = space.digit(j, k);
                    self.group.mul(acc, if along { z } else { self.group.inv(z) })
                })
            })
            .collect())
    }

    fn flux_indicator(&self, fluxes: &[Element], pred: impl Fn(Element) -> bool) -> SparseOperator {
        SparseOperator::from_diagonal(
            fluxes.iter().map(|&f| Complex64::new(if pred(f) { 1.0 } else { 0.0 }, 0.0)).collect(),
        )
    }

    /// `B_h` at plaquette `p`: projector on loop product `z1 z2 z3⁻¹ z4⁻¹ = h`.
    pub fn plaquette(&self, p: usize, h: Element) -> Result<SparseOperator> {
        self.group.check(h)?;
        let fluxes = self.fluxes(p)?;
        Ok(self.flux_indicator(&fluxes, |f| f == h))
    }

    pub fn plaquette_family(&self, p: usize) -> Result<Vec<SparseOperator>> {
        let fluxes = self.fluxes(p)?;
        Ok(self.group.elements().map(|h| self.flux_indicator(&fluxes, |f| f == h)).collect())
    }

    /// `B_C = Σ_{h∈C} B_h`.
    pub fn flux_projector(&self, p: usize, class: usize) -> Result<SparseOperator> {
        if class >= self.group.num_classes() {
            return Err(QdError::Argument(format!("class {class} out of range")));
        }
        let fluxes = self.fluxes(p)?;
        Ok(self.flux_indicator(&fluxes, |f| self.group.class_of(f) == class))
    }

    /// `A_Γ = (d_Γ/|G|) Σ_g χ_Γ(g) A_g`.
    pub fn charge_projector(&self, v: usize, irrep: usize) -> Result<SparseOperator> {
        let family = self.vertex_family(v)?;
        self.charge_projector_from(&family, irrep)
    }

    pub fn charge_projector_from(&self, family: &[SparseOperator], irrep: usize) -> Result<SparseOperator> {
        if irrep >= self.table.num_irreps() {
            return Err(QdError::Argument(format!("irrep {irrep} out of range")));
        }
        let scale = self.table.dims[irrep] as f64 / self.group.order() as f64;
        let terms = self.group.elements().map(|g| (self.table.value(&self.group, irrep, g) * scale, &family[g]));
        SparseOperator::linear_combination(self.dim(), terms)
    }

    pub fn flux_projector_from(&self, family: &[SparseOperator], class: usize) -> Result<SparseOperator> {
        let members = &self.group.conjugacy_classes()[class].members;
        SparseOperator::linear_combination(self.dim(), members.iter().map(|&h| (Complex64::new(1.0, 0.0), &family[h])))
    }

    /// Kitaev's unnormalized vertex term `Σ_g A_g = |G|·A_Γ1`.
    pub fn kitaev_vertex_sum(&self, v: usize) -> Result<SparseOperator> {
        let family = self.vertex_family(v)?;
        SparseOperator::linear_combination(self.dim(), family.iter().map(|a| (Complex64::new(1.0, 0.0), a)))
    }

    /// Six-body projector for anyon `a` on `site`.
    pub fn anyon_projector(&self, site: &Site, model: &AnyonModel, a: &AnyonLabel) -> Result<SparseOperator> {
        let ops = SiteOperators::new(self, site)?;
        ops.anyon_projector(model, a, 0)
    }
}

/// Cached vertex and plaquette families for one site.
#[derive(Debug, Clone)]
pub struct SiteOperators<'a> {
    pub builder: &'a OperatorBuilder,
    pub site: Site,
    pub vertex: Vec<SparseOperator>,
    pub plaquette: Vec<SparseOperator>,
}

impl<'a> SiteOperators<'a> {
    pub fn new(builder: &'a OperatorBuilder, site: &Site) -> Result<Self> {
        Ok(SiteOperators {
            builder,
            site: *site,
            vertex: builder.vertex_family(site.vertex)?,
            plaquette: builder.plaquette_family(site.plaquette)?,
        })
    }

    pub fn charge_projector(&self, irrep: usize) -> Result<SparseOperator> {
        self.builder.charge_projector_from(&self.vertex, irrep)
    }

    pub fn flux_projector(&self, class: usize) -> Result<SparseOperator> {
        self.builder.flux_projector_from(&self.plaquette, class)
    }

    pub fn charge_projectors(&self) -> Result<Vec<SparseOperator>> {
        (0..self.builder.table.num_irreps()).map(|i| self.charge_projector(i)).collect()
    }

    pub fn flux_projectors(&self) -> Result<Vec<SparseOperator>> {
        (0..self.builder.group.num_classes()).map(|c| self.flux_projector(c)).collect()
    }

    /// `P = Σ_{g∈C} Σ_{n∈N_g} (d/|N_g|) χ_g(n) A_n B_g`.
    ///
    /// The charge on `N_g` is carried over from the class representative `r`
    /// through a conjugator `k` with `g = k r k⁻¹`, so `χ_g(n) = χ(k⁻¹ n k)`.
    /// `choice` picks among the possible conjugators; the result does not
    /// depend on it.
    pub fn anyon_projector(&self, model: &AnyonModel, a: &AnyonLabel, choice: usize) -> Result<SparseOperator> {
        let group = &self.builder.group;
        if *group != model.group {
            return Err(QdError::Argument("anyon model belongs to a different group".into()));
        }
        let sector = &model.flux_sectors[a.sector];
        let local = sector.normalizer.as_group();
        let chi = sector.table.character(a.charge);
        let scale = a.charge_dim as f64 / sector.normalizer.order() as f64;
        let members = &group.conjugacy_classes()[a.class].members;
        let mut products = Vec::new();
        for &g in members {
            let ks: Vec<Element> =
                group.elements().filter(|&k| group.conjugate(k, sector.representative) == g).collect();
            let k = ks[choice % ks.len()];
            for (i, &n) in sector.normalizer.elements().iter().enumerate() {
                let coef = chi.at(local, i) * scale;
                products.push((coef, self.vertex[group.conjugate(k, n)].matmul(&self.plaquette[g])?));
            }
        }
        SparseOperator::linear_combination(self.builder.dim(), products.iter().map(|(c, op)| (*c, op)))
    }

    pub fn anyon_projectors(&self, model: &AnyonModel) -> Result<Vec<SparseOperator>> {
        model.anyons.iter().map(|a| self.anyon_projector(model, a, 0)).collect()
    }
}

/// Worst deviation of the flux-permutation lemma for vertex `v` and plaquette `p`.
///
/// If `(p, v)` form a site, checks `B_g = A_{h⁻¹} B_{hgh⁻¹} A_h`; otherwise
/// `B_g = A_{h⁻¹} B_g A_h`, over all pairs `(g, h)`.
pub fn verify_flux_permutation(builder: &OperatorBuilder, p: usize, v: usize) -> Result<f64> {
    let group = builder.group();
    let a = builder.vertex_family(v)?;
    let b = builder.plaquette_family(p)?;
    let same_site = builder.lattice().site_of(v)?.plaquette == p;
    let pairs: Vec<(Element, Element)> = group.elements().flat_map(|g| group.elements().map(move |h| (g, h))).collect();
    let devs: Vec<f64> = pairs
        .par_iter()
        .map(|&(g, h)| {
            let moved = if same_site { group.conjugate(h, g) } else { g };
            let rhs = a[group.inv(h)].matmul(&b[moved])?.matmul(&a[h])?;
            b[g].max_abs_diff(&rhs)
        })
        .collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

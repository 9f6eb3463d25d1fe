//! Square lattice on a torus with oriented edges.
//!
//! Vertex `(r, c)` has index `r·cols + c`; rows grow upward. The horizontal
//! edge leaving `(r, c)` to the right has index `2v`, the vertical edge
//! leaving it upward has index `2v + 1`. A site pairs vertex `v` with the
//! plaquette whose bottom-left corner is `v`.
//!
//! Within a site the six edges are numbered
//!
//! ```text
//!          3
//!      +-------+
//!      |       |
//!    4 |       | 2
//!      |       |
//!  5-->v-------+
//!      ^   1
//!      6
//! ```
//!
//! Edges 1 and 4 are shared by the star of `v` and the loop of the plaquette.
//! The loop is read counterclockwise from `v`, so its flux is
//! `z1 · z2 · z3⁻¹ · z4⁻¹`.

use serde::Serialize;

use crate::error::{QdError, Result};

/// Four star edges of a vertex, in site order 1, 4, 5, 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Star {
    pub vertex: usize,
    pub edges: [usize; 4],
    /// `true` where the edge leaves the vertex.
    pub outgoing: [bool; 4],
}

/// Four loop edges of a plaquette, in traversal order 1, 2, 3, 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Loop {
    pub plaquette: usize,
    /// Vertex the counterclockwise traversal starts from.
    pub start: usize,
    pub edges: [usize; 4],
    /// `true` where the edge orientation agrees with the traversal.
    pub along: [bool; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Site {
    pub vertex: usize,
    pub plaquette: usize,
    /// Lattice edges numbered 1..6 as in the module diagram.
    pub edges: [usize; 6],
    pub shared_edges: [usize; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Right,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub index: usize,
    pub tail: usize,
    pub head: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusLattice {
    rows: usize,
    cols: usize,
}

pub fn build_torus(rows: usize, cols: usize) -> Result<TorusLattice> {
    if rows < 2 || cols < 2 {
        return Err(QdError::Argument(format!("torus needs at least 2 rows and 2 columns, got {rows}x{cols}")));
    }
    rows.checked_mul(cols)
        .and_then(|n| n.checked_mul(2))
        .ok_or_else(|| QdError::Capacity(format!("{rows}x{cols} torus")))?;
    Ok(TorusLattice { rows, cols })
}

impl TorusLattice {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_vertices(&self) -> usize {
        self.rows * self.cols
    }

    pub fn num_plaquettes(&self) -> usize {
        self.rows * self.cols
    }

    pub fn num_edges(&self) -> usize {
        2 * self.rows * self.cols
    }

    pub fn vertex(&self, row: usize, col: usize) -> usize {
        (row % self.rows) * self.cols + col % self.cols
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.cols, v % self.cols)
    }

    fn shift(&self, v: usize, dr: isize, dc: isize) -> usize {
        let (r, c) = self.coords(v);
        let r = (r as isize + dr).rem_euclid(self.rows as isize) as usize;
        let c = (c as isize + dc).rem_euclid(self.cols as isize) as usize;
        self.vertex(r, c)
    }

    fn horizontal(&self, v: usize) -> usize {
        2 * v
    }

    fn vertical(&self, v: usize) -> usize {
        2 * v + 1
    }

    pub fn edge(&self, e: usize) -> Edge {
        let tail = e / 2;
        let (head, direction) = if e.is_multiple_of(2) {
            (self.shift(tail, 0, 1), Direction::Right)
        } else {
            (self.shift(tail, 1, 0), Direction::Up)
        };
        Edge { index: e, tail, head, direction }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.num_vertices() {
            return Err(QdError::Argument(format!("vertex {v} out of range 0..{}", self.num_vertices())));
        }
        Ok(())
    }

    pub fn star(&self, v: usize) -> Result<Star> {
        self.check_vertex(v)?;
        Ok(Star {
            vertex: v,
            edges: [
                self.horizontal(v),
                self.vertical(v),
                self.horizontal(self.shift(v, 0, -1)),
                self.vertical(self.shift(v, -1, 0)),
            ],
            outgoing: [true, true, false, false],
        })
    }

    /// Loop of the plaquette whose bottom-left corner is vertex `p`.
    pub fn plaquette_loop(&self, p: usize) -> Result<Loop> {
        if p >= self.num_plaquettes() {
            return Err(QdError::Argument(format!("plaquette {p} out of range 0..{}", self.num_plaquettes())));
        }
        Ok(Loop {
            plaquette: p,
            start: p,
            edges: [
                self.horizontal(p),
                self.vertical(self.shift(p, 0, 1)),
                self.horizontal(self.shift(p, 1, 0)),
                self.vertical(p),
            ],
            along: [true, true, false, false],
        })
    }

    pub fn site_of(&self, v: usize) -> Result<Site> {
        let star = self.star(v)?;
        let lp = self.plaquette_loop(v)?;
        Ok(Site {
            vertex: v,
            plaquette: v,
            edges: [lp.edges[0], lp.edges[1], lp.edges[2], lp.edges[3], star.edges[2], star.edges[3]],
            shared_edges: [lp.edges[0], lp.edges[3]],
        })
    }

    pub fn sites(&self) -> Vec<Site> {
        (0..self.num_vertices()).map(|v| self.site_of(v).expect("vertex in range")).collect()
    }

    pub fn stars(&self) -> Vec<Star> {
        (0..self.num_vertices()).map(|v| self.star(v).expect("vertex in range")).collect()
    }

    pub fn loops(&self) -> Vec<Loop> {
        (0..self.num_plaquettes()).map(|p| self.plaquette_loop(p).expect("plaquette in range")).collect()
    }

    /// Per-site share of the Hilbert-space dimension, `q^(E / #sites)`.
    pub fn site_share_dimension(&self, qudit_dim: usize) -> f64 {
        (qudit_dim as f64).powf(self.num_edges() as f64 / self.sites().len() as f64)
    }

    pub fn describe(&self) -> LatticeDescription {
        LatticeDescription {
            rows: self.rows,
            cols: self.cols,
            edges: (0..self.num_edges()).map(|e| self.edge(e)).collect(),
            stars: self.stars(),
            loops: self.loops(),
            sites: self.sites(),
        }
    }
}

/// JSON-friendly dump of the lattice.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeDescription {
    pub rows: usize,
    pub cols: usize,
    pub edges: Vec<Edge>,
    pub stars: Vec<Star>,
    pub loops: Vec<Loop>,
    pub sites: Vec<Site>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn counts() {
        let lat = build_torus(2, 2).unwrap();
        assert_eq!((lat.num_vertices(), lat.num_plaquettes(), lat.num_edges()), (4, 4, 8));
        assert!(build_torus(1, 3).is_err());
        assert!(build_torus(3, 0).is_err());
    }

    #[test]
    fn site_at_origin() {
        let lat = build_torus(2, 2).unwrap();
        let s = lat.site_of(0).unwrap();
        assert_eq!((s.vertex, s.plaquette), (0, 0));
        assert_eq!(s.shared_edges.len(), 2);
        assert!(lat.site_of(4).is_err());
    }

    #[test]
    fn site_share_is_two_qudits() {
        let lat = build_torus(3, 3).unwrap();
        assert!((lat.site_share_dimension(6) - 36.0).abs() < 1e-9);
    }

    #[test]
    fn edge_orientation_matches_flags() {
        let lat = build_torus(3, 4).unwrap();
        for st in lat.stars() {
            for (e, out) in st.edges.iter().zip(st.outgoing) {
                let edge = lat.edge(*e);
                assert_eq!(if out { edge.tail } else { edge.head }, st.vertex);
            }
        }
        for lp in lat.loops() {
            // walking the loop from its start returns there
            let mut at = lp.start;
            for (e, along) in lp.edges.iter().zip(lp.along) {
                let edge = lat.edge(*e);
                let (from, to) = if along { (edge.tail, edge.head) } else { (edge.head, edge.tail) };
                assert_eq!(from, at);
                at = to;
            }
            assert_eq!(at, lp.start);
        }
    }

    fn check_lattice(rows: usize, cols: usize) {
        let lat = build_torus(rows, cols).unwrap();
        let e = lat.num_edges();
        let mut in_stars = vec![0; e];
        let mut in_loops = vec![0; e];
        let mut in_sites = vec![0; e];
        for st in lat.stars() {
            assert_eq!(st.edges.iter().collect::<BTreeSet<_>>().len(), 4);
            st.edges.iter().for_each(|&x| in_stars[x] += 1);
        }
        for lp in lat.loops() {
            assert_eq!(lp.edges.iter().collect::<BTreeSet<_>>().len(), 4);
            lp.edges.iter().for_each(|&x| in_loops[x] += 1);
        }
        let sites = lat.sites();
        let mut verts = BTreeSet::new();
        let mut plaqs = BTreeSet::new();
        for s in &sites {
            let star: BTreeSet<_> = lat.star(s.vertex).unwrap().edges.into_iter().collect();
            let lp: BTreeSet<_> = lat.plaquette_loop(s.plaquette).unwrap().edges.into_iter().collect();
            assert_eq!(star.union(&lp).count(), 6);
            let shared: BTreeSet<_> = star.intersection(&lp).copied().collect();
            assert_eq!(shared, s.shared_edges.into_iter().collect());
            assert_eq!(s.edges.iter().collect::<BTreeSet<_>>().len(), 6);
            s.edges.iter().for_each(|&x| in_sites[x] += 1);
            verts.insert(s.vertex);
            plaqs.insert(s.plaquette);
        }
        assert_eq!(verts.len(), lat.num_vertices());
        assert_eq!(plaqs.len(), lat.num_plaquettes());
        assert!(in_stars.iter().all(|&c| c == 2));
        assert!(in_loops.iter().all(|&c| c == 2));
        assert!(in_sites.iter().all(|&c| c == 3));
    }

    #[test]
    fn two_by_two_incidence() {
        check_lattice(2, 2);
    }

    #[test]
    fn outgoing_and_along_edges_are_shared() {
        let lat = build_torus(2, 3).unwrap();
        for s in lat.sites() {
            let st = lat.star(s.vertex).unwrap();
            let lp = lat.plaquette_loop(s.plaquette).unwrap();
            for (i, e) in st.edges.iter().enumerate() {
                if let Some(j) = lp.edges.iter().position(|x| x == e) {
                    assert!(st.outgoing[i]);
                    assert!(j == 0 || j == 3);
                    assert_eq!(lp.along[j], j == 0);
                }
            }
        }
    }

    #[test]
    fn description_serializes() {
        let lat = build_torus(2, 2).unwrap();
        let json = serde_json::to_value(lat.describe()).unwrap();
        assert_eq!(json["edges"].as_array().unwrap().len(), 8);
        assert_eq!(json["edges"][1]["direction"], "up");
        assert_eq!(json["sites"].as_array().unwrap().len(), 4);
    }

    proptest! {
        #[test]
        fn incidence_holds_for_any_torus(rows in 2usize..7, cols in 2usize..7) {
            check_lattice(rows, cols);
        }
    }
}

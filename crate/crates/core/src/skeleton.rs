//! Vertex and edge orbits of a triangulation.
//!
//! Orbits are the equivalence classes of (tetrahedron, vertex) and
//! (tetrahedron, edge) slots under all face gluings: a gluing with
//! permutation `p` on face `f` identifies `(t, v)` with `(t', p(v))` for each
//! vertex `v != f`, and likewise for the three edges lying in the face.
//! Union-find runs in fixed slot order, and orbit ids are assigned by the
//! smallest slot they contain, so ids are reproducible.

use crate::tri::{edge_index, FaceRef, Triangulation, EDGE_VERTS};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("unknown orbit id {0}")]
pub struct UnknownOrbit(pub u32);

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Joins two classes, keeping the smaller root as representative.
    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
    }
}

/// Resolves a union-find into dense orbit ids ordered by smallest slot, and
/// gathers the member slots of each orbit in slot order.
fn resolve(mut uf: UnionFind) -> (Vec<u32>, Vec<Vec<u32>>) {
    let n = uf.parent.len();
    let mut orbit_of = vec![0u32; n];
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut id_of_root = vec![u32::MAX; n];
    for slot in 0..n as u32 {
        let root = uf.find(slot);
        let id = if id_of_root[root as usize] == u32::MAX {
            let id = members.len() as u32;
            id_of_root[root as usize] = id;
            members.push(Vec::new());
            id
        } else {
            id_of_root[root as usize]
        };
        orbit_of[slot as usize] = id;
        members[id as usize].push(slot);
    }
    (orbit_of, members)
}

/// The vertex and edge orbit structure of a triangulation.
pub struct Skeleton {
    vertex_orbit_of: Vec<u32>,
    vertex_members: Vec<Vec<u32>>,
    edge_orbit_of: Vec<u32>,
    edge_members: Vec<Vec<u32>>,
}

/// Computes the skeleton of a valid triangulation.
pub fn compute_skeleton(tri: &Triangulation) -> Skeleton {
    let n = tri.tet_count();
    let mut verts = UnionFind::new(n * 4);
    let mut edges = UnionFind::new(n * 6);
    for t in 0..n as u32 {
        for f in 0..4u8 {
            let Some(g) = tri.gluing(FaceRef::new(t, f)) else {
                continue;
            };
            let u = g.dest_tet;
            for v in 0..4u8 {
                if v == f {
                    continue;
                }
                verts.union(t * 4 + v as u32, u * 4 + g.perm.apply(v) as u32);
            }
            for &(a, b) in &EDGE_VERTS {
                if a == f || b == f {
                    continue;
                }
                let img = edge_index(g.perm.apply(a), g.perm.apply(b));
                edges.union(t * 6 + edge_index(a, b) as u32, u * 6 + img as u32);
            }
        }
    }
    let (vertex_orbit_of, vertex_members) = resolve(verts);
    let (edge_orbit_of, edge_members) = resolve(edges);
    Skeleton {
        vertex_orbit_of,
        vertex_members,
        edge_orbit_of,
        edge_members,
    }
}

impl Skeleton {
    pub fn vertex_orbit_count(&self) -> usize {
        self.vertex_members.len()
    }

    pub fn edge_orbit_count(&self) -> usize {
        self.edge_members.len()
    }

    /// Orbit id of a (tet, vertex) slot.
    pub fn vertex_orbit(&self, tet: u32, vertex: u8) -> u32 {
        self.vertex_orbit_of[tet as usize * 4 + vertex as usize]
    }

    /// Orbit id of a (tet, local edge) slot.
    pub fn edge_orbit(&self, tet: u32, edge: u8) -> u32 {
        self.edge_orbit_of[tet as usize * 6 + edge as usize]
    }

    /// The (tet, vertex) slots of a vertex orbit, in slot order.
    pub fn vertex_orbit_slots(&self, orbit: u32) -> Result<Vec<(u32, u8)>, UnknownOrbit> {
        self.vertex_members
            .get(orbit as usize)
            .map(|m| m.iter().map(|&s| (s / 4, (s % 4) as u8)).collect())
            .ok_or(UnknownOrbit(orbit))
    }

    /// The (tet, local edge) slots of an edge orbit, in slot order.
    pub fn edge_orbit_slots(&self, orbit: u32) -> Result<Vec<(u32, u8)>, UnknownOrbit> {
        self.edge_members
            .get(orbit as usize)
            .map(|m| m.iter().map(|&s| (s / 6, (s % 6) as u8)).collect())
            .ok_or(UnknownOrbit(orbit))
    }

    /// Number of (tet, vertex) incidences in a vertex orbit.
    pub fn vertex_degree(&self, orbit: u32) -> Result<usize, UnknownOrbit> {
        self.vertex_members
            .get(orbit as usize)
            .map(Vec::len)
            .ok_or(UnknownOrbit(orbit))
    }

    /// Number of (tet, edge) incidences in an edge orbit.
    pub fn edge_degree(&self, orbit: u32) -> Result<usize, UnknownOrbit> {
        self.edge_members
            .get(orbit as usize)
            .map(Vec::len)
            .ok_or(UnknownOrbit(orbit))
    }
}

/// Number of vertices of the triangulation.
pub fn vertex_count(tri: &Triangulation) -> usize {
    compute_skeleton(tri).vertex_orbit_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;
    use crate::tri::Gluing;

    fn bipyramid() -> Triangulation {
        let mut gluings = vec![None; 8];
        gluings[3] = Some(Gluing {
            dest_tet: 1,
            perm: Perm4::IDENTITY,
        });
        gluings[7] = Some(Gluing {
            dest_tet: 0,
            perm: Perm4::IDENTITY,
        });
        Triangulation::new(2, gluings).unwrap()
    }

    #[test]
    fn lone_tetrahedron_orbits() {
        let tri = Triangulation::new(1, vec![None; 4]).unwrap();
        let skel = compute_skeleton(&tri);
        assert_eq!(skel.vertex_orbit_count(), 4);
        assert_eq!(skel.edge_orbit_count(), 6);
        for e in 0..6 {
            assert_eq!(skel.edge_degree(e).unwrap(), 1);
        }
        assert!(skel.edge_degree(6).is_err());
    }

    /// Two apexes plus the three shared equatorial vertices.
    #[test]
    fn bipyramid_has_five_vertices() {
        let tri = bipyramid();
        let skel = compute_skeleton(&tri);
        assert_eq!(skel.vertex_orbit_count(), 5);
        // Equatorial edges are shared, apex edges are not: 3 + 3 + 3 = 9.
        assert_eq!(skel.edge_orbit_count(), 9);
    }

    #[test]
    fn orbit_sizes_sum_to_slot_counts() {
        let tri = bipyramid();
        let skel = compute_skeleton(&tri);
        let vsum: usize = (0..skel.vertex_orbit_count() as u32)
            .map(|o| skel.vertex_degree(o).unwrap())
            .sum();
        let esum: usize = (0..skel.edge_orbit_count() as u32)
            .map(|o| skel.edge_degree(o).unwrap())
            .sum();
        assert_eq!(vsum, 8);
        assert_eq!(esum, 12);
    }

    #[test]
    fn orbit_counts_invariant_under_relabelling() {
        let tri = bipyramid();
        let base = compute_skeleton(&tri);
        for idx in [1u8, 7, 13, 23] {
            let relab = tri.relabelled(
                &[1, 0],
                &[Perm4::from_index(idx).unwrap(), Perm4::from_index(23 - idx).unwrap()],
            );
            let skel = compute_skeleton(&relab);
            assert_eq!(skel.vertex_orbit_count(), base.vertex_orbit_count());
            assert_eq!(skel.edge_orbit_count(), base.edge_orbit_count());
        }
    }
}

//! The four bistellar moves.
//!
//! A 2-3 move replaces two distinct tetrahedra sharing a face by three
//! around a new central edge; 3-2 is its inverse, applied at an internal
//! edge of degree three with three distinct tetrahedra. A 1-4 move cones a
//! tetrahedron from its barycentre; 4-1 is its inverse, applied at a vertex
//! of degree four whose star is the standard one.
//!
//! Moves are pure: they never mutate their input. New tetrahedra always
//! receive the highest indices of the result (surviving tetrahedra are
//! compacted in order first), which only affects intermediate labels, never
//! the canonical signature.

use crate::perm::Perm4;
use crate::skeleton::{compute_skeleton, Skeleton};
use crate::tri::{FaceRef, Gluing, Triangulation, EDGE_VERTS};
use thiserror::Error;

/// The move families, named by the tetrahedron exchange they perform.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum MoveKind {
    M23,
    M32,
    M14,
    M41,
}

impl MoveKind {
    pub const ALL: [MoveKind; 4] = [MoveKind::M23, MoveKind::M32, MoveKind::M14, MoveKind::M41];

    /// Change in tetrahedron count.
    pub fn tet_delta(&self) -> i32 {
        match self {
            MoveKind::M23 => 1,
            MoveKind::M32 => -1,
            MoveKind::M14 => 3,
            MoveKind::M41 => -3,
        }
    }

    /// Change in vertex count.
    pub fn vertex_delta(&self) -> i32 {
        match self {
            MoveKind::M23 | MoveKind::M32 => 0,
            MoveKind::M14 => 1,
            MoveKind::M41 => -1,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MoveKind::M23 => "23",
            MoveKind::M32 => "32",
            MoveKind::M14 => "14",
            MoveKind::M41 => "41",
        }
    }

    pub fn parse(s: &str) -> Option<MoveKind> {
        match s {
            "23" => Some(MoveKind::M23),
            "32" => Some(MoveKind::M32),
            "14" => Some(MoveKind::M14),
            "41" => Some(MoveKind::M41),
            _ => None,
        }
    }
}

/// A subset of the four move kinds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MoveSet(u8);

impl MoveSet {
    pub const EXCHANGE: MoveSet = MoveSet(0b0011); // 2-3 and 3-2
    pub const CONE: MoveSet = MoveSet(0b1100); // 1-4 and 4-1
    pub const ALL: MoveSet = MoveSet(0b1111);

    pub fn empty() -> MoveSet {
        MoveSet(0)
    }

    pub fn with(mut self, kind: MoveKind) -> MoveSet {
        self.0 |= 1 << Self::bit(kind);
        self
    }

    pub fn contains(&self, kind: MoveKind) -> bool {
        self.0 & (1 << Self::bit(kind)) != 0
    }

    pub fn kinds(&self) -> impl Iterator<Item = MoveKind> + '_ {
        MoveKind::ALL.into_iter().filter(|k| self.contains(*k))
    }

    fn bit(kind: MoveKind) -> u8 {
        match kind {
            MoveKind::M23 => 0,
            MoveKind::M32 => 1,
            MoveKind::M14 => 2,
            MoveKind::M41 => 3,
        }
    }

    /// Parses a comma-separated list of kind labels, e.g. `23,32`.
    pub fn parse(s: &str) -> Option<MoveSet> {
        let mut set = MoveSet::empty();
        for tok in s.split(',') {
            set = set.with(MoveKind::parse(tok.trim())?);
        }
        Some(set)
    }
}

impl std::fmt::Display for MoveSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels: Vec<&str> = self.kinds().map(|k| k.label()).collect();
        f.write_str(&labels.join(","))
    }
}

/// Where a move applies: a face for 2-3, an edge orbit for 3-2, a
/// tetrahedron for 1-4, a vertex orbit for 4-1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MoveLocus {
    Face(FaceRef),
    EdgeOrbit(u32),
    Tet(u32),
    VertexOrbit(u32),
}

/// One applicable move on one triangulation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MoveHandle {
    pub kind: MoveKind,
    pub locus: MoveLocus,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("move {kind:?} is not applicable at {locus:?}")]
    NotApplicable { kind: MoveKind, locus: MoveLocus },
    #[error("locus {locus:?} does not match move kind {kind:?}")]
    LocusMismatch { kind: MoveKind, locus: MoveLocus },
}

/// Enumerates every applicable move of the requested kinds, in a fixed
/// order: kinds in the order 2-3, 3-2, 1-4, 4-1, and ascending locus index
/// within each kind.
pub fn enumerate_moves(tri: &Triangulation, kinds: MoveSet) -> Vec<MoveHandle> {
    let skel = if kinds.contains(MoveKind::M32) || kinds.contains(MoveKind::M41) {
        Some(compute_skeleton(tri))
    } else {
        None
    };
    enumerate_with_skeleton(tri, kinds, skel.as_ref())
}

fn enumerate_with_skeleton(
    tri: &Triangulation,
    kinds: MoveSet,
    skel: Option<&Skeleton>,
) -> Vec<MoveHandle> {
    let mut out = Vec::new();
    if kinds.contains(MoveKind::M23) {
        for t in 0..tri.tet_count() as u32 {
            for f in 0..4u8 {
                let face = FaceRef::new(t, f);
                if let Some(g) = tri.gluing(face) {
                    // One handle per internal face: keep the smaller side.
                    if g.dest_tet != t && face < g.dest_face(f) {
                        out.push(MoveHandle {
                            kind: MoveKind::M23,
                            locus: MoveLocus::Face(face),
                        });
                    }
                }
            }
        }
    }
    if kinds.contains(MoveKind::M32) {
        let skel = skel.expect("skeleton supplied for 3-2 enumeration");
        for orbit in 0..skel.edge_orbit_count() as u32 {
            if prepare_32(tri, skel, orbit).is_some() {
                out.push(MoveHandle {
                    kind: MoveKind::M32,
                    locus: MoveLocus::EdgeOrbit(orbit),
                });
            }
        }
    }
    if kinds.contains(MoveKind::M14) {
        for t in 0..tri.tet_count() as u32 {
            out.push(MoveHandle {
                kind: MoveKind::M14,
                locus: MoveLocus::Tet(t),
            });
        }
    }
    if kinds.contains(MoveKind::M41) {
        let skel = skel.expect("skeleton supplied for 4-1 enumeration");
        for orbit in 0..skel.vertex_orbit_count() as u32 {
            if prepare_41(tri, skel, orbit).is_some() {
                out.push(MoveHandle {
                    kind: MoveKind::M41,
                    locus: MoveLocus::VertexOrbit(orbit),
                });
            }
        }
    }
    out
}

/// Applies a move, returning the new triangulation.
pub fn apply_move(tri: &Triangulation, handle: &MoveHandle) -> Result<Triangulation, MoveError> {
    let not_applicable = || MoveError::NotApplicable {
        kind: handle.kind,
        locus: handle.locus,
    };
    match (handle.kind, handle.locus) {
        (MoveKind::M23, MoveLocus::Face(face)) => {
            let g = tri.gluing(face).ok_or_else(not_applicable)?;
            if g.dest_tet == face.tet {
                return Err(not_applicable());
            }
            Ok(apply_23(tri, face, g))
        }
        (MoveKind::M32, MoveLocus::EdgeOrbit(orbit)) => {
            let skel = compute_skeleton(tri);
            let cfg = prepare_32(tri, &skel, orbit).ok_or_else(not_applicable)?;
            Ok(apply_32(tri, &cfg))
        }
        (MoveKind::M14, MoveLocus::Tet(t)) => {
            if (t as usize) < tri.tet_count() {
                Ok(apply_14(tri, t))
            } else {
                Err(not_applicable())
            }
        }
        (MoveKind::M41, MoveLocus::VertexOrbit(orbit)) => {
            let skel = compute_skeleton(tri);
            let cfg = prepare_41(tri, &skel, orbit).ok_or_else(not_applicable)?;
            Ok(apply_41(tri, &cfg))
        }
        (kind, locus) => Err(MoveError::LocusMismatch { kind, locus }),
    }
}

/// Enumerates and applies every move in one pass, sharing one skeleton.
/// Children appear in `enumerate_moves` order.
pub fn neighbors(tri: &Triangulation, kinds: MoveSet) -> Vec<(MoveHandle, Triangulation)> {
    let skel = if kinds.contains(MoveKind::M32) || kinds.contains(MoveKind::M41) {
        Some(compute_skeleton(tri))
    } else {
        None
    };
    let handles = enumerate_with_skeleton(tri, kinds, skel.as_ref());
    handles
        .into_iter()
        .map(|h| {
            let child = match (h.kind, h.locus) {
                (MoveKind::M23, MoveLocus::Face(face)) => {
                    let g = tri.gluing(face).expect("enumerated face is glued");
                    apply_23(tri, face, g)
                }
                (MoveKind::M32, MoveLocus::EdgeOrbit(orbit)) => {
                    let cfg = prepare_32(tri, skel.as_ref().unwrap(), orbit)
                        .expect("enumerated edge is applicable");
                    apply_32(tri, &cfg)
                }
                (MoveKind::M14, MoveLocus::Tet(t)) => apply_14(tri, t),
                (MoveKind::M41, MoveLocus::VertexOrbit(orbit)) => {
                    let cfg = prepare_41(tri, skel.as_ref().unwrap(), orbit)
                        .expect("enumerated vertex is applicable");
                    apply_41(tri, &cfg)
                }
                _ => unreachable!("enumerate produces matching loci"),
            };
            (h, child)
        })
        .collect()
}

/// Builds the index map that drops `removed` tetrahedra (sorted) and
/// compacts the rest in order; removed entries map to `u32::MAX`.
fn compaction(old_count: usize, removed: &[u32]) -> (Vec<u32>, usize) {
    let mut map = vec![0u32; old_count];
    let mut next = 0u32;
    for t in 0..old_count as u32 {
        if removed.contains(&t) {
            map[t as usize] = u32::MAX;
        } else {
            map[t as usize] = next;
            next += 1;
        }
    }
    (map, next as usize)
}

/// An outer face of the removed region: where it sits in the new
/// triangulation and the vertex map from new labels to old labels.
#[derive(Clone, Copy)]
struct OuterSlot {
    new_face: FaceRef,
    /// New tetrahedron labels -> old tetrahedron labels.
    to_old: Perm4,
}

/// Rewires the boundary of a removed region. `outer` maps each old face on
/// the boundary of the region to its replacement; `map` is the compaction of
/// surviving tetrahedra; gluings between two outer faces are composed.
fn reglue(
    tri: &Triangulation,
    gluings: &mut [Option<Gluing>],
    outer: &[(FaceRef, OuterSlot)],
    map: &[u32],
) {
    let lookup = |face: FaceRef| -> Option<&OuterSlot> {
        outer.iter().find(|(old, _)| *old == face).map(|(_, s)| s)
    };
    for (old_face, slot) in outer {
        let src_slot = slot.new_face.tet as usize * 4 + slot.new_face.face as usize;
        if gluings[src_slot].is_some() {
            continue; // already set from the partner side
        }
        match tri.gluing(*old_face) {
            None => {} // boundary stays boundary
            Some(g) => {
                let old_dest = g.dest_face(old_face.face);
                match lookup(old_dest) {
                    Some(dest_slot) => {
                        // Both sides are on the region boundary.
                        let perm = dest_slot
                            .to_old
                            .inverse()
                            .compose(&g.perm.compose(&slot.to_old));
                        let dst_slot = dest_slot.new_face.tet as usize * 4
                            + dest_slot.new_face.face as usize;
                        gluings[src_slot] = Some(Gluing {
                            dest_tet: dest_slot.new_face.tet,
                            perm,
                        });
                        gluings[dst_slot] = Some(Gluing {
                            dest_tet: slot.new_face.tet,
                            perm: perm.inverse(),
                        });
                    }
                    None => {
                        let perm = g.perm.compose(&slot.to_old);
                        let nd = map[g.dest_tet as usize];
                        let dst_slot = nd as usize * 4 + perm.apply(slot.new_face.face) as usize;
                        gluings[src_slot] = Some(Gluing {
                            dest_tet: nd,
                            perm,
                        });
                        gluings[dst_slot] = Some(Gluing {
                            dest_tet: slot.new_face.tet,
                            perm: perm.inverse(),
                        });
                    }
                }
            }
        }
    }
}

/// Copies the gluings among surviving tetrahedra into the new table.
fn copy_survivors(tri: &Triangulation, gluings: &mut [Option<Gluing>], map: &[u32]) {
    for t in 0..tri.tet_count() as u32 {
        if map[t as usize] == u32::MAX {
            continue;
        }
        for f in 0..4u8 {
            if let Some(g) = tri.gluing(FaceRef::new(t, f)) {
                if map[g.dest_tet as usize] != u32::MAX {
                    gluings[map[t as usize] as usize * 4 + f as usize] = Some(Gluing {
                        dest_tet: map[g.dest_tet as usize],
                        perm: g.perm,
                    });
                }
            }
        }
    }
}

/// 2-3 move across `face` (gluing `g`, two distinct tetrahedra).
///
/// With the shared face's vertices in the source tetrahedron sorted as
/// `u0 < u1 < u2` and apexes `a = face.face`, `b = g.perm(a)`, the three new
/// tetrahedra are indexed `i = 0,1,2` with local labels
/// `(0,1,2,3) = (e_{i+1}, e_{i+2}, apex_a, apex_b)` over the equator
/// `e_i = u_i`.
fn apply_23(tri: &Triangulation, face: FaceRef, g: Gluing) -> Triangulation {
    let ta = face.tet;
    let tb = g.dest_tet;
    let apex_a = face.face;
    let apex_b = g.perm.apply(apex_a);
    let u: Vec<u8> = (0..4u8).filter(|v| *v != apex_a).collect();
    let w: Vec<u8> = u.iter().map(|v| g.perm.apply(*v)).collect();

    let (map, survivors) = compaction(tri.tet_count(), &{
        let mut r = [ta, tb];
        r.sort_unstable();
        r.to_vec()
    });
    let base = survivors as u32;
    let new_count = survivors + 3;
    let mut gluings: Vec<Option<Gluing>> = vec![None; new_count * 4];
    copy_survivors(tri, &mut gluings, &map);

    // Internal gluings: face 0 of the i-th new tetrahedron meets face 1 of
    // the next one around the central edge, swapping the two equator labels.
    let swap01 = Perm4::from_image([1, 0, 2, 3]);
    for i in 0..3u32 {
        let j = (i + 1) % 3;
        gluings[(base + i) as usize * 4] = Some(Gluing {
            dest_tet: base + j,
            perm: swap01,
        });
        gluings[(base + j) as usize * 4 + 1] = Some(Gluing {
            dest_tet: base + i,
            perm: swap01,
        });
    }

    // Outer faces: face 3 of new tetrahedron i was the source face opposite
    // u_i; face 2 was the destination face opposite w_i.
    let mut outer: Vec<(FaceRef, OuterSlot)> = Vec::with_capacity(6);
    for i in 0..3usize {
        let i1 = (i + 1) % 3;
        let i2 = (i + 2) % 3;
        let mut to_old_a = [0u8; 4];
        to_old_a[0] = u[i1];
        to_old_a[1] = u[i2];
        to_old_a[2] = apex_a;
        to_old_a[3] = u[i];
        outer.push((
            FaceRef::new(ta, u[i]),
            OuterSlot {
                new_face: FaceRef::new(base + i as u32, 3),
                to_old: Perm4::from_image(to_old_a),
            },
        ));
        let mut to_old_b = [0u8; 4];
        to_old_b[0] = w[i1];
        to_old_b[1] = w[i2];
        to_old_b[2] = w[i];
        to_old_b[3] = apex_b;
        outer.push((
            FaceRef::new(tb, w[i]),
            OuterSlot {
                new_face: FaceRef::new(base + i as u32, 2),
                to_old: Perm4::from_image(to_old_b),
            },
        ));
    }
    reglue(tri, &mut gluings, &outer, &map);
    Triangulation::new_unchecked(gluings)
}

/// The walk around a degree-3 edge: tetrahedra in cycle order with the
/// central edge endpoints and the two off-edge vertices oriented
/// consistently.
struct Cycle32 {
    tets: [u32; 3],
    /// Central edge endpoints in each tetrahedron's labels.
    x: [u8; 3],
    y: [u8; 3],
    /// Off-edge vertices: leaving tetrahedron k through the face opposite
    /// `alpha[k]` reaches tetrahedron k+1; `beta[k]` is the shared one.
    alpha: [u8; 3],
    beta: [u8; 3],
}

fn prepare_32(tri: &Triangulation, skel: &Skeleton, orbit: u32) -> Option<Cycle32> {
    let slots = skel.edge_orbit_slots(orbit).ok()?;
    if slots.len() != 3 {
        return None;
    }
    if slots[0].0 == slots[1].0 || slots[0].0 == slots[2].0 || slots[1].0 == slots[2].0 {
        return None;
    }
    let (t0, e0) = slots[0];
    let (a0, b0) = EDGE_VERTS[e0 as usize];
    let mut tets = [t0; 3];
    let mut x = [a0; 3];
    let mut y = [b0; 3];
    let mut alpha = [0u8; 3];
    let mut beta = [0u8; 3];
    let others: Vec<u8> = (0..4u8).filter(|v| *v != a0 && *v != b0).collect();
    alpha[0] = others[0];
    beta[0] = others[1];
    for k in 0..3 {
        let g = tri.gluing(FaceRef::new(tets[k], alpha[k]))?;
        let nx = g.perm.apply(x[k]);
        let ny = g.perm.apply(y[k]);
        let nbeta = g.perm.apply(alpha[k]);
        let nalpha = g.perm.apply(beta[k]);
        if k == 2 {
            // Closure: back to the start without flipping the edge.
            if g.dest_tet != t0 || nx != x[0] || ny != y[0] || nalpha != alpha[0] {
                return None;
            }
        } else {
            tets[k + 1] = g.dest_tet;
            x[k + 1] = nx;
            y[k + 1] = ny;
            alpha[k + 1] = nalpha;
            beta[k + 1] = nbeta;
        }
    }
    if tets[1] == tets[2] || tets[1] == t0 || tets[2] == t0 {
        return None;
    }
    Some(Cycle32 {
        tets,
        x,
        y,
        alpha,
        beta,
    })
}

/// 3-2 move: collapse the three tetrahedra around a degree-3 edge into two
/// glued along the equator face. New tetrahedron labels: `(0,1,2)` are the
/// equator vertices `e_0,e_1,e_2`, label 3 the apex.
fn apply_32(tri: &Triangulation, cfg: &Cycle32) -> Triangulation {
    let mut removed = cfg.tets.to_vec();
    removed.sort_unstable();
    let (map, survivors) = compaction(tri.tet_count(), &removed);
    let base = survivors as u32; // T_a = base (x-side apex), T_b = base+1
    let new_count = survivors + 2;
    let mut gluings: Vec<Option<Gluing>> = vec![None; new_count * 4];
    copy_survivors(tri, &mut gluings, &map);

    gluings[base as usize * 4 + 3] = Some(Gluing {
        dest_tet: base + 1,
        perm: Perm4::IDENTITY,
    });
    gluings[(base + 1) as usize * 4 + 3] = Some(Gluing {
        dest_tet: base,
        perm: Perm4::IDENTITY,
    });

    // In tetrahedron k of the cycle the equator vertices e_{k+1}, e_{k+2}
    // are alpha_k, beta_k. The face opposite y_k becomes face k of T_a, the
    // face opposite x_k becomes face k of T_b.
    let mut outer: Vec<(FaceRef, OuterSlot)> = Vec::with_capacity(6);
    for k in 0..3usize {
        let k1 = (k + 1) % 3;
        let k2 = (k + 2) % 3;
        let mut to_old_a = [0u8; 4];
        to_old_a[k1] = cfg.alpha[k];
        to_old_a[k2] = cfg.beta[k];
        to_old_a[3] = cfg.x[k];
        to_old_a[k] = cfg.y[k];
        outer.push((
            FaceRef::new(cfg.tets[k], cfg.y[k]),
            OuterSlot {
                new_face: FaceRef::new(base, k as u8),
                to_old: Perm4::from_image(to_old_a),
            },
        ));
        let mut to_old_b = [0u8; 4];
        to_old_b[k1] = cfg.alpha[k];
        to_old_b[k2] = cfg.beta[k];
        to_old_b[3] = cfg.y[k];
        to_old_b[k] = cfg.x[k];
        outer.push((
            FaceRef::new(cfg.tets[k], cfg.x[k]),
            OuterSlot {
                new_face: FaceRef::new(base + 1, k as u8),
                to_old: Perm4::from_image(to_old_b),
            },
        ));
    }
    reglue(tri, &mut gluings, &outer, &map);
    Triangulation::new_unchecked(gluings)
}

/// 1-4 move: cone tetrahedron `t` from its barycentre. New tetrahedron `i`
/// keeps the labels of `t` except that label `i` is the barycentre; its
/// face `i` is the old outer face `i`.
fn apply_14(tri: &Triangulation, t: u32) -> Triangulation {
    let (map, survivors) = compaction(tri.tet_count(), &[t]);
    let base = survivors as u32;
    let new_count = survivors + 4;
    let mut gluings: Vec<Option<Gluing>> = vec![None; new_count * 4];
    copy_survivors(tri, &mut gluings, &map);

    for i in 0..4u8 {
        for j in 0..4u8 {
            if i == j {
                continue;
            }
            // Barycentre label i in piece i matches label j in piece j.
            gluings[(base + i as u32) as usize * 4 + j as usize] = Some(Gluing {
                dest_tet: base + j as u32,
                perm: Perm4::transposition(i, j),
            });
        }
    }

    let outer: Vec<(FaceRef, OuterSlot)> = (0..4u8)
        .map(|i| {
            (
                FaceRef::new(t, i),
                OuterSlot {
                    new_face: FaceRef::new(base + i as u32, i),
                    to_old: Perm4::IDENTITY,
                },
            )
        })
        .collect();
    reglue(tri, &mut gluings, &outer, &map);
    Triangulation::new_unchecked(gluings)
}

/// The standard degree-4 star around a vertex, checked against the model of
/// a coned tetrahedron.
struct Star41 {
    /// Tetrahedron playing model piece k, for k = 0..4.
    tets: [u32; 4],
    /// Its vertex slot in the orbit (the cone point).
    apex: [u8; 4],
    /// Vertex map from that tetrahedron's labels to model labels.
    to_model: [Perm4; 4],
}

fn prepare_41(tri: &Triangulation, skel: &Skeleton, orbit: u32) -> Option<Star41> {
    let slots = skel.vertex_orbit_slots(orbit).ok()?;
    if slots.len() != 4 {
        return None;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if slots[i].0 == slots[j].0 {
                return None;
            }
        }
    }

    // Anchor: the first slot becomes model piece 0 with its off-apex
    // vertices mapped in ascending order.
    let (t0, v0) = slots[0];
    let mut img = [0u8; 4];
    img[v0 as usize] = 0;
    let mut next = 1u8;
    for v in 0..4u8 {
        if v != v0 {
            img[v as usize] = next;
            next += 1;
        }
    }
    let phi0 = Perm4::from_image(img);

    let mut tets = [u32::MAX; 4];
    let mut apex = [0u8; 4];
    let mut to_model = [Perm4::IDENTITY; 4];
    let mut assigned = [false; 4];
    tets[0] = t0;
    apex[0] = v0;
    to_model[0] = phi0;
    assigned[0] = true;

    let slot_apex = |tet: u32| -> Option<u8> {
        slots
            .iter()
            .find(|(t, _)| *t == tet)
            .map(|(_, v)| *v)
    };

    // Process the twelve inner faces; every gluing must match the model,
    // where piece k meets piece m across the transposition (k m).
    let mut queue = vec![0usize];
    let mut seen_tets = vec![t0];
    while let Some(ki) = queue.pop() {
        let (t, v, phi) = (tets[ki], apex[ki], to_model[ki]);
        let k = ki as u8;
        for w in 0..4u8 {
            if w == v {
                continue; // outer face
            }
            let g = tri.gluing(FaceRef::new(t, w))?;
            let u = g.dest_tet;
            let uv = slot_apex(u)?;
            if g.perm.apply(v) != uv {
                return None;
            }
            let m = phi.apply(w);
            if m == k {
                return None;
            }
            let phi_u = Perm4::transposition(k, m)
                .compose(&phi)
                .compose(&g.perm.inverse());
            if assigned[m as usize] {
                if tets[m as usize] != u || to_model[m as usize] != phi_u {
                    return None;
                }
            } else {
                if seen_tets.contains(&u) && tets.iter().position(|x| *x == u) != Some(m as usize) {
                    return None;
                }
                tets[m as usize] = u;
                apex[m as usize] = uv;
                to_model[m as usize] = phi_u;
                assigned[m as usize] = true;
                seen_tets.push(u);
                queue.push(m as usize);
            }
        }
    }
    if !assigned.iter().all(|a| *a) {
        return None;
    }
    Some(Star41 {
        tets,
        apex,
        to_model,
    })
}

/// 4-1 move: replace the standard star around a degree-4 vertex by a single
/// tetrahedron whose face k is the outer face of model piece k.
fn apply_41(tri: &Triangulation, cfg: &Star41) -> Triangulation {
    let mut removed = cfg.tets.to_vec();
    removed.sort_unstable();
    let (map, survivors) = compaction(tri.tet_count(), &removed);
    let base = survivors as u32;
    let new_count = survivors + 1;
    let mut gluings: Vec<Option<Gluing>> = vec![None; new_count * 4];
    copy_survivors(tri, &mut gluings, &map);

    let outer: Vec<(FaceRef, OuterSlot)> = (0..4usize)
        .map(|k| {
            (
                FaceRef::new(cfg.tets[k], cfg.apex[k]),
                OuterSlot {
                    new_face: FaceRef::new(base, k as u8),
                    to_old: cfg.to_model[k].inverse(),
                },
            )
        })
        .collect();
    reglue(tri, &mut gluings, &outer, &map);
    Triangulation::new_unchecked(gluings)
}

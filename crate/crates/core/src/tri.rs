//! The combinatorial data model: generalized triangulations given by a dense
//! face-gluing table.
//!
//! A triangulation is `N` abstract tetrahedra plus, for each of the `4N`
//! faces, either a boundary marker or the gluing to another face. Face `i` of
//! a tetrahedron is the face opposite vertex `i`. A gluing stores the
//! destination tetrahedron and the vertex permutation from source labels to
//! destination labels; the destination face index is the image of the source
//! face index under that permutation.

use crate::perm::Perm4;
use thiserror::Error;

/// One face of one tetrahedron.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceRef {
    pub tet: u32,
    pub face: u8,
}

impl FaceRef {
    pub fn new(tet: u32, face: u8) -> FaceRef {
        FaceRef { tet, face }
    }

    fn slot(&self) -> usize {
        self.tet as usize * 4 + self.face as usize
    }
}

impl std::fmt::Debug for FaceRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.tet, self.face)
    }
}

impl std::fmt::Display for FaceRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "tetrahedron {} face {}", self.tet, self.face)
    }
}

/// A face gluing: destination tetrahedron plus the vertex map from the source
/// tetrahedron's labels to the destination's.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gluing {
    pub dest_tet: u32,
    pub perm: Perm4,
}

impl Gluing {
    /// The destination face: the source face index mapped through the perm.
    pub fn dest_face(&self, src_face: u8) -> FaceRef {
        FaceRef::new(self.dest_tet, self.perm.apply(src_face))
    }
}

/// First violated invariant found by [`Triangulation::validate`].
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("gluing at {0} points at a tetrahedron out of range")]
    DestOutOfRange(FaceRef),
    #[error("gluing permutation at {0} is not a bijection")]
    BadPerm(FaceRef),
    #[error("face {0} is glued to itself")]
    SelfGluedFace(FaceRef),
    #[error("gluings at {0} and its partner do not form an involution")]
    InvolutionBroken(FaceRef),
}

/// An immutable generalized triangulation.
///
/// The gluing table has `4N` slots indexed by `(tet, face)`; `None` marks a
/// boundary face. All operations are pure reads; moves build new values.
#[derive(Clone, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<Option<Gluing>>,
}

impl Triangulation {
    /// Builds a triangulation and checks every invariant.
    pub fn new(tet_count: usize, gluings: Vec<Option<Gluing>>) -> Result<Triangulation, Violation> {
        assert_eq!(gluings.len(), tet_count * 4, "gluing table must have 4N slots");
        let tri = Triangulation { gluings };
        tri.validate()?;
        Ok(tri)
    }

    /// Builds without validating. Used by the move and codec internals which
    /// construct tables that are valid by construction; debug builds still
    /// check.
    pub(crate) fn new_unchecked(gluings: Vec<Option<Gluing>>) -> Triangulation {
        let tri = Triangulation { gluings };
        debug_assert_eq!(tri.validate(), Ok(()));
        tri
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len() / 4
    }

    /// The gluing at a face, or `None` for a boundary face.
    pub fn gluing(&self, face: FaceRef) -> Option<Gluing> {
        self.gluings[face.slot()]
    }

    pub fn is_closed(&self) -> bool {
        self.gluings.iter().all(|g| g.is_some())
    }

    /// Checks all invariants, reporting the first violated one.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.tet_count() as u32;
        for t in 0..n {
            for f in 0..4u8 {
                let src = FaceRef::new(t, f);
                let Some(g) = self.gluings[src.slot()] else {
                    continue;
                };
                if g.dest_tet >= n {
                    return Err(Violation::DestOutOfRange(src));
                }
                if !g.perm.is_valid() {
                    return Err(Violation::BadPerm(src));
                }
                let dst = g.dest_face(f);
                if dst == src {
                    return Err(Violation::SelfGluedFace(src));
                }
                match self.gluings[dst.slot()] {
                    Some(back)
                        if back.dest_tet == t
                            && back.perm == g.perm.inverse()
                            && back.dest_face(dst.face) == src => {}
                    _ => return Err(Violation::InvolutionBroken(src)),
                }
            }
        }
        Ok(())
    }

    /// True if every tetrahedron is reachable from tetrahedron 0 through
    /// gluings.
    pub fn is_connected(&self) -> bool {
        let n = self.tet_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = stack.pop() {
            for f in 0..4u8 {
                if let Some(g) = self.gluings[t * 4 + f as usize] {
                    let u = g.dest_tet as usize;
                    if !seen[u] {
                        seen[u] = true;
                        count += 1;
                        stack.push(u);
                    }
                }
            }
        }
        count == n
    }

    /// A combinatorially isomorphic copy: tetrahedron `t` becomes
    /// `tet_order[t]` and its vertex labels are mapped through `vmaps[t]`.
    pub fn relabelled(&self, tet_order: &[u32], vmaps: &[Perm4]) -> Triangulation {
        let n = self.tet_count();
        assert_eq!(tet_order.len(), n);
        assert_eq!(vmaps.len(), n);
        let mut gluings = vec![None; n * 4];
        for t in 0..n {
            let nt = tet_order[t];
            for f in 0..4u8 {
                if let Some(g) = self.gluings[t * 4 + f as usize] {
                    let u = g.dest_tet as usize;
                    let nf = vmaps[t].apply(f);
                    // New-label gluing: undo the source relabelling, apply
                    // the old gluing, then relabel the destination.
                    let perm = vmaps[u].compose(&g.perm).compose(&vmaps[t].inverse());
                    gluings[nt as usize * 4 + nf as usize] = Some(Gluing {
                        dest_tet: tet_order[u],
                        perm,
                    });
                }
            }
        }
        Triangulation::new_unchecked(gluings)
    }
}

impl std::fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Triangulation({} tets)", self.tet_count())?;
        for t in 0..self.tet_count() as u32 {
            write!(f, "  {}: ", t)?;
            for face in 0..4u8 {
                match self.gluing(FaceRef::new(t, face)) {
                    None => write!(f, "∂ ")?,
                    Some(g) => write!(f, "{}{:?} ", g.dest_tet, g.perm)?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Local edges of a tetrahedron: the six vertex pairs in lexicographic order.
pub const EDGE_VERTS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the local edge with endpoints `{a, b}`.
pub fn edge_index(a: u8, b: u8) -> u8 {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not an edge: ({a},{b})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two tetrahedra glued along one face with the identity map; the other
    /// seven faces are boundary. This is the worked bipyramid configuration.
    pub(crate) fn bipyramid() -> Triangulation {
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
    fn bipyramid_is_valid() {
        let tri = bipyramid();
        assert_eq!(tri.tet_count(), 2);
        assert!(!tri.is_closed());
        assert!(tri.is_connected());
    }

    #[test]
    fn lone_tetrahedron_is_valid() {
        let tri = Triangulation::new(1, vec![None; 4]).unwrap();
        assert!(tri.validate().is_ok());
        assert!(!tri.is_closed());
    }

    #[test]
    fn broken_involution_is_reported() {
        // a -> b with p, b -> a with q != p^-1.
        let mut gluings = vec![None; 8];
        gluings[3] = Some(Gluing {
            dest_tet: 1,
            perm: Perm4::IDENTITY,
        });
        gluings[7] = Some(Gluing {
            dest_tet: 0,
            perm: Perm4::from_index(6).unwrap(), // (1,0,2,3) != identity^-1
        });
        let tri = Triangulation { gluings };
        assert!(matches!(tri.validate(), Err(Violation::InvolutionBroken(_))));
    }

    #[test]
    fn self_glued_face_is_rejected() {
        let mut gluings = vec![None; 4];
        // Face 0 glued to itself: perm fixing 0 with dest the same tet.
        gluings[0] = Some(Gluing {
            dest_tet: 0,
            perm: Perm4::from_image([0, 2, 1, 3]),
        });
        let tri = Triangulation { gluings };
        assert!(matches!(tri.validate(), Err(Violation::SelfGluedFace(_))));
    }

    #[test]
    fn relabelling_preserves_validity() {
        let tri = bipyramid();
        let relab = tri.relabelled(
            &[1, 0],
            &[
                Perm4::from_index(17).unwrap(),
                Perm4::from_index(9).unwrap(),
            ],
        );
        assert_eq!(relab.validate(), Ok(()));
        assert_eq!(relab.tet_count(), 2);
    }
}

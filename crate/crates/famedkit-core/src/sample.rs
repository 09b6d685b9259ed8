//! Built-in example triangulations.

use alloc::vec;

use crate::perm::Perm4;
use crate::tri::{IdealTriangulation, Slot};

/// The ordered two-tetrahedron triangulation of the figure-eight knot
/// complement (Thurston's triangulation). Tetrahedron 0 plays the role of
/// the positively signed tetrahedron.
pub fn figure_eight() -> IdealTriangulation {
    IdealTriangulation::from_pairs(
        2,
        &[
            (Slot::new(0, 3), 1, Perm4([0, 2, 3, 1])),
            (Slot::new(0, 0), 1, Perm4([2, 0, 1, 3])),
            (Slot::new(0, 2), 1, Perm4([1, 2, 0, 3])),
            (Slot::new(0, 1), 1, Perm4([0, 3, 1, 2])),
        ],
    )
    .expect("figure-eight gluing table is valid")
}

/// The same triangulation with vertices 1 and 2 of tetrahedron 0 swapped,
/// which breaks the ordering. Isomorphic to [`figure_eight`].
pub fn figure_eight_unordered() -> IdealTriangulation {
    figure_eight().relabel(&[0, 1], &[Perm4([0, 2, 1, 3]), Perm4::IDENTITY])
}

/// The double of a tetrahedron along its boundary (faces glued by the
/// identity extension): a valid triangulation with four quotient vertices.
/// Used to exercise cusp-count error paths.
pub fn multi_vertex_fixture() -> IdealTriangulation {
    let pairs: vec::Vec<(Slot, usize, Perm4)> = (0..4u8)
        .map(|f| (Slot::new(0, f), 1, Perm4::IDENTITY))
        .collect();
    IdealTriangulation::from_pairs(2, &pairs).expect("doubled tetrahedron is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering;

    #[test]
    fn fig8_is_ordered_and_variant_is_not() {
        assert!(ordering::is_ordered(&figure_eight()));
        assert!(!ordering::is_ordered(&figure_eight_unordered()));
    }
}

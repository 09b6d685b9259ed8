//! Canonical signatures: a relabelling-invariant serialisation used to
//! deduplicate triangulations during retriangulation search.
//!
//! For every choice of start tetrahedron and start vertex labelling, a
//! breadth-first relabelling is performed in which each newly discovered
//! tetrahedron receives the labelling that turns its discovery gluing into
//! the identity bijection. The serialisations of all `24 N` relabellings are
//! compared and the lexicographically smallest one is the signature. Two
//! triangulations get equal signatures iff they are combinatorially
//! isomorphic. The format is this tool's own, not Regina's.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::perm::Perm4;
use crate::tri::{IdealTriangulation, Slot};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalSignature {
    pub text: String,
}

impl fmt::Display for CanonicalSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Computes the canonical signature of a triangulation.
pub fn canonical_signature(tri: &IdealTriangulation) -> CanonicalSignature {
    let n = tri.n_tetrahedra();
    let mut best: Option<Vec<u8>> = None;
    for start in 0..n {
        for perm in Perm4::all() {
            let enc = encode_from(tri, start, perm);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    let bytes = best.expect("triangulation is nonempty");
    let mut text = String::new();
    let _ = write!(text, "{}", n);
    for b in bytes {
        let _ = write!(text, "{}", char::from(b));
    }
    CanonicalSignature { text }
}

/// BFS relabelling from `(start, start_perm)`, serialised as a byte string.
fn encode_from(tri: &IdealTriangulation, start: usize, start_perm: Perm4) -> Vec<u8> {
    let n = tri.n_tetrahedra();
    // new index and vertex map for each old tetrahedron
    let mut new_index = vec![usize::MAX; n];
    let mut vmap = vec![Perm4::IDENTITY; n];
    let mut order = vec![usize::MAX; n]; // old index of each new index
    new_index[start] = 0;
    vmap[start] = start_perm;
    order[0] = start;
    let mut discovered = 1;

    // Process new tetrahedra in index order, faces in new-label order.
    let mut out = Vec::with_capacity(n * 12);
    let mut processed = 0;
    while processed < discovered {
        let old_t = order[processed];
        let pi = vmap[old_t];
        let pi_inv = pi.inverse();
        for new_face in 0..4u8 {
            let old_face = pi_inv.apply(new_face);
            let g = tri.gluing(Slot::new(old_t, old_face));
            if new_index[g.tet] == usize::MAX {
                // First discovery: give the neighbour the labelling that
                // makes this gluing the identity bijection.
                new_index[g.tet] = discovered;
                vmap[g.tet] = pi.compose(&g.perm.inverse());
                order[discovered] = g.tet;
                discovered += 1;
            }
            let target_new = new_index[g.tet];
            let perm_new = vmap[g.tet].compose(&g.perm).compose(&pi_inv);
            // Serialise: target tetrahedron then the bijection images.
            out.push(b'|');
            push_usize(&mut out, target_new);
            out.push(b':');
            for v in 0..4u8 {
                out.push(b'0' + perm_new.apply(v));
            }
        }
        processed += 1;
    }
    debug_assert_eq!(discovered, n, "triangulation is connected");
    out
}

fn push_usize(out: &mut Vec<u8>, mut v: usize) {
    // Decimal, most significant digit first.
    let mut digits = [0u8; 20];
    let mut k = 0;
    loop {
        digits[k] = b'0' + (v % 10) as u8;
        v /= 10;
        k += 1;
        if v == 0 {
            break;
        }
    }
    while k > 0 {
        k -= 1;
        out.push(digits[k]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn invariant_under_relabelling() {
        let tri = sample::figure_eight();
        let sig = canonical_signature(&tri);
        let swapped = tri.relabel(&[1, 0], &[Perm4([2, 0, 3, 1]), Perm4([1, 3, 0, 2])]);
        assert_eq!(canonical_signature(&swapped), sig);
        assert_eq!(canonical_signature(&sample::figure_eight_unordered()), sig);
    }

    #[test]
    fn distinguishes_different_triangulations() {
        let a = canonical_signature(&sample::figure_eight());
        let b = canonical_signature(&sample::multi_vertex_fixture());
        assert_ne!(a, b);
    }

    #[test]
    fn signature_starts_with_size() {
        let sig = canonical_signature(&sample::figure_eight());
        assert!(sig.text.starts_with('2'));
    }
}

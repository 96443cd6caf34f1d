//! Pieces of the wonderful completion of an adjoint group.
//!
//! The completion is the disjoint union over `J ⊆ I` of the quotients of
//! `Z_{J, y_J, delta}` by a torus of rank `|I| - |J|`, where `y_J` is the
//! longest element of `W^{delta(J)}`. Each of those splits further into
//! pieces, one per descriptor. Every point of the completion lies in one of
//! the finitely many translates of the affine chart around the closed
//! orbit; no chart geometry is computed here.

use crate::pieces::{self, PieceDescriptor, PieceError, TwistedPair};
use crate::poly::CountPolynomial;
use crate::weyl::{NodeSubset, WeylDatum, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WonderfulError {
    #[error("the completion needs the adjoint torus rank {rank}, got {torus_rank}")]
    NotAdjoint { rank: usize, torus_rank: usize },
    #[error(transparent)]
    Piece(#[from] PieceError),
}

/// `(J, y_J)` with `J' = delta(J)*`.
pub fn boundary_data(w: &WeylDatum, j: NodeSubset) -> Result<TwistedPair, PieceError> {
    let y = w.longest_in_w_upper(j);
    let target = w.star(w.delta_subset(j));
    let img = w.ad_subset(y, w.delta_subset(j));
    if !img.all_simple || img.subset != target {
        return Err(PieceError::InvariantBreach(format!(
            "Ad({}) delta({j}) is not {target}",
            w.word_string(y)
        )));
    }
    TwistedPair::new(w, j, y)
}

/// One piece of the completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasRow {
    pub j: NodeSubset,
    /// Position of the descriptor in the enumeration for this `J`.
    pub sigma_id: usize,
    pub descriptor: PieceDescriptor,
    /// Point count after dividing by the torus.
    pub count: CountPolynomial,
    pub dim: u32,
}

impl AtlasRow {
    /// The Levi type and twist carrying the orbit parametrization.
    pub fn orbit_data(&self) -> (NodeSubset, WeylElement) {
        pieces::orbit_data(&self.descriptor)
    }
}

/// Index `(J, sigma, J_inf, twist)` of the family of sheaves supported on a piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CsIndex {
    pub j: NodeSubset,
    pub sigma_id: usize,
    pub j_inf: NodeSubset,
    pub twist: WeylElement,
}

#[derive(Debug, Clone)]
pub struct CompletionAtlas {
    pub rows: Vec<AtlasRow>,
    pub total: CountPolynomial,
}

impl CompletionAtlas {
    /// Rows of one `J`.
    pub fn rows_for(&self, j: NodeSubset) -> impl Iterator<Item = &AtlasRow> {
        self.rows.iter().filter(move |r| r.j == j)
    }
}

/// All pieces, sorted by `|J|` descending, then `J`, then enumeration order.
pub fn build_atlas(w: &WeylDatum) -> Result<CompletionAtlas, WonderfulError> {
    if w.torus_rank() != w.rank() {
        return Err(WonderfulError::NotAdjoint { rank: w.rank(), torus_rank: w.torus_rank() });
    }
    let mut subsets: Vec<NodeSubset> = NodeSubset::all(w.rank()).collect();
    subsets.sort_by_key(|j| (std::cmp::Reverse(j.len()), j.bits()));
    let mut rows = Vec::new();
    for j in subsets {
        let tp = boundary_data(w, j)?;
        for (sigma_id, descriptor) in pieces::enumerate(w, &tp)?.into_iter().enumerate() {
            let count = pieces::piece_count(w, &descriptor, true)?;
            let dim = count.degree().expect("piece counts are nonzero");
            rows.push(AtlasRow { j, sigma_id, descriptor, count, dim });
        }
    }
    let total = rows.iter().map(|r| r.count.clone()).sum();
    Ok(CompletionAtlas { rows, total })
}

pub fn cs_index(atlas: &CompletionAtlas) -> Vec<CsIndex> {
    atlas
        .rows
        .iter()
        .map(|r| {
            let (j_inf, twist) = r.orbit_data();
            CsIndex { j: r.j, sigma_id: r.sigma_id, j_inf, twist }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adjoint(t: &str) -> WeylDatum {
        let rank = crate::weyl::WeylDatum::from_type(t, None, 0).unwrap().rank();
        WeylDatum::from_type(t, None, rank).unwrap()
    }

    #[test]
    fn boundary_data_examples() {
        let a1 = adjoint("A1");
        let full = boundary_data(&a1, a1.all_nodes()).unwrap();
        assert!(full.y.is_identity());
        let empty = boundary_data(&a1, NodeSubset::EMPTY).unwrap();
        assert_eq!(empty.y, a1.longest());
        let a2 = adjoint("A2");
        let tp = boundary_data(&a2, NodeSubset::from_labels([1])).unwrap();
        assert_eq!(tp.jp, NodeSubset::from_labels([2]));
        assert_eq!(tp.y, a2.longest_coset_rep(NodeSubset::from_labels([1])));
        assert_eq!(a2.word_string(tp.y), "s1 s2");
    }

    #[test]
    fn a1_atlas() {
        let a1 = adjoint("A1");
        let atlas = build_atlas(&a1).unwrap();
        let counts: Vec<String> = atlas.rows.iter().map(|r| r.count.to_string()).collect();
        assert_eq!(counts, ["-q+q^3", "1+q", "q+q^2"]);
        assert_eq!(atlas.total.to_string(), "1+q+q^2+q^3");
        let idx = cs_index(&atlas);
        assert_eq!(idx.len(), 3);
        assert_eq!(idx[0], CsIndex { j: a1.all_nodes(), sigma_id: 0, j_inf: a1.all_nodes(), twist: a1.identity() });
    }

    #[test]
    fn open_piece_is_the_group() {
        for t in ["A2", "B2", "G2", "A3"] {
            let w = adjoint(t);
            let atlas = build_atlas(&w).unwrap();
            assert_eq!(atlas.rows[0].count, w.order_poly());
            assert_eq!(atlas.total.degree(), Some(2 * w.nu_total() + w.rank() as u32));
            assert_eq!(atlas.total.leading_coefficient(), 1);
        }
    }

    #[test]
    fn rejects_non_adjoint() {
        let gl2 = WeylDatum::from_type("A1", None, 2).unwrap();
        assert!(matches!(build_atlas(&gl2), Err(WonderfulError::NotAdjoint { .. })));
    }
}

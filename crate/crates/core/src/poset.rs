//! Abstract graded-poset interface plus a materialized comparability table
//! used by the family, compression and search machinery.

use crate::chain_product::{ChainProduct, Comparability};
use crate::error::{capacity, domain, Result};
use crate::subspace::{Subspace, SubspaceLattice};
use crate::util::Bitset;

/// A finite graded poset addressed by dense element ids.
pub trait GradedPoset {
    fn element_count(&self) -> usize;
    /// Rank of the poset (maximum element rank).
    fn max_rank(&self) -> u32;
    fn rank(&self, id: usize) -> u32;
    /// Strict order: `a < b`.
    fn is_less(&self, a: usize, b: usize) -> bool;
    fn encode(&self, id: usize) -> String;
    fn decode(&self, text: &str) -> Result<usize>;

    fn is_comparable(&self, a: usize, b: usize) -> bool {
        a != b && (self.is_less(a, b) || self.is_less(b, a))
    }
}

impl GradedPoset for ChainProduct {
    fn element_count(&self) -> usize {
        self.element_count_capped(usize::MAX).expect("poset too large for ids")
    }

    fn max_rank(&self) -> u32 {
        ChainProduct::max_rank(self)
    }

    fn rank(&self, id: usize) -> u32 {
        self.rank_of_id(id)
    }

    fn is_less(&self, a: usize, b: usize) -> bool {
        let ea = self.element_of_id(a);
        let eb = self.element_of_id(b);
        self.compare(&ea, &eb).expect("same poset") == Comparability::Less
    }

    fn encode(&self, id: usize) -> String {
        ChainProduct::encode(self, &self.element_of_id(id))
    }

    fn decode(&self, text: &str) -> Result<usize> {
        Ok(self.id_of(&ChainProduct::decode(self, text)?))
    }
}

/// `V(q, n)` with its subspaces enumerated once; ids follow enumeration
/// order (dimension ascending, canonical bases lexicographic within).
pub struct SubspacePoset {
    lattice: SubspaceLattice,
    elements: Vec<Subspace>,
}

impl SubspacePoset {
    pub fn new(lattice: SubspaceLattice) -> Result<Self> {
        let elements = lattice.enumerate()?;
        Ok(SubspacePoset { lattice, elements })
    }

    pub fn lattice(&self) -> &SubspaceLattice {
        &self.lattice
    }

    pub fn subspace(&self, id: usize) -> &Subspace {
        &self.elements[id]
    }
}

impl GradedPoset for SubspacePoset {
    fn element_count(&self) -> usize {
        self.elements.len()
    }

    fn max_rank(&self) -> u32 {
        self.lattice.n() as u32
    }

    fn rank(&self, id: usize) -> u32 {
        self.elements[id].dim() as u32
    }

    fn is_less(&self, a: usize, b: usize) -> bool {
        let (sa, sb) = (&self.elements[a], &self.elements[b]);
        sa.dim() < sb.dim() && self.lattice.contains(sb, sa).expect("same ambient space")
    }

    fn encode(&self, id: usize) -> String {
        self.lattice.encode(&self.elements[id])
    }

    fn decode(&self, text: &str) -> Result<usize> {
        let s = self.lattice.decode(text)?;
        self.elements
            .iter()
            .position(|t| *t == s)
            .ok_or_else(|| domain(format!("subspace {text:?} not in lattice")))
    }
}

/// Hard cap on materialized posets; everything the table serves lives well
/// below this.
pub const TABLE_CAP: usize = 1 << 16;

/// Materialized comparability structure: per-element bitsets of strict
/// predecessors and successors, plus rank layers.
pub struct PosetTable {
    len: usize,
    max_rank: u32,
    ranks: Vec<u32>,
    down: Vec<Bitset>,
    up: Vec<Bitset>,
    comparable: Vec<Bitset>,
    layers: Vec<Vec<usize>>,
}

impl PosetTable {
    pub fn build(p: &impl GradedPoset) -> Result<Self> {
        let len = p.element_count();
        if len > TABLE_CAP {
            return Err(capacity(format!("{len} elements exceed the table cap {TABLE_CAP}")));
        }
        let ranks: Vec<u32> = (0..len).map(|i| p.rank(i)).collect();
        let max_rank = p.max_rank();
        let mut down = vec![Bitset::new(len); len];
        let mut up = vec![Bitset::new(len); len];
        for a in 0..len {
            for b in 0..len {
                if ranks[a] < ranks[b] && p.is_less(a, b) {
                    down[b].insert(a);
                    up[a].insert(b);
                }
            }
        }
        let comparable = (0..len)
            .map(|i| {
                let mut c = down[i].clone();
                for id in up[i].iter_ids() {
                    c.insert(id);
                }
                c
            })
            .collect();
        let mut layers = vec![Vec::new(); max_rank as usize + 1];
        for (i, &r) in ranks.iter().enumerate() {
            layers[r as usize].push(i);
        }
        Ok(PosetTable { len, max_rank, ranks, down, up, comparable, layers })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn max_rank(&self) -> u32 {
        self.max_rank
    }

    pub fn rank(&self, id: usize) -> u32 {
        self.ranks[id]
    }

    pub fn layer(&self, r: u32) -> &[usize] {
        &self.layers[r as usize]
    }

    pub fn layer_size(&self, r: u32) -> usize {
        self.layers[r as usize].len()
    }

    pub fn down_set(&self, id: usize) -> &Bitset {
        &self.down[id]
    }

    pub fn up_set(&self, id: usize) -> &Bitset {
        &self.up[id]
    }

    pub fn comparable_set(&self, id: usize) -> &Bitset {
        &self.comparable[id]
    }

    pub fn is_less(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn is_comparable(&self, a: usize, b: usize) -> bool {
        self.comparable[a].contains(b)
    }

    /// Twice the distance between rank r and the middle, |2r - R|. Doubling
    /// keeps the value integral when the poset rank is odd.
    pub fn dist2(&self, r: u32) -> u32 {
        (2 * r as i64 - self.max_rank as i64).unsigned_abs() as u32
    }

    /// Ranks sorted by the canonical centered fill order: distance to the
    /// middle ascending, ties resolved toward the higher rank.
    pub fn centered_rank_order(&self) -> Vec<u32> {
        let mut ranks: Vec<u32> = (0..=self.max_rank).collect();
        ranks.sort_by_key(|&r| (self.dist2(r), std::cmp::Reverse(r)));
        ranks
    }

    /// Rank classes grouped by distance to the middle, nearest first. Each
    /// class has one layer (on the middle) or two (a mirror pair).
    pub fn distance_classes(&self) -> Vec<Vec<u32>> {
        let mut classes: Vec<(u32, Vec<u32>)> = Vec::new();
        for r in 0..=self.max_rank {
            let d = self.dist2(r);
            match classes.iter_mut().find(|(cd, _)| *cd == d) {
                Some((_, v)) => v.push(r),
                None => classes.push((d, vec![r])),
            }
        }
        classes.sort_by_key(|&(d, _)| d);
        classes
            .into_iter()
            .map(|(_, mut v)| {
                v.sort_by_key(|&r| std::cmp::Reverse(r));
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_product_as_poset() {
        let p = ChainProduct::new(2, 2).unwrap();
        assert_eq!(GradedPoset::element_count(&p), 9);
        assert_eq!(GradedPoset::max_rank(&p), 4);
        // id 0 = (0,0), id 8 = (2,2)
        assert!(p.is_less(0, 8));
        assert!(!p.is_less(8, 0));
        assert!(GradedPoset::is_comparable(&p, 0, 8));
        assert_eq!(GradedPoset::encode(&p, 5), "12");
        assert_eq!(GradedPoset::decode(&p, "12").unwrap(), 5);
    }

    #[test]
    fn subspace_poset_table() {
        let sp = SubspacePoset::new(SubspaceLattice::new(2, 2).unwrap()).unwrap();
        let t = PosetTable::build(&sp).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.layer_size(1), 3);
        // zero space below everything except itself
        let zero = (0..5).find(|&i| t.rank(i) == 0).unwrap();
        assert_eq!(t.up_set(zero).count(), 4);
        let whole = (0..5).find(|&i| t.rank(i) == 2).unwrap();
        assert_eq!(t.down_set(whole).count(), 4);
        // distinct 1-dim subspaces are incomparable
        let dims: Vec<usize> = (0..5).filter(|&i| t.rank(i) == 1).collect();
        for &a in &dims {
            for &b in &dims {
                if a != b {
                    assert!(!t.is_comparable(a, b));
                }
            }
        }
    }

    #[test]
    fn centered_order_ties_go_up() {
        let p = ChainProduct::new(3, 2).unwrap(); // rank 6
        let t = PosetTable::build(&p).unwrap();
        assert_eq!(t.centered_rank_order(), vec![3, 4, 2, 5, 1, 6, 0]);
        let q = ChainProduct::new(3, 1).unwrap(); // rank 3
        let tq = PosetTable::build(&q).unwrap();
        assert_eq!(tq.centered_rank_order(), vec![2, 1, 3, 0]);
        assert_eq!(tq.distance_classes(), vec![vec![2, 1], vec![3, 0]]);
    }
}

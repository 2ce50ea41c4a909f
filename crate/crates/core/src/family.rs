//! Families over graded posets: comparable-pair counting, centered
//! constructors and the exact one-partial-layer minimizer.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chain_product::{ChainProduct, LayerWindow};
use crate::error::{capacity, domain, Error, Result};
use crate::poset::{GradedPoset, PosetTable};
use crate::util::Bitset;
use crate::BigCount;

/// An immutable subset of poset elements with a per-rank partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    members: Vec<usize>,
    mask: Bitset,
    by_rank: Vec<Vec<usize>>,
}

impl Family {
    pub fn from_members(p: &impl GradedPoset, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let len = p.element_count();
        let mut ids: Vec<usize> = members.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.last().is_some_and(|&m| m >= len) {
            return Err(domain("member id out of range"));
        }
        let mask = Bitset::from_ids(len, &ids);
        let mut by_rank = vec![Vec::new(); p.max_rank() as usize + 1];
        for &id in &ids {
            by_rank[p.rank(id) as usize].push(id);
        }
        Ok(Family { members: ids, mask, by_rank })
    }

    pub fn empty(p: &impl GradedPoset) -> Self {
        Family {
            members: Vec::new(),
            mask: Bitset::new(p.element_count()),
            by_rank: vec![Vec::new(); p.max_rank() as usize + 1],
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, id: usize) -> bool {
        self.mask.contains(id)
    }

    pub fn mask(&self) -> &Bitset {
        &self.mask
    }

    pub fn layer_members(&self, r: u32) -> &[usize] {
        &self.by_rank[r as usize]
    }

    pub fn layer_count(&self, r: u32) -> usize {
        self.by_rank[r as usize].len()
    }

    pub fn rank_range(&self) -> Option<(u32, u32)> {
        let lo = self.by_rank.iter().position(|v| !v.is_empty())?;
        let hi = self.by_rank.iter().rposition(|v| !v.is_empty())?;
        Some((lo as u32, hi as u32))
    }
}

/// Pairwise backend: works over any graded poset.
pub fn comp_count_pairwise(p: &impl GradedPoset, f: &Family) -> BigCount {
    let mut pairs = 0u64;
    let ms = f.members();
    for (i, &a) in ms.iter().enumerate() {
        for &b in &ms[i + 1..] {
            if p.is_comparable(a, b) {
                pairs += 1;
            }
        }
    }
    BigUint::from(pairs)
}

/// Table backend: popcount over precomputed down-sets.
pub fn comp_count_table(t: &PosetTable, f: &Family) -> BigCount {
    let mut pairs = 0u64;
    for &b in f.members() {
        pairs += t.down_set(b).intersection_count(f.mask()) as u64;
    }
    BigUint::from(pairs)
}

/// Per-element comparability degree against a family (strict, self excluded).
pub fn comp_of_element(p: &impl GradedPoset, a: usize, f: &Family) -> BigCount {
    let mut deg = 0u64;
    for &b in f.members() {
        if b != a && p.is_comparable(a, b) {
            deg += 1;
        }
    }
    BigUint::from(deg)
}

/// Grid capacity guard for the transform backend.
pub const GRID_CAP: usize = 20_000_000;

/// Down-set counting transform over the full `(k+1)^n` grid: one prefix-sum
/// pass per axis turns a membership indicator into, at each cell B, the
/// number of members below-or-equal B.
pub fn down_counts_grid(p: &ChainProduct, indicator: &Bitset) -> Result<Vec<u64>> {
    let total = p.element_count_capped(GRID_CAP)?;
    let base = p.k() as usize + 1;
    let mut counts: Vec<u64> = (0..total).map(|i| indicator.contains(i) as u64).collect();
    let mut stride = 1;
    for _ in 0..p.n() {
        // prefix sums along one axis; ascending scan cascades correctly
        for idx in 0..total {
            if (idx / stride) % base != 0 {
                counts[idx] += counts[idx - stride];
            }
        }
        stride *= base;
    }
    Ok(counts)
}

/// Dual transform: at each cell, the number of members above-or-equal.
pub fn up_counts_grid(p: &ChainProduct, indicator: &Bitset) -> Result<Vec<u64>> {
    let total = p.element_count_capped(GRID_CAP)?;
    let base = p.k() as usize + 1;
    let mut counts: Vec<u64> = (0..total).map(|i| indicator.contains(i) as u64).collect();
    let mut stride = 1;
    for _ in 0..p.n() {
        for idx in (0..total).rev() {
            if (idx / stride) % base != base - 1 {
                counts[idx] += counts[idx + stride];
            }
        }
        stride *= base;
    }
    Ok(counts)
}

/// Transform backend for chain products: `sum_B |{A in F : A <= B}| - |F|`.
pub fn comp_count_transform(p: &ChainProduct, f: &Family) -> Result<BigCount> {
    let counts = down_counts_grid(p, f.mask())?;
    let total: u64 = f.members().iter().map(|&id| counts[id]).sum();
    Ok(BigUint::from(total - f.len() as u64))
}

/// Deterministic orderings for filling a partial layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillOrder {
    /// Increasing element id (lexicographic encoding).
    Lexicographic,
    /// Increasing comparability degree against the already-chosen family,
    /// ties by id.
    DegreeAscending,
}

/// Builds a centered family of size M: full layers in increasing distance to
/// the middle (ties toward the higher rank), then one partial layer filled
/// per `fill_order`. The result has at most one partial layer.
pub fn build_centered(
    p: &impl GradedPoset,
    t: &PosetTable,
    m: usize,
    fill_order: FillOrder,
) -> Result<Family> {
    if m > t.len() {
        return Err(domain(format!("M = {m} exceeds poset size {}", t.len())));
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    let mut remaining = m;
    for r in t.centered_rank_order() {
        if remaining == 0 {
            break;
        }
        let layer = t.layer(r);
        if layer.len() <= remaining {
            chosen.extend_from_slice(layer);
            remaining -= layer.len();
        } else {
            let core = Family::from_members(p, chosen.iter().copied())?;
            let mut candidates: Vec<usize> = layer.to_vec();
            match fill_order {
                FillOrder::Lexicographic => candidates.sort_unstable(),
                FillOrder::DegreeAscending => {
                    let mut keyed: Vec<(u64, usize)> = candidates
                        .iter()
                        .map(|&id| (t.comparable_set(id).intersection_count(core.mask()) as u64, id))
                        .collect();
                    keyed.sort_unstable();
                    candidates = keyed.into_iter().map(|(_, id)| id).collect();
                }
            }
            chosen.extend(candidates.into_iter().take(remaining));
            remaining = 0;
        }
    }
    Family::from_members(p, chosen)
}

/// Centered: no member is strictly farther from the middle than an excluded
/// element. Equivalent check on ranks: max distance over nonempty layers
/// is at most the min distance over non-full layers.
pub fn is_centered(t: &PosetTable, f: &Family) -> bool {
    let mut max_in: Option<u32> = None;
    let mut min_out: Option<u32> = None;
    for r in 0..=t.max_rank() {
        let d = t.dist2(r);
        let cnt = f.layer_count(r);
        if cnt > 0 {
            max_in = Some(max_in.map_or(d, |m| m.max(d)));
        }
        if cnt < t.layer_size(r) {
            min_out = Some(min_out.map_or(d, |m| m.min(d)));
        }
    }
    match (max_in, min_out) {
        (Some(a), Some(b)) => a <= b,
        _ => true,
    }
}

/// Canonical centered: centered with at most one partially filled layer.
pub fn is_canonical_centered(t: &PosetTable, f: &Family) -> bool {
    if !is_centered(t, f) {
        return false;
    }
    let partial = (0..=t.max_rank())
        .filter(|&r| {
            let c = f.layer_count(r);
            c > 0 && c < t.layer_size(r)
        })
        .count();
    partial <= 1
}

/// Exact minimum of comp over canonical centered families made of one full
/// window plus `s` elements of an adjacent layer. The partial layer is an
/// antichain, so the optimum takes the `s` smallest degrees against the
/// window; ties break lexicographically.
pub fn min_comp_one_partial_layer(
    p: &ChainProduct,
    window: LayerWindow,
    partial_rank: u32,
    s: usize,
) -> Result<(BigCount, Family)> {
    if window.hi > p.max_rank() || partial_rank > p.max_rank() {
        return Err(domain("window or partial rank out of range"));
    }
    if partial_rank + 1 != window.lo && partial_rank != window.hi + 1 {
        return Err(domain("partial rank must be adjacent to the window"));
    }
    let layer_len = p
        .layer_size(partial_rank)?
        .to_usize()
        .ok_or_else(|| capacity("partial layer too large"))?;
    if s > layer_len {
        return Err(domain(format!("s = {s} exceeds layer size {layer_len}")));
    }
    let total = p.element_count_capped(GRID_CAP)?;

    let mut window_mask = Bitset::new(total);
    for id in 0..total {
        if window.contains_rank(p.rank_of_id(id)) {
            window_mask.insert(id);
        }
    }

    // window comp plus every element's degree against the window, in two
    // transform passes
    let down = down_counts_grid(p, &window_mask)?;
    let window_ids: Vec<usize> = window_mask.iter_ids().collect();
    let window_comp: u64 =
        window_ids.iter().map(|&id| down[id]).sum::<u64>() - window_ids.len() as u64;

    let layer: Vec<usize> = (0..total)
        .filter(|&id| p.rank_of_id(id) == partial_rank)
        .collect();
    let degrees: Vec<u64> = if partial_rank > window.hi {
        layer.iter().map(|&id| down[id]).collect()
    } else {
        let up = up_counts_grid(p, &window_mask)?;
        layer.iter().map(|&id| up[id]).collect()
    };

    let mut keyed: Vec<(u64, usize)> = degrees.iter().copied().zip(layer.iter().copied()).collect();
    keyed.sort_unstable();
    let chosen: Vec<usize> = keyed.iter().take(s).map(|&(_, id)| id).collect();
    let added: u64 = keyed.iter().take(s).map(|&(d, _)| d).sum();

    let members = window_ids.into_iter().chain(chosen);
    let family = Family::from_members(p, members)?;
    Ok((BigUint::from(window_comp + added), family))
}

/// The comparable-pair lower-bound value `floor((l_{3r-1}/l_{2r-1} - 1) t)`,
/// computed with exact integer arithmetic (negative values clamp to zero).
pub fn nss_bound(p: &ChainProduct, r: u32, t: u64) -> Result<BigCount> {
    if p.k() != 2 {
        return Err(domain("the bound is stated for k = 2"));
    }
    if r == 0 || 3 * r - 1 > p.max_rank() {
        return Err(domain("layer indices out of range"));
    }
    let hi = p.layer_size(3 * r - 1)?;
    let lo = p.layer_size(2 * r - 1)?;
    if lo.is_zero() {
        return Err(domain("degenerate layer"));
    }
    let num = (BigInt::from(hi) - BigInt::from(lo.clone())) * BigInt::from(t);
    let q = num.div_floor(&BigInt::from(lo));
    if q.is_negative() {
        Ok(BigUint::zero())
    } else {
        Ok(q.to_biguint().expect("nonnegative"))
    }
}

/// On-disk family format shared by the CLI and file I/O.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PosetSpec {
    ChainProduct { n: usize, k: u8 },
    Subspace { n: usize, q: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyFile {
    pub poset: PosetSpec,
    pub members: Vec<String>,
}

impl FamilyFile {
    pub fn from_family(spec: PosetSpec, p: &impl GradedPoset, f: &Family) -> Self {
        FamilyFile {
            poset: spec,
            members: f.members().iter().map(|&id| p.encode(id)).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from)
    }

    pub fn resolve_members(&self, p: &impl GradedPoset) -> Result<Family> {
        let ids: Result<Vec<usize>> = self.members.iter().map(|s| p.decode(s)).collect();
        Family::from_members(p, ids?)
    }
}

/// Sum over members of |2 rank - R|: twice the rank-distance potential that
/// every compression step strictly decreases.
pub fn potential2(t: &PosetTable, f: &Family) -> u64 {
    f.members().iter().map(|&id| t.dist2(t.rank(id)) as u64).sum()
}

//! Family-improvement transforms: top/bottom compression, 3-compression,
//! permutation compression and the generic mid-compression engine, all
//! built on bipartite maximum matching and Hall-violator extraction.

use crate::chain_product::ChainProduct;
use crate::error::{domain, unsupported, Result};
use crate::family::Family;
use crate::poset::{GradedPoset, PosetTable};

/// Bipartite graph between two element-id lists; adjacency is given by left
/// index into right indices.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    left: Vec<usize>,
    right: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl BipartiteGraph {
    /// Graph over explicit vertex lists with edges by (left index, right index).
    pub fn new(left: Vec<usize>, right: Vec<usize>, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); left.len()];
        for &(i, j) in edges {
            adj[i].push(j);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        BipartiteGraph { left, right, adj }
    }

    /// Adjacency = comparability in the poset, optionally filtered.
    pub fn from_comparability(
        t: &PosetTable,
        left: Vec<usize>,
        right: Vec<usize>,
        mut keep: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let adj = left
            .iter()
            .map(|&a| {
                right
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| t.is_comparable(a, b) && keep(a, b))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        BipartiteGraph {
            left,
            right,
            adj,
        }
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn degree(&self, left_idx: usize) -> usize {
        self.adj[left_idx].len()
    }
}

/// Maximum matching as index pairings on both sides.
#[derive(Clone, Debug)]
pub struct Matching {
    /// For each left index, the matched right index.
    pub pair_left: Vec<Option<usize>>,
    /// For each right index, the matched left index.
    pub pair_right: Vec<Option<usize>>,
    pub size: usize,
}

/// Hopcroft-Karp maximum matching; deterministic for a fixed adjacency order.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let (nl, nr) = (g.left.len(), g.right.len());
    let mut pair_left: Vec<Option<usize>> = vec![None; nl];
    let mut pair_right: Vec<Option<usize>> = vec![None; nr];
    let mut dist = vec![usize::MAX; nl];

    fn bfs(
        g: &BipartiteGraph,
        pair_left: &[Option<usize>],
        pair_right: &[Option<usize>],
        dist: &mut [usize],
    ) -> bool {
        let mut queue = std::collections::VecDeque::new();
        for (u, d) in dist.iter_mut().enumerate() {
            if pair_left[u].is_none() {
                *d = 0;
                queue.push_back(u);
            } else {
                *d = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &g.adj[u] {
                match pair_right[v] {
                    None => found = true,
                    Some(u2) => {
                        if dist[u2] == usize::MAX {
                            dist[u2] = dist[u] + 1;
                            queue.push_back(u2);
                        }
                    }
                }
            }
        }
        found
    }

    fn dfs(
        g: &BipartiteGraph,
        u: usize,
        pair_left: &mut [Option<usize>],
        pair_right: &mut [Option<usize>],
        dist: &mut [usize],
    ) -> bool {
        let d = std::mem::replace(&mut dist[u], usize::MAX);
        for &v in &g.adj[u] {
            let ok = match pair_right[v] {
                None => true,
                Some(u2) => dist[u2] == d + 1 && dfs(g, u2, pair_left, pair_right, dist),
            };
            if ok {
                pair_left[u] = Some(v);
                pair_right[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut size = 0;
    while bfs(g, &pair_left, &pair_right, &mut dist) {
        for u in 0..nl {
            if pair_left[u].is_none() && dist[u] == 0 {
                // dist may be stale for u after earlier augmentations in
                // this phase; dfs re-checks through the layer structure
                if dfs(g, u, &mut pair_left, &mut pair_right, &mut dist) {
                    size += 1;
                }
            }
        }
    }
    Matching { pair_left, pair_right, size }
}

/// A deficient vertex set on the requested side (`|N(X0)| < |X0|`), built
/// from alternating reachability out of the unmatched vertices; `None` when
/// a matching covers that side. The returned set is the canonical maximal
/// one: all vertices reachable by alternating paths from unmatched vertices.
pub fn hall_violator(g: &BipartiteGraph, side: Side) -> Option<Vec<usize>> {
    let m = max_matching(g);
    hall_violator_with(g, side, &m)
}

fn hall_violator_with(g: &BipartiteGraph, side: Side, m: &Matching) -> Option<Vec<usize>> {
    match side {
        Side::Left => {
            if m.size == g.left.len() {
                return None;
            }
            let mut in_set = vec![false; g.left.len()];
            let mut stack: Vec<usize> = (0..g.left.len()).filter(|&u| m.pair_left[u].is_none()).collect();
            for &u in &stack {
                in_set[u] = true;
            }
            while let Some(u) = stack.pop() {
                for &v in &g.adj[u] {
                    if let Some(u2) = m.pair_right[v] {
                        if !in_set[u2] {
                            in_set[u2] = true;
                            stack.push(u2);
                        }
                    }
                }
            }
            Some((0..g.left.len()).filter(|&u| in_set[u]).collect())
        }
        Side::Right => {
            if m.size == g.right.len() {
                return None;
            }
            let mut in_set = vec![false; g.right.len()];
            let mut stack: Vec<usize> =
                (0..g.right.len()).filter(|&v| m.pair_right[v].is_none()).collect();
            for &v in &stack {
                in_set[v] = true;
            }
            // right -> left over non-matching edges, left -> right over matching edges
            let mut radj = vec![Vec::new(); g.right.len()];
            for (u, vs) in g.adj.iter().enumerate() {
                for &v in vs {
                    radj[v].push(u);
                }
            }
            while let Some(v) = stack.pop() {
                for &u in &radj[v] {
                    if let Some(v2) = m.pair_left[u] {
                        if !in_set[v2] {
                            in_set[v2] = true;
                            stack.push(v2);
                        }
                    }
                }
            }
            Some((0..g.right.len()).filter(|&v| in_set[v]).collect())
        }
    }
}

/// Which branch of the case analysis produced a swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepCase {
    /// A matching covering the whole left side.
    CoveringLeft,
    /// Case 1: swap the matchable part outside a maximal left violator.
    LeftViolator,
    /// Case 2, covering matching on the right side.
    CoveringRight,
    /// Case 2a, possibly after shrinking the right violator (case 2b loops).
    RightViolator,
}

impl StepCase {
    pub fn label(self) -> &'static str {
        match self {
            StepCase::CoveringLeft => "covering-left",
            StepCase::LeftViolator => "left-violator",
            StepCase::CoveringRight => "covering-right",
            StepCase::RightViolator => "right-violator",
        }
    }
}

/// One executed exchange: `removed` leaves the family, `added` enters.
#[derive(Clone, Debug)]
pub struct SwapStep {
    pub rank_from: u32,
    pub rank_to: u32,
    pub case: StepCase,
    pub removed: Vec<usize>,
    pub added: Vec<usize>,
    /// Number of case-2b shrink iterations before case 2a applied.
    pub shrink_iters: u32,
}

/// Outcome of a single compression step.
#[derive(Clone, Debug)]
pub enum StepOutcome {
    Changed { family: Family, step: SwapStep },
    AlreadyCompressed,
}

impl StepOutcome {
    pub fn family(self) -> Option<Family> {
        match self {
            StepOutcome::Changed { family, .. } => Some(family),
            StepOutcome::AlreadyCompressed => None,
        }
    }
}

/// The matching case analysis shared by every compression step. Left side
/// holds family members at the source level, right side holds non-members at
/// the target level; the returned plan never empties, and removed/added are
/// id lists of equal length.
fn plan_exchange(g: &BipartiteGraph) -> (StepCase, Vec<usize>, Vec<usize>, u32) {
    let m = max_matching(g);

    if m.size == g.left.len() {
        let removed: Vec<usize> = g.left.to_vec();
        let added: Vec<usize> = m
            .pair_left
            .iter()
            .map(|v| g.right[v.expect("covering matching")])
            .collect();
        return (StepCase::CoveringLeft, removed, added, 0);
    }

    // restrict to Y = neighbors of the left side
    let y_live: Vec<bool> = {
        let mut live = vec![false; g.right.len()];
        for vs in &g.adj {
            for &v in vs {
                live[v] = true;
            }
        }
        live
    };
    let x_size = g.left.len();
    let y_size = y_live.iter().filter(|&&b| b).count();

    if x_size <= y_size {
        // Case 1: maximal left violator X0; the matching covers X \ X0 and
        // avoids N(X0)
        let x0 = hall_violator_with(g, Side::Left, &m).expect("no covering matching");
        let in_x0: Vec<bool> = {
            let mut b = vec![false; g.left.len()];
            for &u in &x0 {
                b[u] = true;
            }
            b
        };
        let mut removed = Vec::new();
        let mut added = Vec::new();
        for u in 0..g.left.len() {
            if !in_x0[u] {
                let v = m.pair_left[u].expect("X minus X0 is covered");
                removed.push(g.left[u]);
                added.push(g.right[v]);
            }
        }
        debug_assert!(!removed.is_empty());
        return (StepCase::LeftViolator, removed, added, 0);
    }

    if m.size == y_size {
        // Case 2 with a matching covering Y
        let mut removed = Vec::new();
        let mut added = Vec::new();
        for (v, u) in m.pair_right.iter().enumerate() {
            if let Some(u) = u {
                removed.push(g.left[*u]);
                added.push(g.right[v]);
            }
        }
        return (StepCase::CoveringRight, removed, added, 0);
    }

    // Case 2 proper: take a deficient right set Y0, shrink until a matching
    // covers its left neighborhood (case 2a)
    let mut y0: Vec<usize> = hall_violator_with(g, Side::Right, &m).expect("Y not covered");
    let mut shrink_iters = 0u32;
    loop {
        // induced subgraph: left = N(Y0), right = Y0
        let in_y0: Vec<bool> = {
            let mut b = vec![false; g.right.len()];
            for &v in &y0 {
                b[v] = true;
            }
            b
        };
        let nx: Vec<usize> = (0..g.left.len())
            .filter(|&u| g.adj[u].iter().any(|&v| in_y0[v]))
            .collect();
        let sub_left: Vec<usize> = nx.iter().map(|&u| g.left[u]).collect();
        let sub_right: Vec<usize> = y0.iter().map(|&v| g.right[v]).collect();
        let mut edges = Vec::new();
        for (si, &u) in nx.iter().enumerate() {
            for (sj, &v) in y0.iter().enumerate() {
                if g.adj[u].binary_search(&v).is_ok() {
                    edges.push((si, sj));
                }
            }
        }
        let sub = BipartiteGraph::new(sub_left, sub_right, &edges);
        let sm = max_matching(&sub);
        if sm.size == sub.left.len() {
            // case 2a
            let mut removed = Vec::new();
            let mut added = Vec::new();
            for (u, v) in sm.pair_left.iter().enumerate() {
                let v = v.expect("left side covered");
                removed.push(sub.left[u]);
                added.push(sub.right[v]);
            }
            debug_assert!(!removed.is_empty());
            return (StepCase::RightViolator, removed, added, shrink_iters);
        }
        // case 2b: shrink Y0 by the neighborhood of a left violator Z and retry
        let z = hall_violator_with(&sub, Side::Left, &sm).expect("left side not covered");
        let mut drop = vec![false; y0.len()];
        for &zu in &z {
            for (sj, _) in y0.iter().enumerate() {
                if sub.adj[zu].contains(&sj) {
                    drop[sj] = true;
                }
            }
        }
        let next: Vec<usize> = y0
            .iter()
            .enumerate()
            .filter(|&(sj, _)| !drop[sj])
            .map(|(_, &v)| v)
            .collect();
        debug_assert!(next.len() < y0.len(), "case 2b must shrink Y0");
        y0 = next;
        shrink_iters += 1;
    }
}

fn apply_swap(p: &impl GradedPoset, f: &Family, removed: &[usize], added: &[usize]) -> Family {
    let removed_set: std::collections::HashSet<usize> = removed.iter().copied().collect();
    let members = f
        .members()
        .iter()
        .copied()
        .filter(|id| !removed_set.contains(id))
        .chain(added.iter().copied());
    Family::from_members(p, members).expect("ids stay in range")
}

/// Top-compression predicate (T): every A in F above the middle has all its
/// subsets of rank >= n in F.
pub fn is_top_compressed(p: &ChainProduct, t: &PosetTable, f: &Family) -> bool {
    let n = p.n() as u32;
    for &a in f.members() {
        if t.rank(a) > n {
            for id in t.down_set(a).iter_ids() {
                if t.rank(id) >= n && !f.contains(id) {
                    return false;
                }
            }
        }
    }
    true
}

/// Bottom-compression predicate (B), dual of (T).
pub fn is_bottom_compressed(p: &ChainProduct, t: &PosetTable, f: &Family) -> bool {
    let n = p.n() as u32;
    for &a in f.members() {
        if t.rank(a) < n {
            for id in t.up_set(a).iter_ids() {
                if t.rank(id) <= n && !f.contains(id) {
                    return false;
                }
            }
        }
    }
    true
}

/// Selects the violating level pair for a top-compression step: the maximum
/// violating source rank `a`, then the maximum violating target rank `b`
/// (equivalently minimal a - b).
fn top_violation(p: &ChainProduct, t: &PosetTable, f: &Family) -> Option<(u32, u32)> {
    let n = p.n() as u32;
    let mut best: Option<(u32, u32)> = None;
    for &a_id in f.members() {
        let a = t.rank(a_id);
        if a <= n {
            continue;
        }
        if let Some((ba, _)) = best {
            if a < ba {
                continue;
            }
        }
        for b_id in t.down_set(a_id).iter_ids() {
            let b = t.rank(b_id);
            if b >= n && !f.contains(b_id) {
                match best {
                    Some((ba, bb)) if (a, b) <= (ba, bb) => {}
                    _ => best = Some((a, b)),
                }
            }
        }
    }
    best
}

/// One top-compression exchange on `{0,1,2}^n`.
pub fn top_compress_step(p: &ChainProduct, t: &PosetTable, f: &Family) -> Result<StepOutcome> {
    if p.k() != 2 {
        return Err(unsupported("top compression is defined for k = 2"));
    }
    let Some((a, b)) = top_violation(p, t, f) else {
        return Ok(StepOutcome::AlreadyCompressed);
    };
    let left: Vec<usize> = f.layer_members(a).to_vec();
    let right: Vec<usize> = t
        .layer(b)
        .iter()
        .copied()
        .filter(|&id| !f.contains(id))
        .collect();
    let g = BipartiteGraph::from_comparability(t, left, right, |_, _| true);
    let (case, removed, added, shrink_iters) = plan_exchange(&g);
    let family = apply_swap(p, f, &removed, &added);
    Ok(StepOutcome::Changed {
        family,
        step: SwapStep { rank_from: a, rank_to: b, case, removed, added, shrink_iters },
    })
}

/// One bottom-compression exchange: complement, top-compress, complement back.
pub fn bottom_compress_step(p: &ChainProduct, t: &PosetTable, f: &Family) -> Result<StepOutcome> {
    if p.k() != 2 {
        return Err(unsupported("bottom compression is defined for k = 2"));
    }
    let comp_ids = |ids: &[usize]| -> Vec<usize> {
        ids.iter()
            .map(|&id| p.id_of(&p.complement(&p.element_of_id(id))))
            .collect()
    };
    let fc = Family::from_members(p, comp_ids(f.members()))?;
    match top_compress_step(p, t, &fc)? {
        StepOutcome::AlreadyCompressed => Ok(StepOutcome::AlreadyCompressed),
        StepOutcome::Changed { family, step } => {
            let back = Family::from_members(p, comp_ids(family.members()))?;
            let nk = p.max_rank();
            Ok(StepOutcome::Changed {
                family: back,
                step: SwapStep {
                    rank_from: nk - step.rank_from,
                    rank_to: nk - step.rank_to,
                    case: step.case,
                    removed: comp_ids(&step.removed),
                    added: comp_ids(&step.added),
                    shrink_iters: step.shrink_iters,
                },
            })
        }
    }
}

/// (C1)/(C2) violation report for a top- and bottom-compressed family.
#[derive(Clone, Debug, Default)]
pub struct ThreeCompressReport {
    /// (A, B) pairs violating (C1): A maximal at rank n+2, B subset at n-1
    /// with more zeros, B missing.
    pub c1_violations: Vec<(usize, usize)>,
    /// Dual pairs violating (C2).
    pub c2_violations: Vec<(usize, usize)>,
}

impl ThreeCompressReport {
    pub fn satisfied(&self) -> bool {
        self.c1_violations.is_empty() && self.c2_violations.is_empty()
    }
}

fn zeros_of(p: &ChainProduct, id: usize) -> usize {
    p.element_of_id(id).value_count(0)
}

fn twos_of(p: &ChainProduct, id: usize) -> usize {
    p.element_of_id(id).value_count(2)
}

fn is_maximal_in(t: &PosetTable, f: &Family, id: usize) -> bool {
    t.up_set(id).iter_ids().all(|u| !f.contains(u))
}

fn is_minimal_in(t: &PosetTable, f: &Family, id: usize) -> bool {
    t.down_set(id).iter_ids().all(|d| !f.contains(d))
}

/// Lists every (C1)/(C2) violation of a family over `{0,1,2}^n`.
pub fn three_compress_check(p: &ChainProduct, t: &PosetTable, f: &Family) -> Result<ThreeCompressReport> {
    if p.k() != 2 {
        return Err(unsupported("3-compression is defined for k = 2"));
    }
    let n = p.n() as u32;
    let mut report = ThreeCompressReport::default();
    if n >= 2 {
        for &a_id in f.layer_members(n + 2) {
            if !is_maximal_in(t, f, a_id) {
                continue;
            }
            let a0 = zeros_of(p, a_id);
            for b_id in t.down_set(a_id).iter_ids() {
                if t.rank(b_id) == n - 1 && !f.contains(b_id) && zeros_of(p, b_id) > a0 {
                    report.c1_violations.push((a_id, b_id));
                }
            }
        }
        for &a_id in f.layer_members(n - 2) {
            if !is_minimal_in(t, f, a_id) {
                continue;
            }
            let a2 = twos_of(p, a_id);
            for b_id in t.up_set(a_id).iter_ids() {
                if t.rank(b_id) == n + 1 && !f.contains(b_id) && twos_of(p, b_id) > a2 {
                    report.c2_violations.push((a_id, b_id));
                }
            }
        }
    }
    Ok(report)
}

/// One 3-compression exchange. Precondition: F is top- and bottom-compressed.
/// Fixes a (C1) violation if any (the exchange between ranks n+2 and n-1
/// restricted to pairs with differing zero counts), otherwise a (C2)
/// violation via complementation.
pub fn three_compress_step(p: &ChainProduct, t: &PosetTable, f: &Family) -> Result<StepOutcome> {
    if p.k() != 2 {
        return Err(unsupported("3-compression is defined for k = 2"));
    }
    if !is_top_compressed(p, t, f) || !is_bottom_compressed(p, t, f) {
        return Err(domain("3-compression requires a top- and bottom-compressed family"));
    }
    let report = three_compress_check(p, t, f)?;
    let n = p.n() as u32;
    if !report.c1_violations.is_empty() {
        let left: Vec<usize> = f.layer_members(n + 2).to_vec();
        let right: Vec<usize> = t
            .layer(n - 1)
            .iter()
            .copied()
            .filter(|&id| !f.contains(id))
            .collect();
        let g = BipartiteGraph::from_comparability(t, left, right, |a, b| {
            zeros_of(p, b) != zeros_of(p, a)
        });
        let (case, removed, added, shrink_iters) = plan_exchange(&g);
        let family = apply_swap(p, f, &removed, &added);
        return Ok(StepOutcome::Changed {
            family,
            step: SwapStep { rank_from: n + 2, rank_to: n - 1, case, removed, added, shrink_iters },
        });
    }
    if !report.c2_violations.is_empty() {
        let comp_ids = |ids: &[usize]| -> Vec<usize> {
            ids.iter()
                .map(|&id| p.id_of(&p.complement(&p.element_of_id(id))))
                .collect()
        };
        let fc = Family::from_members(p, comp_ids(f.members()))?;
        // the complemented family violates (C1); run the same exchange there
        let left: Vec<usize> = fc.layer_members(n + 2).to_vec();
        let right: Vec<usize> = t
            .layer(n - 1)
            .iter()
            .copied()
            .filter(|&id| !fc.contains(id))
            .collect();
        let g = BipartiteGraph::from_comparability(t, left, right, |a, b| {
            zeros_of(p, b) != zeros_of(p, a)
        });
        let (case, removed, added, shrink_iters) = plan_exchange(&g);
        let swapped = apply_swap(p, &fc, &removed, &added);
        let family = Family::from_members(p, comp_ids(swapped.members()))?;
        let nk = p.max_rank();
        return Ok(StepOutcome::Changed {
            family,
            step: SwapStep {
                rank_from: nk - (n + 2),
                rank_to: nk - (n - 1),
                case,
                removed: comp_ids(&removed),
                added: comp_ids(&added),
                shrink_iters,
            },
        });
    }
    Ok(StepOutcome::AlreadyCompressed)
}

/// Permutation compression of the partial layer at `low_rank`: replace each
/// A at the low rank by pi(A^c) at the mirror rank unless that image is
/// already present. Requires every layer strictly between the two partial
/// ranks to be full, all members within the window, pi an involution, k = 2.
pub fn pi_compress(
    p: &ChainProduct,
    f: &Family,
    pi: &[usize],
    low_rank: u32,
) -> Result<Family> {
    if p.k() != 2 {
        return Err(unsupported("pi-compression is defined for k = 2"));
    }
    let n = p.n() as u32;
    let nk = p.max_rank();
    if low_rank >= n {
        return Err(domain("low_rank must be below the middle"));
    }
    if pi.len() != p.n() {
        return Err(domain("permutation length must be n"));
    }
    for (i, &j) in pi.iter().enumerate() {
        if j >= p.n() || pi[j] != i {
            return Err(domain("pi must be an involution on 0..n"));
        }
    }
    let high_rank = nk - low_rank;
    // middle layers full, members confined to the window
    use num_traits::ToPrimitive;
    for r in low_rank + 1..high_rank {
        let total = p
            .layer_size(r)?
            .to_usize()
            .ok_or_else(|| domain("layer too large"))?;
        if f.layer_count(r) != total {
            return Err(domain(format!("layer {r} must be full for pi-compression")));
        }
    }
    if let Some((lo, hi)) = f.rank_range() {
        if lo < low_rank || hi > high_rank {
            return Err(domain("members must lie within the compression window"));
        }
    }

    let image = |id: usize| -> usize {
        let e = p.element_of_id(id);
        let c = p.complement(&e);
        let coords: Vec<u8> = (0..p.n()).map(|i| c.coords()[pi[i]]).collect();
        p.id_of(&p.element(coords).expect("permuted complement is valid"))
    };

    let mut members: Vec<usize> = Vec::with_capacity(f.len());
    for &id in f.members() {
        if p.rank_of_id(id) == low_rank {
            let img = image(id);
            if f.contains(img) {
                members.push(id);
            } else {
                members.push(img);
            }
        } else {
            members.push(id);
        }
    }
    Family::from_members(p, members)
}

/// Mid-compression predicate: every comparable pair with B strictly closer
/// to the middle satisfies A in F implies B in F.
pub fn is_mid_compressed(t: &PosetTable, f: &Family) -> bool {
    mid_violation(t, f).is_none()
}

/// Violating pair selection for mid-compression: prefer pairs with the far
/// element above the middle (maximal source rank, then maximal target rank);
/// otherwise the mirrored choice below the middle.
fn mid_violation(t: &PosetTable, f: &Family) -> Option<(u32, u32)> {
    let r2 = t.max_rank();
    let mut best_above: Option<(u32, u32)> = None;
    let mut best_below: Option<(i64, i64)> = None;
    for &a_id in f.members() {
        let a = t.rank(a_id);
        let da = t.dist2(a);
        if da == 0 {
            continue;
        }
        for b_id in t.comparable_set(a_id).iter_ids() {
            if f.contains(b_id) {
                continue;
            }
            let b = t.rank(b_id);
            if t.dist2(b) >= da {
                continue;
            }
            if 2 * a > r2 {
                let cand = (a, b);
                if best_above.is_none_or(|cur| cand > cur) {
                    best_above = Some(cand);
                }
            } else {
                let cand = (-(a as i64), -(b as i64));
                if best_below.is_none_or(|cur| cand > cur) {
                    best_below = Some(cand);
                }
            }
        }
    }
    if let Some((a, b)) = best_above {
        return Some((a, b));
    }
    best_below.map(|(na, nb)| ((-na) as u32, (-nb) as u32))
}

/// Iterates the mid-compression improvement step until the family is
/// mid-compressed. Sound only for posets with Property (Q); the caller must
/// assert it explicitly.
pub fn mid_compress(
    p: &impl GradedPoset,
    t: &PosetTable,
    f: &Family,
    property_q_asserted: bool,
) -> Result<Family> {
    if !property_q_asserted {
        return Err(unsupported(
            "mid-compression requires Property (Q); pass property_q_asserted = true",
        ));
    }
    let mut cur = f.clone();
    loop {
        match mid_compress_step(p, t, &cur)? {
            StepOutcome::AlreadyCompressed => return Ok(cur),
            StepOutcome::Changed { family, .. } => cur = family,
        }
    }
}

/// One mid-compression exchange (generic poset).
pub fn mid_compress_step(p: &impl GradedPoset, t: &PosetTable, f: &Family) -> Result<StepOutcome> {
    let Some((a, b)) = mid_violation(t, f) else {
        return Ok(StepOutcome::AlreadyCompressed);
    };
    let left: Vec<usize> = f.layer_members(a).to_vec();
    let right: Vec<usize> = t
        .layer(b)
        .iter()
        .copied()
        .filter(|&id| !f.contains(id))
        .collect();
    let g = BipartiteGraph::from_comparability(t, left, right, |_, _| true);
    let (case, removed, added, shrink_iters) = plan_exchange(&g);
    let family = apply_swap(p, f, &removed, &added);
    Ok(StepOutcome::Changed {
        family,
        step: SwapStep { rank_from: a, rank_to: b, case, removed, added, shrink_iters },
    })
}

/// Runs top and bottom compression steps to a joint fixpoint.
pub fn top_bottom_fixpoint(
    p: &ChainProduct,
    t: &PosetTable,
    f: &Family,
) -> Result<(Family, Vec<SwapStep>)> {
    let mut cur = f.clone();
    let mut steps = Vec::new();
    loop {
        match top_compress_step(p, t, &cur)? {
            StepOutcome::Changed { family, step } => {
                cur = family;
                steps.push(step);
                continue;
            }
            StepOutcome::AlreadyCompressed => {}
        }
        match bottom_compress_step(p, t, &cur)? {
            StepOutcome::Changed { family, step } => {
                cur = family;
                steps.push(step);
                continue;
            }
            StepOutcome::AlreadyCompressed => return Ok((cur, steps)),
        }
    }
}

/// Runs top, bottom and 3-compression to a joint fixpoint satisfying
/// (T), (B), (C1) and (C2).
pub fn three_compress_fixpoint(
    p: &ChainProduct,
    t: &PosetTable,
    f: &Family,
) -> Result<(Family, Vec<SwapStep>)> {
    let (mut cur, mut steps) = top_bottom_fixpoint(p, t, f)?;
    loop {
        match three_compress_step(p, t, &cur)? {
            StepOutcome::Changed { family, step } => {
                steps.push(step);
                let (next, more) = top_bottom_fixpoint(p, t, &family)?;
                cur = next;
                steps.extend(more);
            }
            StepOutcome::AlreadyCompressed => return Ok((cur, steps)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::family::{comp_count_pairwise, comp_count_table, potential2};
    use num_bigint::BigUint;
    use rand::prelude::*;

    fn cp(n: usize, k: u8) -> ChainProduct {
        ChainProduct::new(n, k).unwrap()
    }

    #[test]
    fn matching_examples() {
        // complete bipartite K_{2,2}
        let g = BipartiteGraph::new(vec![10, 11], vec![20, 21], &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(max_matching(&g).size, 2);
        assert!(hall_violator(&g, Side::Left).is_none());

        // left {x}, right {}, no edges
        let g2 = BipartiteGraph::new(vec![5], vec![], &[]);
        assert_eq!(max_matching(&g2).size, 0);
        assert_eq!(hall_violator(&g2, Side::Left), Some(vec![0]));

        // path x1-y1, x2-y1
        let g3 = BipartiteGraph::new(vec![1, 2], vec![7], &[(0, 0), (1, 0)]);
        let m = max_matching(&g3);
        assert_eq!(m.size, 1);
        assert_eq!(hall_violator(&g3, Side::Left), Some(vec![0, 1]));
    }

    #[test]
    fn top_compress_single_pair() {
        let p = cp(2, 2);
        let t = PosetTable::build(&p).unwrap();
        let top = p.id_of(&p.element(vec![2, 2]).unwrap());
        let f = Family::from_members(&p, [top]).unwrap();
        let before_pot = potential2(&t, &f);
        match top_compress_step(&p, &t, &f).unwrap() {
            StepOutcome::Changed { family, step } => {
                assert_eq!(family.len(), 1);
                assert_eq!(step.rank_from, 4);
                assert_eq!(step.rank_to, 3);
                // potential (doubled) decreases by 2, i.e. by 1 rank level
                assert_eq!(potential2(&t, &family), before_pot - 2);
                let r = p.rank_of_id(family.members()[0]);
                assert_eq!(r, 3);
            }
            StepOutcome::AlreadyCompressed => panic!("violation expected"),
        }
    }

    #[test]
    fn top_compress_fixpoint_satisfies_t_and_b() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for n in 2..=4usize {
            let p = cp(n, 2);
            let t = PosetTable::build(&p).unwrap();
            for _ in 0..30 {
                let ids: Vec<usize> = (0..t.len()).filter(|_| rng.gen_bool(0.35)).collect();
                let f = Family::from_members(&p, ids).unwrap();
                let (fx, steps) = top_bottom_fixpoint(&p, &t, &f).unwrap();
                assert_eq!(fx.len(), f.len());
                assert!(is_top_compressed(&p, &t, &fx));
                assert!(is_bottom_compressed(&p, &t, &fx));
                // comp never increases along the way; potential strictly decreases
                let mut cur = f.clone();
                let mut pot = potential2(&t, &cur);
                let mut comp = comp_count_table(&t, &cur);
                for step in &steps {
                    let removed: std::collections::HashSet<usize> =
                        step.removed.iter().copied().collect();
                    let members: Vec<usize> = cur
                        .members()
                        .iter()
                        .copied()
                        .filter(|id| !removed.contains(id))
                        .chain(step.added.iter().copied())
                        .collect();
                    cur = Family::from_members(&p, members).unwrap();
                    let new_pot = potential2(&t, &cur);
                    let new_comp = comp_count_table(&t, &cur);
                    assert!(new_pot < pot, "potential must strictly decrease");
                    assert!(new_comp <= comp, "comp must not increase");
                    pot = new_pot;
                    comp = new_comp;
                }
                assert_eq!(cur, fx);
            }
        }
    }

    #[test]
    fn already_compressed_families() {
        let p = cp(3, 2);
        let t = PosetTable::build(&p).unwrap();
        let mid: Vec<usize> = (0..27).filter(|&i| p.rank_of_id(i) == 3).collect();
        let f = Family::from_members(&p, mid).unwrap();
        assert!(matches!(
            top_compress_step(&p, &t, &f).unwrap(),
            StepOutcome::AlreadyCompressed
        ));
        assert!(matches!(
            bottom_compress_step(&p, &t, &f).unwrap(),
            StepOutcome::AlreadyCompressed
        ));
        assert!(matches!(
            three_compress_step(&p, &t, &f).unwrap(),
            StepOutcome::AlreadyCompressed
        ));
    }

    #[test]
    fn three_compress_on_full_window() {
        // middle five layers, full: no violations of any predicate
        let p = cp(3, 2);
        let t = PosetTable::build(&p).unwrap();
        let w = p.middle_window(5).unwrap();
        let ids: Vec<usize> = (0..27).filter(|&i| w.contains_rank(p.rank_of_id(i))).collect();
        let f = Family::from_members(&p, ids).unwrap();
        let rep = three_compress_check(&p, &t, &f).unwrap();
        assert!(rep.satisfied());
    }

    #[test]
    fn pi_compress_examples() {
        let p = cp(5, 2);
        let t = PosetTable::build(&p).unwrap();
        let n = 5u32;
        let low = n - 3; // 2
        let high = p.max_rank() - low; // 8
        let full_mid: Vec<usize> = (0..t.len())
            .filter(|&i| {
                let r = p.rank_of_id(i);
                r > low && r < high
            })
            .collect();

        // empty low layer: unchanged
        let f = Family::from_members(&p, full_mid.clone()).unwrap();
        let id_pi: Vec<usize> = (0..5).collect();
        let out = pi_compress(&p, &f, &id_pi, low).unwrap();
        assert_eq!(out, f);

        // identity pi: A moves to its complement unless present
        let a = p.id_of(&p.element(vec![1, 1, 0, 0, 0]).unwrap());
        let mut ids = full_mid.clone();
        ids.push(a);
        let f2 = Family::from_members(&p, ids).unwrap();
        let out2 = pi_compress(&p, &f2, &id_pi, low).unwrap();
        assert_eq!(out2.len(), f2.len());
        let ac = p.id_of(&p.element(vec![1, 1, 2, 2, 2]).unwrap());
        assert!(!out2.contains(a));
        assert!(out2.contains(ac));

        // idempotent
        let out3 = pi_compress(&p, &out2, &id_pi, low).unwrap();
        assert_eq!(out3, out2);
    }

    #[test]
    fn pi_compress_never_increases_comp() {
        let p = cp(5, 2);
        let t = PosetTable::build(&p).unwrap();
        let n = 5u32;
        let low = n - 3;
        let high = p.max_rank() - low;
        let mid: Vec<usize> = (0..t.len())
            .filter(|&i| {
                let r = p.rank_of_id(i);
                r > low && r < high
            })
            .collect();
        let low_layer: Vec<usize> = t.layer(low).to_vec();
        let high_layer: Vec<usize> = t.layer(high).to_vec();

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let mut ids = mid.clone();
            ids.extend(low_layer.iter().filter(|_| rng.gen_bool(0.4)));
            ids.extend(high_layer.iter().filter(|_| rng.gen_bool(0.4)));
            let f = Family::from_members(&p, ids).unwrap();

            // random involution: shuffle and pair up a prefix
            let mut perm: Vec<usize> = (0..5).collect();
            perm.shuffle(&mut rng);
            let mut pi: Vec<usize> = (0..5).collect();
            let swaps = rng.gen_range(0..=2);
            for s in 0..swaps {
                let (i, j) = (perm[2 * s], perm[2 * s + 1]);
                pi[i] = j;
                pi[j] = i;
            }

            let out = pi_compress(&p, &f, &pi, low).unwrap();
            assert_eq!(out.len(), f.len());
            assert!(comp_count_table(&t, &out) <= comp_count_table(&t, &f));
            // pair-for-pair injection: new pairs never exceed destroyed pairs
            let before = comp_count_pairwise(&p, &f);
            let after = comp_count_pairwise(&p, &out);
            assert!(after <= before);
        }
    }

    #[test]
    fn mid_compress_small_examples() {
        // {0,1}^3 with a top element and two rank-1 elements
        let p = cp(3, 1);
        let t = PosetTable::build(&p).unwrap();
        let top = p.id_of(&p.element(vec![1, 1, 1]).unwrap());
        let e1 = p.id_of(&p.element(vec![1, 0, 0]).unwrap());
        let e2 = p.id_of(&p.element(vec![0, 1, 0]).unwrap());
        let f = Family::from_members(&p, [top, e1, e2]).unwrap();
        let before = comp_count_table(&t, &f);
        let out = mid_compress(&p, &t, &f, true).unwrap();
        assert!(is_mid_compressed(&t, &out));
        assert_eq!(out.len(), 3);
        assert!(comp_count_table(&t, &out) <= before);
        // everything within the two middle layers
        for &id in out.members() {
            let r = t.rank(id);
            assert!(r == 1 || r == 2);
        }
        // already mid-compressed is a fixpoint
        let again = mid_compress(&p, &t, &out, true).unwrap();
        assert_eq!(again, out);
        // capability must be asserted
        assert!(mid_compress(&p, &t, &f, false).is_err());
    }

    #[test]
    fn mid_compress_random_families_boolean_and_subspace() {
        use crate::poset::SubspacePoset;
        use crate::subspace::SubspaceLattice;

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);

        let p = cp(4, 1);
        let t = PosetTable::build(&p).unwrap();
        for _ in 0..100 {
            let ids: Vec<usize> = (0..t.len()).filter(|_| rng.gen_bool(0.4)).collect();
            let f = Family::from_members(&p, ids).unwrap();
            let before = comp_count_table(&t, &f);
            let out = mid_compress(&p, &t, &f, true).unwrap();
            assert_eq!(out.len(), f.len());
            assert!(is_mid_compressed(&t, &out));
            assert!(comp_count_table(&t, &out) <= before);
        }

        let sp = SubspacePoset::new(SubspaceLattice::new(2, 3).unwrap()).unwrap();
        let ts = PosetTable::build(&sp).unwrap();
        for _ in 0..200 {
            let ids: Vec<usize> = (0..ts.len()).filter(|_| rng.gen_bool(0.4)).collect();
            let f = Family::from_members(&sp, ids).unwrap();
            let before = comp_count_table(&ts, &f);
            let out = mid_compress(&sp, &ts, &f, true).unwrap();
            assert_eq!(out.len(), f.len());
            assert!(is_mid_compressed(&ts, &out));
            assert!(comp_count_table(&ts, &out) <= before);
        }
    }
}

//! Explicit objects: symmetric chain decompositions, the two counterexample
//! family constructions, and standalone identity verifiers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::chain_product::{ChainProduct, Comparability, Element};
use crate::error::{capacity, domain, Result};
use crate::family::{self, Family};
use crate::poly::{self, binomial};
use crate::BigCount;

/// A symmetric chain decomposition: chains of element ids in ascending rank
/// order, jointly partitioning the poset.
#[derive(Clone, Debug)]
pub struct Scd {
    pub chains: Vec<Vec<usize>>,
}

/// Builds an SCD of `{0,..,k}^n` by the inductive product construction:
/// an SCD of P lifts to P x {0..k} by decomposing each chain-times-chain
/// grid into symmetric staircase chains.
pub fn build_scd(p: &ChainProduct) -> Result<Scd> {
    let total = p.element_count();
    if total > BigUint::from(1_000_000u32) {
        return Err(capacity(format!("poset has {total} elements, SCD cap is 10^6")));
    }
    let k = p.k() as usize;
    // chains over coordinate vectors, grown one coordinate at a time
    let mut chains: Vec<Vec<Vec<u8>>> = vec![(0..=k as u8).map(|v| vec![v]).collect()];
    for _ in 1..p.n() {
        let mut next: Vec<Vec<Vec<u8>>> = Vec::new();
        for chain in &chains {
            let a = chain.len();
            let b = k + 1;
            // staircase peel i of the a x b grid: up column x = i to
            // y = b-1-i, then right along that row to x = a-1
            for i in 0..a.min(b) {
                let mut c: Vec<Vec<u8>> = Vec::with_capacity(a + b - 1 - 2 * i);
                for y in 0..=(b - 1 - i) {
                    let mut v = chain[i].clone();
                    v.push(y as u8);
                    c.push(v);
                }
                for x in i + 1..a {
                    let mut v = chain[x].clone();
                    v.push((b - 1 - i) as u8);
                    c.push(v);
                }
                next.push(c);
            }
        }
        chains = next;
    }
    let id_chains = chains
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|coords| p.id_of(&p.element(coords).expect("construction stays in range")))
                .collect()
        })
        .collect();
    Ok(Scd { chains: id_chains })
}

#[derive(Clone, Debug)]
pub struct ScdReport {
    pub chain_count: usize,
    pub expected_chain_count: BigCount,
    pub partitions: bool,
    pub saturated: bool,
    pub symmetric: bool,
    pub chain_count_ok: bool,
}

impl ScdReport {
    pub fn all_ok(&self) -> bool {
        self.partitions && self.saturated && self.symmetric && self.chain_count_ok
    }
}

/// Checks the four SCD invariants: partition, unit rank steps, symmetric
/// endpoints, chain count = middle layer size.
pub fn verify_scd(p: &ChainProduct, scd: &Scd) -> Result<ScdReport> {
    let total = p.element_count_capped(1 << 24)?;
    let nk = p.max_rank();
    let mut seen = vec![false; total];
    let mut partitions = true;
    let mut saturated = true;
    let mut symmetric = true;
    for chain in &scd.chains {
        if chain.is_empty() {
            partitions = false;
            continue;
        }
        for &id in chain {
            if id >= total || seen[id] {
                partitions = false;
            } else {
                seen[id] = true;
            }
        }
        for w in chain.windows(2) {
            if p.rank_of_id(w[1]) != p.rank_of_id(w[0]) + 1 {
                saturated = false;
            }
            // consecutive elements must be comparable
            let a = p.element_of_id(w[0]);
            let b = p.element_of_id(w[1]);
            if p.compare(&a, &b)? != Comparability::Less {
                saturated = false;
            }
        }
        let first = p.rank_of_id(chain[0]);
        let last = p.rank_of_id(*chain.last().expect("nonempty"));
        if first + last != nk {
            symmetric = false;
        }
    }
    partitions &= seen.iter().all(|&s| s);
    let expected = p.layer_size(nk / 2)?;
    let chain_count_ok = BigUint::from(scd.chains.len()) == expected;
    Ok(ScdReport {
        chain_count: scd.chains.len(),
        expected_chain_count: expected,
        partitions,
        saturated,
        symmetric,
        chain_count_ok,
    })
}

/// The counterexample family over `{0,1,2}^n`: all of ranks n-2..n+3, minus
/// the rank-(n+3) elements with no zero coordinate, minus the single element
/// X = (0,0,1,..,1).
pub fn build_family_sec3(n: usize) -> Result<(ChainProduct, Family)> {
    if n < 6 {
        return Err(domain("the construction needs n >= 6"));
    }
    let p = ChainProduct::new(n, 2)?;
    let total = p.element_count_capped(family::GRID_CAP)?;
    let nr = n as u32;
    let x_id = p.id_of(&x_element(&p));
    let members = (0..total).filter(|&id| {
        let r = p.rank_of_id(id);
        if r < nr - 2 || r > nr + 3 {
            return false;
        }
        if id == x_id {
            return false;
        }
        if r == nr + 3 && p.element_of_id(id).value_count(0) == 0 {
            return false;
        }
        true
    });
    let f = Family::from_members(&p, members)?;
    Ok((p, f))
}

fn x_element(p: &ChainProduct) -> Element {
    let mut coords = vec![1u8; p.n()];
    coords[0] = 0;
    coords[1] = 0;
    p.element(coords).expect("valid")
}

fn b_paper_element(p: &ChainProduct) -> Element {
    // (0, 2, 2, 2, 2, 1, 1, ..., 1)
    let mut coords = vec![1u8; p.n()];
    coords[0] = 0;
    for c in coords.iter_mut().take(5).skip(1) {
        *c = 2;
    }
    p.element(coords).expect("valid")
}

/// Expected family size: Sigma_6(n,2) - C(n,3) - 1.
pub fn sec3_expected_size(p: &ChainProduct) -> Result<BigCount> {
    Ok(p.sigma(6)? - binomial(p.n(), 3) - BigUint::one())
}

#[derive(Clone, Debug)]
pub struct Sec3Report {
    pub n: usize,
    pub family_size: BigCount,
    pub size_identity_ok: bool,
    pub comp_f: BigCount,
    pub comp_x: BigCount,
    pub comp_b_paper: BigCount,
    /// C(n,5) + C(n,4), the stated lower bound on comp(X, F).
    pub comp_x_bound: BigCount,
    pub comp_x_bound_ok: bool,
    pub b_beats_x: bool,
    /// Exact canonical-centered minimum of the same size (partial layer at
    /// n+3 or n-3, whichever is better).
    pub canonical_centered_min: BigCount,
    pub beats_canonical_centered: bool,
}

/// Exact comparison of the constructed family against the best canonical
/// centered family of equal size.
pub fn compare_sec3(n: usize) -> Result<Sec3Report> {
    if !(6..=14).contains(&n) {
        return Err(domain("exact comparison supported for n in 6..=14"));
    }
    let (p, f) = build_family_sec3(n)?;
    let expected_size = sec3_expected_size(&p)?;
    let size_identity_ok = BigUint::from(f.len()) == expected_size;

    let comp_f = family::comp_count_transform(&p, &f)?;
    let x = x_element(&p);
    let b = b_paper_element(&p);
    let comp_x = family::comp_of_element(&p, p.id_of(&x), &f);
    let comp_b = family::comp_of_element(&p, p.id_of(&b), &f);
    let comp_x_bound = binomial(n, 5) + binomial(n, 4);

    // canonical centered minimum: full 5-layer window plus a partial layer
    // at distance 3, above or below
    let window = p.middle_window(5)?;
    let nr = n as u32;
    let s = p
        .layer_size(nr + 3)?
        .to_usize()
        .ok_or_else(|| capacity("layer too large"))?
        - binomial(n, 3).to_usize().ok_or_else(|| capacity("binomial too large"))?
        - 1;
    let (above, _) = family::min_comp_one_partial_layer(&p, window, nr + 3, s)?;
    let (below, _) = family::min_comp_one_partial_layer(&p, window, nr - 3, s)?;
    let canonical_centered_min = above.min(below);

    Ok(Sec3Report {
        n,
        family_size: BigUint::from(f.len()),
        size_identity_ok,
        comp_x_bound_ok: comp_x >= comp_x_bound,
        b_beats_x: comp_b < comp_x,
        beats_canonical_centered: comp_f < canonical_centered_min,
        comp_f,
        comp_x,
        comp_b_paper: comp_b,
        comp_x_bound,
        canonical_centered_min,
    })
}

/// Closed-form degree of X = (0,0,1,..,1) against the constructed family:
/// supersets at distances 1..=5 minus the C(n,3) removed top elements.
pub fn sec3_comp_x_closed_form(n: usize) -> BigCount {
    // supersets of X at distance d: coefficient of x^d in (1+x+x^2)^2 (1+x)^(n-2)
    let poly = poly::mul_trunc(
        &poly::product_of_chain_polys([2usize, 2], 5),
        &binomial_poly(n - 2, 5),
        5,
    );
    let mut total = BigUint::zero();
    for d in 1..=5 {
        total += poly::coeff(&poly, d);
    }
    total - binomial(n, 3)
}

/// Closed-form degree of B = (0,2,2,2,2,1,..,1): subsets at distances 1..=5
/// minus the excluded element X (which lies below B).
pub fn sec3_comp_b_closed_form(n: usize) -> BigCount {
    let poly = poly::mul_trunc(
        &poly::product_of_chain_polys([2usize, 2, 2, 2], 5),
        &binomial_poly(n - 5, 5),
        5,
    );
    let mut total = BigUint::zero();
    for d in 1..=5 {
        total += poly::coeff(&poly, d);
    }
    total - BigUint::one()
}

fn binomial_poly(n: usize, max_deg: usize) -> poly::Poly {
    // (1 + x)^n truncated
    poly::product_of_chain_polys(std::iter::repeat(1usize).take(n), max_deg)
}

/// The second counterexample family: the full j-layer window descriptor with
/// the swapped elements B (balanced coordinates, top rank of the window) and
/// C (coordinates k or 0 except possibly one, one rank above the window).
#[derive(Clone, Debug)]
pub struct Sec5Objects {
    pub n: usize,
    pub k: u8,
    pub j: u32,
    pub window_lo: u32,
    pub window_hi: u32,
    pub b: Element,
    pub c: Element,
    pub b_c_comparable: bool,
    pub c_zero_count: usize,
    pub c_zero_bound_ok: bool,
}

pub fn build_family_sec5(n: usize, k: u8, j: u32) -> Result<Sec5Objects> {
    let p = ChainProduct::new(n, k)?;
    let nk = p.max_rank();
    if j == 0 || j >= nk {
        return Err(domain("need 0 < j < nk"));
    }
    if (nk + j) % 2 != 0 {
        return Err(domain("nk + j must be even"));
    }
    let top = (nk + j) / 2;

    // B: coordinates floor(k/2) or floor(k/2)+1 with rank = top, smallest
    // arrangement first (low values in front)
    let f = k / 2;
    let t_count = top as i64 - (n as i64) * (f as i64);
    if t_count < 0 || t_count > n as i64 {
        return Err(domain("no balanced element exists at the window top"));
    }
    let t_count = t_count as usize;
    let mut b_coords = vec![f; n];
    for c in b_coords.iter_mut().take(t_count) {
        *c = f + 1;
    }
    b_coords.sort_unstable();
    let b = p.element(b_coords)?;
    debug_assert_eq!(b.rank(), top);

    // C: rank top+1, coordinates k or 0 except at most one residual
    let c_rank = top + 1;
    let full = (c_rank / k as u32) as usize;
    let res = (c_rank % k as u32) as u8;
    if full + (res > 0) as usize > n {
        return Err(domain("no k-or-0 element exists one rank above the window"));
    }
    let mut c_coords = vec![0u8; n];
    for x in c_coords.iter_mut().take(full) {
        *x = k;
    }
    if res > 0 {
        c_coords[full] = res;
    }
    c_coords.sort_unstable();
    let c = p.element(c_coords)?;
    debug_assert_eq!(c.rank(), c_rank);

    let zero_count = c.value_count(0);
    // the construction promises at least (n - j) / 2 zeros
    let c_zero_bound_ok = 2 * zero_count as i64 >= n as i64 - j as i64;
    let cmp = p.compare(&b, &c)?;
    Ok(Sec5Objects {
        n,
        k,
        j,
        window_lo: (nk - j) / 2 + 1,
        window_hi: top,
        b_c_comparable: cmp.comparable(),
        c_zero_count: zero_count,
        c_zero_bound_ok,
        b,
        c,
    })
}

#[derive(Clone, Debug)]
pub struct Sec5Deltas {
    pub delta_b: BigCount,
    pub delta_c: BigCount,
    /// Sign of comp(F') - comp(F): -1, 0 or +1.
    pub comp_diff_sign: i8,
    /// The displayed strict inequality delta(B) > C(n, j-1).
    pub delta_b_bound: BigCount,
    pub delta_b_bound_ok: bool,
}

/// Shadow sums of B and C inside the window, by exact coefficient
/// extraction, plus the resulting sign of the swap.
pub fn delta_sums_sec5(n: usize, k: u8, j: u32) -> Result<Sec5Deltas> {
    let obj = build_family_sec5(n, k, j)?;
    let p = ChainProduct::new(n, k)?;

    // delta(B): strict subsets at distances 1..=j-1 (all inside the window)
    let bp = p.down_profile(&obj.b, j as usize);
    let mut delta_b = BigUint::zero();
    for l in 1..j as usize {
        delta_b += poly::coeff(&bp, l);
    }
    // delta(C): subsets at distances 1..=j (ranks inside the window)
    let cp_poly = p.down_profile(&obj.c, j as usize + 1);
    let mut delta_c = BigUint::zero();
    for l in 1..=j as usize {
        delta_c += poly::coeff(&cp_poly, l);
    }

    // comp(F') - comp(F) = delta(C) - [B < C] - delta(B)
    let adj = if obj.b_c_comparable { BigUint::one() } else { BigUint::zero() };
    let diff = BigInt::from(delta_c.clone()) - BigInt::from(adj) - BigInt::from(delta_b.clone());
    let sign = match diff.sign() {
        num_bigint::Sign::Minus => -1i8,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    };
    let bound = binomial(n, j as usize - 1);
    Ok(Sec5Deltas {
        delta_b_bound_ok: delta_b > bound,
        delta_b,
        delta_c,
        comp_diff_sign: sign,
        delta_b_bound: bound,
    })
}

/// Materialized cross-check of the delta sums for small posets: builds the
/// window family explicitly and counts subsets of B and C inside it.
pub fn delta_sums_sec5_brute(n: usize, k: u8, j: u32) -> Result<(BigCount, BigCount)> {
    let obj = build_family_sec5(n, k, j)?;
    let p = ChainProduct::new(n, k)?;
    let total = p.element_count_capped(1 << 22)?;
    let mut db = 0u64;
    let mut dc = 0u64;
    for id in 0..total {
        let r = p.rank_of_id(id);
        if r < obj.window_lo || r > obj.window_hi {
            continue;
        }
        let e = p.element_of_id(id);
        if r < obj.b.rank() && p.compare(&e, &obj.b)? == Comparability::Less {
            db += 1;
        }
        if p.compare(&e, &obj.c)? == Comparability::Less {
            dc += 1;
        }
    }
    Ok((BigUint::from(db), BigUint::from(dc)))
}

#[derive(Clone, Debug)]
pub struct AvgThirdRow {
    pub c: usize,
    pub f_c: BigCount,
    /// None on the boundary where the ratio denominator vanishes.
    pub ratio_identity_ok: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct AvgThirdReport {
    pub n: usize,
    pub rows: Vec<AvgThirdRow>,
    pub sum_ok: bool,
    pub all_ratios_ok: bool,
}

/// The zero-count profile of the layer above the middle in `{0,1,2}^n`:
/// f(c) = C(n,c) C(n-c, c+1), its sum identity and its ratio identity.
pub fn verify_averagethird(n: usize) -> Result<AvgThirdReport> {
    let p = ChainProduct::new(n, 2)?;
    let f = |c: usize| -> BigUint {
        if c >= n {
            return BigUint::zero();
        }
        binomial(n, c) * binomial(n - c, c + 1)
    };
    let mut rows = Vec::new();
    let mut total = BigUint::zero();
    for c in 0..=n / 2 {
        let fc = f(c);
        total += &fc;
        // f(c)/f(c+1) = (c+1)(c+2) / ((n-2c-2)(n-2c-1)), cross-multiplied
        let ratio_identity_ok = if n as i64 - 2 * c as i64 - 2 <= 0 {
            None
        } else {
            let lhs = &fc * BigUint::from((n - 2 * c - 2) as u64 * (n - 2 * c - 1) as u64);
            let rhs = f(c + 1) * BigUint::from((c + 1) as u64 * (c + 2) as u64);
            Some(lhs == rhs)
        };
        rows.push(AvgThirdRow { c, f_c: fc, ratio_identity_ok });
    }
    let sum_ok = total == p.layer_size(n as u32 + 1)?;
    let all_ratios_ok = rows.iter().all(|r| r.ratio_identity_ok.unwrap_or(true));
    Ok(AvgThirdReport { n, rows, sum_ok, all_ratios_ok })
}

/// Enumeration cross-check of f(c) for small n.
pub fn averagethird_brute(n: usize) -> Result<Vec<u64>> {
    let p = ChainProduct::new(n, 2)?;
    let total = p.element_count_capped(1 << 22)?;
    let mut counts = vec![0u64; n + 1];
    for id in 0..total {
        if p.rank_of_id(id) == n as u32 + 1 {
            counts[p.element_of_id(id).value_count(0)] += 1;
        }
    }
    Ok(counts)
}

#[derive(Clone, Debug)]
pub struct NumberNbrsReport {
    pub n: usize,
    pub elements_checked: usize,
    pub down1_ok: bool,
    pub down2_ok: bool,
    pub down3_ok: bool,
    pub a0_zeros_at_down3_ok: bool,
}

impl NumberNbrsReport {
    pub fn all_ok(&self) -> bool {
        self.down1_ok && self.down2_ok && self.down3_ok && self.a0_zeros_at_down3_ok
    }
}

/// For every A of rank >= n+2 in `{0,1,2}^n`, counts comparable elements
/// one, two and three levels down by enumeration and checks the closed
/// forms, including the count of distance-3 subsets keeping a_0 zeros.
pub fn verify_number_nbrs(n: usize) -> Result<NumberNbrsReport> {
    if n > 7 {
        return Err(capacity("exhaustive check supported for n <= 7"));
    }
    let p = ChainProduct::new(n, 2)?;
    let total = p.element_count_capped(1 << 22)?;
    let ids: Vec<usize> = (0..total).collect();
    let mut checked = 0usize;
    let (mut ok1, mut ok2, mut ok3, mut ok_a0) = (true, true, true, true);
    for &id in &ids {
        let a = p.element_of_id(id);
        let r = a.rank();
        if (r as usize) < n + 2 {
            continue;
        }
        checked += 1;
        let a0 = a.value_count(0) as u64;
        let a1 = a.value_count(1) as u64;
        let a2 = a.value_count(2) as u64;
        let down = |lvl: u32| -> (u64, u64) {
            // (count, count with exactly a0 zeros)
            let mut cnt = 0u64;
            let mut with_a0 = 0u64;
            for &jd in &ids {
                let b = p.element_of_id(jd);
                if b.rank() == r - lvl && p.compare(&b, &a).expect("same poset") == Comparability::Less {
                    cnt += 1;
                    if b.value_count(0) as u64 == a0 {
                        with_a0 += 1;
                    }
                }
            }
            (cnt, with_a0)
        };
        let (d1, _) = down(1);
        let (d2, _) = down(2);
        let (d3, d3_a0) = down(3);
        let c2 = |x: u64| x * x.saturating_sub(1) / 2;
        let c3 = |x: u64| {
            if x < 3 {
                0
            } else {
                x * (x - 1) * (x - 2) / 6
            }
        };
        ok1 &= d1 == a1 + a2;
        ok2 &= d2 == c2(a1 + a2) + a2;
        ok3 &= d3 == c3(a1 + a2) + a2 * (a1 + a2 - 1);
        ok_a0 &= d3_a0 == c3(a2);
    }
    Ok(NumberNbrsReport {
        n,
        elements_checked: checked,
        down1_ok: ok1,
        down2_ok: ok2,
        down3_ok: ok3,
        a0_zeros_at_down3_ok: ok_a0,
    })
}

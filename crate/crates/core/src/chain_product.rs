//! The chain-product poset `{0,..,k}^n` ordered coordinatewise.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{capacity, domain, Result};
use crate::poly::{self, Poly};
use crate::BigCount;

/// Outcome of comparing two poset elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparability {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl Comparability {
    pub fn comparable(self) -> bool {
        !matches!(self, Comparability::Incomparable)
    }
}

/// A point of `{0,..,k}^n` with its rank (coordinate sum) cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    coords: Vec<u8>,
    rank: u32,
}

impl Element {
    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Number of coordinates equal to `v` (the paper-style counts a_0, a_1, ...).
    pub fn value_count(&self, v: u8) -> usize {
        self.coords.iter().filter(|&&c| c == v).count()
    }
}

/// Inclusive rank window; the canonical j-middle window places its extra
/// layer above the middle when the tie direction matters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayerWindow {
    pub lo: u32,
    pub hi: u32,
}

impl LayerWindow {
    pub fn layer_count(&self) -> u32 {
        self.hi - self.lo + 1
    }

    pub fn contains_rank(&self, r: u32) -> bool {
        self.lo <= r && r <= self.hi
    }
}

/// The poset `{0,..,k}^n`.
#[derive(Debug)]
pub struct ChainProduct {
    n: usize,
    k: u8,
    layer_sizes: OnceLock<Vec<BigUint>>,
}

/// Largest coordinate bound that still has a single-character digit encoding.
pub const MAX_ENCODABLE_K: u8 = 35;

fn digit_char(v: u8) -> char {
    if v < 10 {
        (b'0' + v) as char
    } else {
        (b'a' + v - 10) as char
    }
}

fn digit_value(c: char) -> Option<u8> {
    match c {
        '0'..='9' => Some(c as u8 - b'0'),
        'a'..='z' => Some(c as u8 - b'a' + 10),
        _ => None,
    }
}

impl ChainProduct {
    pub fn new(n: usize, k: u8) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(domain("chain product needs n >= 1 and k >= 1"));
        }
        if k > MAX_ENCODABLE_K {
            return Err(domain(format!("k = {k} exceeds the encodable bound {MAX_ENCODABLE_K}")));
        }
        Ok(ChainProduct {
            n,
            k,
            layer_sizes: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Rank of the poset, `n * k`.
    pub fn max_rank(&self) -> u32 {
        (self.n as u32) * (self.k as u32)
    }

    pub fn element_count(&self) -> BigCount {
        BigUint::from(self.k as u32 + 1).pow(self.n as u32)
    }

    /// Element count as usize, or a capacity error if it does not fit the
    /// given cap.
    pub fn element_count_capped(&self, cap: usize) -> Result<usize> {
        let total = self.element_count();
        match total.to_usize() {
            Some(t) if t <= cap => Ok(t),
            _ => Err(capacity(format!(
                "poset has {total} elements, exceeding the cap of {cap}"
            ))),
        }
    }

    pub fn element(&self, coords: Vec<u8>) -> Result<Element> {
        if coords.len() != self.n {
            return Err(domain(format!(
                "expected {} coordinates, got {}",
                self.n,
                coords.len()
            )));
        }
        if coords.iter().any(|&c| c > self.k) {
            return Err(domain(format!("coordinate exceeds k = {}", self.k)));
        }
        let rank = coords.iter().map(|&c| c as u32).sum();
        Ok(Element { coords, rank })
    }

    pub fn zero_element(&self) -> Element {
        Element {
            coords: vec![0; self.n],
            rank: 0,
        }
    }

    pub fn top_element(&self) -> Element {
        Element {
            coords: vec![self.k; self.n],
            rank: self.max_rank(),
        }
    }

    /// Mixed-radix id of an element; coordinate 1 is the most significant
    /// digit, so id order coincides with lexicographic coordinate order.
    pub fn id_of(&self, e: &Element) -> usize {
        let base = self.k as usize + 1;
        e.coords.iter().fold(0usize, |acc, &c| acc * base + c as usize)
    }

    pub fn element_of_id(&self, mut id: usize) -> Element {
        let base = self.k as usize + 1;
        let mut coords = vec![0u8; self.n];
        for i in (0..self.n).rev() {
            coords[i] = (id % base) as u8;
            id /= base;
        }
        let rank = coords.iter().map(|&c| c as u32).sum();
        Element { coords, rank }
    }

    pub fn rank_of_id(&self, mut id: usize) -> u32 {
        let base = self.k as usize + 1;
        let mut rank = 0u32;
        while id > 0 {
            rank += (id % base) as u32;
            id /= base;
        }
        rank
    }

    /// Base-(k+1) digit string, most significant digit = coordinate 1.
    pub fn encode(&self, e: &Element) -> String {
        e.coords.iter().map(|&c| digit_char(c)).collect()
    }

    pub fn decode(&self, s: &str) -> Result<Element> {
        let coords: Option<Vec<u8>> = s.chars().map(digit_value).collect();
        let coords = coords.ok_or_else(|| domain(format!("invalid digit in {s:?}")))?;
        self.element(coords)
    }

    fn layer_sizes_vec(&self) -> &Vec<BigUint> {
        self.layer_sizes.get_or_init(|| {
            let nk = self.max_rank() as usize;
            poly::product_of_chain_polys(std::iter::repeat(self.k as usize).take(self.n), nk)
        })
    }

    /// Layer size `l_r(n, k)`: the coefficient of `x^r` in `(1+x+..+x^k)^n`.
    pub fn layer_size(&self, r: u32) -> Result<BigCount> {
        if r > self.max_rank() {
            return Err(domain(format!("rank {r} exceeds poset rank {}", self.max_rank())));
        }
        Ok(self.layer_sizes_vec()[r as usize].clone())
    }

    /// The canonical j-middle window: ranks `floor((nk-j)/2)+1 ..= floor((nk+j)/2)`.
    pub fn middle_window(&self, j: u32) -> Result<LayerWindow> {
        let nk = self.max_rank() as i64;
        let j = j as i64;
        if j < 1 || j > nk + 1 {
            return Err(domain(format!("window width {j} out of range 1..={}", nk + 1)));
        }
        let lo = (nk - j).div_euclid(2) + 1;
        let hi = (nk + j).div_euclid(2);
        Ok(LayerWindow {
            lo: lo as u32,
            hi: hi as u32,
        })
    }

    /// Total size of the j middle layers.
    pub fn sigma(&self, j: u32) -> Result<BigCount> {
        if j == 0 {
            return Ok(BigUint::zero());
        }
        if j > self.max_rank() + 1 {
            return Err(domain(format!(
                "sigma width {j} out of range 0..={}",
                self.max_rank() + 1
            )));
        }
        let w = self.middle_window(j)?;
        let sizes = self.layer_sizes_vec();
        Ok((w.lo..=w.hi).map(|r| &sizes[r as usize]).sum())
    }

    pub fn compare(&self, a: &Element, b: &Element) -> Result<Comparability> {
        if a.coords.len() != b.coords.len() {
            return Err(domain("dimension mismatch"));
        }
        let mut le = true;
        let mut ge = true;
        for (x, y) in a.coords.iter().zip(&b.coords) {
            if x > y {
                le = false;
            }
            if x < y {
                ge = false;
            }
        }
        Ok(match (le, ge) {
            (true, true) => Comparability::Equal,
            (true, false) => Comparability::Less,
            (false, true) => Comparability::Greater,
            (false, false) => Comparability::Incomparable,
        })
    }

    /// Coordinatewise complement `(k - A_1, ..., k - A_n)`.
    pub fn complement(&self, a: &Element) -> Element {
        let coords: Vec<u8> = a.coords.iter().map(|&c| self.k - c).collect();
        let rank = self.max_rank() - a.rank;
        Element { coords, rank }
    }

    /// `|N_r(A)|`: elements of rank `r` comparable (non-strictly) with `A`.
    /// At `r = |A|` this is 1, the element itself.
    pub fn neighbor_count(&self, a: &Element, r: u32) -> Result<BigCount> {
        if r > self.max_rank() {
            return Err(domain(format!("rank {r} exceeds poset rank {}", self.max_rank())));
        }
        if r <= a.rank {
            let d = (a.rank - r) as usize;
            let p = poly::product_of_chain_polys(a.coords.iter().map(|&c| c as usize), d);
            Ok(poly::coeff(&p, d))
        } else {
            let d = (r - a.rank) as usize;
            let p = poly::product_of_chain_polys(a.coords.iter().map(|&c| (self.k - c) as usize), d);
            Ok(poly::coeff(&p, d))
        }
    }

    /// Shadow count `delta(B, a)`: elements of rank `a` strictly below `B`.
    /// Total by convention: 0 whenever `a >= |B|`.
    pub fn delta(&self, b: &Element, a: u32) -> BigCount {
        if a >= b.rank {
            return BigUint::zero();
        }
        self.neighbor_count(b, a).expect("a < |B| <= nk is in range")
    }

    /// `delta_min(b, a)`: minimum shadow count over all elements of rank `b`.
    /// The shadow count depends only on the multiset of coordinates, so the
    /// minimum is taken over coordinate multisets.
    pub fn delta_min(&self, b: u32, a: u32) -> Result<BigCount> {
        if !(0 < a && a < b && b <= self.max_rank()) {
            return Err(domain(format!(
                "delta_min requires 0 < a < b <= {}, got a={a}, b={b}",
                self.max_rank()
            )));
        }
        let mut best: Option<BigUint> = None;
        let mut multiset = Vec::new();
        self.for_each_rank_multiset(b, &mut multiset, &mut |ms| {
            let d = (b - a) as usize;
            let p = poly::product_of_chain_polys(ms.iter().map(|&c| c as usize), d);
            let v = poly::coeff(&p, d);
            if best.as_ref().is_none_or(|cur| &v < cur) {
                best = Some(v);
            }
        });
        best.ok_or_else(|| domain(format!("layer {b} is empty")))
    }

    /// Visit every nonincreasing coordinate multiset of the given rank.
    fn for_each_rank_multiset(&self, rank: u32, prefix: &mut Vec<u8>, visit: &mut impl FnMut(&[u8])) {
        fn rec(
            n_left: usize,
            rank_left: u32,
            max_val: u8,
            prefix: &mut Vec<u8>,
            visit: &mut impl FnMut(&[u8]),
        ) {
            if n_left == 0 {
                if rank_left == 0 {
                    visit(prefix);
                }
                return;
            }
            if rank_left > n_left as u32 * max_val as u32 {
                return;
            }
            let hi = max_val.min(rank_left.min(max_val as u32) as u8);
            for v in (0..=hi).rev() {
                prefix.push(v);
                rec(n_left - 1, rank_left - v as u32, v, prefix, visit);
                prefix.pop();
            }
        }
        rec(self.n, rank, self.k, prefix, visit);
    }

    /// The shadow-reduction loop: repeatedly decrement the lowest-index
    /// coordinate outside {0,1}, stopping as soon as every coordinate is 0/1
    /// or the rank has dropped to `target + 1`.
    pub fn bstar_reduce(&self, b: &Element, target: u32) -> Result<Element> {
        if b.rank <= target {
            return Err(domain(format!(
                "bstar_reduce requires |B| > target, got |B|={} target={target}",
                b.rank
            )));
        }
        let mut cur = b.clone();
        loop {
            if cur.coords.iter().all(|&c| c <= 1) {
                return Ok(cur);
            }
            if cur.rank == target + 1 {
                return Ok(cur);
            }
            let i = cur
                .coords
                .iter()
                .position(|&c| c >= 2)
                .expect("a coordinate outside {0,1} exists");
            cur.coords[i] -= 1;
            cur.rank -= 1;
        }
    }

    /// All elements of one layer, in increasing id (lexicographic) order.
    pub fn layer_elements(&self, r: u32) -> Result<Vec<Element>> {
        if r > self.max_rank() {
            return Err(domain(format!("rank {r} exceeds poset rank {}", self.max_rank())));
        }
        let mut out = Vec::new();
        let mut coords = vec![0u8; self.n];
        self.layer_rec(0, r, &mut coords, &mut out);
        Ok(out)
    }

    fn layer_rec(&self, i: usize, rank_left: u32, coords: &mut Vec<u8>, out: &mut Vec<Element>) {
        let left = (self.n - i) as u32 * self.k as u32;
        if rank_left > left {
            return;
        }
        if i == self.n {
            out.push(Element {
                coords: coords.clone(),
                rank: coords.iter().map(|&c| c as u32).sum(),
            });
            return;
        }
        for v in 0..=self.k.min(rank_left.min(self.k as u32) as u8) {
            coords[i] = v;
            self.layer_rec(i + 1, rank_left - v as u32, coords, out);
            coords[i] = 0;
        }
    }

    /// Neighbor polynomial of subsets: coefficients of distances 0..=max_d
    /// below `a` (exact subset counts by distance).
    pub fn down_profile(&self, a: &Element, max_d: usize) -> Poly {
        poly::product_of_chain_polys(a.coords.iter().map(|&c| c as usize), max_d)
    }

    /// Same for supersets above `a`.
    pub fn up_profile(&self, a: &Element, max_d: usize) -> Poly {
        poly::product_of_chain_polys(a.coords.iter().map(|&c| (self.k - c) as usize), max_d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn cp(n: usize, k: u8) -> ChainProduct {
        ChainProduct::new(n, k).unwrap()
    }

    /// Brute-force layer size by walking every element.
    fn layer_size_brute(p: &ChainProduct, r: u32) -> u64 {
        let total = p.element_count_capped(1 << 20).unwrap();
        (0..total).filter(|&id| p.rank_of_id(id) == r).count() as u64
    }

    #[test]
    fn layer_size_examples() {
        assert_eq!(cp(2, 2).layer_size(0).unwrap(), BigUint::from(1u32));
        // derived by exhaustive enumeration
        assert_eq!(layer_size_brute(&cp(2, 2), 2), 3);
        assert_eq!(cp(2, 2).layer_size(2).unwrap(), BigUint::from(3u32));
        assert_eq!(layer_size_brute(&cp(3, 2), 3), 7);
        assert_eq!(cp(3, 2).layer_size(3).unwrap(), BigUint::from(7u32));
        assert!(cp(2, 2).layer_size(5).is_err());
    }

    #[test]
    fn layer_symmetry_and_unimodality_small() {
        for n in 1..=8usize {
            for k in 1..=8u8 {
                if n * k as usize > 24 {
                    continue;
                }
                let p = cp(n, k);
                let nk = p.max_rank();
                let sizes: Vec<BigUint> = (0..=nk).map(|r| p.layer_size(r).unwrap()).collect();
                let total: BigUint = sizes.iter().sum();
                assert_eq!(total, p.element_count());
                for r in 0..=nk {
                    assert_eq!(sizes[r as usize], sizes[(nk - r) as usize]);
                }
                for r in 1..=nk / 2 {
                    assert!(sizes[(r - 1) as usize] <= sizes[r as usize]);
                }
            }
        }
    }

    #[test]
    fn sigma_examples() {
        // 6 + 7 + 6 by enumeration of {0,1,2}^3
        let p = cp(3, 2);
        let brute: u64 = [2u32, 3, 4].iter().map(|&r| layer_size_brute(&p, r)).sum();
        assert_eq!(brute, 19);
        assert_eq!(p.sigma(3).unwrap(), BigUint::from(19u32));
        assert_eq!(cp(1, 1).sigma(2).unwrap(), BigUint::from(2u32));
        assert_eq!(cp(2, 2).sigma(1).unwrap(), BigUint::from(3u32));
        assert_eq!(p.sigma(0).unwrap(), BigUint::zero());
        assert_eq!(p.sigma(7).unwrap(), BigUint::from(27u32));
        assert!(p.sigma(8).is_err());
    }

    #[test]
    fn window_tie_direction() {
        // nk even: the extra layer of an even-width window sits above the middle
        let p = cp(3, 2); // nk = 6
        assert_eq!(p.middle_window(1).unwrap(), LayerWindow { lo: 3, hi: 3 });
        assert_eq!(p.middle_window(2).unwrap(), LayerWindow { lo: 3, hi: 4 });
        assert_eq!(p.middle_window(6).unwrap(), LayerWindow { lo: 1, hi: 6 });
        assert_eq!(p.middle_window(7).unwrap(), LayerWindow { lo: 0, hi: 6 });
        // nk odd: width-1 window is the upper middle layer
        let q = cp(3, 1); // nk = 3
        assert_eq!(q.middle_window(1).unwrap(), LayerWindow { lo: 2, hi: 2 });
        assert_eq!(q.middle_window(2).unwrap(), LayerWindow { lo: 1, hi: 2 });
    }

    #[test]
    fn compare_examples() {
        let p = cp(2, 2);
        let a = p.element(vec![0, 1]).unwrap();
        let b = p.element(vec![1, 1]).unwrap();
        assert_eq!(p.compare(&a, &b).unwrap(), Comparability::Less);
        let c = p.element(vec![2, 0]).unwrap();
        let d = p.element(vec![0, 2]).unwrap();
        assert_eq!(p.compare(&c, &d).unwrap(), Comparability::Incomparable);
        assert_eq!(p.compare(&b, &b).unwrap(), Comparability::Equal);
        let p3 = cp(3, 2);
        let e = p3.element(vec![0, 1, 2]).unwrap();
        assert!(p.compare(&a, &e).is_err());
    }

    #[test]
    fn complement_examples() {
        let p = cp(3, 2);
        let a = p.element(vec![0, 2, 1]).unwrap();
        assert_eq!(p.complement(&a).coords(), &[2, 0, 1]);
        assert_eq!(p.complement(&p.complement(&a)), a);
        let q = cp(2, 2);
        let b = q.element(vec![1, 1]).unwrap();
        assert_eq!(q.complement(&b), b);
        let r = cp(2, 4);
        let c = r.element(vec![0, 4]).unwrap();
        assert_eq!(r.complement(&c).coords(), &[4, 0]);
    }

    #[test]
    fn complement_reverses_order() {
        let p = cp(3, 2);
        let total = p.element_count_capped(1 << 10).unwrap();
        for i in 0..total {
            for j in 0..total {
                let a = p.element_of_id(i);
                let b = p.element_of_id(j);
                if p.compare(&a, &b).unwrap() == Comparability::Less {
                    assert_eq!(
                        p.compare(&p.complement(&b), &p.complement(&a)).unwrap(),
                        Comparability::Less
                    );
                }
            }
        }
    }

    #[test]
    fn neighbor_count_examples() {
        let p = cp(2, 2);
        let a = p.element(vec![1, 1]).unwrap();
        // supersets of (1,1) at rank 3: (2,1), (1,2) -- derived by enumeration
        assert_eq!(p.neighbor_count(&a, 3).unwrap(), BigUint::from(2u32));
        let b = p.element(vec![2, 1]).unwrap();
        assert_eq!(p.neighbor_count(&b, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(p.neighbor_count(&a, a.rank()).unwrap(), BigUint::one());
        assert!(p.neighbor_count(&a, 5).is_err());
    }

    #[test]
    fn neighbor_count_matches_brute_enumeration() {
        for (n, k) in [(3usize, 2u8), (2, 3), (4, 1), (2, 4)] {
            let p = cp(n, k);
            let total = p.element_count_capped(1 << 20).unwrap();
            for id in 0..total {
                let a = p.element_of_id(id);
                for r in 0..=p.max_rank() {
                    let brute = (0..total)
                        .filter(|&j| {
                            let b = p.element_of_id(j);
                            b.rank() == r && p.compare(&a, &b).unwrap().comparable()
                        })
                        .count();
                    assert_eq!(
                        p.neighbor_count(&a, r).unwrap(),
                        BigUint::from(brute),
                        "n={n} k={k} A={:?} r={r}",
                        a.coords()
                    );
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        let p = cp(2, 2);
        let b = p.element(vec![2, 1]).unwrap();
        assert_eq!(p.delta(&b, 1), BigUint::from(2u32));
        assert_eq!(p.delta(&b, 0), BigUint::one());
        let c = p.element(vec![2, 2]).unwrap();
        assert_eq!(p.delta(&c, 2), BigUint::from(3u32));
        // a >= |B| returns zero rather than erroring
        assert_eq!(p.delta(&b, 3), BigUint::zero());
        assert_eq!(p.delta(&b, 4), BigUint::zero());
    }

    #[test]
    fn delta_min_examples() {
        let p = cp(2, 2);
        assert_eq!(p.delta_min(3, 1).unwrap(), BigUint::from(2u32));
        assert!(p.delta_min(1, 0).is_err());
        // brute-force oracle over all |B| = 4 in {0,1,2}^3
        let q = cp(3, 2);
        let total = q.element_count_capped(1 << 10).unwrap();
        let brute = (0..total)
            .filter(|&id| q.rank_of_id(id) == 4)
            .map(|id| {
                let b = q.element_of_id(id);
                (0..total)
                    .filter(|&j| {
                        let a = q.element_of_id(j);
                        a.rank() == 3 && q.compare(&a, &b).unwrap() == Comparability::Less
                    })
                    .count()
            })
            .min()
            .unwrap();
        assert_eq!(q.delta_min(4, 3).unwrap(), BigUint::from(brute));
        assert_eq!(brute, 2);
    }

    #[test]
    fn bstar_examples() {
        let p = cp(3, 2);
        let b = p.element(vec![2, 2, 0]).unwrap();
        let r = p.bstar_reduce(&b, 1).unwrap();
        assert_eq!(r.coords(), &[1, 1, 0]);
        assert_eq!(r.rank(), 2);

        let q = cp(2, 1);
        let b2 = q.element(vec![1, 1]).unwrap();
        assert_eq!(q.bstar_reduce(&b2, 0).unwrap(), b2);

        let s = cp(2, 3);
        let b3 = s.element(vec![3, 3]).unwrap();
        let r3 = s.bstar_reduce(&b3, 2).unwrap();
        assert_eq!(r3.coords(), &[1, 2]);
        assert_eq!(r3.rank(), 3);

        assert!(p.bstar_reduce(&p.zero_element(), 0).is_err());
    }

    #[test]
    fn bstar_preserves_support_at_01_stop() {
        let p = cp(4, 3);
        let total = p.element_count_capped(1 << 10).unwrap();
        for id in 0..total {
            let b = p.element_of_id(id);
            if b.rank() == 0 {
                continue;
            }
            for target in 0..b.rank() {
                let r = p.bstar_reduce(&b, target).unwrap();
                assert_eq!(p.compare(&r, &b).unwrap() != Comparability::Greater, true);
                assert!(r.rank() > target);
                if r.coords().iter().all(|&c| c <= 1) {
                    let nz_b = b.coords().iter().filter(|&&c| c > 0).count();
                    let nz_r = r.coords().iter().filter(|&&c| c > 0).count();
                    assert_eq!(nz_b, nz_r);
                } else {
                    assert_eq!(r.rank(), target + 1);
                }
            }
        }
    }

    #[test]
    fn encode_decode() {
        let p = cp(3, 2);
        let a = p.element(vec![0, 2, 1]).unwrap();
        assert_eq!(p.encode(&a), "021");
        assert_eq!(p.decode("021").unwrap(), a);
        assert!(p.decode("03").is_err());
        assert!(p.decode("x21").is_err());
        let big = ChainProduct::new(2, 16).unwrap();
        let e = big.element(vec![16, 10]).unwrap();
        assert_eq!(big.encode(&e), "ga");
        assert_eq!(big.decode("ga").unwrap(), e);
    }

    #[test]
    fn id_roundtrip() {
        let p = cp(3, 2);
        for id in 0..27 {
            let e = p.element_of_id(id);
            assert_eq!(p.id_of(&e), id);
            assert_eq!(p.rank_of_id(id), e.rank());
        }
    }
}

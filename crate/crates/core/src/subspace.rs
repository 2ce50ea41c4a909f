//! The lattice of subspaces of `F_q^n` ordered by inclusion.
//!
//! Subspaces are kept as canonical reduced row-echelon bases, which makes
//! equality and hashing structural. Enumeration is restricted to prime `q`;
//! the Gaussian-binomial counting formulas accept any integer `q >= 2`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{capacity, domain, Result};
use crate::BigCount;

/// Exact Gaussian binomial via the factorial form `[n]! / ([i]! [n-i]!)`
/// with `[m] = q^m - 1`, computed with exact division.
pub fn gaussian(n: usize, i: usize, q: u64) -> Result<BigCount> {
    if i > n {
        return Err(domain(format!("gaussian index {i} out of range 0..={n}")));
    }
    if q < 2 {
        return Err(domain("gaussian binomial needs q >= 2"));
    }
    let q = BigUint::from(q);
    let bracket = |m: usize| -> BigUint { q.pow(m as u32) - BigUint::one() };
    let mut num = BigUint::one();
    for m in (n - i + 1)..=n {
        num *= bracket(m);
    }
    let mut den = BigUint::one();
    for m in 1..=i {
        den *= bracket(m);
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// A subspace of `F_q^n` as a canonical RREF basis (`dim` rows, `n` columns).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }
}

/// The poset `V(q, n)`, with `q` prime so row reduction can work in `Z/q`.
#[derive(Clone, Debug)]
pub struct SubspaceLattice {
    q: u64,
    n: usize,
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl SubspaceLattice {
    pub fn new(q: u64, n: usize) -> Result<Self> {
        if !is_prime(q) {
            return Err(domain(format!("enumeration requires prime q, got {q}")));
        }
        if n == 0 {
            return Err(domain("ambient dimension must be >= 1"));
        }
        if q > 9 {
            return Err(domain("enumeration supports q <= 9 (single-digit encoding)"));
        }
        Ok(SubspaceLattice { q, n })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn element_count(&self) -> Result<BigCount> {
        let mut total = BigUint::zero();
        for i in 0..=self.n {
            total += gaussian(self.n, i, self.q)?;
        }
        Ok(total)
    }

    /// Reduce a vector against RREF rows (in place), returning true if it
    /// reduces to zero.
    fn reduces_to_zero(&self, rows: &[Vec<u8>], v: &[u8]) -> bool {
        let q = self.q as u16;
        let mut v: Vec<u16> = v.iter().map(|&x| x as u16).collect();
        for row in rows {
            let pivot = row.iter().position(|&x| x != 0).expect("RREF row nonzero");
            let c = v[pivot] % q;
            if c != 0 {
                for (vi, &ri) in v.iter_mut().zip(row.iter()) {
                    *vi = (*vi + (q - c) * ri as u16) % q;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// `T ⊆ S`: every basis row of T reduces to zero against S's basis.
    pub fn contains(&self, s: &Subspace, t: &Subspace) -> Result<bool> {
        if s.basis.iter().chain(&t.basis).any(|r| r.len() != self.n) {
            return Err(domain("ambient dimension mismatch"));
        }
        if t.dim > s.dim {
            return Ok(false);
        }
        Ok(t.basis.iter().all(|row| self.reduces_to_zero(&s.basis, row)))
    }

    /// Every subspace exactly once as canonical RREF bases, grouped by
    /// dimension (ascending), pivot-column sets and free values in
    /// lexicographic order.
    pub fn enumerate(&self) -> Result<Vec<Subspace>> {
        let total = self.element_count()?;
        if total > BigUint::from(1_000_000u32) {
            return Err(capacity(format!("lattice has {total} subspaces, cap is 10^6")));
        }
        let mut out = Vec::new();
        for d in 0..=self.n {
            self.enumerate_dim(d, &mut out);
        }
        Ok(out)
    }

    fn enumerate_dim(&self, d: usize, out: &mut Vec<Subspace>) {
        if d == 0 {
            out.push(Subspace { dim: 0, basis: Vec::new() });
            return;
        }
        crate::util::for_each_combination(self.n, d, |pivots| {
            // free positions: row i, column j with j > pivots[i] and j not a pivot
            let mut free: Vec<(usize, usize)> = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                for j in p + 1..self.n {
                    if !pivots.contains(&j) {
                        free.push((i, j));
                    }
                }
            }
            let mut vals = vec![0u8; free.len()];
            loop {
                let mut basis = vec![vec![0u8; self.n]; d];
                for (i, &p) in pivots.iter().enumerate() {
                    basis[i][p] = 1;
                }
                for (&(i, j), &v) in free.iter().zip(&vals) {
                    basis[i][j] = v;
                }
                out.push(Subspace { dim: d, basis });
                // odometer over free values
                let mut pos = vals.len();
                loop {
                    if pos == 0 {
                        return true;
                    }
                    pos -= 1;
                    if vals[pos] as u64 + 1 < self.q {
                        vals[pos] += 1;
                        for v in &mut vals[pos + 1..] {
                            *v = 0;
                        }
                        break;
                    }
                    if pos == 0 {
                        return true;
                    }
                }
            }
        });
    }

    /// Rows of n digits joined by '/'; the zero subspace encodes as "".
    pub fn encode(&self, s: &Subspace) -> String {
        s.basis
            .iter()
            .map(|row| row.iter().map(|&d| (b'0' + d) as char).collect::<String>())
            .collect::<Vec<_>>()
            .join("/")
    }

    pub fn decode(&self, text: &str) -> Result<Subspace> {
        if text.is_empty() {
            return Ok(Subspace { dim: 0, basis: Vec::new() });
        }
        let mut basis = Vec::new();
        for part in text.split('/') {
            if part.len() != self.n {
                return Err(domain(format!("row {part:?} is not {} digits", self.n)));
            }
            let row: Option<Vec<u8>> = part
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).filter(|&d| (d as u64) < self.q))
                .collect();
            basis.push(row.ok_or_else(|| domain(format!("invalid digit in {part:?}")))?);
        }
        // validate canonical RREF shape
        let dim = basis.len();
        let mut pivots = Vec::new();
        for row in &basis {
            let p = row
                .iter()
                .position(|&x| x != 0)
                .ok_or_else(|| domain("zero row in basis"))?;
            if row[p] != 1 {
                return Err(domain("pivot entry must be 1"));
            }
            if pivots.last().is_some_and(|&last| p <= last) {
                return Err(domain("pivots must strictly increase"));
            }
            pivots.push(p);
        }
        for (i, &p) in pivots.iter().enumerate() {
            for (j, row) in basis.iter().enumerate() {
                if j != i && row[p] != 0 {
                    return Err(domain("nonzero entry above/below a pivot"));
                }
            }
        }
        Ok(Subspace { dim, basis })
    }

    /// Verifies the four neighbor-count monotonicity inequalities. Neighbor
    /// counts in V(q,n) depend only on rank: a dim-m subspace has
    /// `gaussian(m, i)` subspaces i below and `gaussian(n-m, i)` above.
    pub fn check_property_q(&self) -> Result<PropertyQReport> {
        let n = self.n;
        let g = |top: usize, i: usize| gaussian(top, i, self.q);
        let dist2 = |r: usize| (2 * r as i64 - n as i64).abs();
        let mut checks = Vec::new();
        let mut push = |cond: &str, a: usize, b: usize, i: usize, lhs: BigUint, rhs: BigUint| {
            checks.push(PropertyQCheck {
                condition: cond.to_string(),
                rank_a: a,
                rank_b: b,
                offset: i,
                holds: lhs <= rhs,
                lhs,
                rhs,
            });
        };
        for a in 0..=n {
            for b in 0..=n {
                if b < a && dist2(b) < dist2(a) {
                    for i in 1..=a - b {
                        push("Q1", a, b, i, g(n - b, i)?, g(a, i)?);
                    }
                }
                if b > a && dist2(b) < dist2(a) {
                    for i in 1..=b - a {
                        push("Q2", a, b, i, g(b, i)?, g(n - a, i)?);
                    }
                }
                if 2 * b >= n && b < a {
                    // i > b makes the lower neighborhood empty, vacuously true
                    for i in 1..=b {
                        push("Q3", a, b, i, g(b, i)?, g(a, i)?);
                    }
                }
                if 2 * b <= n && b > a {
                    for i in 1..=(n - b) {
                        push("Q4", a, b, i, g(n - b, i)?, g(n - a, i)?);
                    }
                }
            }
        }
        let all_hold = checks.iter().all(|c| c.holds);
        Ok(PropertyQReport { q: self.q, n, all_hold, checks })
    }

    /// Asserts rank symmetry and unimodality of the layer profile.
    pub fn check_rank_profile(&self) -> Result<RankProfileReport> {
        let sizes: Vec<BigUint> = (0..=self.n)
            .map(|i| gaussian(self.n, i, self.q))
            .collect::<Result<_>>()?;
        let symmetric = (0..=self.n).all(|i| sizes[i] == sizes[self.n - i]);
        let mut unimodal = true;
        let mut rising = true;
        for i in 1..sizes.len() {
            if sizes[i] >= sizes[i - 1] {
                if !rising {
                    // allowed only if it never rises again; equal plateaus ok
                    if sizes[i] > sizes[i - 1] {
                        unimodal = false;
                    }
                }
            } else {
                rising = false;
            }
        }
        Ok(RankProfileReport { q: self.q, n: self.n, sizes, symmetric, unimodal })
    }
}

#[derive(Clone, Debug)]
pub struct PropertyQCheck {
    pub condition: String,
    pub rank_a: usize,
    pub rank_b: usize,
    pub offset: usize,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct PropertyQReport {
    pub q: u64,
    pub n: usize,
    pub all_hold: bool,
    pub checks: Vec<PropertyQCheck>,
}

#[derive(Clone, Debug)]
pub struct RankProfileReport {
    pub q: u64,
    pub n: usize,
    pub sizes: Vec<BigUint>,
    pub symmetric: bool,
    pub unimodal: bool,
}

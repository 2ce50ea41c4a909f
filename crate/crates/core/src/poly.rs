//! Exact integer polynomial arithmetic for coefficient extraction.
//!
//! Layer sizes, neighbor counts and shadow sums are all coefficients of
//! products of truncated geometric polynomials `1 + x + ... + x^c`. Keeping
//! this in arbitrary precision means no count is ever approximated.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Dense polynomial with nonnegative integer coefficients, index = degree.
pub type Poly = Vec<BigUint>;

/// `1 + x + ... + x^c`.
pub fn chain_poly(c: usize) -> Poly {
    vec![BigUint::one(); c + 1]
}

/// Schoolbook product, truncated to degree `max_deg` (inclusive).
pub fn mul_trunc(a: &Poly, b: &Poly, max_deg: usize) -> Poly {
    let deg = (a.len() + b.len()).saturating_sub(2).min(max_deg);
    let mut out = vec![BigUint::zero(); deg + 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() || i > deg {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > deg {
                break;
            }
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Product of `1 + x + ... + x^c` over the given caps, truncated.
pub fn product_of_chain_polys(caps: impl IntoIterator<Item = usize>, max_deg: usize) -> Poly {
    let mut acc: Poly = vec![BigUint::one()];
    for c in caps {
        acc = mul_trunc(&acc, &chain_poly(c), max_deg);
    }
    acc
}

pub fn coeff(p: &Poly, d: usize) -> BigUint {
    p.get(d).cloned().unwrap_or_else(BigUint::zero)
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        num /= BigUint::from(i + 1); // exact at every step: product of i+1 consecutive ints
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_product_coefficients() {
        // (1+x+x^2)^3: 1,3,6,7,6,3,1
        let p = product_of_chain_polys([2, 2, 2], 6);
        let want = [1u32, 3, 6, 7, 6, 3, 1];
        for (d, w) in want.iter().enumerate() {
            assert_eq!(coeff(&p, d), BigUint::from(*w));
        }
    }

    #[test]
    fn truncation() {
        let p = product_of_chain_polys([2, 2, 2], 2);
        assert_eq!(p.len(), 3);
        assert_eq!(coeff(&p, 2), BigUint::from(6u32));
        assert_eq!(coeff(&p, 5), BigUint::zero());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 3), BigUint::from(56u32));
        assert_eq!(binomial(5, 0), BigUint::one());
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(52, 26).to_string(), "495918532948104");
    }
}

//! Arithmetic in (Z/N)[t]/(phi) for a monic phi of degree h.
//!
//! Shared by the finite field (N = p) and the Galois ring (N = p^M). Vectors
//! are ascending coefficient lists of length exactly h with entries in [0, N).

use smallvec::SmallVec;

pub(crate) type Coeffs = SmallVec<[u64; 4]>;

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[inline]
pub(crate) fn addmod(a: u64, b: u64, n: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % n as u128) as u64
}

#[inline]
pub(crate) fn negmod(a: u64, n: u64) -> u64 {
    if a == 0 {
        0
    } else {
        n - a
    }
}

pub(crate) fn add(a: &[u64], b: &[u64], n: u64) -> Coeffs {
    a.iter().zip(b).map(|(&x, &y)| addmod(x, y, n)).collect()
}

pub(crate) fn sub(a: &[u64], b: &[u64], n: u64) -> Coeffs {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| addmod(x, negmod(y, n), n))
        .collect()
}

pub(crate) fn neg(a: &[u64], n: u64) -> Coeffs {
    a.iter().map(|&x| negmod(x, n)).collect()
}

/// Product of `a` and `b` reduced by the monic `phi` (length h + 1).
pub(crate) fn mul(a: &[u64], b: &[u64], phi: &[u64], n: u64) -> Coeffs {
    let h = a.len();
    if h == 1 {
        return smallvec::smallvec![mulmod(a[0], b[0], n)];
    }
    let n128 = n as u128;
    let mut prod: SmallVec<[u128; 8]> = smallvec::smallvec![0; 2 * h - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u128 * y as u128) % n128;
        }
    }
    // t^h = -(phi_0 + ... + phi_{h-1} t^{h-1})
    for k in (h..2 * h - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..h {
            let sub = (c * phi[i] as u128) % n128;
            let slot = &mut prod[k - h + i];
            *slot = (*slot + n128 - sub) % n128;
        }
    }
    prod[..h].iter().map(|&c| c as u64).collect()
}

/// Remainder of a polynomial over Z/p (field) modulo a monic divisor.
pub(crate) fn poly_rem_mod_p(num: &[u64], div: &[u64], p: u64) -> Vec<u64> {
    let mut r = num.to_vec();
    let d = div.len() - 1;
    while r.len() > d {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - d;
        if lead != 0 {
            for (i, &c) in div.iter().enumerate() {
                let v = mulmod(lead, c, p);
                r[shift + i] = addmod(r[shift + i], negmod(v, p), p);
            }
        }
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_product_reduces_by_modulus() {
        // t * t = t + 1 in F_2[t]/(t^2 + t + 1)
        let phi = [1, 1, 1];
        assert_eq!(mul(&[0, 1], &[0, 1], &phi, 2).as_slice(), &[1, 1]);
    }

    #[test]
    fn gr42_product() {
        // t^2 = -t - 1 = 3 + 3t mod 4
        let phi = [1, 1, 1];
        assert_eq!(mul(&[0, 1], &[0, 1], &phi, 4).as_slice(), &[3, 3]);
    }

    #[test]
    fn remainder_by_linear_factor() {
        // t^2 + 1 mod (t + 1) over F_2 = 0
        assert!(poly_rem_mod_p(&[1, 0, 1], &[1, 1], 2).iter().all(|&c| c == 0));
        // t^2 + t + 1 mod (t + 1) over F_2 = 1
        assert_eq!(poly_rem_mod_p(&[1, 1, 1], &[1, 1], 2), vec![1]);
    }
}

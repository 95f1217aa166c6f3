//! Exact integer predicates: primality, squarefreeness, factorization.
//!
//! Primality is deterministic Miller-Rabin over the witness set that is
//! exact for the full 64-bit range. Squarefreeness is decided by trial
//! division; family sieves that need squarefreeness of large polynomial
//! values factor the value through its integer polynomial factors and
//! merge the factorizations, which keeps every piece small.

use crate::error::{Error, Result};

/// Primes up to `limit` (inclusive) by the sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality for the full u64 range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    // Exact witness set for n < 2^64 (Sorenson & Webster).
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `n` by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e);
    }
    let mut p: u64 = 7;
    // Wheel over 2,3,5 residues.
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            push(p, e);
        }
        p += STEPS[i];
        i = (i + 1) % STEPS.len();
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

/// True iff no prime square divides `|m|`. Errors on `m == 0`.
pub fn is_squarefree(m: i64) -> Result<bool> {
    if m == 0 {
        return Err(Error::Domain("squarefreeness is undefined for 0".into()));
    }
    let mut n = m.unsigned_abs();
    if n == 1 {
        return Ok(true);
    }
    let mut p: u64 = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(false);
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Ok(true)
}

/// True iff `n` is a perfect square (negative values are not).
pub fn is_perfect_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt().round() as i64;
    for c in [r - 1, r, r + 1] {
        if c >= 0 && c * c == n {
            return true;
        }
    }
    false
}

/// Squarefree part of `m`, preserving sign: the unique squarefree `d`
/// with `m = d * k^2`. Errors on `m == 0`.
pub fn squarefree_part(m: i64) -> Result<i64> {
    if m == 0 {
        return Err(Error::Domain("squarefree part is undefined for 0".into()));
    }
    let mut part: i64 = if m < 0 { -1 } else { 1 };
    for (p, e) in factorize(m.unsigned_abs()) {
        if e % 2 == 1 {
            part *= p as i64;
        }
    }
    Ok(part)
}

/// Squarefreeness of a product of integer pieces without forming the
/// product. Exact provided that any prime shared by two pieces is at most
/// `shared_bound` (guaranteed by small pairwise gcd bounds at call sites).
///
/// Each piece is factored by trial division up to its square root, so the
/// pieces themselves must stay at machine size.
pub fn product_is_squarefree(pieces: &[i64], shared_bound: u64) -> Result<bool> {
    let mut small: std::collections::HashMap<u64, u32> = std::collections::HashMap::new();
    for &piece in pieces {
        if piece == 0 {
            return Err(Error::Domain("zero piece in squarefree product".into()));
        }
        let mut n = piece.unsigned_abs();
        if n == 1 {
            continue;
        }
        // Extract every prime up to shared_bound so that exponents of
        // primes that may occur in several pieces are merged.
        let mut p: u64 = 2;
        while p <= shared_bound && n > 1 {
            while n % p == 0 {
                n /= p;
                *small.entry(p).or_insert(0) += 1;
                if small[&p] > 1 {
                    return Ok(false);
                }
            }
            p += if p == 2 { 1 } else { 2 };
        }
        // Leftover cofactor: all its prime factors exceed shared_bound,
        // so it cannot collide with other pieces; check it in isolation.
        if n > 1 && !is_squarefree_u64(n) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_squarefree_u64(mut n: u64) -> bool {
    let mut p: u64 = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

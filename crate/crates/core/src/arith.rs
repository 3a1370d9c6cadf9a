//! Deterministic integer routines: Miller-Rabin primality for the 64-bit
//! range, prime-power decomposition, factorization by trial division, and
//! the sum-of-two-squares criterion.

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set covers all u64.
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
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Inverse of `a` modulo a prime `p`, via Fermat.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Floor of the e-th root of n.
fn iroot(n: u64, e: u32) -> u64 {
    if e == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / e as f64).round() as u64;
    while r > 0 && r.checked_pow(e).map_or(true, |v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(e).map_or(false, |v| v <= n) {
        r += 1;
    }
    r
}

/// Decompose `n = p^alpha` with `p` prime, if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    if is_prime(n) {
        return Some((n, 1));
    }
    for e in 2..=n.ilog2() {
        let r = iroot(n, e);
        if r >= 2 && r.checked_pow(e) == Some(n) && is_prime(r) {
            return Some((r, e));
        }
    }
    None
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order.  Intended for the desk-scale inputs this crate handles.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut p = 3;
    while p * p <= n {
        push(p, &mut n);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Whether `n` is a sum of two integer squares: no prime congruent to
/// 3 mod 4 may occur to an odd power.
pub fn is_sum_of_two_squares(n: u64) -> bool {
    if n == 0 {
        return true;
    }
    factorize(n)
        .into_iter()
        .all(|(p, e)| p % 4 != 3 || e % 2 == 0)
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = iroot(n, 2);
    r * r == n
}

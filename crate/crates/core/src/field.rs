//! Arithmetic in GF(p^m) for odd p, with the quadratic character, absolute
//! trace, additive character and Gauss sum, plus the element orderings the
//! Paley-style constructions need.
//!
//! Elements are polynomials of degree < m over F_p modulo a fixed monic
//! irreducible modulus.  Field construction is deterministic: the modulus is
//! the lexicographically smallest monic irreducible polynomial (coefficients
//! compared constant-term first) and the primitive element is the smallest
//! element in encoding order with full multiplicative order.

use num::complex::Complex64;
use serde::Serialize;

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element of GF(p^m): coefficients of 1, x, ..., x^(m-1), each in [0, p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// A concrete GF(p^m) with its modulus and a fixed primitive element.
#[derive(Debug, Clone, Serialize)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    /// Modulus coefficients `[c0, ..., cm]` with `cm = 1`.
    modulus: Vec<u64>,
    eta: FieldElement,
    #[serde(skip)]
    q: u64,
}

impl FieldSpec {
    /// Build GF(p^m) deterministically.  `p` must be an odd prime and
    /// `p^m <= 2^20`.
    pub fn new(p: u64, m: u32) -> Result<FieldSpec> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::BadOrder { order: 0, reason: "extension degree must be >= 1".into() });
        }
        let q = (0..m).try_fold(1u64, |acc, _| {
            let next = acc.checked_mul(p)?;
            (next <= MAX_FIELD_SIZE).then_some(next)
        });
        let q = q.ok_or(Error::TooLarge(0, MAX_FIELD_SIZE))?;

        let modulus = smallest_irreducible(p, m);
        let mut field = FieldSpec { p, m, modulus, eta: FieldElement { coeffs: vec![0; m as usize] }, q };
        field.eta = field.find_primitive_element();
        Ok(field)
    }

    /// Build the field of a given prime-power order.
    pub fn for_order(q: u64) -> Result<FieldSpec> {
        let (p, m) = crate::arith::prime_power(q)
            .ok_or_else(|| Error::BadOrder { order: q, reason: "not a prime power".into() })?;
        FieldSpec::new(p, m)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field size q = p^m.
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn eta(&self) -> &FieldElement {
        &self.eta
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.m as usize] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Embed an integer constant.
    pub fn from_int(&self, n: u64) -> FieldElement {
        let mut coeffs = vec![0; self.m as usize];
        coeffs[0] = n % self.p;
        FieldElement { coeffs }
    }

    /// Position of an element in the fixed enumeration: sum of c_i * p^i.
    pub fn encode(&self, a: &FieldElement) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn decode(&self, mut code: u64) -> FieldElement {
        let mut coeffs = vec![0; self.m as usize];
        for c in coeffs.iter_mut() {
            *c = code % self.p;
            code /= self.p;
        }
        FieldElement { coeffs }
    }

    /// All q elements in encoding order (0, 1, ..., p-1, x, 1+x, ...).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|code| self.decode(code))
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        reduce(&mut prod, &self.modulus, self.p);
        prod.truncate(m);
        prod.resize(m, 0);
        FieldElement { coeffs: prod }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn find_primitive_element(&self) -> FieldElement {
        let group_order = self.q - 1;
        let prime_divisors: Vec<u64> = factorize(group_order).into_iter().map(|(p, _)| p).collect();
        for code in 1..self.q {
            let a = self.decode(code);
            if prime_divisors
                .iter()
                .all(|&l| self.pow(&a, group_order / l) != self.one())
            {
                return a;
            }
        }
        unreachable!("every finite field has a primitive element")
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise.
    pub fn legendre_chi(&self, a: &FieldElement) -> i64 {
        if self.is_zero(a) {
            return 0;
        }
        let half = self.pow(a, (self.q - 1) / 2);
        if half == self.one() {
            1
        } else {
            debug_assert_eq!(half, self.from_int(self.p - 1));
            -1
        }
    }

    /// Absolute trace to F_p: a + a^p + ... + a^(p^(m-1)), returned in [0, p).
    pub fn trace(&self, a: &FieldElement) -> u64 {
        let mut acc = a.clone();
        let mut frob = a.clone();
        for _ in 1..self.m {
            frob = self.pow(&frob, self.p);
            acc = self.add(&acc, &frob);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace must land in F_p");
        acc.coeffs[0]
    }

    /// Additive character psi(a) = exp(2*pi*i*Tr(a)/p).
    pub fn additive_character(&self, a: &FieldElement) -> Complex64 {
        let t = self.trace(a) as f64;
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t / self.p as f64)
    }

    /// The Gauss sum over the whole field: sum of chi(a) * psi(a).
    pub fn gauss_sum(&self) -> Complex64 {
        self.elements()
            .map(|a| self.legendre_chi(&a) as f64 * self.additive_character(&a))
            .sum()
    }

    /// Closed form of the Gauss sum: `(-1)^(m-1) sqrt(q)` for p = 1 mod 4 and
    /// `-(-i)^m sqrt(q)` for p = 3 mod 4.
    pub fn gauss_sum_closed_form(&self) -> Complex64 {
        let root = (self.q as f64).sqrt();
        if self.p % 4 == 1 {
            let sign = if self.m % 2 == 1 { 1.0 } else { -1.0 };
            Complex64::new(sign * root, 0.0)
        } else {
            let minus_i_pow = match self.m % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, -1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, 1.0),
            };
            -minus_i_pow * root
        }
    }

    /// The element ordering behind the Paley block form: 0 first, then the odd
    /// powers of eta up to eta^(q-2), then the even powers up to eta^(q-1).
    pub fn paley_element_order(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.q as usize);
        out.push(self.zero());
        let mut exp = 1;
        while exp <= self.q - 2 {
            out.push(self.pow(&self.eta, exp));
            exp += 2;
        }
        let mut exp = 2;
        while exp <= self.q - 1 {
            out.push(self.pow(&self.eta, exp));
            exp += 2;
        }
        out
    }

    /// Nonzero squares in the fixed order eta^2, eta^4, ..., eta^(q-1).
    pub fn square_order(&self) -> Vec<FieldElement> {
        (1..=(self.q - 1) / 2)
            .map(|s| self.pow(&self.eta, 2 * s))
            .collect()
    }
}

fn reduce(poly: &mut Vec<u64>, modulus: &[u64], p: u64) {
    let m = modulus.len() - 1;
    for i in (m..poly.len()).rev() {
        let c = poly[i];
        if c == 0 {
            continue;
        }
        poly[i] = 0;
        for (j, &mc) in modulus.iter().enumerate().take(m) {
            let idx = i - m + j;
            poly[idx] = (poly[idx] + c * (p - mc)) % p;
        }
    }
}

// ---------------------------------------------------------------------------
// Irreducibility over F_p for the modulus search.  f of degree m is
// irreducible iff x^(p^m) = x (mod f) and gcd(x^(p^(m/l)) - x, f) = 1 for
// every prime l dividing m.
// ---------------------------------------------------------------------------

fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let deg = m as usize;
    let mut coeffs = vec![0u64; deg + 1];
    coeffs[deg] = 1;
    loop {
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
        // next candidate in lexicographic order on (c0, c1, ..., c_{m-1})
        let mut i = deg;
        loop {
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "no irreducible polynomial found, which cannot happen");
        }
    }
}

fn poly_mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    reduce(&mut prod, f, p);
    prod.truncate(m);
    prod.resize(m, 0);
    prod
}

/// x^(p^k) mod f, by repeated exponentiation by p.
fn x_pow_p_pow(k: u32, f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut x = vec![0u64; m.max(2)];
    x[1] = 1;
    x.truncate(m);
    x.resize(m, 0);
    if m == 1 {
        // the quotient ring is F_p itself; x reduces to a constant
        let mut c = vec![0u64; 2];
        c[1] = 1;
        reduce(&mut c, f, p);
        x = vec![c[0]];
    }
    for _ in 0..k {
        x = poly_pow_mod(&x, p, f, p);
    }
    x
}

fn poly_pow_mod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut acc = vec![0u64; m];
    acc[0] = 1;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &base, f, p);
        }
        base = poly_mul_mod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

fn poly_degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    loop {
        let Some(db) = poly_degree(&b) else { return a };
        // a mod b
        let inv_lead = crate::arith::inv_mod_prime(b[db], p);
        while let Some(da) = poly_degree(&a) {
            if da < db {
                break;
            }
            let factor = a[da] * inv_lead % p;
            for j in 0..=db {
                let idx = da - db + j;
                a[idx] = (a[idx] + factor * (p - b[j])) % p;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = (f.len() - 1) as u32;
    if m == 1 {
        return true;
    }
    if f[0] == 0 {
        return false; // divisible by x
    }
    // x^(p^m) must equal x
    let frob_m = x_pow_p_pow(m, f, p);
    let mut x = vec![0u64; m as usize];
    x[1] = 1;
    if frob_m != x {
        return false;
    }
    // no roots in proper subfields
    for (l, _) in factorize(m as u64) {
        let mut h = x_pow_p_pow(m / l as u32, f, p);
        // h := x^(p^(m/l)) - x
        h[1] = (h[1] + p - 1) % p;
        if poly_degree(&poly_gcd(f.to_vec(), h, p)).map_or(true, |d| d > 0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f5_has_eta_two() {
        let f = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.encode(f.eta()), 2);
        // oracle: 2 has multiplicative order 4 mod 5
        let two = f.from_int(2);
        let orders: Vec<u64> = (1..=4).map(|e| f.encode(&f.pow(&two, e))).collect();
        assert_eq!(orders, [2, 4, 3, 1]);
    }

    #[test]
    fn gf9_modulus_is_x_squared_plus_one() {
        let f = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // oracle: exhaust the monic degree-2 candidates below x^2+1
        for cand in [[0u64, 0, 1], [0, 1, 1], [0, 2, 1]] {
            assert!(!is_irreducible(&cand, 3), "{cand:?} should be reducible");
        }
        assert!(is_irreducible(&[1, 0, 1], 3));
    }

    #[test]
    fn even_characteristic_is_rejected() {
        assert!(matches!(FieldSpec::new(2, 1), Err(Error::NotPrime(2))));
        assert!(matches!(FieldSpec::new(9, 1), Err(Error::NotPrime(9))));
        assert!(matches!(FieldSpec::new(3, 20), Err(Error::TooLarge(..))));
    }

    #[test]
    fn legendre_on_f5() {
        let f = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f.legendre_chi(&f.from_int(4)), 1); // 4 = 2^2
        assert_eq!(f.legendre_chi(&f.from_int(2)), -1);
        assert_eq!(f.legendre_chi(&f.zero()), 0);
        // oracle: squares mod 5 are exactly {1, 4}
        let squares: std::collections::BTreeSet<u64> =
            (1..5u64).map(|a| a * a % 5).collect();
        for a in 1..5u64 {
            let expect = if squares.contains(&a) { 1 } else { -1 };
            assert_eq!(f.legendre_chi(&f.from_int(a)), expect);
        }
    }

    #[test]
    fn chi_of_minus_one_is_plus_one_when_q_is_1_mod_4() {
        for q in [5u64, 9, 13, 17, 25, 29, 37, 41, 49] {
            let f = FieldSpec::for_order(q).unwrap();
            let minus_one = f.neg(&f.one());
            assert_eq!(f.legendre_chi(&minus_one), 1, "q={q}");
        }
    }

    #[test]
    fn chi_is_multiplicative_and_balanced() {
        for q in [5u64, 7, 9, 11, 13, 25, 27, 49] {
            let f = FieldSpec::for_order(q).unwrap();
            let elems: Vec<FieldElement> = f.elements().collect();
            let mut squares = 0;
            let mut non_squares = 0;
            for a in &elems[1..] {
                match f.legendre_chi(a) {
                    1 => squares += 1,
                    -1 => non_squares += 1,
                    _ => panic!("chi of a nonzero element must be +-1"),
                }
                for b in &elems[1..] {
                    assert_eq!(
                        f.legendre_chi(&f.mul(a, b)),
                        f.legendre_chi(a) * f.legendre_chi(b)
                    );
                }
            }
            assert_eq!(squares, (q - 1) / 2, "q={q}");
            assert_eq!(non_squares, (q - 1) / 2, "q={q}");
        }
    }

    #[test]
    fn trace_examples() {
        let gf9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(gf9.trace(&gf9.one()), 2);
        // x with x^2 = -1: Tr(x) = x + x^3 = x - x = 0
        let x = gf9.decode(3);
        assert_eq!(x.coeffs(), &[0, 1]);
        assert_eq!(gf9.trace(&x), 0);
        // oracle: x^3 mod (x^2+1) computed by hand is -x = 2x
        assert_eq!(gf9.pow(&x, 3), gf9.decode(6));

        let f5 = FieldSpec::new(5, 1).unwrap();
        for a in 0..5 {
            assert_eq!(f5.trace(&f5.from_int(a)), a);
        }
    }

    #[test]
    fn trace_is_linear() {
        for q in [9u64, 25, 27, 49] {
            let f = FieldSpec::for_order(q).unwrap();
            let elems: Vec<FieldElement> = f.elements().collect();
            for a in &elems {
                for b in &elems {
                    let lhs = f.trace(&f.add(a, b));
                    let rhs = (f.trace(a) + f.trace(b)) % f.p();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn additive_character_sums_to_zero() {
        for q in [5u64, 9, 27] {
            let f = FieldSpec::for_order(q).unwrap();
            assert!((f.additive_character(&f.zero()) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            let total: Complex64 = f.elements().map(|a| f.additive_character(&a)).sum();
            assert!(total.norm() < 1e-10, "q={q}, sum={total}");
            // multiplicativity over addition
            let a = f.decode(1.min(q - 1));
            let b = f.decode(q - 1);
            let lhs = f.additive_character(&f.add(&a, &b));
            let rhs = f.additive_character(&a) * f.additive_character(&b);
            assert!((lhs - rhs).norm() < 1e-12);
        }
        let f5 = FieldSpec::new(5, 1).unwrap();
        let expect = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        assert!((f5.additive_character(&f5.one()) - expect).norm() < 1e-15);
    }

    #[test]
    fn gauss_sums_match_the_closed_form() {
        for q in [5u64, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49] {
            let f = FieldSpec::for_order(q).unwrap();
            let sum = f.gauss_sum();
            let closed = f.gauss_sum_closed_form();
            assert!((sum - closed).norm() < 1e-10, "q={q}: {sum} vs {closed}");
            assert!((sum.norm() - (q as f64).sqrt()).abs() < 1e-10, "q={q}");
        }
        // spot values
        let g5 = FieldSpec::for_order(5).unwrap().gauss_sum();
        assert!((g5 - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-10);
        let g7 = FieldSpec::for_order(7).unwrap().gauss_sum();
        assert!((g7 - Complex64::new(0.0, 7f64.sqrt())).norm() < 1e-10);
        let g9 = FieldSpec::for_order(9).unwrap().gauss_sum();
        assert!((g9 - Complex64::new(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn paley_order_on_f5() {
        let f = FieldSpec::new(5, 1).unwrap();
        let order: Vec<u64> = f.paley_element_order().iter().map(|a| f.encode(a)).collect();
        assert_eq!(order, [0, 2, 3, 4, 1]);
    }

    #[test]
    fn paley_order_is_a_permutation_starting_at_zero() {
        for q in [5u64, 9, 13, 25, 27, 49] {
            let f = FieldSpec::for_order(q).unwrap();
            let order = f.paley_element_order();
            assert!(f.is_zero(&order[0]));
            let codes: std::collections::BTreeSet<u64> =
                order.iter().map(|a| f.encode(a)).collect();
            assert_eq!(codes.len() as u64, q, "q={q}");
        }
    }

    #[test]
    fn field_spec_serializes_to_the_documented_shape() {
        let f = FieldSpec::new(3, 2).unwrap();
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(json["p"], 3);
        assert_eq!(json["m"], 2);
        assert_eq!(json["modulus"], serde_json::json!([1, 0, 1]));
        assert!(json["eta"].is_array());
    }
}

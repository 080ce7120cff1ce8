//! Exact arithmetic in GF(p^m).
//!
//! Elements are polynomial residues of degree < m over the prime field,
//! reduced modulo a fixed monic irreducible polynomial. The modulus is
//! found by deterministic search (smallest candidate in coefficient
//! order), so a field built twice from the same (p, m) is identical and
//! every downstream computation is reproducible byte for byte.

use std::fmt;

/// An element of GF(p^m), valid only relative to the [`FiniteField`]
/// that produced it. Coefficients are little-endian: `coeffs[i]` is the
/// coefficient of x^i, always reduced mod p and of length exactly m.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// Context object for GF(p^m) arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    m: usize,
    /// Monic irreducible modulus, length m + 1, `modulus[m] == 1`.
    modulus: Vec<u64>,
}

/// Reusable buffer so that hot loops can multiply without allocating.
#[derive(Default)]
pub struct MulScratch {
    buf: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// Builds GF(p^m) with the deterministically chosen modulus.
    ///
    /// Panics if `p` is not prime or `m == 0`.
    pub fn new(p: u64, m: usize) -> Self {
        assert!(is_prime(p), "field characteristic {p} is not prime");
        assert!(m >= 1, "extension degree must be positive");
        let modulus = smallest_irreducible(p, m);
        FiniteField { p, m, modulus }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// p^m, or None if it does not fit in u64.
    pub fn order(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for _ in 0..self.m {
            acc = acc.checked_mul(self.p)?;
        }
        Some(acc)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.m] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: u64) -> FieldElement {
        let mut c = vec![0; self.m];
        c[0] = n % self.p;
        FieldElement { coeffs: c }
    }

    /// The residue of x itself (a generator of the extension as a ring).
    pub fn monomial(&self) -> FieldElement {
        let mut c = vec![0; self.m];
        if self.m > 1 {
            c[1] = 1;
        } else {
            // x ≡ -modulus[0] when m == 1
            c[0] = (self.p - self.modulus[0] % self.p) % self.p;
        }
        FieldElement { coeffs: c }
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        a.coeffs[0] == 1 && a.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }

    pub fn add_assign(&self, a: &mut FieldElement, b: &FieldElement) {
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = (*x + *y) % self.p;
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut out = a.clone();
        self.sub_assign(&mut out, b);
        out
    }

    pub fn sub_assign(&self, a: &mut FieldElement, b: &FieldElement) {
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = (*x + self.p - *y) % self.p;
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&c| (self.p - c) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut out = self.zero();
        let mut scratch = MulScratch::default();
        self.mul_into(&mut out, a, b, &mut scratch);
        out
    }

    /// out = a * b without allocating (given a warm scratch buffer).
    pub fn mul_into(
        &self,
        out: &mut FieldElement,
        a: &FieldElement,
        b: &FieldElement,
        scratch: &mut MulScratch,
    ) {
        let m = self.m;
        scratch.buf.clear();
        scratch.buf.resize(2 * m - 1, 0);
        for i in 0..m {
            let ai = a.coeffs[i];
            if ai == 0 {
                continue;
            }
            for j in 0..m {
                let t = &mut scratch.buf[i + j];
                *t = (*t + ai * b.coeffs[j]) % self.p;
            }
        }
        // reduce degrees 2m-2 .. m using the monic modulus
        for d in (m..2 * m - 1).rev() {
            let c = scratch.buf[d];
            if c == 0 {
                continue;
            }
            scratch.buf[d] = 0;
            for k in 0..m {
                let t = &mut scratch.buf[d - m + k];
                *t = (*t + c * (self.p - self.modulus[k] % self.p)) % self.p;
            }
        }
        out.coeffs.clear();
        out.coeffs.extend_from_slice(&scratch.buf[..m]);
    }

    /// dst[i] += factor * src[i], elementwise over row slices.
    pub fn row_axpy(
        &self,
        dst: &mut [FieldElement],
        factor: &FieldElement,
        src: &[FieldElement],
        scratch: &mut MulScratch,
    ) {
        debug_assert_eq!(dst.len(), src.len());
        let mut tmp = self.zero();
        for (d, s) in dst.iter_mut().zip(src) {
            if self.is_zero(s) {
                continue;
            }
            self.mul_into(&mut tmp, factor, s, scratch);
            self.add_assign(d, &tmp);
        }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        let mut scratch = MulScratch::default();
        let mut tmp = self.zero();
        while e > 0 {
            if e & 1 == 1 {
                self.mul_into(&mut tmp, &acc, &base, &mut scratch);
                std::mem::swap(&mut acc, &mut tmp);
            }
            self.mul_into(&mut tmp, &base.clone(), &base, &mut scratch);
            std::mem::swap(&mut base, &mut tmp);
            e >>= 1;
        }
        acc
    }

    /// a^p, the Frobenius. Composing it m times is the q-power map.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow(a, self.p)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on
    /// polynomial representatives; works for any extension degree.
    ///
    /// Panics on zero.
    pub fn inv(&self, a: &FieldElement) -> FieldElement {
        assert!(!self.is_zero(a), "inverse of zero");
        let (g, u) = poly_ext_gcd(self.p, &a.coeffs, &self.modulus);
        // gcd must be a nonzero constant
        debug_assert_eq!(poly_deg(&g), Some(0));
        let ginv = mod_inverse(g[0], self.p);
        let mut coeffs = vec![0; self.m];
        for (i, &c) in u.iter().enumerate().take(self.m) {
            coeffs[i] = c * ginv % self.p;
        }
        FieldElement { coeffs }
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.mul(a, &self.inv(b))
    }

    /// All field elements in canonical (lexicographic coefficient) order.
    /// Only usable when p^m is small enough to enumerate.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let mut cur = Some(self.zero());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            // odometer increment on the coefficient vector
            let mut next = out.clone();
            let mut i = 0;
            loop {
                if i == self.m {
                    cur = None;
                    break;
                }
                next.coeffs[i] += 1;
                if next.coeffs[i] < self.p {
                    cur = Some(next);
                    break;
                }
                next.coeffs[i] = 0;
                i += 1;
            }
            Some(out)
        })
    }

    pub fn display(&self, a: &FieldElement) -> String {
        format!("{}", Poly(&a.coeffs))
    }
}

struct Poly<'a>(&'a [u64]);

impl fmt::Display for Poly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "x")?,
                1 => write!(f, "{c}x")?,
                _ if c == 1 => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime, a != 0 mod p
    let mut t: i128 = 0;
    let mut new_t: i128 = 1;
    let mut r: i128 = p as i128;
    let mut new_r: i128 = (a % p) as i128;
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible mod {p}");
    (t.rem_euclid(p as i128)) as u64
}

// ---- dense polynomial arithmetic over F_p (little-endian Vec<u64>) ----

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of a modulo the monic-after-normalization divisor d.
fn poly_rem(p: u64, a: &[u64], d: &[u64]) -> Vec<u64> {
    let dd = poly_deg(d).expect("division by zero polynomial");
    let lead_inv = mod_inverse(d[dd], p);
    let mut r: Vec<u64> = a.to_vec();
    while let Some(rd) = poly_deg(&r) {
        if rd < dd {
            break;
        }
        let factor = r[rd] * lead_inv % p;
        for k in 0..=dd {
            let idx = rd - dd + k;
            r[idx] = (r[idx] + p - factor * d[k] % p) % p;
        }
    }
    r.truncate(dd.max(1));
    r.resize(dd.max(1), 0);
    r
}

fn poly_powmod(p: u64, base: &[u64], mut e: u64, modulus: &[u64]) -> Vec<u64> {
    let mut b = poly_rem(p, base, modulus);
    let mut acc = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(p, &poly_mul(p, &acc, &b), modulus);
        }
        b = poly_rem(p, &poly_mul(p, &b, &b), modulus);
        e >>= 1;
    }
    acc
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while poly_deg(&y).is_some() {
        let r = poly_rem(p, &x, &y);
        x = y;
        y = r;
        poly_trim(&mut y);
    }
    x
}

/// Returns (g, u) with g = gcd(a, m) and u*a ≡ g (mod m).
fn poly_ext_gcd(p: u64, a: &[u64], m: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut u0: Vec<u64> = vec![0];
    let mut u1: Vec<u64> = vec![1];
    while poly_deg(&r1).is_some() {
        // quotient of r0 by r1
        let d1 = poly_deg(&r1).unwrap();
        let lead_inv = mod_inverse(r1[d1], p);
        let mut q = vec![0; poly_deg(&r0).map_or(1, |d| d.saturating_sub(d1) + 1)];
        let mut rem = r0.clone();
        while let Some(rd) = poly_deg(&rem) {
            if rd < d1 {
                break;
            }
            let factor = rem[rd] * lead_inv % p;
            q[rd - d1] = factor;
            for k in 0..=d1 {
                let idx = rd - d1 + k;
                rem[idx] = (rem[idx] + p - factor * r1[k] % p) % p;
            }
        }
        poly_trim(&mut rem);
        let qu1 = poly_mul(p, &q, &u1);
        let mut new_u = u0.clone();
        new_u.resize(new_u.len().max(qu1.len()), 0);
        for (i, &c) in qu1.iter().enumerate() {
            new_u[i] = (new_u[i] + p - c) % p;
        }
        poly_trim(&mut new_u);
        r0 = r1;
        r1 = rem;
        u0 = u1;
        u1 = new_u;
    }
    (r0, u0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = poly_deg(f).unwrap();
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    // x^{p^m} ≡ x mod f, and x^{p^{m/t}} - x coprime to f for prime t | m
    let x = vec![0, 1];
    let mut h = x.clone();
    let mut powers = vec![poly_rem(p, &x, f)];
    for _ in 0..m {
        h = poly_powmod(p, &h, p, f);
        powers.push(h.clone());
    }
    let mut top = powers[m].clone();
    poly_trim(&mut top);
    let mut xx = poly_rem(p, &x, f);
    poly_trim(&mut xx);
    if top != xx {
        return false;
    }
    for t in prime_factors(m as u64) {
        let k = m / t as usize;
        // gcd(x^{p^k} - x, f) must be constant
        let mut diff = powers[k].clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(p, &diff, f);
        if poly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree m over F_p, "smallest" meaning
/// the lowest value of sum(c_i p^i) over the non-leading coefficients.
fn smallest_irreducible(p: u64, m: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; m + 1];
    coeffs[m] = 1;
    loop {
        if is_irreducible(p, &coeffs) {
            return coeffs;
        }
        // odometer on the low m coefficients
        let mut i = 0;
        loop {
            assert!(i < m, "no irreducible polynomial found (impossible)");
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

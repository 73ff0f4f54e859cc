//! Arithmetic of the extension `F_p ⊂ F_{p^n}` with a fixed irreducible
//! modulus, plus the lattice of intermediate subfields.

pub mod linalg;
mod matching;
mod subspace;

pub use matching::{
    a_matched_subspace, basis_matchable, find_matched_basis, is_matched, linear_locally_matched,
    ordered_bases, ordered_basis_count, primitive_check, random_basis, strong_matching_exists,
    theorem51_check, BasisMatching, BasisMode, BasisSeq, CriterionViolator, LinearLocalReport,
    LinearLocalRow, LinearLocalStatus, LocalSearchConfig, MatchDecision, Matchable,
    MatchedBasisOutcome, PrimitiveVerdict, Theorem51Report,
};
pub use subspace::{
    enumerate_subspaces, gaussian_binomial, linear_kneser_verify, product_span, random_subspace_of,
    scale_space, stabilizer_subfield, LinearKneserCertificate, Subspace,
};

use crate::group::is_prime;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// An element of `F_{p^n}`: coefficients in the power basis of the modulus
/// root, constant term first, always reduced mod `p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqElement {
    coeffs: Vec<u64>,
}

impl FqElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl std::fmt::Display for FqElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}]",
            self.coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// A proper subfield `F_{p^d}` of the extension, `d | n`, given as the fixed
/// space of the `d`-th Frobenius power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubfieldDesc {
    pub d: usize,
    pub space: Subspace,
}

/// The extension `F_p ⊂ F_{p^n}` with a fixed monic irreducible modulus of
/// degree `n` (little-endian coefficients, length `n + 1`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldCtxWire", into = "FieldCtxWire")]
pub struct FieldCtx {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
}

#[derive(Serialize, Deserialize, Clone)]
struct FieldCtxWire {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
}

impl TryFrom<FieldCtxWire> for FieldCtx {
    type Error = Error;
    fn try_from(w: FieldCtxWire) -> Result<Self> {
        FieldCtx::new(w.p, w.n, Some(w.modulus))
    }
}

impl From<FieldCtx> for FieldCtxWire {
    fn from(c: FieldCtx) -> Self {
        FieldCtxWire {
            p: c.p,
            n: c.n,
            modulus: c.modulus,
        }
    }
}

// --- dense polynomial helpers over F_p, little-endian coefficients ---

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_deg(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
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

fn scalar_inv(a: u64, p: u64) -> u64 {
    // p prime and small; Fermat.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Remainder of `a` modulo `b` (`b` non-zero, any leading coefficient).
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = poly_deg(b).expect("division by zero polynomial");
    let lead_inv = scalar_inv(b[db], p);
    let mut r = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let factor = r[dr] * lead_inv % p;
        let shift = dr - db;
        for i in 0..=db {
            let sub = factor * b[i] % p;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
    }
    poly_trim(&mut r);
    r
}

/// Extended Euclid over F_p[t]: returns `(g, s)` with `s·a ≡ g (mod b)` and
/// `g = gcd(a, b)` made monic.
fn poly_half_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut s0: Vec<u64> = vec![1];
    let mut s1: Vec<u64> = vec![];
    while !r1.is_empty() {
        // r0 = q*r1 + r2
        let d1 = poly_deg(&r1).unwrap();
        let lead_inv = scalar_inv(r1[d1], p);
        let mut q = vec![0u64; r0.len().saturating_sub(d1).max(1)];
        let mut r = r0.clone();
        while let Some(dr) = poly_deg(&r) {
            if dr < d1 {
                break;
            }
            let factor = r[dr] * lead_inv % p;
            q[dr - d1] = (q[dr - d1] + factor) % p;
            for i in 0..=d1 {
                let sub = factor * r1[i] % p;
                r[i + dr - d1] = (r[i + dr - d1] + p - sub) % p;
            }
        }
        poly_trim(&mut r);
        poly_trim(&mut q);
        // s2 = s0 - q*s1
        let qs1 = poly_mul(&q, &s1, p);
        let mut s2 = s0.clone();
        if s2.len() < qs1.len() {
            s2.resize(qs1.len(), 0);
        }
        for (i, &c) in qs1.iter().enumerate() {
            s2[i] = (s2[i] + p - c) % p;
        }
        poly_trim(&mut s2);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // normalize gcd monic
    if let Some(d) = poly_deg(&r0) {
        let inv = scalar_inv(r0[d], p);
        for c in r0.iter_mut() {
            *c = *c * inv % p;
        }
        for c in s0.iter_mut() {
            *c = *c * inv % p;
        }
    }
    (r0, s0)
}

/// Irreducibility over F_p by trial division against every monic polynomial
/// of degree up to `deg/2`.
fn poly_irreducible(f: &[u64], p: u64) -> bool {
    let d = match poly_deg(f) {
        Some(d) => d,
        None => return false,
    };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    for dd in 1..=d / 2 {
        // monic candidates of degree dd, low coefficients counted in base p
        let count = p.pow(dd as u32);
        for v in 0..count {
            let mut g = vec![0u64; dd + 1];
            let mut rest = v;
            for c in g.iter_mut().take(dd) {
                *c = rest % p;
                rest /= p;
            }
            g[dd] = 1;
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Build the extension, validating primality of `p` and irreducibility
    /// of the modulus. Without an explicit modulus the first irreducible in
    /// the ascending base-`p` encoding of the low coefficients is chosen, so
    /// contexts are reproducible across runs.
    pub fn new(p: u64, n: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n < 1 {
            return Err(Error::InvalidInstance(
                "extension degree must be >= 1".into(),
            ));
        }
        let modulus = match modulus {
            Some(mut m) => {
                for c in m.iter_mut() {
                    *c %= p;
                }
                if m.len() != n + 1 || m[n] != 1 {
                    return Err(Error::BadModulus);
                }
                if !poly_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus);
                }
                m
            }
            None => Self::default_modulus(p, n)?,
        };
        Ok(FieldCtx { p, n, modulus })
    }

    fn default_modulus(p: u64, n: usize) -> Result<Vec<u64>> {
        let count = (p as u128).pow(n as u32);
        for v in 0..count {
            let mut m = vec![0u64; n + 1];
            let mut rest = v;
            for c in m.iter_mut().take(n) {
                *c = (rest % p as u128) as u64;
                rest /= p as u128;
            }
            m[n] = 1;
            if poly_irreducible(&m, p) {
                return Ok(m);
            }
        }
        Err(Error::Internal(format!(
            "no irreducible of degree {n} over F_{p}"
        )))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of field elements, `p^n`.
    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    pub fn zero(&self) -> FqElement {
        FqElement {
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(&self) -> FqElement {
        let mut coeffs = vec![0; self.n];
        coeffs[0] = 1;
        FqElement { coeffs }
    }

    /// The class of `t`, the root of the modulus (requires `n ≥ 2` to be a
    /// non-scalar).
    pub fn gen(&self) -> FqElement {
        let mut coeffs = vec![0; self.n];
        if self.n > 1 {
            coeffs[1] = 1;
        } else {
            coeffs[0] = 1;
        }
        FqElement { coeffs }
    }

    /// Build an element from raw coefficients (reduced mod `p`); the length
    /// must be exactly `n`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElement> {
        if coeffs.len() != self.n {
            return Err(Error::InvalidInstance(format!(
                "element needs {} coefficients, got {}",
                self.n,
                coeffs.len()
            )));
        }
        Ok(FqElement {
            coeffs: coeffs.iter().map(|&c| c % self.p).collect(),
        })
    }

    pub fn check_element(&self, x: &FqElement) -> Result<()> {
        if x.coeffs.len() != self.n || x.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidInstance(format!(
                "element {x} is not canonical for F_{{{}^{}}}",
                self.p, self.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, x: &FqElement, y: &FqElement) -> FqElement {
        FqElement {
            coeffs: x
                .coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(&a, &b)| (a + b) % self.p)
                .collect(),
        }
    }

    pub fn sub(&self, x: &FqElement, y: &FqElement) -> FqElement {
        FqElement {
            coeffs: x
                .coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(&a, &b)| (a + self.p - b) % self.p)
                .collect(),
        }
    }

    pub fn scalar_mul(&self, c: u64, x: &FqElement) -> FqElement {
        let c = c % self.p;
        FqElement {
            coeffs: x.coeffs.iter().map(|&a| a * c % self.p).collect(),
        }
    }

    pub fn mul(&self, x: &FqElement, y: &FqElement) -> FqElement {
        let prod = poly_mul(&x.coeffs, &y.coeffs, self.p);
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.n, 0);
        FqElement { coeffs: r }
    }

    pub fn inv(&self, x: &FqElement) -> Result<FqElement> {
        if x.is_zero() {
            return Err(Error::ZeroInversion);
        }
        let (g, s) = poly_half_gcd(&x.coeffs, &self.modulus, self.p);
        if poly_deg(&g) != Some(0) {
            return Err(Error::Internal(format!(
                "gcd({x}, modulus) is not constant"
            )));
        }
        let mut r = poly_rem(&s, &self.modulus, self.p);
        r.resize(self.n, 0);
        Ok(FqElement { coeffs: r })
    }

    pub fn pow(&self, x: &FqElement, e: u64) -> FqElement {
        let mut result = self.one();
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// All `p^n` field elements in ascending base-`p` coefficient order
    /// (constant term least significant).
    pub fn elements(&self) -> Vec<FqElement> {
        let mut out = Vec::with_capacity(self.size() as usize);
        let count = self.size();
        for v in 0..count {
            let mut coeffs = vec![0u64; self.n];
            let mut rest = v;
            for c in coeffs.iter_mut() {
                *c = (rest % self.p as u128) as u64;
                rest /= self.p as u128;
            }
            out.push(FqElement { coeffs });
        }
        out
    }

    /// Matrix of multiplication by `x` in the power basis: row `i` holds the
    /// coordinates of `x · t^i`, so that (row vector) × matrix implements
    /// the map `v ↦ v·x`.
    pub fn mult_matrix(&self, x: &FqElement) -> Vec<Vec<u64>> {
        let mut rows = Vec::with_capacity(self.n);
        let mut current = x.clone();
        for _ in 0..self.n {
            rows.push(current.coeffs.clone());
            // multiply by t
            let mut shifted = vec![0u64; self.n + 1];
            shifted[1..=self.n].copy_from_slice(&current.coeffs);
            let mut r = poly_rem(&shifted, &self.modulus, self.p);
            r.resize(self.n, 0);
            current = FqElement { coeffs: r };
        }
        rows
    }

    /// The fixed space of `x ↦ x^(p^d)`, i.e. the subfield `F_{p^d}`,
    /// computed as the kernel of the linearized map `x ↦ x^(p^d) − x`.
    pub fn frobenius_fixed_field(&self, d: usize) -> Subspace {
        let q = (self.p as u128).pow(d as u32);
        let mut rows = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut e = vec![0u64; self.n];
            e[i] = 1;
            let basis_elem = FqElement { coeffs: e.clone() };
            let img = self.pow_u128(&basis_elem, q);
            let row: Vec<u64> = img
                .coeffs
                .iter()
                .zip(&e)
                .map(|(&a, &b)| (a + self.p - b) % self.p)
                .collect();
            rows.push(row);
        }
        // fixed vectors x satisfy x·M = 0: left kernel
        let ker = linalg::left_kernel(&rows, self.p, self.n);
        Subspace::from_vectors(self.p, self.n, &ker)
    }

    fn pow_u128(&self, x: &FqElement, mut e: u128) -> FqElement {
        let mut result = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// One subfield per divisor `d | n`, ascending, each certified to have
    /// dimension `d`.
    pub fn subfield_lattice(&self) -> Vec<SubfieldDesc> {
        let mut out = Vec::new();
        for d in 1..=self.n {
            if !self.n.is_multiple_of(d) {
                continue;
            }
            let space = self.frobenius_fixed_field(d);
            assert_eq!(
                space.dim(),
                d,
                "Frobenius fixed field of degree {d} has wrong dimension"
            );
            out.push(SubfieldDesc { d, space });
        }
        out
    }
}

impl std::fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{{{}^{}}}", self.p, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_quadratic_modulus_over_f2() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]); // t^2 + t + 1
    }

    #[test]
    fn first_quartic_modulus_over_f2() {
        let f16 = FieldCtx::new(2, 4, None).unwrap();
        assert_eq!(f16.modulus(), &[1, 1, 0, 0, 1]); // t^4 + t + 1
    }

    #[test]
    fn degree_one_field() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        assert_eq!(f3.modulus().len(), 2);
        assert_eq!(f3.size(), 3);
    }

    #[test]
    fn rejects_reducible_and_composite() {
        // t^2 + 1 = (t+1)^2 over F_2
        assert!(matches!(
            FieldCtx::new(2, 2, Some(vec![1, 0, 1])),
            Err(Error::ReducibleModulus)
        ));
        assert!(matches!(FieldCtx::new(4, 2, None), Err(Error::NotPrime(4))));
    }

    #[test]
    fn f4_multiplication_table() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        let w = f4.gen();
        let w_plus_1 = f4.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f4.mul(&w, &w), w_plus_1); // ω² = ω + 1
        assert_eq!(f4.inv(&w).unwrap(), w_plus_1); // ω⁻¹ = ω + 1
        assert_eq!(f4.mul(&f4.one(), &w), w);
    }

    #[test]
    fn inverses_across_the_field() {
        for ctx in [
            FieldCtx::new(2, 4, None).unwrap(),
            FieldCtx::new(3, 2, None).unwrap(),
            FieldCtx::new(5, 2, None).unwrap(),
        ] {
            for x in ctx.elements() {
                if x.is_zero() {
                    assert!(ctx.inv(&x).is_err());
                } else {
                    assert_eq!(ctx.mul(&x, &ctx.inv(&x).unwrap()), ctx.one());
                }
            }
        }
    }

    #[test]
    fn subfield_lattice_of_f16() {
        let f16 = FieldCtx::new(2, 4, None).unwrap();
        let lattice = f16.subfield_lattice();
        let dims: Vec<usize> = lattice.iter().map(|s| s.d).collect();
        assert_eq!(dims, vec![1, 2, 4]);
        // F_4 inside F_16: 4 elements, closed under multiplication.
        let f4 = &lattice[1].space;
        let elems = f4.element_vectors();
        assert_eq!(elems.len(), 4);
        for x in &elems {
            for y in &elems {
                let xe = f16.from_coeffs(x).unwrap();
                let ye = f16.from_coeffs(y).unwrap();
                let prod = f16.mul(&xe, &ye);
                assert!(f4.contains(prod.coeffs()));
            }
        }
    }

    #[test]
    fn subfield_lattice_of_f8_skips_f4() {
        let f8 = FieldCtx::new(2, 3, None).unwrap();
        let dims: Vec<usize> = f8.subfield_lattice().iter().map(|s| s.d).collect();
        assert_eq!(dims, vec![1, 3]);
    }

    #[test]
    fn field_json_round_trip() {
        let f16 = FieldCtx::new(2, 4, None).unwrap();
        let s = serde_json::to_string(&f16).unwrap();
        assert_eq!(s, r#"{"p":2,"n":4,"modulus":[1,1,0,0,1]}"#);
        let back: FieldCtx = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f16);
    }
}

//! K-subspaces of `F_{p^n}` in canonical reduced-echelon form, the lattice
//! operations on them, scaling, product spans, and stabilizer subfields.

use super::linalg::{self, left_kernel, rref, rref_with_pivots, vec_mat};
use super::{FieldCtx, FqElement, SubfieldDesc};
use crate::{Error, Result};
use rand::Rng;
use serde::ser::SerializeSeq;
use serde::Serialize;

/// An `F_p`-subspace of `F_{p^n}`, stored as the canonical reduced
/// row-echelon basis. Two equal subspaces have identical rows, so derived
/// equality and ordering are semantic. Serializes as the bare row array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    p: u64,
    ambient: usize,
    rows: Vec<Vec<u64>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows.len()))?;
        for r in &self.rows {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

impl Subspace {
    /// Span of arbitrary vectors, canonicalized. Entries are reduced mod
    /// `p`; an empty list gives the zero space.
    pub fn from_vectors(p: u64, ambient: usize, vecs: &[Vec<u64>]) -> Self {
        let cleaned: Vec<Vec<u64>> = vecs
            .iter()
            .map(|v| {
                let mut v: Vec<u64> = v.iter().map(|&c| c % p).collect();
                v.resize(ambient, 0);
                v
            })
            .collect();
        Subspace {
            p,
            ambient,
            rows: rref(&cleaned, p),
        }
    }

    pub fn from_elements(ctx: &FieldCtx, elems: &[FqElement]) -> Self {
        let vecs: Vec<Vec<u64>> = elems.iter().map(|e| e.coeffs().to_vec()).collect();
        Self::from_vectors(ctx.p(), ctx.n(), &vecs)
    }

    /// Reconstruct from rows that must already be in canonical reduced
    /// echelon form; used by parsers so stored certificates stay bit-exact.
    pub fn from_canonical_rows(p: u64, ambient: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        let candidate = Self::from_vectors(p, ambient, &rows);
        if candidate.rows != rows {
            return Err(Error::InvalidInstance(format!(
                "subspace rows are not in reduced echelon form; canonical form is {}",
                serde_json::to_string(&candidate.rows).unwrap_or_default()
            )));
        }
        Ok(candidate)
    }

    pub fn zero(p: u64, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            rows: vec![],
        }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![0u64; ambient];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { p, ambient, rows }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.p != other.p || self.ambient != other.ambient {
            return Err(Error::CtxMismatch);
        }
        Ok(())
    }

    /// Residual of `v` after elimination by the basis rows; zero exactly
    /// when `v` lies in the subspace.
    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = v.iter().map(|&c| c % self.p).collect();
        v.resize(self.ambient, 0);
        let (_, pivots) = rref_with_pivots(&self.rows, self.p);
        for (row, &pc) in self.rows.iter().zip(&pivots) {
            let c = v[pc];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = (*x + self.p - c * r % self.p) % self.p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        linalg::is_zero_vec(&self.reduce(v))
    }

    pub fn contains_element(&self, x: &FqElement) -> bool {
        self.contains(x.coeffs())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.p == other.p
            && self.ambient == other.ambient
            && self.rows.iter().all(|r| other.contains(r))
    }

    /// Coordinates of `v` in the canonical basis rows, if `v` lies in the
    /// subspace. Because the rows are reduced-echelon, the coordinate on row
    /// `j` is just the entry at that row's pivot column.
    pub fn coords_of(&self, v: &[u64]) -> Option<Vec<u64>> {
        if !self.contains(v) {
            return None;
        }
        let (_, pivots) = rref_with_pivots(&self.rows, self.p);
        Some(pivots.iter().map(|&pc| v[pc] % self.p).collect())
    }

    /// The vector with the given coordinates over the basis rows.
    pub fn vector_from_coords(&self, coords: &[u64]) -> Vec<u64> {
        vec_mat(coords, &self.rows, self.p)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Subspace::from_vectors(self.p, self.ambient, &rows))
    }

    /// Intersection via the left kernel of the stacked basis matrix.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.p, self.ambient));
        }
        let k = self.rows.len();
        let mut stacked = self.rows.clone();
        stacked.extend(other.rows.iter().cloned());
        let relations = left_kernel(&stacked, self.p, self.ambient);
        let vecs: Vec<Vec<u64>> = relations
            .iter()
            .map(|z| vec_mat(&z[..k], &self.rows, self.p))
            .collect();
        Ok(Subspace::from_vectors(self.p, self.ambient, &vecs))
    }

    /// Intersection and sum together, with the dimension identity
    /// `dim U + dim V = dim(U∩V) + dim(U+V)` checked before returning.
    pub fn meet_join(&self, other: &Subspace) -> Result<(Subspace, Subspace)> {
        let meet = self.intersect(other)?;
        let join = self.sum(other)?;
        assert_eq!(
            self.dim() + other.dim(),
            meet.dim() + join.dim(),
            "modular dimension identity failed"
        );
        Ok((meet, join))
    }

    /// All vectors of the subspace: coordinate tuples over the basis rows in
    /// ascending base-`p` order (first coordinate least significant). The
    /// caller is responsible for keeping `p^dim` reasonable.
    pub fn element_vectors(&self) -> Vec<Vec<u64>> {
        let count = (self.p as u128).pow(self.dim() as u32);
        let mut out = Vec::with_capacity(count as usize);
        for v in 0..count {
            let mut coords = vec![0u64; self.dim()];
            let mut rest = v;
            for c in coords.iter_mut() {
                *c = (rest % self.p as u128) as u64;
                rest /= self.p as u128;
            }
            out.push(self.vector_from_coords(&coords));
        }
        out
    }

    /// Non-zero vectors, same order as [`Self::element_vectors`].
    pub fn nonzero_vectors(&self) -> Vec<Vec<u64>> {
        self.element_vectors()
            .into_iter()
            .filter(|v| !linalg::is_zero_vec(v))
            .collect()
    }
}

/// `{a·w : w ∈ W}` (or `a⁻¹·W` with `inverse`), recanonicalized. Scaling by
/// a non-zero field element is bijective, so the dimension is preserved.
pub fn scale_space(ctx: &FieldCtx, a: &FqElement, w: &Subspace, inverse: bool) -> Result<Subspace> {
    if a.is_zero() {
        return Err(Error::ZeroInversion);
    }
    if w.p() != ctx.p() || w.ambient() != ctx.n() {
        return Err(Error::CtxMismatch);
    }
    let factor = if inverse { ctx.inv(a)? } else { a.clone() };
    let m = ctx.mult_matrix(&factor);
    let vecs: Vec<Vec<u64>> = w.rows().iter().map(|r| vec_mat(r, &m, ctx.p())).collect();
    let out = Subspace::from_vectors(ctx.p(), ctx.n(), &vecs);
    debug_assert_eq!(out.dim(), w.dim());
    Ok(out)
}

/// `⟨AB⟩`: the subspace generated by all products `ab`. By bilinearity the
/// products of basis rows suffice.
pub fn product_span(ctx: &FieldCtx, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.p() != ctx.p() || a.ambient() != ctx.n() {
        return Err(Error::CtxMismatch);
    }
    a.compatible(b)?;
    let mut vecs = Vec::with_capacity(a.dim() * b.dim());
    for ra in a.rows() {
        let ea = ctx.from_coeffs(ra)?;
        let m = ctx.mult_matrix(&ea);
        for rb in b.rows() {
            vecs.push(vec_mat(rb, &m, ctx.p()));
        }
    }
    Ok(Subspace::from_vectors(ctx.p(), ctx.n(), &vecs))
}

/// The stabilizer `{x ∈ L : xW ⊆ W}` of a non-zero subspace, certified to
/// be one of the intermediate subfields `F_{p^d}`.
pub fn stabilizer_subfield(ctx: &FieldCtx, w: &Subspace) -> Result<SubfieldDesc> {
    if w.is_zero() {
        return Err(Error::ZeroSpace);
    }
    if w.p() != ctx.p() || w.ambient() != ctx.n() {
        return Err(Error::CtxMismatch);
    }
    // x stabilizes W iff for every basis row w_j and every functional φ
    // annihilating W, φ(x·w_j) = 0. With M_j the multiplication matrix of
    // w_j, that is x · (M_j φᵀ) = 0: one linear constraint per (j, φ).
    let ann = linalg::kernel(w.rows(), ctx.p(), ctx.n());
    let mut constraints = Vec::new();
    for wj in w.rows() {
        let e = ctx.from_coeffs(wj)?;
        let m = ctx.mult_matrix(&e);
        for phi in &ann {
            // constraint functional c with c·x = (x·M)·φ
            let c: Vec<u64> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(phi)
                        .fold(0u64, |acc, (&a, &b)| (acc + a * b) % ctx.p())
                })
                .collect();
            constraints.push(c);
        }
    }
    let fixed = linalg::kernel(&constraints, ctx.p(), ctx.n());
    let space = Subspace::from_vectors(ctx.p(), ctx.n(), &fixed);
    let d = space.dim();
    if d == 0 || !ctx.n().is_multiple_of(d) {
        return Err(Error::Internal(format!(
            "stabilizer has dimension {d}, not a divisor of {}",
            ctx.n()
        )));
    }
    let subfield = ctx.frobenius_fixed_field(d);
    if subfield != space {
        return Err(Error::Internal(
            "stabilizer space is not the Frobenius fixed field of its dimension".into(),
        ));
    }
    Ok(SubfieldDesc { d, space })
}

/// A verified instance of the dimension bound
/// `dim⟨AB⟩ ≥ dim A + dim B − dim H`, `H = stabilizer(⟨AB⟩)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearKneserCertificate {
    pub a: Subspace,
    pub b: Subspace,
    pub product: Subspace,
    pub h: SubfieldDesc,
    pub slack: i64,
}

/// Check the product-span growth bound on one instance; negative slack is a
/// theorem violation (finite fields are separable, so the bound applies
/// unconditionally here).
pub fn linear_kneser_verify(
    ctx: &FieldCtx,
    a: &Subspace,
    b: &Subspace,
) -> Result<LinearKneserCertificate> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroSpace);
    }
    let product = product_span(ctx, a, b)?;
    let h = stabilizer_subfield(ctx, &product)?;
    let slack = product.dim() as i64 - a.dim() as i64 - b.dim() as i64 + h.d as i64;
    if slack < 0 {
        return Err(Error::TheoremViolation(format!(
            "product-span bound fails: dim<AB>={} dimA={} dimB={} dimH={}",
            product.dim(),
            a.dim(),
            b.dim(),
            h.d
        )));
    }
    Ok(LinearKneserCertificate {
        a: a.clone(),
        b: b.clone(),
        product,
        h,
        slack,
    })
}

/// Number of `m`-dimensional subspaces of a `d`-dimensional space over F_p
/// (Gaussian binomial coefficient).
pub fn gaussian_binomial(d: usize, m: usize, p: u64) -> u128 {
    if m > d {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    let p = p as u128;
    for i in 0..m {
        num *= p.pow((d - i) as u32) - 1;
        den *= p.pow((m - i) as u32) - 1;
    }
    num / den
}

/// Every `m`-dimensional subspace of `ambient`, by enumerating reduced
/// echelon patterns in coordinates: pivot columns in lexicographic order,
/// free entries counted in base `p`. The count is the Gaussian binomial;
/// callers enforce their budgets against it.
pub fn enumerate_subspaces(ambient: &Subspace, m: usize) -> Vec<Subspace> {
    let d = ambient.dim();
    if m > d {
        return vec![];
    }
    if m == 0 {
        return vec![Subspace::zero(ambient.p(), ambient.ambient())];
    }
    let p = ambient.p();
    let mut out = Vec::new();
    let mut pivot_cols = (0..m).collect::<Vec<usize>>();
    loop {
        // free positions: row i, columns past its pivot that are not pivots
        let mut free_pos = Vec::new();
        for (i, &pc) in pivot_cols.iter().enumerate() {
            for col in pc + 1..d {
                if !pivot_cols.contains(&col) {
                    free_pos.push((i, col));
                }
            }
        }
        let combos = (p as u128).pow(free_pos.len() as u32);
        for v in 0..combos {
            let mut mat = vec![vec![0u64; d]; m];
            for (i, &pc) in pivot_cols.iter().enumerate() {
                mat[i][pc] = 1;
            }
            let mut rest = v;
            for &(i, col) in &free_pos {
                mat[i][col] = (rest % p as u128) as u64;
                rest /= p as u128;
            }
            // map coordinate rows through the ambient basis
            let vecs: Vec<Vec<u64>> = mat
                .iter()
                .map(|row| ambient.vector_from_coords(row))
                .collect();
            out.push(Subspace::from_vectors(p, ambient.ambient(), &vecs));
        }
        // next pivot combination in lexicographic order
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivot_cols[i] < d - (m - i) {
                pivot_cols[i] += 1;
                for j in i + 1..m {
                    pivot_cols[j] = pivot_cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Uniform random `m`-dimensional subspace of `ambient`: random coordinate
/// matrices, rejected until the rank is exactly `m`.
pub fn random_subspace_of<R: Rng>(ambient: &Subspace, m: usize, rng: &mut R) -> Subspace {
    assert!(m <= ambient.dim(), "requested dimension exceeds the space");
    let p = ambient.p();
    loop {
        let coords: Vec<Vec<u64>> = (0..m)
            .map(|_| (0..ambient.dim()).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let vecs: Vec<Vec<u64>> = coords
            .iter()
            .map(|row| ambient.vector_from_coords(row))
            .collect();
        let s = Subspace::from_vectors(p, ambient.ambient(), &vecs);
        if s.dim() == m {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> FieldCtx {
        FieldCtx::new(2, 4, None).unwrap()
    }

    fn span(ctx: &FieldCtx, vecs: &[&[u64]]) -> Subspace {
        Subspace::from_vectors(
            ctx.p(),
            ctx.n(),
            &vecs.iter().map(|v| v.to_vec()).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn canonical_form_collapses_duplicates() {
        let ctx = f16();
        let s = span(&ctx, &[&[1, 1, 0, 0], &[1, 1, 0, 0]]);
        assert_eq!(s.dim(), 1);
        let sofa = Subspace::from_vectors(2, 4, &[vec![1, 1, 0, 0]]);
        assert_eq!(s, sofa);
    }

    #[test]
    fn from_vectors_is_basis_order_independent() {
        let a = Subspace::from_vectors(2, 4, &[vec![1, 0, 1, 0], vec![0, 1, 1, 1]]);
        let b = Subspace::from_vectors(2, 4, &[vec![0, 1, 1, 1], vec![1, 1, 0, 1]]);
        assert_eq!(a, b); // second basis spans the same plane
    }

    #[test]
    fn full_span_in_f4() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        let s = Subspace::from_vectors(2, 2, &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert!(s.is_full());
        assert_eq!(s.dim(), f4.n());
    }

    #[test]
    fn meet_join_identities() {
        let ctx = f16();
        let u = span(&ctx, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let v = span(&ctx, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let (meet, join) = u.meet_join(&v).unwrap();
        assert_eq!(meet, span(&ctx, &[&[0, 1, 0, 0]]));
        assert_eq!(join.dim(), 3);
        // U ∩ U = U = U + U
        let (m2, j2) = u.meet_join(&u).unwrap();
        assert_eq!(m2, u);
        assert_eq!(j2, u);
        // zero space: identity for +, absorbing for ∩
        let zero = Subspace::zero(2, 4);
        let (m3, j3) = u.meet_join(&zero).unwrap();
        assert!(m3.is_zero());
        assert_eq!(j3, u);
    }

    #[test]
    fn lines_in_f4_meet_trivially() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        let one = span(&f4, &[&[1, 0]]);
        let w = span(&f4, &[&[0, 1]]);
        let (meet, join) = one.meet_join(&w).unwrap();
        assert!(meet.is_zero());
        assert!(join.is_full());
    }

    #[test]
    fn scaling_by_units() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        let one_line = span(&f4, &[&[1, 0]]);
        let w = f4.gen();
        let scaled = scale_space(&f4, &w, &one_line, false).unwrap();
        assert_eq!(scaled, span(&f4, &[&[0, 1]]));
        let back = scale_space(&f4, &w, &scaled, true).unwrap();
        assert_eq!(back, one_line);
        assert!(scale_space(&f4, &f4.zero(), &one_line, false).is_err());
    }

    #[test]
    fn product_span_basics() {
        let ctx = f16();
        let lattice = ctx.subfield_lattice();
        let f4_space = &lattice[1].space;
        // F_4 · F_4 = F_4 inside F_16
        let prod = product_span(&ctx, f4_space, f4_space).unwrap();
        assert_eq!(&prod, f4_space);
        // ⟨1⟩ · B = B
        let one = span(&ctx, &[&[1, 0, 0, 0]]);
        let b = span(&ctx, &[&[0, 1, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(product_span(&ctx, &one, &b).unwrap(), b);
        // one-dimensional spaces multiply: ⟨t⟩·⟨t⟩ = ⟨t²⟩
        let t = span(&ctx, &[&[0, 1, 0, 0]]);
        let t2 = span(&ctx, &[&[0, 0, 1, 0]]);
        assert_eq!(product_span(&ctx, &t, &t).unwrap(), t2);
    }

    #[test]
    fn stabilizers_are_subfields() {
        let ctx = f16();
        let lattice = ctx.subfield_lattice();
        let f4_space = lattice[1].space.clone();
        let stab = stabilizer_subfield(&ctx, &f4_space).unwrap();
        assert_eq!(stab.d, 2);
        assert_eq!(stab.space, f4_space);

        let one = span(&ctx, &[&[1, 0, 0, 0]]);
        assert_eq!(stabilizer_subfield(&ctx, &one).unwrap().d, 1);

        let full = Subspace::full(2, 4);
        assert_eq!(stabilizer_subfield(&ctx, &full).unwrap().d, 4);

        assert!(stabilizer_subfield(&ctx, &Subspace::zero(2, 4)).is_err());
    }

    #[test]
    fn product_bound_on_subfield_pair() {
        let ctx = f16();
        let f4_space = ctx.subfield_lattice()[1].space.clone();
        let cert = linear_kneser_verify(&ctx, &f4_space, &f4_space).unwrap();
        assert_eq!(cert.product.dim(), 2);
        assert_eq!(cert.h.d, 2);
        assert_eq!(cert.slack, 0);
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(4, 1, 2), 15);
        assert_eq!(gaussian_binomial(3, 2, 2), 7);
        assert_eq!(gaussian_binomial(2, 1, 3), 4);
        assert_eq!(gaussian_binomial(2, 5, 2), 0);
    }

    #[test]
    fn subspace_enumeration_matches_count() {
        let full = Subspace::full(2, 4);
        for m in 0..=4 {
            let subs = enumerate_subspaces(&full, m);
            assert_eq!(subs.len() as u128, gaussian_binomial(4, m, 2), "m={m}");
            let mut dedup = subs.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), subs.len(), "duplicates at m={m}");
        }
        let plane = Subspace::from_vectors(3, 3, &[vec![1, 0, 2], vec![0, 1, 1]]);
        let lines = enumerate_subspaces(&plane, 1);
        assert_eq!(lines.len() as u128, gaussian_binomial(2, 1, 3));
        for l in &lines {
            assert!(l.is_subspace_of(&plane));
        }
    }

    #[test]
    fn canonical_rows_rejects_non_echelon_with_hint() {
        let err = Subspace::from_canonical_rows(2, 4, vec![vec![1, 1, 0, 0], vec![1, 0, 0, 0]])
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("reduced echelon"), "{msg}");
        assert!(msg.contains("[[1,0,0,0],[0,1,0,0]]"), "{msg}");
    }
}

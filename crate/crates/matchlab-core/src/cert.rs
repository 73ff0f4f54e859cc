//! Self-contained JSON certificates with a standalone verifier.
//!
//! Every certificate embeds its full instance, and [`verify`] re-derives the
//! claim from that instance using only the module primitives, independent of
//! whoever produced the file. Emission is canonical: subsets are sorted,
//! subspace rows are reduced-echelon, and parsing rejects non-canonical
//! input, so equal certificates have equal bytes and content-addressed
//! storage is stable.

use crate::field::{
    basis_matchable, product_span, stabilizer_subfield, BasisSeq, FieldCtx, FqElement,
    LinearKneserCertificate, Subspace,
};
use crate::group::{
    check_matching, stabilizer, GroupElement, GroupSpec, GroupSubset, HallViolator,
    KneserCertificate, LocalMatching, Matching, Subgroup,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Current schema version of certificate files.
pub const SCHEMA_VERSION: u32 = 1;

/// A validated certificate. Construct from module outputs via the helper
/// constructors, or parse from JSON with [`Certificate::from_json`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Matching {
        a: GroupSubset,
        b: GroupSubset,
        pairs: Vec<(GroupElement, GroupElement)>,
    },
    LocalMatching {
        a: GroupSubset,
        b: GroupSubset,
        subgroup: Subgroup,
        witness: GroupElement,
        a_prime: GroupSubset,
        pairs: Vec<(GroupElement, GroupElement)>,
    },
    HallViolator {
        a: GroupSubset,
        b: GroupSubset,
        s: GroupSubset,
        u: GroupSubset,
    },
    Kneser {
        a: GroupSubset,
        b: GroupSubset,
        c: GroupSubset,
        h: Subgroup,
        slack: i64,
    },
    LinearKneser {
        field: FieldCtx,
        a: Subspace,
        b: Subspace,
        product: Subspace,
        h_degree: usize,
        h: Subspace,
        slack: i64,
    },
    BasisMatching {
        field: FieldCtx,
        ambient_a: Subspace,
        target_b: Subspace,
        a_basis: Vec<FqElement>,
        b_basis: Vec<FqElement>,
    },
    CriterionViolator {
        field: FieldCtx,
        ambient_a: Subspace,
        target_b: Subspace,
        a_basis: Vec<FqElement>,
        indices: Vec<usize>,
        witness: Subspace,
        deficit: i64,
    },
}

// ---------------------------------------------------------------------------
// wire format

#[derive(Serialize, Deserialize)]
struct CertFile {
    schema: u32,
    #[serde(flatten)]
    body: CertWire,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CertWire {
    Matching {
        group: GroupSpec,
        a: Vec<GroupElement>,
        b: Vec<GroupElement>,
        pairs: Vec<(GroupElement, GroupElement)>,
    },
    LocalMatching {
        group: GroupSpec,
        a: Vec<GroupElement>,
        b: Vec<GroupElement>,
        subgroup: Vec<GroupElement>,
        witness: GroupElement,
        a_prime: Vec<GroupElement>,
        pairs: Vec<(GroupElement, GroupElement)>,
    },
    HallViolator {
        group: GroupSpec,
        a: Vec<GroupElement>,
        b: Vec<GroupElement>,
        s: Vec<GroupElement>,
        u: Vec<GroupElement>,
    },
    Kneser {
        group: GroupSpec,
        a: Vec<GroupElement>,
        b: Vec<GroupElement>,
        c: Vec<GroupElement>,
        h: Vec<GroupElement>,
        slack: i64,
    },
    LinearKneser {
        field: FieldCtx,
        a: Vec<Vec<u64>>,
        b: Vec<Vec<u64>>,
        product: Vec<Vec<u64>>,
        h_degree: usize,
        h: Vec<Vec<u64>>,
        slack: i64,
    },
    BasisMatching {
        field: FieldCtx,
        ambient_a: Vec<Vec<u64>>,
        target_b: Vec<Vec<u64>>,
        a_basis: Vec<FqElement>,
        b_basis: Vec<FqElement>,
    },
    CriterionViolator {
        field: FieldCtx,
        ambient_a: Vec<Vec<u64>>,
        target_b: Vec<Vec<u64>>,
        a_basis: Vec<FqElement>,
        indices: Vec<usize>,
        witness: Vec<Vec<u64>>,
        deficit: i64,
    },
}

/// Strict subset parser: elements must already be in canonical strictly
/// ascending order, as emitted.
fn subset_canonical(group: &GroupSpec, elems: Vec<GroupElement>) -> Result<GroupSubset> {
    let parsed = GroupSubset::new_strict(group.clone(), elems.clone())?;
    if parsed.elements() != elems.as_slice() {
        return Err(Error::InvalidInstance(
            "subset is not in canonical order".into(),
        ));
    }
    Ok(parsed)
}

fn space_canonical(ctx: &FieldCtx, rows: Vec<Vec<u64>>) -> Result<Subspace> {
    Subspace::from_canonical_rows(ctx.p(), ctx.n(), rows)
}

fn elements_checked(ctx: &FieldCtx, elems: Vec<FqElement>) -> Result<Vec<FqElement>> {
    for e in &elems {
        ctx.check_element(e)?;
    }
    Ok(elems)
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Matching { .. } => "matching",
            Certificate::LocalMatching { .. } => "local_matching",
            Certificate::HallViolator { .. } => "hall_violator",
            Certificate::Kneser { .. } => "kneser",
            Certificate::LinearKneser { .. } => "linear_kneser",
            Certificate::BasisMatching { .. } => "basis_matching",
            Certificate::CriterionViolator { .. } => "criterion_violator",
        }
    }

    pub fn from_matching(m: &Matching) -> Self {
        Certificate::Matching {
            a: m.a.clone(),
            b: m.b.clone(),
            pairs: m.pairs.clone(),
        }
    }

    pub fn from_local_matching(a: &GroupSubset, b: &GroupSubset, lm: &LocalMatching) -> Self {
        Certificate::LocalMatching {
            a: a.clone(),
            b: b.clone(),
            subgroup: lm.subgroup.clone(),
            witness: lm.witness.clone(),
            a_prime: lm.a_prime.clone(),
            pairs: lm.pairs.clone(),
        }
    }

    pub fn from_hall_violator(a: &GroupSubset, b: &GroupSubset, v: &HallViolator) -> Self {
        Certificate::HallViolator {
            a: a.clone(),
            b: b.clone(),
            s: v.s.clone(),
            u: v.u.clone(),
        }
    }

    pub fn from_kneser(c: &KneserCertificate) -> Self {
        Certificate::Kneser {
            a: c.a.clone(),
            b: c.b.clone(),
            c: c.c.clone(),
            h: c.h.clone(),
            slack: c.slack,
        }
    }

    pub fn from_linear_kneser(ctx: &FieldCtx, c: &LinearKneserCertificate) -> Self {
        Certificate::LinearKneser {
            field: ctx.clone(),
            a: c.a.clone(),
            b: c.b.clone(),
            product: c.product.clone(),
            h_degree: c.h.d,
            h: c.h.space.clone(),
            slack: c.slack,
        }
    }

    pub fn from_basis_matching(
        ctx: &FieldCtx,
        ambient_a: &Subspace,
        target_b: &Subspace,
        a_basis: Vec<FqElement>,
        b_basis: Vec<FqElement>,
    ) -> Self {
        Certificate::BasisMatching {
            field: ctx.clone(),
            ambient_a: ambient_a.clone(),
            target_b: target_b.clone(),
            a_basis,
            b_basis,
        }
    }

    pub fn from_criterion_violator(
        ctx: &FieldCtx,
        ambient_a: &Subspace,
        target_b: &Subspace,
        a_basis: Vec<FqElement>,
        indices: Vec<usize>,
        witness: Subspace,
        deficit: i64,
    ) -> Self {
        Certificate::CriterionViolator {
            field: ctx.clone(),
            ambient_a: ambient_a.clone(),
            target_b: target_b.clone(),
            a_basis,
            indices,
            witness,
            deficit,
        }
    }

    fn to_wire(&self) -> CertWire {
        match self {
            Certificate::Matching { a, b, pairs } => CertWire::Matching {
                group: a.group().clone(),
                a: a.elements().to_vec(),
                b: b.elements().to_vec(),
                pairs: pairs.clone(),
            },
            Certificate::LocalMatching {
                a,
                b,
                subgroup,
                witness,
                a_prime,
                pairs,
            } => CertWire::LocalMatching {
                group: a.group().clone(),
                a: a.elements().to_vec(),
                b: b.elements().to_vec(),
                subgroup: subgroup.elements().to_vec(),
                witness: witness.clone(),
                a_prime: a_prime.elements().to_vec(),
                pairs: pairs.clone(),
            },
            Certificate::HallViolator { a, b, s, u } => CertWire::HallViolator {
                group: a.group().clone(),
                a: a.elements().to_vec(),
                b: b.elements().to_vec(),
                s: s.elements().to_vec(),
                u: u.elements().to_vec(),
            },
            Certificate::Kneser { a, b, c, h, slack } => CertWire::Kneser {
                group: a.group().clone(),
                a: a.elements().to_vec(),
                b: b.elements().to_vec(),
                c: c.elements().to_vec(),
                h: h.elements().to_vec(),
                slack: *slack,
            },
            Certificate::LinearKneser {
                field,
                a,
                b,
                product,
                h_degree,
                h,
                slack,
            } => CertWire::LinearKneser {
                field: field.clone(),
                a: a.rows().to_vec(),
                b: b.rows().to_vec(),
                product: product.rows().to_vec(),
                h_degree: *h_degree,
                h: h.rows().to_vec(),
                slack: *slack,
            },
            Certificate::BasisMatching {
                field,
                ambient_a,
                target_b,
                a_basis,
                b_basis,
            } => CertWire::BasisMatching {
                field: field.clone(),
                ambient_a: ambient_a.rows().to_vec(),
                target_b: target_b.rows().to_vec(),
                a_basis: a_basis.clone(),
                b_basis: b_basis.clone(),
            },
            Certificate::CriterionViolator {
                field,
                ambient_a,
                target_b,
                a_basis,
                indices,
                witness,
                deficit,
            } => CertWire::CriterionViolator {
                field: field.clone(),
                ambient_a: ambient_a.rows().to_vec(),
                target_b: target_b.rows().to_vec(),
                a_basis: a_basis.clone(),
                indices: indices.clone(),
                witness: witness.rows().to_vec(),
                deficit: *deficit,
            },
        }
    }

    fn from_wire(wire: CertWire) -> Result<Self> {
        Ok(match wire {
            CertWire::Matching { group, a, b, pairs } => Certificate::Matching {
                a: subset_canonical(&group, a)?,
                b: subset_canonical(&group, b)?,
                pairs,
            },
            CertWire::LocalMatching {
                group,
                a,
                b,
                subgroup,
                witness,
                a_prime,
                pairs,
            } => Certificate::LocalMatching {
                a: subset_canonical(&group, a)?,
                b: subset_canonical(&group, b)?,
                subgroup: Subgroup::from_elements(&group, subgroup)?,
                witness,
                a_prime: subset_canonical(&group, a_prime)?,
                pairs,
            },
            CertWire::HallViolator { group, a, b, s, u } => Certificate::HallViolator {
                a: subset_canonical(&group, a)?,
                b: subset_canonical(&group, b)?,
                s: subset_canonical(&group, s)?,
                u: subset_canonical(&group, u)?,
            },
            CertWire::Kneser {
                group,
                a,
                b,
                c,
                h,
                slack,
            } => Certificate::Kneser {
                a: subset_canonical(&group, a)?,
                b: subset_canonical(&group, b)?,
                c: subset_canonical(&group, c)?,
                h: Subgroup::from_elements(&group, h)?,
                slack,
            },
            CertWire::LinearKneser {
                field,
                a,
                b,
                product,
                h_degree,
                h,
                slack,
            } => Certificate::LinearKneser {
                a: space_canonical(&field, a)?,
                b: space_canonical(&field, b)?,
                product: space_canonical(&field, product)?,
                h_degree,
                h: space_canonical(&field, h)?,
                slack,
                field,
            },
            CertWire::BasisMatching {
                field,
                ambient_a,
                target_b,
                a_basis,
                b_basis,
            } => Certificate::BasisMatching {
                ambient_a: space_canonical(&field, ambient_a)?,
                target_b: space_canonical(&field, target_b)?,
                a_basis: elements_checked(&field, a_basis)?,
                b_basis: elements_checked(&field, b_basis)?,
                field,
            },
            CertWire::CriterionViolator {
                field,
                ambient_a,
                target_b,
                a_basis,
                indices,
                witness,
                deficit,
            } => Certificate::CriterionViolator {
                ambient_a: space_canonical(&field, ambient_a)?,
                target_b: space_canonical(&field, target_b)?,
                a_basis: elements_checked(&field, a_basis)?,
                indices,
                witness: space_canonical(&field, witness)?,
                deficit,
                field,
            },
        })
    }

    /// Canonical (compact) JSON bytes; equal certificates serialize
    /// identically, so these bytes can be content-addressed.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&CertFile {
            schema: SCHEMA_VERSION,
            body: self.to_wire(),
        })
        .expect("certificates always serialize")
    }

    /// Human-oriented pretty JSON (same data as [`Self::canonical_json`]).
    pub fn pretty_json(&self) -> String {
        serde_json::to_string_pretty(&CertFile {
            schema: SCHEMA_VERSION,
            body: self.to_wire(),
        })
        .expect("certificates always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: CertFile = serde_json::from_str(s)
            .map_err(|e| Error::InvalidInstance(format!("certificate parse error: {e}")))?;
        if file.schema != SCHEMA_VERSION {
            return Err(Error::InvalidInstance(format!(
                "stale schema version {} (expected {})",
                file.schema, SCHEMA_VERSION
            )));
        }
        Certificate::from_wire(file.body)
    }
}

// ---------------------------------------------------------------------------
// verification

fn fail(detail: impl Into<String>) -> Error {
    Error::InvalidInstance(detail.into())
}

/// Re-check a certificate against its embedded instance. Everything claimed
/// is re-derived with module primitives; nothing is trusted from the file
/// beyond the instance itself.
pub fn verify(cert: &Certificate) -> Result<()> {
    match cert {
        Certificate::Matching { a, b, pairs } => {
            if a.is_empty() {
                return Err(fail("empty instance"));
            }
            match check_matching(a, b, pairs)? {
                crate::group::MatchingVerdict::Valid => Ok(()),
                crate::group::MatchingVerdict::Invalid(defect) => {
                    Err(fail(format!("matching invalid: {defect}")))
                }
            }
        }
        Certificate::LocalMatching {
            a,
            b,
            subgroup,
            witness,
            a_prime,
            pairs,
        } => {
            if a.len() != b.len() {
                return Err(fail("sizes of A and B differ"));
            }
            if b.contains_zero() {
                return Err(fail("0 lies in B"));
            }
            if !subgroup.is_proper() {
                return Err(fail("H is not a proper subgroup"));
            }
            let hb = subgroup.subset().intersection(b)?;
            if hb.is_empty() {
                return Err(fail("H ∩ B is empty"));
            }
            if !a.contains(witness) {
                return Err(fail("witness is not in A"));
            }
            for g in subgroup.elements() {
                if !a.contains(&a.group().add(witness, g)?) {
                    return Err(fail(format!("witness translate escapes A at {g}")));
                }
            }
            if !a_prime.is_subset_of(a) {
                return Err(fail("A′ is not a subset of A"));
            }
            if pairs.len() != hb.len() || a_prime.len() != hb.len() {
                return Err(fail("pair count does not saturate H ∩ B"));
            }
            let sources = GroupSubset::new(
                a.group().clone(),
                pairs.iter().map(|(x, _)| x.clone()).collect(),
            )?;
            if sources != *a_prime {
                return Err(fail("pair sources differ from A′"));
            }
            let targets = GroupSubset::new(
                a.group().clone(),
                pairs.iter().map(|(_, y)| y.clone()).collect(),
            )?;
            if targets != hb {
                return Err(fail("pair targets are not exactly H ∩ B"));
            }
            if sources.len() != pairs.len() {
                return Err(fail("duplicate source in pairs"));
            }
            for (x, y) in pairs {
                if a.contains(&a.group().add(x, y)?) {
                    return Err(fail(format!("{x}+{y} lies in A")));
                }
            }
            Ok(())
        }
        Certificate::HallViolator { a, b, s, u } => {
            if a.len() != b.len() {
                return Err(fail("sizes of A and B differ"));
            }
            if b.contains_zero() {
                return Err(fail("0 lies in B"));
            }
            let v = HallViolator {
                s: s.clone(),
                u: u.clone(),
            };
            v.verify(a, b)
        }
        Certificate::Kneser { a, b, c, h, slack } => {
            let expect_c = a.sumset(b)?;
            if expect_c != *c {
                return Err(fail("C is not the sumset A + B"));
            }
            let expect_h = stabilizer(c)?;
            if expect_h.subset() != h.subset() {
                return Err(fail("H is not the stabilizer of C"));
            }
            let expect = c.len() as i64 - a.len() as i64 - b.len() as i64 + h.order() as i64;
            if expect != *slack {
                return Err(fail(format!(
                    "slack mismatch: stored {slack}, actual {expect}"
                )));
            }
            if *slack < 0 {
                return Err(fail("negative slack"));
            }
            Ok(())
        }
        Certificate::LinearKneser {
            field,
            a,
            b,
            product,
            h_degree,
            h,
            slack,
        } => {
            let expect_prod = product_span(field, a, b)?;
            if expect_prod != *product {
                return Err(fail("product space is not ⟨AB⟩"));
            }
            let expect_h = stabilizer_subfield(field, product)?;
            if expect_h.d != *h_degree || expect_h.space != *h {
                return Err(fail("H is not the stabilizer subfield of ⟨AB⟩"));
            }
            let expect = product.dim() as i64 - a.dim() as i64 - b.dim() as i64 + *h_degree as i64;
            if expect != *slack {
                return Err(fail(format!(
                    "slack mismatch: stored {slack}, actual {expect}"
                )));
            }
            if *slack < 0 {
                return Err(fail("negative slack"));
            }
            Ok(())
        }
        Certificate::BasisMatching {
            field,
            ambient_a,
            target_b,
            a_basis,
            b_basis,
        } => {
            let a_seq =
                BasisSeq::new(field, a_basis.clone()).map_err(|e| fail(format!("a-basis: {e}")))?;
            let b_seq =
                BasisSeq::new(field, b_basis.clone()).map_err(|e| fail(format!("b-basis: {e}")))?;
            if a_seq.len() != b_seq.len() {
                return Err(fail("basis lengths differ"));
            }
            if !a_seq.span(field).is_subspace_of(ambient_a) {
                return Err(fail("a-basis does not lie in A"));
            }
            if b_seq.span(field) != *target_b {
                return Err(fail("b-basis does not span the target space"));
            }
            for (i, (x, y)) in a_basis.iter().zip(b_basis).enumerate() {
                let prod = field.mul(x, y);
                if ambient_a.contains_element(&prod) {
                    return Err(fail(format!("pair {i}: aᵢbᵢ = {prod} lies in A")));
                }
            }
            // Full-basis matchings additionally satisfy the hyperplane
            // condition: aᵢb ∈ A forces b into ⟨b₁,…,b̂ᵢ,…,bₘ⟩.
            if a_seq.span(field) == *ambient_a {
                for (i, x) in a_basis.iter().enumerate() {
                    let w = crate::field::scale_space(field, x, ambient_a, true)?
                        .intersect(target_b)?;
                    let others: Vec<FqElement> = b_basis
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, v)| v.clone())
                        .collect();
                    let hyperplane = Subspace::from_elements(field, &others);
                    if !w.is_subspace_of(&hyperplane) {
                        return Err(fail(format!("hyperplane condition fails at index {i}")));
                    }
                }
            }
            Ok(())
        }
        Certificate::CriterionViolator {
            field,
            ambient_a,
            target_b,
            a_basis,
            indices,
            witness,
            deficit,
        } => {
            let seq =
                BasisSeq::new(field, a_basis.clone()).map_err(|e| fail(format!("a-basis: {e}")))?;
            if !seq.span(field).is_subspace_of(ambient_a) {
                return Err(fail("a-basis does not lie in A"));
            }
            let m = seq.len();
            if indices.is_empty()
                || indices.windows(2).any(|w| w[0] >= w[1])
                || indices.iter().any(|&i| i >= m)
            {
                return Err(fail("index set is not a sorted non-empty subset"));
            }
            let mut inter: Option<Subspace> = None;
            for &i in indices {
                let w = crate::field::scale_space(field, &seq.vectors()[i], ambient_a, true)?
                    .intersect(target_b)?;
                inter = Some(match inter {
                    None => w,
                    Some(acc) => acc.intersect(&w)?,
                });
            }
            let inter = inter.unwrap();
            if inter != *witness {
                return Err(fail(
                    "witness space differs from the recomputed intersection",
                ));
            }
            let expect = inter.dim() as i64 - (m as i64 - indices.len() as i64);
            if expect != *deficit {
                return Err(fail(format!(
                    "deficit mismatch: stored {deficit}, actual {expect}"
                )));
            }
            if *deficit <= 0 {
                return Err(fail("claimed violator does not violate the criterion"));
            }
            // Cross-check against the criterion checker itself.
            match basis_matchable(field, &seq, target_b, ambient_a)? {
                crate::field::Matchable::Ok => {
                    Err(fail("criterion reports no violation for this basis"))
                }
                crate::field::Matchable::Violator(_) => Ok(()),
            }
        }
    }
}

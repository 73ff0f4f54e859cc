//! The linear matching theory: the dimension criterion for matchable bases,
//! matched-basis construction, matched/locally-matched subspace decisions,
//! strong matchings, and primitivity.

use super::linalg::{self, mat_inv, rank};
use super::subspace::{
    enumerate_subspaces, gaussian_binomial, product_span, random_subspace_of, scale_space, Subspace,
};
use super::{FieldCtx, FqElement, SubfieldDesc};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// An ordered, linearly independent sequence of field elements; the order
/// matters because matchings pair `aᵢ ↔ bᵢ` by position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisSeq {
    vectors: Vec<FqElement>,
}

impl BasisSeq {
    pub fn new(ctx: &FieldCtx, vectors: Vec<FqElement>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::DimensionMismatch("empty basis".into()));
        }
        for v in &vectors {
            ctx.check_element(v)?;
        }
        let rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.coeffs().to_vec()).collect();
        if rank(&rows, ctx.p()) != vectors.len() {
            return Err(Error::NotIndependent);
        }
        Ok(BasisSeq { vectors })
    }

    pub fn vectors(&self) -> &[FqElement] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn span(&self, ctx: &FieldCtx) -> Subspace {
        Subspace::from_elements(ctx, &self.vectors)
    }
}

/// A witness that the matchability criterion fails: an index set `J` whose
/// intersection `∩_{i∈J}(aᵢ⁻¹A ∩ B)` is too large.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionViolator {
    /// 0-based indices into the `a`-basis.
    pub indices: Vec<usize>,
    pub witness: Subspace,
    /// `dim(witness) − (m − #J) > 0`.
    pub deficit: i64,
}

/// Outcome of the criterion check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matchable {
    Ok,
    Violator(CriterionViolator),
}

impl Matchable {
    pub fn is_ok(&self) -> bool {
        matches!(self, Matchable::Ok)
    }
}

/// A matched pair of bases: `aᵢbᵢ ∉ A` for every position, and for full
/// bases also the hyperplane property `aᵢ⁻¹A ∩ B ⊆ ⟨b₁,…,b̂ᵢ,…,bₘ⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisMatching {
    pub a_basis: Vec<FqElement>,
    pub b_basis: Vec<FqElement>,
}

/// Outcome of [`find_matched_basis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchedBasisOutcome {
    Found(BasisMatching),
    Violator(CriterionViolator),
}

const MAX_CRITERION_DIM: usize = 20;

/// The intersection subspaces `Wᵢ = aᵢ⁻¹A ∩ B̃` of the criterion.
fn criterion_spaces(
    ctx: &FieldCtx,
    a_basis: &BasisSeq,
    b_space: &Subspace,
    ambient_a: &Subspace,
) -> Result<Vec<Subspace>> {
    a_basis
        .vectors()
        .iter()
        .map(|a| scale_space(ctx, a, ambient_a, true)?.intersect(b_space))
        .collect()
}

/// Decide whether the ordered basis can be matched to a basis of `b_space`
/// relative to the ambient space `A`: for every non-empty `J`,
/// `dim ∩_{i∈J}(aᵢ⁻¹A ∩ B̃) ≤ m − #J`. Subsets are scanned in ascending
/// bitmask order (bit `i` ↔ index `i`) with early exit, so the first
/// violator is canonical.
pub fn basis_matchable(
    ctx: &FieldCtx,
    a_basis: &BasisSeq,
    b_space: &Subspace,
    ambient_a: &Subspace,
) -> Result<Matchable> {
    let m = a_basis.len();
    if m > MAX_CRITERION_DIM {
        return Err(Error::TooLarge(format!(
            "criterion over {m} indices exceeds the cap of {MAX_CRITERION_DIM}"
        )));
    }
    if b_space.dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "basis has {m} vectors but dim B̃ = {}",
            b_space.dim()
        )));
    }
    if !a_basis.span(ctx).is_subspace_of(ambient_a) {
        return Err(Error::InvalidInstance(
            "a-basis does not lie in the ambient space".into(),
        ));
    }
    let spaces = criterion_spaces(ctx, a_basis, b_space, ambient_a)?;
    for mask in 1u32..(1 << m) {
        let mut inter: Option<Subspace> = None;
        for (i, w) in spaces.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            inter = Some(match inter {
                None => w.clone(),
                Some(acc) => acc.intersect(w)?,
            });
        }
        let inter = inter.unwrap();
        let size = mask.count_ones() as usize;
        if inter.dim() > m - size {
            return Ok(Matchable::Violator(CriterionViolator {
                indices: (0..m).filter(|i| mask & (1 << i) != 0).collect(),
                deficit: inter.dim() as i64 - (m - size) as i64,
                witness: inter,
            }));
        }
    }
    Ok(Matchable::Ok)
}

/// Construct a matched basis of `b_space` for the given `a`-basis, or return
/// the criterion violator.
///
/// The construction works in the dual of `B̃`: a functional `βᵢ` is chosen
/// from the annihilator of each `Wᵢ = aᵢ⁻¹A ∩ B̃` (depth-first, candidates
/// in canonical coordinate order, keeping the chosen functionals
/// independent), and `(bᵢ)` is the basis dual to `(βᵢ)`. Then
/// `Wᵢ ⊆ ker βᵢ = ⟨b_j : j ≠ i⟩`, which gives the hyperplane property and
/// in particular `aᵢbᵢ ∉ A`. When the criterion holds a transversal exists,
/// so a failure here is an internal contradiction and escalates.
pub fn find_matched_basis(
    ctx: &FieldCtx,
    a_basis: &BasisSeq,
    b_space: &Subspace,
    ambient_a: &Subspace,
) -> Result<MatchedBasisOutcome> {
    match basis_matchable(ctx, a_basis, b_space, ambient_a)? {
        Matchable::Violator(v) => return Ok(MatchedBasisOutcome::Violator(v)),
        Matchable::Ok => {}
    }
    let m = a_basis.len();
    let p = ctx.p();
    let spaces = criterion_spaces(ctx, a_basis, b_space, ambient_a)?;

    // Annihilators of the Wᵢ inside the coordinate space of B̃.
    let mut annihilators = Vec::with_capacity(m);
    for w in &spaces {
        let coords: Vec<Vec<u64>> = w
            .rows()
            .iter()
            .map(|r| b_space.coords_of(r).expect("criterion space lies inside B̃"))
            .collect();
        let ann = linalg::kernel(&coords, p, m);
        annihilators.push(Subspace::from_vectors(p, m, &ann));
    }

    fn dfs(
        level: usize,
        m: usize,
        p: u64,
        annihilators: &[Subspace],
        chosen: &mut Vec<Vec<u64>>,
    ) -> bool {
        if level == m {
            return true;
        }
        for cand in annihilators[level].nonzero_vectors() {
            chosen.push(cand);
            if rank(chosen, p) == level + 1 && dfs(level + 1, m, p, annihilators, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen: Vec<Vec<u64>> = Vec::with_capacity(m);
    if !dfs(0, m, p, &annihilators, &mut chosen) {
        return Err(Error::TheoremViolation(
            "criterion holds but no independent annihilator transversal exists".into(),
        ));
    }

    let inv = mat_inv(&chosen, p).ok_or_else(|| {
        Error::Internal("independent functionals produced a singular matrix".into())
    })?;
    let mut b_basis = Vec::with_capacity(m);
    for j in 0..m {
        // column j of the inverse = coordinates of the j-th dual vector
        let coords: Vec<u64> = inv.iter().map(|row| row[j]).collect();
        let vec = b_space.vector_from_coords(&coords);
        b_basis.push(ctx.from_coeffs(&vec)?);
    }

    // The dual construction guarantees both properties; re-check anyway.
    for (i, (a, b)) in a_basis.vectors().iter().zip(&b_basis).enumerate() {
        let prod = ctx.mul(a, b);
        if ambient_a.contains_element(&prod) {
            return Err(Error::Internal(format!(
                "constructed pair {i} has aᵢbᵢ ∈ A"
            )));
        }
        let others: Vec<FqElement> = b_basis
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let hyperplane = Subspace::from_elements(ctx, &others);
        if !spaces[i].is_subspace_of(&hyperplane) {
            return Err(Error::Internal(format!(
                "constructed basis misses the hyperplane property at {i}"
            )));
        }
    }

    Ok(MatchedBasisOutcome::Found(BasisMatching {
        a_basis: a_basis.vectors().to_vec(),
        b_basis,
    }))
}

/// Quantifier mode for basis-indexed decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasisMode {
    /// All ordered bases; rejected when their number exceeds the budget.
    Exhaustive,
    /// Seeded random bases, reproducible.
    Sample { trials: u64, seed: u64 },
}

/// Budget for exhaustive ordered-basis enumeration.
pub const ORDERED_BASIS_BUDGET: u128 = 1_000_000;

/// Number of ordered bases of an `m`-dimensional space over F_p.
pub fn ordered_basis_count(m: usize, p: u64) -> u128 {
    let q = (p as u128).pow(m as u32);
    (0..m).map(|i| q - (p as u128).pow(i as u32)).product()
}

/// All ordered bases of a subspace, depth-first in canonical coordinate
/// order. Use [`ordered_basis_count`] to budget before calling.
pub fn ordered_bases(ctx: &FieldCtx, space: &Subspace) -> Vec<Vec<FqElement>> {
    let m = space.dim();
    let candidates = space.nonzero_vectors();
    let mut out = Vec::new();
    let mut chosen: Vec<Vec<u64>> = Vec::with_capacity(m);

    fn dfs(
        ctx: &FieldCtx,
        m: usize,
        candidates: &[Vec<u64>],
        chosen: &mut Vec<Vec<u64>>,
        out: &mut Vec<Vec<FqElement>>,
    ) {
        if chosen.len() == m {
            out.push(chosen.iter().map(|v| ctx.from_coeffs(v).unwrap()).collect());
            return;
        }
        for cand in candidates {
            chosen.push(cand.clone());
            if rank(chosen, ctx.p()) == chosen.len() {
                dfs(ctx, m, candidates, chosen, out);
            }
            chosen.pop();
        }
    }

    dfs(ctx, m, &candidates, &mut chosen, &mut out);
    out
}

/// A uniform random ordered basis of a subspace.
pub fn random_basis<R: Rng>(ctx: &FieldCtx, space: &Subspace, rng: &mut R) -> Vec<FqElement> {
    let m = space.dim();
    let p = ctx.p();
    loop {
        let coords: Vec<Vec<u64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        if mat_inv(&coords, p).is_none() {
            continue;
        }
        return coords
            .iter()
            .map(|row| ctx.from_coeffs(&space.vector_from_coords(row)).unwrap())
            .collect();
    }
}

/// Result of a basis-quantified matching decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchDecision {
    pub matched: bool,
    pub mode: BasisMode,
    pub bases_tested: u64,
    /// First failing basis and its violator, when not matched.
    pub counterexample: Option<(Vec<FqElement>, CriterionViolator)>,
}

/// Core engine: does every (or every sampled) ordered basis of `space` pass
/// the criterion against `b_target` in the ambient space `A`?
fn all_bases_matchable(
    ctx: &FieldCtx,
    space: &Subspace,
    b_target: &Subspace,
    ambient_a: &Subspace,
    mode: BasisMode,
) -> Result<MatchDecision> {
    if space.dim() == 0 {
        return Err(Error::ZeroSpace);
    }
    let mut tested = 0u64;
    let mut check = |basis: Vec<FqElement>| -> Result<Option<(Vec<FqElement>, CriterionViolator)>> {
        tested += 1;
        let seq = BasisSeq::new(ctx, basis.clone())?;
        match basis_matchable(ctx, &seq, b_target, ambient_a)? {
            Matchable::Ok => Ok(None),
            Matchable::Violator(v) => Ok(Some((basis, v))),
        }
    };

    let counterexample = match mode {
        BasisMode::Exhaustive => {
            let need = ordered_basis_count(space.dim(), ctx.p());
            if need > ORDERED_BASIS_BUDGET {
                return Err(Error::BudgetExceeded {
                    need,
                    budget: ORDERED_BASIS_BUDGET,
                });
            }
            let mut found = None;
            for basis in ordered_bases(ctx, space) {
                if let Some(cx) = check(basis)? {
                    found = Some(cx);
                    break;
                }
            }
            found
        }
        BasisMode::Sample { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found = None;
            for _ in 0..trials {
                let basis = random_basis(ctx, space, &mut rng);
                if let Some(cx) = check(basis)? {
                    found = Some(cx);
                    break;
                }
            }
            found
        }
    };
    Ok(MatchDecision {
        matched: counterexample.is_none(),
        mode,
        bases_tested: tested,
        counterexample,
    })
}

/// Is `A` matched to `B`: does every basis of `A` pass the criterion
/// against `B`? `false` comes with the first failing basis as certificate.
pub fn is_matched(
    ctx: &FieldCtx,
    a: &Subspace,
    b: &Subspace,
    mode: BasisMode,
) -> Result<MatchDecision> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dim A = {}, dim B = {}",
            a.dim(),
            b.dim()
        )));
    }
    all_bases_matchable(ctx, a, b, a, mode)
}

/// Is `Ã ⊆ A` A-matched to `B̃`: the criterion with ambient `A` and target
/// `B̃`, quantified over the bases of `Ã`.
pub fn a_matched_subspace(
    ctx: &FieldCtx,
    a_tilde: &Subspace,
    b_tilde: &Subspace,
    ambient_a: &Subspace,
    mode: BasisMode,
) -> Result<MatchDecision> {
    if a_tilde.dim() != b_tilde.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dim Ã = {}, dim B̃ = {}",
            a_tilde.dim(),
            b_tilde.dim()
        )));
    }
    if !a_tilde.is_subspace_of(ambient_a) {
        return Err(Error::InvalidInstance("Ã is not a subspace of A".into()));
    }
    all_bases_matchable(ctx, a_tilde, b_tilde, ambient_a, mode)
}

/// A strong matching from `A` to `B` exists exactly when `⟨AB⟩ ∩ A = {0}`
/// (and then every isomorphism is one).
pub fn strong_matching_exists(ctx: &FieldCtx, a: &Subspace, b: &Subspace) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroSpace);
    }
    let product = product_span(ctx, a, b)?;
    Ok(product.intersect(a)?.is_zero())
}

/// Verdict of the primitivity test, with the first offending subfield when
/// the subspace is not primitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitiveVerdict {
    pub primitive: bool,
    pub offender: Option<SubfieldDesc>,
}

/// Is `B` a primitive subspace: does it meet every proper subfield
/// `F_{p^d}` (d | n, d < n) trivially? Over these extensions the
/// intermediate fields are exactly the `F_{p^d}`, so this is equivalent to
/// `K(b) = L` for every non-zero `b ∈ B`.
pub fn primitive_check(ctx: &FieldCtx, b: &Subspace) -> Result<PrimitiveVerdict> {
    if b.is_zero() {
        return Err(Error::ZeroSpace);
    }
    for desc in ctx.subfield_lattice() {
        if desc.d == ctx.n() {
            continue;
        }
        if !b.intersect(&desc.space)?.is_zero() {
            return Ok(PrimitiveVerdict {
                primitive: false,
                offender: Some(desc),
            });
        }
    }
    Ok(PrimitiveVerdict {
        primitive: true,
        offender: None,
    })
}

/// Status of one intermediate subfield in a local-matching report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LinearLocalStatus {
    NotQualified { reason: String },
    Matched { a_tilde: Subspace },
    Unmatched { candidates_tested: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearLocalRow {
    pub d: usize,
    pub status: LinearLocalStatus,
}

/// Per-subfield report of [`linear_locally_matched`], echoing the budgets
/// and seed the searches ran under.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearLocalReport {
    pub locally_matched: bool,
    pub config: LocalSearchConfig,
    pub rows: Vec<LinearLocalRow>,
}

impl LinearLocalReport {
    pub fn qualifying(&self) -> impl Iterator<Item = &LinearLocalRow> {
        self.rows
            .iter()
            .filter(|r| !matches!(r.status, LinearLocalStatus::NotQualified { .. }))
    }
}

/// Budgets and seeds for the subspace/basis searches inside
/// [`linear_locally_matched`]. All sampled paths are reproducible from the
/// seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalSearchConfig {
    pub subspace_budget: u128,
    pub basis_budget: u128,
    pub samples: u64,
    pub seed: u64,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        LocalSearchConfig {
            subspace_budget: 100_000,
            basis_budget: ORDERED_BASIS_BUDGET,
            samples: 200,
            seed: 0,
        }
    }
}

/// The maximal `H`-submodule of `A`: `{x : xH ⊆ A}`. Since `1 ∈ H`, this is
/// automatically contained in `A`.
fn h_module_of(ctx: &FieldCtx, a: &Subspace, h: &Subspace) -> Result<Subspace> {
    let ann_a = linalg::kernel(a.rows(), ctx.p(), ctx.n());
    let mut constraints = Vec::new();
    for hr in h.rows() {
        let e = ctx.from_coeffs(hr)?;
        let m = ctx.mult_matrix(&e);
        for phi in &ann_a {
            let c: Vec<u64> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(phi)
                        .fold(0u64, |acc, (&x, &y)| (acc + x * y) % ctx.p())
                })
                .collect();
            constraints.push(c);
        }
    }
    let sol = linalg::kernel(&constraints, ctx.p(), ctx.n());
    Ok(Subspace::from_vectors(ctx.p(), ctx.n(), &sol))
}

/// Decide whether `A` is locally matched to `B`: for every intermediate
/// subfield `H ⊊ L` with `H ∩ B ≠ {0}` and `{a : aH ⊆ A} ≠ {0}` there must
/// be a subspace `Ã ⊆ A` with `dim Ã = dim(H ∩ B)` that is A-matched to
/// `H ∩ B`. Candidate subspaces are enumerated exhaustively in canonical
/// echelon order while their count fits the budget, otherwise sampled.
pub fn linear_locally_matched(
    ctx: &FieldCtx,
    a: &Subspace,
    b: &Subspace,
    cfg: &LocalSearchConfig,
) -> Result<LinearLocalReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dim A = {}, dim B = {}",
            a.dim(),
            b.dim()
        )));
    }
    if b.contains_element(&ctx.one()) {
        return Err(Error::OneInB);
    }

    let mut rows = Vec::new();
    let mut all_ok = true;
    for desc in ctx.subfield_lattice() {
        if desc.d == ctx.n() {
            continue;
        }
        let hb = desc.space.intersect(b)?;
        if hb.is_zero() {
            rows.push(LinearLocalRow {
                d: desc.d,
                status: LinearLocalStatus::NotQualified {
                    reason: "H ∩ B = 0".into(),
                },
            });
            continue;
        }
        let module = h_module_of(ctx, a, &desc.space)?;
        if module.is_zero() {
            rows.push(LinearLocalRow {
                d: desc.d,
                status: LinearLocalStatus::NotQualified {
                    reason: "no non-zero a with aH ⊆ A".into(),
                },
            });
            continue;
        }
        // Qualifying subfields are proper by construction (d < n).
        assert!(desc.d < ctx.n());

        let m = hb.dim();
        let basis_mode = if ordered_basis_count(m, ctx.p()) <= cfg.basis_budget {
            BasisMode::Exhaustive
        } else {
            BasisMode::Sample {
                trials: cfg.samples,
                seed: cfg.seed ^ (desc.d as u64).wrapping_mul(0x9e3779b97f4a7c15),
            }
        };

        let mut found = None;
        let mut tested = 0u64;
        if m <= a.dim() {
            let count = gaussian_binomial(a.dim(), m, ctx.p());
            if count <= cfg.subspace_budget {
                for cand in enumerate_subspaces(a, m) {
                    tested += 1;
                    if a_matched_subspace(ctx, &cand, &hb, a, basis_mode)?.matched {
                        found = Some(cand);
                        break;
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    cfg.seed ^ (desc.d as u64).wrapping_mul(0xd1b54a32d192ed03),
                );
                for _ in 0..cfg.samples {
                    let cand = random_subspace_of(a, m, &mut rng);
                    tested += 1;
                    if a_matched_subspace(ctx, &cand, &hb, a, basis_mode)?.matched {
                        found = Some(cand);
                        break;
                    }
                }
            }
        }

        match found {
            Some(a_tilde) => rows.push(LinearLocalRow {
                d: desc.d,
                status: LinearLocalStatus::Matched { a_tilde },
            }),
            None => {
                all_ok = false;
                rows.push(LinearLocalRow {
                    d: desc.d,
                    status: LinearLocalStatus::Unmatched {
                        candidates_tested: tested,
                    },
                });
            }
        }
    }
    Ok(LinearLocalReport {
        locally_matched: all_ok,
        config: *cfg,
        rows,
    })
}

/// Joint report of the local-matching antecedent and matched consequent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem51Report {
    pub local: LinearLocalReport,
    pub matched: MatchDecision,
    pub implication_holds: bool,
}

/// Evaluate `locally matched ⟹ matched` on one instance. A failed
/// implication would falsify the theorem (or the implementation) and is
/// escalated as a theorem violation.
pub fn theorem51_check(
    ctx: &FieldCtx,
    a: &Subspace,
    b: &Subspace,
    cfg: &LocalSearchConfig,
    match_mode: BasisMode,
) -> Result<Theorem51Report> {
    let local = linear_locally_matched(ctx, a, b, cfg)?;
    let matched = is_matched(ctx, a, b, match_mode)?;
    let implication_holds = !local.locally_matched || matched.matched;
    if !implication_holds {
        return Err(Error::TheoremViolation(format!(
            "locally matched but unmatched: A={:?} B={:?}",
            a.rows(),
            b.rows()
        )));
    }
    Ok(Theorem51Report {
        local,
        matched,
        implication_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FieldCtx {
        FieldCtx::new(2, 2, None).unwrap()
    }

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

    fn seq(ctx: &FieldCtx, vecs: &[&[u64]]) -> BasisSeq {
        BasisSeq::new(
            ctx,
            vecs.iter().map(|v| ctx.from_coeffs(v).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn criterion_on_one_dimensional_instances() {
        let ctx = f4();
        let a = span(&ctx, &[&[1, 0]]);
        let b = span(&ctx, &[&[0, 1]]);
        let basis = seq(&ctx, &[&[1, 0]]);
        assert!(basis_matchable(&ctx, &basis, &b, &a).unwrap().is_ok());

        // A = B = ⟨1⟩: 1·1 = 1 ∈ A, violator J = {0}.
        match basis_matchable(&ctx, &basis, &a, &a).unwrap() {
            Matchable::Violator(v) => {
                assert_eq!(v.indices, vec![0]);
                assert_eq!(v.deficit, 1);
                assert_eq!(v.witness, a);
            }
            Matchable::Ok => panic!("expected violator"),
        }
    }

    #[test]
    fn matched_basis_in_f4() {
        let ctx = f4();
        let a = span(&ctx, &[&[1, 0]]);
        let b = span(&ctx, &[&[0, 1]]);
        let basis = seq(&ctx, &[&[1, 0]]);
        match find_matched_basis(&ctx, &basis, &b, &a).unwrap() {
            MatchedBasisOutcome::Found(bm) => {
                assert_eq!(bm.b_basis, vec![ctx.gen()]);
            }
            MatchedBasisOutcome::Violator(_) => panic!("criterion holds"),
        }
    }

    #[test]
    fn matched_basis_hyperplane_property() {
        // A = ⟨1, t⟩, B = F_4 ⊂ F_16: criterion fails for J = {0, 1}
        // because 1⁻¹A∩B = t⁻¹A∩B = ⟨1⟩.
        let ctx = f16();
        let a = span(&ctx, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let f4_space = ctx.subfield_lattice()[1].space.clone();
        let basis = seq(&ctx, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        match basis_matchable(&ctx, &basis, &f4_space, &a).unwrap() {
            Matchable::Violator(v) => {
                assert_eq!(v.indices, vec![0, 1]);
                assert_eq!(v.witness.dim(), 1);
            }
            Matchable::Ok => panic!("expected violator"),
        }
    }

    #[test]
    fn is_matched_exhaustive_line_cases() {
        let ctx = f4();
        let a = span(&ctx, &[&[1, 0]]);
        let b = span(&ctx, &[&[0, 1]]);
        let d = is_matched(&ctx, &a, &b, BasisMode::Exhaustive).unwrap();
        assert!(d.matched);
        assert_eq!(d.bases_tested, 1); // the only basis of a line over F_2

        let d = is_matched(&ctx, &a, &a, BasisMode::Exhaustive).unwrap();
        assert!(!d.matched);
        assert!(d.counterexample.is_some());
    }

    #[test]
    fn strong_matching_examples() {
        let ctx = f16();
        let t_line = span(&ctx, &[&[0, 1, 0, 0]]);
        assert!(strong_matching_exists(&ctx, &t_line, &t_line).unwrap()); // t² ∉ ⟨t⟩
        let f4_space = ctx.subfield_lattice()[1].space.clone();
        assert!(!strong_matching_exists(&ctx, &f4_space, &f4_space).unwrap());
    }

    #[test]
    fn primitivity_in_f16() {
        let ctx = f16();
        // ω = t² + t generates F_4 inside F_16, so ⟨ω⟩ is not primitive.
        let omega_line = span(&ctx, &[&[0, 1, 1, 0]]);
        let v = primitive_check(&ctx, &omega_line).unwrap();
        assert!(!v.primitive);
        assert_eq!(v.offender.unwrap().d, 2);

        let t_line = span(&ctx, &[&[0, 1, 0, 0]]);
        assert!(primitive_check(&ctx, &t_line).unwrap().primitive);

        let one_line = span(&ctx, &[&[1, 0, 0, 0]]);
        let v = primitive_check(&ctx, &one_line).unwrap();
        assert!(!v.primitive);
        assert_eq!(v.offender.unwrap().d, 1);
    }

    #[test]
    fn a_matched_single_pair() {
        let ctx = f16();
        let a = span(&ctx, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let a_tilde = span(&ctx, &[&[0, 1, 0, 0]]);
        let b_tilde = span(&ctx, &[&[0, 0, 1, 0]]);
        // t·t² = t³ ∉ A.
        let d = a_matched_subspace(&ctx, &a_tilde, &b_tilde, &a, BasisMode::Exhaustive).unwrap();
        assert!(d.matched);
        // ⟨1⟩ against a target inside A always fails.
        let one_line = span(&ctx, &[&[1, 0, 0, 0]]);
        let b_in_a = span(&ctx, &[&[0, 1, 0, 0]]);
        let d = a_matched_subspace(&ctx, &one_line, &b_in_a, &a, BasisMode::Exhaustive).unwrap();
        assert!(!d.matched);
    }

    #[test]
    fn local_matching_vacuous_when_no_subfield_qualifies() {
        let ctx = f16();
        // B = ⟨t⟩ is primitive, so H ∩ B = 0 for every proper subfield.
        let a = span(&ctx, &[&[1, 0, 0, 0]]);
        let b = span(&ctx, &[&[0, 1, 0, 0]]);
        let report = linear_locally_matched(&ctx, &a, &b, &LocalSearchConfig::default()).unwrap();
        assert!(report.locally_matched);
        assert_eq!(report.qualifying().count(), 0);
    }

    #[test]
    fn local_matching_fails_on_subfield_counterexample() {
        // Linear analogue of the group counterexample: A = F_4 ⊂ F_16 and
        // B̃ = H ∩ B = a line of F_4, so every Ã·B̃ stays inside F_4 = A.
        let ctx = f16();
        let f4_space = ctx.subfield_lattice()[1].space.clone();
        let a = f4_space.clone();
        // B: one line inside F_4 plus one outside, avoiding 1.
        let omega = &f4_space.rows()[1]; // non-scalar basis row of F_4
        let b = span(&ctx, &[omega.as_slice(), &[0, 0, 0, 1]]);
        assert!(!b.contains_element(&ctx.one()));
        let report = linear_locally_matched(&ctx, &a, &b, &LocalSearchConfig::default()).unwrap();
        assert!(!report.locally_matched);
        let failing: Vec<_> = report
            .rows
            .iter()
            .filter(|r| matches!(r.status, LinearLocalStatus::Unmatched { .. }))
            .collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].d, 2);
    }

    #[test]
    fn theorem51_on_vacuous_instance() {
        let ctx = f4();
        let a = span(&ctx, &[&[1, 0]]);
        let b = span(&ctx, &[&[0, 1]]);
        let report = theorem51_check(
            &ctx,
            &a,
            &b,
            &LocalSearchConfig::default(),
            BasisMode::Exhaustive,
        )
        .unwrap();
        assert!(report.implication_holds);
        assert!(report.local.locally_matched);
        assert!(report.matched.matched);
    }

    #[test]
    fn ordered_basis_counts() {
        assert_eq!(ordered_basis_count(1, 2), 1);
        assert_eq!(ordered_basis_count(2, 2), 6);
        assert_eq!(ordered_basis_count(3, 2), 168);
        assert_eq!(ordered_basis_count(2, 3), 48);
        let ctx = f16();
        let plane = span(&ctx, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert_eq!(ordered_bases(&ctx, &plane).len(), 6);
    }
}

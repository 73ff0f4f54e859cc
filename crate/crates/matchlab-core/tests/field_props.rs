//! Property tests and small-scale oracles for the field layer.

use matchlab_core::field::{
    basis_matchable, find_matched_basis, linear_kneser_verify, ordered_bases, primitive_check,
    product_span, random_basis, random_subspace_of, scale_space, stabilizer_subfield, BasisSeq,
    FieldCtx, FqElement, Matchable, MatchedBasisOutcome, Subspace,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx_pool() -> Vec<FieldCtx> {
    vec![
        FieldCtx::new(2, 2, None).unwrap(),
        FieldCtx::new(2, 3, None).unwrap(),
        FieldCtx::new(2, 4, None).unwrap(),
        FieldCtx::new(3, 2, None).unwrap(),
        FieldCtx::new(3, 3, None).unwrap(),
        FieldCtx::new(5, 2, None).unwrap(),
    ]
}

fn arb_space() -> impl Strategy<Value = (FieldCtx, Subspace)> {
    (
        0..ctx_pool().len(),
        prop::collection::vec(prop::collection::vec(0u64..5, 1..7), 0..5),
    )
        .prop_map(|(ci, raw)| {
            let ctx = ctx_pool()[ci].clone();
            let vecs: Vec<Vec<u64>> = raw
                .into_iter()
                .map(|mut v| {
                    v.resize(ctx.n(), 0);
                    v
                })
                .collect();
            let s = Subspace::from_vectors(ctx.p(), ctx.n(), &vecs);
            (ctx, s)
        })
}

proptest! {
    /// from_vectors is idempotent and independent of basis presentation.
    #[test]
    fn canonical_form_is_stable((ctx, s) in arb_space(), shuffle_seed in any::<u64>()) {
        let again = Subspace::from_vectors(ctx.p(), ctx.n(), s.rows());
        prop_assert_eq!(&again, &s);
        if s.dim() > 0 {
            // random invertible recombination spans the same space
            let mut rng = ChaCha8Rng::seed_from_u64(shuffle_seed);
            let basis = random_basis(&ctx, &s, &mut rng);
            let rebuilt = Subspace::from_elements(&ctx, &basis);
            prop_assert_eq!(rebuilt, s);
        }
    }

    /// dim U + dim V = dim(U∩V) + dim(U+V), and both results are correct
    /// lattice bounds.
    #[test]
    fn meet_join_laws((ctx, u) in arb_space(), raw in prop::collection::vec(prop::collection::vec(0u64..5, 1..7), 0..5)) {
        let vecs: Vec<Vec<u64>> = raw.into_iter().map(|mut v| { v.resize(ctx.n(), 0); v }).collect();
        let v = Subspace::from_vectors(ctx.p(), ctx.n(), &vecs);
        let (meet, join) = u.meet_join(&v).unwrap();
        prop_assert!(meet.is_subspace_of(&u) && meet.is_subspace_of(&v));
        prop_assert!(u.is_subspace_of(&join) && v.is_subspace_of(&join));
        prop_assert_eq!(u.dim() + v.dim(), meet.dim() + join.dim());
    }

    /// Scaling by a unit preserves dimension and round-trips.
    #[test]
    fn scaling_is_bijective((ctx, s) in arb_space(), which in any::<u64>()) {
        let units: Vec<FqElement> = ctx.elements().into_iter().filter(|x| !x.is_zero()).collect();
        let a = units[(which % units.len() as u64) as usize].clone();
        let scaled = scale_space(&ctx, &a, &s, false).unwrap();
        prop_assert_eq!(scaled.dim(), s.dim());
        let back = scale_space(&ctx, &a, &scaled, true).unwrap();
        prop_assert_eq!(back, s);
    }

    /// The stabilizer subfield of a non-zero space always appears in the
    /// subfield lattice, and the product-span bound never fails.
    #[test]
    fn stabilizers_live_in_the_lattice((ctx, s) in arb_space()) {
        prop_assume!(!s.is_zero());
        let stab = stabilizer_subfield(&ctx, &s).unwrap();
        let lattice = ctx.subfield_lattice();
        prop_assert!(lattice.iter().any(|d| d.d == stab.d && d.space == stab.space));
    }

    /// Product spans satisfy the dimension bound with non-negative slack.
    #[test]
    fn product_span_bound((ctx, a) in arb_space(), raw in prop::collection::vec(prop::collection::vec(0u64..5, 1..7), 1..5)) {
        prop_assume!(!a.is_zero());
        let vecs: Vec<Vec<u64>> = raw.into_iter().map(|mut v| { v.resize(ctx.n(), 0); v }).collect();
        let b = Subspace::from_vectors(ctx.p(), ctx.n(), &vecs);
        prop_assume!(!b.is_zero());
        let cert = linear_kneser_verify(&ctx, &a, &b).unwrap();
        prop_assert!(cert.slack >= 0);
    }
}

/// Brute-force route: the stabilizer of W is literally the set of field
/// elements x with xW ⊆ W, found by scanning all of L.
#[test]
fn stabilizer_matches_brute_force_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for ctx in [
        FieldCtx::new(2, 4, None).unwrap(),
        FieldCtx::new(3, 3, None).unwrap(),
    ] {
        let full = Subspace::full(ctx.p(), ctx.n());
        for _ in 0..25 {
            let m = rand::Rng::gen_range(&mut rng, 1..=ctx.n());
            let w = random_subspace_of(&full, m, &mut rng);
            let basis_elems: Vec<FqElement> = w
                .rows()
                .iter()
                .map(|r| ctx.from_coeffs(r).unwrap())
                .collect();
            let brute: Vec<Vec<u64>> = ctx
                .elements()
                .into_iter()
                .filter(|x| {
                    basis_elems
                        .iter()
                        .all(|b| w.contains_element(&ctx.mul(x, b)))
                })
                .map(|x| x.coeffs().to_vec())
                .collect();
            let brute_space = Subspace::from_vectors(ctx.p(), ctx.n(), &brute);
            let solved = stabilizer_subfield(&ctx, &w).unwrap();
            assert_eq!(solved.space, brute_space);
            assert_eq!(solved.d, brute_space.dim());
        }
    }
}

/// Brute-force route: span of every pairwise element product equals the
/// span of the basis-row products (the bilinearity shortcut).
#[test]
fn product_span_matches_all_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for ctx in [
        FieldCtx::new(2, 4, None).unwrap(),
        FieldCtx::new(3, 2, None).unwrap(),
        FieldCtx::new(2, 5, None).unwrap(),
    ] {
        let full = Subspace::full(ctx.p(), ctx.n());
        for _ in 0..20 {
            let ma = rand::Rng::gen_range(&mut rng, 1..=ctx.n().min(3));
            let mb = rand::Rng::gen_range(&mut rng, 1..=ctx.n().min(3));
            let a = random_subspace_of(&full, ma, &mut rng);
            let b = random_subspace_of(&full, mb, &mut rng);
            let mut prods = Vec::new();
            for x in a.element_vectors() {
                let xe = ctx.from_coeffs(&x).unwrap();
                for y in b.element_vectors() {
                    let ye = ctx.from_coeffs(&y).unwrap();
                    prods.push(ctx.mul(&xe, &ye).coeffs().to_vec());
                }
            }
            let brute = Subspace::from_vectors(ctx.p(), ctx.n(), &prods);
            assert_eq!(product_span(&ctx, &a, &b).unwrap(), brute);
        }
    }
}

/// Brute-force route: the subfield F_{p^d} is exactly the set of elements
/// fixed by the d-th Frobenius power.
#[test]
fn frobenius_fixed_field_matches_scan() {
    for ctx in [
        FieldCtx::new(2, 4, None).unwrap(),
        FieldCtx::new(2, 6, None).unwrap(),
        FieldCtx::new(3, 2, None).unwrap(),
    ] {
        for desc in ctx.subfield_lattice() {
            let q = ctx.p().pow(desc.d as u32);
            let fixed: Vec<Vec<u64>> = ctx
                .elements()
                .into_iter()
                .filter(|x| ctx.pow(x, q) == *x)
                .map(|x| x.coeffs().to_vec())
                .collect();
            assert_eq!(fixed.len() as u64, q, "wrong number of fixed points");
            let brute = Subspace::from_vectors(ctx.p(), ctx.n(), &fixed);
            assert_eq!(desc.space, brute);
        }
    }
}

/// Frobenius fixed fields have the right dimensions and multiplication
/// closure for every divisor of n.
#[test]
fn frobenius_fixed_field_dimensions() {
    for ctx in ctx_pool() {
        for desc in ctx.subfield_lattice() {
            assert_eq!(desc.space.dim(), desc.d);
            assert!(desc.space.contains_element(&ctx.one()));
            let elems = desc.space.element_vectors();
            for x in &elems {
                for y in &elems {
                    let prod = ctx.mul(&ctx.from_coeffs(x).unwrap(), &ctx.from_coeffs(y).unwrap());
                    assert!(desc.space.contains_element(&prod));
                }
            }
        }
    }
}

/// Exhaustive hyperplane-sense matched-basis search: the independent
/// oracle for the dimension criterion. A basis `(bᵢ)` of `b_space` is
/// matched when `Wᵢ = aᵢ⁻¹A ∩ B ⊆ ⟨b_j : j ≠ i⟩` for every `i`.
fn oracle_matched_basis(
    ctx: &FieldCtx,
    a_basis: &[FqElement],
    b_space: &Subspace,
    ambient: &Subspace,
) -> Option<Vec<Vec<u64>>> {
    let m = a_basis.len();
    let spaces: Vec<Subspace> = a_basis
        .iter()
        .map(|a| {
            scale_space(ctx, a, ambient, true)
                .unwrap()
                .intersect(b_space)
                .unwrap()
        })
        .collect();
    let candidates = b_space.nonzero_vectors();

    fn dfs(
        ctx: &FieldCtx,
        level: usize,
        m: usize,
        spaces: &[Subspace],
        candidates: &[Vec<u64>],
        chosen: &mut Vec<Vec<u64>>,
    ) -> bool {
        if level == m {
            // leaf: full hyperplane check
            for (i, w) in spaces.iter().enumerate() {
                let others: Vec<Vec<u64>> = chosen
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                let hyper = Subspace::from_vectors(ctx.p(), ctx.n(), &others);
                if !w.is_subspace_of(&hyper) {
                    return false;
                }
            }
            return true;
        }
        // a hyperplane-valid bᵢ can never lie in Wᵢ, so prune there
        for cand in candidates {
            if spaces[level].contains(cand) {
                continue;
            }
            chosen.push(cand.clone());
            let rank_ok = Subspace::from_vectors(ctx.p(), ctx.n(), chosen).dim() == level + 1;
            if rank_ok && dfs(ctx, level + 1, m, spaces, candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::new();
    if dfs(ctx, 0, m, &spaces, &candidates, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

/// Criterion ⟺ exhaustive matched-basis existence, on seeded random
/// instances at small scale (the acceptance campaign scales this up).
#[test]
fn criterion_iff_exhaustive_oracle_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for ctx in [
        FieldCtx::new(2, 2, None).unwrap(),
        FieldCtx::new(2, 3, None).unwrap(),
        FieldCtx::new(3, 2, None).unwrap(),
    ] {
        let full = Subspace::full(ctx.p(), ctx.n());
        for _ in 0..60 {
            let m = 1 + (rand::Rng::gen_range(&mut rng, 0..2)).min(ctx.n() - 1);
            let a = random_subspace_of(&full, m, &mut rng);
            let b = random_subspace_of(&full, m, &mut rng);
            let basis = BasisSeq::new(&ctx, random_basis(&ctx, &a, &mut rng)).unwrap();
            let verdict = basis_matchable(&ctx, &basis, &b, &a).unwrap();
            let oracle = oracle_matched_basis(&ctx, basis.vectors(), &b, &a);
            assert_eq!(
                verdict.is_ok(),
                oracle.is_some(),
                "criterion/oracle disagreement in {ctx}: A={:?} B={:?} basis={:?}",
                a.rows(),
                b.rows(),
                basis.vectors()
            );
            // and the constructive path agrees with the criterion
            match find_matched_basis(&ctx, &basis, &b, &a).unwrap() {
                MatchedBasisOutcome::Found(bm) => {
                    assert!(verdict.is_ok());
                    // found basis must itself pass the oracle's leaf check
                    let rows: Vec<Vec<u64>> =
                        bm.b_basis.iter().map(|v| v.coeffs().to_vec()).collect();
                    let span = Subspace::from_vectors(ctx.p(), ctx.n(), &rows);
                    assert_eq!(span, b);
                }
                MatchedBasisOutcome::Violator(v) => {
                    assert!(!verdict.is_ok());
                    assert!(v.deficit > 0);
                }
            }
        }
    }
}

/// Criterion monotonicity: intersections over larger index sets can only
/// shrink, so a violator's witness bounds all its subsets' intersections.
#[test]
fn criterion_chain_monotonicity() {
    let ctx = FieldCtx::new(2, 4, None).unwrap();
    let full = Subspace::full(2, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let a = random_subspace_of(&full, 3, &mut rng);
        let b = random_subspace_of(&full, 3, &mut rng);
        let basis = random_basis(&ctx, &a, &mut rng);
        let spaces: Vec<Subspace> = basis
            .iter()
            .map(|x| {
                scale_space(&ctx, x, &a, true)
                    .unwrap()
                    .intersect(&b)
                    .unwrap()
            })
            .collect();
        for mask in 1u32..(1 << 3) {
            for sub in 1u32..(1 << 3) {
                if sub & mask != sub {
                    continue;
                }
                let dim_of = |m: u32| {
                    let mut inter: Option<Subspace> = None;
                    for (i, w) in spaces.iter().enumerate() {
                        if m & (1 << i) == 0 {
                            continue;
                        }
                        inter = Some(match inter {
                            None => w.clone(),
                            Some(acc) => acc.intersect(w).unwrap(),
                        });
                    }
                    inter.map_or(usize::MAX, |s| s.dim())
                };
                assert!(dim_of(sub) >= dim_of(mask));
            }
        }
    }
}

/// Primitive subspaces pass matched-basis construction for every basis
/// (spot check of the primitivity theorem; the campaign randomizes more).
#[test]
fn primitive_targets_always_matchable_spot() {
    let ctx = FieldCtx::new(2, 4, None).unwrap();
    let full = Subspace::full(2, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut tested = 0;
    while tested < 10 {
        let b = random_subspace_of(&full, 2, &mut rng);
        if !primitive_check(&ctx, &b).unwrap().primitive {
            continue;
        }
        tested += 1;
        let a = random_subspace_of(&full, 2, &mut rng);
        for basis in ordered_bases(&ctx, &a) {
            let seq = BasisSeq::new(&ctx, basis).unwrap();
            assert!(matches!(
                basis_matchable(&ctx, &seq, &b, &a).unwrap(),
                Matchable::Ok
            ));
        }
        // same fact through the quantified decision, exhaustively
        let decision = matchlab_core::field::is_matched(
            &ctx,
            &a,
            &b,
            matchlab_core::field::BasisMode::Exhaustive,
        )
        .unwrap();
        assert!(decision.matched);
        assert_eq!(decision.bases_tested, 6); // (4-1)(4-2) ordered bases
    }
}

/// A = F_4 inside F_16 with B avoiding F_4 entirely: no subfield qualifies,
/// so A is vacuously locally matched.
#[test]
fn local_matching_vacuous_with_subfield_module() {
    use matchlab_core::field::{linear_locally_matched, LocalSearchConfig};
    let ctx = FieldCtx::new(2, 4, None).unwrap();
    let f4_space = ctx.subfield_lattice()[1].space.clone();
    // B spanned by t and t³: meets F_4 = span{1, t²+t} only at 0
    let b = Subspace::from_vectors(2, 4, &[vec![0, 1, 0, 0], vec![0, 0, 0, 1]]);
    assert!(b.intersect(&f4_space).unwrap().is_zero());
    let report =
        linear_locally_matched(&ctx, &f4_space, &b, &LocalSearchConfig::default()).unwrap();
    assert!(report.locally_matched);
    assert_eq!(report.qualifying().count(), 0);
}

/// ⟨1⟩·B = B and subfields are idempotent under product span.
#[test]
fn product_span_units() {
    let ctx = FieldCtx::new(2, 4, None).unwrap();
    let one = Subspace::from_vectors(2, 4, &[vec![1, 0, 0, 0]]);
    let lattice = ctx.subfield_lattice();
    for desc in &lattice {
        assert_eq!(product_span(&ctx, &one, &desc.space).unwrap(), desc.space);
        assert_eq!(
            product_span(&ctx, &desc.space, &desc.space).unwrap(),
            desc.space
        );
    }
}

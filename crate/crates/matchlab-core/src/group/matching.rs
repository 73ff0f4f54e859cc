//! Matchings, local matchings, Hall violators, and sumset-growth
//! certificates for finite subsets of abelian groups.

use super::{is_prime, smallest_prime_factor, stabilizer, subgroups};
use super::{GroupElement, GroupSpec, GroupSubset, Subgroup};
use crate::{Error, Result};
use serde::Serialize;

/// A certified matching: a bijection `A → B` with `0 ∉ B` and
/// `a + f(a) ∉ A` for every pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub a: GroupSubset,
    pub b: GroupSubset,
    /// Pairs `(a, f(a))` sorted by `a`.
    pub pairs: Vec<(GroupElement, GroupElement)>,
}

/// A certified local matching for a qualifying subgroup `H`: a bijection
/// from `A′ ⊆ A` onto `H ∩ B` avoiding `A`, together with the witness
/// translate `a₀ + H ⊆ A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalMatching {
    pub subgroup: Subgroup,
    pub witness: GroupElement,
    pub a_prime: GroupSubset,
    /// Pairs `(a, f(a))` with `f(a) ∈ H ∩ B`, sorted by `a`.
    pub pairs: Vec<(GroupElement, GroupElement)>,
}

/// A certified failure of the Hall condition: `S ⊆ A` together with
/// `U = {b ∈ B : s + b ∈ A for all s ∈ S}` such that `#(B \ U) < #S`.
/// Since partners of `S` must come from `B \ U`, no matching exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HallViolator {
    pub s: GroupSubset,
    pub u: GroupSubset,
}

/// A verified instance of the sumset growth bound
/// `#C ≥ #A + #B − #H`, `C = A + B`, `H = stabilizer(C)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KneserCertificate {
    pub a: GroupSubset,
    pub b: GroupSubset,
    pub c: GroupSubset,
    pub h: Subgroup,
    pub slack: i64,
}

/// Outcome of [`find_matching`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchOutcome {
    Matched(Matching),
    Unmatched(HallViolator),
}

impl MatchOutcome {
    pub fn is_matched(&self) -> bool {
        matches!(self, MatchOutcome::Matched(_))
    }
}

/// First failed clause found when checking a claimed matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MatchingDefect {
    ZeroInB,
    DuplicateSource(GroupElement),
    DuplicateTarget(GroupElement),
    NotOnto(GroupElement),
    WrongSize {
        pairs: usize,
        expected: usize,
    },
    SumInA {
        a: GroupElement,
        b: GroupElement,
        sum: GroupElement,
    },
}

impl std::fmt::Display for MatchingDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatchingDefect::ZeroInB => write!(f, "0 belongs to B"),
            MatchingDefect::DuplicateSource(a) => write!(f, "source {a} appears twice"),
            MatchingDefect::DuplicateTarget(b) => write!(f, "target {b} appears twice"),
            MatchingDefect::NotOnto(b) => write!(f, "target {b} is never hit"),
            MatchingDefect::WrongSize { pairs, expected } => {
                write!(f, "{pairs} pairs given, {expected} expected")
            }
            MatchingDefect::SumInA { a, b, sum } => {
                write!(f, "{a}+{b}={sum} lies in A")
            }
        }
    }
}

/// Verdict of [`check_matching`], with the first offending clause on
/// failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MatchingVerdict {
    Valid,
    Invalid(MatchingDefect),
}

impl MatchingVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, MatchingVerdict::Valid)
    }
}

/// Check a claimed matching. Shape problems (mismatched groups or sizes,
/// elements foreign to `A`/`B`) are errors; violations of the matching
/// clauses are reported as an [`MatchingVerdict::Invalid`] verdict.
pub fn check_matching(
    a: &GroupSubset,
    b: &GroupSubset,
    pairs: &[(GroupElement, GroupElement)],
) -> Result<MatchingVerdict> {
    if a.group() != b.group() {
        return Err(Error::DifferentGroups);
    }
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    for (x, y) in pairs {
        if !a.contains(x) {
            return Err(Error::ForeignElement(x.to_string()));
        }
        if !b.contains(y) {
            return Err(Error::ForeignElement(y.to_string()));
        }
    }
    if b.contains_zero() {
        return Ok(MatchingVerdict::Invalid(MatchingDefect::ZeroInB));
    }
    if pairs.len() != a.len() {
        return Ok(MatchingVerdict::Invalid(MatchingDefect::WrongSize {
            pairs: pairs.len(),
            expected: a.len(),
        }));
    }
    let mut sources: Vec<&GroupElement> = pairs.iter().map(|(x, _)| x).collect();
    sources.sort();
    if let Some(w) = sources.windows(2).find(|w| w[0] == w[1]) {
        return Ok(MatchingVerdict::Invalid(MatchingDefect::DuplicateSource(
            w[0].clone(),
        )));
    }
    let mut targets: Vec<&GroupElement> = pairs.iter().map(|(_, y)| y).collect();
    targets.sort();
    if let Some(w) = targets.windows(2).find(|w| w[0] == w[1]) {
        return Ok(MatchingVerdict::Invalid(MatchingDefect::DuplicateTarget(
            w[0].clone(),
        )));
    }
    // Same size and no duplicates, so onto can only fail if some target of B
    // is missed; sources are exactly A by the same count argument.
    for y in b.iter() {
        if targets.binary_search(&y).is_err() {
            return Ok(MatchingVerdict::Invalid(MatchingDefect::NotOnto(y.clone())));
        }
    }
    for (x, y) in pairs {
        let sum = a.group().add(x, y)?;
        if a.contains(&sum) {
            return Ok(MatchingVerdict::Invalid(MatchingDefect::SumInA {
                a: x.clone(),
                b: y.clone(),
                sum,
            }));
        }
    }
    Ok(MatchingVerdict::Valid)
}

/// Kuhn's augmenting-path maximum matching on a bipartite graph given by
/// adjacency lists (left index → sorted right indices). Returns the
/// matched partner per side. Deterministic: lefts are processed in order
/// and candidates tried in adjacency order.
fn maximum_matching(
    adj: &[Vec<usize>],
    n_right: usize,
) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let n_left = adj.len();
    let mut match_l: Vec<Option<usize>> = vec![None; n_left];
    let mut match_r: Vec<Option<usize>> = vec![None; n_right];

    fn try_augment(
        l: usize,
        adj: &[Vec<usize>],
        match_l: &mut [Option<usize>],
        match_r: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &r in &adj[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let free = match match_r[r] {
                None => true,
                Some(l2) => try_augment(l2, adj, match_l, match_r, seen),
            };
            if free {
                match_l[l] = Some(r);
                match_r[r] = Some(l);
                return true;
            }
        }
        false
    }

    for l in 0..n_left {
        let mut seen = vec![false; n_right];
        try_augment(l, adj, &mut match_l, &mut match_r, &mut seen);
    }
    (match_l, match_r)
}

/// Left vertices reachable from unmatched lefts by alternating paths
/// (non-matching edge left→right, matching edge right→left). When the
/// matching is not perfect this set violates the Hall condition.
fn alternating_left_cut(
    adj: &[Vec<usize>],
    match_l: &[Option<usize>],
    match_r: &[Option<usize>],
) -> Vec<usize> {
    let n_left = adj.len();
    let mut in_l = vec![false; n_left];
    let mut in_r = vec![false; match_r.len()];
    let mut queue: Vec<usize> = (0..n_left).filter(|&l| match_l[l].is_none()).collect();
    for &l in &queue {
        in_l[l] = true;
    }
    while let Some(l) = queue.pop() {
        for &r in &adj[l] {
            if in_r[r] {
                continue;
            }
            in_r[r] = true;
            if let Some(l2) = match_r[r] {
                if !in_l[l2] {
                    in_l[l2] = true;
                    queue.push(l2);
                }
            }
        }
    }
    (0..n_left).filter(|&l| in_l[l]).collect()
}

fn compute_u(a: &GroupSubset, b: &GroupSubset, s: &GroupSubset) -> Result<GroupSubset> {
    let mut members = Vec::new();
    'outer: for y in b.iter() {
        for x in s.iter() {
            if !a.contains(&a.group().add(x, y)?) {
                continue 'outer;
            }
        }
        members.push(y.clone());
    }
    GroupSubset::new(a.group().clone(), members)
}

impl HallViolator {
    /// Re-derive `U` from `S` and confirm `#(B \ U) < #S`.
    pub fn verify(&self, a: &GroupSubset, b: &GroupSubset) -> Result<()> {
        if !self.s.is_subset_of(a) {
            return Err(Error::InvalidInstance("S is not a subset of A".into()));
        }
        if self.s.is_empty() {
            return Err(Error::InvalidInstance("S is empty".into()));
        }
        let u = compute_u(a, b, &self.s)?;
        if u != self.u {
            return Err(Error::InvalidInstance(
                "stored U differs from U recomputed from S".into(),
            ));
        }
        let uncovered = b.difference(&u)?;
        if uncovered.len() >= self.s.len() {
            return Err(Error::InvalidInstance(format!(
                "no violation: #(B\\U) = {} >= #S = {}",
                uncovered.len(),
                self.s.len()
            )));
        }
        Ok(())
    }
}

/// Find a matching from `A` to `B`, or a canonical Hall violator proving
/// none exists.
///
/// The bipartite graph joins `a—b` whenever `a + b ∉ A`; a perfect matching
/// of it is exactly a matching. On failure, `S` starts from the alternating
/// reachability cut of the maximum matching and is then greedily shrunk (in
/// canonical order) while it stays violating.
pub fn find_matching(a: &GroupSubset, b: &GroupSubset) -> Result<MatchOutcome> {
    if a.group() != b.group() {
        return Err(Error::DifferentGroups);
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySubset);
    }
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if b.contains_zero() {
        return Err(Error::ZeroInB);
    }

    let group = a.group().clone();
    let mut adj = Vec::with_capacity(a.len());
    for x in a.iter() {
        let mut row = Vec::new();
        for (j, y) in b.iter().enumerate() {
            if !a.contains(&group.add(x, y)?) {
                row.push(j);
            }
        }
        adj.push(row);
    }

    let (match_l, match_r) = maximum_matching(&adj, b.len());
    if match_l.iter().all(Option::is_some) {
        let pairs = a
            .iter()
            .zip(&match_l)
            .map(|(x, r)| (x.clone(), b.elements()[r.unwrap()].clone()))
            .collect();
        let m = Matching {
            a: a.clone(),
            b: b.clone(),
            pairs,
        };
        debug_assert!(check_matching(&m.a, &m.b, &m.pairs)?.is_valid());
        return Ok(MatchOutcome::Matched(m));
    }

    let cut = alternating_left_cut(&adj, &match_l, &match_r);
    let mut s_members: Vec<GroupElement> = cut.iter().map(|&i| a.elements()[i].clone()).collect();

    // Greedy minimization: drop elements of S while the violation survives.
    let mut idx = 0;
    while idx < s_members.len() {
        if s_members.len() == 1 {
            break;
        }
        let mut smaller = s_members.clone();
        smaller.remove(idx);
        let s_try = GroupSubset::new(group.clone(), smaller.clone())?;
        let u_try = compute_u(a, b, &s_try)?;
        if b.difference(&u_try)?.len() < s_try.len() {
            s_members = smaller;
        } else {
            idx += 1;
        }
    }

    let s = GroupSubset::new(group.clone(), s_members)?;
    let u = compute_u(a, b, &s)?;
    let violator = HallViolator { s, u };
    violator.verify(a, b)?;
    Ok(MatchOutcome::Unmatched(violator))
}

/// Find a local matching for a qualifying subgroup `H`: a maximum matching
/// in the bipartite graph `A × (H ∩ B)` (edge iff `a + b ∉ A`) saturating
/// `H ∩ B`. Disqualification of `H` (not proper, `H ∩ B = ∅`, or no
/// translate `a + H ⊆ A`) is an error, distinct from the `None` returned
/// when `H` qualifies but no saturating matching exists.
pub fn find_local_matching(
    a: &GroupSubset,
    b: &GroupSubset,
    h: &Subgroup,
) -> Result<Option<LocalMatching>> {
    if a.group() != b.group() || h.group() != a.group() {
        return Err(Error::DifferentGroups);
    }
    if !h.is_proper() {
        return Err(Error::SubgroupNotQualified("H is the whole group".into()));
    }
    let hb = h.subset().intersection(b)?;
    if hb.is_empty() {
        return Err(Error::SubgroupNotQualified("H ∩ B is empty".into()));
    }
    let witness = find_translate_witness(a, h)?
        .ok_or_else(|| Error::SubgroupNotQualified("no a ∈ A with a + H ⊆ A".into()))?;

    // Left side is H ∩ B so that a perfect run saturates it.
    let group = a.group().clone();
    let mut adj = Vec::with_capacity(hb.len());
    for y in hb.iter() {
        let mut row = Vec::new();
        for (j, x) in a.iter().enumerate() {
            if !a.contains(&group.add(x, y)?) {
                row.push(j);
            }
        }
        adj.push(row);
    }
    let (match_l, _) = maximum_matching(&adj, a.len());
    if match_l.iter().any(Option::is_none) {
        return Ok(None);
    }
    let mut pairs: Vec<(GroupElement, GroupElement)> = hb
        .iter()
        .zip(&match_l)
        .map(|(y, l)| (a.elements()[l.unwrap()].clone(), y.clone()))
        .collect();
    pairs.sort();
    let a_prime = GroupSubset::new(group, pairs.iter().map(|(x, _)| x.clone()).collect())?;
    Ok(Some(LocalMatching {
        subgroup: h.clone(),
        witness,
        a_prime,
        pairs,
    }))
}

/// First `a ∈ A` (canonical order) with `a + H ⊆ A`, if any.
fn find_translate_witness(a: &GroupSubset, h: &Subgroup) -> Result<Option<GroupElement>> {
    'outer: for x in a.iter() {
        for g in h.elements() {
            if !a.contains(&a.group().add(x, g)?) {
                continue 'outer;
            }
        }
        return Ok(Some(x.clone()));
    }
    Ok(None)
}

/// Status of one candidate subgroup in a local-matching report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GroupLocalStatus {
    NotQualified { reason: String },
    Matched(LocalMatching),
    Unmatched,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupLocalRow {
    pub subgroup: Subgroup,
    pub status: GroupLocalStatus,
}

/// Per-subgroup report of [`is_locally_matched`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupLocalReport {
    pub locally_matched: bool,
    pub rows: Vec<GroupLocalRow>,
}

impl GroupLocalReport {
    pub fn qualifying(&self) -> impl Iterator<Item = &GroupLocalRow> {
        self.rows
            .iter()
            .filter(|r| !matches!(r.status, GroupLocalStatus::NotQualified { .. }))
    }
}

/// Decide whether `A` is locally matched to `B`: every qualifying proper
/// subgroup must admit a local matching. Only subgroups with
/// `#H ≤ #A` can satisfy `a + H ⊆ A`, which keeps the enumeration finite
/// even over infinite groups.
pub fn is_locally_matched(a: &GroupSubset, b: &GroupSubset) -> Result<GroupLocalReport> {
    let subs = subgroups(a.group(), Some(a.len() as u64))?;
    is_locally_matched_with(a, b, &subs)
}

/// Same as [`is_locally_matched`] but with a caller-supplied subgroup list,
/// so campaigns can enumerate once per group. The list must contain every
/// subgroup of order at most `#A`.
pub fn is_locally_matched_with(
    a: &GroupSubset,
    b: &GroupSubset,
    subgroup_pool: &[Subgroup],
) -> Result<GroupLocalReport> {
    if a.group() != b.group() {
        return Err(Error::DifferentGroups);
    }
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if b.contains_zero() {
        return Err(Error::ZeroInB);
    }

    let mut rows = Vec::new();
    let mut all_ok = true;
    for h in subgroup_pool {
        if h.order() > a.len() as u64 {
            continue;
        }
        if !h.is_proper() {
            continue;
        }
        let status = if h.subset().intersection(b)?.is_empty() {
            GroupLocalStatus::NotQualified {
                reason: "H ∩ B is empty".into(),
            }
        } else if find_translate_witness(a, h)?.is_none() {
            GroupLocalStatus::NotQualified {
                reason: "no a ∈ A with a + H ⊆ A".into(),
            }
        } else {
            match find_local_matching(a, b, h)? {
                Some(lm) => GroupLocalStatus::Matched(lm),
                None => {
                    all_ok = false;
                    GroupLocalStatus::Unmatched
                }
            }
        };
        rows.push(GroupLocalRow {
            subgroup: h.clone(),
            status,
        });
    }
    Ok(GroupLocalReport {
        locally_matched: all_ok,
        rows,
    })
}

/// Closed-form decision of the matching property: matchings always exist
/// exactly when the group is torsion-free or cyclic of prime order.
pub fn decide_matching_property(group: &GroupSpec) -> bool {
    if group.torsion_orders().is_empty() {
        return true;
    }
    group.free_rank() == 0
        && group.torsion_orders().len() == 1
        && is_prime(group.torsion_orders()[0])
}

/// A constructed unmatched pair with its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCounterexample {
    pub a: GroupSubset,
    pub b: GroupSubset,
    pub violator: HallViolator,
}

/// For a group without the matching property, build the standard unmatched
/// pair `A = H`, `B = (H \ {0}) ∪ {g}` from a prime-order subgroup `H` and
/// the first canonical element `g ∉ H`. Returns `None` when the group has
/// the matching property.
pub fn construct_counterexample(group: &GroupSpec) -> Result<Option<GroupCounterexample>> {
    if decide_matching_property(group) {
        return Ok(None);
    }
    let n1 = group.torsion_orders()[0];
    let p = smallest_prime_factor(n1);
    let mut coords = vec![0i64; group.torsion_orders().len()];
    coords[0] = (n1 / p) as i64;
    let gen = group.element(&vec![0; group.free_rank()], &coords)?;
    let h = Subgroup::generated_by(group, &[gen])?;

    let g = group
        .torsion_elements()
        .into_iter()
        .find(|x| !h.contains(x))
        .map(Ok)
        .unwrap_or_else(|| {
            // H swallows the whole torsion part; fall back to a free unit.
            let mut free = vec![0i64; group.free_rank()];
            free[0] = 1;
            group.element(&free, &vec![0; group.torsion_orders().len()])
        })?;

    let a = h.subset().clone();
    let b = h.subset().without_zero().with_element(&g)?;
    match find_matching(&a, &b)? {
        MatchOutcome::Unmatched(violator) => Ok(Some(GroupCounterexample { a, b, violator })),
        MatchOutcome::Matched(_) => Err(Error::TheoremViolation(format!(
            "constructed pair A={a}, B={b} in {group} is matched"
        ))),
    }
}

/// Verify the sumset growth bound on one instance and emit the certificate.
/// A negative slack would falsify the bound (or the implementation) and is
/// escalated as a theorem violation.
pub fn kneser_verify(a: &GroupSubset, b: &GroupSubset) -> Result<KneserCertificate> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySubset);
    }
    let c = a.sumset(b)?;
    let h = stabilizer(&c)?;
    let slack = c.len() as i64 - a.len() as i64 - b.len() as i64 + h.order() as i64;
    if slack < 0 {
        return Err(Error::TheoremViolation(format!(
            "sumset bound fails: #C={} #A={} #B={} #H={}",
            c.len(),
            a.len(),
            b.len(),
            h.order()
        )));
    }
    Ok(KneserCertificate {
        a: a.clone(),
        b: b.clone(),
        c,
        h,
        slack,
    })
}

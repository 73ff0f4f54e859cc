//! Finitely generated abelian groups `Z^r × Z/n₁ × … × Z/nₖ` in invariant-
//! factor form, their elements, finite subsets, and subgroups.

mod matching;
mod subgroup;
mod subset;

pub use matching::{
    check_matching, construct_counterexample, decide_matching_property, find_local_matching,
    find_matching, is_locally_matched, is_locally_matched_with, kneser_verify, GroupCounterexample,
    GroupLocalReport, GroupLocalRow, GroupLocalStatus, HallViolator, KneserCertificate,
    LocalMatching, MatchOutcome, Matching, MatchingDefect, MatchingVerdict,
};
pub use subgroup::{stabilizer, subgroups, Subgroup};
pub use subset::GroupSubset;

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A finitely generated abelian group `Z^r × Z/n₁ × … × Z/nₖ`.
///
/// Torsion orders are normalized to invariant-factor form at construction
/// (`n₁ | n₂ | … | nₖ`, every `nᵢ ≥ 2`), so equality of specs is equality of
/// isomorphism data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecWire", into = "GroupSpecWire")]
pub struct GroupSpec {
    free_rank: usize,
    torsion: Vec<u64>,
}

#[derive(Serialize, Deserialize, Clone)]
struct GroupSpecWire {
    free_rank: usize,
    torsion: Vec<u64>,
}

impl TryFrom<GroupSpecWire> for GroupSpec {
    type Error = Error;
    fn try_from(w: GroupSpecWire) -> Result<Self> {
        GroupSpec::new(w.free_rank, &w.torsion)
    }
}

impl From<GroupSpec> for GroupSpecWire {
    fn from(g: GroupSpec) -> Self {
        GroupSpecWire {
            free_rank: g.free_rank,
            torsion: g.torsion,
        }
    }
}

/// An element of a [`GroupSpec`], stored in canonical form: every torsion
/// residue satisfies `0 ≤ tᵢ < nᵢ`. Ordering is lexicographic on the free
/// part, then the torsion part.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    free: Vec<i64>,
    torsion: Vec<u64>,
}

impl GroupElement {
    pub fn free(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .free
            .iter()
            .map(|x| x.to_string())
            .chain(self.torsion.iter().map(|x| x.to_string()))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [(n, 1)]
}

pub(crate) fn smallest_prime_factor(n: u64) -> u64 {
    prime_factors(n)[0].0
}

/// Rewrite a list of cyclic orders as invariant factors `n₁ | n₂ | … | nₖ`.
fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    use std::collections::BTreeMap;
    // Exponent lists per prime, largest first.
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &n in orders {
        for (p, e) in prime_factors(n) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    for exps in by_prime.values_mut() {
        exps.sort_unstable_by(|a, b| b.cmp(a));
    }
    let k = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; k];
    for (p, exps) in &by_prime {
        for (j, &e) in exps.iter().enumerate() {
            factors[j] *= p.pow(e);
        }
    }
    factors.reverse();
    factors
}

impl GroupSpec {
    /// Build `Z^free_rank × Z/n₁ × … × Z/nₖ`, normalizing the torsion orders
    /// to invariant-factor form. Rejects any torsion order below 2.
    pub fn new(free_rank: usize, torsion_orders: &[u64]) -> Result<Self> {
        for &n in torsion_orders {
            if n < 2 {
                return Err(Error::InvalidTorsionOrder(n));
            }
        }
        Ok(GroupSpec {
            free_rank,
            torsion: invariant_factors(torsion_orders),
        })
    }

    /// The cyclic group `Z/n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(0, &[n])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_orders(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        if self.free_rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion.len()],
        }
    }

    /// Build an element from raw coordinates, reducing torsion coordinates
    /// into canonical residues.
    pub fn element(&self, free: &[i64], torsion: &[i64]) -> Result<GroupElement> {
        if free.len() != self.free_rank || torsion.len() != self.torsion.len() {
            return Err(Error::GroupMismatch(format!(
                "expected {} free and {} torsion coordinates, got {} and {}",
                self.free_rank,
                self.torsion.len(),
                free.len(),
                torsion.len()
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&self.torsion)
            .map(|(&t, &n)| t.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElement {
            free: free.to_vec(),
            torsion,
        })
    }

    /// Check that `x` is a canonical element of this group.
    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if x.free.len() != self.free_rank || x.torsion.len() != self.torsion.len() {
            return Err(Error::GroupMismatch(format!(
                "element {x} does not fit Z^{} x {:?}",
                self.free_rank, self.torsion
            )));
        }
        for (&t, &n) in x.torsion.iter().zip(&self.torsion) {
            if t >= n {
                return Err(Error::GroupMismatch(format!(
                    "residue {t} not reduced mod {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(GroupElement {
            free: x.free.iter().zip(&y.free).map(|(a, b)| a + b).collect(),
            torsion: x
                .torsion
                .iter()
                .zip(&y.torsion)
                .zip(&self.torsion)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        })
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(GroupElement {
            free: x.free.iter().map(|a| -a).collect(),
            torsion: x
                .torsion
                .iter()
                .zip(&self.torsion)
                .map(|(&a, &n)| (n - a) % n)
                .collect(),
        })
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    /// `n(G)`: the smallest cardinality of a non-zero subgroup, `None` when
    /// the group is torsion-free (no non-zero finite subgroup exists).
    pub fn smallest_subgroup_order(&self) -> Option<u64> {
        self.torsion.iter().map(|&n| smallest_prime_factor(n)).min()
    }

    /// All elements of a finite group in canonical (lexicographic) order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(Error::UnboundedEnumeration);
        }
        Ok(self.torsion_elements())
    }

    /// All elements with zero free part, in canonical order. For a finite
    /// group this is the whole group; in general it is the torsion subgroup.
    pub fn torsion_elements(&self) -> Vec<GroupElement> {
        let mut out = Vec::new();
        let k = self.torsion.len();
        let mut current = vec![0u64; k];
        loop {
            out.push(GroupElement {
                free: vec![0; self.free_rank],
                torsion: current.clone(),
            });
            // odometer increment, last coordinate fastest
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                current[i] += 1;
                if current[i] < self.torsion[i] {
                    break;
                }
                current[i] = 0;
            }
        }
    }
}

impl std::fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for n in &self.torsion {
            parts.push(format!("Z/{n}"));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" x "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_keeps_divisor_chains() {
        let g = GroupSpec::new(0, &[8]).unwrap();
        assert_eq!(g.torsion_orders(), &[8]);
        let g = GroupSpec::new(0, &[2, 4]).unwrap();
        assert_eq!(g.torsion_orders(), &[2, 4]);
    }

    #[test]
    fn normalization_merges_coprime_factors() {
        // Z/2 x Z/3 = Z/6 by CRT.
        let g = GroupSpec::new(0, &[2, 3]).unwrap();
        assert_eq!(g.torsion_orders(), &[6]);
        // Z/6 x Z/4 = Z/2 x Z/12.
        let g = GroupSpec::new(0, &[6, 4]).unwrap();
        assert_eq!(g.torsion_orders(), &[2, 12]);
    }

    #[test]
    fn free_group_has_no_torsion() {
        let g = GroupSpec::new(1, &[]).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert!(!g.is_finite());
        assert_eq!(g.order(), None);
    }

    #[test]
    fn rejects_bad_torsion_order() {
        assert!(GroupSpec::new(0, &[1]).is_err());
        assert!(GroupSpec::new(0, &[0]).is_err());
    }

    #[test]
    fn arithmetic_is_canonical() {
        let z8 = GroupSpec::cyclic(8).unwrap();
        let two = z8.element(&[], &[2]).unwrap();
        let six = z8.element(&[], &[6]).unwrap();
        assert_eq!(z8.add(&two, &six).unwrap(), z8.zero());
        let three = z8.element(&[], &[3]).unwrap();
        assert_eq!(z8.neg(&three).unwrap(), z8.element(&[], &[5]).unwrap());

        let z = GroupSpec::new(1, &[]).unwrap();
        let one = z.element(&[1], &[]).unwrap();
        let minus = z.element(&[-1], &[]).unwrap();
        assert_eq!(z.add(&one, &minus).unwrap(), z.zero());
    }

    #[test]
    fn smallest_subgroup_orders() {
        assert_eq!(
            GroupSpec::cyclic(8).unwrap().smallest_subgroup_order(),
            Some(2)
        );
        assert_eq!(
            GroupSpec::cyclic(15).unwrap().smallest_subgroup_order(),
            Some(3)
        );
        assert_eq!(
            GroupSpec::new(1, &[]).unwrap().smallest_subgroup_order(),
            None
        );
    }

    #[test]
    fn element_enumeration_is_lexicographic() {
        let g = GroupSpec::new(0, &[2, 2]).unwrap();
        let elems = g.elements().unwrap();
        assert_eq!(elems.len(), 4);
        let mut sorted = elems.clone();
        sorted.sort();
        assert_eq!(elems, sorted);
    }

    #[test]
    fn group_json_round_trip() {
        let g = GroupSpec::new(2, &[2, 4]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"free_rank":2,"torsion":[2,4]}"#);
        let back: GroupSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}

use super::{GroupElement, GroupSpec, GroupSubset};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

/// A finite subgroup with its elements materialized.
///
/// Only finite subgroups ever arise here: stabilizers of finite sets are
/// finite, and enumeration is restricted to the torsion part. Serializes as
/// the bare element array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subgroup {
    generators: Vec<GroupElement>,
    elems: GroupSubset,
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

/// Saturate a generating set inside the torsion part. Errors out if any
/// generator has infinite order (non-zero free part).
fn closure(group: &GroupSpec, gens: &[GroupElement]) -> Result<BTreeSet<GroupElement>> {
    for g in gens {
        group.check(g)?;
        if g.free().iter().any(|&x| x != 0) {
            return Err(Error::InfiniteSubgroup);
        }
    }
    let mut set = BTreeSet::new();
    set.insert(group.zero());
    let mut queue = vec![group.zero()];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = group.add(&x, g)?;
            if set.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    Ok(set)
}

impl Subgroup {
    /// The subgroup generated by `gens` (finite orders only).
    pub fn generated_by(group: &GroupSpec, gens: &[GroupElement]) -> Result<Self> {
        let set = closure(group, gens)?;
        Ok(Subgroup {
            generators: gens.to_vec(),
            elems: GroupSubset::new(group.clone(), set.into_iter().collect())?,
        })
    }

    pub fn trivial(group: &GroupSpec) -> Self {
        Subgroup {
            generators: vec![],
            elems: GroupSubset::new(group.clone(), vec![group.zero()]).unwrap(),
        }
    }

    /// Rebuild a subgroup from a claimed element set, verifying closure
    /// under addition and negation and the presence of the identity.
    pub fn from_elements(group: &GroupSpec, elems: Vec<GroupElement>) -> Result<Self> {
        let set = GroupSubset::new(group.clone(), elems)?;
        if !set.contains_zero() {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for a in set.iter() {
            if !set.contains(&group.neg(a)?) {
                return Err(Error::NotASubgroup(format!("negation of {a} missing")));
            }
            for b in set.iter() {
                if !set.contains(&group.add(a, b)?) {
                    return Err(Error::NotASubgroup(format!("{a} + {b} escapes the set")));
                }
            }
        }
        Ok(Subgroup {
            generators: set.elements().to_vec(),
            elems: set,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        self.elems.group()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn subset(&self) -> &GroupSubset {
        &self.elems
    }

    pub fn elements(&self) -> &[GroupElement] {
        self.elems.elements()
    }

    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elems.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// A finite subgroup of an infinite group is always proper.
    pub fn is_proper(&self) -> bool {
        match self.group().order() {
            None => true,
            Some(n) => self.order() < n,
        }
    }

    /// The cosets `x + H` partition any finite subset containing them; this
    /// is the membership test `x - y ∈ H`.
    pub fn same_coset(&self, x: &GroupElement, y: &GroupElement) -> Result<bool> {
        Ok(self.contains(&self.group().sub(x, y)?))
    }
}

/// The stabilizer `H = {g : g + C = C}` of a non-empty finite set.
///
/// Any such `g` satisfies `g ∈ C - c` for every `c ∈ C`, so testing the
/// candidates `C - c₀` suffices; in particular the stabilizer of a finite set
/// is always finite, even when the group is not.
pub fn stabilizer(c: &GroupSubset) -> Result<Subgroup> {
    if c.is_empty() {
        return Err(Error::EmptySubset);
    }
    let group = c.group().clone();
    let c0 = &c.elements()[0];
    let mut members = Vec::new();
    for x in c.iter() {
        let g = group.sub(x, c0)?;
        if c.translate(&g)? == *c {
            members.push(g);
        }
    }
    // The fixers of a set form a subgroup, so the collected candidates are
    // already closed; `from_elements` re-checks that.
    Subgroup::from_elements(&group, members)
}

/// Enumerate subgroups in deterministic order (by order, then by element
/// list). For a finite group with no bound this is every subgroup, including
/// the trivial one and the whole group. For an infinite group an order bound
/// is required, and all finite subgroups (which live in the torsion part) of
/// order at most the bound are returned.
pub fn subgroups(group: &GroupSpec, order_bound: Option<u64>) -> Result<Vec<Subgroup>> {
    let bound = match (group.order(), order_bound) {
        (Some(n), None) => n,
        (Some(n), Some(b)) => b.min(n),
        (None, Some(b)) => b,
        (None, None) => return Err(Error::UnboundedEnumeration),
    };

    let universe = group.torsion_elements();
    let mut found: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
    let trivial = vec![group.zero()];
    found.insert(trivial.clone());
    let mut queue = vec![trivial];

    while let Some(current) = queue.pop() {
        if (current.len() as u64) >= bound {
            continue;
        }
        for g in &universe {
            if current.binary_search(g).is_ok() {
                continue;
            }
            let mut gens = current.clone();
            gens.push(g.clone());
            let set = closure(group, &gens)?;
            if (set.len() as u64) > bound {
                continue;
            }
            let key: Vec<GroupElement> = set.into_iter().collect();
            if found.insert(key.clone()) {
                queue.push(key);
            }
        }
    }

    let mut out = Vec::with_capacity(found.len());
    for key in found {
        out.push(Subgroup {
            generators: key.clone(),
            elems: GroupSubset::new(group.clone(), key)?,
        });
    }
    out.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
    Ok(out)
}

use super::{GroupElement, GroupSpec};
use crate::{Error, Result};
use serde::ser::SerializeSeq;
use serde::Serialize;

/// A finite subset of a group, duplicate-free and kept in canonical
/// (lexicographic) order. Serializes as a bare array of elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupSubset {
    group: GroupSpec,
    elems: Vec<GroupElement>,
}

impl Serialize for GroupSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.elems.len()))?;
        for e in &self.elems {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

impl GroupSubset {
    /// Canonicalize a list of elements into a subset: validates shapes,
    /// sorts, and removes duplicates.
    pub fn new(group: GroupSpec, mut elems: Vec<GroupElement>) -> Result<Self> {
        for e in &elems {
            group.check(e)?;
        }
        elems.sort();
        elems.dedup();
        Ok(GroupSubset { group, elems })
    }

    /// Strict variant used by parsers: rejects duplicates instead of
    /// collapsing them.
    pub fn new_strict(group: GroupSpec, elems: Vec<GroupElement>) -> Result<Self> {
        let n = elems.len();
        let s = Self::new(group, elems)?;
        if s.len() != n {
            return Err(Error::InvalidInstance("duplicate element in subset".into()));
        }
        Ok(s)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&self.group.zero())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elems.iter()
    }

    fn same_group(&self, other: &GroupSubset) -> Result<()> {
        if self.group != other.group {
            return Err(Error::DifferentGroups);
        }
        Ok(())
    }

    /// The sumset `A + B = {a + b : a ∈ A, b ∈ B}`.
    pub fn sumset(&self, other: &GroupSubset) -> Result<GroupSubset> {
        self.same_group(other)?;
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.elems {
            for b in &other.elems {
                out.push(self.group.add(a, b)?);
            }
        }
        GroupSubset::new(self.group.clone(), out)
    }

    /// The translate `A + g`.
    pub fn translate(&self, g: &GroupElement) -> Result<GroupSubset> {
        let mut out = Vec::with_capacity(self.len());
        for a in &self.elems {
            out.push(self.group.add(a, g)?);
        }
        GroupSubset::new(self.group.clone(), out)
    }

    pub fn union(&self, other: &GroupSubset) -> Result<GroupSubset> {
        self.same_group(other)?;
        let mut out = self.elems.clone();
        out.extend(other.elems.iter().cloned());
        GroupSubset::new(self.group.clone(), out)
    }

    pub fn difference(&self, other: &GroupSubset) -> Result<GroupSubset> {
        self.same_group(other)?;
        let out = self
            .elems
            .iter()
            .filter(|e| !other.contains(e))
            .cloned()
            .collect();
        GroupSubset::new(self.group.clone(), out)
    }

    pub fn intersection(&self, other: &GroupSubset) -> Result<GroupSubset> {
        self.same_group(other)?;
        let out = self
            .elems
            .iter()
            .filter(|e| other.contains(e))
            .cloned()
            .collect();
        GroupSubset::new(self.group.clone(), out)
    }

    pub fn is_subset_of(&self, other: &GroupSubset) -> bool {
        self.group == other.group && self.elems.iter().all(|e| other.contains(e))
    }

    /// Remove the zero element if present.
    pub fn without_zero(&self) -> GroupSubset {
        let zero = self.group.zero();
        GroupSubset {
            group: self.group.clone(),
            elems: self.elems.iter().filter(|e| **e != zero).cloned().collect(),
        }
    }

    /// Insert a single element.
    pub fn with_element(&self, x: &GroupElement) -> Result<GroupSubset> {
        self.group.check(x)?;
        let mut out = self.elems.clone();
        out.push(x.clone());
        GroupSubset::new(self.group.clone(), out)
    }
}

impl std::fmt::Display for GroupSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn subset(g: &GroupSpec, xs: &[i64]) -> GroupSubset {
        let elems = xs.iter().map(|&x| g.element(&[], &[x]).unwrap()).collect();
        GroupSubset::new(g.clone(), elems).unwrap()
    }

    #[test]
    fn sumset_in_z8() {
        let z8 = z(8);
        let a = subset(&z8, &[0, 2]);
        let b = subset(&z8, &[1, 3]);
        assert_eq!(a.sumset(&b).unwrap(), subset(&z8, &[1, 3, 5]));
    }

    #[test]
    fn sumset_identity_element() {
        let z8 = z(8);
        let zero = subset(&z8, &[0]);
        let b = subset(&z8, &[1, 3, 4]);
        assert_eq!(zero.sumset(&b).unwrap(), b);
    }

    #[test]
    fn sumset_in_free_group() {
        let zz = GroupSpec::new(1, &[]).unwrap();
        let a = GroupSubset::new(
            zz.clone(),
            vec![
                zz.element(&[0], &[]).unwrap(),
                zz.element(&[1], &[]).unwrap(),
            ],
        )
        .unwrap();
        let c = a.sumset(&a).unwrap();
        let expect = GroupSubset::new(
            zz.clone(),
            vec![
                zz.element(&[0], &[]).unwrap(),
                zz.element(&[1], &[]).unwrap(),
                zz.element(&[2], &[]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(c, expect);
    }

    #[test]
    fn empty_sumset_rejected() {
        let z8 = z(8);
        let a = subset(&z8, &[0]);
        let empty = GroupSubset::new(z8.clone(), vec![]).unwrap();
        assert!(matches!(a.sumset(&empty), Err(Error::EmptySubset)));
    }

    #[test]
    fn strict_constructor_rejects_duplicates() {
        let z8 = z(8);
        let e = z8.element(&[], &[3]).unwrap();
        assert!(GroupSubset::new_strict(z8.clone(), vec![e.clone(), e]).is_err());
    }

    #[test]
    fn subset_serializes_as_array() {
        let z8 = z(8);
        let a = subset(&z8, &[2, 0]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(
            s,
            r#"[{"free":[],"torsion":[0]},{"free":[],"torsion":[2]}]"#
        );
    }
}

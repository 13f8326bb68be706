//! Finite Abelian group arithmetic.
//!
//! A group is described by its cyclic factors `Z_{n1} x ... x Z_{nr}`;
//! elements are residue tuples. The module provides the group law, element
//! sets with sumsets, subgroup closure and enumeration, cosets, element
//! orders, and the orbit structure of the doubling map `g -> 2g`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Default upper bound on the group order for exhaustive operations
/// (subgroup enumeration and everything built on it).
pub const DEFAULT_ENUMERATION_BOUND: u64 = 64;

/// A finite Abelian group presented as a product of cyclic groups.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    cyclic_orders: Vec<u64>,
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cyclic_orders.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl GroupSpec {
    pub fn new(cyclic_orders: Vec<u64>) -> Result<Self> {
        if cyclic_orders.is_empty() {
            return Err(Error::InvalidParameter {
                what: "a group needs at least one cyclic factor".into(),
            });
        }
        let mut order: u64 = 1;
        for &n in &cyclic_orders {
            if n < 1 {
                return Err(Error::InvalidCyclicOrder { order: n });
            }
            order = order.checked_mul(n).ok_or(Error::GroupOrderOverflow)?;
        }
        Ok(Self { cyclic_orders })
    }

    /// Shorthand for the cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The group order `m`.
    pub fn order(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.rank()],
        }
    }

    /// Builds an element after validating every residue against its factor.
    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement> {
        if residues.len() != self.rank()
            || residues
                .iter()
                .zip(&self.cyclic_orders)
                .any(|(&r, &n)| r >= n)
        {
            return Err(Error::ElementOutsideGroup {
                element: residues,
                orders: self.cyclic_orders.clone(),
            });
        }
        Ok(GroupElement { residues })
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.residues.len() == self.rank()
            && g.residues
                .iter()
                .zip(&self.cyclic_orders)
                .all(|(&r, &n)| r < n)
    }

    fn check_member(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ElementOutsideGroup {
                element: g.residues.clone(),
                orders: self.cyclic_orders.clone(),
            })
        }
    }

    /// All elements in lexicographic residue order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    /// Lexicographic position of `g` among all elements (last factor fastest).
    pub fn index_of(&self, g: &GroupElement) -> Result<u64> {
        self.check_member(g)?;
        let mut idx: u64 = 0;
        for (&r, &n) in g.residues.iter().zip(&self.cyclic_orders) {
            idx = idx * n + r;
        }
        Ok(idx)
    }

    /// Inverse of [`index_of`](Self::index_of); `idx` must be below the order.
    pub fn element_at(&self, idx: u64) -> GroupElement {
        assert!(idx < self.order(), "element index {idx} out of range");
        let mut residues = vec![0; self.rank()];
        let mut rest = idx;
        for i in (0..self.rank()).rev() {
            let n = self.cyclic_orders[i];
            residues[i] = rest % n;
            rest /= n;
        }
        GroupElement { residues }
    }

    /// Componentwise sum modulo the cyclic orders.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_member(a)?;
        self.check_member(b)?;
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.cyclic_orders)
            .map(|((&x, &y), &n)| ((x as u128 + y as u128) % n as u128) as u64)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_member(a)?;
        let residues = a
            .residues
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(&x, &n)| if x == 0 { 0 } else { n - x })
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn double(&self, g: &GroupElement) -> Result<GroupElement> {
        self.add(g, g)
    }

    /// `n * g` by componentwise modular multiplication.
    pub fn scalar_mul(&self, n: u64, g: &GroupElement) -> Result<GroupElement> {
        self.check_member(g)?;
        let residues = g
            .residues
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(&r, &ord)| ((n as u128 % ord as u128) * r as u128 % ord as u128) as u64)
            .collect();
        Ok(GroupElement { residues })
    }

    /// Least `n >= 1` with `n * g = 0`: the lcm of the per-factor orders
    /// `n_i / gcd(r_i, n_i)`.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.check_member(g)?;
        let mut ord: u64 = 1;
        for (&r, &n) in g.residues.iter().zip(&self.cyclic_orders) {
            let comp = n / r.gcd(&n);
            ord = ord.lcm(&comp);
        }
        Ok(ord)
    }

    /// Eventually-periodic structure of `n -> 2^n g` for `n >= 0`.
    pub fn doubling_orbit(&self, g: &GroupElement) -> Result<DoublingOrbit> {
        self.check_member(g)?;
        let mut seen: HashMap<GroupElement, usize> = HashMap::new();
        let mut elements = Vec::new();
        let mut t = g.clone();
        loop {
            if let Some(&pos) = seen.get(&t) {
                let period = elements.len() - pos;
                return Ok(DoublingOrbit {
                    preperiod: pos,
                    period,
                    elements,
                });
            }
            seen.insert(t.clone(), elements.len());
            elements.push(t.clone());
            t = self.double(&t)?;
        }
    }
}

/// An element of a [`GroupSpec`], stored as residues per cyclic factor.
///
/// Ordering is lexicographic on the residue tuple; this is the canonical
/// element order used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// The doubling map's orbit of one element: `preperiod` transient steps,
/// then a cycle of length `period`. `elements` lists the distinct states
/// visited, so `elements[preperiod..]` is one full cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingOrbit {
    pub preperiod: usize,
    pub period: usize,
    pub elements: Vec<GroupElement>,
}

impl DoublingOrbit {
    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod == 0
    }

    pub fn cycle(&self) -> &[GroupElement] {
        &self.elements[self.preperiod..]
    }
}

/// A finite set of group elements, stored sorted and deduplicated so that
/// set equality is list equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    spec: GroupSpec,
    members: Vec<GroupElement>,
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.members).finish()
    }
}

impl ElementSet {
    pub fn new(spec: GroupSpec, members: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        let mut members: Vec<GroupElement> = members.into_iter().collect();
        for g in &members {
            spec.check_member(g)?;
        }
        members.sort();
        members.dedup();
        Ok(Self { spec, members })
    }

    pub fn empty(spec: GroupSpec) -> Self {
        Self {
            spec,
            members: Vec::new(),
        }
    }

    pub fn singleton(spec: GroupSpec, g: GroupElement) -> Result<Self> {
        spec.check_member(&g)?;
        Ok(Self {
            spec,
            members: vec![g],
        })
    }

    /// The whole group as a set.
    pub fn full(spec: GroupSpec) -> Self {
        let members = spec.elements().collect();
        Self { spec, members }
    }

    fn from_sorted_unchecked(spec: GroupSpec, mut members: Vec<GroupElement>) -> Self {
        members.sort();
        members.dedup();
        Self { spec, members }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.members.iter()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.members.binary_search(g).is_ok()
    }

    /// First (lexicographically least) member, if any.
    pub fn min_member(&self) -> Option<&GroupElement> {
        self.members.first()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                left: self.spec.cyclic_orders.clone(),
                right: other.spec.cyclic_orders.clone(),
            });
        }
        Ok(())
    }

    /// `{x + y : x in self, y in other}`, deduplicated.
    pub fn sumset(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySet { operation: "sumset" });
        }
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.members {
            for b in &other.members {
                out.push(self.spec.add(a, b)?);
            }
        }
        Ok(Self::from_sorted_unchecked(self.spec.clone(), out))
    }

    /// The translate `g + self`.
    pub fn translate(&self, g: &GroupElement) -> Result<Self> {
        self.spec.check_member(g)?;
        let out = self
            .members
            .iter()
            .map(|a| self.spec.add(a, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_sorted_unchecked(self.spec.clone(), out))
    }

    /// `{-a : a in self}`.
    pub fn negated(&self) -> Self {
        let out = self
            .members
            .iter()
            .map(|a| self.spec.neg(a).expect("member validated"))
            .collect();
        Self::from_sorted_unchecked(self.spec.clone(), out)
    }

    fn union(&self, other: &Self) -> Self {
        let mut out = self.members.clone();
        out.extend(other.members.iter().cloned());
        Self::from_sorted_unchecked(self.spec.clone(), out)
    }
}

/// A subgroup: an element set containing the identity and closed under
/// addition.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: ElementSet,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

impl Subgroup {
    pub fn trivial(spec: GroupSpec) -> Self {
        let zero = spec.identity();
        Self {
            members: ElementSet::singleton(spec, zero).expect("identity is a member"),
        }
    }

    pub fn whole_group(spec: GroupSpec) -> Self {
        Self {
            members: ElementSet::full(spec),
        }
    }

    /// Validates that `set` really is a subgroup.
    pub fn from_set(set: ElementSet) -> Result<Self> {
        if !set.contains(&set.spec.identity()) {
            return Err(Error::NotASubgroup {
                details: "missing identity".into(),
            });
        }
        if set.sumset(&set)? != set {
            return Err(Error::NotASubgroup {
                details: "not closed under addition".into(),
            });
        }
        Ok(Self { members: set })
    }

    /// Smallest subgroup containing all of `generators`: repeated
    /// sumset-with-self until the set stops growing. Empty generators give
    /// the trivial subgroup.
    pub fn closure(generators: &ElementSet) -> Self {
        let spec = generators.spec.clone();
        let zero = ElementSet::singleton(spec, generators.spec.identity())
            .expect("identity is a member");
        let mut set = zero.union(generators);
        loop {
            let next = set.sumset(&set).expect("closure set is nonempty");
            if next == set {
                return Self { members: set };
            }
            set = next;
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        self.members.spec()
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.members.contains(g)
    }

    /// The coset `g + self`.
    pub fn coset(&self, g: &GroupElement) -> Result<Coset> {
        Coset::new(g, self.clone())
    }
}

/// A coset `g + U`. The stored representative is canonical: the least
/// element of the coset, so derived equality matches set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coset {
    representative: GroupElement,
    subgroup: Subgroup,
}

impl fmt::Debug for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}+{:?}", self.representative, self.subgroup)
    }
}

impl Coset {
    pub fn new(representative: &GroupElement, subgroup: Subgroup) -> Result<Self> {
        let set = subgroup.members().translate(representative)?;
        let canonical = set.min_member().expect("coset is nonempty").clone();
        Ok(Self {
            representative: canonical,
            subgroup,
        })
    }

    pub fn representative(&self) -> &GroupElement {
        &self.representative
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn element_set(&self) -> ElementSet {
        self.subgroup
            .members()
            .translate(&self.representative)
            .expect("representative validated")
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match self.subgroup.spec().sub(g, &self.representative) {
            Ok(diff) => self.subgroup.contains(&diff),
            Err(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.subgroup.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `U` extended by one generator: the union of cosets `U + j*g` until the
/// multiples of `g` fall back into `U`. Equals `closure(U ∪ {g})`.
fn extend_subgroup(u: &Subgroup, g: &GroupElement) -> Subgroup {
    let spec = u.spec().clone();
    let mut members: Vec<GroupElement> = u.members().members().to_vec();
    let mut t = g.clone();
    while !u.contains(&t) {
        for h in u.members().iter() {
            members.push(spec.add(h, &t).expect("members validated"));
        }
        t = spec.add(&t, g).expect("members validated");
    }
    Subgroup {
        members: ElementSet::from_sorted_unchecked(spec, members),
    }
}

/// All subgroups, each exactly once, under the default order bound.
pub fn enumerate_subgroups(spec: &GroupSpec) -> Result<Vec<Subgroup>> {
    enumerate_subgroups_bounded(spec, DEFAULT_ENUMERATION_BOUND)
}

/// All subgroups of a group whose order does not exceed `bound`.
///
/// Every subgroup of a rank-`r` group is the closure of at most `r`
/// generators, so adjoining one generator at a time from the trivial
/// subgroup reaches all of them; results are deduplicated by their sorted
/// element lists and returned ordered by (order, element list).
pub fn enumerate_subgroups_bounded(spec: &GroupSpec, bound: u64) -> Result<Vec<Subgroup>> {
    let m = spec.order();
    if m > bound {
        return Err(Error::EnumerationCapacity { order: m, bound });
    }
    let elements: Vec<GroupElement> = spec.elements().collect();
    let trivial = Subgroup::trivial(spec.clone());
    let mut seen: HashSet<Vec<GroupElement>> = HashSet::new();
    seen.insert(trivial.members().members().to_vec());
    let mut frontier = vec![trivial];
    let mut all = Vec::new();
    while let Some(u) = frontier.pop() {
        for g in &elements {
            if u.contains(g) {
                continue;
            }
            let bigger = extend_subgroup(&u, g);
            if seen.insert(bigger.members().members().to_vec()) {
                frontier.push(bigger);
            }
        }
        all.push(u);
    }
    all.sort_by(|a, b| {
        (a.order(), a.members().members()).cmp(&(b.order(), b.members().members()))
    });
    Ok(all)
}

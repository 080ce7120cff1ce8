//! Finite permutation groups at desk scale.
//!
//! Groups are materialized as full, lexicographically sorted element
//! lists with a multiplication table, so everything downstream can work
//! with plain element indices. This is deliberate: the algebra layers
//! are |G|-dimensional anyway, and exhaustive scans are both exact and
//! easy to audit. No stabilizer chains, no matrix groups.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Default bound on the order of an enumerated group.
pub const DEFAULT_MAX_ORDER: usize = 2000;

/// Groups up to this order get a full Cayley table; larger ones fall
/// back to composing permutations and looking the product up.
const MUL_TABLE_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("images {images:?} do not form a permutation of 0..{degree}")]
    InvalidPermutation { degree: usize, images: Vec<usize> },
    #[error("closure of the generators exceeds the bound {bound}")]
    ClosureExceedsBound { bound: usize },
    #[error("the given subgroup does not live inside this group")]
    NotASubgroup,
    #[error("order {order} is not a prime power")]
    NotPGroup { order: usize },
}

/// A permutation of {0..n-1}, stored as its image array.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm { images: (0..degree).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::InvalidPermutation { degree: n, images });
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation on `degree` points from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Perm, GroupError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt >= degree {
                    return Err(GroupError::InvalidPermutation { degree, images });
                }
                images[pt] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// self ∘ other: apply `other` first. Group products are written in
    /// this order throughout.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation; fixed points are omitted, identity prints as "()".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut wrote = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut pt = start;
            let mut first = true;
            while !seen[pt] {
                seen[pt] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{pt}")?;
                first = false;
                pt = self.images[pt];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

struct GroupInner {
    degree: usize,
    /// Sorted lexicographically by image array; index 0 is the identity.
    elements: Vec<Perm>,
    generators: Vec<usize>,
    inverse: Vec<u32>,
    /// Flat Cayley table, only for small groups.
    table: Option<Vec<u32>>,
    orders: Vec<u32>,
}

/// A fully enumerated finite permutation group. Cheap to clone and safe
/// to share across threads; immutable once built.
#[derive(Clone)]
pub struct Group {
    inner: Arc<GroupInner>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group(degree={}, order={})", self.degree(), self.order())
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.degree == other.inner.degree
                && self.inner.elements == other.inner.elements)
    }
}
impl Eq for Group {}

impl Group {
    /// Enumerates the closure of the generators, or fails once it grows
    /// past `max_order`.
    pub fn from_generators(
        degree: usize,
        gens: &[Perm],
        max_order: usize,
    ) -> Result<Group, GroupError> {
        assert!(max_order >= 1);
        for g in gens {
            if g.degree() != degree {
                return Err(GroupError::InvalidPermutation {
                    degree,
                    images: g.images.clone(),
                });
            }
        }
        let mut set = BTreeSet::new();
        set.insert(Perm::identity(degree));
        let mut queue: VecDeque<Perm> = VecDeque::new();
        queue.push_back(Perm::identity(degree));
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.compose(g);
                if set.insert(y.clone()) {
                    if set.len() > max_order {
                        return Err(GroupError::ClosureExceedsBound { bound: max_order });
                    }
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Perm> = set.into_iter().collect();
        let gen_indices: Vec<usize> = {
            let mut idxs: Vec<usize> = gens
                .iter()
                .map(|g| elements.binary_search(g).expect("generator in closure"))
                .collect();
            idxs.sort_unstable();
            idxs.dedup();
            idxs
        };
        Ok(Group { inner: Arc::new(build_inner(degree, elements, gen_indices)) })
    }

    pub fn trivial(degree: usize) -> Group {
        Group::from_generators(degree, &[], 1).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn order(&self) -> usize {
        self.inner.elements.len()
    }

    pub fn element(&self, idx: usize) -> &Perm {
        &self.inner.elements[idx]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.inner.elements
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.inner.generators
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.inner.elements.binary_search(p).ok()
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        match &self.inner.table {
            Some(t) => t[i * self.order() + j] as usize,
            None => {
                let p = self.inner.elements[i].compose(&self.inner.elements[j]);
                self.index_of(&p).expect("closed under multiplication")
            }
        }
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inner.inverse[i] as usize
    }

    /// g x g^{-1}
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, i: usize) -> usize {
        self.inner.orders[i] as usize
    }

    pub fn exponent(&self) -> u64 {
        let mut e: u64 = 1;
        for i in 0..self.order() {
            e = lcm(e, self.element_order(i) as u64);
        }
        e
    }

    /// Conjugacy classes as sorted index lists, ordered by their minimal
    /// element (so the identity class comes first).
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut class = Vec::new();
            let mut queue = VecDeque::new();
            seen[start] = true;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                class.push(x);
                for g in 0..n {
                    let y = self.conj(g, x);
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// The whole group as a subgroup of itself.
    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup { parent: self.clone(), elements: (0..self.order()).collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { parent: self.clone(), elements: vec![self.identity_index()] }
    }

    fn owns(&self, sub: &Subgroup) -> bool {
        Arc::ptr_eq(&self.inner, &sub.parent.inner)
    }

    /// A Sylow p-subgroup, grown greedily: repeatedly adjoin the first
    /// element of p-power order whose closure with the current subgroup
    /// is still a p-group. A maximal p-subgroup is Sylow, so this
    /// terminates at the full p-part of |G| and is deterministic.
    pub fn sylow_subgroup(&self, p: u64) -> Subgroup {
        assert!(is_prime(p), "{p} is not prime");
        let target = p_part(self.order() as u64, p) as usize;
        let mut current = vec![self.identity_index()];
        while current.len() < target {
            let mut extended = false;
            for idx in 0..self.order() {
                if current.binary_search(&idx).is_ok() {
                    continue;
                }
                if !is_p_power(self.element_order(idx) as u64, p) {
                    continue;
                }
                let mut gens = current.clone();
                gens.push(idx);
                let candidate = self.closure_indices(&gens);
                if is_p_power(candidate.len() as u64, p) {
                    current = candidate;
                    extended = true;
                    break;
                }
            }
            assert!(extended, "maximal p-subgroup smaller than the p-part");
        }
        Subgroup { parent: self.clone(), elements: current }
    }

    /// Subgroup generated by the given element indices.
    pub fn closure_indices(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        member[self.identity_index()] = true;
        let mut queue = VecDeque::new();
        queue.push_back(self.identity_index());
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| member[i]).collect()
    }

    pub fn normalizer(&self, p: &Subgroup) -> Result<Subgroup, GroupError> {
        if !self.owns(p) {
            return Err(GroupError::NotASubgroup);
        }
        Ok(normalizer_within(self, &(0..self.order()).collect::<Vec<_>>(), p))
    }

    pub fn centralizer(&self, p: &Subgroup) -> Result<Subgroup, GroupError> {
        if !self.owns(p) {
            return Err(GroupError::NotASubgroup);
        }
        Ok(centralizer_within(self, &(0..self.order()).collect::<Vec<_>>(), p))
    }

    /// O_p(G): the intersection of all Sylow p-subgroups (equivalently
    /// the largest normal p-subgroup).
    pub fn p_core(&self, p: u64) -> Subgroup {
        let sylow = self.sylow_subgroup(p);
        let mut core: BTreeSet<usize> = sylow.elements.iter().copied().collect();
        for g in 0..self.order() {
            if core.len() == 1 {
                break;
            }
            let conj: BTreeSet<usize> =
                sylow.elements.iter().map(|&u| self.conj(g, u)).collect();
            core = core.intersection(&conj).copied().collect();
        }
        Subgroup { parent: self.clone(), elements: core.into_iter().collect() }
    }

    /// Whether C_G(O_p(G)) ≤ O_p(G).
    pub fn is_characteristic_p(&self, p: u64) -> bool {
        let core = self.p_core(p);
        let cent = self.centralizer(&core).unwrap();
        cent.elements.iter().all(|i| core.contains_index(*i))
    }

    /// Whether N_G(P) has characteristic p for every nonidentity
    /// p-subgroup P (checked on representatives up to conjugacy).
    pub fn is_local_characteristic_p(&self, p: u64) -> bool {
        let sylow = self.sylow_subgroup(p);
        let subs = sylow.all_subgroups().expect("Sylow subgroup is a p-group");
        let reps = dedupe_up_to_conjugacy(self, &subs);
        for rep in reps {
            if rep.order() == 1 {
                continue;
            }
            let norm = self.normalizer(&rep).unwrap().as_group();
            if !norm.is_characteristic_p(p) {
                return false;
            }
        }
        true
    }
}

fn build_inner(degree: usize, elements: Vec<Perm>, generators: Vec<usize>) -> GroupInner {
    let n = elements.len();
    debug_assert!(elements[0].is_identity());
    let index: HashMap<&Perm, usize> =
        elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let table = if n <= MUL_TABLE_LIMIT {
        let mut t = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let p = elements[i].compose(&elements[j]);
                t[i * n + j] = index[&p] as u32;
            }
        }
        Some(t)
    } else {
        None
    };
    let inverse: Vec<u32> =
        elements.iter().map(|p| index[&p.inverse()] as u32).collect();
    let mut orders = vec![0u32; n];
    for i in 0..n {
        let mut k = 1u32;
        let mut x = i;
        while x != 0 {
            x = match &table {
                Some(t) => t[x * n + i] as usize,
                None => index[&elements[x].compose(&elements[i])],
            };
            k += 1;
        }
        orders[i] = if i == 0 { 1 } else { k };
    }
    GroupInner { degree, elements, generators, inverse, table, orders }
}

/// A subgroup, stored as a sorted list of parent element indices.
///
/// Ordering compares (order, element list) and ignores the parent, so
/// sorting a list of subgroups of one group is well defined.
#[derive(Clone)]
pub struct Subgroup {
    parent: Group,
    elements: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order={} of {:?})", self.order(), self.parent)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}
impl Eq for Subgroup {}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.elements.len(), &self.elements).cmp(&(other.elements.len(), &other.elements))
    }
}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl Subgroup {
    /// Validates closure, identity and inverses.
    pub fn from_elements(parent: &Group, mut elements: Vec<usize>) -> Result<Subgroup, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        let ok = elements.binary_search(&parent.identity_index()).is_ok()
            && elements.iter().all(|&i| {
                elements.binary_search(&parent.inv(i)).is_ok()
                    && elements
                        .iter()
                        .all(|&j| elements.binary_search(&parent.mul(i, j)).is_ok())
            });
        if !ok {
            return Err(GroupError::NotASubgroup);
        }
        Ok(Subgroup { parent: parent.clone(), elements })
    }

    /// Subgroup generated by the given indices.
    pub fn generated(parent: &Group, gens: &[usize]) -> Subgroup {
        Subgroup { parent: parent.clone(), elements: parent.closure_indices(gens) }
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.elements.binary_search(&idx).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        other.elements.iter().all(|&i| self.contains_index(i))
    }

    /// A greedy minimal generating sequence (first element not yet in
    /// the running closure, repeatedly).
    pub fn generating_indices(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut have = vec![self.parent.identity_index()];
        for &idx in &self.elements {
            if have.binary_search(&idx).is_ok() {
                continue;
            }
            gens.push(idx);
            have = self.parent.closure_indices(&gens);
            if have.len() == self.elements.len() {
                break;
            }
        }
        gens
    }

    /// g H g^{-1} as a subgroup of the same parent.
    pub fn conjugate_by(&self, g: usize) -> Subgroup {
        let mut elements: Vec<usize> =
            self.elements.iter().map(|&u| self.parent.conj(g, u)).collect();
        elements.sort_unstable();
        Subgroup { parent: self.parent.clone(), elements }
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements: Vec<usize> = self
            .elements
            .iter()
            .copied()
            .filter(|&i| other.contains_index(i))
            .collect();
        Subgroup { parent: self.parent.clone(), elements }
    }

    /// N_H(P) where H is this subgroup (P need not be inside H).
    pub fn normalizer_in(&self, p: &Subgroup) -> Subgroup {
        normalizer_within(&self.parent, &self.elements, p)
    }

    pub fn centralizer_in(&self, p: &Subgroup) -> Subgroup {
        centralizer_within(&self.parent, &self.elements, p)
    }

    /// Materializes this subgroup as a standalone group on the same
    /// points (for recursing with the characteristic-p predicates).
    pub fn as_group(&self) -> Group {
        let elements: Vec<Perm> =
            self.elements.iter().map(|&i| self.parent.element(i).clone()).collect();
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let tmp = Group { inner: Arc::new(build_inner(self.parent.degree(), elements, vec![])) };
        // greedy generators relative to the new index space
        let mut gens: Vec<usize> = Vec::new();
        let mut have = vec![tmp.identity_index()];
        for idx in 0..tmp.order() {
            if have.binary_search(&idx).is_ok() {
                continue;
            }
            gens.push(idx);
            have = tmp.closure_indices(&gens);
            if have.len() == tmp.order() {
                break;
            }
        }
        let inner = GroupInner {
            degree: tmp.inner.degree,
            elements: tmp.inner.elements.clone(),
            generators: gens,
            inverse: tmp.inner.inverse.clone(),
            table: tmp.inner.table.clone(),
            orders: tmp.inner.orders.clone(),
        };
        Group { inner: Arc::new(inner) }
    }

    /// All subgroups, intended for p-groups only (the lattice walk is
    /// exponential in general).
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        if prime_power_base(self.order() as u64).is_none() {
            return Err(GroupError::NotPGroup { order: self.order() });
        }
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let trivial = vec![self.parent.identity_index()];
        found.insert(trivial.clone());
        let mut queue = VecDeque::new();
        queue.push_back(trivial);
        while let Some(h) = queue.pop_front() {
            for &s in &self.elements {
                if h.binary_search(&s).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(s);
                let k = self.parent.closure_indices(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut subs: Vec<Subgroup> = found
            .into_iter()
            .map(|elements| Subgroup { parent: self.parent.clone(), elements })
            .collect();
        subs.sort();
        Ok(subs)
    }
}

fn normalizer_within(parent: &Group, ambient: &[usize], p: &Subgroup) -> Subgroup {
    let elements: Vec<usize> = ambient
        .iter()
        .copied()
        .filter(|&g| p.elements.iter().all(|&u| p.contains_index(parent.conj(g, u))))
        .collect();
    Subgroup { parent: parent.clone(), elements }
}

fn centralizer_within(parent: &Group, ambient: &[usize], p: &Subgroup) -> Subgroup {
    let elements: Vec<usize> = ambient
        .iter()
        .copied()
        .filter(|&g| p.elements.iter().all(|&u| parent.conj(g, u) == u))
        .collect();
    Subgroup { parent: parent.clone(), elements }
}

/// One representative per G-conjugacy class of the given subgroups.
pub fn dedupe_up_to_conjugacy(g: &Group, subs: &[Subgroup]) -> Vec<Subgroup> {
    let mut reps: Vec<Subgroup> = Vec::new();
    'outer: for s in subs {
        for r in &reps {
            if r.order() == s.order() && are_conjugate(g, r, s) {
                continue 'outer;
            }
        }
        reps.push(s.clone());
    }
    reps
}

pub fn are_conjugate(g: &Group, a: &Subgroup, b: &Subgroup) -> bool {
    if a.order() != b.order() {
        return false;
    }
    (0..g.order()).any(|x| a.elements.iter().all(|&u| b.contains_index(g.conj(x, u))))
}

/// An injective group homomorphism between subgroups of one parent
/// group, stored as an explicit element map (parallel sorted-domain and
/// image index arrays).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomorphism {
    domain: Vec<usize>,
    images: Vec<usize>,
}

impl Monomorphism {
    pub fn identity_on(sub: &Subgroup) -> Monomorphism {
        Monomorphism { domain: sub.elements().to_vec(), images: sub.elements().to_vec() }
    }

    pub fn from_map(domain: Vec<usize>, images: Vec<usize>) -> Monomorphism {
        debug_assert_eq!(domain.len(), images.len());
        debug_assert!(domain.windows(2).all(|w| w[0] < w[1]));
        Monomorphism { domain, images }
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, idx: usize) -> Option<usize> {
        self.domain.binary_search(&idx).ok().map(|pos| self.images[pos])
    }

    pub fn image_sorted(&self) -> Vec<usize> {
        let mut img = self.images.clone();
        img.sort_unstable();
        img
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.images
    }

    /// self ∘ inner; the image of `inner` must lie in the domain of self.
    pub fn compose(&self, inner: &Monomorphism) -> Monomorphism {
        let images = inner
            .images
            .iter()
            .map(|&i| self.apply(i).expect("composable monomorphisms"))
            .collect();
        Monomorphism { domain: inner.domain.clone(), images }
    }

    pub fn inverse(&self) -> Monomorphism {
        let mut pairs: Vec<(usize, usize)> =
            self.images.iter().copied().zip(self.domain.iter().copied()).collect();
        pairs.sort_unstable();
        let (domain, images) = pairs.into_iter().unzip();
        Monomorphism { domain, images }
    }

    /// Restriction to a smaller domain (a subgroup of the current one).
    pub fn restrict(&self, subdomain: &[usize]) -> Monomorphism {
        let images = subdomain
            .iter()
            .map(|&i| self.apply(i).expect("restriction within domain"))
            .collect();
        Monomorphism { domain: subdomain.to_vec(), images }
    }

    /// Conjugation map c_g restricted to the given subgroup, landing
    /// wherever it lands.
    pub fn conjugation(parent: &Group, g: usize, domain: &Subgroup) -> Monomorphism {
        let images = domain.elements().iter().map(|&u| parent.conj(g, u)).collect();
        Monomorphism { domain: domain.elements().to_vec(), images }
    }
}

/// All injective homomorphisms Q → S, by brute-force assignment of
/// images to a greedy generating sequence of Q with full relation
/// checking. Both subgroups must share a parent group.
pub fn injective_homs(q: &Subgroup, s: &Subgroup) -> Vec<Monomorphism> {
    let parent = q.parent().clone();
    assert!(Arc::ptr_eq(&parent.inner, &s.parent().inner), "subgroups of different groups");
    if q.is_trivial() {
        return vec![Monomorphism::identity_on(q)];
    }
    let gens = q.generating_indices();
    let k = gens.len();
    let q_els = q.elements();
    let pos_of = |idx: usize| q_els.binary_search(&idx).expect("element of Q");
    let mut out = Vec::new();
    let mut choice = vec![0usize; k];
    'assign: loop {
        let targets: Vec<usize> = choice.iter().map(|&c| s.elements()[c]).collect();
        // orders must match for an injective homomorphism
        let compatible = gens
            .iter()
            .zip(&targets)
            .all(|(&g, &t)| parent.element_order(g) == parent.element_order(t));
        if compatible {
            if let Some(mono) = extend_hom(&parent, q, &gens, &targets, &pos_of) {
                out.push(mono);
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == k {
                break 'assign;
            }
            choice[i] += 1;
            if choice[i] < s.order() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Tries to extend generator images to a full injective homomorphism by
/// walking Q; rejects on any relation conflict.
fn extend_hom(
    parent: &Group,
    q: &Subgroup,
    gens: &[usize],
    targets: &[usize],
    pos_of: &impl Fn(usize) -> usize,
) -> Option<Monomorphism> {
    let n = q.order();
    let mut map: Vec<Option<usize>> = vec![None; n];
    map[pos_of(parent.identity_index())] = Some(parent.identity_index());
    let mut queue = VecDeque::new();
    queue.push_back(parent.identity_index());
    let mut assigned = 1;
    while let Some(x) = queue.pop_front() {
        let mx = map[pos_of(x)].unwrap();
        for (&g, &t) in gens.iter().zip(targets) {
            let x2 = parent.mul(x, g);
            let v2 = parent.mul(mx, t);
            match map[pos_of(x2)] {
                Some(existing) => {
                    if existing != v2 {
                        return None;
                    }
                }
                None => {
                    map[pos_of(x2)] = Some(v2);
                    assigned += 1;
                    queue.push_back(x2);
                }
            }
        }
    }
    debug_assert_eq!(assigned, n, "generators must generate Q");
    let images: Vec<usize> = map.into_iter().map(|v| v.unwrap()).collect();
    let mut distinct = images.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != n {
        return None;
    }
    Some(Monomorphism { domain: q.elements().to_vec(), images })
}

// ---- small arithmetic helpers ----

pub fn is_prime(n: u64) -> bool {
    crate::field::is_prime(n)
}

pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut out = 1;
    while n % p == 0 {
        out *= p;
        n /= p;
    }
    out
}

pub fn is_p_power(n: u64, p: u64) -> bool {
    p_part(n, p) == n
}

/// Some(p) if n is a power of the prime p (n = 1 yields None-free: it is
/// a power of every prime, reported as Some(2) for definiteness).
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n == 1 {
        return Some(2);
    }
    let mut d = 2;
    let mut m = n;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            return if m == 1 { Some(d) } else { None };
        }
        d += 1;
    }
    Some(m)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn symmetric4() -> Group {
        let a = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        Group::from_generators(4, &[a, b], 100).unwrap()
    }

    pub(crate) fn alternating5() -> Group {
        let a = Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(5, &[&[2, 3, 4]]).unwrap();
        Group::from_generators(5, &[a, b], 100).unwrap()
    }

    fn cyclic(n: usize) -> Group {
        let c = Perm::from_cycles(n, &[&(0..n).collect::<Vec<_>>()]).unwrap();
        Group::from_generators(n, &[c], n + 1).unwrap()
    }

    fn symmetric3() -> Group {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        Group::from_generators(3, &[a, b], 10).unwrap()
    }

    #[test]
    fn trivial_group() {
        let g = Group::from_generators(1, &[], 10).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn closure_orders() {
        assert_eq!(symmetric4().order(), 24);
        assert_eq!(alternating5().order(), 60);
    }

    #[test]
    fn closure_bound_error() {
        let a = Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(5, &[&[2, 3, 4]]).unwrap();
        let err = Group::from_generators(5, &[a, b], 30).unwrap_err();
        assert_eq!(err, GroupError::ClosureExceedsBound { bound: 30 });
    }

    #[test]
    fn invalid_permutation_rejected() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
        let p = Perm::from_images(vec![1, 0]).unwrap();
        assert!(Group::from_generators(3, &[p], 10).is_err());
    }

    #[test]
    fn identity_is_index_zero_and_table_consistent() {
        let g = symmetric4();
        assert!(g.element(0).is_identity());
        for i in 0..g.order() {
            assert_eq!(g.mul(i, g.inv(i)), 0);
            assert_eq!(g.mul(0, i), i);
        }
    }

    #[test]
    fn sylow_of_trivial_group() {
        let g = Group::trivial(1);
        assert_eq!(g.sylow_subgroup(2).order(), 1);
    }

    #[test]
    fn sylow_s4_is_dihedral8() {
        let g = symmetric4();
        let s = g.sylow_subgroup(2);
        assert_eq!(s.order(), 8);
        assert_eq!((g.order() / s.order()) % 2, 1);
    }

    #[test]
    fn sylow_a5_is_klein4() {
        let g = alternating5();
        let s = g.sylow_subgroup(2);
        assert_eq!(s.order(), 4);
        // elementary abelian: all non-identity elements are commuting involutions
        for &a in s.elements() {
            assert!(g.element_order(a) <= 2);
            for &b in s.elements() {
                assert_eq!(g.mul(a, b), g.mul(b, a));
            }
        }
    }

    #[test]
    fn sylow_index_is_coprime() {
        for (g, p) in [(symmetric4(), 2), (symmetric4(), 3), (alternating5(), 5)] {
            let s = g.sylow_subgroup(p);
            assert_eq!(p_part(g.order() as u64, p), s.order() as u64);
        }
    }

    /// Independent oracle: enumerate all subsets closed under the group
    /// operations. Only usable for tiny groups.
    fn count_subgroups_by_subsets(h: &Subgroup) -> usize {
        let els = h.elements();
        let n = els.len();
        let mut count = 0;
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> =
                (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| els[i]).collect();
            if subset.is_empty() {
                continue;
            }
            if Subgroup::from_elements(h.parent(), subset).is_ok() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn subgroups_of_cyclic3() {
        let g = cyclic(3);
        let subs = g.full_subgroup().all_subgroups().unwrap();
        assert_eq!(subs.len(), 2);
    }

    #[test]
    fn subgroups_of_klein4() {
        let g = alternating5();
        let v4 = g.sylow_subgroup(2);
        let subs = v4.all_subgroups().unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(count_subgroups_by_subsets(&v4), 5);
    }

    #[test]
    fn subgroups_of_dihedral8() {
        let g = symmetric4();
        let d8 = g.sylow_subgroup(2);
        let subs = d8.all_subgroups().unwrap();
        assert_eq!(subs.len(), 10);
        assert_eq!(count_subgroups_by_subsets(&d8), 10);
    }

    #[test]
    fn all_subgroups_rejects_non_p_groups() {
        let g = symmetric3();
        let err = g.full_subgroup().all_subgroups().unwrap_err();
        assert_eq!(err, GroupError::NotPGroup { order: 6 });
    }

    #[test]
    fn centralizer_of_trivial_is_whole_group() {
        let g = symmetric4();
        let c = g.centralizer(&g.trivial_subgroup()).unwrap();
        assert_eq!(c.order(), 24);
    }

    #[test]
    fn normalizer_of_a5_sylow2_has_order_12() {
        let g = alternating5();
        let s = g.sylow_subgroup(2);
        assert_eq!(g.normalizer(&s).unwrap().order(), 12);
    }

    #[test]
    fn centralizer_of_core_in_s4() {
        let g = symmetric4();
        let v4 = g.p_core(2);
        assert_eq!(v4.order(), 4);
        let c = g.centralizer(&v4).unwrap();
        assert_eq!(c, v4);
    }

    #[test]
    fn normalizer_requires_same_parent() {
        let g = symmetric4();
        let h = symmetric3();
        let p = h.trivial_subgroup();
        assert_eq!(g.normalizer(&p).unwrap_err(), GroupError::NotASubgroup);
    }

    #[test]
    fn p_core_examples() {
        assert_eq!(cyclic(3).p_core(3).order(), 3);
        assert_eq!(symmetric4().p_core(2).order(), 4);
        assert_eq!(alternating5().p_core(2).order(), 1);
    }

    #[test]
    fn p_core_is_normal() {
        let g = symmetric4();
        let core = g.p_core(2);
        for &gen in g.generator_indices() {
            assert_eq!(core.conjugate_by(gen), core);
        }
    }

    #[test]
    fn characteristic_p_predicates() {
        assert!(symmetric4().is_characteristic_p(2));
        assert!(!alternating5().is_characteristic_p(2));
        assert!(alternating5().is_local_characteristic_p(2));
        assert!(cyclic(3).is_characteristic_p(3));
        assert!(cyclic(3).is_local_characteristic_p(3));
    }

    #[test]
    fn injective_homs_from_trivial() {
        let g = symmetric4();
        let t = g.trivial_subgroup();
        let s = g.sylow_subgroup(2);
        assert_eq!(injective_homs(&t, &s).len(), 1);
    }

    #[test]
    fn injective_homs_c3_to_c3() {
        let g = symmetric3();
        let c3 = g.sylow_subgroup(3);
        let homs = injective_homs(&c3, &c3);
        assert_eq!(homs.len(), 2); // identity and inversion
        assert!(homs.iter().any(|m| m.is_identity()));
    }

    #[test]
    fn injective_homs_c2_to_klein4() {
        let g = alternating5();
        let v4 = g.sylow_subgroup(2);
        let inv = *v4.elements().iter().find(|&&i| g.element_order(i) == 2).unwrap();
        let c2 = Subgroup::generated(&g, &[inv]);
        assert_eq!(injective_homs(&c2, &v4).len(), 3);
    }

    #[test]
    fn normalizer_contains_centralizer() {
        let g = symmetric4();
        for subs in g.sylow_subgroup(2).all_subgroups().unwrap() {
            let n = g.normalizer(&subs).unwrap();
            let c = g.centralizer(&subs).unwrap();
            assert!(n.contains_subgroup(&c));
        }
    }

    #[test]
    fn perm_display_cycles() {
        let p = Perm::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(Perm::identity(3).to_string(), "()");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Closure of random generators on 4 points is a genuine group:
        /// closed, with inverses, Lagrange for its cyclic subgroups.
        #[test]
        fn random_closures_are_groups(seed in prop::collection::vec(0usize..24, 1..3)) {
            let s4 = symmetric4();
            let gens: Vec<Perm> = seed.iter().map(|&i| s4.element(i).clone()).collect();
            let g = Group::from_generators(4, &gens, 100).unwrap();
            for i in 0..g.order() {
                prop_assert_eq!(g.mul(i, g.inv(i)), g.identity_index());
                for j in 0..g.order() {
                    prop_assert!(g.mul(i, j) < g.order());
                }
                prop_assert_eq!(g.order() % g.element_order(i), 0);
            }
        }
    }
}

//! The fusion system F_S(G) and the twisted-diagonal subgroup classes
//! of S × S.
//!
//! Hom-sets are the restrictions of conjugation maps c_g landing inside
//! S, computed by exhaustive scan over G and stored as explicit element
//! maps, so equality of morphisms is table comparison. Everything is
//! precomputed at construction; a built system is immutable and can be
//! shared across threads.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::permgroup::{
    injective_homs, p_part, prime_power_base, Group, Monomorphism, Subgroup,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error("the reference pair of a subconjugacy test must be untwisted")]
    ArgumentNotUntwisted,
}

/// A conjugation morphism together with one witness g inducing it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FusionMorphism {
    pub map: Monomorphism,
    pub witness: usize,
}

/// The fusion system on S induced by G, with all hom-sets cached.
pub struct FusionSystem {
    g: Group,
    s: Subgroup,
    p: u64,
    subgroups: Vec<Subgroup>,
    sub_index: HashMap<Vec<usize>, usize>,
    /// hom_to_s[i] = F(P_i, S), sorted by map for deterministic order;
    /// each retains the smallest witness.
    hom_to_s: Vec<Vec<FusionMorphism>>,
    classes: Vec<Vec<usize>>,
    fully_normalized: Vec<usize>,
}

impl FusionSystem {
    /// Builds F_S(G) where S is a Sylow p-subgroup of G.
    pub fn new(g: &Group, s: &Subgroup, p: u64) -> FusionSystem {
        assert_eq!(
            s.order() as u64,
            p_part(g.order() as u64, p),
            "S must be a Sylow {p}-subgroup"
        );
        let subgroups = s.all_subgroups().expect("Sylow subgroup is a p-group");
        let sub_index: HashMap<Vec<usize>, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, sub)| (sub.elements().to_vec(), i))
            .collect();
        let mut hom_to_s = Vec::with_capacity(subgroups.len());
        for sub in &subgroups {
            let mut seen: HashMap<Monomorphism, usize> = HashMap::new();
            for gi in 0..g.order() {
                let map = Monomorphism::conjugation(g, gi, sub);
                if !map.images().iter().all(|&v| s.contains_index(v)) {
                    continue;
                }
                seen.entry(map).or_insert(gi);
            }
            let mut homs: Vec<FusionMorphism> = seen
                .into_iter()
                .map(|(map, witness)| FusionMorphism { map, witness })
                .collect();
            homs.sort_by(|a, b| a.map.cmp(&b.map));
            hom_to_s.push(homs);
        }
        let classes = compute_classes(&subgroups, &sub_index, &hom_to_s);
        let fully_normalized =
            pick_fully_normalized(g, s, p, &subgroups, &classes);
        FusionSystem { g: g.clone(), s: s.clone(), p, subgroups, sub_index, hom_to_s, classes, fully_normalized }
    }

    pub fn group(&self) -> &Group {
        &self.g
    }

    pub fn sylow(&self) -> &Subgroup {
        &self.s
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// All subgroups of S, sorted by (order, element list).
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup_index(&self, sub: &Subgroup) -> Option<usize> {
        self.sub_index.get(sub.elements()).copied()
    }

    /// F(P, S).
    pub fn homs_to_sylow(&self, p_sub: &Subgroup) -> &[FusionMorphism] {
        let idx = self.subgroup_index(p_sub).expect("P must be a subgroup of S");
        &self.hom_to_s[idx]
    }

    /// F(P, Q): the restrictions c_g|_P with image inside Q.
    pub fn hom_set(&self, p_sub: &Subgroup, q_sub: &Subgroup) -> Vec<FusionMorphism> {
        self.homs_to_sylow(p_sub)
            .iter()
            .filter(|m| m.map.images().iter().all(|&v| q_sub.contains_index(v)))
            .cloned()
            .collect()
    }

    pub fn is_in_f(&self, phi: &Monomorphism) -> bool {
        let Some(idx) = self.sub_index.get(phi.domain()) else {
            return false;
        };
        self.hom_to_s[*idx].iter().any(|m| &m.map == phi)
    }

    /// Whether some F-monomorphism P → D exists.
    pub fn is_subconjugate(&self, p_sub: &Subgroup, d_sub: &Subgroup) -> bool {
        !self.hom_set(p_sub, d_sub).is_empty()
    }

    /// F-conjugacy classes as lists of indices into `subgroups()`.
    pub fn f_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// One fully normalized representative per F-class, parallel to
    /// `f_classes()`.
    pub fn fully_normalized_reps(&self) -> Vec<&Subgroup> {
        self.fully_normalized.iter().map(|&i| &self.subgroups[i]).collect()
    }

    /// The fully normalized representative of the class containing P.
    pub fn fully_normalized_rep_of(&self, p_sub: &Subgroup) -> &Subgroup {
        let idx = self.subgroup_index(p_sub).expect("P must be a subgroup of S");
        let class = self
            .classes
            .iter()
            .position(|c| c.contains(&idx))
            .expect("every subgroup lies in a class");
        &self.subgroups[self.fully_normalized[class]]
    }

    /// Whether (psi, Q) is F×F-subconjugate to the untwisted pair b,
    /// i.e. some χ ∈ F(Q, P) factors as χ' ∘ psi with χ' ∈ F(psi(Q), P).
    pub fn fxf_subconjugate(
        &self,
        a: &TwistedClass,
        b: &TwistedClass,
    ) -> Result<bool, FusionError> {
        if !b.phi.is_identity() {
            return Err(FusionError::ArgumentNotUntwisted);
        }
        let p_sub = &b.q;
        let psi = &a.phi;
        let image = Subgroup::from_elements(self.s.parent(), psi.image_sorted())
            .expect("image of a monomorphism is a subgroup");
        let into_p: Vec<Monomorphism> = self
            .hom_set(&a.q, p_sub)
            .into_iter()
            .map(|m| m.map)
            .collect();
        for chi_prime in self.hom_set(&image, p_sub) {
            let chi = chi_prime.map.compose(psi);
            if into_p.contains(&chi) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn compute_classes(
    subgroups: &[Subgroup],
    sub_index: &HashMap<Vec<usize>, usize>,
    hom_to_s: &[Vec<FusionMorphism>],
) -> Vec<Vec<usize>> {
    let n = subgroups.len();
    let mut cls = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if cls[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        let mut queue = VecDeque::new();
        cls[start] = id;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            members.push(i);
            for m in &hom_to_s[i] {
                let j = sub_index[&m.map.image_sorted()];
                if cls[j] == usize::MAX {
                    cls[j] = id;
                    queue.push_back(j);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    classes
}

fn pick_fully_normalized(
    g: &Group,
    s: &Subgroup,
    p: u64,
    subgroups: &[Subgroup],
    classes: &[Vec<usize>],
) -> Vec<usize> {
    classes
        .iter()
        .map(|class| {
            let rep = *class
                .iter()
                .max_by(|&&a, &&b| {
                    let na = s.normalizer_in(&subgroups[a]).order();
                    let nb = s.normalizer_in(&subgroups[b]).order();
                    // prefer larger S-normalizer; ties go to the
                    // lexicographically smaller subgroup
                    na.cmp(&nb).then_with(|| subgroups[b].cmp(&subgroups[a]))
                })
                .unwrap();
            let ns = s.normalizer_in(&subgroups[rep]).order() as u64;
            let ng = g.normalizer(&subgroups[rep]).unwrap().order() as u64;
            debug_assert_eq!(ns, p_part(ng, p), "representative must be fully normalized");
            rep
        })
        .collect()
}

/// A twisted diagonal subgroup (φ, Q) = {(φ(u), u)} ≤ S × S, tagged with
/// the id of its S×S-conjugacy class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistedClass {
    pub q: Subgroup,
    pub phi: Monomorphism,
    pub class_id: usize,
}

impl TwistedClass {
    pub fn order(&self) -> usize {
        self.q.order()
    }

    pub fn is_untwisted(&self) -> bool {
        self.phi.is_identity()
    }

    /// The element pairs (φ(u), u).
    pub fn pair_elements(&self) -> Vec<(usize, usize)> {
        self.q
            .elements()
            .iter()
            .map(|&u| (self.phi.apply(u).unwrap(), u))
            .collect()
    }
}

/// The full classification of twisted diagonal subgroups of S × S.
pub struct TwistedClasses {
    s: Subgroup,
    classes: Vec<TwistedClass>,
    class_of: HashMap<Monomorphism, usize>,
    orbit_sizes: Vec<usize>,
    total_pairs: usize,
    opposite: Vec<usize>,
}

impl TwistedClasses {
    /// Enumerates every pair (Q ≤ S, φ: Q ↪ S) and groups them into
    /// S×S-conjugacy classes udner (s1,s2)·(φ,Q) = (c_{s1}∘φ∘c_{s2}^{-1},
    /// c_{s2}(Q)). Classes are sorted by descending |Q|, then by the
    /// lexicographically smallest member, which is the representative.
    pub fn new(s: &Subgroup) -> TwistedClasses {
        let parent = s.parent().clone();
        let subgroups = s.all_subgroups().expect("S must be a p-group");
        let mut all_pairs: Vec<Monomorphism> = Vec::new();
        for q in &subgroups {
            for phi in injective_homs(q, s) {
                all_pairs.push(phi);
            }
        }
        let total_pairs = all_pairs.len();
        let mut orbit_of: HashMap<Monomorphism, usize> = HashMap::new();
        let mut orbits: Vec<(Monomorphism, usize)> = Vec::new(); // (min member, size)
        for start in &all_pairs {
            if orbit_of.contains_key(start) {
                continue;
            }
            let orbit_id = orbits.len();
            let mut members = vec![start.clone()];
            orbit_of.insert(start.clone(), orbit_id);
            let mut queue = VecDeque::new();
            queue.push_back(start.clone());
            while let Some(phi) = queue.pop_front() {
                for &s1 in s.elements() {
                    for &s2 in s.elements() {
                        let moved = conjugate_pair(&parent, &phi, s1, s2);
                        if !orbit_of.contains_key(&moved) {
                            orbit_of.insert(moved.clone(), orbit_id);
                            members.push(moved.clone());
                            queue.push_back(moved);
                        }
                    }
                }
            }
            let rep = members.iter().min().unwrap().clone();
            orbits.push((rep, members.len()));
        }
        // sort classes by (descending |Q|, lexicographic representative)
        let mut order: Vec<usize> = (0..orbits.len()).collect();
        order.sort_by(|&a, &b| {
            let (ra, _) = &orbits[a];
            let (rb, _) = &orbits[b];
            rb.domain().len().cmp(&ra.domain().len()).then_with(|| ra.cmp(rb))
        });
        let renumber: HashMap<usize, usize> =
            order.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut classes = Vec::with_capacity(orbits.len());
        let mut orbit_sizes = vec![0; orbits.len()];
        for (new_id, &old) in order.iter().enumerate() {
            let (rep, size) = &orbits[old];
            let q = Subgroup::from_elements(&parent, rep.domain().to_vec())
                .expect("domain of a pair is a subgroup");
            classes.push(TwistedClass { q, phi: rep.clone(), class_id: new_id });
            orbit_sizes[new_id] = *size;
        }
        let class_of: HashMap<Monomorphism, usize> = orbit_of
            .into_iter()
            .map(|(phi, old)| (phi, renumber[&old]))
            .collect();
        let opposite = classes
            .iter()
            .map(|c| class_of[&c.phi.inverse()])
            .collect();
        TwistedClasses { s: s.clone(), classes, class_of, orbit_sizes, total_pairs, opposite }
    }

    pub fn sylow(&self) -> &Subgroup {
        &self.s
    }

    pub fn classes(&self) -> &[TwistedClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_id_of(&self, phi: &Monomorphism) -> usize {
        *self
            .class_of
            .get(phi)
            .expect("every (Q ≤ S, φ: Q ↪ S) pair is classified")
    }

    /// Class of the untwisted pair (id, Q).
    pub fn untwisted_class_id(&self, q: &Subgroup) -> usize {
        self.class_id_of(&Monomorphism::identity_on(q))
    }

    /// Class id of the opposite pair (φ^{-1}, φ(Q)).
    pub fn opposite_class(&self, id: usize) -> usize {
        self.opposite[id]
    }

    /// Class of the one-point pair; always the last one.
    pub fn trivial_class_id(&self) -> usize {
        self.untwisted_class_id(&self.s.parent().trivial_subgroup())
    }

    pub fn orbit_size(&self, id: usize) -> usize {
        self.orbit_sizes[id]
    }

    pub fn total_pairs(&self) -> usize {
        self.total_pairs
    }
}

fn conjugate_pair(parent: &Group, phi: &Monomorphism, s1: usize, s2: usize) -> Monomorphism {
    let mut pairs: Vec<(usize, usize)> = phi
        .domain()
        .iter()
        .zip(phi.images())
        .map(|(&u, &v)| (parent.conj(s2, u), parent.conj(s1, v)))
        .collect();
    pairs.sort_unstable();
    let (domain, images) = pairs.into_iter().unzip();
    Monomorphism::from_map(domain, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::Perm;

    fn symmetric3() -> Group {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        Group::from_generators(3, &[a, b], 10).unwrap()
    }

    fn cyclic3() -> Group {
        let c = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        Group::from_generators(3, &[c], 5).unwrap()
    }

    fn alternating5() -> Group {
        let a = Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(5, &[&[2, 3, 4]]).unwrap();
        Group::from_generators(5, &[a, b], 100).unwrap()
    }

    fn symmetric4() -> Group {
        let a = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        Group::from_generators(4, &[a, b], 100).unwrap()
    }

    #[test]
    fn hom_set_from_trivial_subgroup() {
        let g = symmetric3();
        let s = g.sylow_subgroup(3);
        let f = FusionSystem::new(&g, &s, 3);
        let t = g.trivial_subgroup();
        assert_eq!(f.hom_set(&t, &s).len(), 1);
    }

    #[test]
    fn s3_fusion_on_c3_has_inversion() {
        let g = symmetric3();
        let s = g.sylow_subgroup(3);
        let f = FusionSystem::new(&g, &s, 3);
        let homs = f.hom_set(&s, &s);
        assert_eq!(homs.len(), 2);
        assert!(homs.iter().any(|m| m.map.is_identity()));
        let inv = homs.iter().find(|m| !m.map.is_identity()).unwrap();
        // the witness must be an involution outside C3 (a transposition)
        assert_eq!(g.element_order(inv.witness), 2);
    }

    #[test]
    fn a5_fuses_all_involutions_of_klein4() {
        let g = alternating5();
        let s = g.sylow_subgroup(2);
        let f = FusionSystem::new(&g, &s, 2);
        let inv = *s.elements().iter().find(|&&i| g.element_order(i) == 2).unwrap();
        let c2 = Subgroup::generated(&g, &[inv]);
        // all three inclusions up to target involution
        assert_eq!(f.hom_set(&c2, &s).len(), 3);
        // classes: trivial, the fused involutions, S itself
        assert_eq!(f.f_classes().len(), 3);
        let sizes: Vec<usize> = f.f_classes().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 3, 1]);
    }

    #[test]
    fn s4_keeps_the_two_kleins_of_d8_apart() {
        let g = symmetric4();
        let s = g.sylow_subgroup(2);
        let f = FusionSystem::new(&g, &s, 2);
        let kleins: Vec<&Subgroup> = f
            .subgroups()
            .iter()
            .filter(|sub| {
                sub.order() == 4
                    && sub.elements().iter().all(|&i| g.element_order(i) <= 2)
            })
            .collect();
        assert_eq!(kleins.len(), 2);
        assert!(!f.is_subconjugate(kleins[0], kleins[1]) || kleins[0] == kleins[1]);
        let ci = f.subgroup_index(kleins[0]).unwrap();
        let cj = f.subgroup_index(kleins[1]).unwrap();
        let same_class = f
            .f_classes()
            .iter()
            .any(|c| c.contains(&ci) && c.contains(&cj));
        assert!(!same_class);
    }

    #[test]
    fn fully_normalized_reps_satisfy_sylow_criterion() {
        for (g, p) in [(symmetric4(), 2), (alternating5(), 2), (symmetric3(), 3)] {
            let s = g.sylow_subgroup(p);
            let f = FusionSystem::new(&g, &s, p);
            for rep in f.fully_normalized_reps() {
                let ns = s.normalizer_in(rep).order() as u64;
                let ng = g.normalizer(rep).unwrap().order() as u64;
                assert_eq!(ns, p_part(ng, p));
                // maximal S-normalizer within the class
                let idx = f.subgroup_index(rep).unwrap();
                let class = f.f_classes().iter().find(|c| c.contains(&idx)).unwrap();
                for &other in class.iter() {
                    assert!(s.normalizer_in(&f.subgroups()[other]).order() as u64 <= ns);
                }
            }
        }
    }

    #[test]
    fn twisted_classes_of_trivial_sylow() {
        let g = symmetric3();
        let s = g.sylow_subgroup(5); // trivial
        let tc = TwistedClasses::new(&s);
        assert_eq!(tc.len(), 1);
        assert_eq!(tc.total_pairs(), 1);
    }

    #[test]
    fn twisted_classes_of_c3() {
        let g = cyclic3();
        let s = g.full_subgroup();
        let tc = TwistedClasses::new(&s);
        assert_eq!(tc.len(), 3);
        assert_eq!(tc.total_pairs(), 3);
        // descending order: two classes on C3 first, trivial last
        assert_eq!(tc.classes()[0].order(), 3);
        assert_eq!(tc.classes()[1].order(), 3);
        assert_eq!(tc.classes()[2].order(), 1);
        assert_eq!(tc.trivial_class_id(), 2);
    }

    #[test]
    fn twisted_classes_of_klein4() {
        let g = alternating5();
        let s = g.sylow_subgroup(2);
        let tc = TwistedClasses::new(&s);
        assert_eq!(tc.len(), 16);
        assert_eq!(tc.total_pairs(), 16); // S abelian: conjugation is trivial
        let sum: usize = (0..tc.len()).map(|i| tc.orbit_size(i)).sum();
        assert_eq!(sum, tc.total_pairs());
    }

    #[test]
    fn twisted_class_orbit_sizes_cover_all_pairs_for_d8() {
        let g = symmetric4();
        let s = g.sylow_subgroup(2);
        let tc = TwistedClasses::new(&s);
        assert_eq!(tc.total_pairs(), 60);
        let sum: usize = (0..tc.len()).map(|i| tc.orbit_size(i)).sum();
        assert_eq!(sum, 60);
    }

    #[test]
    fn opposite_is_an_involution_on_classes() {
        let g = symmetric4();
        let s = g.sylow_subgroup(2);
        let tc = TwistedClasses::new(&s);
        for i in 0..tc.len() {
            assert_eq!(tc.opposite_class(tc.opposite_class(i)), i);
        }
    }

    #[test]
    fn is_in_f_examples() {
        let s3 = symmetric3();
        let s = s3.sylow_subgroup(3);
        let f = FusionSystem::new(&s3, &s, 3);
        assert!(f.is_in_f(&Monomorphism::identity_on(&s)));
        let inversion = inversion_on(&s3, &s);
        assert!(f.is_in_f(&inversion));

        let c3 = cyclic3();
        let sc = c3.full_subgroup();
        let fc = FusionSystem::new(&c3, &sc, 3);
        let inversion = inversion_on(&c3, &sc);
        assert!(!fc.is_in_f(&inversion));
    }

    fn inversion_on(g: &Group, s: &Subgroup) -> Monomorphism {
        let images = s.elements().iter().map(|&u| g.inv(u)).collect();
        Monomorphism::from_map(s.elements().to_vec(), images)
    }

    #[test]
    fn fxf_subconjugacy_examples() {
        let s3 = symmetric3();
        let s = s3.sylow_subgroup(3);
        let f = FusionSystem::new(&s3, &s, 3);
        let tc = TwistedClasses::new(&s);
        let untwisted = TwistedClass {
            q: s.clone(),
            phi: Monomorphism::identity_on(&s),
            class_id: tc.untwisted_class_id(&s),
        };
        // (id, P) against itself
        assert_eq!(f.fxf_subconjugate(&untwisted, &untwisted), Ok(true));
        let inv = inversion_on(&s3, &s);
        let twisted = TwistedClass { q: s.clone(), phi: inv.clone(), class_id: tc.class_id_of(&inv) };
        assert_eq!(f.fxf_subconjugate(&twisted, &untwisted), Ok(true));

        // same data over the trivial fusion on C3: inversion is not in F
        let c3 = cyclic3();
        let sc = c3.full_subgroup();
        let fc = FusionSystem::new(&c3, &sc, 3);
        let tcc = TwistedClasses::new(&sc);
        let untwisted_c = TwistedClass {
            q: sc.clone(),
            phi: Monomorphism::identity_on(&sc),
            class_id: tcc.untwisted_class_id(&sc),
        };
        let inv_c = inversion_on(&c3, &sc);
        let twisted_c =
            TwistedClass { q: sc.clone(), phi: inv_c.clone(), class_id: tcc.class_id_of(&inv_c) };
        assert_eq!(fc.fxf_subconjugate(&twisted_c, &untwisted_c), Ok(false));
        // the reference pair must be untwisted
        assert_eq!(
            fc.fxf_subconjugate(&untwisted_c, &twisted_c),
            Err(FusionError::ArgumentNotUntwisted)
        );
    }
}

//! Finite permutation groups: element enumeration, word evaluation,
//! automorphism counting and nilpotency/solvability classification.

use crate::error::GroupError;
use crate::perm::Perm;
use crate::word::Word;
use std::collections::HashMap;
use std::sync::OnceLock;

pub const DEFAULT_ORDER_CEILING: usize = 10_000;

/// A finite group realized by permutation generators. Immutable after
/// construction; element enumeration memoizes behind a `OnceLock`.
#[derive(Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Perm>,
    elements: OnceLock<Result<Elements, GroupError>>,
}

/// Enumerated element set with index lookup and a BFS factorization of each
/// element as a word in the generators.
#[derive(Debug, Clone)]
pub struct Elements {
    pub elems: Vec<Perm>,
    pub index: HashMap<Perm, usize>,
    /// elems[i] as a product of generators: (generator index, inverted?)
    pub words: Vec<Vec<(usize, bool)>>,
    /// right multiplication by each generator, as index maps
    pub gen_action: Vec<Vec<usize>>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            name: self.name.clone(),
            degree: self.degree,
            generators: self.generators.clone(),
            elements: OnceLock::new(),
        }
    }
}

impl FiniteGroup {
    pub fn new(name: &str, degree: usize, generators: Vec<Perm>) -> Self {
        debug_assert!(generators.iter().all(|g| g.degree() == degree));
        FiniteGroup { name: name.to_string(), degree, generators, elements: OnceLock::new() }
    }

    pub fn trivial() -> Self {
        FiniteGroup::new("1", 1, vec![])
    }

    /// A finite presentation of this group on its own generators: the
    /// Schreier generators of the kernel of F_r -> G, read off the regular
    /// representation, serve as relators.
    pub fn presentation(&self) -> Result<crate::presentation::Presentation, GroupError> {
        use crate::presentation::Presentation;
        if self.generators.is_empty() {
            return Ok(Presentation::new(&self.name, &["a"], vec![Word::generator(0)])
                .expect("valid trivial presentation"));
        }
        let els = self.elements()?;
        let n = els.elems.len();
        let names: Vec<String> = (1..=self.generators.len()).map(|i| format!("g{i}")).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let free = std::sync::Arc::new(
            Presentation::new(&self.name, &name_refs, Vec::new())
                .expect("valid free presentation"),
        );
        // right regular representation; the identity sits at index 0
        let perms: Vec<Perm> = (0..self.generators.len())
            .map(|g| {
                Perm::from_images((0..n).map(|x| els.gen_action[g][x] as u32).collect())
            })
            .collect();
        let table = crate::coset::CosetTable::from_action(free, Vec::new(), &perms);
        let relators = table.schreier_generators();
        Ok(Presentation::new(&self.name, &name_refs, relators)
            .expect("valid regular-representation presentation"))
    }

    /// Breadth-first closure of the generators. Deterministic order:
    /// identity first, then BFS layers in generator order.
    pub fn elements_with_ceiling(&self, ceiling: usize) -> Result<&Elements, GroupError> {
        self.elements
            .get_or_init(|| enumerate(self.degree, &self.generators, ceiling))
            .as_ref()
            .map_err(|e| e.clone())
    }

    pub fn elements(&self) -> Result<&Elements, GroupError> {
        self.elements_with_ceiling(DEFAULT_ORDER_CEILING)
    }

    pub fn order(&self) -> Result<usize, GroupError> {
        Ok(self.elements()?.elems.len())
    }

    /// Product of generator images along `w`; identity for the empty word.
    /// `images` is indexed by generator index of the source presentation.
    pub fn evaluate_word(w: &Word, images: &[Perm], degree: usize) -> Result<Perm, GroupError> {
        let mut out = Perm::identity(degree);
        for &(g, e) in w.syllables() {
            let img = images.get(g).ok_or(GroupError::MissingImage { gen: g })?;
            if img.degree() != degree {
                return Err(GroupError::DegreeMismatch(img.degree(), degree));
            }
            out = out.compose(&img.pow(e));
        }
        Ok(out)
    }

    /// Number of bijective endomorphisms, by exhaustive search over images of
    /// the generating tuple with homomorphism verification on the Cayley graph.
    pub fn automorphism_count(&self) -> Result<u64, GroupError> {
        let els = self.elements()?;
        let n = els.elems.len();
        if n == 1 {
            return Ok(1);
        }
        let orders: Vec<usize> = els.elems.iter().map(|p| p.order()).collect();
        let gen_ids: Vec<usize> =
            self.generators.iter().map(|g| els.index[g]).collect();
        let mut count = 0u64;
        let mut images: Vec<usize> = Vec::with_capacity(gen_ids.len());
        self.aut_search(els, &orders, &gen_ids, &mut images, &mut count);
        Ok(count)
    }

    fn aut_search(
        &self,
        els: &Elements,
        orders: &[usize],
        gen_ids: &[usize],
        images: &mut Vec<usize>,
        count: &mut u64,
    ) {
        if images.len() == gen_ids.len() {
            if self.is_automorphism(els, gen_ids, images) {
                *count += 1;
            }
            return;
        }
        let want = orders[gen_ids[images.len()]];
        for cand in 0..els.elems.len() {
            if orders[cand] == want {
                images.push(cand);
                self.aut_search(els, orders, gen_ids, images, count);
                images.pop();
            }
        }
    }

    /// Check the candidate tuple extends to a bijective endomorphism.
    fn is_automorphism(&self, els: &Elements, gen_ids: &[usize], images: &[usize]) -> bool {
        let n = els.elems.len();
        // Surjectivity: images must generate (on a finite group this forces bijectivity).
        let img_perms: Vec<Perm> = images.iter().map(|&i| els.elems[i].clone()).collect();
        if closure_size(&img_perms, self.degree, n) != Some(n) {
            return false;
        }
        // Define phi on all elements via the BFS factorization words, then
        // verify phi(x * g) = phi(x) * phi(g) for every element x and
        // generator g; this checks every non-tree Cayley edge.
        let mut phi: Vec<usize> = Vec::with_capacity(n);
        for w in &els.words {
            let mut p = Perm::identity(self.degree);
            for &(gi, inv) in w {
                let im = &els.elems[images[gi]];
                p = if inv { p.compose(&im.inverse()) } else { p.compose(im) };
            }
            match els.index.get(&p) {
                Some(&i) => phi.push(i),
                None => return false,
            }
        }
        for x in 0..n {
            for (gi, _gid) in gen_ids.iter().enumerate() {
                let xg = els.gen_action[gi][x];
                let lhs = phi[xg];
                let rhs = els.index
                    [&els.elems[phi[x]].compose(&els.elems[images[gi]])];
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// (is_nilpotent, is_solvable) via lower central and derived series.
    pub fn classify(&self) -> Result<(bool, bool), GroupError> {
        let els = self.elements()?;
        let nilpotent = self.lower_central_reaches_trivial(els);
        let solvable = self.derived_reaches_trivial(els);
        Ok((nilpotent, solvable))
    }

    fn gen_ids(&self, els: &Elements) -> Vec<usize> {
        self.generators.iter().map(|g| els.index[g]).collect()
    }

    fn derived_reaches_trivial(&self, els: &Elements) -> bool {
        let mut gens = self.gen_ids(els);
        loop {
            let sub = derived_subgroup_gens(els, &gens);
            let size = subgroup_closure(els, &sub).len();
            if size == 1 {
                return true;
            }
            let prev = subgroup_closure(els, &gens).len();
            if size == prev {
                return false; // perfect stage
            }
            gens = sub;
        }
    }

    fn lower_central_reaches_trivial(&self, els: &Elements) -> bool {
        let whole = self.gen_ids(els);
        let mut gens = whole.clone();
        loop {
            // gamma_{k+1} = normal closure in G of [gamma_k gens, G gens]
            let mut comms = Vec::new();
            for &a in &gens {
                for &g in &whole {
                    let c = Perm::commutator(&els.elems[a], &els.elems[g]);
                    let ci = els.index[&c];
                    if ci != 0 {
                        comms.push(ci);
                    }
                }
            }
            let next = normal_closure_gens(els, &whole, &comms);
            let size = subgroup_closure(els, &next).len();
            if size == 1 {
                return true;
            }
            let prev = subgroup_closure(els, &gens).len();
            if size == prev {
                return false;
            }
            gens = next;
        }
    }

    /// Upper central series oracle for nilpotency, used as an independent
    /// cross-check of `classify`.
    pub fn nilpotent_by_center_iteration(&self) -> Result<bool, GroupError> {
        let els = self.elements()?;
        let n = els.elems.len();
        let gen_ids = self.gen_ids(els);
        let mut z: Vec<bool> = vec![false; n];
        z[0] = true;
        loop {
            let mut next = z.clone();
            let mut grew = false;
            for x in 0..n {
                if next[x] {
                    continue;
                }
                let ok = gen_ids.iter().all(|&g| {
                    let c = Perm::commutator(&els.elems[x], &els.elems[g]);
                    z[els.index[&c]]
                });
                if ok {
                    next[x] = true;
                    grew = true;
                }
            }
            // close the candidate set into a subgroup
            let ids: Vec<usize> = (0..n).filter(|&i| next[i]).collect();
            let closed = subgroup_closure(els, &ids);
            for &i in &closed {
                if !next[i] {
                    next[i] = true;
                    grew = true;
                }
            }
            if next.iter().all(|&b| b) {
                return Ok(true);
            }
            if !grew {
                return Ok(false);
            }
            z = next;
        }
    }
}

fn enumerate(degree: usize, generators: &[Perm], ceiling: usize) -> Result<Elements, GroupError> {
    let id = Perm::identity(degree);
    let mut elems = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0usize);
    let mut words: Vec<Vec<(usize, bool)>> = vec![Vec::new()];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &ei in &frontier {
            for (gi, g) in generators.iter().enumerate() {
                let p = elems[ei].compose(g);
                if !index.contains_key(&p) {
                    if elems.len() >= ceiling {
                        return Err(GroupError::CeilingExceeded {
                            order: elems.len() + 1,
                            ceiling,
                        });
                    }
                    let mut w = words[ei].clone();
                    w.push((gi, false));
                    index.insert(p.clone(), elems.len());
                    next.push(elems.len());
                    elems.push(p);
                    words.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut gen_action = Vec::with_capacity(generators.len());
    for g in generators {
        gen_action.push(elems.iter().map(|e| index[&e.compose(g)]).collect());
    }
    Ok(Elements { elems, index, words, gen_action })
}

/// Size of the closure of `perms`, bailing out above `cap`. None if cap exceeded.
pub fn closure_size(perms: &[Perm], degree: usize, cap: usize) -> Option<usize> {
    let id = Perm::identity(degree);
    let mut set = std::collections::HashSet::new();
    set.insert(id);
    let mut frontier: Vec<Perm> = set.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        for g in perms {
            let q = p.compose(g);
            if !set.contains(&q) {
                if set.len() >= cap + 1 {
                    return None;
                }
                set.insert(q.clone());
                frontier.push(q);
            }
        }
    }
    Some(set.len())
}

/// Closure of the given element ids under multiplication, as a sorted id list.
pub fn subgroup_closure(els: &Elements, gens: &[usize]) -> Vec<usize> {
    let mut in_set = vec![false; els.elems.len()];
    in_set[0] = true;
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = els.index[&els.elems[x].compose(&els.elems[g])];
            if !in_set[y] {
                in_set[y] = true;
                frontier.push(y);
            }
        }
    }
    (0..els.elems.len()).filter(|&i| in_set[i]).collect()
}

/// Generators of the derived subgroup of the subgroup generated by `gens`:
/// commutators of the generators, normally closed inside that subgroup.
fn derived_subgroup_gens(els: &Elements, gens: &[usize]) -> Vec<usize> {
    let mut comms = Vec::new();
    for &a in gens {
        for &b in gens {
            let c = Perm::commutator(&els.elems[a], &els.elems[b]);
            let ci = els.index[&c];
            if ci != 0 {
                comms.push(ci);
            }
        }
    }
    normal_closure_gens(els, gens, &comms)
}

/// Generating set for the normal closure of `seed` under conjugation by `conj_gens`.
fn normal_closure_gens(els: &Elements, conj_gens: &[usize], seed: &[usize]) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut stack: Vec<usize> = seed.to_vec();
    while let Some(x) = stack.pop() {
        if !seen.insert(x) {
            continue;
        }
        gens.push(x);
        for &g in conj_gens {
            let gp = &els.elems[g];
            let conj = gp.inverse().compose(&els.elems[x]).compose(gp);
            let ci = els.index[&conj];
            if ci != 0 && !seen.contains(&ci) {
                stack.push(ci);
            }
        }
    }
    gens.sort_unstable();
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_named_group;

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::trivial();
        assert_eq!(g.order().unwrap(), 1);
    }

    #[test]
    fn q8_element_orders() {
        let q8 = make_named_group("Q8").unwrap();
        let els = q8.elements().unwrap();
        assert_eq!(els.elems.len(), 8);
        let order4 = els.elems.iter().filter(|p| p.order() == 4).count();
        assert_eq!(order4, 6);
    }

    #[test]
    fn d9_reflections() {
        let d9 = make_named_group("D9").unwrap();
        let els = d9.elements().unwrap();
        assert_eq!(els.elems.len(), 18);
        let invol = els.elems.iter().filter(|p| p.order() == 2).count();
        assert_eq!(invol, 9);
    }

    #[test]
    fn ceiling_enforced() {
        let s3 = make_named_group("S3").unwrap();
        let e = s3.elements_with_ceiling(4).unwrap_err();
        assert!(matches!(e, GroupError::CeilingExceeded { .. }));
    }

    #[test]
    fn evaluate_word_examples() {
        // empty word
        let id = FiniteGroup::evaluate_word(&Word::identity(), &[], 3).unwrap();
        assert!(id.is_identity());
        // a^2 with a = (1 2 3) gives (1 3 2)
        let a = Perm::from_cycles(3, &[&[0, 1, 2]]);
        let sq = FiniteGroup::evaluate_word(&Word::power(0, 2), &[a.clone()], 3).unwrap();
        assert_eq!(sq, Perm::from_cycles(3, &[&[0, 2, 1]]));
        // S3 relators vanish under the defining images
        let p = crate::presentation::parse_presentation("S3", "< a, b | a^2, b^3, (a*b)^2 >")
            .unwrap();
        let ia = Perm::from_cycles(3, &[&[0, 1]]);
        let ib = Perm::from_cycles(3, &[&[0, 1, 2]]);
        for r in &p.relators {
            assert!(FiniteGroup::evaluate_word(r, &[ia.clone(), ib.clone()], 3)
                .unwrap()
                .is_identity());
        }
        // missing image
        let e = FiniteGroup::evaluate_word(&Word::generator(2), &[a], 3).unwrap_err();
        assert!(matches!(e, GroupError::MissingImage { gen: 2 }));
    }

    #[test]
    fn aut_counts() {
        assert_eq!(make_named_group("Z8").unwrap().automorphism_count().unwrap(), 4);
        assert_eq!(make_named_group("S3").unwrap().automorphism_count().unwrap(), 6);
        assert_eq!(make_named_group("Q8").unwrap().automorphism_count().unwrap(), 24);
    }

    #[test]
    fn classification_examples() {
        let q8 = make_named_group("Q8").unwrap();
        assert_eq!(q8.classify().unwrap(), (true, true));
        let s3 = make_named_group("S3").unwrap();
        assert_eq!(s3.classify().unwrap(), (false, true));
        let a4 = make_named_group("A4").unwrap();
        assert_eq!(a4.classify().unwrap(), (false, true));
        let a5 = make_named_group("A5").unwrap();
        assert_eq!(a5.classify().unwrap(), (false, false));
    }

    #[test]
    fn nilpotency_agrees_with_center_iteration() {
        for name in ["S3", "A4", "Q8", "D8", "D9", "G27", "Z12", "AGL1F8"] {
            let g = make_named_group(name).unwrap();
            assert_eq!(
                g.classify().unwrap().0,
                g.nilpotent_by_center_iteration().unwrap(),
                "mismatch for {name}"
            );
        }
    }
}

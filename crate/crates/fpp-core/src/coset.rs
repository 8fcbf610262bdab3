//! Todd-Coxeter coset enumeration (HLT relator scanning, with a Felsch-style
//! definition ordering behind a flag), coset tables, and subgroup intersection
//! through the product action.

use crate::error::CosetError;
use crate::perm::Perm;
use crate::presentation::Presentation;
use crate::word::Word;
use std::collections::VecDeque;
use std::sync::Arc;

pub const DEFAULT_COSET_LIMIT: usize = 1_000_000;

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Hlt,
    Felsch,
}

/// A complete, standardized coset table: the action of the presentation's
/// generators on the cosets of a finitely generated subgroup. Coset 0 is the
/// subgroup itself and the numbering is breadth-first from it, so equal
/// subgroups produce identical tables.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub presentation: Arc<Presentation>,
    pub subgroup_words: Vec<Word>,
    index: usize,
    /// forward[g][c] = image of coset c under generator g
    forward: Vec<Vec<u32>>,
    /// backward[g][c] = image of coset c under the inverse of generator g
    backward: Vec<Vec<u32>>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn generator_perm(&self, g: usize) -> Perm {
        Perm::from_images(self.forward[g].clone())
    }

    /// The transitive permutation representation of degree = index.
    pub fn permutation_representation(&self) -> Vec<Perm> {
        (0..self.presentation.rank()).map(|g| self.generator_perm(g)).collect()
    }

    pub fn apply(&self, coset: u32, gen: usize, sign: i8) -> u32 {
        if sign > 0 {
            self.forward[gen][coset as usize]
        } else {
            self.backward[gen][coset as usize]
        }
    }

    pub fn apply_word(&self, coset: u32, w: &Word) -> u32 {
        let mut c = coset;
        for (g, s) in w.letters() {
            c = self.apply(c, g, s);
        }
        c
    }

    pub fn word_perm(&self, w: &Word) -> Perm {
        Perm::from_images((0..self.index as u32).map(|c| self.apply_word(c, w)).collect())
    }

    /// Breadth-first Schreier transversal: a coset representative word per coset.
    pub fn transversal(&self) -> Vec<Word> {
        let n = self.index;
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0u32]);
        while let Some(c) = queue.pop_front() {
            let base = words[c as usize].clone().unwrap();
            for g in 0..self.presentation.rank() {
                for s in [1i8, -1] {
                    let d = self.apply(c, g, s);
                    if words[d as usize].is_none() {
                        words[d as usize] =
                            Some(base.concat(&Word::power(g, s as i64)));
                        queue.push_back(d);
                    }
                }
            }
        }
        words.into_iter().map(|w| w.unwrap()).collect()
    }

    /// Schreier generators u_c * g * u_{c·g}^-1 for all non-tree (coset, generator)
    /// pairs; they generate the subgroup (the stabilizer of coset 0).
    pub fn schreier_generators(&self) -> Vec<Word> {
        let tr = self.transversal();
        let mut out = Vec::new();
        for c in 0..self.index as u32 {
            for g in 0..self.presentation.rank() {
                let d = self.apply(c, g, 1);
                let w = tr[c as usize]
                    .concat(&Word::generator(g))
                    .concat(&tr[d as usize].inverse());
                if !w.is_identity() {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Pairs (coset, generator, schreier word) for every non-tree edge, in a
    /// deterministic order. Tree edges yield freely trivial words and are skipped.
    pub fn schreier_pairs(&self) -> Vec<(u32, usize, Word)> {
        let tr = self.transversal();
        let mut out = Vec::new();
        for c in 0..self.index as u32 {
            for g in 0..self.presentation.rank() {
                let d = self.apply(c, g, 1);
                let w = tr[c as usize]
                    .concat(&Word::generator(g))
                    .concat(&tr[d as usize].inverse());
                if !w.is_identity() {
                    out.push((c, g, w));
                }
            }
        }
        out
    }

    /// The subgroup is normal iff every Schreier generator acts trivially on
    /// the cosets (equivalently all point stabilizers coincide).
    pub fn is_normal(&self) -> bool {
        self.schreier_generators().iter().all(|w| self.word_perm(w).is_identity())
    }

    /// Number of cosets c whose stabilizer equals the stabilizer of coset 0,
    /// i.e. |N(H)/H|. The conjugacy class of the subgroup has index/self_count
    /// members.
    pub fn normalizer_quotient_order(&self) -> usize {
        let gens = self.schreier_generators();
        let perms: Vec<Perm> = gens.iter().map(|w| self.word_perm(w)).collect();
        (0..self.index as u32)
            .filter(|&c| perms.iter().all(|p| p.apply(c) == c))
            .count()
    }

    /// Flattened forward table; equal subgroups give equal values.
    pub fn canonical_form(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.index * self.presentation.rank());
        for c in 0..self.index {
            for g in 0..self.presentation.rank() {
                out.push(self.forward[g][c]);
            }
        }
        out
    }

    /// Minimum of the standardized flattened table over all base points;
    /// conjugate subgroups (of the same presentation) give equal values.
    pub fn conjugacy_invariant(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for base in 0..self.index as u32 {
            let cand = self.standardized_from(base);
            if best.as_ref().is_none_or(|b| &cand < b) {
                best = Some(cand);
            }
        }
        best.unwrap()
    }

    fn standardized_from(&self, base: u32) -> Vec<u32> {
        let n = self.index;
        let r = self.presentation.rank();
        let mut old_to_new = vec![UNDEF; n];
        let mut new_to_old = Vec::with_capacity(n);
        old_to_new[base as usize] = 0;
        new_to_old.push(base);
        let mut head = 0;
        while head < new_to_old.len() {
            let c = new_to_old[head];
            head += 1;
            for g in 0..r {
                for s in [1i8, -1] {
                    let d = self.apply(c, g, s);
                    if old_to_new[d as usize] == UNDEF {
                        old_to_new[d as usize] = new_to_old.len() as u32;
                        new_to_old.push(d);
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(n * r);
        for &c in &new_to_old {
            for g in 0..r {
                out.push(old_to_new[self.forward[g][c as usize] as usize]);
            }
        }
        out
    }

    /// Rebuild this table renumbered from `base`; the result represents the
    /// conjugate subgroup fixing the coset that was numbered `base`.
    pub fn rebased(&self, base: u32) -> CosetTable {
        let n = self.index;
        let r = self.presentation.rank();
        let mut old_to_new = vec![UNDEF; n];
        let mut new_to_old = Vec::with_capacity(n);
        old_to_new[base as usize] = 0;
        new_to_old.push(base);
        let mut head = 0;
        while head < new_to_old.len() {
            let c = new_to_old[head];
            head += 1;
            for g in 0..r {
                for s in [1i8, -1] {
                    let d = self.apply(c, g, s);
                    if old_to_new[d as usize] == UNDEF {
                        old_to_new[d as usize] = new_to_old.len() as u32;
                        new_to_old.push(d);
                    }
                }
            }
        }
        let mut forward = vec![vec![0u32; n]; r];
        for g in 0..r {
            for (new_c, &old_c) in new_to_old.iter().enumerate() {
                forward[g][new_c] = old_to_new[self.forward[g][old_c as usize] as usize];
            }
        }
        let backward = invert_tables(&forward);
        let mut t = CosetTable {
            presentation: self.presentation.clone(),
            subgroup_words: Vec::new(),
            index: n,
            forward,
            backward,
        };
        t.subgroup_words = t.schreier_generators();
        t
    }

    /// Verify the defining invariants; used by tests.
    pub fn check_invariants(&self) -> bool {
        let relators_ok = self
            .presentation
            .relators
            .iter()
            .all(|r| self.word_perm(r).is_identity());
        let subgroup_ok = self.subgroup_words.iter().all(|w| self.apply_word(0, w) == 0);
        let transitive = {
            let mut seen = vec![false; self.index];
            let mut stack = vec![0u32];
            seen[0] = true;
            let mut count = 1;
            while let Some(c) = stack.pop() {
                for g in 0..self.presentation.rank() {
                    let d = self.forward[g][c as usize];
                    if !seen[d as usize] {
                        seen[d as usize] = true;
                        count += 1;
                        stack.push(d);
                    }
                }
            }
            count == self.index
        };
        relators_ok && subgroup_ok && transitive
    }

    /// Build a table directly from per-generator permutations of an already
    /// transitive action with base point 0; standardizes the numbering.
    pub fn from_action(
        presentation: Arc<Presentation>,
        subgroup_words: Vec<Word>,
        perms: &[Perm],
    ) -> CosetTable {
        let n = perms.first().map(|p| p.degree()).unwrap_or(1);
        let forward: Vec<Vec<u32>> = perms.iter().map(|p| p.images().to_vec()).collect();
        let backward = invert_tables(&forward);
        let raw = CosetTable { presentation, subgroup_words, index: n, forward, backward };
        let mut std = raw.rebased(0);
        std.subgroup_words = raw.subgroup_words.clone();
        if std.subgroup_words.is_empty() {
            std.subgroup_words = std.schreier_generators();
        }
        std
    }
}

fn invert_tables(forward: &[Vec<u32>]) -> Vec<Vec<u32>> {
    forward
        .iter()
        .map(|f| {
            let mut b = vec![0u32; f.len()];
            for (i, &v) in f.iter().enumerate() {
                b[v as usize] = i as u32;
            }
            b
        })
        .collect()
}

/// Enumerate the cosets of the subgroup generated by `subgroup_words`.
pub fn enumerate_cosets(
    presentation: &Arc<Presentation>,
    subgroup_words: &[Word],
    limit: usize,
    strategy: Strategy,
) -> Result<CosetTable, CosetError> {
    if limit < 1 {
        return Err(CosetError::LimitExceeded { limit });
    }
    let mut e = Enumerator::new(presentation.rank(), limit);
    let relators: Vec<Vec<usize>> = presentation
        .relators
        .iter()
        .map(|r| word_cols(&r.cyclically_reduced()))
        .filter(|w| !w.is_empty())
        .collect();
    let subgroups: Vec<Vec<usize>> = subgroup_words
        .iter()
        .map(|w| word_cols(w))
        .filter(|w| !w.is_empty())
        .collect();
    match strategy {
        Strategy::Hlt => e.run_hlt(&relators, &subgroups)?,
        Strategy::Felsch => e.run_felsch(&relators, &subgroups)?,
    }
    Ok(e.into_table(presentation.clone(), subgroup_words.to_vec()))
}

/// Coset table of H ∩ K from the diagonal orbit of (coset of H, coset of K)
/// under the product action. The returned table's subgroup words are its
/// Schreier generators.
pub fn intersect_subgroups(
    presentation: &Arc<Presentation>,
    h_words: &[Word],
    k_words: &[Word],
    limit: usize,
) -> Result<CosetTable, CosetError> {
    let th = enumerate_cosets(presentation, h_words, limit, Strategy::Hlt)?;
    let tk = enumerate_cosets(presentation, k_words, limit, Strategy::Hlt)?;
    Ok(intersect_tables(&th, &tk))
}

/// Intersection of the two point stabilizers of already-computed tables.
pub fn intersect_tables(th: &CosetTable, tk: &CosetTable) -> CosetTable {
    let r = th.presentation.rank();
    let nk = tk.index() as u64;
    let key = |a: u32, b: u32| -> u64 { a as u64 * nk + b as u64 };
    let mut ids = std::collections::HashMap::new();
    let mut pairs = vec![(0u32, 0u32)];
    ids.insert(key(0, 0), 0u32);
    let mut head = 0;
    while head < pairs.len() {
        let (a, b) = pairs[head];
        head += 1;
        for g in 0..r {
            let na = th.apply(a, g, 1);
            let nb = tk.apply(b, g, 1);
            ids.entry(key(na, nb)).or_insert_with(|| {
                pairs.push((na, nb));
                (pairs.len() - 1) as u32
            });
        }
    }
    let n = pairs.len();
    let mut forward = vec![vec![0u32; n]; r];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (g, fwd) in forward.iter_mut().enumerate() {
            fwd[i] = ids[&key(th.apply(a, g, 1), tk.apply(b, g, 1))];
        }
    }
    let perms: Vec<Perm> = forward.into_iter().map(Perm::from_images).collect();
    CosetTable::from_action(th.presentation.clone(), Vec::new(), &perms)
}

fn word_cols(w: &Word) -> Vec<usize> {
    w.letters()
        .into_iter()
        .map(|(g, s)| if s > 0 { 2 * g } else { 2 * g + 1 })
        .collect()
}

#[inline]
fn inv_col(c: usize) -> usize {
    c ^ 1
}

struct Enumerator {
    cols: usize,
    tab: Vec<u32>,
    p: Vec<u32>,
    ncos: usize,
    limit: usize,
}

impl Enumerator {
    fn new(rank: usize, limit: usize) -> Self {
        let cols = 2 * rank.max(1);
        Enumerator { cols, tab: vec![UNDEF; cols], p: vec![0], ncos: 1, limit }
    }

    fn find(&mut self, a: u32) -> u32 {
        let mut x = a;
        while self.p[x as usize] != x {
            let parent = self.p[x as usize];
            self.p[x as usize] = self.p[parent as usize];
            x = self.p[x as usize];
        }
        x
    }

    #[inline]
    fn raw(&self, a: u32, c: usize) -> u32 {
        self.tab[a as usize * self.cols + c]
    }

    #[inline]
    fn raw_set(&mut self, a: u32, c: usize, v: u32) {
        self.tab[a as usize * self.cols + c] = v;
    }

    fn get(&mut self, a: u32, c: usize) -> u32 {
        let t = self.raw(a, c);
        if t == UNDEF {
            UNDEF
        } else {
            self.find(t)
        }
    }

    fn alloc(&mut self) -> Result<u32, CosetError> {
        if self.ncos >= self.limit {
            return Err(CosetError::LimitExceeded { limit: self.limit });
        }
        let id = self.ncos as u32;
        self.ncos += 1;
        self.p.push(id);
        self.tab.extend(std::iter::repeat_n(UNDEF, self.cols));
        Ok(id)
    }

    fn define(&mut self, a: u32, c: usize) -> Result<u32, CosetError> {
        let b = self.alloc()?;
        self.raw_set(a, c, b);
        self.raw_set(b, inv_col(c), a);
        Ok(b)
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut VecDeque<u32>) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.p[drop as usize] = keep;
        queue.push_back(drop);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = VecDeque::new();
        self.merge(a, b, &mut queue);
        while let Some(y) = queue.pop_front() {
            for c in 0..self.cols {
                let d = self.raw(y, c);
                if d == UNDEF {
                    continue;
                }
                self.raw_set(d, inv_col(c), UNDEF);
                let mu = self.find(y);
                let nu = self.find(d);
                let mu_c = self.raw(mu, c);
                if mu_c != UNDEF {
                    self.merge(nu, mu_c, &mut queue);
                } else {
                    let nu_ic = self.raw(nu, inv_col(c));
                    if nu_ic != UNDEF {
                        self.merge(mu, nu_ic, &mut queue);
                    } else {
                        self.raw_set(mu, c, nu);
                        self.raw_set(nu, inv_col(c), mu);
                    }
                }
            }
        }
    }

    /// Set the edge a --c--> b, triggering coincidences on conflicts.
    fn set_edge(&mut self, a: u32, c: usize, b: u32) {
        let ta = self.get(a, c);
        if ta != UNDEF {
            if ta != b {
                self.coincidence(ta, b);
            }
            return;
        }
        let tb = self.get(b, inv_col(c));
        if tb != UNDEF {
            if tb != a {
                self.coincidence(tb, a);
            }
            return;
        }
        self.raw_set(a, c, b);
        self.raw_set(b, inv_col(c), a);
    }

    /// Scan `word` at coset `a`; with `fill`, define new cosets to complete
    /// the scan (HLT); without, only record forced deductions (Felsch).
    fn scan(&mut self, a: u32, word: &[usize], fill: bool) -> Result<(), CosetError> {
        let mut f = self.find(a);
        let mut b = f;
        let mut i = 0usize;
        let mut j = word.len();
        loop {
            while i < j {
                let t = self.get(f, word[i]);
                if t == UNDEF {
                    break;
                }
                f = t;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let t = self.get(b, inv_col(word[j - 1]));
                if t == UNDEF {
                    break;
                }
                b = t;
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            if j == i + 1 {
                self.set_edge(f, word[i], b);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            f = self.define(f, word[i])?;
            i += 1;
        }
    }

    fn alive(&mut self, a: u32) -> bool {
        self.find(a) == a
    }

    fn run_hlt(&mut self, relators: &[Vec<usize>], subgroups: &[Vec<usize>]) -> Result<(), CosetError> {
        for w in subgroups {
            self.scan(0, w, true)?;
        }
        let mut alpha: u32 = 0;
        while (alpha as usize) < self.ncos {
            if !self.alive(alpha) {
                alpha += 1;
                continue;
            }
            for r in relators {
                if !self.alive(alpha) {
                    break;
                }
                self.scan(alpha, r, true)?;
            }
            if self.alive(alpha) {
                for c in 0..self.cols {
                    if self.get(alpha, c) == UNDEF {
                        self.define(alpha, c)?;
                    }
                }
            }
            alpha += 1;
        }
        Ok(())
    }

    fn run_felsch(
        &mut self,
        relators: &[Vec<usize>],
        subgroups: &[Vec<usize>],
    ) -> Result<(), CosetError> {
        for w in subgroups {
            self.scan(0, w, true)?;
        }
        loop {
            // propagate deductions to a fixpoint
            loop {
                let before = self.snapshot_signature();
                let ncos = self.ncos as u32;
                for a in 0..ncos {
                    if !self.alive(a) {
                        continue;
                    }
                    for r in relators {
                        if !self.alive(a) {
                            break;
                        }
                        self.scan(a, r, false)?;
                    }
                }
                for w in subgroups {
                    self.scan(0, w, false)?;
                }
                if self.snapshot_signature() == before {
                    break;
                }
            }
            // first undefined entry in row-major order over live cosets
            let mut next: Option<(u32, usize)> = None;
            'outer: for a in 0..self.ncos as u32 {
                if !self.alive(a) {
                    continue;
                }
                for c in 0..self.cols {
                    if self.get(a, c) == UNDEF {
                        next = Some((a, c));
                        break 'outer;
                    }
                }
            }
            match next {
                Some((a, c)) => {
                    self.define(a, c)?;
                }
                None => return Ok(()),
            }
        }
    }

    fn snapshot_signature(&self) -> (usize, u64) {
        let defined = self.tab.iter().filter(|&&v| v != UNDEF).count();
        let live = self.p.iter().enumerate().filter(|&(i, &v)| i as u32 == v).count();
        (defined, live as u64)
    }

    fn into_table(mut self, presentation: Arc<Presentation>, subgroup_words: Vec<Word>) -> CosetTable {
        // compact live cosets, then standardize by BFS from the subgroup coset
        let reps: Vec<u32> = (0..self.ncos as u32).filter(|&i| self.p[i as usize] == i).collect();
        let mut live_id = vec![UNDEF; self.ncos];
        for (i, &r) in reps.iter().enumerate() {
            live_id[r as usize] = i as u32;
        }
        let n = reps.len();
        let rank = self.cols / 2;
        let mut forward = vec![vec![UNDEF; n]; rank];
        let mut backward = vec![vec![UNDEF; n]; rank];
        for (i, &r) in reps.iter().enumerate() {
            for g in 0..rank {
                let t = self.get(r, 2 * g);
                debug_assert_ne!(t, UNDEF, "incomplete table");
                forward[g][i] = live_id[t as usize];
                let t = self.get(r, 2 * g + 1);
                backward[g][i] = live_id[t as usize];
            }
        }
        let raw = CosetTable {
            presentation: presentation.clone(),
            subgroup_words: subgroup_words.clone(),
            index: n,
            forward,
            backward,
        };
        let mut std = raw.rebased(live_id[self.find(0) as usize]);
        std.subgroup_words = subgroup_words;
        std
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn pres(text: &str) -> Arc<Presentation> {
        Arc::new(parse_presentation("T", text).unwrap())
    }

    fn enumerate(p: &Arc<Presentation>, sub: &[Word], strategy: Strategy) -> CosetTable {
        enumerate_cosets(p, sub, 10_000, strategy).unwrap()
    }

    #[test]
    fn cyclic_five() {
        for strat in [Strategy::Hlt, Strategy::Felsch] {
            let p = pres("< a | a^5 >");
            let t = enumerate(&p, &[], strat);
            assert_eq!(t.index(), 5);
            assert!(t.check_invariants());
        }
    }

    #[test]
    fn s3_subgroup_and_full() {
        let p = pres("< a, b | a^2, b^3, (a*b)^2 >");
        let sub = vec![p.parse_word("b").unwrap()];
        for strat in [Strategy::Hlt, Strategy::Felsch] {
            let t = enumerate_cosets(&p, &sub, 1000, strat).unwrap();
            assert_eq!(t.index(), 2);
            let t_triv = enumerate_cosets(&p, &[], 1000, strat).unwrap();
            assert_eq!(t_triv.index(), 6);
            assert!(t_triv.check_invariants());
        }
    }

    #[test]
    fn index_one_table() {
        let p = pres("< a, b | a, b >");
        let t = enumerate(&p, &[], Strategy::Hlt);
        assert_eq!(t.index(), 1);
        for g in 0..2 {
            assert!(t.generator_perm(g).is_identity());
        }
    }

    #[test]
    fn regular_representation_of_s3() {
        let p = pres("< a, b | a^2, b^3, (a*b)^2 >");
        let t = enumerate(&p, &[], Strategy::Hlt);
        let perms = t.permutation_representation();
        assert_eq!(perms.len(), 2);
        assert_eq!(perms[0].degree(), 6);
        // regular action: no nontrivial generator fixes a point
        assert!(perms[0].images().iter().enumerate().all(|(i, &v)| i as u32 != v));
        for r in &p.relators {
            assert!(t.word_perm(r).is_identity());
        }
    }

    #[test]
    fn free_group_degree_two() {
        // words with even b-exponent form an index-2 subgroup of F_2
        let p = pres("< a, b | >");
        let sub = vec![
            p.parse_word("a").unwrap(),
            p.parse_word("b^2").unwrap(),
            p.parse_word("b*a*b^-1").unwrap(),
        ];
        let t = enumerate(&p, &sub, Strategy::Hlt);
        assert_eq!(t.index(), 2);
        assert!(t.generator_perm(0).is_identity());
        assert_eq!(t.generator_perm(1), Perm::from_cycles(2, &[&[0, 1]]));
    }

    #[test]
    fn limit_exceeded() {
        let p = pres("< a, b | >");
        let e = enumerate_cosets(&p, &[], 100, Strategy::Hlt).unwrap_err();
        assert!(matches!(e, CosetError::LimitExceeded { .. }));
    }

    #[test]
    fn intersection_in_free_group() {
        // even b-exponent (index 2) meets even a-exponent (index 2) in index 4
        let p = pres("< a, b | >");
        let h = vec![
            p.parse_word("a").unwrap(),
            p.parse_word("b^2").unwrap(),
            p.parse_word("b*a*b^-1").unwrap(),
        ];
        let k = vec![
            p.parse_word("b").unwrap(),
            p.parse_word("a^2").unwrap(),
            p.parse_word("a*b*a^-1").unwrap(),
        ];
        let t = intersect_subgroups(&p, &h, &k, 1000).unwrap();
        assert_eq!(t.index(), 4);
        assert!(t.check_invariants());
        // symmetry
        let t2 = intersect_subgroups(&p, &k, &h, 1000).unwrap();
        assert_eq!(t2.index(), 4);
        assert_eq!(t.conjugacy_invariant().len(), t2.conjugacy_invariant().len());
    }

    #[test]
    fn intersection_idempotent() {
        let p = pres("< a, b | a^2, b^3, (a*b)^2 >");
        let h = vec![p.parse_word("b").unwrap()];
        let t = intersect_subgroups(&p, &h, &h, 1000).unwrap();
        let th = enumerate(&p, &h, Strategy::Hlt);
        assert_eq!(t.index(), th.index());
        assert_eq!(t.canonical_form(), th.canonical_form());
    }

    #[test]
    fn normality() {
        // index-2 subgroup is always normal
        let p = pres("< a, b | a^2, b^3, (a*b)^2 >");
        let t = enumerate(&p, &[p.parse_word("b").unwrap()], Strategy::Hlt);
        assert_eq!(t.index(), 2);
        assert!(t.is_normal());
        // <a> in S3 has index 3 and is not normal
        let t3 = enumerate(&p, &[p.parse_word("a").unwrap()], Strategy::Hlt);
        assert_eq!(t3.index(), 3);
        assert!(!t3.is_normal());
        assert_eq!(t3.normalizer_quotient_order(), 1);
    }

    #[test]
    fn strategies_agree() {
        let p = pres("< a, b | a^3, b^3, (a*b)^2 >");
        let h = enumerate(&p, &[], Strategy::Hlt);
        let f = enumerate(&p, &[], Strategy::Felsch);
        assert_eq!(h.index(), 12);
        assert_eq!(h.canonical_form(), f.canonical_form());
    }

    #[test]
    fn schreier_generator_count() {
        // index n subgroup of F_r has n*r - n + 1 nontrivial Schreier pairs
        let p = pres("< a, b | >");
        let sub = vec![
            p.parse_word("a").unwrap(),
            p.parse_word("b^2").unwrap(),
            p.parse_word("b*a*b^-1").unwrap(),
        ];
        let t = enumerate(&p, &sub, Strategy::Hlt);
        assert_eq!(t.index(), 2);
        assert_eq!(t.schreier_pairs().len(), 2 * 2 - 2 + 1);
    }
}

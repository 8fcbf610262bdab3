//! Counting homomorphisms, epimorphisms, and quotients from a finitely
//! presented group onto small finite targets, by pruned search over
//! generator-image tuples.

use crate::catalog::GroupCatalogEntry;
use crate::error::CensusError;
use crate::group::FiniteGroup;
use crate::presentation::Presentation;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

pub const DEFAULT_WORK_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientProfile {
    pub target: String,
    pub target_order: usize,
    pub hom_count: u64,
    pub epi_count: u64,
    /// number of normal subgroups with quotient isomorphic to the target,
    /// = epi_count / |Aut(target)|
    pub quotient_count: u64,
}

/// Multiplication structure of the target, precomputed for fast index
/// arithmetic during the search.
struct TargetData {
    n: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
}

impl TargetData {
    fn build(q: &FiniteGroup) -> Result<TargetData, CensusError> {
        let els = q.elements()?;
        let n = els.elems.len();
        let mut mult = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let p = els.elems[i].compose(&els.elems[j]);
                mult[i * n + j] = els.index[&p] as u32;
            }
        }
        let e = els.index[&crate::perm::Perm::identity(els.elems[0].degree())];
        let mut inv = vec![0u32; n];
        for i in 0..n {
            inv[i] = (0..n).find(|&j| mult[i * n + j] as usize == e).unwrap() as u32;
        }
        Ok(TargetData { n, mult, inv, identity: e })
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b] as usize
    }
}

/// Relators as letter strings over (generator, inverted?) with the level at
/// which they become fully evaluable.
struct SearchPlan {
    rank: usize,
    /// relators grouped by the highest generator they mention
    by_level: Vec<Vec<Vec<(usize, bool)>>>,
}

fn make_plan(p: &Presentation) -> SearchPlan {
    let rank = p.rank();
    let mut by_level: Vec<Vec<Vec<(usize, bool)>>> = vec![Vec::new(); rank.max(1)];
    for r in p.relators.iter() {
        let w = r.cyclically_reduced();
        if let Some(max) = w.max_generator() {
            let letters: Vec<(usize, bool)> =
                w.letters().into_iter().map(|(g, s)| (g, s < 0)).collect();
            by_level[max].push(letters);
        }
    }
    SearchPlan { rank, by_level }
}

struct Budget<'a> {
    used: &'a AtomicU64,
    limit: u64,
    exceeded: &'a AtomicBool,
}

impl Budget<'_> {
    #[inline]
    fn charge(&self, amount: u64) -> bool {
        let prev = self.used.fetch_add(amount, Ordering::Relaxed);
        if prev + amount > self.limit {
            self.exceeded.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Count homomorphisms and epimorphisms by searching every generator-image
/// tuple, parallelized over the first generator's image. The work budget
/// bounds relator-letter evaluations.
pub fn count_homomorphisms(
    p: &Presentation,
    q: &FiniteGroup,
    budget: u64,
) -> Result<(u64, u64), CensusError> {
    let td = TargetData::build(q)?;
    let starts: Vec<(usize, usize)> = (0..td.n).map(|x| (x, 1)).collect();
    count_with_starts(p, &td, &starts, budget)
}

/// Same counts, accelerated: conjugate first images give equally many
/// homomorphisms, so search one representative per conjugacy class of the
/// target and scale by the class size.
pub fn count_homomorphisms_reduced(
    p: &Presentation,
    q: &FiniteGroup,
    budget: u64,
) -> Result<(u64, u64), CensusError> {
    let td = TargetData::build(q)?;
    let starts = conjugacy_classes(&td);
    count_with_starts(p, &td, &starts, budget)
}

fn count_with_starts(
    p: &Presentation,
    td: &TargetData,
    starts: &[(usize, usize)],
    budget: u64,
) -> Result<(u64, u64), CensusError> {
    let plan = make_plan(p);
    if plan.rank == 0 {
        return Ok((1, if td.n == 1 { 1 } else { 0 }));
    }
    let used = AtomicU64::new(0);
    let exceeded = AtomicBool::new(false);
    let results: Vec<(u64, u64)> = starts
        .par_iter()
        .map(|&(rep, weight)| {
            let b = Budget { used: &used, limit: budget, exceeded: &exceeded };
            let mut images = Vec::with_capacity(plan.rank);
            images.push(rep);
            let mut hom = 0u64;
            let mut epi = 0u64;
            if check_level(&plan, td, &images, 0, &b) {
                dfs(&plan, td, &mut images, &b, &mut hom, &mut epi);
            }
            (hom * weight as u64, epi * weight as u64)
        })
        .collect();
    if exceeded.load(Ordering::Relaxed) {
        return Err(CensusError::BudgetExceeded { budget });
    }
    let hom: u64 = results.iter().map(|r| r.0).sum();
    let epi: u64 = results.iter().map(|r| r.1).sum();
    Ok((hom, epi))
}

/// Materialize every homomorphism as its tuple of image element indices in
/// the target's element order. Intended for small targets (kernel
/// cross-checks, structural-fact verification), not bulk counting.
pub fn enumerate_homomorphisms(
    p: &Presentation,
    q: &FiniteGroup,
    budget: u64,
) -> Result<Vec<Vec<usize>>, CensusError> {
    let td = TargetData::build(q)?;
    let plan = make_plan(p);
    if plan.rank == 0 {
        return Ok(vec![vec![]]);
    }
    let used = AtomicU64::new(0);
    let exceeded = AtomicBool::new(false);
    let b = Budget { used: &used, limit: budget, exceeded: &exceeded };
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(plan.rank);
    collect_dfs(&plan, &td, &mut images, &b, &mut out);
    if exceeded.load(Ordering::Relaxed) {
        return Err(CensusError::BudgetExceeded { budget });
    }
    Ok(out)
}

/// Is the tuple of image indices surjective onto the target?
pub fn images_generate(q: &FiniteGroup, images: &[usize]) -> Result<bool, CensusError> {
    let td = TargetData::build(q)?;
    Ok(generates(&td, images))
}

fn collect_dfs(
    plan: &SearchPlan,
    td: &TargetData,
    images: &mut Vec<usize>,
    budget: &Budget<'_>,
    out: &mut Vec<Vec<usize>>,
) {
    if budget.exceeded.load(Ordering::Relaxed) {
        return;
    }
    let level = images.len();
    if level == plan.rank {
        out.push(images.clone());
        return;
    }
    for x in 0..td.n {
        images.push(x);
        if check_level(plan, td, images, level, budget) {
            collect_dfs(plan, td, images, budget, out);
        }
        images.pop();
    }
}

fn dfs(
    plan: &SearchPlan,
    td: &TargetData,
    images: &mut Vec<usize>,
    budget: &Budget<'_>,
    hom: &mut u64,
    epi: &mut u64,
) {
    if budget.exceeded.load(Ordering::Relaxed) {
        return;
    }
    let level = images.len();
    if level == plan.rank {
        *hom += 1;
        if generates(td, images) {
            *epi += 1;
        }
        return;
    }
    for x in 0..td.n {
        images.push(x);
        if check_level(plan, td, images, level, budget) {
            dfs(plan, td, images, budget, hom, epi);
        }
        images.pop();
        if budget.exceeded.load(Ordering::Relaxed) {
            return;
        }
    }
}

/// Evaluate every relator whose highest generator is `level`; all of its
/// letters now have images.
fn check_level(
    plan: &SearchPlan,
    td: &TargetData,
    images: &[usize],
    level: usize,
    budget: &Budget<'_>,
) -> bool {
    for rel in &plan.by_level[level] {
        if !budget.charge(rel.len() as u64) {
            return false;
        }
        let mut acc = td.identity;
        for &(g, invert) in rel {
            let x = images[g];
            let x = if invert { td.inv[x] as usize } else { x };
            acc = td.mul(acc, x);
        }
        if acc != td.identity {
            return false;
        }
    }
    true
}

/// Do the image elements generate the whole target?
fn generates(td: &TargetData, images: &[usize]) -> bool {
    let mut seen = vec![false; td.n];
    let mut stack = vec![td.identity];
    seen[td.identity] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &g in images {
            let y = td.mul(x, g);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                if count == td.n {
                    return true;
                }
                stack.push(y);
            }
        }
    }
    count == td.n
}

fn conjugacy_classes(td: &TargetData) -> Vec<(usize, usize)> {
    let mut seen = vec![false; td.n];
    let mut out = Vec::new();
    for x in 0..td.n {
        if seen[x] {
            continue;
        }
        let mut size = 0;
        for g in 0..td.n {
            let y = td.mul(td.mul(td.inv[g] as usize, x), g);
            if !seen[y] {
                seen[y] = true;
                size += 1;
            }
        }
        out.push((x, size));
    }
    out
}

/// Full profile against one catalog target, including the normal-subgroup
/// count epi/|Aut|.
pub fn quotient_profile(
    p: &Presentation,
    entry: &GroupCatalogEntry,
    budget: u64,
) -> Result<QuotientProfile, CensusError> {
    let (hom_count, epi_count) = count_homomorphisms_reduced(p, &entry.group, budget)?;
    let aut = entry.aut_order;
    if epi_count % aut != 0 {
        return Err(CensusError::InexactAutDivision {
            epi: epi_count,
            aut,
            target: entry.group.name.clone(),
        });
    }
    Ok(QuotientProfile {
        target: entry.group.name.clone(),
        target_order: entry.group.order()?,
        hom_count,
        epi_count,
        quotient_count: epi_count / aut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::presentation::parse_presentation;

    fn pres(text: &str) -> Presentation {
        parse_presentation("T", text).unwrap()
    }

    #[test]
    fn free_group_hom_count_is_order_to_the_rank() {
        let p = pres("< a, b | >");
        let q = catalog::symmetric(3);
        let (hom, _) = count_homomorphisms(&p, &q, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!(hom, 36);
        let q8 = catalog::quaternion8();
        let (hom, _) = count_homomorphisms(&p, &q8, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!(hom, 64);
    }

    #[test]
    fn cyclic_source_counts_torsion_elements() {
        // |Hom(Z/n, Q)| = #{x in Q : x^n = 1}
        let p = pres("< a | a^2 >");
        let q = catalog::symmetric(3);
        let (hom, epi) = count_homomorphisms(&p, &q, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!(hom, 4); // identity + three transpositions
        assert_eq!(epi, 0); // S3 is not generated by one involution... or by one element
        let p6 = pres("< a | a^6 >");
        let z6 = catalog::cyclic(6);
        let (hom, epi) = count_homomorphisms(&p6, &z6, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!(hom, 6);
        assert_eq!(epi, 2); // the two primitive roots
    }

    #[test]
    fn commuting_pairs_oracle() {
        // |Hom(Z^2, Q)| = number of commuting pairs = |Q| * #conjugacy classes
        let p = pres("< a, b | a^-1*b^-1*a*b >");
        for q in [catalog::dihedral(8), catalog::quaternion8(), catalog::symmetric(4)] {
            let els = q.elements().unwrap();
            let pairs: usize = els
                .elems
                .iter()
                .map(|x| els.elems.iter().filter(|y| x.commutes_with(y)).count())
                .sum();
            let (hom, _) = count_homomorphisms(&p, &q, DEFAULT_WORK_BUDGET).unwrap();
            assert_eq!(hom, pairs as u64, "target {}", q.name);
        }
    }

    #[test]
    fn s3_onto_itself() {
        let p = pres("< a, b | a^2, b^3, (a*b)^2 >");
        let q = catalog::symmetric(3);
        let (hom, epi) = count_homomorphisms(&p, &q, DEFAULT_WORK_BUDGET).unwrap();
        // |Hom(S3,S3)| = 1 trivial + 3 onto Z/2 + 6 automorphisms = 10
        assert_eq!(hom, 10);
        assert_eq!(epi, 6);
        let entry = catalog::GroupCatalogEntry::build(q).unwrap();
        let prof = quotient_profile(&p, &entry, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!(prof.quotient_count, 1);
    }

    #[test]
    fn a4_has_no_s3_quotient_but_z3_quotient() {
        let p = pres("< a, b | a^3, b^3, (a*b)^2 >");
        let s3 = catalog::GroupCatalogEntry::build(catalog::symmetric(3)).unwrap();
        let prof = quotient_profile(&p, &s3, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!(prof.epi_count, 0);
        let z3 = catalog::GroupCatalogEntry::build(catalog::cyclic(3)).unwrap();
        let prof = quotient_profile(&p, &z3, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!(prof.epi_count, 2);
        assert_eq!(prof.quotient_count, 1);
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let p = pres("< a, b | a^2, b^3, (a*b)^2 >");
        let q = catalog::symmetric(4);
        let e = count_homomorphisms(&p, &q, 5).unwrap_err();
        assert!(matches!(e, CensusError::BudgetExceeded { budget: 5 }));
    }

    #[test]
    fn rank_zero_presentation() {
        let p = Presentation::new("triv", &["a"], vec![crate::word::Word::generator(0)])
            .unwrap();
        let q = catalog::symmetric(3);
        let (hom, epi) = count_homomorphisms(&p, &q, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!((hom, epi), (1, 0));
    }

    #[test]
    fn plain_and_reduced_counts_agree() {
        let sources = [
            "< a, b | a^2, b^3, (a*b)^2 >",
            "< a, b | a^3, b^3, (a*b)^2 >",
            "< a, b | a^-1*b^-1*a*b >",
            "< a, b | >",
        ];
        let targets = [catalog::symmetric(3), catalog::quaternion8(), catalog::dihedral(6)];
        for s in sources {
            let p = pres(s);
            for q in &targets {
                let a = count_homomorphisms(&p, q, DEFAULT_WORK_BUDGET).unwrap();
                let b = count_homomorphisms_reduced(&p, q, DEFAULT_WORK_BUDGET).unwrap();
                assert_eq!(a, b, "source {s} target {}", q.name);
            }
        }
    }

    #[test]
    fn quotient_count_equals_distinct_kernels() {
        use crate::coset::CosetTable;
        use std::collections::HashSet;
        // materialize each epimorphism's kernel as the canonical coset table
        // of the action on the target; #distinct kernels must equal epi/|Aut|
        let cases = [
            ("< a, b | a^2, b^3, (a*b)^2 >", catalog::symmetric(3)),
            ("< a, b | a^3, b^3, (a*b)^2 >", catalog::alternating(4)),
            ("< a, b | a^4, a^2*b^-2, b^-1*a*b*a >", catalog::quaternion8()),
            ("< a, b | a^2, b^2, (a*b)^6 >", catalog::dihedral(6)),
        ];
        for (src, q) in cases {
            let p = std::sync::Arc::new(parse_presentation("S", src).unwrap());
            let els = q.elements().unwrap();
            let homs = enumerate_homomorphisms(&p, &q, DEFAULT_WORK_BUDGET).unwrap();
            let mut kernels = HashSet::new();
            let mut epi = 0u64;
            for tuple in &homs {
                if !images_generate(&q, tuple).unwrap() {
                    continue;
                }
                epi += 1;
                // action of the source on the target by right multiplication
                // through the homomorphism; its point stabilizer is the kernel
                let perms: Vec<crate::perm::Perm> = tuple
                    .iter()
                    .map(|&i| {
                        crate::perm::Perm::from_images(
                            (0..els.elems.len())
                                .map(|x| {
                                    els.index[&els.elems[x].compose(&els.elems[i])] as u32
                                })
                                .collect(),
                        )
                    })
                    .collect();
                let t = CosetTable::from_action(p.clone(), Vec::new(), &perms);
                kernels.insert(t.canonical_form());
            }
            let entry = catalog::GroupCatalogEntry::build(q.clone()).unwrap();
            let prof = quotient_profile(&p, &entry, DEFAULT_WORK_BUDGET).unwrap();
            assert_eq!(prof.epi_count, epi, "epi mismatch for {}", q.name);
            assert_eq!(
                prof.quotient_count,
                kernels.len() as u64,
                "kernel count mismatch for {}",
                q.name
            );
        }
    }

    #[test]
    fn hom_counts_multiplicative_over_direct_products() {
        let p = pres("< a, b | a^2, b^3, (a*b)^2 >");
        let q1 = catalog::symmetric(3);
        let q2 = catalog::cyclic(4);
        let prod = catalog::direct_product(&q1, &q2);
        let (h1, _) = count_homomorphisms(&p, &q1, DEFAULT_WORK_BUDGET).unwrap();
        let (h2, _) = count_homomorphisms(&p, &q2, DEFAULT_WORK_BUDGET).unwrap();
        let (hp, _) = count_homomorphisms(&p, &prod, DEFAULT_WORK_BUDGET).unwrap();
        assert_eq!(hp, h1 * h2);
    }

    #[test]
    fn aut_order_matches_epi_count_from_own_presentation() {
        // every epimorphism from a finite group onto itself is an
        // automorphism, so the census gives an independent |Aut| computation
        for name in ["S3", "A4", "D8", "D9", "Q8", "G27", "Z13xsZ4_faithful"] {
            let q = catalog::make_named_group(name).unwrap();
            let p = q.presentation().unwrap();
            // sanity: the presentation presents a group of the right order
            let t = crate::coset::enumerate_cosets(
                &std::sync::Arc::new(p.clone()),
                &[],
                10_000,
                crate::coset::Strategy::Hlt,
            )
            .unwrap();
            assert_eq!(t.index(), q.order().unwrap(), "presentation of {name}");
            let (_, epi) = count_homomorphisms_reduced(&p, &q, DEFAULT_WORK_BUDGET).unwrap();
            assert_eq!(epi, q.automorphism_count().unwrap(), "aut of {name}");
        }
    }

    #[test]
    fn quaternion_quotients_of_surface_like_group() {
        // <a,b | a^4, a^2 b^-2, b^-1 a b a> presents Q8 itself
        let p = pres("< a, b | a^4, a^2*b^-2, b^-1*a*b*a >");
        let entry = catalog::GroupCatalogEntry::build(catalog::quaternion8()).unwrap();
        let prof = quotient_profile(&p, &entry, DEFAULT_WORK_BUDGET).unwrap();
        // Aut(Q8) = S4 of order 24; epimorphisms Q8 -> Q8 are automorphisms
        assert_eq!(prof.epi_count, 24);
        assert_eq!(prof.quotient_count, 1);
    }
}

//! Low-index subgroup enumeration: backtracking over partial coset tables
//! with relator-deduction propagation, deduplicated by canonical table form
//! and grouped into conjugacy classes.

use crate::coset::CosetTable;
use crate::error::CosetError;
use crate::perm::Perm;
use crate::presentation::Presentation;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

const UNDEF: u32 = u32::MAX;

/// One conjugacy class of subgroups, represented by a standardized coset table.
#[derive(Debug, Clone)]
pub struct SubgroupClass {
    pub table: CosetTable,
    pub index: usize,
    pub normal: bool,
    /// number of subgroups in the conjugacy class (= index / |N(H)/H|)
    pub class_size: usize,
}

/// All conjugacy classes of subgroups of index <= max_index, ordered by
/// index then canonical table form.
pub fn low_index_subgroups(
    presentation: &Arc<Presentation>,
    max_index: usize,
    node_budget: u64,
) -> Result<Vec<SubgroupClass>, CosetError> {
    let tables = all_subgroup_tables(presentation, max_index, node_budget)?;
    // group the distinct subgroups into conjugacy classes
    let mut classes: BTreeMap<(usize, Vec<u32>), (CosetTable, usize)> = BTreeMap::new();
    for t in tables.into_values() {
        let key = (t.index(), t.conjugacy_invariant());
        let entry = classes.entry(key).or_insert_with(|| (t.clone(), 0));
        entry.1 += 1;
        if t.canonical_form() < entry.0.canonical_form() {
            entry.0 = t;
        }
    }
    let mut out = Vec::new();
    for ((index, _), (table, seen)) in classes {
        let class_size = index / table.normalizer_quotient_order();
        debug_assert_eq!(seen, class_size, "conjugacy class size mismatch");
        let normal = table.is_normal();
        debug_assert_eq!(normal, class_size == 1 && table.normalizer_quotient_order() == index);
        out.push(SubgroupClass { table, index, normal, class_size });
    }
    Ok(out)
}

/// Total number of subgroups (not classes) of each index 1..=max_index.
pub fn count_subgroups_total(
    presentation: &Arc<Presentation>,
    max_index: usize,
    node_budget: u64,
) -> Result<Vec<u64>, CosetError> {
    let tables = all_subgroup_tables(presentation, max_index, node_budget)?;
    let mut counts = vec![0u64; max_index];
    for t in tables.into_values() {
        counts[t.index() - 1] += 1;
    }
    Ok(counts)
}

/// Every subgroup of index <= max_index, keyed by standardized table form.
fn all_subgroup_tables(
    presentation: &Arc<Presentation>,
    max_index: usize,
    node_budget: u64,
) -> Result<BTreeMap<(usize, Vec<u32>), CosetTable>, CosetError> {
    assert!(max_index >= 1, "max_index must be at least 1");
    let rank = presentation.rank().max(1);
    let relators: Vec<Vec<usize>> = presentation
        .relators
        .iter()
        .map(|r| word_cols(&r.cyclically_reduced()))
        .filter(|w| !w.is_empty())
        .collect();
    let mut search = Search {
        cols: 2 * rank,
        relators,
        max_index,
        budget: node_budget,
        budget_total: node_budget,
        found: Vec::new(),
    };
    let root = Partial { tab: vec![UNDEF; search.cols], ncos: 1 };
    search.dfs(root)?;

    let cols = search.cols;
    let mut out = BTreeMap::new();
    for tab in std::mem::take(&mut search.found) {
        let n = tab.ncos;
        let perms: Vec<Perm> = (0..presentation.rank())
            .map(|g| {
                Perm::from_images((0..n).map(|c| tab.tab[c * cols + 2 * g]).collect())
            })
            .collect();
        let table = CosetTable::from_action(presentation.clone(), Vec::new(), &perms);
        out.entry((table.index(), table.canonical_form())).or_insert(table);
    }
    Ok(out)
}

fn word_cols(w: &crate::word::Word) -> Vec<usize> {
    w.letters()
        .into_iter()
        .map(|(g, s)| if s > 0 { 2 * g } else { 2 * g + 1 })
        .collect()
}

#[inline]
fn inv_col(c: usize) -> usize {
    c ^ 1
}

#[derive(Clone)]
struct Partial {
    tab: Vec<u32>,
    ncos: usize,
}

impl Partial {
    fn first_undefined(&self, cols: usize) -> Option<(u32, usize)> {
        for a in 0..self.ncos as u32 {
            for c in 0..cols {
                if self.tab[a as usize * cols + c] == UNDEF {
                    return Some((a, c));
                }
            }
        }
        None
    }
}

struct Search {
    cols: usize,
    relators: Vec<Vec<usize>>,
    max_index: usize,
    budget: u64,
    budget_total: u64,
    found: Vec<Partial>,
}

impl Search {
    fn dfs(&mut self, state: Partial) -> Result<(), CosetError> {
        match state.first_undefined(self.cols) {
            None => {
                self.found.push(state);
                Ok(())
            }
            Some((a, c)) => {
                let upper = if state.ncos < self.max_index { state.ncos + 1 } else { state.ncos };
                for b in 0..upper as u32 {
                    if self.budget == 0 {
                        return Err(CosetError::NodeBudgetExceeded {
                            budget: self.budget_total,
                        });
                    }
                    self.budget -= 1;
                    let mut next = state.clone();
                    if b as usize == next.ncos {
                        next.ncos += 1;
                        next.tab.extend(std::iter::repeat_n(UNDEF, self.cols));
                    } else if next.tab[b as usize * self.cols + inv_col(c)] != UNDEF {
                        continue;
                    }
                    next.tab[a as usize * self.cols + c] = b;
                    next.tab[b as usize * self.cols + inv_col(c)] = a;
                    if self.propagate(&mut next) {
                        self.dfs(next)?;
                    }
                }
                Ok(())
            }
        }
    }

    /// Scan every relator at every coset, recording forced deductions, until a
    /// fixpoint; false on contradiction.
    fn propagate(&self, state: &mut Partial) -> bool {
        loop {
            let mut changed = false;
            for a in 0..state.ncos as u32 {
                for r in &self.relators {
                    match self.scan(state, a, r) {
                        ScanResult::Conflict => return false,
                        ScanResult::Deduced => changed = true,
                        ScanResult::Quiet => {}
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn scan(&self, state: &mut Partial, a: u32, word: &[usize]) -> ScanResult {
        let mut f = a;
        let mut b = a;
        let mut i = 0usize;
        let mut j = word.len();
        while i < j {
            let t = state.tab[f as usize * self.cols + word[i]];
            if t == UNDEF {
                break;
            }
            f = t;
            i += 1;
        }
        if i == j {
            return if f == b { ScanResult::Quiet } else { ScanResult::Conflict };
        }
        while j > i {
            let t = state.tab[b as usize * self.cols + inv_col(word[j - 1])];
            if t == UNDEF {
                break;
            }
            b = t;
            j -= 1;
        }
        if j == i {
            return if f == b { ScanResult::Quiet } else { ScanResult::Conflict };
        }
        if j == i + 1 {
            // deduction tab[f][word[i]] = b, if consistent
            let c = word[i];
            let existing = state.tab[f as usize * self.cols + c];
            if existing != UNDEF {
                return if existing == b { ScanResult::Quiet } else { ScanResult::Conflict };
            }
            let back = state.tab[b as usize * self.cols + inv_col(c)];
            if back != UNDEF {
                return if back == f { ScanResult::Quiet } else { ScanResult::Conflict };
            }
            state.tab[f as usize * self.cols + c] = b;
            state.tab[b as usize * self.cols + inv_col(c)] = f;
            return ScanResult::Deduced;
        }
        ScanResult::Quiet
    }
}

enum ScanResult {
    Quiet,
    Deduced,
    Conflict,
}

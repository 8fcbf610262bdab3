//! Partition-refinement pipeline: per-group invariant fingerprints (H_1,
//! quotient censuses against the target battery, optional abelian-cover H_1),
//! tiered partitions, and replayable distinguishing certificates.

use crate::abelian::{abelian_cover_h1, abelianization};
use crate::catalog::{battery_entries, GroupCatalogEntry, NILPOTENT_BATTERY};
use crate::census::{quotient_profile, QuotientProfile};
use crate::coset::DEFAULT_COSET_LIMIT;
use crate::error::{AbelianError, EngineError};
use crate::register::RegisterEntry;
use crate::rewrite::DEFAULT_TIETZE_BUDGET;
use crate::snf::InvariantFactors;
use crate::store::ResultStore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest witness group order the certificate format promises.
pub const MAX_WITNESS_ORDER: usize = 248;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fingerprint {
    pub j: u32,
    pub group_id: String,
    pub h1: InvariantFactors,
    /// per battery target, keyed by catalog name
    pub profiles: BTreeMap<String, QuotientProfile>,
    pub abcover_h1: Option<InvariantFactors>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    H1,
    Nilpotent,
    Full,
    Abcover,
}

impl Tier {
    pub fn name(&self) -> &'static str {
        match self {
            Tier::H1 => "h1",
            Tier::Nilpotent => "nilpotent",
            Tier::Full => "full",
            Tier::Abcover => "abcover",
        }
    }

    pub fn parse(s: &str) -> Option<Tier> {
        match s {
            "h1" => Some(Tier::H1),
            "nilpotent" => Some(Tier::Nilpotent),
            "full" => Some(Tier::Full),
            "abcover" => Some(Tier::Abcover),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub budget: u64,
    pub coset_limit: usize,
    pub tietze_budget: u64,
    pub with_abcover: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            budget: crate::census::DEFAULT_WORK_BUDGET,
            coset_limit: DEFAULT_COSET_LIMIT,
            tietze_budget: DEFAULT_TIETZE_BUDGET,
            with_abcover: false,
        }
    }
}

/// The default target battery; every member is solvable, which the
/// tier layout relies on, so that is asserted here.
pub fn default_battery() -> Result<Vec<GroupCatalogEntry>, EngineError> {
    let entries = battery_entries()?;
    for e in &entries {
        debug_assert!(e.is_solvable, "battery target {} must be solvable", e.group.name);
    }
    Ok(entries)
}

pub fn build_fingerprints(
    register: &[RegisterEntry],
    targets: &[GroupCatalogEntry],
    opts: &BuildOptions,
    store: Option<&ResultStore>,
) -> Result<Vec<Fingerprint>, EngineError> {
    let mut out: Vec<Fingerprint> = register
        .par_iter()
        .map(|entry| build_one(entry, targets, opts, store))
        .collect::<Result<_, _>>()?;
    out.sort_by_key(|f| f.j);
    Ok(out)
}

fn build_one(
    entry: &RegisterEntry,
    targets: &[GroupCatalogEntry],
    opts: &BuildOptions,
    store: Option<&ResultStore>,
) -> Result<Fingerprint, EngineError> {
    let ptext = entry.presentation.format();
    let h1_key = ResultStore::key(&["h1", &ptext]);
    let h1 = match store.and_then(|s| s.get::<InvariantFactors>(&h1_key)) {
        Some(v) => v,
        None => {
            let v = abelianization(&entry.presentation).invariants;
            if let Some(s) = store {
                s.put(&h1_key, &v)?;
            }
            v
        }
    };
    let mut profiles = BTreeMap::new();
    for t in targets {
        let key = ResultStore::key(&["profile", &ptext, &t.group.name]);
        let prof = match store.and_then(|s| s.get::<QuotientProfile>(&key)) {
            Some(v) => v,
            None => {
                let v = quotient_profile(&entry.presentation, t, opts.budget)?;
                if let Some(s) = store {
                    s.put(&key, &v)?;
                }
                v
            }
        };
        profiles.insert(t.group.name.clone(), prof);
    }
    let abcover = if opts.with_abcover {
        let key = ResultStore::key(&["abcover_h1", &ptext]);
        let v = match store.and_then(|s| s.get::<InvariantFactors>(&key)) {
            Some(v) => v,
            None => {
                let v = abelian_cover_h1(
                    &entry.presentation,
                    opts.coset_limit,
                    opts.tietze_budget,
                )
                .map_err(|e: AbelianError| EngineError::Abelian(e))?;
                if let Some(s) = store {
                    s.put(&key, &v)?;
                }
                v
            }
        };
        Some(v)
    } else {
        None
    };
    Ok(Fingerprint {
        j: entry.j,
        group_id: entry.identifier.clone(),
        h1,
        profiles,
        abcover_h1: abcover,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionReport {
    pub tier: String,
    /// classes ordered by smallest member j; members (j, group_id) sorted by j
    pub classes: Vec<Vec<(u32, String)>>,
    pub class_count: usize,
}

impl PartitionReport {
    /// The classes as j-sets, for terse comparisons.
    pub fn class_js(&self) -> Vec<Vec<u32>> {
        self.classes.iter().map(|c| c.iter().map(|m| m.0).collect()).collect()
    }
}

fn tier_key(fp: &Fingerprint, tier: Tier) -> Result<String, EngineError> {
    let mut parts = vec![format!("h1:{}", fp.h1.display())];
    let mut add_targets = |names: &[&str]| -> Result<(), EngineError> {
        for name in names {
            let prof = fp.profiles.get(*name).ok_or_else(|| {
                EngineError::Other(format!(
                    "fingerprint for {} lacks target {} required by tier",
                    fp.group_id, name
                ))
            })?;
            parts.push(format!("{name}:{}", prof.quotient_count));
        }
        Ok(())
    };
    match tier {
        Tier::H1 => {}
        Tier::Nilpotent => add_targets(&NILPOTENT_BATTERY)?,
        Tier::Full => {
            let names: Vec<&str> = fp.profiles.keys().map(|s| s.as_str()).collect();
            add_targets(&names)?;
            if fp.profiles.is_empty() {
                return Err(EngineError::Other(format!(
                    "fingerprint for {} has no quotient profiles for the full tier",
                    fp.group_id
                )));
            }
        }
        Tier::Abcover => {
            let ab = fp.abcover_h1.as_ref().ok_or_else(|| {
                EngineError::Other(format!(
                    "fingerprint for {} lacks the abelian-cover invariant",
                    fp.group_id
                ))
            })?;
            parts.push(format!("abcover:{}", ab.display()));
        }
    }
    Ok(parts.join("|"))
}

/// Group fingerprints agreeing on every tier component. For the full tier all
/// fingerprints must carry the same target set.
pub fn refine_partition(
    fingerprints: &[Fingerprint],
    tier: Tier,
) -> Result<PartitionReport, EngineError> {
    if tier == Tier::Full {
        let first: Vec<&String> = fingerprints
            .first()
            .map(|f| f.profiles.keys().collect())
            .unwrap_or_default();
        for fp in fingerprints {
            if fp.profiles.keys().collect::<Vec<_>>() != first {
                return Err(EngineError::Other(format!(
                    "fingerprint for {} has a different target set",
                    fp.group_id
                )));
            }
        }
    }
    let mut by_key: BTreeMap<String, Vec<(u32, String)>> = BTreeMap::new();
    for fp in fingerprints {
        by_key
            .entry(tier_key(fp, tier)?)
            .or_default()
            .push((fp.j, fp.group_id.clone()));
    }
    let mut classes: Vec<Vec<(u32, String)>> = by_key.into_values().collect();
    for c in classes.iter_mut() {
        c.sort();
    }
    classes.sort_by_key(|c| c[0].0);
    let class_count = classes.len();
    Ok(PartitionReport { tier: tier.name().to_string(), classes, class_count })
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub enum Witness {
    /// the two abelianizations differ
    H1 { left: String, right: String },
    /// distinct-kernel quotient counts onto the named target differ
    Quotient { target: String, left: u64, right: u64 },
    /// the abelian-cover H_1 invariants differ
    AbcoverH1 { left: String, right: String },
    /// nothing in the battery separates the pair
    NoWitnessInBattery,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub left_j: u32,
    pub left_id: String,
    pub right_j: u32,
    pub right_id: String,
    pub witness: Witness,
    /// order of the witness group; 0 for homological witnesses
    pub max_target_order: usize,
}

/// One certificate per unordered pair: the cheapest separating invariant
/// (H_1, then the smallest-order battery target, then the abelian-cover
/// invariant), or an explicit no-witness record.
pub fn emit_certificates(fingerprints: &[Fingerprint]) -> Vec<Certificate> {
    let mut out = Vec::new();
    for (a, fa) in fingerprints.iter().enumerate() {
        for fb in fingerprints.iter().skip(a + 1) {
            let (witness, order) = find_witness(fa, fb);
            debug_assert!(order <= MAX_WITNESS_ORDER);
            out.push(Certificate {
                left_j: fa.j,
                left_id: fa.group_id.clone(),
                right_j: fb.j,
                right_id: fb.group_id.clone(),
                witness,
                max_target_order: order,
            });
        }
    }
    out
}

fn find_witness(a: &Fingerprint, b: &Fingerprint) -> (Witness, usize) {
    if a.h1 != b.h1 {
        return (Witness::H1 { left: a.h1.display(), right: b.h1.display() }, 0);
    }
    let mut targets: Vec<&QuotientProfile> = a.profiles.values().collect();
    targets.sort_by(|x, y| (x.target_order, &x.target).cmp(&(y.target_order, &y.target)));
    for pa in targets {
        if let Some(pb) = b.profiles.get(&pa.target) {
            if pa.quotient_count != pb.quotient_count {
                return (
                    Witness::Quotient {
                        target: pa.target.clone(),
                        left: pa.quotient_count,
                        right: pb.quotient_count,
                    },
                    pa.target_order,
                );
            }
        }
    }
    if let (Some(x), Some(y)) = (&a.abcover_h1, &b.abcover_h1) {
        if x != y {
            return (Witness::AbcoverH1 { left: x.display(), right: y.display() }, 0);
        }
    }
    (Witness::NoWitnessInBattery, 0)
}

/// Replay a certificate from scratch: recompute the witness invariant for
/// both groups with no cache and confirm the recorded values. For a
/// no-witness record, confirms H_1 and every battery count still agree.
pub fn verify_certificate(
    cert: &Certificate,
    left: &RegisterEntry,
    right: &RegisterEntry,
    opts: &BuildOptions,
) -> Result<bool, EngineError> {
    match &cert.witness {
        Witness::H1 { left: la, right: rb } => {
            let a = abelianization(&left.presentation).invariants.display();
            let b = abelianization(&right.presentation).invariants.display();
            Ok(a == *la && b == *rb && a != b)
        }
        Witness::Quotient { target, left: la, right: rb } => {
            let entry = GroupCatalogEntry::build(crate::catalog::make_named_group(target)?)?;
            let pa = quotient_profile(&left.presentation, &entry, opts.budget)?;
            let pb = quotient_profile(&right.presentation, &entry, opts.budget)?;
            Ok(pa.quotient_count == *la && pb.quotient_count == *rb && la != rb)
        }
        Witness::AbcoverH1 { left: la, right: rb } => {
            let a = abelian_cover_h1(&left.presentation, opts.coset_limit, opts.tietze_budget)?
                .display();
            let b = abelian_cover_h1(&right.presentation, opts.coset_limit, opts.tietze_budget)?
                .display();
            Ok(a == *la && b == *rb && a != b)
        }
        Witness::NoWitnessInBattery => {
            let a = abelianization(&left.presentation).invariants;
            let b = abelianization(&right.presentation).invariants;
            if a != b {
                return Ok(false);
            }
            for t in default_battery()? {
                let pa = quotient_profile(&left.presentation, &t, opts.budget)?;
                let pb = quotient_profile(&right.presentation, &t, opts.budget)?;
                if pa.quotient_count != pb.quotient_count {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register::parse_register;

    fn fixture_register() -> Vec<RegisterEntry> {
        parse_register(
            r#"
# j = 1
# identifier = s3
G1 := < a, b | a^2, b^3, (a*b)^2 >;
# j = 2
# identifier = z6
G2 := < a | a^6 >;
# j = 3
# identifier = z6-alt
G3 := < a, b | a^2, b^3, (a, b) >;
# j = 4
# identifier = d6
G4 := < a, b | a^2, b^6, (a*b)^2 >;
# j = 5
# identifier = q8
G5 := < a, b | a^4, a^2*b^-2, b^-1*a*b*a >;
"#,
        )
        .unwrap()
    }

    fn fixture_fingerprints(with_abcover: bool) -> Vec<Fingerprint> {
        let reg = fixture_register();
        let targets = default_battery().unwrap();
        let opts = BuildOptions { with_abcover, ..BuildOptions::default() };
        build_fingerprints(&reg, &targets, &opts, None).unwrap()
    }

    #[test]
    fn tier_partitions_refine_monotonically() {
        let fps = fixture_fingerprints(false);
        let h1 = refine_partition(&fps, Tier::H1).unwrap();
        // s3 alone (Z/2); z6 and z6-alt together (Z/6); d6 and q8 together (Z/2 x Z/2)
        assert_eq!(h1.class_js(), vec![vec![1], vec![2, 3], vec![4, 5]]);
        let nilp = refine_partition(&fps, Tier::Nilpotent).unwrap();
        assert_eq!(nilp.class_js(), vec![vec![1], vec![2, 3], vec![4], vec![5]]);
        let full = refine_partition(&fps, Tier::Full).unwrap();
        assert_eq!(full.class_js(), vec![vec![1], vec![2, 3], vec![4], vec![5]]);
        // monotonic: every finer class is inside some coarser class
        for fine in full.class_js() {
            assert!(h1
                .class_js()
                .iter()
                .any(|coarse| fine.iter().all(|j| coarse.contains(j))));
        }
        assert!(h1.class_count <= nilp.class_count);
        assert!(nilp.class_count <= full.class_count);
    }

    #[test]
    fn abcover_tier_splits_d6_from_q8() {
        let fps = fixture_fingerprints(true);
        let ab = refine_partition(&fps, Tier::Abcover).unwrap();
        // commutator subgroups: Z/3 for d6, Z/2 (the center) for q8
        assert_eq!(ab.class_js(), vec![vec![1], vec![2, 3], vec![4], vec![5]]);
    }

    #[test]
    fn partition_is_order_independent() {
        let mut fps = fixture_fingerprints(false);
        let a = refine_partition(&fps, Tier::Full).unwrap();
        fps.reverse();
        let b = refine_partition(&fps, Tier::Full).unwrap();
        assert_eq!(a.class_js(), b.class_js());
    }

    #[test]
    fn certificates_cover_all_pairs_with_minimal_witnesses() {
        let fps = fixture_fingerprints(false);
        let certs = emit_certificates(&fps);
        assert_eq!(certs.len(), 5 * 4 / 2);
        let get = |l: u32, r: u32| {
            certs
                .iter()
                .find(|c| (c.left_j, c.right_j) == (l, r))
                .unwrap()
        };
        assert!(matches!(get(1, 2).witness, Witness::H1 { .. }));
        assert_eq!(get(1, 2).max_target_order, 0);
        // d6 vs q8: same H_1; S3 (order 6) is the smallest separating target
        match &get(4, 5).witness {
            Witness::Quotient { target, left, right } => {
                assert_eq!(target, "S3");
                assert_ne!(left, right);
            }
            w => panic!("expected quotient witness, got {w:?}"),
        }
        assert_eq!(get(4, 5).max_target_order, 6);
        // the two Z/6 presentations are inseparable by the battery
        assert_eq!(get(2, 3).witness, Witness::NoWitnessInBattery);
        for c in &certs {
            assert!(c.max_target_order <= MAX_WITNESS_ORDER);
        }
    }

    #[test]
    fn certificates_replay_cold() {
        let reg = fixture_register();
        let fps = fixture_fingerprints(false);
        let certs = emit_certificates(&fps);
        let opts = BuildOptions::default();
        for c in &certs {
            let left = &reg[(c.left_j - 1) as usize];
            let right = &reg[(c.right_j - 1) as usize];
            assert!(
                verify_certificate(c, left, right, &opts).unwrap(),
                "certificate {} vs {} failed replay",
                c.left_j,
                c.right_j
            );
        }
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let reg = fixture_register();
        let fps = fixture_fingerprints(false);
        let certs = emit_certificates(&fps);
        let mut bad = certs
            .iter()
            .find(|c| matches!(c.witness, Witness::Quotient { .. }))
            .unwrap()
            .clone();
        if let Witness::Quotient { left, .. } = &mut bad.witness {
            *left += 1;
        }
        let left = &reg[(bad.left_j - 1) as usize];
        let right = &reg[(bad.right_j - 1) as usize];
        assert!(!verify_certificate(&bad, left, right, &BuildOptions::default()).unwrap());
    }

    #[test]
    fn fingerprints_are_cached_and_reused() {
        let dir = tempfile::tempdir().unwrap();
        let store = ResultStore::open(dir.path()).unwrap();
        let reg = fixture_register();
        let targets = default_battery().unwrap();
        let opts = BuildOptions::default();
        let a = build_fingerprints(&reg, &targets, &opts, Some(&store)).unwrap();
        let files = std::fs::read_dir(dir.path()).unwrap().count();
        assert!(files >= reg.len() * (targets.len() + 1));
        let b = build_fingerprints(&reg, &targets, &opts, Some(&store)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.h1, y.h1);
            assert_eq!(x.profiles, y.profiles);
        }
    }
}

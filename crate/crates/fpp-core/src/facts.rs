//! Structural-fact verifiers that need ambient-group data: subgroups given by
//! generating words inside a common ambient presentation. When the data is
//! absent the verifiers report "unverifiable", never a guess.

use crate::catalog;
use crate::census::{count_homomorphisms_reduced, quotient_profile};
use crate::coset::{enumerate_cosets, intersect_tables, CosetTable, Strategy};
use crate::error::EngineError;
use crate::group::closure_size;
use crate::lowindex::{low_index_subgroups, SubgroupClass};
use crate::presentation::{parse_presentation, Presentation};
use crate::rewrite::reidemeister_schreier;
use crate::word::Word;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// An ambient presentation with named finite-index subgroups given by
/// generating words.
#[derive(Debug, Clone)]
pub struct AmbientSpec {
    pub ambient: Arc<Presentation>,
    pub subgroups: BTreeMap<String, Vec<Word>>,
}

/// Text format, one statement per line group ending in ';':
///   ambient := < a, b | ... >;
///   subgroup Name := w1, w2, ...;
pub fn parse_ambient_spec(text: &str) -> Result<AmbientSpec, EngineError> {
    let mut ambient: Option<Arc<Presentation>> = None;
    let mut subgroups = BTreeMap::new();
    let mut pending = String::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if pending.is_empty() && (trimmed.is_empty() || trimmed.starts_with('#')) {
            continue;
        }
        pending.push_str(line);
        pending.push('\n');
        if !trimmed.ends_with(';') {
            continue;
        }
        let stmt = std::mem::take(&mut pending);
        let stmt = stmt.trim().strip_suffix(';').unwrap().trim();
        if let Some(rest) = stmt.strip_prefix("ambient") {
            let rhs = rest
                .trim()
                .strip_prefix(":=")
                .ok_or_else(|| EngineError::Register("expected `ambient := < ... >;`".into()))?
                .trim();
            let body = crate::register::expand_commutators(rhs)?;
            ambient = Some(Arc::new(
                parse_presentation("ambient", &body)
                    .map_err(|e| EngineError::Register(format!("ambient: {e}")))?,
            ));
        } else if let Some(rest) = stmt.strip_prefix("subgroup") {
            let (name, rhs) = rest
                .trim()
                .split_once(":=")
                .ok_or_else(|| EngineError::Register("expected `subgroup Name := words;`".into()))?;
            let amb = ambient.as_ref().ok_or_else(|| {
                EngineError::Register("subgroup before ambient declaration".into())
            })?;
            let mut words = Vec::new();
            for part in split_top_level(rhs) {
                let body = crate::register::expand_commutators(part.trim())?;
                words.push(amb.parse_word(&body).map_err(|e| {
                    EngineError::Register(format!("subgroup {}: {e}", name.trim()))
                })?);
            }
            subgroups.insert(name.trim().to_string(), words);
        } else {
            return Err(EngineError::Register(format!("unrecognized statement {stmt:?}")));
        }
    }
    if !pending.trim().is_empty() {
        return Err(EngineError::Register("unterminated statement (missing ';')".into()));
    }
    let ambient =
        ambient.ok_or_else(|| EngineError::Register("missing ambient declaration".into()))?;
    Ok(AmbientSpec { ambient, subgroups })
}

/// Split on commas not nested in parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactStatus {
    Pass,
    Fail(String),
    Unverifiable(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactReport {
    pub name: String,
    pub status: FactStatus,
}

impl FactReport {
    fn pass(name: &str) -> Self {
        FactReport { name: name.into(), status: FactStatus::Pass }
    }
    fn fail(name: &str, why: String) -> Self {
        FactReport { name: name.into(), status: FactStatus::Fail(why) }
    }
    fn unverifiable(name: &str, why: &str) -> Self {
        FactReport { name: name.into(), status: FactStatus::Unverifiable(why.into()) }
    }
}

pub struct FactOptions {
    pub coset_limit: usize,
    pub node_budget: u64,
    pub census_budget: u64,
}

impl Default for FactOptions {
    fn default() -> Self {
        FactOptions {
            coset_limit: crate::coset::DEFAULT_COSET_LIMIT,
            node_budget: crate::lowindex::DEFAULT_NODE_BUDGET,
            census_budget: crate::census::DEFAULT_WORK_BUDGET,
        }
    }
}

const UNVERIFIABLE_MSG: &str = "unverifiable with provided register";

/// The three index-3 structural facts for the second commensurability class:
/// (a) the ambient group has a unique index-3 subgroup class admitting an
/// epimorphism onto Z/21, and it is GammaBar; (b) GammaBar has a unique
/// normal index-3 subgroup class, and it is Gamma32; (c) Delta =
/// Gamma32 ∩ Gamma34 = Gamma32 ∩ Gamma35 has index 3 in each, is normal in
/// Gamma34 and Gamma35 but not in Gamma32, and its class is the unique
/// index-3 class of Gamma32 with four distinct homomorphisms onto S3 (both
/// the epimorphism-count and kernel-count readings are computed and the
/// report states which one holds).
pub fn verify_c2_facts(
    spec: Option<&AmbientSpec>,
    opts: &FactOptions,
) -> Result<Vec<FactReport>, EngineError> {
    let needed = ["GammaBar", "Gamma32", "Gamma34", "Gamma35"];
    let Some(spec) = spec else {
        return Ok(vec![FactReport::unverifiable("c2-facts", UNVERIFIABLE_MSG)]);
    };
    if let Some(missing) = needed.iter().find(|n| !spec.subgroups.contains_key(**n)) {
        return Ok(vec![FactReport::unverifiable(
            "c2-facts",
            &format!("{UNVERIFIABLE_MSG}: missing subgroup {missing}"),
        )]);
    }
    let mut out = Vec::new();
    out.push(fact_a(spec, opts)?);
    out.push(fact_b(spec, opts)?);
    out.extend(fact_c(spec, opts)?);
    Ok(out)
}

fn ambient_table(
    spec: &AmbientSpec,
    name: &str,
    opts: &FactOptions,
) -> Result<CosetTable, EngineError> {
    Ok(enumerate_cosets(
        &spec.ambient,
        &spec.subgroups[name],
        opts.coset_limit,
        Strategy::Hlt,
    )?)
}

/// Lift a subgroup-of-a-subgroup to ambient generating words: Schreier
/// generators of its table, with each rewritten generator replaced by its
/// ambient word.
fn lift_to_ambient(class_table: &CosetTable, ambient_words: &[Word]) -> Vec<Word> {
    class_table
        .schreier_generators()
        .iter()
        .map(|w| w.substitute(ambient_words))
        .collect()
}

/// Index-3 subgroup classes of the subgroup named `of`, as
/// (class, simplified presentation ambient words) pairs.
fn index3_classes_of(
    spec: &AmbientSpec,
    of: &str,
    opts: &FactOptions,
) -> Result<(CosetTable, Vec<(SubgroupClass, Arc<Presentation>, Vec<Word>)>), EngineError> {
    let t = ambient_table(spec, of, opts)?;
    let mut rp = reidemeister_schreier(&t);
    rp.simplify(crate::rewrite::DEFAULT_TIETZE_BUDGET);
    let pres = Arc::new(rp.presentation.clone());
    let classes = low_index_subgroups(&pres, 3, opts.node_budget)?;
    let out = classes
        .into_iter()
        .filter(|c| c.index == 3)
        .map(|c| (c, pres.clone(), rp.generator_ambient_words.clone()))
        .collect();
    Ok((t, out))
}

fn fact_a(spec: &AmbientSpec, opts: &FactOptions) -> Result<FactReport, EngineError> {
    let name = "c2-fact-a: unique index-3 class of the ambient group with a Z/21 epimorphism, equal to GammaBar";
    let pres = spec.ambient.clone();
    let classes = low_index_subgroups(&pres, 3, opts.node_budget)?;
    let z21 = catalog::cyclic(21);
    let mut admitting = Vec::new();
    for c in classes.iter().filter(|c| c.index == 3) {
        let mut rp = reidemeister_schreier(&c.table);
        rp.simplify(crate::rewrite::DEFAULT_TIETZE_BUDGET);
        let (_, epi) = count_homomorphisms_reduced(&rp.presentation, &z21, opts.census_budget)?;
        if epi > 0 {
            admitting.push(c);
        }
    }
    if admitting.len() != 1 {
        return Ok(FactReport::fail(
            name,
            format!("{} index-3 classes admit a Z/21 epimorphism", admitting.len()),
        ));
    }
    let bar = ambient_table(spec, "GammaBar", opts)?;
    if bar.index() != 3 {
        return Ok(FactReport::fail(name, format!("GammaBar has index {}", bar.index())));
    }
    if admitting[0].table.conjugacy_invariant() != bar.conjugacy_invariant() {
        return Ok(FactReport::fail(name, "the admitting class is not GammaBar".into()));
    }
    Ok(FactReport::pass(name))
}

fn fact_b(spec: &AmbientSpec, opts: &FactOptions) -> Result<FactReport, EngineError> {
    let name = "c2-fact-b: GammaBar has a unique normal index-3 class, equal to Gamma32";
    let (t_bar, classes) = index3_classes_of(spec, "GammaBar", opts)?;
    let normal: Vec<_> = classes.iter().filter(|(c, _, _)| c.normal).collect();
    if normal.len() != 1 {
        return Ok(FactReport::fail(
            name,
            format!("{} normal index-3 classes in GammaBar", normal.len()),
        ));
    }
    // Gamma32 must lie in GammaBar
    let g32_words = &spec.subgroups["Gamma32"];
    if g32_words.iter().any(|w| t_bar.apply_word(0, w) != 0) {
        return Ok(FactReport::fail(name, "Gamma32 is not contained in GammaBar".into()));
    }
    let (c, _, ambient_words) = normal[0];
    let lifted = lift_to_ambient(&c.table, ambient_words);
    let found = enumerate_cosets(&spec.ambient, &lifted, opts.coset_limit, Strategy::Hlt)?;
    let g32 = ambient_table(spec, "Gamma32", opts)?;
    if found.conjugacy_invariant() != g32.conjugacy_invariant() {
        return Ok(FactReport::fail(name, "the normal class is not Gamma32".into()));
    }
    Ok(FactReport::pass(name))
}

/// Index and normality of the subgroup generated by `ambient_words_h` inside
/// the subgroup whose ambient table is `t_k`: rewrite the generators into the
/// bigger subgroup's own presentation and enumerate there.
fn relative_position(
    t_k: &CosetTable,
    ambient_words_h: &[Word],
    opts: &FactOptions,
) -> Result<Option<CosetTable>, EngineError> {
    let rp = reidemeister_schreier(t_k);
    let mut rewritten = Vec::new();
    for w in ambient_words_h {
        match rp.rewrite_ambient_word(t_k, w) {
            Some(r) => rewritten.push(r),
            None => return Ok(None), // not contained
        }
    }
    let pres = Arc::new(rp.presentation.clone());
    Ok(Some(enumerate_cosets(&pres, &rewritten, opts.coset_limit, Strategy::Hlt)?))
}

fn fact_c(spec: &AmbientSpec, opts: &FactOptions) -> Result<Vec<FactReport>, EngineError> {
    let name_int = "c2-fact-c: Delta = Gamma32 ∩ Gamma34 = Gamma32 ∩ Gamma35";
    let name_pos =
        "c2-fact-c: Delta normal of index 3 in Gamma34 and Gamma35, index 3 but not normal in Gamma32";
    let name_s3 =
        "c2-fact-c: Delta's class unique among index-3 classes of Gamma32 with four distinct homomorphisms onto S3";
    let t32 = ambient_table(spec, "Gamma32", opts)?;
    let t34 = ambient_table(spec, "Gamma34", opts)?;
    let t35 = ambient_table(spec, "Gamma35", opts)?;
    let d4 = intersect_tables(&t32, &t34);
    let d5 = intersect_tables(&t32, &t35);
    let mut out = Vec::new();
    if d4.canonical_form() != d5.canonical_form() {
        out.push(FactReport::fail(name_int, "the two intersections differ".into()));
        return Ok(out);
    }
    out.push(FactReport::pass(name_int));
    let delta_words = d4.subgroup_words.clone();

    let mut position_ok = true;
    let mut why = String::new();
    for (label, t, want_normal) in [("Gamma34", &t34, true), ("Gamma35", &t35, true), ("Gamma32", &t32, false)] {
        match relative_position(t, &delta_words, opts)? {
            None => {
                position_ok = false;
                why = format!("Delta is not contained in {label}");
                break;
            }
            Some(rel) => {
                if rel.index() != 3 {
                    position_ok = false;
                    why = format!("Delta has index {} in {label}", rel.index());
                    break;
                }
                if rel.is_normal() != want_normal {
                    position_ok = false;
                    why = format!(
                        "Delta is {}normal in {label}",
                        if want_normal { "not " } else { "" }
                    );
                    break;
                }
            }
        }
    }
    out.push(if position_ok {
        FactReport::pass(name_pos)
    } else {
        FactReport::fail(name_pos, why)
    });

    // both readings of "four distinct homomorphisms onto S3" per index-3
    // class of Gamma32
    let (_, classes32) = index3_classes_of(spec, "Gamma32", opts)?;
    let s3 = catalog::GroupCatalogEntry::build(catalog::symmetric(3))?;
    let delta_rel = match relative_position(&t32, &delta_words, opts)? {
        Some(r) => r,
        None => {
            out.push(FactReport::fail(name_s3, "Delta is not contained in Gamma32".into()));
            return Ok(out);
        }
    };
    let delta_inv = delta_rel.conjugacy_invariant();
    let mut epi_reading = Vec::new(); // classes with epi_count == 4
    let mut kernel_reading = Vec::new(); // classes with quotient_count == 4
    let mut delta_found = false;
    let mut delta_values = (0u64, 0u64);
    for (c, _, _) in &classes32 {
        let mut rp = reidemeister_schreier(&c.table);
        rp.simplify(crate::rewrite::DEFAULT_TIETZE_BUDGET);
        let prof = quotient_profile(&rp.presentation, &s3, opts.census_budget)?;
        let is_delta = c.table.conjugacy_invariant() == delta_inv;
        if is_delta {
            delta_found = true;
            delta_values = (prof.epi_count, prof.quotient_count);
        }
        if prof.epi_count == 4 {
            epi_reading.push(c.class_size);
        }
        if prof.quotient_count == 4 {
            kernel_reading.push(c.class_size);
        }
    }
    if !delta_found {
        out.push(FactReport::fail(
            name_s3,
            "Delta's class not found among index-3 classes of Gamma32".into(),
        ));
        return Ok(out);
    }
    let epi_ok = epi_reading.len() == 1 && delta_values.0 == 4;
    let ker_ok = kernel_reading.len() == 1 && delta_values.1 == 4;
    out.push(if epi_ok || ker_ok {
        FactReport::pass(&format!(
            "{name_s3} [holds under the {} reading; Delta has epi_count={} quotient_count={}]",
            if epi_ok { "epimorphism-count" } else { "kernel-count" },
            delta_values.0,
            delta_values.1
        ))
    } else {
        FactReport::fail(
            name_s3,
            format!(
                "neither reading holds: epi_count={} quotient_count={}",
                delta_values.0, delta_values.1
            ),
        )
    });
    Ok(out)
}

/// The common-cover fact for a pair (X, X'): X has a unique index-6 subgroup
/// class that is normal with quotient S3, and that same subgroup is normal of
/// index 6 in X' with cyclic quotient Z/6. Subgroup names in the spec:
/// `left`, `right`.
pub fn verify_common_cover(
    spec: Option<&AmbientSpec>,
    left: &str,
    right: &str,
    opts: &FactOptions,
) -> Result<Vec<FactReport>, EngineError> {
    let name = format!(
        "common-cover: unique index-6 normal S3-quotient class of {left}, also normal Z/6 in {right}"
    );
    let Some(spec) = spec else {
        return Ok(vec![FactReport::unverifiable(&name, UNVERIFIABLE_MSG)]);
    };
    for n in [left, right] {
        if !spec.subgroups.contains_key(n) {
            return Ok(vec![FactReport::unverifiable(
                &name,
                &format!("{UNVERIFIABLE_MSG}: missing subgroup {n}"),
            )]);
        }
    }
    let t_left = ambient_table(spec, left, opts)?;
    let t_right = ambient_table(spec, right, opts)?;
    let mut rp = reidemeister_schreier(&t_left);
    rp.simplify(crate::rewrite::DEFAULT_TIETZE_BUDGET);
    let pres = Arc::new(rp.presentation.clone());
    let classes = low_index_subgroups(&pres, 6, opts.node_budget)?;
    let mut s3_normal = Vec::new();
    for c in classes.iter().filter(|c| c.index == 6 && c.normal) {
        let perms = c.table.permutation_representation();
        let order = closure_size(&perms, c.index, c.index + 1);
        if order != Some(6) {
            return Ok(vec![FactReport::fail(
                &name,
                "normal index-6 class with quotient order != 6".into(),
            )]);
        }
        let nonabelian = perms.iter().enumerate().any(|(i, p)| {
            perms.iter().skip(i + 1).any(|q| !p.commutes_with(q))
        });
        if nonabelian {
            s3_normal.push(c);
        }
    }
    if s3_normal.is_empty() {
        return Ok(vec![FactReport::fail(&name, "no normal index-6 S3-quotient class".into())]);
    }
    let mut matching = 0usize;
    for c in &s3_normal {
        let lifted = lift_to_ambient(&c.table, &rp.generator_ambient_words);
        match relative_position(&t_right, &lifted, opts)? {
            None => continue,
            Some(rel) => {
                if rel.index() != 6 || !rel.is_normal() {
                    continue;
                }
                let perms = rel.permutation_representation();
                let abelian = perms.iter().enumerate().all(|(i, p)| {
                    perms.iter().skip(i + 1).all(|q| p.commutes_with(q))
                });
                if abelian {
                    matching += 1;
                }
            }
        }
    }
    Ok(vec![if s3_normal.len() == 1 && matching == 1 {
        FactReport::pass(&name)
    } else {
        FactReport::fail(
            &name,
            format!(
                "{} normal S3-quotient classes, {} also Z/6 over {right}",
                s3_normal.len(),
                matching
            ),
        )
    }])
}

//! Abelianization H_1 = G/[G,G] via Smith normal form, H_1 of finite-index
//! subgroups via Reidemeister-Schreier, and H_1 of the maximal abelian cover
//! (the commutator subgroup, when H_1 is finite).

use crate::coset::CosetTable;
use crate::error::AbelianError;
use crate::perm::Perm;
use crate::presentation::Presentation;
use crate::rewrite::reidemeister_schreier;
use crate::snf::{cokernel_invariants, IntegerMatrix, InvariantFactors};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::sync::Arc;

/// H_1 of a presentation together with where each generator lands.
#[derive(Debug, Clone)]
pub struct Abelianization {
    pub invariants: InvariantFactors,
    /// per generator: coordinates in the torsion part, reduced mod each factor
    pub torsion_images: Vec<Vec<BigInt>>,
    /// per generator: coordinates in the free part Z^free_rank
    pub free_images: Vec<Vec<BigInt>>,
}

/// Exponent-sum matrix, one row per relator, one column per generator.
pub fn abelianization_matrix(p: &Presentation) -> IntegerMatrix {
    let mut m = IntegerMatrix::zero(p.relators.len(), p.rank());
    for (i, r) in p.relators.iter().enumerate() {
        for j in 0..p.rank() {
            m[(i, j)] = BigInt::from(r.exponent_sum(j));
        }
    }
    m
}

pub fn abelianization(p: &Presentation) -> Abelianization {
    let m = abelianization_matrix(p);
    let (invariants, snf) = cokernel_invariants(&m);
    // With U*M*V = S, the change of basis w = xV turns the row span of M into
    // the span of the diagonal, so generator j maps to row j of V.
    let diag = snf.diagonal();
    let torsion_cols: Vec<usize> =
        (0..diag.len()).filter(|&i| diag[i] != BigInt::from(1)).collect();
    let free_cols: Vec<usize> = (diag.len()..p.rank()).collect();
    let mut torsion_images = Vec::with_capacity(p.rank());
    let mut free_images = Vec::with_capacity(p.rank());
    for j in 0..p.rank() {
        torsion_images.push(
            torsion_cols
                .iter()
                .enumerate()
                .map(|(t, &c)| snf.v[(j, c)].mod_floor(&invariants.torsion[t]))
                .collect(),
        );
        free_images.push(free_cols.iter().map(|&c| snf.v[(j, c)].clone()).collect());
    }
    Abelianization { invariants, torsion_images, free_images }
}

/// H_1 of the point stabilizer of a coset table: rewrite with
/// Reidemeister-Schreier, simplify, abelianize.
pub fn h1_of_subgroup(table: &CosetTable, tietze_budget: u64) -> InvariantFactors {
    let mut r = reidemeister_schreier(table);
    r.simplify(tietze_budget);
    abelianization(&r.presentation).invariants
}

/// Coset table of the commutator subgroup, built directly as the translation
/// action of the generators on the finite group H_1. Fails if H_1 is infinite
/// or larger than `limit`.
pub fn abelian_cover_table(
    p: &Arc<Presentation>,
    limit: usize,
) -> Result<CosetTable, AbelianError> {
    let ab = abelianization(p);
    if !ab.invariants.is_finite() {
        return Err(AbelianError::InfiniteAbelianization {
            free_rank: ab.invariants.free_rank,
        });
    }
    let order = ab
        .invariants
        .torsion_order()
        .to_usize()
        .filter(|&n| n <= limit)
        .ok_or(crate::error::CosetError::LimitExceeded { limit })?;
    let moduli: Vec<u64> = ab
        .invariants
        .torsion
        .iter()
        .map(|t| t.to_u64().expect("torsion factor fits u64 when order fits usize"))
        .collect();
    // mixed-radix encoding of tuples in ⊕ Z/t_i; generator g translates by
    // its torsion image
    let offsets: Vec<Vec<u64>> = ab
        .torsion_images
        .iter()
        .map(|img| img.iter().map(|x| x.to_u64().unwrap()).collect())
        .collect();
    let decode = |mut n: usize| -> Vec<u64> {
        let mut t = Vec::with_capacity(moduli.len());
        for &m in moduli.iter().rev() {
            t.push(n as u64 % m);
            n /= m as usize;
        }
        t.reverse();
        t
    };
    let encode = |t: &[u64]| -> usize {
        let mut n = 0usize;
        for (i, &m) in moduli.iter().enumerate() {
            n = n * m as usize + t[i] as usize;
        }
        n
    };
    let perms: Vec<Perm> = (0..p.rank())
        .map(|g| {
            Perm::from_images(
                (0..order)
                    .map(|c| {
                        let mut t = decode(c);
                        for (i, x) in t.iter_mut().enumerate() {
                            *x = (*x + offsets[g][i]) % moduli[i];
                        }
                        encode(&t) as u32
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(CosetTable::from_action(p.clone(), Vec::new(), &perms))
}

/// H_1 of the maximal abelian cover: H_1 of the commutator subgroup.
pub fn abelian_cover_h1(
    p: &Arc<Presentation>,
    limit: usize,
    tietze_budget: u64,
) -> Result<InvariantFactors, AbelianError> {
    let table = abelian_cover_table(p, limit)?;
    Ok(h1_of_subgroup(&table, tietze_budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use num_traits::Zero;
    use crate::rewrite::DEFAULT_TIETZE_BUDGET;

    fn pres(text: &str) -> Arc<Presentation> {
        Arc::new(parse_presentation("T", text).unwrap())
    }

    #[test]
    fn h1_of_standard_groups() {
        assert_eq!(abelianization(&pres("< a, b | a^2, b^3, (a*b)^2 >")).invariants.display(), "Z/2");
        assert_eq!(abelianization(&pres("< a, b | >")).invariants.display(), "Z^2");
        assert_eq!(
            abelianization(&pres("< a, b | a*b*a*b^-1 >")).invariants.display(),
            "Z x Z/2"
        );
        // trefoil knot group
        assert_eq!(abelianization(&pres("< a, b | a^2*b^-3 >")).invariants.display(), "Z");
        // quaternion group
        assert_eq!(
            abelianization(&pres("< a, b | a^4, a^2*b^-2, b^-1*a*b*a >")).invariants.display(),
            "Z/2 x Z/2"
        );
    }

    #[test]
    fn generator_images_kill_relators() {
        let p = pres("< a, b, c | a^2*b^4, b^6*c^2, c^10 >");
        let ab = abelianization(&p);
        assert!(ab.invariants.is_finite());
        for r in &p.relators {
            for (t, modulus) in ab.invariants.torsion.iter().enumerate() {
                let mut sum = BigInt::zero();
                for j in 0..p.rank() {
                    sum += BigInt::from(r.exponent_sum(j)) * &ab.torsion_images[j][t];
                }
                assert!(sum.mod_floor(modulus).is_zero());
            }
        }
    }

    #[test]
    fn commutator_subgroup_of_s3() {
        // H_1(S3) = Z/2; the abelian cover is A3 with H_1 = Z/3
        let p = pres("< a, b | a^2, b^3, (a*b)^2 >");
        let t = abelian_cover_table(&p, 1000).unwrap();
        assert_eq!(t.index(), 2);
        assert!(t.is_normal());
        let h1 = abelian_cover_h1(&p, 1000, DEFAULT_TIETZE_BUDGET).unwrap();
        assert_eq!(h1.display(), "Z/3");
    }

    #[test]
    fn commutator_subgroup_of_q8_is_center() {
        let p = pres("< a, b | a^4, a^2*b^-2, b^-1*a*b*a >");
        let t = abelian_cover_table(&p, 1000).unwrap();
        assert_eq!(t.index(), 4);
        assert!(t.is_normal());
        let h1 = abelian_cover_h1(&p, 1000, DEFAULT_TIETZE_BUDGET).unwrap();
        assert_eq!(h1.display(), "Z/2");
    }

    #[test]
    fn abelian_group_has_trivial_cover_h1() {
        let p = pres("< a | a^6 >");
        let t = abelian_cover_table(&p, 1000).unwrap();
        assert_eq!(t.index(), 6);
        let h1 = abelian_cover_h1(&p, 1000, DEFAULT_TIETZE_BUDGET).unwrap();
        assert!(h1.is_trivial());
        assert_eq!(h1.display(), "1");
    }

    #[test]
    fn infinite_h1_is_an_error() {
        let p = pres("< a, b | >");
        let e = abelian_cover_h1(&p, 1000, DEFAULT_TIETZE_BUDGET).unwrap_err();
        assert!(matches!(e, AbelianError::InfiniteAbelianization { free_rank: 2 }));
    }

    #[test]
    fn cover_larger_than_limit_is_an_error() {
        let p = pres("< a | a^100 >");
        let e = abelian_cover_table(&p, 50).unwrap_err();
        assert!(matches!(
            e,
            AbelianError::Coset(crate::error::CosetError::LimitExceeded { limit: 50 })
        ));
    }

    #[test]
    fn h1_of_subgroup_matches_direct_presentation() {
        // index-3 subgroup <a> of A4 is Z/2 x Z/2 after rewriting? no:
        // the derived subgroup V4 of A4 has H_1 = (Z/2)^2
        let p = pres("< a, b | a^3, b^3, (a*b)^2 >");
        let t = abelian_cover_table(&p, 1000).unwrap();
        assert_eq!(t.index(), 3); // H_1(A4) = Z/3
        let h1 = h1_of_subgroup(&t, DEFAULT_TIETZE_BUDGET);
        assert_eq!(h1.display(), "Z/2 x Z/2");
    }
}

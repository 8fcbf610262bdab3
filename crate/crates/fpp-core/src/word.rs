//! Words in a free group, stored run-length as (generator, signed exponent) syllables.

use serde::{Deserialize, Serialize};

/// A freely reduced word. The syllable list never contains a zero exponent
/// and never has two adjacent syllables on the same generator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    syllables: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { syllables: Vec::new() }
    }

    /// Single generator raised to a power.
    pub fn power(gen: usize, exp: i64) -> Self {
        Word::from_syllables(vec![(gen, exp)])
    }

    pub fn generator(gen: usize) -> Self {
        Word::power(gen, 1)
    }

    /// Build from raw syllables, normalizing: zero exponents are dropped and
    /// adjacent syllables on the same generator merge (with cascading).
    /// For run-length storage this normalization is exactly free reduction.
    pub fn from_syllables(raw: Vec<(usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(raw.len());
        for (g, e) in raw {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if *le == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { syllables: out }
    }

    /// Build from single letters (generator, ±1).
    pub fn from_letters<I: IntoIterator<Item = (usize, i8)>>(letters: I) -> Self {
        Word::from_syllables(letters.into_iter().map(|(g, s)| (g, s as i64)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    /// Number of letters in the fully expanded word.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Expanded letters, one (generator, sign) pair per letter.
    pub fn letters(&self) -> Vec<(usize, i8)> {
        let mut out = Vec::with_capacity(self.len());
        for &(g, e) in &self.syllables {
            let s: i8 = if e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                out.push((g, s));
            }
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut raw = self.syllables.clone();
        raw.extend_from_slice(&other.syllables);
        Word::from_syllables(raw)
    }

    pub fn conjugate_by(&self, t: &Word) -> Word {
        t.inverse().concat(self).concat(t)
    }

    /// [a, b] = a^-1 b^-1 a b
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().concat(&b.inverse()).concat(a).concat(b)
    }

    /// Cyclically reduced form (conjugate of self); used for relator scanning.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = self.syllables.clone();
        while s.len() >= 2 {
            let (fg, fe) = s[0];
            let (lg, le) = *s.last().unwrap();
            if fg != lg {
                break;
            }
            if s.len() == 1 {
                break;
            }
            let sum = fe + le;
            s.pop();
            s.remove(0);
            if sum != 0 {
                s.insert(0, (fg, sum));
                if s.len() >= 2 && s[0].0 == s.last().unwrap().0 && s.len() > 1 {
                    continue;
                }
                break;
            }
        }
        Word::from_syllables(s)
    }

    /// Net exponent of a generator, i.e. the image in the free abelianization.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.syllables.iter().filter(|&&(g, _)| g == gen).map(|&(_, e)| e).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.syllables.iter().map(|&(g, _)| g).max()
    }

    /// Replace every occurrence of each generator by the given word
    /// (images indexed by generator).
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for &(g, e) in &self.syllables {
            let img = &images[g];
            let base = if e > 0 { img.clone() } else { img.inverse() };
            for _ in 0..e.unsigned_abs() {
                out = out.concat(&base);
            }
        }
        out
    }
}

/// Free reduction. `Word` values are reduced on construction, so this is the
/// identity; it exists as the named operation and for re-normalizing after
/// manual syllable surgery.
pub fn free_reduce(w: &Word) -> Word {
    Word::from_syllables(w.syllables.clone())
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|&(g, e)| if e == 1 { format!("g{g}") } else { format!("g{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation() {
        let w = Word::from_letters([(0, 1), (0, -1)]);
        assert!(w.is_identity());
    }

    #[test]
    fn inner_cancellation() {
        // a b b^-1 a -> a^2
        let w = Word::from_letters([(0, 1), (1, 1), (1, -1), (0, 1)]);
        assert_eq!(w, Word::power(0, 2));
    }

    #[test]
    fn reduce_idempotent() {
        let w = Word::from_syllables(vec![(0, 2), (1, -3), (0, 1)]);
        assert_eq!(free_reduce(&w), w);
        assert!(free_reduce(&w).len() <= w.len());
    }

    #[test]
    fn inverse_concat() {
        let w = Word::from_syllables(vec![(0, 2), (1, -3)]);
        assert!(w.concat(&w.inverse()).is_identity());
    }

    #[test]
    fn cyclic_reduction() {
        // a b a^-1 -> b
        let w = Word::from_letters([(0, 1), (1, 1), (0, -1)]);
        assert_eq!(w.cyclically_reduced(), Word::generator(1));
    }

    #[test]
    fn substitution() {
        // w = a*b^-1, a -> xy, b -> y  gives  x y y^-1 = x
        let w = Word::from_syllables(vec![(0, 1), (1, -1)]);
        let images = vec![Word::from_letters([(5, 1), (6, 1)]), Word::generator(6)];
        assert_eq!(w.substitute(&images), Word::generator(5));
    }
}

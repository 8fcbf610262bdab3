//! Permutations on {0, .., n-1}, stored as image vectors.

use serde::{Deserialize, Serialize};

/// Composition convention is left-to-right: `(p.compose(q))(x) = q(p(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Self {
        debug_assert!(is_bijection(&images), "not a permutation: {images:?}");
        Perm { images }
    }

    /// Build from disjoint cycles given in 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Self {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cyc in cycles {
            for i in 0..cyc.len() {
                images[cyc[i] as usize] = cyc[(i + 1) % cyc.len()];
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: self.images.iter().map(|&v| other.images[v as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e >= 0 { self.clone() } else { self.inverse() };
        let mut out = Perm::identity(self.degree());
        for _ in 0..e.unsigned_abs() {
            out = out.compose(&base);
        }
        out
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }

    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        a.inverse().compose(&b.inverse()).compose(a).compose(b)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Cycle notation on 1-based points, e.g. "(1 2 3)(4 5)"; "()" for identity.
    pub fn cycle_string(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.images[start] as usize;
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x] as usize;
            }
            out.push('(');
            out.push_str(
                &cyc.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(" "),
            );
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

fn is_bijection(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    for &v in images {
        if v as usize >= images.len() || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    true
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_left_to_right() {
        let p = Perm::from_cycles(3, &[&[0, 1]]);
        let q = Perm::from_cycles(3, &[&[1, 2]]);
        // x=0: p sends 0->1, q sends 1->2
        assert_eq!(p.compose(&q).apply(0), 2);
    }

    #[test]
    fn inverse_and_order() {
        let c = Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]);
        assert_eq!(c.order(), 5);
        assert!(c.compose(&c.inverse()).is_identity());
        assert_eq!(c.pow(-2), c.pow(3));
    }

    #[test]
    fn cycle_string_roundtrip_shape() {
        let p = Perm::from_cycles(5, &[&[0, 1, 2], &[3, 4]]);
        assert_eq!(p.cycle_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::identity(4).cycle_string(), "()");
    }
}

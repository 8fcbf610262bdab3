//! Named constructors for the finite quotient targets, all realized as
//! permutation groups: S_n, A_n, D_n (order 2n), cyclic, quaternion,
//! GL_2(F_3), AGL_1(F_8), split metacyclic products and direct products.

use crate::error::GroupError;
use crate::group::FiniteGroup;
use crate::perm::Perm;

/// A catalog row: the group plus its derived classification data.
#[derive(Debug, Clone)]
pub struct GroupCatalogEntry {
    pub group: FiniteGroup,
    pub aut_order: u64,
    pub is_nilpotent: bool,
    pub is_solvable: bool,
}

impl GroupCatalogEntry {
    pub fn build(group: FiniteGroup) -> Result<Self, GroupError> {
        let aut_order = group.automorphism_count()?;
        let (is_nilpotent, is_solvable) = group.classify()?;
        Ok(GroupCatalogEntry { group, aut_order, is_nilpotent, is_solvable })
    }
}

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    if n == 1 {
        return FiniteGroup::trivial();
    }
    let cyc: Vec<u32> = (0..n as u32).collect();
    FiniteGroup::new(&format!("Z{n}"), n, vec![Perm::from_cycles(n, &[&cyc])])
}

/// Dihedral group of order 2n acting on n points.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 3);
    let cyc: Vec<u32> = (0..n as u32).collect();
    let rot = Perm::from_cycles(n, &[&cyc]);
    let refl = Perm::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect());
    FiniteGroup::new(&format!("D{n}"), n, vec![rot, refl])
}

pub fn symmetric(n: usize) -> FiniteGroup {
    assert!(n >= 2);
    let mut gens = vec![Perm::from_cycles(n, &[&[0, 1]])];
    if n >= 3 {
        let cyc: Vec<u32> = (0..n as u32).collect();
        gens.push(Perm::from_cycles(n, &[&cyc]));
    }
    FiniteGroup::new(&format!("S{n}"), n, gens)
}

pub fn alternating(n: usize) -> FiniteGroup {
    assert!(n >= 3);
    let mut gens = vec![Perm::from_cycles(n, &[&[0, 1, 2]])];
    if n > 3 {
        let long: Vec<u32> = if n % 2 == 1 {
            (0..n as u32).collect()
        } else {
            (1..n as u32).collect()
        };
        gens.push(Perm::from_cycles(n, &[&long]));
    }
    FiniteGroup::new(&format!("A{n}"), n, gens)
}

/// Quaternion group of order 8 in its regular representation on
/// {1, -1, i, -i, j, -j, k, -k}.
pub fn quaternion8() -> FiniteGroup {
    // index: 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
    // right multiplication by i and by j
    // ij = k, jk = i, ki = j
    let mul_i = Perm::from_images(vec![2, 3, 1, 0, 7, 6, 4, 5]);
    let mul_j = Perm::from_images(vec![4, 5, 6, 7, 1, 0, 3, 2]);
    FiniteGroup::new("Q8", 8, vec![mul_i, mul_j])
}

/// GL_2(F_3) acting on the 8 nonzero vectors of F_3^2.
pub fn gl2f3() -> FiniteGroup {
    fn vec_index(v: (u8, u8)) -> Option<u32> {
        // nonzero vectors in row-major order, skipping (0,0)
        let k = (v.0 as u32) * 3 + v.1 as u32;
        if k == 0 {
            None
        } else {
            Some(k - 1)
        }
    }
    fn mat_perm(m: [[u8; 2]; 2]) -> Perm {
        let mut images = vec![0u32; 8];
        for x in 0..3u8 {
            for y in 0..3u8 {
                if let Some(i) = vec_index((x, y)) {
                    let nx = (m[0][0] * x + m[0][1] * y) % 3;
                    let ny = (m[1][0] * x + m[1][1] * y) % 3;
                    images[i as usize] = vec_index((nx, ny)).expect("invertible matrix");
                }
            }
        }
        Perm::from_images(images)
    }
    let a = mat_perm([[1, 1], [0, 1]]); // det 1
    let b = mat_perm([[0, 1], [1, 0]]); // det -1, so the pair generates all of GL_2

    FiniteGroup::new("GL2F3", 8, vec![a, b])
}

/// AGL_1(F_8): affine maps x -> a x + b over the field with 8 elements,
/// acting on the 8 field elements. Order 56.
pub fn agl1f8() -> FiniteGroup {
    // F8 = F2[t]/(t^3 + t + 1), elements as bit masks b2 b1 b0.
    fn mul(a: u8, b: u8) -> u8 {
        let mut r: u8 = 0;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 != 0 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & 0b1000 != 0 {
                a ^= 0b1011; // t^3 = t + 1
            }
        }
        r
    }
    let mult = Perm::from_images((0..8u8).map(|x| mul(0b010, x) as u32).collect());
    let trans = Perm::from_images((0..8u8).map(|x| (x ^ 1) as u32).collect());
    FiniteGroup::new("AGL1F8", 8, vec![mult, trans])
}

/// Split metacyclic group Z/m x| Z/k with the acting generator mapping
/// x -> a^j * x; regular representation on m*k points.
pub fn semidirect_metacyclic(m: u64, k: u64, a: u64, name: &str) -> Result<FiniteGroup, GroupError> {
    // a^k must be 1 mod m for the action to be a homomorphism Z/k -> Aut(Z/m)
    if m == 0 || k == 0 || num_integer::gcd(a, m) != 1 || pow_mod(a, k, m) != 1 {
        return Err(GroupError::BadSemidirectAction { action: a, expected: k, modulus: m });
    }
    let n = (m * k) as usize;
    let idx = |i: u64, j: u64| -> u32 { (i * k + j) as u32 };
    // elements (i mod m, j mod k); (i1,j1)(i2,j2) = (i1 + a^{j1} i2, j1 + j2)
    let mut s_img = vec![0u32; n]; // right multiplication by s = (1, 0)
    let mut t_img = vec![0u32; n]; // right multiplication by t = (0, 1)
    for i in 0..m {
        for j in 0..k {
            let aj = pow_mod(a, j, m);
            s_img[idx(i, j) as usize] = idx((i + aj) % m, j);
            t_img[idx(i, j) as usize] = idx(i, (j + 1) % k);
        }
    }
    Ok(FiniteGroup::new(
        name,
        n,
        vec![Perm::from_images(s_img), Perm::from_images(t_img)],
    ))
}

/// Multiplicative order of a modulo m.
pub fn order_mod(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut n = 1;
    while x != 1 {
        x = x * a % m;
        n += 1;
    }
    n
}

fn pow_mod(a: u64, e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    for _ in 0..e {
        r = r * a % m;
    }
    r
}

/// Direct product acting on the disjoint union of the factors' point sets.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let degree = a.degree + b.degree;
    let mut gens = Vec::new();
    for g in &a.generators {
        let mut images: Vec<u32> = g.images().to_vec();
        images.extend((a.degree as u32..degree as u32).collect::<Vec<_>>());
        gens.push(Perm::from_images(images));
    }
    for g in &b.generators {
        let mut images: Vec<u32> = (0..a.degree as u32).collect();
        images.extend(g.images().iter().map(|&v| v + a.degree as u32));
        gens.push(Perm::from_images(images));
    }
    FiniteGroup::new(&format!("{}x{}", a.name, b.name), degree, gens)
}

/// Resolve a catalog name. Atoms: `Sn`, `An`, `Dn` (order 2n), `Zn`, `Q8`,
/// `GL2F3`, `AGL1F8`, `G27`, `Z{m}xsZ{k}_a{r}` and `Z{m}xsZ{k}_faithful`.
/// Direct products join atoms with `*`, e.g. `S3*Z2`.
pub fn make_named_group(spec: &str) -> Result<FiniteGroup, GroupError> {
    let spec = spec.trim();
    let atoms: Vec<&str> = spec.split('*').map(|s| s.trim()).collect();
    let mut groups = atoms.into_iter().map(make_atom);
    let mut g = groups.next().ok_or_else(|| GroupError::UnknownName { name: spec.into() })??;
    for next in groups {
        g = direct_product(&g, &next?);
    }
    Ok(g)
}

fn make_atom(name: &str) -> Result<FiniteGroup, GroupError> {
    let unknown = || GroupError::UnknownName { name: name.to_string() };
    match name {
        "1" | "triv" => return Ok(FiniteGroup::trivial()),
        "Q8" => return Ok(quaternion8()),
        "GL2F3" => return Ok(gl2f3()),
        "AGL1F8" => return Ok(agl1f8()),
        // the unique nonabelian group of order 27 of the form (Z/9) x| (Z/3);
        // 4 has multiplicative order 3 mod 9
        "G27" => return semidirect_metacyclic(9, 3, 4, "G27"),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix('Z') {
        if let Some((m_str, tail)) = rest.split_once("xsZ") {
            let m: u64 = m_str.parse().map_err(|_| unknown())?;
            let (k_str, action) = match tail.split_once('_') {
                Some((k, act)) => (k, Some(act)),
                None => (tail, None),
            };
            let k: u64 = k_str.parse().map_err(|_| unknown())?;
            let a = match action {
                Some("faithful") => (2..m)
                    .find(|&a| num_integer::gcd(a, m) == 1 && order_mod(a, m) == k)
                    .ok_or(GroupError::BadSemidirectAction { action: 0, expected: k, modulus: m })?,
                Some(act) => {
                    let a: u64 =
                        act.strip_prefix('a').and_then(|s| s.parse().ok()).ok_or_else(unknown)?;
                    a
                }
                None => return Err(unknown()),
            };
            if action == Some("faithful") && order_mod(a, m) != k {
                return Err(GroupError::BadSemidirectAction { action: a, expected: k, modulus: m });
            }
            return semidirect_metacyclic(m, k, a, name);
        }
        let n: usize = rest.parse().map_err(|_| unknown())?;
        return Ok(cyclic(n));
    }
    if let Some(n) = name.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()) {
        if n >= 2 {
            return Ok(symmetric(n));
        }
    }
    if let Some(n) = name.strip_prefix('A').and_then(|s| s.parse::<usize>().ok()) {
        if n >= 3 {
            return Ok(alternating(n));
        }
    }
    if let Some(n) = name.strip_prefix('D').and_then(|s| s.parse::<usize>().ok()) {
        if n >= 3 {
            return Ok(dihedral(n));
        }
    }
    Err(unknown())
}

/// The default target battery: every group used in the quotient censuses.
pub const BATTERY: [&str; 10] =
    ["S3", "A4", "GL2F3", "AGL1F8", "D8", "D9", "D13", "Q8", "G27", "Z13xsZ4_faithful"];

/// The nilpotent members of the battery, used for the nilpotent tier.
pub const NILPOTENT_BATTERY: [&str; 3] = ["Q8", "D8", "G27"];

pub fn battery_entries() -> Result<Vec<GroupCatalogEntry>, GroupError> {
    BATTERY.iter().map(|n| GroupCatalogEntry::build(make_named_group(n)?)).collect()
}

/// Parse a catalog file: one `name = spec` (or bare `spec`) per line,
/// `#` comments allowed.
pub fn parse_catalog_file(text: &str) -> Result<Vec<(String, FiniteGroup)>, GroupError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, spec) = match line.split_once('=') {
            Some((n, s)) => (n.trim().to_string(), s.trim()),
            None => (line.to_string(), line),
        };
        out.push((name, make_named_group(spec)?));
    }
    Ok(out)
}

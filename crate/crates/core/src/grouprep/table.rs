//! Character tables of finite groups.
//!
//! Irreducible characters are found from the class-sum algebra: the central
//! characters `ω_χ(C_k) = |C_k| χ(g_k) / χ(1)` are the common eigenvectors of the
//! class multiplication matrices. The eigenspaces are split over `F_p` for a
//! prime `p ≡ 1 (mod exponent)`, where every character value reduces to a
//! root-of-unity sum, and each value is then lifted back exactly to `Q(ζ_N)` by
//! recovering the eigenvalue multiplicities of `ρ(g)`.

use std::cmp::Ordering;

use num::BigRational;
use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

use super::character::{inner_product, Character, ClassFunction};
use super::group::FiniteGroup;

/// Groups above this order must supply their character table.
pub const DEFAULT_TABLE_CAP: usize = 256;

/// How a table was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableSource {
    Computed,
    Supplied,
}

/// All irreducible characters of a group in the fixed enumeration order:
/// ascending degree, then class values compared class by class in canonical
/// class order, larger canonical coefficient vectors first. The trivial
/// character is always index 0.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: FiniteGroup,
    characters: Vec<Character>,
    source: TableSource,
}

impl CharacterTable {
    pub fn compute(group: &FiniteGroup) -> Result<Self> {
        Self::compute_with_cap(group, DEFAULT_TABLE_CAP)
    }

    pub fn compute_with_cap(group: &FiniteGroup, cap: usize) -> Result<Self> {
        if group.order() > cap {
            return Err(Error::TableTooLarge { order: group.order(), cap });
        }
        let rows = modular::irreducible_values(group)?;
        let characters = rows
            .into_iter()
            .map(|values| Character::from_class_function(ClassFunction::new(group, values)?, None))
            .collect::<Result<Vec<_>>>()?;
        let table = Self::ordered(group, characters, TableSource::Computed);
        table.validate().map_err(|e| Error::Defect(format!("computed table failed validation: {e}")))?;
        Ok(table)
    }

    /// A table supplied by the caller: one row per irreducible, each value an
    /// arbitrary (unreduced) coefficient vector over `{ζ_n^k}` for the given conductor.
    pub fn from_supplied(group: &FiniteGroup, conductor: usize, rows: Vec<Vec<Vec<BigRational>>>) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::InvalidTable("conductor must be positive".into()));
        }
        let mut characters = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            let values = row
                .into_iter()
                .map(|v| {
                    if v.len() > conductor {
                        Err(Error::InvalidTable(format!("row {i}: coefficient vector longer than conductor")))
                    } else {
                        Ok(Cyclotomic::from_full_basis(conductor, v))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            characters.push(Character::from_class_function(ClassFunction::new(group, values)?, None)?);
        }
        let table = Self::ordered(group, characters, TableSource::Supplied);
        table.validate()?;
        Ok(table)
    }

    fn ordered(group: &FiniteGroup, mut characters: Vec<Character>, source: TableSource) -> Self {
        characters.sort_by(enumeration_order);
        let characters = characters.into_iter().enumerate().map(|(i, c)| c.with_index(i)).collect();
        Self { group: group.clone(), characters, source }
    }

    /// Exact checks: count, irreducibility, row and column orthogonality,
    /// `Σ deg² = |G|`, algebraic-integer values, trivial character first.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        let r = g.num_classes();
        if self.characters.len() != r {
            return Err(Error::InvalidTable(format!("{} characters for {r} classes", self.characters.len())));
        }
        for (i, a) in self.characters.iter().enumerate() {
            if !a.is_irreducible() {
                return Err(Error::InvalidTable(format!("character {i} is not irreducible")));
            }
            if let Some(v) = a.values().iter().find(|v| !v.is_algebraic_integer()) {
                return Err(Error::InvalidTable(format!("character {i} has non-integral value {v}")));
            }
            for (j, b) in self.characters.iter().enumerate().skip(i + 1) {
                if !inner_product(a, b)?.is_zero() {
                    return Err(Error::InvalidTable(format!("characters {i} and {j} are not orthogonal")));
                }
            }
        }
        for k in 0..r {
            for l in 0..r {
                let s: Cyclotomic =
                    self.characters.iter().map(|c| c.value_at_class(k) * &c.value_at_class(l).conj()).sum();
                let expected = if k == l { (g.order() / g.classes()[k].len()) as i64 } else { 0 };
                if s.to_i64() != Some(expected) {
                    return Err(Error::InvalidTable(format!("column orthogonality fails for classes {k}, {l}")));
                }
            }
        }
        let sum_sq: u64 = self.characters.iter().map(|c| c.degree() * c.degree()).sum();
        if sum_sq != g.order() as u64 {
            return Err(Error::InvalidTable(format!("sum of squared degrees {sum_sq} != |G| = {}", g.order())));
        }
        if self.characters[0].integer_values() != Some(vec![1; r]) {
            return Err(Error::InvalidTable("trivial character is not first".into()));
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Character> {
        self.characters.get(index)
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    /// `⟨φ, χ_j⟩` for every irreducible `χ_j`.
    pub fn decompose(&self, phi: &ClassFunction) -> Result<Vec<Cyclotomic>> {
        self.characters.iter().map(|c| inner_product(phi, c)).collect()
    }

    /// Index of the irreducible with exactly these values.
    pub fn index_of(&self, phi: &ClassFunction) -> Option<usize> {
        self.characters.iter().position(|c| c.values() == phi.values())
    }

    /// Canonical JSON form: conductor is the group exponent, values as full-basis
    /// `[num, den]` vectors. Byte-identical across runs.
    pub fn to_canonical_json(&self) -> serde_json::Value {
        let n = self.group.exponent();
        let rows: Vec<serde_json::Value> = self
            .characters
            .iter()
            .map(|c| {
                serde_json::Value::Array(
                    c.values().iter().map(|v| crate::io::cyclotomic_to_json(&v.lift(lift_target(v, n)))).collect(),
                )
            })
            .collect();
        serde_json::json!({
            "order": self.group.order(),
            "class_sizes": self.group.classes().iter().map(Vec::len).collect::<Vec<_>>(),
            "class_representatives": self.group.classes().iter().map(|c| c[0]).collect::<Vec<_>>(),
            "conductor": n,
            "degrees": self.characters.iter().map(Character::degree).collect::<Vec<_>>(),
            "rows": rows,
        })
    }
}

fn lift_target(v: &Cyclotomic, n: usize) -> usize {
    if n % v.conductor() == 0 {
        n
    } else {
        num::integer::lcm(n, v.conductor())
    }
}

fn enumeration_order(a: &Character, b: &Character) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.values().iter().zip(b.values()) {
            match y.cmp(x) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

mod modular {
    use num::{BigRational, Zero};

    use super::*;

    fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        debug_assert!(a % p != 0);
        pow_mod(a, p - 2, p)
    }

    fn is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    fn prime_factors(mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                out.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Least prime `p ≡ 1 (mod exponent)` with `p > 2|G|`.
    fn choose_prime(order: u64, exponent: u64) -> u64 {
        let mut p = exponent + 1;
        while p <= 2 * order || !is_prime(p) {
            p += exponent;
        }
        p
    }

    fn primitive_root(p: u64) -> u64 {
        let factors = prime_factors(p - 1);
        (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).expect("primitive root")
    }

    type Mat = Vec<Vec<u64>>;

    /// Basis of the nullspace of an `rows × cols` matrix.
    fn nullspace(m: &Mat, cols: usize, p: u64) -> Vec<Vec<u64>> {
        let mut a = m.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            let Some(pr) = (row..a.len()).find(|&r| a[r][col] != 0) else { continue };
            a.swap(row, pr);
            let inv = inv_mod(a[row][col], p);
            for x in a[row].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..a.len() {
                if r != row && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..cols {
                        a[r][c] = (a[r][c] + p - f * a[row][c] % p) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == a.len() {
                break;
            }
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - a[i][f]) % p;
                }
                v
            })
            .collect()
    }

    /// Solves `B_P X = Y_P` on a set of rows `P` where `B` (given as columns) has full rank.
    fn restrict(a: &Mat, basis: &[Vec<u64>], p: u64) -> Mat {
        let r = a.len();
        let d = basis.len();
        // Image of each basis vector under `a`.
        let images: Vec<Vec<u64>> = basis
            .iter()
            .map(|v| (0..r).map(|i| (0..r).fold(0, |s, k| (s + a[i][k] * v[k]) % p)).collect())
            .collect();
        // Pick d independent rows of the r × d basis matrix.
        let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut chosen = Vec::new();
        for i in 0..r {
            let mut row: Vec<u64> = basis.iter().map(|v| v[i]).collect();
            for (pc, e) in &echelon {
                if row[*pc] != 0 {
                    let f = row[*pc];
                    for c in 0..d {
                        row[c] = (row[c] + p - f * e[c] % p) % p;
                    }
                }
            }
            if let Some(pc) = (0..d).find(|&c| row[c] != 0) {
                let inv = inv_mod(row[pc], p);
                for x in row.iter_mut() {
                    *x = *x * inv % p;
                }
                echelon.push((pc, row));
                chosen.push(i);
                if chosen.len() == d {
                    break;
                }
            }
        }
        // Augmented system [B_P | (AB)_P], Gauss-Jordan.
        let mut aug: Mat = chosen
            .iter()
            .map(|&i| basis.iter().map(|v| v[i]).chain(images.iter().map(|w| w[i])).collect())
            .collect();
        for col in 0..d {
            let pr = (col..d).find(|&r| aug[r][col] != 0).expect("independent rows");
            aug.swap(col, pr);
            let inv = inv_mod(aug[col][col], p);
            for x in aug[col].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..d {
                if r != col && aug[r][col] != 0 {
                    let f = aug[r][col];
                    for c in 0..2 * d {
                        aug[r][c] = (aug[r][c] + p - f * aug[col][c] % p) % p;
                    }
                }
            }
        }
        aug.into_iter().map(|row| row[d..].to_vec()).collect()
    }

    /// Characteristic polynomial by Faddeev–LeVerrier, coefficients lowest first.
    fn char_poly(m: &Mat, p: u64) -> Vec<u64> {
        let d = m.len();
        let mut coeffs = vec![0u64; d + 1];
        coeffs[d] = 1;
        let mut mk: Mat = vec![vec![0; d]; d];
        for k in 1..=d {
            // M_k = m * M_{k-1} + c_{d-k+1} I
            let mut next: Mat = vec![vec![0; d]; d];
            for i in 0..d {
                for j in 0..d {
                    next[i][j] = (0..d).fold(0, |s, l| (s + m[i][l] * mk[l][j]) % p);
                }
                next[i][i] = (next[i][i] + coeffs[d - k + 1]) % p;
            }
            mk = next;
            let tr = (0..d).fold(0, |s, i| (s + (0..d).fold(0, |t, l| (t + m[i][l] * mk[l][i]) % p)) % p);
            coeffs[d - k] = (p - tr * inv_mod(k as u64, p) % p) % p;
        }
        coeffs
    }

    fn roots(poly: &[u64], p: u64) -> Vec<u64> {
        (0..p).filter(|&x| poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0).collect()
    }

    /// Splits `basis` into common eigenspaces of `a`.
    fn split(a: &Mat, basis: Vec<Vec<u64>>, p: u64) -> Result<Vec<Vec<Vec<u64>>>> {
        let d = basis.len();
        let r = a.len();
        let restricted = restrict(a, &basis, p);
        let poly = char_poly(&restricted, p);
        let mut spaces = Vec::new();
        let mut total = 0;
        for lambda in roots(&poly, p) {
            let mut shifted = restricted.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = (row[i] + p - lambda) % p;
            }
            let coeffs = nullspace(&shifted, d, p);
            total += coeffs.len();
            let vectors: Vec<Vec<u64>> = coeffs
                .iter()
                .map(|c| (0..r).map(|i| (0..d).fold(0, |s, k| (s + c[k] * basis[k][i]) % p)).collect())
                .collect();
            spaces.push(vectors);
        }
        if total != d {
            return Err(Error::Defect("class-sum matrix is not diagonalisable over F_p".into()));
        }
        Ok(spaces)
    }

    /// Exact values of every irreducible character, one row per character,
    /// in class order; the rows are unsorted.
    pub(super) fn irreducible_values(group: &FiniteGroup) -> Result<Vec<Vec<Cyclotomic>>> {
        let n = group.order();
        let r = group.num_classes();
        let exponent = group.exponent();
        let p = choose_prime(n as u64, exponent as u64);
        let classes = group.classes();

        // a[i][j][k] = #{x ∈ C_i : x^{-1} z_k ∈ C_j}, z_k the representative of C_k.
        let mut coeff = vec![vec![vec![0u64; r]; r]; r];
        for (k, ck) in classes.iter().enumerate() {
            let z = ck[0];
            for x in 0..n {
                let i = group.class_of(x);
                let j = group.class_of(group.mul(group.inv(x), z));
                coeff[i][j][k] += 1;
            }
        }

        let identity_basis: Vec<Vec<u64>> =
            (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
        let mut spaces = vec![identity_basis];
        for a in coeff.iter().skip(1) {
            if spaces.iter().all(|s| s.len() == 1) {
                break;
            }
            let mut next = Vec::new();
            for s in spaces {
                if s.len() == 1 {
                    next.push(s);
                } else {
                    next.extend(split(a, s, p)?);
                }
            }
            spaces = next;
        }
        if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
            return Err(Error::Defect("class-sum eigenvectors did not split into one-dimensional spaces".into()));
        }

        let sizes: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();
        let inverse_class: Vec<usize> = classes.iter().map(|c| group.class_of(group.inv(c[0]))).collect();
        let w = pow_mod(primitive_root(p), (p - 1) / exponent as u64, p);

        let mut rows = Vec::with_capacity(r);
        for space in spaces {
            let v = &space[0];
            if v[0] == 0 {
                return Err(Error::Defect("central character vanishes at the identity".into()));
            }
            let norm = inv_mod(v[0], p);
            let omega: Vec<u64> = v.iter().map(|&x| x * norm % p).collect();
            let s = (0..r).fold(0, |acc, k| (acc + omega[k] * omega[inverse_class[k]] % p * inv_mod(sizes[k], p)) % p);
            let d_sq = n as u64 % p * inv_mod(s, p) % p;
            let degree = (1..=n as u64)
                .take_while(|d| d * d <= n as u64)
                .find(|d| d * d % p == d_sq)
                .ok_or_else(|| Error::Defect("no integer degree matches the central character".into()))?;
            let chi: Vec<u64> = (0..r).map(|k| degree * omega[k] % p * inv_mod(sizes[k], p) % p).collect();

            let mut values = Vec::with_capacity(r);
            for class in classes {
                let g = class[0];
                let o = group.element_order(g);
                let z = pow_mod(w, (exponent / o) as u64, p);
                let powers: Vec<u64> = (0..o).map(|l| chi[group.class_of(group.pow(g, l))]).collect();
                let inv_o = inv_mod(o as u64, p);
                let mut full = vec![BigRational::zero(); exponent];
                for e in 0..o {
                    // Multiplicity of the eigenvalue ζ_o^e of ρ(g).
                    let zinv = inv_mod(pow_mod(z, e as u64, p), p);
                    let m = (0..o)
                        .fold(0, |acc, l| (acc + powers[l] * pow_mod(zinv, l as u64, p)) % p)
                        * inv_o
                        % p;
                    if m > degree {
                        return Err(Error::Defect(format!("eigenvalue multiplicity {m} exceeds degree {degree}")));
                    }
                    full[e * (exponent / o)] = BigRational::from_integer((m as i64).into());
                }
                values.push(Cyclotomic::from_full_basis(exponent, full));
            }
            rows.push(values);
        }
        Ok(rows)
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn prime_choice() {
            assert_eq!(choose_prime(6, 6), 13);
            assert_eq!(choose_prime(2, 2), 5);
            let p = choose_prime(24, 12);
            assert!(p > 48 && p % 12 == 1 && is_prime(p));
        }

        #[test]
        fn characteristic_polynomial() {
            // [[2,1],[0,3]] has char poly x^2 - 5x + 6.
            let p = 101;
            let m = vec![vec![2, 1], vec![0, 3]];
            assert_eq!(char_poly(&m, p), vec![6, p - 5, 1]);
            assert_eq!(roots(&char_poly(&m, p), p), vec![2, 3]);
        }
    }
}

//! Lyndon basis of the free Lie algebra on `{x, y}` and its embedding into the
//! free associative algebra.
//!
//! Words are stored as bit patterns of fixed length: letter `x` is 0, `y` is 1,
//! and the first letter is the most significant bit. For words of equal length
//! this makes numeric order coincide with lexicographic order.

use std::collections::HashMap;
use std::sync::OnceLock;

/// Largest degree for which basis and structure tables are available.
pub const TABLE_DEGREE: usize = 10;

/// Default truncation degree for series computations.
pub const DEFAULT_DEGREE: usize = 8;

/// A word over `{x, y}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub len: usize,
    pub bits: usize,
}

impl Word {
    pub fn letter(&self, i: usize) -> u8 {
        ((self.bits >> (self.len - 1 - i)) & 1) as u8
    }

    pub fn letters(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.letter(i)).collect()
    }

    pub fn from_letters(letters: &[u8]) -> Word {
        let bits = letters.iter().fold(0usize, |acc, &l| (acc << 1) | l as usize);
        Word { len: letters.len(), bits }
    }

    pub fn split_at(&self, i: usize) -> (Word, Word) {
        let right_len = self.len - i;
        let right = Word { len: right_len, bits: self.bits & ((1 << right_len) - 1) };
        let left = Word { len: i, bits: self.bits >> right_len };
        (left, right)
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word { len: self.len + other.len, bits: (self.bits << other.len) | other.bits }
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in self.letters() {
            write!(f, "{}", if l == 0 { 'x' } else { 'y' })?;
        }
        Ok(())
    }
}

/// Whether `w` is strictly smaller than each of its proper rotations.
pub fn is_lyndon(letters: &[u8]) -> bool {
    let n = letters.len();
    if n == 0 {
        return false;
    }
    (1..n).all(|i| {
        let rotated = letters[i..].iter().chain(&letters[..i]);
        letters.iter().lt(rotated)
    })
}

/// All Lyndon words of exactly length `n`, lexicographically ordered (Duval).
pub fn lyndon_words(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == n {
            out.push(w.clone());
        }
        // extend periodically to length n
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Standard factorization `w = uv` where `v` is the longest proper Lyndon suffix.
pub fn standard_factorization(letters: &[u8]) -> (Vec<u8>, Vec<u8>) {
    assert!(letters.len() >= 2);
    for i in 1..letters.len() {
        if is_lyndon(&letters[i..]) {
            return (letters[..i].to_vec(), letters[i..].to_vec());
        }
    }
    unreachable!("the last letter is always a Lyndon suffix")
}

/// Necklace count `(1/d) Σ_{e|d} μ(e) 2^{d/e}`: the dimension of the degree-`d`
/// part of the free Lie algebra on two generators.
pub fn necklace_count(d: usize) -> usize {
    let mut total: i64 = 0;
    for e in 1..=d {
        if d % e == 0 {
            total += mobius(e) * (1i64 << (d / e));
        }
    }
    (total / d as i64) as usize
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            result = -result;
        }
        f += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// One basis element: the standard bracketing of a Lyndon word.
#[derive(Debug, Clone)]
pub struct BasisElement {
    pub word: Word,
    /// `(degree, index)` of the left and right factors; `None` for generators.
    pub factors: Option<((usize, usize), (usize, usize))>,
    /// Expansion in the free associative algebra, indexed by word bits.
    pub expansion: Vec<i64>,
}

/// Precomputed Lyndon bases and bracket structure constants up to [`TABLE_DEGREE`].
pub struct LieTables {
    degrees: Vec<Vec<BasisElement>>,
    index: Vec<HashMap<usize, usize>>,
    blocks: Vec<OnceLock<Vec<Vec<(usize, i64)>>>>,
}

impl LieTables {
    pub fn global() -> &'static LieTables {
        static TABLES: OnceLock<LieTables> = OnceLock::new();
        TABLES.get_or_init(|| LieTables::build(TABLE_DEGREE))
    }

    fn build(max: usize) -> LieTables {
        let mut degrees: Vec<Vec<BasisElement>> = vec![Vec::new()];
        let mut index: Vec<HashMap<usize, usize>> = vec![HashMap::new()];
        for d in 1..=max {
            let mut elems = Vec::new();
            let mut idx = HashMap::new();
            for (k, letters) in lyndon_words(d).into_iter().enumerate() {
                let word = Word::from_letters(&letters);
                let (factors, expansion) = if d == 1 {
                    let mut e = vec![0i64; 2];
                    e[word.bits] = 1;
                    (None, e)
                } else {
                    let (u, v) = standard_factorization(&letters);
                    let (du, dv) = (u.len(), v.len());
                    let iu = index[du][&Word::from_letters(&u).bits];
                    let iv = index[dv][&Word::from_letters(&v).bits];
                    let e = commutator(&degrees[du][iu].expansion, du, &degrees[dv][iv].expansion, dv);
                    (Some(((du, iu), (dv, iv))), e)
                };
                debug_assert_eq!(leading_word(&expansion), Some((word.bits, 1)));
                idx.insert(word.bits, k);
                elems.push(BasisElement { word, factors, expansion });
            }
            degrees.push(elems);
            index.push(idx);
        }
        let blocks = (0..(max + 1) * (max + 1)).map(|_| OnceLock::new()).collect();
        LieTables { degrees, index, blocks }
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn basis(&self, degree: usize) -> &[BasisElement] {
        &self.degrees[degree]
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.degrees[degree].len()
    }

    pub fn index_of(&self, word: &Word) -> Option<usize> {
        self.index.get(word.len)?.get(&word.bits).copied()
    }

    /// Structure constants `[b_i, b_j]` for `b_i` of degree `da` and `b_j` of
    /// degree `db`, stored sparsely in the degree `da + db` basis; row-major in `(i, j)`.
    pub fn bracket_block(&self, da: usize, db: usize) -> &[Vec<(usize, i64)>] {
        let max = self.max_degree();
        assert!(da + db <= max, "bracket degree {} beyond table", da + db);
        self.blocks[da * (max + 1) + db].get_or_init(|| {
            let mut rows = Vec::with_capacity(self.dim(da) * self.dim(db));
            for a in &self.degrees[da] {
                for b in &self.degrees[db] {
                    let c = commutator(&a.expansion, da, &b.expansion, db);
                    let coords = self.rewrite_integer(c, da + db).expect("commutator of Lie elements is a Lie element");
                    rows.push(coords.into_iter().enumerate().filter(|(_, v)| *v != 0).collect());
                }
            }
            rows
        })
    }

    /// Expresses a homogeneous associative polynomial in the Lyndon basis by
    /// repeatedly cancelling its smallest word. Returns `None` if it is not a Lie element.
    pub fn rewrite_integer(&self, mut v: Vec<i64>, degree: usize) -> Option<Vec<i64>> {
        let mut coords = vec![0i64; self.dim(degree)];
        while let Some((bits, c)) = leading_word(&v) {
            let k = *self.index[degree].get(&bits)?;
            coords[k] += c;
            for (slot, e) in v.iter_mut().zip(&self.degrees[degree][k].expansion) {
                *slot -= c * e;
            }
        }
        Some(coords)
    }
}

/// `ab - ba` of homogeneous associative polynomials.
pub fn commutator(a: &[i64], da: usize, b: &[i64], db: usize) -> Vec<i64> {
    let mut out = vec![0i64; 1 << (da + db)];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            out[(i << db) | j] += ca * cb;
            out[(j << da) | i] -= ca * cb;
        }
    }
    out
}

fn leading_word(v: &[i64]) -> Option<(usize, i64)> {
    v.iter().enumerate().find(|(_, c)| **c != 0).map(|(i, c)| (i, *c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_degrees() {
        let t = LieTables::global();
        let names: Vec<String> = t.basis(1).iter().map(|b| b.word.to_string()).collect();
        assert_eq!(names, ["x", "y"]);
        assert_eq!(t.dim(2), 1);
        assert_eq!(t.basis(2)[0].word.to_string(), "xy");
        assert_eq!(t.dim(6), 9);
    }

    #[test]
    fn dimensions_match_necklace_formula() {
        let t = LieTables::global();
        for d in 1..=TABLE_DEGREE {
            assert_eq!(t.dim(d), necklace_count(d), "degree {d}");
        }
        assert_eq!(necklace_count(6), 9);
    }

    #[test]
    fn lyndon_test_agrees_with_generator() {
        for n in 1..=8 {
            let brute: Vec<Vec<u8>> =
                (0..1usize << n).map(|b| Word { len: n, bits: b }.letters()).filter(|l| is_lyndon(l)).collect();
            assert_eq!(brute, lyndon_words(n));
        }
    }

    #[test]
    fn standard_factorization_examples() {
        let (u, v) = standard_factorization(&[0, 0, 1, 0, 1]);
        assert_eq!((u, v), (vec![0, 0, 1], vec![0, 1]));
        let (u, v) = standard_factorization(&[0, 1, 1]);
        assert_eq!((u, v), (vec![0, 1], vec![1]));
    }
}

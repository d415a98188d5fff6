//! Fibonacci substitution words, golden-rotation samples and coupling maps.

use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Golden mean.
pub const PHI: f64 = 1.618_033_988_749_895;

// PHI is rounded; this is the remainder so that PHI + PHI_LO is phi to ~1e-32.
const PHI_LO: f64 = -5.432_115_203_682_506e-17;

/// Largest index accepted by [`fibonacci_numbers`].
pub const MAX_FIBONACCI_INDEX: usize = 90;

/// Largest generation [`substitution_word`] will materialise (F_40 ~ 1.6e8 letters).
pub const MAX_GENERATION: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    A,
    B,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::A => 'a',
            Symbol::B => 'b',
        }
    }
}

/// A finite word over {a, b}, stored one bit per letter (`b` is a set bit).
#[derive(Clone, Default)]
pub struct Word {
    bits: BitVec<u64, Lsb0>,
    generation: Option<u32>,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_symbols<I: IntoIterator<Item = Symbol>>(symbols: I) -> Self {
        Word {
            bits: symbols.into_iter().map(|s| s == Symbol::B).collect(),
            generation: None,
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `Some(k)` when the word was built as S^{k-1}(a).
    pub fn generation(&self) -> Option<u32> {
        self.generation
    }

    pub fn get(&self, i: usize) -> Option<Symbol> {
        self.bits
            .get(i)
            .map(|b| if *b { Symbol::B } else { Symbol::A })
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Symbol> + '_ {
        self.bits
            .iter()
            .map(|b| if *b { Symbol::B } else { Symbol::A })
    }

    pub fn push(&mut self, s: Symbol) {
        self.bits.push(s == Symbol::B);
        self.generation = None;
    }

    /// Prefix of length `n` (the whole word if shorter).
    pub fn prefix(&self, n: usize) -> Word {
        let n = n.min(self.len());
        Word {
            bits: self.bits[..n].to_bitvec(),
            generation: None,
        }
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = self.bits.clone();
        bits.extend_from_bitslice(&other.bits);
        Word {
            bits,
            generation: None,
        }
    }

    /// True if some `b` is immediately followed by another `b`.
    pub fn contains_bb(&self) -> bool {
        self.bits.windows(2).any(|w| w[0] && w[1])
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl Eq for Word {}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(Symbol::as_char).collect();
        f.write_str(&s)
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses a string of `a`/`b` characters; anything else is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = BitVec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                'a' => bits.push(false),
                'b' => bits.push(true),
                other => {
                    return Err(Error::Parse(format!(
                        "invalid letter {other:?} at position {i}"
                    )))
                }
            }
        }
        Ok(Word {
            bits,
            generation: None,
        })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// F_0..=F_{k_max} with F_0 = F_1 = 1.
pub fn fibonacci_numbers(k_max: usize) -> Result<Vec<u64>> {
    if k_max > MAX_FIBONACCI_INDEX {
        return Err(Error::Size {
            what: "Fibonacci index",
            limit: MAX_FIBONACCI_INDEX as u64,
            got: k_max as u64,
        });
    }
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let v = if k < 2 { 1 } else { out[k - 1] + out[k - 2] };
        out.push(v);
    }
    Ok(out)
}

/// F_k as a usize, for k up to [`MAX_FIBONACCI_INDEX`].
pub fn fibonacci(k: usize) -> Result<usize> {
    Ok(*fibonacci_numbers(k)?.last().expect("non-empty") as usize)
}

/// S^{gen-1}(a) for the substitution a -> ab, b -> a.
pub fn substitution_word(gen: u32) -> Result<Word> {
    if gen == 0 {
        return Err(Error::Domain("generation must be at least 1".into()));
    }
    if gen > MAX_GENERATION {
        return Err(Error::Size {
            what: "generation",
            limit: MAX_GENERATION as u64,
            got: gen as u64,
        });
    }
    // w_{k+2} = w_{k+1} w_k
    let mut prev: BitVec<u64, Lsb0> = bitvec![u64, Lsb0; 0];
    let mut cur: BitVec<u64, Lsb0> = bitvec![u64, Lsb0; 0, 1];
    if gen == 1 {
        cur = prev.clone();
    }
    for _ in 2..gen {
        let mut next = BitVec::with_capacity(cur.len() + prev.len());
        next.extend_from_bitslice(&cur);
        next.extend_from_bitslice(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(Word {
        bits: cur,
        generation: Some(gen),
    })
}

/// Fractional part of `j * phi + offset`, with the product carried in
/// double-double precision so long windows stay exact.
fn rotation_phase(j: u64, offset: f64) -> f64 {
    let jf = j as f64;
    let hi = jf * PHI;
    let lo = jf.mul_add(PHI, -hi) + jf * PHI_LO;
    let int = hi.floor();
    let frac = (hi - int) + lo + offset;
    frac - frac.floor()
}

/// Length-`n` window of the golden rotation word with phase `offset`.
///
/// Letter j (1-based) is `a` iff frac(j*phi + offset) lies in [2 - phi, 1),
/// so offset 0 reproduces the prefixes of the substitution fixed point.
pub fn rotation_word(n: usize, offset: f64) -> Result<Word> {
    if !offset.is_finite() {
        return Err(Error::Domain(format!("offset must be finite, got {offset}")));
    }
    let offset = offset.rem_euclid(1.0);
    let lower = 2.0 - PHI;
    let bits = (1..=n as u64)
        .map(|j| rotation_phase(j, offset) < lower)
        .collect();
    Ok(Word {
        bits,
        generation: None,
    })
}

/// (number of a's, number of b's).
pub fn letter_counts(w: &Word) -> (usize, usize) {
    let n_b = w.bits.count_ones();
    (w.len() - n_b, n_b)
}

/// Replaces each letter by its value under `map`.
pub fn modulate<F: Fn(Symbol) -> f64>(w: &Word, map: F) -> Vec<f64> {
    w.iter().map(map).collect()
}

/// Per-letter couplings p and fields q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingMap {
    pub p_a: f64,
    pub p_b: f64,
    pub q_a: f64,
    pub q_b: f64,
}

impl CouplingMap {
    pub fn new(p_a: f64, p_b: f64, q_a: f64, q_b: f64) -> Result<Self> {
        let c = CouplingMap { p_a, p_b, q_a, q_b };
        c.validate()?;
        Ok(c)
    }

    /// Zero-field couplings.
    pub fn couplings(p_a: f64, p_b: f64) -> Result<Self> {
        Self::new(p_a, p_b, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.p_a, self.p_b, self.q_a, self.q_b]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("couplings must be finite".into()));
        }
        if self.p_a <= 0.0 || self.p_b <= 0.0 {
            return Err(Error::Domain(format!(
                "couplings must be positive (p_a = {}, p_b = {})",
                self.p_a, self.p_b
            )));
        }
        if self.q_a < 0.0 || self.q_b < 0.0 {
            return Err(Error::Domain(format!(
                "fields must be non-negative (q_a = {}, q_b = {})",
                self.q_a, self.q_b
            )));
        }
        Ok(())
    }

    pub fn p(&self, s: Symbol) -> f64 {
        match s {
            Symbol::A => self.p_a,
            Symbol::B => self.p_b,
        }
    }

    pub fn q(&self, s: Symbol) -> f64 {
        match s {
            Symbol::A => self.q_a,
            Symbol::B => self.q_b,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn fibonacci_examples() {
        assert_eq!(fibonacci_numbers(5).unwrap(), vec![1, 1, 2, 3, 5, 8]);
        assert_eq!(fibonacci_numbers(0).unwrap(), vec![1]);
        assert_eq!(*fibonacci_numbers(10).unwrap().last().unwrap(), 89);
        assert_eq!(
            *fibonacci_numbers(90).unwrap().last().unwrap(),
            4_660_046_610_375_530_309
        );
        assert!(matches!(fibonacci_numbers(91), Err(Error::Size { .. })));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitution_word(1).unwrap().to_string(), "a");
        assert_eq!(substitution_word(2).unwrap().to_string(), "ab");
        assert_eq!(substitution_word(4).unwrap().to_string(), "abaab");
        assert_eq!(substitution_word(5).unwrap().to_string(), "abaababa");
        assert_eq!(substitution_word(7).unwrap().generation(), Some(7));
        assert!(substitution_word(0).is_err());
        assert!(matches!(
            substitution_word(MAX_GENERATION + 1),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn substitution_matches_letterwise_rule() {
        let mut s = String::from("a");
        for gen in 1..=15 {
            assert_eq!(substitution_word(gen).unwrap().to_string(), s);
            s = s
                .chars()
                .map(|c| if c == 'a' { "ab" } else { "a" })
                .collect();
        }
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotation_word(8, 0.0).unwrap().to_string(), "abaababa");
        assert_eq!(rotation_word(1, 0.0).unwrap().to_string(), "a");
        let (na, nb) = letter_counts(&rotation_word(13, 0.37).unwrap());
        assert!((na as i64 - 8).abs() <= 1 && (nb as i64 - 5).abs() <= 1);
        assert!(rotation_word(0, 0.0).unwrap().is_empty());
        assert!(rotation_word(5, f64::NAN).is_err());
    }

    #[test]
    fn rotation_reproduces_substitution() {
        let fib = fibonacci_numbers(25).unwrap();
        for k in 2..=25u32 {
            let n = fib[k as usize] as usize;
            assert_eq!(
                rotation_word(n, 0.0).unwrap(),
                substitution_word(k).unwrap(),
                "k = {k}"
            );
        }
    }

    #[test]
    fn letter_count_examples() {
        assert_eq!(letter_counts(&w("abaab")), (3, 2));
        assert_eq!(letter_counts(&Word::new()), (0, 0));
        assert_eq!(letter_counts(&substitution_word(10).unwrap()), (55, 34));
    }

    #[test]
    fn modulate_examples() {
        let map = |s| if s == Symbol::A { 1.0 } else { 2.0 };
        assert_eq!(modulate(&w("ab"), map), vec![1.0, 2.0]);
        assert_eq!(modulate(&w("abaab"), map), vec![1.0, 2.0, 1.0, 1.0, 2.0]);
        let (x, y) = (0.3, 1.7);
        let sum: f64 = modulate(&substitution_word(6).unwrap(), |s| {
            if s == Symbol::A {
                x
            } else {
                y
            }
        })
        .iter()
        .sum();
        assert!((sum - (8.0 * x + 5.0 * y)).abs() < 1e-12);
    }

    #[test]
    fn word_parse_and_serde() {
        assert!("abc".parse::<Word>().is_err());
        let word = w("abaab");
        let json = serde_json::to_string(&word).unwrap();
        assert_eq!(json, "\"abaab\"");
        let back: Word = serde_json::from_str(&json).unwrap();
        assert_eq!(back, word);
        assert_eq!(word.prefix(3).to_string(), "aba");
        assert_eq!(w("ab").concat(&w("a")).to_string(), "aba");
    }

    #[test]
    fn coupling_map_validation() {
        assert!(CouplingMap::new(1.0, 2.0, 0.0, 0.5).is_ok());
        assert!(CouplingMap::new(0.0, 2.0, 0.0, 0.0).is_err());
        assert!(CouplingMap::new(1.0, 2.0, -0.1, 0.0).is_err());
        assert!(CouplingMap::new(1.0, f64::INFINITY, 0.0, 0.0).is_err());
    }
}

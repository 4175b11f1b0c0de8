//! Words in the moves, their fixed points, and the reduced-word classification.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{apply_move, MarkoffGraph, Move};
use crate::surface::Triple;

/// Longest word accepted by the brute-force fixed point search.
pub const MAX_BRUTE_WORD: usize = 12;

/// A word written left to right and applied right to left: "21" means m₂ ∘ m₁.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<Move>);

impl Word {
    pub fn new(letters: Vec<Move>) -> Self {
        Self(letters)
    }

    /// (m₂ m₁)^L, written "2121…21".
    pub fn alternating(l: usize) -> Self {
        Self([Move::M2, Move::M1].repeat(l))
    }

    pub fn letters(&self) -> &[Move] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Cancels adjacent repeated letters until none remain.
    pub fn normalized(&self) -> Word {
        let mut out: Vec<Move> = Vec::with_capacity(self.0.len());
        for &m in &self.0 {
            if out.last() == Some(&m) {
                out.pop();
            } else {
                out.push(m);
            }
        }
        Word(out)
    }

    pub fn apply(&self, v: Triple, p: u64) -> Triple {
        self.0.iter().rev().fold(v, |t, &m| apply_move(t, m, p))
    }

    /// The vertices visited while applying the word, starting with `v`.
    pub fn trajectory(&self, v: Triple, p: u64) -> Vec<Triple> {
        let mut out = vec![v];
        let mut t = v;
        for &m in self.0.iter().rev() {
            t = apply_move(t, m, p);
            out.push(t);
        }
        out
    }

    /// Relabels letter j as `sigma[j-1] + 1`, matching [`Triple::permuted`].
    pub fn permuted(&self, sigma: [usize; 3]) -> Word {
        Word(
            self.0
                .iter()
                .map(|m| Move::from_coordinate(sigma[m.coordinate()]))
                .collect(),
        )
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    fn rotated(&self, r: usize) -> Word {
        let mut v = self.0.clone();
        v.rotate_left(r);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            write!(f, "{}", m.number())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '1' => Ok(Move::M1),
                '2' => Ok(Move::M2),
                '3' => Ok(Move::M3),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;
    fn try_from(s: String) -> Result<Word> {
        s.parse()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFixedPoints {
    pub word: Word,
    /// Sorted, without duplicates.
    pub solutions: Vec<Triple>,
    pub method: Method,
}

impl WordFixedPoints {
    pub fn new(word: Word, mut solutions: Vec<Triple>, method: Method) -> Self {
        solutions.sort_unstable();
        solutions.dedup();
        Self { word, solutions, method }
    }

    /// True when every listed triple is fixed by the word.
    pub fn verify(&self, p: u64) -> bool {
        self.solutions.iter().all(|&t| self.word.apply(t, p) == t)
    }

    /// Image under a coordinate permutation: fixed points of the relabelled word.
    pub fn permuted(&self, sigma: [usize; 3]) -> Self {
        Self::new(
            self.word.permuted(sigma),
            self.solutions.iter().map(|t| t.permuted(sigma)).collect(),
            self.method,
        )
    }
}

/// Applies the word to every vertex and keeps those it fixes.
pub fn word_fixed_points_brute(g: &MarkoffGraph, word: &Word) -> Result<WordFixedPoints> {
    if !word.is_reduced() {
        return Err(Error::NonReducedWord {
            word: word.to_string(),
            normalized: word.normalized().to_string(),
        });
    }
    if word.len() > MAX_BRUTE_WORD {
        return Err(Error::GuardExceeded {
            what: "word length",
            limit: MAX_BRUTE_WORD,
            actual: word.len(),
        });
    }
    let p = g.p();
    let solutions = g
        .vertices()
        .par_iter()
        .copied()
        .filter(|&t| word.apply(t, p) == t)
        .collect();
    Ok(WordFixedPoints::new(word.clone(), solutions, Method::BruteForce))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordCategory {
    /// Could bound a short face.
    FaceRelevant,
    /// Some move occurs exactly once, so the closed walk backtracks through a self-edge.
    LoneLetter,
    /// First and last letters agree: conjugate to a shorter word.
    Conjugate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordClass {
    /// Lexicographically largest member ending in "21".
    pub representative: Word,
    pub category: WordCategory,
    pub size: usize,
}

pub const MAX_CLASSIFIED_LENGTH: usize = 8;

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn class_of(w: &Word, cyclic: bool) -> BTreeSet<Word> {
    let rotations: Vec<Word> = if cyclic {
        (0..w.len()).map(|r| w.rotated(r)).collect()
    } else {
        vec![w.clone()]
    };
    let mut out = BTreeSet::new();
    for r in rotations {
        for base in [r.clone(), r.reversed()] {
            for sigma in PERMUTATIONS {
                out.insert(base.permuted(sigma));
            }
        }
    }
    out
}

fn reduced_words(len: usize) -> Vec<Word> {
    let mut words = vec![Word::default()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                Move::ALL.into_iter().filter_map(move |m| {
                    (w.0.last() != Some(&m)).then(|| {
                        let mut v = w.0.clone();
                        v.push(m);
                        Word(v)
                    })
                })
            })
            .collect();
    }
    words
}

/// Reduced words of lengths 2..=`length` up to cyclic shift, reversal and relabelling of
/// the moves, each class tagged with its category. Words whose first and last letters agree
/// are not cyclically reduced and are classed without rotation.
pub fn reduced_words_upto(length: usize) -> Result<Vec<WordClass>> {
    if length > MAX_CLASSIFIED_LENGTH {
        return Err(Error::GuardExceeded {
            what: "word length",
            limit: MAX_CLASSIFIED_LENGTH,
            actual: length,
        });
    }
    let ends_21 = |w: &Word| w.0.ends_with(&[Move::M2, Move::M1]);
    let mut out = Vec::new();
    for len in 2..=length {
        let mut seen = BTreeSet::new();
        for w in reduced_words(len) {
            if seen.contains(&w) {
                continue;
            }
            let conjugate = w.0.first() == w.0.last();
            let class = class_of(&w, !conjugate);
            let representative = class
                .iter()
                .filter(|m| ends_21(m))
                .max()
                .expect("every class has a member ending in 21")
                .clone();
            let lone = Move::ALL
                .iter()
                .any(|m| w.0.iter().filter(|&l| l == m).count() == 1);
            let category = if conjugate {
                WordCategory::Conjugate
            } else if lone {
                WordCategory::LoneLetter
            } else {
                WordCategory::FaceRelevant
            };
            out.push(WordClass {
                representative,
                category,
                size: class.len(),
            });
            seen.extend(class);
        }
    }
    out.sort_by(|a, b| {
        (a.representative.len(), &a.representative).cmp(&(b.representative.len(), &b.representative))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face_relevant(n: usize) -> Vec<String> {
        reduced_words_upto(n)
            .unwrap()
            .into_iter()
            .filter(|c| c.category == WordCategory::FaceRelevant)
            .map(|c| c.representative.to_string())
            .collect()
    }

    #[test]
    fn classification_examples() {
        assert!(face_relevant(2).is_empty());
        assert_eq!(face_relevant(4), ["2121"]);
        assert_eq!(face_relevant(6), ["2121", "212121", "321321", "323121"]);
        assert!(reduced_words_upto(9).is_err());
    }

    #[test]
    fn classes_partition_reduced_words() {
        let classes = reduced_words_upto(8).unwrap();
        for len in 2..=8 {
            let total: usize = classes
                .iter()
                .filter(|c| c.representative.len() == len)
                .map(|c| c.size)
                .sum();
            assert_eq!(total, 3 << (len - 1), "length {len}");
        }
    }

    #[test]
    fn word_parsing_and_normalising() {
        let w: Word = "321321".parse().unwrap();
        assert!(w.is_reduced());
        assert_eq!(w.to_string(), "321321");
        assert!("124".parse::<Word>().is_err());
        let n: Word = "1221".parse().unwrap();
        assert_eq!(n.normalized().to_string(), "");
        assert_eq!(Word::alternating(2).to_string(), "2121");
        assert_eq!("321".parse::<Word>().unwrap().permuted([1, 2, 0]).to_string(), "132");
    }

    #[test]
    fn brute_force_rejects_non_reduced() {
        let g = MarkoffGraph::build(7, 0).unwrap();
        let err = word_fixed_points_brute(&g, &"11".parse().unwrap()).unwrap_err();
        assert!(matches!(err, Error::NonReducedWord { ref normalized, .. } if normalized.is_empty()));
        // the empty word it normalises to fixes everything
        let all = word_fixed_points_brute(&g, &Word::default()).unwrap();
        assert_eq!(all.solutions.len(), 28);
    }
}

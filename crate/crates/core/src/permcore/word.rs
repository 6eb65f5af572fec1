//! Words in a list of generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permcore::Permutation;

/// One letter of a word: a generator index and an exponent of `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i8,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Self {
        debug_assert!(exponent == 1 || exponent == -1);
        Letter {
            generator,
            exponent,
        }
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.generator, -self.exponent)
    }
}

/// A word over a generator list.
///
/// Letters are read in the order they act: the first letter is applied
/// first. A word read off a path in a permutation representation graph is
/// therefore just the sequence of arrow labels along the path.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        GroupWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, generator: usize, exponent: i8) {
        self.letters.push(Letter::new(generator, exponent));
    }

    /// Formal inverse: reversed with every exponent negated.
    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Concatenation: `self` acts first, then `other`.
    pub fn then(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GroupWord { letters }
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    fn check(&self, count: usize) -> Result<()> {
        if let Some(l) = self.letters.iter().find(|l| l.generator >= count) {
            return Err(Error::GeneratorIndex {
                index: l.generator,
                count,
            });
        }
        Ok(())
    }

    /// Evaluates the word to a permutation; letters act in order.
    pub fn evaluate(&self, gens: &[Permutation]) -> Result<Permutation> {
        self.check(gens.len())?;
        let degree = match gens.first() {
            Some(g) => g.degree(),
            None => return Ok(Permutation::identity(0)),
        };
        let mut acc = Permutation::identity(degree);
        for l in &self.letters {
            let g = &gens[l.generator];
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
            acc = if l.exponent > 0 {
                acc.compose(g)
            } else {
                acc.compose(&g.inverse())
            };
        }
        Ok(acc)
    }

    /// Image of a single point; `inverses[i]` must be the inverse of `gens[i]`.
    pub fn apply_to_point(
        &self,
        gens: &[Permutation],
        inverses: &[Permutation],
        point: u32,
    ) -> Result<u32> {
        self.check(gens.len().min(inverses.len()))?;
        Ok(self.letters.iter().fold(point, |x, l| {
            if l.exponent > 0 {
                gens[l.generator].image(x)
            } else {
                inverses[l.generator].image(x)
            }
        }))
    }
}

/// Evaluates `word` over `gens` (letters act in order).
pub fn evaluate_word(gens: &[Permutation], word: &GroupWord) -> Result<Permutation> {
    word.evaluate(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens() -> Vec<Permutation> {
        vec![
            Permutation::from_cycles(3, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(3, &[&[1, 2]]).unwrap(),
        ]
    }

    #[test]
    fn empty_word_is_identity() {
        assert!(GroupWord::empty().evaluate(&gens()).unwrap().is_identity());
    }

    #[test]
    fn letter_then_inverse_cancels() {
        let mut w = GroupWord::empty();
        w.push(0, 1);
        w.push(0, -1);
        assert!(w.evaluate(&gens()).unwrap().is_identity());
    }

    #[test]
    fn two_letters_compose_in_order() {
        let g = gens();
        let mut w = GroupWord::empty();
        w.push(0, 1);
        w.push(1, 1);
        assert_eq!(w.evaluate(&g).unwrap(), g[0].compose(&g[1]));
    }

    #[test]
    fn invalid_index() {
        let mut w = GroupWord::empty();
        w.push(5, 1);
        assert!(matches!(
            w.evaluate(&gens()),
            Err(Error::GeneratorIndex { index: 5, count: 2 })
        ));
    }

    #[test]
    fn point_evaluation_matches_permutation() {
        let g = gens();
        let inv: Vec<_> = g.iter().map(|p| p.inverse()).collect();
        let w = GroupWord::from_letters(vec![
            Letter::new(0, 1),
            Letter::new(1, -1),
            Letter::new(0, 1),
        ]);
        let p = w.evaluate(&g).unwrap();
        for x in 0..3 {
            assert_eq!(w.apply_to_point(&g, &inv, x).unwrap(), p.image(x));
        }
        assert!(w.then(&w.inverse()).evaluate(&g).unwrap().is_identity());
    }
}

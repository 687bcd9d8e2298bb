use crate::error::{Error, Result};

/// A word in the generators of some group model.
///
/// Letters are nonzero `i16`s: letter `k+1` is generator `k`, letter
/// `-(k+1)` is its inverse. Words carry no group structure of their own;
/// normal forms and multiplication live on [`super::GroupModel`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word {
    letters: Vec<i16>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<i16>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::input("word letters must be nonzero"));
        }
        Ok(Word { letters })
    }

    /// Skips the zero check; callers guarantee validity.
    pub(crate) fn from_trusted(letters: Vec<i16>) -> Self {
        debug_assert!(!letters.contains(&0));
        Word { letters }
    }

    pub fn single(letter: i16) -> Self {
        assert!(letter != 0, "letter must be nonzero");
        Word { letters: vec![letter] }
    }

    pub fn letters(&self) -> &[i16] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Formal inverse: reversed letters with signs flipped. Not normalized.
    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Formal concatenation. Not normalized.
    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// 0-based generator index of a letter.
    pub fn letter_gen(letter: i16) -> usize {
        (letter.unsigned_abs() as usize) - 1
    }
}

/// Free reduction: cancel adjacent inverse pairs until none remain.
pub(crate) fn free_reduce(letters: &[i16]) -> Vec<i16> {
    let mut out: Vec<i16> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduce_cancels_nested_pairs() {
        // a b b^-1 a^-1 a -> a
        assert_eq!(free_reduce(&[1, 2, -2, -1, 1]), vec![1]);
        assert_eq!(free_reduce(&[1, -1]), Vec::<i16>::new());
    }

    #[test]
    fn inverse_reverses_and_flips() {
        let w = Word::from_letters(vec![1, 2, -1]).unwrap();
        assert_eq!(w.inverse().letters(), &[1, -2, -1]);
    }

    #[test]
    fn zero_letter_rejected() {
        assert!(Word::from_letters(vec![1, 0]).is_err());
    }
}

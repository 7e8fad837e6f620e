use std::fmt;

/// One letter `g_i^{±1}` of a free-group word; `gen` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }

    pub fn exponent(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A reduced word in the free group. Reduction is eager, so equal group
/// elements have equal representations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(gen: u32) -> Self {
        Word(vec![Letter::new(gen, false)])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, 0 for the identity.
    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.gen).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Reduced concatenation.
    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Word::identity(), |acc, _| acc.multiply(&base))
    }

    /// Runs of equal letters as `(gen, signed exponent)`.
    pub fn syllables(&self) -> Vec<(u32, i64)> {
        let mut out: Vec<(u32, i64)> = Vec::new();
        for l in &self.0 {
            match out.last_mut() {
                Some((g, e)) if *g == l.gen && (*e < 0) == l.inverse => *e += l.exponent() as i64,
                _ => out.push((l.gen, l.exponent() as i64)),
            }
        }
        out
    }

    /// All reduced words over `r` generators of length at most `max_len`,
    /// shortest first.
    pub fn all_up_to(r: u32, max_len: usize) -> Vec<Word> {
        let letters: Vec<Letter> = (1..=r)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect();
        let mut out = vec![Word::identity()];
        let mut frontier = vec![Word::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    if w.0.last() == Some(&l.inv()) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl fmt::Display for Word {
    /// `e`, or syllables like `g1^2*g2^-1*g3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        for (i, (g, e)) in self.syllables().into_iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "g{g}")?;
            } else {
                write!(f, "g{g}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: u32) -> Letter {
        Letter::new(i, false)
    }
    fn gi(i: u32) -> Letter {
        Letter::new(i, true)
    }

    #[test]
    fn multiply_examples() {
        let a = Word::generator(1);
        assert!(a.multiply(&a.inverse()).is_identity());
        let ab = Word::generator(1).multiply(&Word::generator(2));
        assert_eq!(ab.len(), 2);
        let u = Word::from_letters([g(1), g(2)]);
        let v = Word::from_letters([gi(2), g(1)]);
        let uv = u.multiply(&v);
        assert_eq!(uv, Word::from_letters([g(1), g(1)]));
        assert_eq!(uv.len(), 2);
        assert_eq!(uv.to_string(), "g1^2");
    }

    #[test]
    fn display_syllables() {
        let w = Word::from_letters([g(1), gi(2), gi(2), g(3)]);
        assert_eq!(w.to_string(), "g1*g2^-2*g3");
        assert_eq!(Word::identity().to_string(), "e");
    }

    #[test]
    fn enumerates_reduced_words() {
        // 1 + 4 + 4*3 words over two generators up to length 2
        let ws = Word::all_up_to(2, 2);
        assert_eq!(ws.len(), 17);
        assert!(ws.iter().all(|w| Word::from_letters(w.letters().iter().copied()) == *w));
    }
}

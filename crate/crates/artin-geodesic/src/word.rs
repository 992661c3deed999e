//! Words over the signed alphabet S ∪ S⁻¹: free reduction, alternating-string
//! constructors, syllables, and the p/n alternating-subword statistics.

use std::fmt;

use thiserror::Error;

use crate::presentation::{CoxeterLabel, GeneratorId, Presentation};

/// A signed generator occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: GeneratorId,
    /// +1 or -1.
    pub sign: i8,
}

impl Letter {
    pub fn positive(name: GeneratorId) -> Letter {
        Letter { name, sign: 1 }
    }

    pub fn negative(name: GeneratorId) -> Letter {
        Letter { name, sign: -1 }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            name: self.name,
            sign: -self.sign,
        }
    }

    /// True iff this letter cancels `other` (same name, opposite sign).
    pub fn cancels(self, other: Letter) -> bool {
        self.name == other.name && self.sign == -other.sign
    }
}

/// A finite sequence of letters. Words need not be freely reduced;
/// reduced-ness is a predicate, not an invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

/// Anchor for the alternating-string constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    /// The string x y x y ... of length n beginning with x.
    StartsWith,
    /// The string ... x y x y of length n ending with y.
    EndsWith,
}

/// p/n statistics of a two-generator word: the lengths of the maximal
/// positive and negative alternating subwords, each capped at m(x, y).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PnStats {
    pub p: u32,
    pub n: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("alternating string requires two distinct generator names")]
    SameNameLetters,
    #[error("word uses a generator outside the expected two-generator set")]
    UnexpectedGenerator,
    #[error("p/n statistics require a finite Coxeter label")]
    InfiniteLabel,
    #[error("could not parse word token `{0}`")]
    BadToken(String),
    #[error("unknown generator `{0}` in word")]
    UnknownGenerator(String),
    #[error("exponent 0 is not a letter")]
    ZeroExponent,
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Concatenation.
    pub fn concat(parts: &[&[Letter]]) -> Word {
        let mut out = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for p in parts {
            out.extend_from_slice(p);
        }
        Word(out)
    }

    /// The formal inverse: reversed letters with flipped signs.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// True iff no adjacent pair of letters cancels.
    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Maximal runs of a single name with uniform sign, merged into signed
    /// exponents. Sign changes within a name split the run.
    pub fn syllables(&self) -> Vec<(GeneratorId, i64)> {
        let mut out: Vec<(GeneratorId, i64)> = Vec::new();
        for l in &self.0 {
            match out.last_mut() {
                Some((name, exp)) if *name == l.name && exp.signum() == l.sign as i64 => {
                    *exp += l.sign as i64;
                }
                _ => out.push((l.name, l.sign as i64)),
            }
        }
        out
    }

    /// Number of syllables.
    pub fn syllable_len(&self) -> usize {
        self.syllables().len()
    }

    /// Parse the word text syntax: whitespace-separated tokens `name`,
    /// `name^-1` or `name^k` (k a nonzero integer, expanded eagerly); the
    /// empty word is written `1`.
    pub fn parse(text: &str, p: &Presentation) -> Result<Word, WordError> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((name, exp)) => {
                    let exp: i64 = exp
                        .parse()
                        .map_err(|_| WordError::BadToken(tok.to_string()))?;
                    (name, exp)
                }
                None => (tok, 1),
            };
            if exp == 0 {
                return Err(WordError::ZeroExponent);
            }
            let id = p
                .generator(name)
                .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))?;
            let sign = if exp > 0 { 1 } else { -1 };
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter { name: id, sign });
            }
        }
        Ok(Word(letters))
    }

    /// Format in the word text syntax; output re-parses to the exact letter
    /// sequence (syllables are compressed into exponent tokens).
    pub fn format(&self, p: &Presentation) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.syllables()
            .iter()
            .map(|&(name, exp)| {
                if exp == 1 {
                    p.name(name).to_string()
                } else {
                    format!("{}^{}", p.name(name), exp)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Display for debugging without a presentation: letters as `g0`, `g1⁻¹`…
    pub fn debug_string(&self) -> String {
        self.0
            .iter()
            .map(|l| format!("g{}{}", l.name.0, if l.sign < 0 { "'" } else { "" }))
            .collect::<Vec<_>>()
            .join("")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.debug_string())
    }
}

/// The unique freely reduced word obtained by iteratively deleting adjacent
/// cancelling pairs.
pub fn free_reduce(w: &Word) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        match stack.last() {
            Some(&top) if top.cancels(l) => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    Word(stack)
}

/// The alternating string on letters x, y of length n: `StartsWith` yields
/// x y x y … beginning with x; `EndsWith` yields … x y x y ending with y.
pub fn alternating(x: Letter, y: Letter, n: usize, anchor: Anchor) -> Result<Word, WordError> {
    if x.name == y.name {
        return Err(WordError::SameNameLetters);
    }
    let mut out = Vec::with_capacity(n);
    match anchor {
        Anchor::StartsWith => {
            for i in 0..n {
                out.push(if i % 2 == 0 { x } else { y });
            }
        }
        Anchor::EndsWith => {
            // Position counted from the right: the last letter is y.
            for i in (0..n).rev() {
                out.push(if i % 2 == 0 { y } else { x });
            }
        }
    }
    Ok(Word(out))
}

/// Compute p(v) and n(v) for a word over exactly the two generators x, y with
/// finite label: the maximal length of a positive (resp. negative)
/// alternating subword, each capped at m(x, y).
pub fn pn_stats(
    v: &Word,
    x: GeneratorId,
    y: GeneratorId,
    p: &Presentation,
) -> Result<PnStats, WordError> {
    let m = match p.label(x, y) {
        CoxeterLabel::Finite(m) => m,
        CoxeterLabel::Infinity => return Err(WordError::InfiniteLabel),
    };
    if v.0.iter().any(|l| l.name != x && l.name != y) {
        return Err(WordError::UnexpectedGenerator);
    }
    Ok(PnStats {
        p: max_alternating_run(&v.0, 1).min(m),
        n: max_alternating_run(&v.0, -1).min(m),
    })
}

/// Maximal length of an alternating (adjacent names distinct) contiguous run
/// in which every letter has the given sign.
pub(crate) fn max_alternating_run(letters: &[Letter], sign: i8) -> u32 {
    let mut best = 0u32;
    let mut cur = 0u32;
    let mut prev: Option<GeneratorId> = None;
    for l in letters {
        if l.sign == sign && prev != Some(l.name) {
            // Extends the current run (or starts one of length 1).
            cur = if cur > 0 { cur + 1 } else { 1 };
        } else if l.sign == sign {
            // Same name twice: the new run starts at this letter.
            cur = 1;
        } else {
            cur = 0;
        }
        prev = if l.sign == sign { Some(l.name) } else { None };
        best = best.max(cur);
    }
    best
}

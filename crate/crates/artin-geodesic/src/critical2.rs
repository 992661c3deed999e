//! Two-generator critical words and their τ-moves.
//!
//! A word over a generator pair {x, y} with label m is *critical* when it has
//! one of six boundary-anchored shapes built from alternating strings whose
//! lengths add up to m. Critical words admit an involution τ that preserves
//! the represented group element and the word length while changing the names
//! of both the first and the last letter; τ-moves are the atomic rewriting
//! steps of the whole engine.
//!
//! For the pair label m = 3 there is a closed-form characterisation of the
//! words that τ-moves carry to a three-syllable word b^I a^J b^K; it is
//! exposed here as [`abc_transform`] and drives the three-generator critical
//! words in [`crate::pseudo`].

use crate::presentation::{GeneratorId, Presentation};
use crate::word::{alternating, Anchor, Letter, Word};

/// Which of the six critical shapes a word matches. `Left`/`Right` record
/// whether the full-length alternating factor of a signed word sits at the
/// start or the end; the unsigned variants record the boundary signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalForm {
    /// Positive word `m(x,y) ξ` (length-m alternating prefix).
    PositiveLeft,
    /// Positive word `ξ (x,y)m` (length-m alternating suffix).
    PositiveRight,
    /// Negative word `m(x⁻¹,y⁻¹) ξ`.
    NegativeLeft,
    /// Negative word `ξ (x⁻¹,y⁻¹)m`.
    NegativeRight,
    /// Unsigned word `p(x,y) ξ (z⁻¹,t⁻¹)n` with p + n = m.
    UnsignedPosNeg,
    /// Unsigned word `n(x⁻¹,y⁻¹) ξ (z,t)p` with p + n = m.
    UnsignedNegPos,
}

/// Classification data for a critical word: the generator pair, its label,
/// the matched form, the alternating lengths p and n, and the extents of the
/// boundary alternating factors (the middle `ξ` is everything in between).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Critical2 {
    pub pair: (GeneratorId, GeneratorId),
    pub m: u32,
    pub form: CriticalForm,
    pub p: u32,
    pub n: u32,
    /// Letters 0..prefix_len form the anchored prefix factor.
    pub prefix_len: usize,
    /// Letters len-suffix_len.. form the anchored suffix factor.
    pub suffix_len: usize,
}

/// Decide whether `v` is a critical word for the pair {x, y} and, if so,
/// return its classification.
///
/// Signed words must carry a *unique* occurrence of a length-m alternating
/// factor, located at the very start or the very end (a longer run contains
/// several such occurrences and is rejected). Unsigned words must consist of
/// an alternating prefix and an alternating suffix of opposite signs whose
/// lengths add up to m. Words using a generator outside {x, y}, or pairs with
/// infinite label, are never critical.
pub fn classify_2gen_critical(
    v: &Word,
    x: GeneratorId,
    y: GeneratorId,
    pres: &Presentation,
) -> Option<Critical2> {
    let m = pres.label(x, y).finite()?;
    if v.is_empty() || v.0.iter().any(|l| l.name != x && l.name != y) {
        return None;
    }
    let len = v.len();
    let first = v.first().unwrap();
    let last = v.last().unwrap();
    let data = |form, p: u32, n: u32, prefix_len, suffix_len| {
        Some(Critical2 {
            pair: (x, y),
            m,
            form,
            p,
            n,
            prefix_len,
            suffix_len,
        })
    };

    if first.sign == last.sign && v.0.iter().all(|l| l.sign == first.sign) {
        // Signed word: locate the unique length-m alternating occurrence.
        let (start, run_len) = longest_alternating_run(&v.0)?;
        let unique = run_len == m as usize
            && !(0..len.saturating_sub(m as usize) + 1)
                .filter(|&i| i != start)
                .any(|i| is_alternating(&v.0[i..i + m as usize]));
        if !unique {
            return None;
        }
        let (p, n) = if first.sign > 0 { (m, 0) } else { (0, m) };
        let (left, right) = if first.sign > 0 {
            (CriticalForm::PositiveLeft, CriticalForm::PositiveRight)
        } else {
            (CriticalForm::NegativeLeft, CriticalForm::NegativeRight)
        };
        if start == 0 {
            data(left, p, n, m as usize, 0)
        } else if start + m as usize == len {
            data(right, p, n, 0, m as usize)
        } else {
            None
        }
    } else if first.sign > 0 && last.sign < 0 {
        let p = boundary_run(&v.0, 1, true);
        let n = boundary_run(&v.0, -1, false);
        if p >= 1 && n >= 1 && p + n == m {
            data(CriticalForm::UnsignedPosNeg, p, n, p as usize, n as usize)
        } else {
            None
        }
    } else if first.sign < 0 && last.sign > 0 {
        let n = boundary_run(&v.0, -1, true);
        let p = boundary_run(&v.0, 1, false);
        if p >= 1 && n >= 1 && p + n == m {
            data(CriticalForm::UnsignedNegPos, p, n, n as usize, p as usize)
        } else {
            None
        }
    } else {
        None
    }
}

/// The permutation δ induced by conjugation by the Garside element of the
/// pair: identity when m is even, the name swap x ↔ y (signs preserved) when
/// m is odd.
pub fn delta(w: &[Letter], x: GeneratorId, y: GeneratorId, pres: &Presentation) -> Vec<Letter> {
    let m = pres
        .label(x, y)
        .finite()
        .expect("delta requires a finite label");
    if m.is_multiple_of(2) {
        return w.to_vec();
    }
    w.iter()
        .map(|l| Letter {
            name: if l.name == x { y } else { x },
            sign: l.sign,
        })
        .collect()
}

/// Apply the τ-move to a critical word `v` with classification `c`.
///
/// τ preserves the word length and the represented group element, and flips
/// the names of both the first and the last letter. It is an involution on
/// critical words.
pub fn apply_tau_2gen(v: &Word, c: &Critical2, pres: &Presentation) -> Word {
    let (x_id, y_id) = c.pair;
    let partner = |g: GeneratorId| if g == x_id { y_id } else { x_id };
    let m = c.m as usize;
    let len = v.len();
    let xi = &v.0[c.prefix_len..len - c.suffix_len];
    let dxi = delta(xi, x_id, y_id, pres);
    let alt = |a: Letter, b: Letter, n: usize, anchor| {
        alternating(a, b, n, anchor)
            .expect("alternating endpoints are distinct")
            .0
    };

    match c.form {
        CriticalForm::PositiveLeft | CriticalForm::NegativeLeft if xi.is_empty() => {
            // Pure alternating word m(x,y): swap the two starting letters.
            let a = v.0[0];
            let b = v.0[1];
            Word(alt(b, a, m, Anchor::StartsWith))
        }
        CriticalForm::PositiveLeft | CriticalForm::NegativeLeft => {
            // m(x,y) ξ  ->  δ(ξ) (z,t)m with z the name of the last letter
            // of ξ; the suffix keeps the sign of the word.
            let sign = v.0[0].sign;
            let z = xi.last().unwrap().name;
            let t = partner(z);
            let zl = Letter { name: z, sign };
            let tl = Letter { name: t, sign };
            Word::concat(&[&dxi, &alt(zl, tl, m, Anchor::EndsWith)])
        }
        CriticalForm::PositiveRight | CriticalForm::NegativeRight => {
            // ξ (x,y)m  ->  m(t,z) δ(ξ) with z the name of the first letter
            // of ξ.
            let sign = v.0[0].sign;
            let z = xi.first().unwrap().name;
            let t = partner(z);
            let zl = Letter { name: z, sign };
            let tl = Letter { name: t, sign };
            Word::concat(&[&alt(tl, zl, m, Anchor::StartsWith), &dxi])
        }
        CriticalForm::UnsignedPosNeg => {
            // p(x,y) ξ (z⁻¹,t⁻¹)n  ->  n(y⁻¹,x⁻¹) δ(ξ) (t,z)p.
            let x = v.0[0].name;
            let y = partner(x);
            let t = v.0[len - 1].name;
            let z = partner(t);
            Word::concat(&[
                &alt(
                    Letter::negative(y),
                    Letter::negative(x),
                    c.n as usize,
                    Anchor::StartsWith,
                ),
                &dxi,
                &alt(
                    Letter::positive(t),
                    Letter::positive(z),
                    c.p as usize,
                    Anchor::EndsWith,
                ),
            ])
        }
        CriticalForm::UnsignedNegPos => {
            // n(x⁻¹,y⁻¹) ξ (z,t)p  ->  p(y,x) δ(ξ) (t⁻¹,z⁻¹)n.
            let x = v.0[0].name;
            let y = partner(x);
            let t = v.0[len - 1].name;
            let z = partner(t);
            Word::concat(&[
                &alt(
                    Letter::positive(y),
                    Letter::positive(x),
                    c.p as usize,
                    Anchor::StartsWith,
                ),
                &dxi,
                &alt(
                    Letter::negative(t),
                    Letter::negative(z),
                    c.n as usize,
                    Anchor::EndsWith,
                ),
            ])
        }
    }
}

/// Classify and, if critical, rewrite `v` in one call.
pub fn tau_2gen(v: &Word, x: GeneratorId, y: GeneratorId, pres: &Presentation) -> Option<Word> {
    classify_2gen_critical(v, x, y, pres).map(|c| apply_tau_2gen(v, &c, pres))
}

/// For a pair {a, b} with label 3 and a word `v` whose first and last letter
/// are both named `a`, decide in linear time whether τ-moves carry `v` to a
/// three-syllable word b^I a^J b^K with I, J, K nonzero, and return (I, J, K)
/// if so.
///
/// Such words have exactly three or five syllables and match a short list of
/// closed forms; the match is done on the syllable decomposition.
pub fn abc_transform(v: &Word, a: GeneratorId, b: GeneratorId) -> Option<(i64, i64, i64)> {
    if !v.is_freely_reduced() {
        return None;
    }
    let syl = v.syllables();
    if syl.first()?.0 != a || syl.last()?.0 != a {
        return None;
    }
    if syl.iter().any(|&(name, _)| name != a && name != b) {
        return None;
    }
    match syl.as_slice() {
        [(_, i), (_, j), (_, k)] => {
            let (i, j, k) = (*i, *j, *k);
            let e = i.signum();
            if j == e && k == e {
                // a^(e k') b^e a^e  ->  b^e a^e b^(e k').
                Some((e, e, i))
            } else if i == e && j == e && k.signum() == e {
                // a^e b^e a^(e i')  ->  b^(e i') a^e b^e.
                Some((k, e, e))
            } else if j == -e && k == -e {
                // a^(e k') b^-e a^-e  ->  b^-e a^-e b^(e k').
                Some((-e, -e, i))
            } else if i == e && k == -e {
                // a^e b^J a^-e  ->  b^-e a^J b^e (J of either sign).
                Some((-e, j, e))
            } else if i == e && j == e && k.signum() == -e {
                // a^e b^e a^(-e i')  ->  b^(-e i') a^e b^e.
                Some((k, e, e))
            } else {
                None
            }
        }
        [(_, i), (_, j), (_, k), (_, l), (_, n)] => {
            let (i, j, k, l, n) = (*i, *j, *k, *l, *n);
            let e = i.signum();
            if i == e && j.signum() == -e && k.signum() == e && l == -e && n == -e {
                // a^e b^(-e(j'-1)) a^(e(k'-1)) b^-e a^-e  ->  b^-e a^(-e j') b^(e k').
                Some((-e, j - e, k + e))
            } else if i == e && j == e && k.signum() == -e && l.signum() == e && n == -e {
                // a^e b^e a^(-e(i'-1)) b^(e(j'-1)) a^-e  ->  b^(-e i') a^(e j') b^e.
                Some((k - e, l + e, e))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Start index and length of the longest alternating run, provided it is
/// unique among maximal runs of that length; used only for signed words where
/// all letters share a sign.
fn longest_alternating_run(letters: &[Letter]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut start = 0;
    for i in 1..=letters.len() {
        if i == letters.len() || letters[i].name == letters[i - 1].name {
            let len = i - start;
            if best.is_none_or(|(_, l)| len > l) {
                best = Some((start, len));
            }
            start = i;
        }
    }
    best
}

fn is_alternating(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0].name != w[1].name)
}

/// Length of the maximal alternating run of the given sign anchored at the
/// start (`from_start`) or the end of the word.
fn boundary_run(letters: &[Letter], sign: i8, from_start: bool) -> u32 {
    let mut run = 0u32;
    let mut prev: Option<GeneratorId> = None;
    let iter: Box<dyn Iterator<Item = &Letter>> = if from_start {
        Box::new(letters.iter())
    } else {
        Box::new(letters.iter().rev())
    };
    for l in iter {
        if l.sign != sign || prev == Some(l.name) {
            break;
        }
        run += 1;
        prev = Some(l.name);
    }
    run
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{rank3, CoxeterLabel};

    fn pres_324() -> Presentation {
        rank3(
            CoxeterLabel::Finite(3),
            CoxeterLabel::Finite(2),
            CoxeterLabel::Finite(4),
        )
    }

    fn gens(p: &Presentation) -> (GeneratorId, GeneratorId, GeneratorId) {
        (
            p.generator("a").unwrap(),
            p.generator("b").unwrap(),
            p.generator("c").unwrap(),
        )
    }

    fn w(text: &str, p: &Presentation) -> Word {
        Word::parse(text, p).unwrap()
    }

    #[test]
    fn golden_tau_values() {
        let p = pres_324();
        let (a, b, c) = gens(&p);
        assert_eq!(
            tau_2gen(&w("a b^5 a^-1", &p), a, b, &p),
            Some(w("b^-1 a^5 b", &p))
        );
        assert_eq!(
            tau_2gen(&w("b c^2 b c b^-1 c^-1", &p), b, c, &p),
            Some(w("c^-1 b^-1 c b c^2 b", &p))
        );
    }

    #[test]
    fn pure_alternating_and_signed_forms() {
        let p = pres_324();
        let (a, b, c) = gens(&p);
        assert_eq!(tau_2gen(&w("a b a", &p), a, b, &p), Some(w("b a b", &p)));
        assert_eq!(
            tau_2gen(&w("a^-1 b^-1 a^-1", &p), a, b, &p),
            Some(w("b^-1 a^-1 b^-1", &p))
        );
        // m(x,y) ξ with nonempty ξ, m = 3 (odd, so δ swaps names).
        assert_eq!(
            tau_2gen(&w("a b a^2", &p), a, b, &p),
            Some(w("b^2 a b", &p))
        );
        // m = 4 with ξ = c: bcbc c -> c cbcb.
        assert_eq!(
            tau_2gen(&w("b c b c^2", &p), b, c, &p),
            Some(w("c^2 b c b", &p))
        );
        // ξ (x,y)m form.
        assert_eq!(
            tau_2gen(&w("a^2 b a", &p), a, b, &p),
            Some(w("b a b^2", &p))
        );
    }

    #[test]
    fn non_critical_words_rejected() {
        let p = pres_324();
        let (a, b, _c) = gens(&p);
        // Over-long alternating run: two length-3 occurrences.
        assert_eq!(tau_2gen(&w("a b a b", &p), a, b, &p), None);
        // Unique length-m factor in the middle.
        assert_eq!(tau_2gen(&w("a^2 b a b^2", &p), a, b, &p), None);
        // Unsigned with mismatched boundary lengths (1 + 1 != 3).
        assert_eq!(tau_2gen(&w("a^2 b^-1", &p), a, b, &p), None);
        // Wrong generator set.
        assert_eq!(tau_2gen(&w("a c a", &p), a, b, &p), None);
        // Infinite labels are handled by returning None, not panicking.
        let q = rank3(
            CoxeterLabel::Finite(3),
            CoxeterLabel::Finite(2),
            CoxeterLabel::Infinity,
        );
        let (_, qb, qc) = gens(&q);
        assert_eq!(tau_2gen(&w("b c b", &q), qb, qc, &q), None);
    }

    #[test]
    fn tau_is_an_involution_on_samples() {
        let p = pres_324();
        let (a, b, c) = gens(&p);
        for (text, pair) in [
            ("a b^5 a^-1", (a, b)),
            ("b c^2 b c b^-1 c^-1", (b, c)),
            ("a b a", (a, b)),
            ("a b a^2", (a, b)),
            ("b c b c^2", (b, c)),
            ("a^-2 b^-1 a^-1", (a, b)),
            ("b^-1 c^-1 a", (a, b)),
        ] {
            let v = w(text, &p);
            if let Some(t) = tau_2gen(&v, pair.0, pair.1, &p) {
                assert_eq!(t.len(), v.len(), "length preserved for {text}");
                assert_ne!(t.first().unwrap().name, v.first().unwrap().name);
                assert_ne!(t.last().unwrap().name, v.last().unwrap().name);
                assert_eq!(
                    tau_2gen(&t, pair.0, pair.1, &p),
                    Some(v.clone()),
                    "involution for {text}"
                );
            }
        }
    }

    #[test]
    fn abc_transform_closed_forms() {
        let p = pres_324();
        let (a, b, _) = gens(&p);
        let t = |text: &str| abc_transform(&w(text, &p), a, b);
        assert_eq!(t("a b a"), Some((1, 1, 1)));
        assert_eq!(t("a b^5 a^-1"), Some((-1, 5, 1)));
        assert_eq!(t("a^3 b a"), Some((1, 1, 3)));
        assert_eq!(t("a b a^4"), Some((4, 1, 1)));
        assert_eq!(t("a b^-1 a b^-1 a^-1"), Some((-1, -2, 2)));
        assert_eq!(t("a b a^-2 b^3 a^-1"), Some((-3, 4, 1)));
        assert_eq!(t("a^-1 b^-1 a^-1"), Some((-1, -1, -1)));
        // Not of any closed form.
        assert_eq!(t("a^2 b^-1 a^-2"), None);
        assert_eq!(t("b a b"), None);
        assert_eq!(t("a b a b a"), None);
        assert_eq!(t("a b^2 a"), None);
    }

    #[test]
    fn abc_transform_agrees_with_tau() {
        let p = pres_324();
        let (a, b, _) = gens(&p);
        for text in ["a b a", "a b^5 a^-1", "a^3 b a", "a b a^-2 b^3 a^-1"] {
            let v = w(text, &p);
            let (i, j, k) = abc_transform(&v, a, b).unwrap();
            let expected = tau_2gen(&v, a, b, &p).unwrap();
            let mut built = Vec::new();
            for _ in 0..i.unsigned_abs() {
                built.push(Letter {
                    name: b,
                    sign: i.signum() as i8,
                });
            }
            for _ in 0..j.unsigned_abs() {
                built.push(Letter {
                    name: a,
                    sign: j.signum() as i8,
                });
            }
            for _ in 0..k.unsigned_abs() {
                built.push(Letter {
                    name: b,
                    sign: k.signum() as i8,
                });
            }
            assert_eq!(Word(built), expected, "for {text}");
        }
    }
}

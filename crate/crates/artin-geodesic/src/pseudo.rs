//! Pseudo two-generator (P2G) and pseudo three-generator (P3G) critical
//! words and their τ-moves.
//!
//! A P2G word of type {a, b} is one whose letters outside {a, b} (the
//! *internal* letters) can all be commuted to the margins, leaving a
//! two-generator core û; the word is critical when û is. The displaced
//! internal letters form three blocks: α (from the prefix), ρ (letters that
//! commute with both pseudo-generators and reach the left margin), and β (the
//! letters stuck at the right margin), and the τ-move is
//! τ(u) = α ρ τ(û) β.
//!
//! A P3G word of type (a, b, c) — where m_ab = 3, m_ac = 2, m_bc ≥ 5 — is a
//! composite u = u_p u_q u_r whose suffix u_r is an {a, b}-P2G-critical word
//! carried by τ to b^I a^J b^K, such that the derived word
//! u♯ = u_p u_q α(u_r) ρ(u_r) b^I is {b, c}-P2G-critical with empty β. Its
//! τ-move is τ(u) = α ρ · p(τ(û♯)) · a^J c^E b^K · β, where E is the sign of
//! the final (c-named) letter of τ(û♯) and p(·) is the maximal proper prefix.

use crate::critical2::{abc_transform, apply_tau_2gen, classify_2gen_critical, Critical2};
use crate::presentation::{CoxeterLabel, GeneratorId, Presentation};
use crate::word::{Letter, Word};

/// Factorisation of a P2G word: the margins u_p/u_s, the two-generator core
/// û, and the displaced internal blocks α, ρ, β.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P2g {
    pub pair: (GeneratorId, GeneratorId),
    /// u_p = letters 0..up_len.
    pub up_len: usize,
    /// u_s = letters us_start.. (so u_q = letters up_len..us_start).
    pub us_start: usize,
    /// û: the pseudo-generator letters of u, in order.
    pub core: Word,
    pub alpha: Word,
    pub rho: Word,
    pub beta: Word,
}

/// A P2G word together with the classification of its critical core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P2gCritical {
    pub p2g: P2g,
    pub core_class: Critical2,
    /// τ(û), precomputed.
    pub tau_core: Word,
}

/// A P3G-critical word of type (a, b, c) with everything needed to apply and
/// to chain its τ-move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P3gCritical {
    pub abc: (GeneratorId, GeneratorId, GeneratorId),
    /// u_p = letters 0..up_len.
    pub up_len: usize,
    /// u_r = letters ur_start.. (so u_q = letters up_len..ur_start).
    pub ur_start: usize,
    /// Factorisation of the {a,b}-critical suffix u_r.
    pub ur: P2gCritical,
    /// Exponents of τ(û_r) = b^I a^J b^K.
    pub i_exp: i64,
    pub j_exp: i64,
    pub k_exp: i64,
    /// The derived {b,c}-critical word u♯ and its core's τ-image.
    pub sharp: P2gCritical,
    /// Sign of the final letter of τ(û♯), which is named c.
    pub e_sign: i8,
}

/// Expand a signed power g^e into letters.
pub(crate) fn power(g: GeneratorId, e: i64) -> Vec<Letter> {
    let sign = if e > 0 { 1 } else { -1 };
    (0..e.unsigned_abs())
        .map(|_| Letter { name: g, sign })
        .collect()
}

/// Factor `u` as a P2G word of type {a, b}, or return None if it is not one.
///
/// u_p is the prefix up to (excluding) the first pseudo-generator letter
/// whose name differs from the first letter's; u_s is the longest suffix
/// after u_p containing no pseudo-generator letter whose name differs from
/// the last letter's. All u_p letters must commute with the first letter, all
/// u_s letters with the last, and all internal letters of the middle u_q with
/// both a and b.
pub fn p2g_factor(u: &Word, a: GeneratorId, b: GeneratorId, pres: &Presentation) -> Option<P2g> {
    match pres.label(a, b) {
        CoxeterLabel::Finite(m) if m > 2 => {}
        _ => return None,
    }
    let letters = u.letters();
    let first = u.first()?;
    let last = u.last()?;
    let is_pseudo = |l: &Letter| l.name == a || l.name == b;
    if !is_pseudo(&first) || !is_pseudo(&last) {
        return None;
    }

    let up_len = letters
        .iter()
        .position(|l| is_pseudo(l) && l.name != first.name)
        .unwrap_or(letters.len());
    let us_start = letters[up_len..]
        .iter()
        .rposition(|l| is_pseudo(l) && l.name != last.name)
        .map_or(up_len, |i| up_len + i + 1);

    if letters[..up_len]
        .iter()
        .any(|l| !pres.names_commute(l.name, first.name))
    {
        return None;
    }
    if letters[us_start..]
        .iter()
        .any(|l| !pres.names_commute(l.name, last.name))
    {
        return None;
    }
    if letters[up_len..us_start]
        .iter()
        .any(|l| !is_pseudo(l) && !(pres.names_commute(l.name, a) && pres.names_commute(l.name, b)))
    {
        return None;
    }

    let core = Word(letters.iter().copied().filter(is_pseudo).collect());
    let alpha = Word(
        letters[..up_len]
            .iter()
            .copied()
            .filter(|l| !is_pseudo(l))
            .collect(),
    );
    // ρ collects the internal letters of u_q, then those internal letters of
    // u_s that commute with both pseudo-generators and with every letter
    // already stuck in β to their left; the rest stay in β.
    let mut rho: Vec<Letter> = letters[up_len..us_start]
        .iter()
        .copied()
        .filter(|l| !is_pseudo(l))
        .collect();
    let mut beta: Vec<Letter> = Vec::new();
    for l in letters[us_start..].iter().filter(|l| !is_pseudo(l)) {
        let movable = pres.names_commute(l.name, a)
            && pres.names_commute(l.name, b)
            && beta.iter().all(|s| pres.names_commute(l.name, s.name));
        if movable {
            rho.push(*l);
        } else {
            beta.push(*l);
        }
    }
    Some(P2g {
        pair: (a, b),
        up_len,
        us_start,
        core,
        alpha,
        rho: Word(rho),
        beta: Word(beta),
    })
}

/// Factor `u` as a P2G word of type {a, b} and require its core û to be
/// {a, b}-critical.
pub fn p2g_critical(
    u: &Word,
    a: GeneratorId,
    b: GeneratorId,
    pres: &Presentation,
) -> Option<P2gCritical> {
    let p2g = p2g_factor(u, a, b, pres)?;
    let core_class = classify_2gen_critical(&p2g.core, a, b, pres)?;
    let tau_core = apply_tau_2gen(&p2g.core, &core_class, pres);
    Some(P2gCritical {
        p2g,
        core_class,
        tau_core,
    })
}

/// The τ-move on a P2G-critical word: α ρ τ(û) β.
pub fn tau_p2g(c: &P2gCritical) -> Word {
    Word::concat(&[&c.p2g.alpha.0, &c.p2g.rho.0, &c.tau_core.0, &c.p2g.beta.0])
}

/// Find the type {a, b} (if any) making `u` P2G-critical, trying partner
/// generators in index order when the endpoints share a name. The names of
/// the first and last letter must be pseudo-generators, which pins the pair
/// down except when they coincide.
pub fn p2g_critical_infer(u: &Word, pres: &Presentation) -> Option<P2gCritical> {
    let f = u.first()?.name;
    let l = u.last()?.name;
    if f != l {
        return p2g_critical(u, f, l, pres);
    }
    pres.generators()
        .filter(|&g| g != f)
        .find_map(|g| p2g_critical(u, f, g, pres))
}

/// Factor `u` as a P3G-critical word of explicit type (a, b, c), where
/// m_ab = 3, m_ac = 2 and m_bc ≥ 5.
///
/// The factorisation is u = u_p u_q u_r: u_p is the prefix of letters
/// commuting with the first letter (whose name must be b or c), u_q starts
/// with the other of b/c and carries internal letters commuting with both,
/// and u_r — starting at the first a-named letter after u_q begins — must be
/// {a, b}-P2G-critical with τ(û_r) = b^I a^J b^K. Criticality further
/// requires the derived word u♯ = u_p u_q α(u_r) ρ(u_r) b^I to be
/// {b, c}-P2G-critical with empty β.
pub fn p3g_critical(
    u: &Word,
    a: GeneratorId,
    b: GeneratorId,
    c: GeneratorId,
    pres: &Presentation,
) -> Option<P3gCritical> {
    if pres.label(a, b) != CoxeterLabel::Finite(3) || pres.label(a, c) != CoxeterLabel::Finite(2) {
        return None;
    }
    match pres.label(b, c) {
        CoxeterLabel::Finite(m) if m >= 5 => {}
        _ => return None,
    }
    let letters = u.letters();
    let first = u.first()?;
    let last = u.last()?;
    if (first.name != b && first.name != c) || last.name != a {
        return None;
    }

    let up_len = letters
        .iter()
        .position(|l| !pres.names_commute(l.name, first.name))?;
    let uq_first = letters[up_len];
    if (uq_first.name != b && uq_first.name != c) || uq_first.name == first.name {
        return None;
    }
    let ur_start = up_len + letters[up_len..].iter().position(|l| l.name == a)?;
    if ur_start == up_len {
        return None;
    }
    if letters[up_len..ur_start].iter().any(|l| {
        l.name != b
            && l.name != c
            && !(pres.names_commute(l.name, b) && pres.names_commute(l.name, c))
    }) {
        return None;
    }

    let ur_word = Word(letters[ur_start..].to_vec());
    if ur_word.first()?.name != a {
        return None;
    }
    let ur = p2g_critical(&ur_word, a, b, pres)?;
    let (i_exp, j_exp, k_exp) = abc_transform(&ur.p2g.core, a, b)?;

    let sharp_word = Word::concat(&[
        &letters[..ur_start],
        &ur.p2g.alpha.0,
        &ur.p2g.rho.0,
        &power(b, i_exp),
    ]);
    let sharp = p2g_critical(&sharp_word, b, c, pres)?;
    if !sharp.p2g.beta.is_empty() {
        return None;
    }
    let last_tau = sharp.tau_core.last()?;
    debug_assert_eq!(last_tau.name, c, "tau of the sharp core must end in c");
    Some(P3gCritical {
        abc: (a, b, c),
        up_len,
        ur_start,
        ur,
        i_exp,
        j_exp,
        k_exp,
        sharp,
        e_sign: last_tau.sign,
    })
}

/// The τ-move on a P3G-critical word:
/// α(u♯) ρ(u♯) · p(τ(û♯)) · a^J c^E b^K · β(u_r).
pub fn tau_p3g(c: &P3gCritical) -> Word {
    let (a, b, cc) = c.abc;
    let tau_sharp = &c.sharp.tau_core.0;
    let prefix = &tau_sharp[..tau_sharp.len() - 1];
    Word::concat(&[
        &c.sharp.p2g.alpha.0,
        &c.sharp.p2g.rho.0,
        prefix,
        &power(a, c.j_exp),
        &[Letter {
            name: cc,
            sign: c.e_sign,
        }],
        &power(b, c.k_exp),
        &c.ur.p2g.beta.0,
    ])
}

/// α of a P3G-critical word (= α(u♯)).
pub fn p3g_alpha(c: &P3gCritical) -> &Word {
    &c.sharp.p2g.alpha
}

/// ρ of a P3G-critical word (= ρ(u♯)).
pub fn p3g_rho(c: &P3gCritical) -> &Word {
    &c.sharp.p2g.rho
}

/// β of a P3G-critical word (= β(u_r)).
pub fn p3g_beta(c: &P3gCritical) -> &Word {
    &c.ur.p2g.beta
}

/// Find a type (a, b, c) (if any) making `u` P3G-critical. The last letter
/// pins a; candidate (b, c) assignments with the required labels are tried in
/// index order.
pub fn p3g_critical_infer(u: &Word, pres: &Presentation) -> Option<P3gCritical> {
    let a = u.last()?.name;
    let f = u.first()?.name;
    let gens: Vec<GeneratorId> = pres.generators().collect();
    for &b in &gens {
        for &c in &gens {
            if b == c || b == a || c == a || (f != b && f != c) {
                continue;
            }
            if let Some(found) = p3g_critical(u, a, b, c, pres) {
                return Some(found);
            }
        }
    }
    None
}

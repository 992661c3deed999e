//! Slow, independent ground truth for differential testing: breadth-first
//! search over elementary relator moves, geodesic lengths by exhaustion of a
//! ball of words, exhaustive enumeration of reducing sequences, and the
//! two-generator geodesic criterion.
//!
//! Everything here is deliberately dumb: words are compared letter-exact,
//! moves are the raw defining moves (swap one alternating relator factor,
//! cancel one adjacent inverse pair, insert one inverse pair), and no
//! theorem proved elsewhere in the crate is assumed. The fast engine in
//! [`crate::rrs`] is validated against these procedures at desk scale.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::presentation::{GeneratorId, Presentation};
use crate::rrs::{build_rrs, optimality_clauses, CritType, Decomposition, Rrs};
use crate::word::{free_reduce, Letter, Word};

/// Result of a bounded equality search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfsVerdict {
    /// The two words are provably equal: a chain of elementary moves connects
    /// them.
    Equal,
    /// The full move graph over words of length ≤ cap was explored without
    /// reaching the target. Definitive only when the cap provably suffices.
    DistinctWithinCap,
    /// The node budget ran out before the ball of the given cap was
    /// exhausted; no verdict.
    Exhausted { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("word of length {len} exceeds the exhaustive-mode bound {bound}")]
    WordTooLong { len: usize, bound: usize },
    #[error("the ball of radius {cap} over {letters} letters has too many words for exhaustion")]
    BallTooLarge { cap: usize, letters: usize },
    #[error("word is not over the generator pair {x}, {y}")]
    NotDihedral { x: String, y: String },
    #[error("the two-generator criterion needs a finite label")]
    InfiniteLabel,
    #[error("the generalized two-generator criterion (label > 3) is gated behind a flag")]
    GeneralizedCriterionDisabled,
}

/// Hard limit on |w| for the exhaustive reducing-sequence enumerator.
pub const ENUMERATION_BOUND: usize = 14;

/// Node budget for a single breadth-first search run.
const BFS_NODE_BUDGET: usize = 4_000_000;

/// State budget for an exhaustive ball.
const BALL_STATE_BUDGET: u128 = 60_000_000;

/// The elementary moves out of a word, restricted to results of length ≤ cap:
/// swap one alternating uniform-sign relator factor (x,y)ₘ ↔ (y,x)ₘ, cancel
/// one adjacent inverse pair, insert one inverse pair.
fn neighbors(w: &[Letter], pres: &Presentation, cap: usize, out: &mut Vec<Vec<Letter>>) {
    out.clear();
    let n = w.len();
    // Cancellations.
    for i in 0..n.saturating_sub(1) {
        if w[i].cancels(w[i + 1]) {
            let mut v = Vec::with_capacity(n - 2);
            v.extend_from_slice(&w[..i]);
            v.extend_from_slice(&w[i + 2..]);
            out.push(v);
        }
    }
    // Insertions.
    if n + 2 <= cap {
        for g in pres.generators() {
            for sign in [1i8, -1] {
                let l = Letter { name: g, sign };
                for i in 0..=n {
                    let mut v = Vec::with_capacity(n + 2);
                    v.extend_from_slice(&w[..i]);
                    v.push(l);
                    v.push(l.inverse());
                    v.extend_from_slice(&w[i..]);
                    out.push(v);
                }
            }
        }
    }
    // Relator-factor swaps: an alternating window over a pair {x,y} with all
    // signs equal and length m(x,y) may have its names swapped.
    let gens: Vec<GeneratorId> = pres.generators().collect();
    for (gi, &x) in gens.iter().enumerate() {
        for &y in &gens[gi + 1..] {
            let m = match pres.label(x, y).finite() {
                Some(m) => m as usize,
                None => continue,
            };
            if m > n {
                continue;
            }
            'window: for i in 0..=(n - m) {
                if w[i].name != x && w[i].name != y {
                    continue;
                }
                let sign = w[i].sign;
                for (k, l) in w[i..i + m].iter().enumerate() {
                    let expect = if k.is_multiple_of(2) {
                        w[i].name
                    } else {
                        partner(w[i].name, x, y)
                    };
                    if l.sign != sign || l.name != expect {
                        continue 'window;
                    }
                }
                let mut v = w.to_vec();
                for l in &mut v[i..i + m] {
                    l.name = partner(l.name, x, y);
                }
                out.push(v);
            }
        }
    }
}

fn partner(g: GeneratorId, x: GeneratorId, y: GeneratorId) -> GeneratorId {
    if g == x {
        y
    } else {
        x
    }
}

/// Decide u =_G v by breadth-first search over elementary moves among words
/// of length ≤ cap, starting from the free reduction of u. Equality is
/// detected up to free reduction, so a definitive `Equal` needs no luck with
/// cancellation ordering.
pub fn bfs_equal(u: &Word, v: &Word, pres: &Presentation, cap: usize) -> BfsVerdict {
    let start = free_reduce(u).0;
    let target = free_reduce(v).0;
    if start == target {
        return BfsVerdict::Equal;
    }
    let mut visited: HashSet<Vec<Letter>> = HashSet::new();
    let mut queue: VecDeque<Vec<Letter>> = VecDeque::new();
    visited.insert(start.clone());
    queue.push_back(start);
    let mut scratch = Vec::new();
    while let Some(w) = queue.pop_front() {
        neighbors(&w, pres, cap, &mut scratch);
        for next in scratch.drain(..) {
            if visited.contains(&next) {
                continue;
            }
            if free_reduce(&Word(next.clone())).0 == target {
                return BfsVerdict::Equal;
            }
            visited.insert(next.clone());
            if visited.len() > BFS_NODE_BUDGET {
                return BfsVerdict::Exhausted { cap };
            }
            queue.push_back(next);
        }
    }
    BfsVerdict::DistinctWithinCap
}

/// Minimum word length reachable from w by elementary moves among words of
/// length ≤ cap; None when the node budget runs out first.
fn min_length_within(w: &Word, pres: &Presentation, cap: usize) -> Option<usize> {
    let start = free_reduce(w).0;
    let mut best = start.len();
    let mut visited: HashSet<Vec<Letter>> = HashSet::new();
    let mut queue: VecDeque<Vec<Letter>> = VecDeque::new();
    visited.insert(start.clone());
    queue.push_back(start);
    let mut scratch = Vec::new();
    while let Some(word) = queue.pop_front() {
        neighbors(&word, pres, cap, &mut scratch);
        for next in scratch.drain(..) {
            if visited.contains(&next) {
                continue;
            }
            best = best.min(next.len());
            visited.insert(next.clone());
            if visited.len() > BFS_NODE_BUDGET {
                return None;
            }
            queue.push_back(next);
        }
    }
    Some(best)
}

/// Geodesic length of the element w represents, by exhaustion: search within
/// the given cap, then re-search with the cap raised by 2 (and once more by
/// 4) until the minimum stabilizes across an increment. None when no stable
/// minimum is found within cap + 4 or a budget runs out.
pub fn bfs_geodesic_length(w: &Word, pres: &Presentation, cap: usize) -> Option<usize> {
    let mut prev = min_length_within(w, pres, cap)?;
    for extra in [2usize, 4] {
        let next = min_length_within(w, pres, cap + extra)?;
        if next == prev {
            return Some(next);
        }
        prev = next;
    }
    None
}

/// Every reducing sequence of w with at most max_len chain words, found by
/// exhausting factorisations and type assignments with left-to-right pruning;
/// each returned sequence revalidates via [`build_rrs`].
pub fn enumerate_rrs(
    w: &Word,
    pres: &Presentation,
    max_len: usize,
) -> Result<Vec<Rrs>, OracleError> {
    let n = w.len();
    if n > ENUMERATION_BOUND {
        return Err(OracleError::WordTooLong {
            len: n,
            bound: ENUMERATION_BOUND,
        });
    }
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let gens: Vec<GeneratorId> = pres.generators().collect();
    let mut type_options: Vec<CritType> = Vec::new();
    for (gi, &x) in gens.iter().enumerate() {
        for &y in &gens[gi + 1..] {
            type_options.push(CritType::P2g { pair: (x, y) });
        }
    }
    for &a in &gens {
        for &b in &gens {
            for &c in &gens {
                if a != b && a != c && b != c {
                    type_options.push(CritType::P3g { abc: (a, b, c) });
                }
            }
        }
    }

    // γ = w[g..] must be nonempty; everything before it is cut freely.
    for g in 1..n {
        // Zero chain words: w₁ = w[s..g] nonempty.
        for s in 0..g {
            let decomp = Decomposition {
                starts: vec![s],
                gamma_start: g,
            };
            if let Ok(rrs) = build_rrs(w, &decomp, &[], pres) {
                out.push(rrs);
            }
        }
        // At least one chain word: recursively pick cuts and types, pruning
        // as soon as a prefix of the chain fails to be critical.
        for mu in 0..g {
            let mut cuts = vec![mu];
            let mut types = Vec::new();
            extend_chain(
                w,
                pres,
                g,
                max_len,
                &type_options,
                &mut cuts,
                &mut types,
                &mut out,
            );
        }
    }
    Ok(out)
}

/// Depth-first extension of a partial chain: `cuts` holds the starts of
/// w₁ … w_i; try every end for w_{i+1} with every type, and every way to
/// stop (declaring the rest of w[..g] the tail factor).
#[allow(clippy::too_many_arguments)]
fn extend_chain(
    w: &Word,
    pres: &Presentation,
    g: usize,
    max_len: usize,
    type_options: &[CritType],
    cuts: &mut Vec<usize>,
    types: &mut Vec<CritType>,
    out: &mut Vec<Rrs>,
) {
    if types.len() == max_len {
        return;
    }
    let cur = *cuts.last().expect("cuts is nonempty");
    for end in cur + 1..=g {
        cuts.push(end);
        for &ty in type_options {
            types.push(ty);
            // Validate the partial chain cheaply by building against a
            // truncated host: treat w[end..g] as the tail and w[g..] as γ.
            let decomp = Decomposition {
                starts: cuts.clone(),
                gamma_start: g,
            };
            match build_rrs(w, &decomp, types, pres) {
                Ok(rrs) => {
                    out.push(rrs);
                    extend_chain(w, pres, g, max_len, type_options, cuts, types, out);
                }
                // A later chain word failed: the prefix up to `index` is
                // fine, so deeper cuts may still work.
                Err(crate::rrs::RrsError::EmptyTail)
                | Err(crate::rrs::RrsError::TailNotCommuting { .. })
                | Err(crate::rrs::RrsError::TailGammaMismatch) => {
                    extend_chain(w, pres, g, max_len, type_options, cuts, types, out);
                }
                Err(crate::rrs::RrsError::NotCritical { index }) if index <= types.len() => {
                    // The newest chain word itself is not critical; no deeper
                    // extension can fix that only if the failure is at the
                    // last word — which it always is here, since earlier
                    // words were validated at earlier depths.
                }
                Err(_) => {}
            }
            types.pop();
        }
        cuts.pop();
    }
}

/// All optimal reducing sequences of w: enumerate everything, keep the ones
/// whose first factor starts furthest right, then filter by the directly
/// checkable optimality clauses. The uniqueness theorem predicts at most one
/// survivor for hosts w·x with w geodesic.
pub fn optimal_rrs_exhaustive(w: &Word, pres: &Presentation) -> Result<Vec<Rrs>, OracleError> {
    let all = enumerate_rrs(w, pres, w.len())?;
    let best_mu = match all.iter().map(|r| r.decomposition.mu_len()).max() {
        Some(mu) => mu,
        None => return Ok(Vec::new()),
    };
    Ok(all
        .into_iter()
        .filter(|r| r.decomposition.mu_len() == best_mu)
        .filter(|r| optimality_clauses(w, r, pres).is_ok())
        .collect())
}

/// The two-generator geodesic criterion: a *freely reduced* word over {x, y}
/// with finite label m is geodesic if and only if p(w) + n(w) ≤ m, where p
/// and n are the longest positive and negative alternating subword lengths
/// (capped at m). Words with a free cancellation are outside the criterion's
/// domain and may be misclassified.
/// The criterion is quoted for m = 3; for m > 3 it must be explicitly
/// enabled, and callers are expected to cross-validate it against
/// [`bfs_geodesic_length`] first.
pub fn dihedral_geodesic(
    w: &Word,
    x: GeneratorId,
    y: GeneratorId,
    pres: &Presentation,
    allow_generalized: bool,
) -> Result<bool, OracleError> {
    let m = pres
        .label(x, y)
        .finite()
        .ok_or(OracleError::InfiniteLabel)?;
    if m > 3 && !allow_generalized {
        return Err(OracleError::GeneralizedCriterionDisabled);
    }
    if w.letters().iter().any(|l| l.name != x && l.name != y) {
        return Err(OracleError::NotDihedral {
            x: pres.name(x).to_string(),
            y: pres.name(y).to_string(),
        });
    }
    let stats = crate::word::pn_stats(w, x, y, pres).expect("label checked finite");
    Ok(stats.p + stats.n <= m)
}

/// Exhaustive geodesic lengths for every word of length ≤ cap at once: a
/// union-find over *all* words (not only freely reduced ones) of length
/// ≤ cap, with one union per elementary move, then a per-component minimum.
///
/// Unlike the per-word search this shares work across an entire exhaustive
/// test sweep; like it, a word's answer is only as good as the cap — callers
/// give words of interest at least two letters of headroom and escalate
/// suspicious cases individually.
pub struct GeodesicBall<'p> {
    pres: &'p Presentation,
    cap: usize,
    /// Number of distinct letters (2 · rank).
    radix: usize,
    /// offsets[k] = index of the first word of length k.
    offsets: Vec<usize>,
    parent: Vec<u32>,
    /// Minimum word length in each component, indexed by root.
    min_len: Vec<u8>,
}

impl<'p> GeodesicBall<'p> {
    pub fn build(pres: &'p Presentation, cap: usize) -> Result<GeodesicBall<'p>, OracleError> {
        let radix = 2 * pres.rank();
        let mut offsets = vec![0usize];
        let mut total: u128 = 0;
        let mut pow: u128 = 1;
        for _ in 0..=cap {
            total += pow;
            if total > BALL_STATE_BUDGET {
                return Err(OracleError::BallTooLarge {
                    cap,
                    letters: radix,
                });
            }
            offsets.push(total as usize);
            pow *= radix as u128;
        }
        let states = total as usize;
        let mut ball = GeodesicBall {
            pres,
            cap,
            radix,
            offsets,
            parent: (0..states as u32).collect(),
            min_len: vec![u8::MAX; states],
        };
        ball.add_edges();
        ball.finish_minima();
        Ok(ball)
    }

    fn letter_of_digit(&self, d: usize) -> Letter {
        let name = GeneratorId((d / 2) as u32);
        let sign = if d.is_multiple_of(2) { 1 } else { -1 };
        Letter { name, sign }
    }

    fn digit_of_letter(&self, l: Letter) -> usize {
        l.name.index() * 2 + usize::from(l.sign < 0)
    }

    fn encode(&self, digits: &[usize]) -> usize {
        let mut idx = 0usize;
        for &d in digits.iter().rev() {
            idx = idx * self.radix + d;
        }
        self.offsets[digits.len()] + idx
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] as usize != i {
            let gp = self.parent[self.parent[i] as usize];
            self.parent[i] = gp;
            i = gp as usize;
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Attach the higher root to the lower: lower indices are shorter
            // words, which keeps roots near the component minimum.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }

    fn add_edges(&mut self) {
        let gens: Vec<GeneratorId> = self.pres.generators().collect();
        let mut finite_pairs: Vec<(GeneratorId, GeneratorId, usize)> = Vec::new();
        for (gi, &x) in gens.iter().enumerate() {
            for &y in &gens[gi + 1..] {
                if let Some(m) = self.pres.label(x, y).finite() {
                    finite_pairs.push((x, y, m as usize));
                }
            }
        }
        for k in 1..=self.cap {
            // Odometer over all words of length k.
            let mut digits = vec![0usize; k];
            loop {
                let me = self.encode(&digits);
                // Cancellation edges to the length-(k−2) word.
                for i in 0..k.saturating_sub(1) {
                    let a = self.letter_of_digit(digits[i]);
                    let b = self.letter_of_digit(digits[i + 1]);
                    if a.cancels(b) {
                        let mut shorter = Vec::with_capacity(k - 2);
                        shorter.extend_from_slice(&digits[..i]);
                        shorter.extend_from_slice(&digits[i + 2..]);
                        let other = self.encode(&shorter);
                        self.union(me, other);
                    }
                }
                // Relator-factor swap edges.
                for &(x, y, m) in &finite_pairs {
                    if m > k {
                        continue;
                    }
                    'window: for i in 0..=(k - m) {
                        let first = self.letter_of_digit(digits[i]);
                        if first.name != x && first.name != y {
                            continue;
                        }
                        for (j, &d) in digits[i..i + m].iter().enumerate() {
                            let l = self.letter_of_digit(d);
                            let expect = if j % 2 == 0 {
                                first.name
                            } else {
                                partner(first.name, x, y)
                            };
                            if l.sign != first.sign || l.name != expect {
                                continue 'window;
                            }
                        }
                        let mut swapped = digits.clone();
                        for d in &mut swapped[i..i + m] {
                            let l = self.letter_of_digit(*d);
                            *d = self.digit_of_letter(Letter {
                                name: partner(l.name, x, y),
                                ..l
                            });
                        }
                        let other = self.encode(&swapped);
                        self.union(me, other);
                    }
                }
                // Advance the odometer.
                let mut pos = 0;
                loop {
                    if pos == k {
                        break;
                    }
                    digits[pos] += 1;
                    if digits[pos] < self.radix {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
        }
    }

    fn finish_minima(&mut self) {
        // Indices ascend with length, so the first visit to each root sets
        // the component minimum.
        for i in 0..self.parent.len() {
            let len = self.length_of_index(i);
            let root = self.find(i);
            if self.min_len[root] == u8::MAX {
                self.min_len[root] = len as u8;
            }
        }
    }

    fn length_of_index(&self, i: usize) -> usize {
        match self.offsets.binary_search(&i) {
            Ok(k) => k,
            Err(k) => k - 1,
        }
    }

    /// Geodesic length of the element w represents, as witnessed inside the
    /// ball; None when |w| > cap.
    pub fn geodesic_len(&mut self, w: &Word) -> Option<usize> {
        if w.len() > self.cap {
            return None;
        }
        let digits: Vec<usize> = w
            .letters()
            .iter()
            .map(|&l| self.digit_of_letter(l))
            .collect();
        let idx = self.encode(&digits);
        let root = self.find(idx);
        Some(self.min_len[root] as usize)
    }

    /// Iterate every word of length exactly k (including freely non-reduced
    /// ones), calling f with the word.
    pub fn for_each_word(&self, k: usize, mut f: impl FnMut(&Word)) {
        if k > self.cap {
            return;
        }
        if k == 0 {
            f(&Word::empty());
            return;
        }
        let mut digits = vec![0usize; k];
        loop {
            let letters: Vec<Letter> = digits.iter().map(|&d| self.letter_of_digit(d)).collect();
            f(&Word(letters));
            let mut pos = 0;
            loop {
                if pos == k {
                    break;
                }
                digits[pos] += 1;
                if digits[pos] < self.radix {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
}

/// Deduplicated geodesic-length table for all freely reduced words of length
/// ≤ max_len, computed from one shared ball with two letters of headroom.
pub fn geodesic_length_table(
    pres: &Presentation,
    max_len: usize,
) -> Result<HashMap<Word, usize>, OracleError> {
    let mut ball = GeodesicBall::build(pres, max_len + 2)?;
    let mut table = HashMap::new();
    for k in 0..=max_len {
        let mut words = Vec::new();
        ball.for_each_word(k, |w| {
            if w.is_freely_reduced() {
                words.push(w.clone());
            }
        });
        for w in words {
            let len = ball.geodesic_len(&w).expect("word is inside the ball");
            table.insert(w, len);
        }
    }
    Ok(table)
}

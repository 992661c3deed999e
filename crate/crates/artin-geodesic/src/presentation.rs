//! Artin presentations: generators, the Coxeter matrix, commutation tests and
//! the "no A3 or B3 subdiagram" hypothesis check.
//!
//! A presentation is a finite generator name table together with a total,
//! symmetric labelling of unordered generator pairs by values in
//! {2, 3, ...} ∪ {∞}. A label of 2 means the generators commute; ∞ means the
//! pair satisfies no defining relation.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index into a presentation's generator name table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId(pub u32);

impl GeneratorId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Label of an unordered generator pair in the Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxeterLabel {
    /// Finite label k >= 2: the pair satisfies the relation equating the two
    /// alternating products of length k.
    Finite(u32),
    /// No defining relation between the pair.
    Infinity,
}

impl CoxeterLabel {
    /// The finite value, if any.
    pub fn finite(self) -> Option<u32> {
        match self {
            CoxeterLabel::Finite(k) => Some(k),
            CoxeterLabel::Infinity => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, CoxeterLabel::Finite(_))
    }
}

impl fmt::Display for CoxeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterLabel::Finite(k) => write!(f, "{k}"),
            CoxeterLabel::Infinity => write!(f, "inf"),
        }
    }
}

/// Error raised while parsing a presentation file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected `generators:` header before any other content")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate generator `{name}`")]
    DuplicateGenerator { line: usize, name: String },
    #[error("line {line}: invalid generator name `{name}` (must be a nonempty identifier)")]
    InvalidGeneratorName { line: usize, name: String },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: label < 2")]
    LabelTooSmall { line: usize },
    #[error("line {line}: malformed line `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: pair `{x} {y}` labelled twice")]
    DuplicatePair { line: usize, x: String, y: String },
    #[error("line {line}: pair declared between `{name}` and itself")]
    SelfPair { line: usize, name: String },
    #[error("missing pair: `{x} {y}` has no label (all pairs must be explicit)")]
    MissingPair { x: String, y: String },
}

/// A validated Artin presentation: generator names plus a total symmetric
/// Coxeter matrix. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    by_name: HashMap<String, GeneratorId>,
    /// Row-major full matrix; the diagonal is unused (stored as Finite(2) but
    /// never read through the public API).
    labels: Vec<CoxeterLabel>,
}

impl Presentation {
    /// Build a presentation from generator names and explicit pair labels.
    ///
    /// Every unordered pair of distinct generators must appear exactly once in
    /// `pairs`; absence is an error, not ∞.
    pub fn new(
        names: Vec<String>,
        pairs: Vec<(String, String, CoxeterLabel)>,
    ) -> Result<Self, ParseError> {
        let mut by_name = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(ParseError::InvalidGeneratorName {
                    line: 0,
                    name: name.clone(),
                });
            }
            if by_name
                .insert(name.clone(), GeneratorId(i as u32))
                .is_some()
            {
                return Err(ParseError::DuplicateGenerator {
                    line: 0,
                    name: name.clone(),
                });
            }
        }
        let n = names.len();
        let mut labels = vec![None; n * n];
        for (x, y, label) in pairs {
            let xi = *by_name
                .get(&x)
                .ok_or_else(|| ParseError::UnknownGenerator {
                    line: 0,
                    name: x.clone(),
                })?;
            let yi = *by_name
                .get(&y)
                .ok_or_else(|| ParseError::UnknownGenerator {
                    line: 0,
                    name: y.clone(),
                })?;
            if xi == yi {
                return Err(ParseError::SelfPair { line: 0, name: x });
            }
            if let CoxeterLabel::Finite(k) = label {
                if k < 2 {
                    return Err(ParseError::LabelTooSmall { line: 0 });
                }
            }
            let slot = xi.index() * n + yi.index();
            if labels[slot].is_some() {
                return Err(ParseError::DuplicatePair { line: 0, x, y });
            }
            labels[slot] = Some(label);
            labels[yi.index() * n + xi.index()] = Some(label);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if labels[i * n + j].is_none() {
                    return Err(ParseError::MissingPair {
                        x: names[i].clone(),
                        y: names[j].clone(),
                    });
                }
            }
        }
        let labels = labels
            .into_iter()
            .map(|l| l.unwrap_or(CoxeterLabel::Finite(2)))
            .collect();
        Ok(Presentation {
            names,
            by_name,
            labels,
        })
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// All generator ids, in name-table order.
    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        (0..self.names.len() as u32).map(GeneratorId)
    }

    /// Name of a generator.
    pub fn name(&self, g: GeneratorId) -> &str {
        &self.names[g.index()]
    }

    /// Look a generator up by name.
    pub fn generator(&self, name: &str) -> Option<GeneratorId> {
        self.by_name.get(name).copied()
    }

    /// The Coxeter label of a pair of distinct generators.
    pub fn label(&self, x: GeneratorId, y: GeneratorId) -> CoxeterLabel {
        assert_ne!(x, y, "label requires distinct generators");
        self.labels[x.index() * self.rank() + y.index()]
    }

    /// True iff the pair satisfies m(x, y) = 2, i.e. the generators commute.
    /// Requires distinct generators.
    pub fn commutes(&self, x: GeneratorId, y: GeneratorId) -> bool {
        self.label(x, y) == CoxeterLabel::Finite(2)
    }

    /// Commutation extended to possibly-equal names: a generator trivially
    /// commutes with itself. This is the notion used throughout the rewriting
    /// engine when asking whether two letters commute.
    #[inline]
    pub fn names_commute(&self, x: GeneratorId, y: GeneratorId) -> bool {
        x == y || self.commutes(x, y)
    }

    /// Return every unordered triple {x, y, z} that admits a labelling with
    /// m(x,y) = 3, m(x,z) = 2 and m(y,z) ∈ {3, 4}. The presentation satisfies
    /// the engine's hypothesis iff the returned list is empty.
    pub fn validate_a3b3_free(&self) -> Vec<[GeneratorId; 3]> {
        let mut bad = Vec::new();
        let ids: Vec<GeneratorId> = self.generators().collect();
        let n = ids.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let triple = [ids[i], ids[j], ids[k]];
                    if self.triple_violates(triple) {
                        bad.push(triple);
                    }
                }
            }
        }
        bad
    }

    fn triple_violates(&self, t: [GeneratorId; 3]) -> bool {
        // Check every assignment of roles (x, y, z) to the triple.
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        perms.iter().any(|p| {
            let (x, y, z) = (t[p[0]], t[p[1]], t[p[2]]);
            self.label(x, y) == CoxeterLabel::Finite(3)
                && self.label(x, z) == CoxeterLabel::Finite(2)
                && matches!(
                    self.label(y, z),
                    CoxeterLabel::Finite(3) | CoxeterLabel::Finite(4)
                )
        })
    }

    /// Serialize to the line-oriented presentation file format. The output is
    /// canonical: `parse_presentation(p.format())` reconstructs `p` exactly,
    /// and formatting the result again is bit-identical.
    pub fn format(&self) -> String {
        let mut out = String::new();
        out.push_str("generators:");
        for name in &self.names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        for i in 0..self.rank() {
            for j in (i + 1)..self.rank() {
                let label = self.labels[i * self.rank() + j];
                out.push_str(&format!(
                    "pair: {} {} = {}\n",
                    self.names[i], self.names[j], label
                ));
            }
        }
        out
    }
}

/// Parse the line-oriented presentation file format:
///
/// ```text
/// # comment
/// generators: a b c
/// pair: a b = 3
/// pair: a c = 2
/// pair: b c = inf
/// ```
///
/// Every unordered pair of distinct generators must be labelled exactly once;
/// labels are decimal integers >= 2 or the literal `inf`. Parsing does NOT
/// enforce A3/B3-freeness; that is a separate check.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut names: Option<Vec<String>> = None;
    let mut pairs: Vec<(String, String, CoxeterLabel)> = Vec::new();
    let mut pair_lines: Vec<usize> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("generators:") {
            if names.is_some() {
                return Err(ParseError::Malformed {
                    line: line_no,
                    text: line.to_string(),
                });
            }
            let mut seen = Vec::new();
            for tok in rest.split_whitespace() {
                if tok.is_empty() || !tok.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(ParseError::InvalidGeneratorName {
                        line: line_no,
                        name: tok.to_string(),
                    });
                }
                if seen.iter().any(|s| s == tok) {
                    return Err(ParseError::DuplicateGenerator {
                        line: line_no,
                        name: tok.to_string(),
                    });
                }
                seen.push(tok.to_string());
            }
            names = Some(seen);
        } else if let Some(rest) = line.strip_prefix("pair:") {
            if names.is_none() {
                return Err(ParseError::MissingHeader { line: line_no });
            }
            let (lhs, rhs) = rest.split_once('=').ok_or_else(|| ParseError::Malformed {
                line: line_no,
                text: line.to_string(),
            })?;
            let gens: Vec<&str> = lhs.split_whitespace().collect();
            if gens.len() != 2 {
                return Err(ParseError::Malformed {
                    line: line_no,
                    text: line.to_string(),
                });
            }
            let rhs = rhs.trim();
            let label = if rhs == "inf" {
                CoxeterLabel::Infinity
            } else {
                let k: u32 = rhs.parse().map_err(|_| ParseError::Malformed {
                    line: line_no,
                    text: line.to_string(),
                })?;
                if k < 2 {
                    return Err(ParseError::LabelTooSmall { line: line_no });
                }
                CoxeterLabel::Finite(k)
            };
            pairs.push((gens[0].to_string(), gens[1].to_string(), label));
            pair_lines.push(line_no);
        } else {
            return Err(ParseError::Malformed {
                line: line_no,
                text: line.to_string(),
            });
        }
    }
    let names = names.ok_or(ParseError::MissingHeader {
        line: text.lines().count() + 1,
    })?;
    // Rebuild with line numbers restored in errors where possible.
    match Presentation::new(names, pairs.clone()) {
        Ok(p) => Ok(p),
        Err(mut e) => {
            // Best-effort line attribution for pair-level errors.
            if let ParseError::DuplicatePair { line, x, y } = &mut e {
                if *line == 0 {
                    if let Some(pos) = pairs
                        .iter()
                        .enumerate()
                        .filter(|(_, (a, b, _))| (a == x && b == y) || (a == y && b == x))
                        .map(|(i, _)| i)
                        .next_back()
                    {
                        *line = pair_lines[pos];
                    }
                }
            }
            Err(e)
        }
    }
}

/// Convenience constructor used widely in tests and benchmarks: a rank-3
/// presentation on generators a, b, c with m(a,b), m(a,c), m(b,c) given in
/// that order.
pub fn rank3(mab: CoxeterLabel, mac: CoxeterLabel, mbc: CoxeterLabel) -> Presentation {
    Presentation::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            ("a".into(), "b".into(), mab),
            ("a".into(), "c".into(), mac),
            ("b".into(), "c".into(), mbc),
        ],
    )
    .expect("valid rank-3 presentation")
}

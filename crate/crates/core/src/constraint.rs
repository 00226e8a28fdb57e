//! Weakly-hard constraints over per-period outcomes.
//!
//! A control job's period is labelled with an [`Outcome`]: `H` when the job
//! released in the period also completes in it, `M` when nothing completes,
//! and `R` (Skip-Next only) when a job released earlier completes without a
//! new release. Constraints bound hits and misses over sliding windows.
//!
//! Windows are evaluated over the string `H^∞ · α`: the task is assumed to
//! have hit every deadline before the first observed period, and only the
//! windows that end inside `α` are checked. `R` counts as a completion for
//! every constraint kind.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest string length accepted by [`enumerate_satisfaction_set`].
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Hit,
    Miss,
    Recovery,
}

impl Outcome {
    pub const ALL: [Outcome; 3] = [Outcome::Hit, Outcome::Miss, Outcome::Recovery];

    pub fn index(self) -> usize {
        match self {
            Outcome::Hit => 0,
            Outcome::Miss => 1,
            Outcome::Recovery => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::Hit => 'H',
            Outcome::Miss => 'M',
            Outcome::Recovery => 'R',
        }
    }

    pub fn from_symbol(c: char) -> Option<Outcome> {
        match c.to_ascii_uppercase() {
            'H' => Some(Outcome::Hit),
            'M' => Some(Outcome::Miss),
            'R' => Some(Outcome::Recovery),
            _ => None,
        }
    }

    /// A period "contains a job completion" for `H` and `R`.
    pub fn is_completion(self) -> bool {
        !matches!(self, Outcome::Miss)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Deadline-miss handling strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "kill")]
    Kill,
    #[serde(rename = "skip-next")]
    SkipNext,
}

impl Strategy {
    pub fn alphabet(self) -> &'static [Outcome] {
        match self {
            Strategy::Kill => &[Outcome::Hit, Outcome::Miss],
            Strategy::SkipNext => &[Outcome::Hit, Outcome::Miss, Outcome::Recovery],
        }
    }

    pub fn admits(self, outcome: Outcome) -> bool {
        self.alphabet().contains(&outcome)
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Kill => "kill",
            Strategy::SkipNext => "skip-next",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kill" => Ok(Strategy::Kill),
            "skip-next" | "skipnext" | "skip_next" => Ok(Strategy::SkipNext),
            other => Err(Error::Parse(format!(
                "unknown strategy `{other}` (expected `kill` or `skip-next`)"
            ))),
        }
    }
}

/// Outcomes that may follow `last`.
///
/// Under Kill a fresh job is released every period. Under Skip-Next a missed
/// job keeps running, so the period after a miss either misses again or
/// recovers; a hit cannot occur until the pending job has completed.
pub fn successors(last: Outcome, strategy: Strategy) -> &'static [Outcome] {
    match (strategy, last) {
        (Strategy::Kill, _) => &[Outcome::Hit, Outcome::Miss],
        (Strategy::SkipNext, Outcome::Miss) => &[Outcome::Miss, Outcome::Recovery],
        (Strategy::SkipNext, _) => &[Outcome::Hit, Outcome::Miss],
    }
}

/// One weakly-hard constraint. Parameters count periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// At most `misses` periods without a completion in any `window` consecutive periods.
    AnyMiss { misses: u32, window: u32 },
    /// At least `hits` periods with a completion in any `window` consecutive periods.
    AnyHit { hits: u32, window: u32 },
    /// At most `misses` consecutive periods without a completion. The window
    /// is irrelevant once it exceeds `misses` and may be omitted.
    RowMiss { misses: u32, window: Option<u32> },
    /// At least `hits` consecutive completions in any `window` consecutive periods.
    RowHit { hits: u32, window: u32 },
}

impl Constraint {
    pub fn any_miss(misses: u32, window: u32) -> Result<Self> {
        check_params("anymiss", misses, window)?;
        Ok(Constraint::AnyMiss { misses, window })
    }

    pub fn any_hit(hits: u32, window: u32) -> Result<Self> {
        check_params("anyhit", hits, window)?;
        Ok(Constraint::AnyHit { hits, window })
    }

    pub fn row_miss(misses: u32, window: Option<u32>) -> Result<Self> {
        if let Some(window) = window {
            check_params("rowmiss", misses, window)?;
        }
        Ok(Constraint::RowMiss { misses, window })
    }

    pub fn row_hit(hits: u32, window: u32) -> Result<Self> {
        check_params("rowhit", hits, window)?;
        Ok(Constraint::RowHit { hits, window })
    }

    /// The count parameter (`m` or `h`).
    pub fn count(&self) -> u32 {
        match *self {
            Constraint::AnyMiss { misses, .. } | Constraint::RowMiss { misses, .. } => misses,
            Constraint::AnyHit { hits, .. } | Constraint::RowHit { hits, .. } => hits,
        }
    }

    /// Window length as written, with an omitted row-miss window read as `m + 1`.
    pub fn window(&self) -> u32 {
        match *self {
            Constraint::AnyMiss { window, .. }
            | Constraint::AnyHit { window, .. }
            | Constraint::RowHit { window, .. } => window,
            Constraint::RowMiss { misses, window } => window.unwrap_or(misses + 1),
        }
    }

    /// Number of trailing periods that decide whether the newest period is
    /// admissible. Row-miss only ever needs `m + 1` of them.
    pub fn memory(&self) -> usize {
        match *self {
            Constraint::RowMiss { misses, window } => {
                let run = misses as usize + 1;
                window.map_or(run, |w| (w as usize).min(run))
            }
            other => other.window() as usize,
        }
    }

    /// Checks the window made of the last [`memory`](Self::memory) symbols of
    /// `tail`. Missing leading symbols are read as hits.
    pub fn admits_tail(&self, tail: &[Outcome]) -> bool {
        let width = self.memory();
        let skip = tail.len().saturating_sub(width);
        let pad = width.saturating_sub(tail.len());
        let window = std::iter::repeat_n(Outcome::Hit, pad).chain(tail[skip..].iter().copied());
        match *self {
            Constraint::AnyMiss { misses, .. } => {
                window.filter(|o| !o.is_completion()).count() as u32 <= misses
            }
            Constraint::AnyHit { hits, .. } => {
                window.filter(|o| o.is_completion()).count() as u32 >= hits
            }
            Constraint::RowMiss { misses, .. } => longest_run(window, false) <= misses,
            Constraint::RowHit { hits, .. } => longest_run(window, true) >= hits,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Constraint::AnyMiss { .. } => "anymiss",
            Constraint::AnyHit { .. } => "anyhit",
            Constraint::RowMiss { .. } => "rowmiss",
            Constraint::RowHit { .. } => "rowhit",
        }
    }
}

fn check_params(kind: &str, count: u32, window: u32) -> Result<()> {
    if window == 0 {
        return Err(Error::InvalidConstraint(format!(
            "{kind}: window must be at least 1"
        )));
    }
    if count > window {
        return Err(Error::InvalidConstraint(format!(
            "{kind}({count},{window}): count exceeds window"
        )));
    }
    Ok(())
}

fn longest_run(window: impl Iterator<Item = Outcome>, completions: bool) -> u32 {
    let mut best = 0;
    let mut run = 0;
    for o in window {
        if o.is_completion() == completions {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// Rewrites a row-miss constraint as the equivalent any-miss constraint
/// `anymiss(m, m+1)`. An explicit window no longer than `m` can never be
/// violated and becomes the equally vacuous `anymiss(w, w)`. Other kinds are
/// returned unchanged.
pub fn normalize_row_constraint(c: Constraint) -> Constraint {
    match c {
        Constraint::RowMiss { misses, window } => match window {
            Some(w) if w <= misses => Constraint::AnyMiss {
                misses: w,
                window: w,
            },
            _ => Constraint::AnyMiss {
                misses,
                window: misses + 1,
            },
        },
        other => other,
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Constraint::AnyMiss { misses, window } => write!(f, "anymiss({misses},{window})"),
            Constraint::AnyHit { hits, window } => write!(f, "anyhit({hits},{window})"),
            Constraint::RowMiss {
                misses,
                window: None,
            } => write!(f, "rowmiss({misses})"),
            Constraint::RowMiss {
                misses,
                window: Some(w),
            } => write!(f, "rowmiss({misses},{w})"),
            Constraint::RowHit { hits, window } => write!(f, "rowhit({hits},{window})"),
        }
    }
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let text = text.to_ascii_lowercase();
        let (kind, rest) = text
            .split_once('(')
            .ok_or_else(|| Error::Parse(format!("expected `kind(args)`, got `{s}`")))?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("missing `)` in `{s}`")))?;
        let nums = args
            .split(',')
            .map(|a| {
                a.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad integer `{a}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let pair = |nums: &[u32]| -> Result<(u32, u32)> {
            match nums {
                [a, b] => Ok((*a, *b)),
                _ => Err(Error::Parse(format!("`{kind}` takes two arguments: `{s}`"))),
            }
        };
        match kind {
            "anymiss" => pair(&nums).and_then(|(m, k)| Constraint::any_miss(m, k)),
            "anyhit" => pair(&nums).and_then(|(h, k)| Constraint::any_hit(h, k)),
            "rowhit" => pair(&nums).and_then(|(h, k)| Constraint::row_hit(h, k)),
            "rowmiss" => match nums.as_slice() {
                [m] => Constraint::row_miss(*m, None),
                [m, k] => Constraint::row_miss(*m, Some(*k)),
                _ => Err(Error::Parse(format!(
                    "`rowmiss` takes one or two arguments: `{s}`"
                ))),
            },
            other => Err(Error::Parse(format!("unknown constraint kind `{other}`"))),
        }
    }
}

impl Serialize for Constraint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Constraint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A non-empty set of constraints evaluated under one strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    constraints: Vec<Constraint>,
    strategy: Strategy,
}

impl ConstraintSet {
    pub fn new(constraints: Vec<Constraint>, strategy: Strategy) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::InvalidConstraint(
                "a constraint set needs at least one constraint".into(),
            ));
        }
        Ok(ConstraintSet {
            constraints,
            strategy,
        })
    }

    pub fn single(constraint: Constraint, strategy: Strategy) -> Self {
        ConstraintSet {
            constraints: vec![constraint],
            strategy,
        }
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Word length of the constraint graph: the longest memory among members.
    pub fn word_length(&self) -> usize {
        self.constraints
            .iter()
            .map(Constraint::memory)
            .max()
            .unwrap_or(1)
            .max(1)
    }

    /// Whether the newest symbol of `history` is admissible for every member.
    pub fn admits_tail(&self, history: &[Outcome]) -> bool {
        self.constraints.iter().all(|c| c.admits_tail(history))
    }

    pub fn with(&self, extra: Constraint) -> Self {
        let mut constraints = self.constraints.clone();
        constraints.push(extra);
        ConstraintSet {
            constraints,
            strategy: self.strategy,
        }
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}_{}", self.strategy)
    }
}

/// A finite sequence of outcomes, written e.g. `"HMR"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OutcomeString(pub Vec<Outcome>);

impl OutcomeString {
    pub fn new(symbols: Vec<Outcome>) -> Self {
        OutcomeString(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Outcome] {
        &self.0
    }

    /// Checks the alphabet and the successor relation. With
    /// `from_startup` the first symbol must also be a successor of the
    /// implicit leading hit; otherwise a leading recovery is admitted.
    pub fn validate(&self, strategy: Strategy, from_startup: bool) -> Result<()> {
        let mut prev = if from_startup {
            Some(Outcome::Hit)
        } else {
            None
        };
        for (i, &o) in self.0.iter().enumerate() {
            if !strategy.admits(o) {
                return Err(Error::MalformedSequence(format!(
                    "`{o}` at position {} is not in the {strategy} alphabet",
                    i + 1
                )));
            }
            if let Some(p) = prev {
                if !successors(p, strategy).contains(&o) {
                    return Err(Error::MalformedSequence(format!(
                        "`{o}` at position {} cannot follow `{p}` under {strategy}",
                        i + 1
                    )));
                }
            }
            prev = Some(o);
        }
        Ok(())
    }
}

impl fmt::Display for OutcomeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.0 {
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

impl FromStr for OutcomeString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| {
                Outcome::from_symbol(c)
                    .ok_or_else(|| Error::Parse(format!("unknown outcome symbol `{c}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(OutcomeString)
    }
}

impl Serialize for OutcomeString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OutcomeString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Whether `seq` satisfies `c` under `strategy`.
///
/// A leading `R` is accepted so that slices taken from the middle of a run
/// can be checked; every later `R` must directly follow an `M`.
pub fn satisfies(seq: &OutcomeString, c: &Constraint, strategy: Strategy) -> Result<bool> {
    seq.validate(strategy, false)?;
    let symbols = seq.symbols();
    Ok((1..=symbols.len()).all(|end| c.admits_tail(&symbols[..end])))
}

/// All strings of length `n` reachable from the all-hit startup that satisfy
/// every constraint of `cs`, in lexicographic `H < M < R` order.
pub fn enumerate_satisfaction_set(cs: &ConstraintSet, n: usize) -> Result<Vec<OutcomeString>> {
    enumerate_satisfaction_set_capped(cs, n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_satisfaction_set_capped(
    cs: &ConstraintSet,
    n: usize,
    cap: usize,
) -> Result<Vec<OutcomeString>> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "string length",
            value: n,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(n);
    extend(cs, n, &mut stack, &mut out);
    Ok(out)
}

fn extend(cs: &ConstraintSet, n: usize, stack: &mut Vec<Outcome>, out: &mut Vec<OutcomeString>) {
    if stack.len() == n {
        out.push(OutcomeString(stack.clone()));
        return;
    }
    let last = stack.last().copied().unwrap_or(Outcome::Hit);
    for &next in successors(last, cs.strategy()) {
        stack.push(next);
        if cs.admits_tail(stack) {
            extend(cs, n, stack, out);
        }
        stack.pop();
    }
}

//! Brute-force oracles shared by the integration suites. They rebuild
//! window semantics from scratch instead of calling the library.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whstab_core::constraint::{Constraint, Outcome, Strategy};
use whstab_core::dynamics::StateSpace;

pub const H: Outcome = Outcome::Hit;
pub const M: Outcome = Outcome::Miss;
pub const R: Outcome = Outcome::Recovery;

pub fn word(s: &str) -> Vec<Outcome> {
    s.chars()
        .map(|c| match c {
            'H' => H,
            'M' => M,
            'R' => R,
            other => panic!("bad symbol {other}"),
        })
        .collect()
}

pub fn text(w: &[Outcome]) -> String {
    w.iter()
        .map(|o| match o {
            Outcome::Hit => 'H',
            Outcome::Miss => 'M',
            Outcome::Recovery => 'R',
        })
        .collect()
}

pub fn alphabet(strategy: Strategy) -> &'static [Outcome] {
    match strategy {
        Strategy::Kill => &[H, M],
        Strategy::SkipNext => &[H, M, R],
    }
}

fn window_len(c: &Constraint) -> usize {
    match *c {
        Constraint::AnyMiss { window, .. }
        | Constraint::AnyHit { window, .. }
        | Constraint::RowHit { window, .. } => window as usize,
        Constraint::RowMiss { misses, window } => window.unwrap_or(misses + 1) as usize,
    }
}

fn longest(w: &[Outcome], pred: impl Fn(Outcome) -> bool) -> usize {
    let (mut best, mut run) = (0, 0);
    for &o in w {
        run = if pred(o) { run + 1 } else { 0 };
        best = best.max(run);
    }
    best
}

/// Condition of `c` on one window; a recovery is a completion.
pub fn window_meets(w: &[Outcome], c: &Constraint) -> bool {
    let done = |o: Outcome| o != M;
    match *c {
        Constraint::AnyMiss { misses, .. } => {
            w.iter().filter(|&&o| !done(o)).count() <= misses as usize
        }
        Constraint::AnyHit { hits, .. } => w.iter().filter(|&&o| done(o)).count() >= hits as usize,
        Constraint::RowMiss { misses, .. } => longest(w, |o| !done(o)) <= misses as usize,
        Constraint::RowHit { hits, .. } => longest(w, done) >= hits as usize,
    }
}

/// Every window of `H^k · w` ending inside `w`.
pub fn windows_ok(w: &[Outcome], c: &Constraint) -> bool {
    let k = window_len(c);
    let mut padded = vec![H; k];
    padded.extend_from_slice(w);
    (k..padded.len()).all(|end| window_meets(&padded[end + 1 - k..=end], c))
}

/// Successor rule. With `startup` the symbol before `w` is a hit; without
/// it the first symbol is unconstrained.
pub fn order_ok(w: &[Outcome], strategy: Strategy, startup: bool) -> bool {
    let mut prev = if startup { Some(H) } else { None };
    for &o in w {
        let ok = match strategy {
            Strategy::Kill => o != R,
            Strategy::SkipNext => match prev {
                None => true,
                Some(Outcome::Miss) => o != H,
                Some(_) => o != R,
            },
        };
        if !ok {
            return false;
        }
        prev = Some(o);
    }
    true
}

pub fn oracle_satisfies(
    w: &[Outcome],
    cs: &[Constraint],
    strategy: Strategy,
    startup: bool,
) -> bool {
    order_ok(w, strategy, startup) && cs.iter().all(|c| windows_ok(w, c))
}

pub fn all_strings(strategy: Strategy, n: usize) -> Vec<Vec<Outcome>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet(strategy).iter().map(move |&o| {
                    let mut v = w.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }
    out
}

/// Strings of length `n` from startup that can be extended forever without
/// violating `cs`, in H < M < R order. Built from a private history automaton.
pub struct LiveOracle {
    strategy: Strategy,
    width: usize,
    live: HashSet<Vec<Outcome>>,
    start: Vec<Outcome>,
}

impl LiveOracle {
    pub fn new(cs: &[Constraint], strategy: Strategy) -> Self {
        let width = cs.iter().map(window_len).max().unwrap_or(1).max(1);
        let start = vec![H; width];
        let step = |state: &[Outcome], o: Outcome| -> Option<Vec<Outcome>> {
            if !order_ok(&[o], strategy, false)
                || !order_ok(&[state[width - 1], o], strategy, false)
            {
                return None;
            }
            let mut next = state[1..].to_vec();
            next.push(o);
            let fits = cs.iter().all(|c| {
                let k = window_len(c);
                window_meets(&next[width - k..], c)
            });
            fits.then_some(next)
        };
        let mut succ: HashMap<Vec<Outcome>, Vec<Vec<Outcome>>> = HashMap::new();
        let mut queue = VecDeque::from([start.clone()]);
        let mut seen = HashSet::from([start.clone()]);
        while let Some(s) = queue.pop_front() {
            let nexts: Vec<_> = alphabet(strategy)
                .iter()
                .filter_map(|&o| step(&s, o))
                .collect();
            for n in &nexts {
                if seen.insert(n.clone()) {
                    queue.push_back(n.clone());
                }
            }
            succ.insert(s, nexts);
        }
        let mut live: HashSet<Vec<Outcome>> = seen;
        loop {
            let dead: Vec<_> = live
                .iter()
                .filter(|s| !succ[*s].iter().any(|n| live.contains(n)))
                .cloned()
                .collect();
            if dead.is_empty() {
                break;
            }
            for d in dead {
                live.remove(&d);
            }
        }
        LiveOracle {
            strategy,
            width,
            live,
            start,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.live.contains(&self.start)
    }

    pub fn strings(&self, n: usize) -> Vec<Vec<Outcome>> {
        let mut out = Vec::new();
        if !self.is_empty() {
            self.collect(&self.start.clone(), &mut Vec::new(), n, &mut out);
        }
        out
    }

    fn collect(
        &self,
        state: &[Outcome],
        w: &mut Vec<Outcome>,
        n: usize,
        out: &mut Vec<Vec<Outcome>>,
    ) {
        if w.len() == n {
            out.push(w.clone());
            return;
        }
        for &o in alphabet(self.strategy) {
            if self.strategy == Strategy::SkipNext
                && !order_ok(&[state[self.width - 1], o], self.strategy, false)
            {
                continue;
            }
            if self.strategy == Strategy::Kill && o == R {
                continue;
            }
            let mut next = state[1..].to_vec();
            next.push(o);
            if self.live.contains(&next) {
                w.push(o);
                self.collect(&next, w, n, out);
                w.pop();
            }
        }
    }
}

/// Every constraint with window at most 5.
pub fn universe() -> Vec<Constraint> {
    let mut out = Vec::new();
    for k in 1..=5 {
        for m in 0..=k {
            out.push(Constraint::any_miss(m, k).unwrap());
            out.push(Constraint::any_hit(m, k).unwrap());
        }
        for h in 1..=k {
            out.push(Constraint::row_hit(h, k).unwrap());
        }
    }
    for m in 0..=4 {
        out.push(Constraint::row_miss(m, None).unwrap());
    }
    out
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-scale..scale))
}

/// Random single-input single-output plant with up to three states and a
/// controller with zero or one state.
pub fn random_system(seed: u64) -> (StateSpace, StateSpace) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let s = rng.gen_range(0..=1);
    let plant = StateSpace::new(
        random_matrix(&mut rng, n, n, 0.9),
        random_matrix(&mut rng, n, 1, 1.0),
        random_matrix(&mut rng, 1, n, 1.0),
        DMatrix::zeros(1, 1),
    )
    .unwrap();
    let ctrl = StateSpace::new(
        random_matrix(&mut rng, s, s, 0.9),
        random_matrix(&mut rng, s, 1, 1.0),
        random_matrix(&mut rng, 1, s, 1.0),
        random_matrix(&mut rng, 1, 1, 0.5),
    )
    .unwrap();
    (plant, ctrl)
}

/// `max ‖A_α‖^{1/ℓ}` per exact length `ℓ = 1..=max_len`, with `α` drawn from
/// `strings(ℓ)`; lengths without strings give 0.
pub fn max_norm_per_length(
    product: impl Fn(&[Outcome]) -> DMatrix<f64>,
    strings: impl Fn(usize) -> Vec<Vec<Outcome>>,
    max_len: usize,
) -> Vec<f64> {
    (1..=max_len)
        .map(|l| {
            strings(l)
                .iter()
                .map(|w| product(w).singular_values().max().powf(1.0 / l as f64))
                .fold(0.0, f64::max)
        })
        .collect()
}

pub mod props;

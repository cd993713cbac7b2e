//! Social-choice events as polytopes in the space of election outcomes.
//!
//! For `n` candidates there are `N = n!` preference orders. Coordinate `i`
//! is the share of voters with order `i`; orders are the permutations of
//! `0..n` in lexicographic order, each listed from most to least preferred.
//! Candidate `0` is A, `1` is B, and so on. Under the impartial anonymous
//! culture the limiting probability of an event is the lattice volume of its
//! polytope inside the simplex `{x >= 0, Σ x = 1}`, which has volume 1.

use num_traits::{One, Zero};

use crate::descent::{descend_with, DescentOptions};
use crate::error::{Error, Result};
use crate::linalg::{Int, Rat};
use crate::polytope::{dual_convert_seeded, ConstraintSystem, PolytopeInput};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceSpace {
    pub n_candidates: usize,
    /// `orders[i][k]` is the candidate in place `k` of order `i`.
    pub orders: Vec<Vec<usize>>,
    /// `position[i][c]` is the place of candidate `c` in order `i`.
    position: Vec<Vec<usize>>,
}

impl PreferenceSpace {
    pub fn new(n: usize) -> Self {
        let mut orders = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            orders.push(current.clone());
            if !next_permutation(&mut current) {
                break;
            }
        }
        let position = orders
            .iter()
            .map(|o| {
                let mut pos = vec![0; n];
                for (k, &c) in o.iter().enumerate() {
                    pos[c] = k;
                }
                pos
            })
            .collect();
        Self {
            n_candidates: n,
            orders,
            position,
        }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Index of an order given as a list of candidates.
    pub fn index_of(&self, order: &[usize]) -> Option<usize> {
        self.orders.iter().position(|o| o == order)
    }

    /// Renders order `i` with letters, e.g. `ACBD`.
    pub fn label(&self, i: usize) -> String {
        self.orders[i].iter().map(|&c| candidate_name(c)).collect()
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn candidate_name(c: usize) -> char {
    (b'A' + c as u8) as char
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// One point for a first place among the alive candidates.
    Plurality,
    /// Minus one point for a last place among the alive candidates.
    NegativePlurality,
    /// `n - 1 - k` points for place `k`.
    Borda,
}

impl Rule {
    pub fn short_name(self) -> &'static str {
        match self {
            Rule::Plurality => "PR",
            Rule::NegativePlurality => "NPR",
            Rule::Borda => "BR",
        }
    }
}

/// Score of candidate `x` under `rule`, with voters' orders restricted to
/// the `alive` candidates.
pub fn score_form(
    space: &PreferenceSpace,
    rule: Rule,
    x: usize,
    alive: &[usize],
) -> Result<Vec<Int>> {
    let n = space.n_candidates;
    if x >= n || !alive.contains(&x) || alive.iter().any(|&c| c >= n) {
        return Err(Error::InvalidEvent(format!(
            "candidate {} is not among the alive candidates",
            candidate_name(x.min(25))
        )));
    }
    if rule == Rule::Borda && alive.len() != n {
        return Err(Error::BordaRestricted);
    }
    let form = space
        .position
        .iter()
        .map(|pos| {
            let px = pos[x];
            let v = match rule {
                Rule::Plurality => alive.iter().all(|&c| pos[c] >= px) as i64,
                Rule::NegativePlurality => -(alive.iter().all(|&c| pos[c] <= px) as i64),
                Rule::Borda => (n - 1 - px) as i64,
            };
            Int::from(v)
        })
        .collect();
    Ok(form)
}

/// `+1` on orders ranking `x` above `y`, `-1` otherwise.
pub fn pairwise_form(space: &PreferenceSpace, x: usize, y: usize) -> Vec<Int> {
    space
        .position
        .iter()
        .map(|pos| Int::from(if pos[x] < pos[y] { 1 } else { -1 }))
        .collect()
}

fn diff(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// A wins under plurality, negative plurality, Borda and majority.
    AllFourRules,
    /// A beats every rival in pairwise majority.
    CondorcetWinner,
    /// A is the Condorcet winner and the plurality winner.
    CondorcetPlurality,
    /// A is Condorcet and plurality winner and takes Borda place `place`
    /// (1-based); the first `place - 1` rivals are placed above A.
    OtherParadox { place: usize },
    /// A is the Condorcet loser and wins under `rule`.
    StrongBorda { rule: Rule },
    /// A is the Condorcet winner and is last under `rule`.
    ReverseStrongBorda { rule: Rule },
    /// A is the Condorcet winner, the last rival is eliminated first and A
    /// is eliminated second.
    Elimination { rule: Rule },
    /// A is the Condorcet winner, `eliminated` goes out in round one with
    /// `above_first` above A, and `above_second` are above A in round two.
    EliminationConfig {
        rule: Rule,
        eliminated: usize,
        above_first: Vec<usize>,
        above_second: Vec<usize>,
    },
    /// Explicit rule inequalities (forms `>= 0`) added to the sign constraints.
    Custom { inequalities: Vec<Vec<Int>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VotingEvent {
    pub n_candidates: usize,
    pub kind: EventKind,
    /// The distinguished candidate A.
    pub winner: usize,
}

impl VotingEvent {
    pub fn new(n_candidates: usize, kind: EventKind) -> Self {
        Self {
            n_candidates,
            kind,
            winner: 0,
        }
    }

    pub fn with_winner(mut self, winner: usize) -> Self {
        self.winner = winner;
        self
    }

    /// The rivals of A in canonical order (B, C, D for A = 0).
    pub fn rivals(&self) -> Vec<usize> {
        (0..self.n_candidates)
            .filter(|&c| c != self.winner)
            .collect()
    }
}

/// Inequalities making `x` win (`winner = true`) or lose under `rule`
/// against every other candidate in `alive`.
fn extremal(
    space: &PreferenceSpace,
    rule: Rule,
    x: usize,
    alive: &[usize],
    winner: bool,
) -> Result<Vec<Vec<Int>>> {
    let fx = score_form(space, rule, x, alive)?;
    alive
        .iter()
        .filter(|&&c| c != x)
        .map(|&c| {
            let fc = score_form(space, rule, c, alive)?;
            Ok(if winner {
                diff(&fx, &fc)
            } else {
                diff(&fc, &fx)
            })
        })
        .collect()
}

fn condorcet(space: &PreferenceSpace, a: usize, winner: bool) -> Vec<Vec<Int>> {
    (0..space.n_candidates)
        .filter(|&c| c != a)
        .map(|c| {
            if winner {
                pairwise_form(space, a, c)
            } else {
                pairwise_form(space, c, a)
            }
        })
        .collect()
}

/// `above` are ranked at least as high as `a` under `rule`, the other
/// members of `alive` (except `skip`) at most as high.
fn placement(
    space: &PreferenceSpace,
    rule: Rule,
    a: usize,
    alive: &[usize],
    above: &[usize],
    skip: Option<usize>,
) -> Result<Vec<Vec<Int>>> {
    let fa = score_form(space, rule, a, alive)?;
    let mut out = Vec::new();
    for &c in alive {
        if c == a || Some(c) == skip {
            continue;
        }
        let fc = score_form(space, rule, c, alive)?;
        out.push(if above.contains(&c) {
            diff(&fc, &fa)
        } else {
            diff(&fa, &fc)
        });
    }
    Ok(out)
}

/// Compiles an event to `x >= 0`, the rule inequalities, and `Σ x = 1` as grading.
pub fn build_event(e: &VotingEvent) -> Result<ConstraintSystem> {
    let n = e.n_candidates;
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidEvent(format!(
            "{n} candidates are not supported"
        )));
    }
    if e.winner >= n {
        return Err(Error::InvalidEvent("winner is not a candidate".into()));
    }
    let space = PreferenceSpace::new(n);
    let a = e.winner;
    let all: Vec<usize> = (0..n).collect();
    let rivals = e.rivals();
    let mut rules: Vec<Vec<Int>> = Vec::new();
    match &e.kind {
        EventKind::AllFourRules => {
            rules.extend(extremal(&space, Rule::Plurality, a, &all, true)?);
            rules.extend(extremal(&space, Rule::NegativePlurality, a, &all, true)?);
            rules.extend(extremal(&space, Rule::Borda, a, &all, true)?);
            rules.extend(condorcet(&space, a, true));
        }
        EventKind::CondorcetWinner => rules.extend(condorcet(&space, a, true)),
        EventKind::CondorcetPlurality => {
            rules.extend(condorcet(&space, a, true));
            rules.extend(extremal(&space, Rule::Plurality, a, &all, true)?);
        }
        EventKind::OtherParadox { place } => {
            if *place == 0 || *place > n {
                return Err(Error::InvalidEvent(format!(
                    "Borda place {place} out of range"
                )));
            }
            rules.extend(condorcet(&space, a, true));
            rules.extend(extremal(&space, Rule::Plurality, a, &all, true)?);
            rules.extend(placement(
                &space,
                Rule::Borda,
                a,
                &all,
                &rivals[..place - 1],
                None,
            )?);
        }
        EventKind::StrongBorda { rule } => {
            rules.extend(condorcet(&space, a, false));
            rules.extend(extremal(&space, *rule, a, &all, true)?);
        }
        EventKind::ReverseStrongBorda { rule } => {
            rules.extend(condorcet(&space, a, true));
            rules.extend(extremal(&space, *rule, a, &all, false)?);
        }
        EventKind::Elimination { rule } => {
            if n < 3 {
                return Err(Error::InvalidEvent(
                    "elimination needs three candidates".into(),
                ));
            }
            let last = *rivals.last().expect("n >= 3");
            let survivors: Vec<usize> = all.iter().copied().filter(|&c| c != last).collect();
            rules.extend(condorcet(&space, a, true));
            rules.extend(extremal(&space, *rule, last, &all, false)?);
            rules.extend(extremal(&space, *rule, a, &survivors, false)?);
        }
        EventKind::EliminationConfig {
            rule,
            eliminated,
            above_first,
            above_second,
        } => {
            let e1 = *eliminated;
            let valid = e1 != a
                && e1 < n
                && above_first.iter().all(|&c| c != a && c != e1 && c < n)
                && above_second.iter().all(|&c| c != a && c != e1 && c < n);
            if !valid || has_duplicates(above_first) || has_duplicates(above_second) {
                return Err(Error::InvalidEvent(
                    "inconsistent elimination configuration".into(),
                ));
            }
            let survivors: Vec<usize> = all.iter().copied().filter(|&c| c != e1).collect();
            rules.extend(condorcet(&space, a, true));
            rules.extend(extremal(&space, *rule, e1, &all, false)?);
            rules.extend(placement(&space, *rule, a, &all, above_first, Some(e1))?);
            rules.extend(placement(&space, *rule, a, &survivors, above_second, None)?);
        }
        EventKind::Custom { inequalities } => {
            if inequalities.iter().any(|r| r.len() != space.len()) {
                return Err(Error::InvalidEvent(
                    "custom form has the wrong length".into(),
                ));
            }
            rules.extend(inequalities.iter().cloned());
        }
    }
    let big_n = space.len();
    let mut inequalities: Vec<Vec<Int>> = (0..big_n)
        .map(|i| (0..big_n).map(|j| Int::from((i == j) as i64)).collect())
        .collect();
    inequalities.extend(rules);
    Ok(ConstraintSystem {
        ambient_dim: big_n,
        inequalities,
        equations: Vec::new(),
        grading_form: vec![Int::one(); big_n],
    })
}

fn has_duplicates(v: &[usize]) -> bool {
    v.iter().enumerate().any(|(i, x)| v[..i].contains(x))
}

/// Volume of one event polytope, with its dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventVolume {
    pub volume: Rat,
    pub dim: Option<usize>,
}

/// Computes the volume of the polytope of a constraint system.
///
/// Returns `None` for the dimension of an empty polytope.
pub type VolumeFn<'a> = dyn Fn(&ConstraintSystem) -> Result<EventVolume> + Sync + 'a;

/// Volume backend running the descent on the converted polytope; `seed`
/// drives the randomized saturation of the conversion.
pub fn descent_volume(
    sys: &ConstraintSystem,
    seed: u64,
    options: &DescentOptions,
) -> Result<EventVolume> {
    let p = dual_convert_seeded(&PolytopeInput::H(sys.clone()), seed)?;
    let r = descend_with(&p, options)?;
    Ok(EventVolume {
        volume: r.lattice_volume,
        dim: Some(r.dim),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentVolume {
    pub label: String,
    pub volume: Rat,
    pub multiplicity: Int,
    pub dim: Option<usize>,
    pub inequalities: usize,
    pub equations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityReport {
    pub event: String,
    pub n_candidates: usize,
    pub components: Vec<ComponentVolume>,
    pub symmetry_factor: Int,
    pub probability: Rat,
    /// The same probability along an independent route, where one exists.
    pub cross_check: Option<Rat>,
    /// Row `i`, column `j`: the Condorcet winner is placed `i+1` in round
    /// one and `j+1` in round two.
    pub table: Option<Vec<Vec<Rat>>>,
}

/// Probability queries built from one or more event polytopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    /// Some candidate wins under all four rules.
    AllFourRules,
    /// A Condorcet winner exists.
    CondorcetWinner,
    /// The Condorcet winner is also the plurality winner.
    CondorcetPlurality,
    /// The Condorcet winner wins plurality but not Borda.
    OtherParadox,
    /// One polytope of the other-paradox family.
    OtherParadoxPlace(usize),
    /// Some Condorcet loser wins under `rule`.
    StrongBorda(Rule),
    /// Some Condorcet winner is last under `rule`.
    ReverseStrongBorda(Rule),
    /// Probability that the Condorcet winner wins the elimination procedure.
    EliminationEfficiency(Rule),
    /// The elimination polytope itself.
    Elimination(Rule),
    /// One cell of the round-one / round-two placement table.
    EliminationCell {
        rule: Rule,
        first: usize,
        second: usize,
    },
    /// The full placement table.
    EliminationTable(Rule),
}

fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    (0..k).fold(Int::one(), |acc, i| {
        acc * Int::from(n - i) / Int::from(i + 1)
    })
}

struct Ctx<'a> {
    n: usize,
    winner: usize,
    volume: &'a VolumeFn<'a>,
    components: Vec<ComponentVolume>,
}

impl Ctx<'_> {
    /// Volume of the event relative to the full simplex; lower-dimensional
    /// polytopes count as zero.
    fn vol(&mut self, label: &str, kind: EventKind, multiplicity: Int) -> Result<Rat> {
        let ev = VotingEvent::new(self.n, kind).with_winner(self.winner);
        let sys = build_event(&ev)?;
        let full = sys.ambient_dim - 1;
        let v = match (self.volume)(&sys) {
            Ok(v) => v,
            Err(Error::Empty) => EventVolume {
                volume: Rat::zero(),
                dim: None,
            },
            Err(e) => return Err(e),
        };
        let volume = if v.dim == Some(full) {
            v.volume
        } else {
            Rat::zero()
        };
        self.components.push(ComponentVolume {
            label: label.to_string(),
            volume: volume.clone(),
            multiplicity,
            dim: v.dim,
            inequalities: sys.inequalities.len(),
            equations: sys.equations.len(),
        });
        Ok(volume)
    }
}

/// Orbit representatives of elimination configurations under relabeling
/// of the rivals `[b, c, d]`, with their multiplicities, for `first` and
/// `second` places of A (1-based) among four candidates. `d` is eliminated
/// in every representative.
fn elimination_orbits(
    rivals: [usize; 3],
    first: usize,
    second: usize,
) -> Vec<(Vec<usize>, Vec<usize>, i64)> {
    // the remaining rivals b and c are exchangeable
    let [b, c, _] = rivals;
    let subsets = |k: usize| -> Vec<(Vec<usize>, i64)> {
        match k {
            0 => vec![(vec![], 1)],
            1 => vec![(vec![b], 2)],
            _ => vec![(vec![b, c], 1)],
        }
    };
    let mut out = Vec::new();
    for (s1, m1) in subsets(first - 1) {
        if s1.len() == 1 {
            // B is above A in round one; B and C are no longer exchangeable
            let s2s: Vec<Vec<usize>> = match second - 1 {
                0 => vec![vec![]],
                1 => vec![vec![b], vec![c]],
                _ => vec![vec![b, c]],
            };
            for s2 in s2s {
                out.push((s1.clone(), s2, 3 * m1));
            }
        } else {
            for (s2, m2) in subsets(second - 1) {
                out.push((s1.clone(), s2, 3 * m1 * m2));
            }
        }
    }
    out
}

/// Evaluates a probability query with the given volume backend.
pub fn probability(n: usize, query: &Query, volume: &VolumeFn<'_>) -> Result<ProbabilityReport> {
    probability_for(n, 0, query, volume)
}

/// [`probability`] with `winner` in the role of A.
pub fn probability_for(
    n: usize,
    winner: usize,
    query: &Query,
    volume: &VolumeFn<'_>,
) -> Result<ProbabilityReport> {
    if winner >= n {
        return Err(Error::InvalidEvent("winner is not a candidate".into()));
    }
    let mut ctx = Ctx {
        n,
        winner,
        volume,
        components: Vec::new(),
    };
    let nn = Int::from(n);
    let one = Int::one();
    let mut cross_check = None;
    let mut table = None;
    let (name, factor, probability) = match query {
        Query::AllFourRules => {
            let v = ctx.vol("all four rules", EventKind::AllFourRules, one)?;
            (
                "all-four-rules".to_string(),
                nn.clone(),
                v * Rat::from_integer(nn),
            )
        }
        Query::CondorcetWinner => {
            let v = ctx.vol("A Condorcet winner", EventKind::CondorcetWinner, one)?;
            (
                "condorcet-winner".to_string(),
                nn.clone(),
                v * Rat::from_integer(nn),
            )
        }
        Query::CondorcetPlurality => {
            let v = ctx.vol(
                "A Condorcet and plurality winner",
                EventKind::CondorcetPlurality,
                one,
            )?;
            (
                "condorcet-plurality".to_string(),
                nn.clone(),
                v * Rat::from_integer(nn),
            )
        }
        Query::OtherParadox => {
            let mut sum = Rat::zero();
            let mut q1 = Rat::zero();
            for place in 1..=n {
                let mult = if place == 1 {
                    Int::zero()
                } else {
                    binomial(n - 1, place - 1)
                };
                let v = ctx.vol(
                    &format!("Q{place}"),
                    EventKind::OtherParadox { place },
                    mult.clone(),
                )?;
                if place == 1 {
                    q1 = v;
                } else {
                    sum += v * Rat::from_integer(mult);
                }
            }
            let e = ctx.vol("E", EventKind::CondorcetPlurality, Int::zero())?;
            let nr = Rat::from_integer(nn.clone());
            cross_check = Some((e - q1) * &nr);
            ("other-paradox".to_string(), nn, sum * nr)
        }
        Query::OtherParadoxPlace(place) => {
            let v = ctx.vol(
                &format!("Q{place}"),
                EventKind::OtherParadox { place: *place },
                one,
            )?;
            (format!("other-paradox-q{place}"), Int::one(), v)
        }
        Query::StrongBorda(rule) => {
            let v = ctx.vol("strong Borda", EventKind::StrongBorda { rule: *rule }, one)?;
            (
                format!("strong-borda-{}", rule.short_name()),
                nn.clone(),
                v * Rat::from_integer(nn),
            )
        }
        Query::ReverseStrongBorda(rule) => {
            let v = ctx.vol(
                "reverse strong Borda",
                EventKind::ReverseStrongBorda { rule: *rule },
                one,
            )?;
            (
                format!("reverse-strong-borda-{}", rule.short_name()),
                nn.clone(),
                v * Rat::from_integer(nn),
            )
        }
        Query::Elimination(rule) => {
            let v = ctx.vol("F", EventKind::Elimination { rule: *rule }, one)?;
            (format!("elimination-{}", rule.short_name()), Int::one(), v)
        }
        Query::EliminationEfficiency(rule) => {
            let p = ctx.vol(
                "A Condorcet winner",
                EventKind::CondorcetWinner,
                Int::zero(),
            )?;
            let rev = ctx.vol(
                "B_Rev",
                EventKind::ReverseStrongBorda { rule: *rule },
                Int::one(),
            )?;
            let lost = match n {
                3 => rev,
                4 => {
                    let f = ctx.vol("F", EventKind::Elimination { rule: *rule }, Int::from(3))?;
                    rev + f * Rat::from_integer(Int::from(3))
                }
                _ => {
                    return Err(Error::InvalidEvent(
                        "elimination efficiency needs 3 or 4 candidates".into(),
                    ))
                }
            };
            if p.is_zero() {
                return Err(Error::InvalidEvent("no Condorcet winner region".into()));
            }
            let eff = (&p - lost) / &p;
            (
                format!("elimination-efficiency-{}", rule.short_name()),
                Int::one(),
                eff,
            )
        }
        Query::EliminationCell {
            rule,
            first,
            second,
        } => {
            require_four(n)?;
            if !(1..=3).contains(first) || !(1..=3).contains(second) {
                return Err(Error::InvalidEvent("cell indices must be in 1..=3".into()));
            }
            let p = ctx.vol(
                "A Condorcet winner",
                EventKind::CondorcetWinner,
                Int::zero(),
            )?;
            let sum = elimination_cell(&mut ctx, *rule, *first, *second)?;
            (
                format!(
                    "elimination-cell-{}-{}-{}",
                    rule.short_name(),
                    first,
                    second
                ),
                Int::one(),
                sum / p,
            )
        }
        Query::EliminationTable(rule) => {
            require_four(n)?;
            let p = ctx.vol(
                "A Condorcet winner",
                EventKind::CondorcetWinner,
                Int::zero(),
            )?;
            let rev = ctx.vol(
                "B_Rev",
                EventKind::ReverseStrongBorda { rule: *rule },
                Int::one(),
            )?;
            let mut rows = Vec::new();
            let mut total = &rev / &p;
            for first in 1..=3 {
                let mut row = Vec::new();
                for second in 1..=3 {
                    let c = elimination_cell(&mut ctx, *rule, first, second)? / &p;
                    total += &c;
                    row.push(c);
                }
                rows.push(row);
            }
            table = Some(rows);
            (
                format!("elimination-table-{}", rule.short_name()),
                Int::one(),
                total,
            )
        }
    };
    Ok(ProbabilityReport {
        event: name,
        n_candidates: n,
        components: ctx.components,
        symmetry_factor: factor,
        probability,
        cross_check,
        table,
    })
}

fn require_four(n: usize) -> Result<()> {
    if n != 4 {
        return Err(Error::InvalidEvent(
            "elimination cells are defined for four candidates".into(),
        ));
    }
    Ok(())
}

fn elimination_cell(ctx: &mut Ctx<'_>, rule: Rule, first: usize, second: usize) -> Result<Rat> {
    let rivals: Vec<usize> = (0..ctx.n).filter(|&c| c != ctx.winner).collect();
    let rivals = [rivals[0], rivals[1], rivals[2]];
    let mut sum = Rat::zero();
    for (s1, s2, mult) in elimination_orbits(rivals, first, second) {
        let label = format!(
            "cell({first},{second}) above1={} above2={}",
            s1.iter().map(|&c| candidate_name(c)).collect::<String>(),
            s2.iter().map(|&c| candidate_name(c)).collect::<String>()
        );
        let kind = EventKind::EliminationConfig {
            rule,
            eliminated: rivals[2],
            above_first: s1,
            above_second: s2,
        };
        let v = ctx.vol(&label, kind, Int::from(mult))?;
        sum += v * Rat::from_integer(Int::from(mult));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_lexicographic() {
        let s = PreferenceSpace::new(3);
        assert_eq!(s.len(), 6);
        assert_eq!(s.orders[0], vec![0, 1, 2]);
        assert_eq!(s.orders[5], vec![2, 1, 0]);
        assert_eq!(s.label(1), "ACB");
        assert_eq!(s.index_of(&[1, 0, 2]), Some(2));
    }

    #[test]
    fn plurality_three_candidates() {
        let s = PreferenceSpace::new(3);
        let f = score_form(&s, Rule::Plurality, 0, &[0, 1, 2]).unwrap();
        let ones: Vec<usize> = (0..6).filter(|&i| f[i] == Int::one()).collect();
        assert_eq!(ones, vec![0, 1]);
    }

    #[test]
    fn borda_four_candidates() {
        let s = PreferenceSpace::new(4);
        let f = score_form(&s, Rule::Borda, 0, &[0, 1, 2, 3]).unwrap();
        for v in 0..4 {
            assert_eq!(f.iter().filter(|x| **x == Int::from(v)).count(), 6);
        }
        assert_eq!(
            score_form(&s, Rule::Borda, 0, &[0, 1, 2]),
            Err(Error::BordaRestricted)
        );
    }

    #[test]
    fn restricted_plurality() {
        let s = PreferenceSpace::new(4);
        let f = score_form(&s, Rule::Plurality, 0, &[0, 1, 2]).unwrap();
        assert_eq!(f.iter().filter(|x| x.is_one()).count(), 8);
    }

    #[test]
    fn negative_plurality_counts_last_places() {
        let s = PreferenceSpace::new(3);
        let f = score_form(&s, Rule::NegativePlurality, 0, &[0, 1, 2]).unwrap();
        assert_eq!(f.iter().filter(|x| **x == Int::from(-1)).count(), 2);
        assert_eq!(f.iter().filter(|x| x.is_zero()).count(), 4);
    }

    #[test]
    fn pairwise_is_antisymmetric() {
        let s = PreferenceSpace::new(2);
        assert_eq!(pairwise_form(&s, 0, 1), vec![Int::one(), -Int::one()]);
        let s = PreferenceSpace::new(3);
        let f = pairwise_form(&s, 0, 1);
        assert_eq!(f.iter().filter(|x| x.is_one()).count(), 3);
        assert!(f.iter().sum::<Int>().is_zero());
    }

    #[test]
    fn constraint_counts() {
        let count = |n: usize, kind: EventKind| {
            build_event(&VotingEvent::new(n, kind))
                .unwrap()
                .inequalities
                .len()
        };
        assert_eq!(count(4, EventKind::AllFourRules), 36);
        assert_eq!(count(4, EventKind::OtherParadox { place: 2 }), 33);
        assert_eq!(count(4, EventKind::CondorcetPlurality), 30);
        assert_eq!(
            count(
                4,
                EventKind::Elimination {
                    rule: Rule::Plurality
                }
            ),
            32
        );
        assert_eq!(count(3, EventKind::CondorcetWinner), 8);
        let cell = EventKind::EliminationConfig {
            rule: Rule::Plurality,
            eliminated: 3,
            above_first: vec![1],
            above_second: vec![],
        };
        assert_eq!(count(4, cell), 34);
        let sys = build_event(&VotingEvent::new(4, EventKind::AllFourRules)).unwrap();
        assert!(sys.equations.is_empty());
        assert_eq!(sys.grading_form, vec![Int::one(); 24]);
    }

    #[test]
    fn inconsistent_events_are_rejected() {
        let bad = EventKind::EliminationConfig {
            rule: Rule::Plurality,
            eliminated: 0,
            above_first: vec![],
            above_second: vec![],
        };
        assert!(build_event(&VotingEvent::new(4, bad)).is_err());
        let dup = EventKind::EliminationConfig {
            rule: Rule::Plurality,
            eliminated: 3,
            above_first: vec![1, 1],
            above_second: vec![],
        };
        assert!(build_event(&VotingEvent::new(4, dup)).is_err());
        assert!(build_event(&VotingEvent::new(4, EventKind::OtherParadox { place: 5 })).is_err());
    }

    fn descent(sys: &ConstraintSystem) -> Result<EventVolume> {
        descent_volume(sys, crate::linalg::DEFAULT_SEED, &DescentOptions::default())
    }

    #[test]
    fn three_candidate_condorcet_probabilities() {
        let cw = probability(3, &Query::CondorcetWinner, &descent).unwrap();
        assert_eq!(cw.probability, Rat::new(15.into(), 16.into()));
        let cp = probability(3, &Query::CondorcetPlurality, &descent).unwrap();
        // plurality efficiency 119/135
        assert_eq!(
            cp.probability / cw.probability,
            Rat::new(119.into(), 135.into())
        );
    }

    #[test]
    fn orbit_multiplicities_cover_all_configurations() {
        // 3 choices of the eliminated rival, then subsets of the other two
        let mut total = 0;
        for first in 1..=3 {
            for second in 1..=3 {
                let m: i64 = elimination_orbits([1, 2, 3], first, second)
                    .iter()
                    .map(|o| o.2)
                    .sum();
                let expected = 3 * binomial(2, first - 1) * binomial(2, second - 1);
                assert_eq!(Int::from(m), expected);
                total += m;
            }
        }
        assert_eq!(total, 3 * 4 * 4);
    }
}

//! Set-valued stability of matchings.
//!
//! A box is a product `H = H^1 x ... x H^d` of nonempty strategy subsets,
//! stored as one bitmask per strategic player (so at most 64 strategies
//! each). Weakly-better-reply sets are computed exactly from pure profiles:
//! the excess payoff is multilinear on the box, so its maximum over mixed
//! states sits at a vertex where the focal player plays its worst reply in
//! `H^i`.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::matching::{is_stable, Matching};

pub const MAX_STRATEGIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductSet {
    masks: Vec<u64>,
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |b| mask >> b & 1 == 1)
}

impl ProductSet {
    pub fn new(components: &[Vec<usize>], shape: &[usize]) -> Result<Self> {
        if components.len() != shape.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} components for {} players",
                components.len(),
                shape.len()
            )));
        }
        let mut masks = Vec::with_capacity(shape.len());
        for (i, (c, &n)) in components.iter().zip(shape).enumerate() {
            if n > MAX_STRATEGIES {
                return Err(Error::OutOfRange(format!("player {i} has {n} strategies")));
            }
            if c.is_empty() {
                return Err(Error::InvalidState(format!("component {i} is empty")));
            }
            let mut mask = 0u64;
            for &h in c {
                if h >= n {
                    return Err(Error::OutOfRange(format!("strategy {h} of player {i}")));
                }
                mask |= 1 << h;
            }
            masks.push(mask);
        }
        Ok(ProductSet { masks })
    }

    pub fn full(shape: &[usize]) -> Self {
        ProductSet {
            masks: shape.iter().map(|&n| full_mask(n)).collect(),
        }
    }

    pub(crate) fn from_masks(masks: Vec<u64>) -> Self {
        ProductSet { masks }
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn n_players(&self) -> usize {
        self.masks.len()
    }

    pub fn component(&self, player: usize) -> Vec<usize> {
        bits(self.masks[player]).collect()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        (0..self.masks.len()).map(|i| self.component(i)).collect()
    }

    pub fn contains(&self, player: usize, strategy: usize) -> bool {
        strategy < 64 && self.masks[player] >> strategy & 1 == 1
    }

    pub fn contains_profile(&self, digits: &[usize]) -> bool {
        digits.len() == self.masks.len() && digits.iter().enumerate().all(|(i, &h)| self.contains(i, h))
    }

    pub fn cardinality(&self) -> u128 {
        self.masks.iter().map(|m| m.count_ones() as u128).product()
    }

    pub fn is_subset_of(&self, other: &ProductSet) -> bool {
        self.masks.len() == other.masks.len() && self.masks.iter().zip(&other.masks).all(|(a, b)| a & !b == 0)
    }

    /// Decreasing cardinality, then lexicographic component lists.
    pub fn canonical_cmp(&self, other: &ProductSet) -> Ordering {
        other
            .cardinality()
            .cmp(&self.cardinality())
            .then_with(|| self.components().cmp(&other.components()))
    }

    /// Profile indices in the box, ascending.
    pub fn profiles(&self, game: &Game) -> Vec<usize> {
        let mut out = Vec::new();
        for_each_profile(&self.masks, game.payoffs().strides(), |r, _| out.push(r));
        out
    }

    /// `{W1,W2}x{W6}xS`, writing a full strategy set as `S`.
    pub fn label(&self, game: &Game) -> String {
        self.masks
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                if m == full_mask(game.shape()[i]) {
                    "S".to_string()
                } else {
                    let names: Vec<String> = bits(m).map(|h| game.strategy_label(i, h)).collect();
                    format!("{{{}}}", names.join(","))
                }
            })
            .collect::<Vec<_>>()
            .join("x")
    }

    fn check(&self, game: &Game) -> Result<()> {
        if self.masks.len() != game.n_players() {
            return Err(Error::DimensionMismatch(format!(
                "box over {} players, game has {}",
                self.masks.len(),
                game.n_players()
            )));
        }
        for (i, (&m, &n)) in self.masks.iter().zip(game.shape()).enumerate() {
            if m == 0 || m & !full_mask(n) != 0 {
                return Err(Error::InvalidState(format!("component {i} is empty or out of range")));
            }
        }
        Ok(())
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Visit every profile of the box as `(index, digits)`, row-major.
fn for_each_profile(masks: &[u64], strides: &[usize], mut f: impl FnMut(usize, &[usize])) {
    let lists: Vec<Vec<usize>> = masks.iter().map(|&m| bits(m).collect()).collect();
    if lists.iter().any(Vec::is_empty) {
        return;
    }
    let d = lists.len();
    let mut pos = vec![0usize; d];
    let mut digits: Vec<usize> = lists.iter().map(|l| l[0]).collect();
    loop {
        let r = digits.iter().zip(strides).map(|(h, s)| h * s).sum();
        f(r, &digits);
        let mut k = d;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < lists[k].len() {
                digits[k] = lists[k][pos[k]];
                break;
            }
            pos[k] = 0;
            digits[k] = lists[k][0];
        }
    }
}

fn outcome_id_of(game: &Game, matching: &Matching) -> Result<Option<usize>> {
    matching.check_dims(game.instance())?;
    Ok(game.outcome_index_of(matching))
}

fn membership(game: &Game, id: Option<usize>) -> Vec<bool> {
    (0..game.n_profiles()).map(|r| Some(game.outcome_id(r)) == id).collect()
}

/// Profiles `r` with `Γ(r) = matching`, ascending.
pub fn preimage(game: &Game, matching: &Matching) -> Result<Vec<usize>> {
    let id = outcome_id_of(game, matching)?;
    Ok(match id {
        None => Vec::new(),
        Some(id) => (0..game.n_profiles()).filter(|&r| game.outcome_id(r) == id).collect(),
    })
}

pub fn is_partial_preimage(game: &Game, h: &ProductSet, matching: &Matching) -> Result<bool> {
    h.check(game)?;
    let Some(id) = outcome_id_of(game, matching)? else {
        return Ok(false);
    };
    let mut ok = true;
    for_each_profile(&h.masks, game.payoffs().strides(), |r, _| ok &= game.outcome_id(r) == id);
    Ok(ok)
}

/// Pure certificate for `strategy ∈ α^i(H)`: against the opponents in
/// `profile`, `strategy` earns `payoff >= reference_payoff`, the payoff of
/// `reference = profile[player]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaWitness {
    pub strategy: usize,
    pub reference: usize,
    pub profile: Vec<usize>,
    pub payoff: f64,
    pub reference_payoff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSet {
    pub player: usize,
    pub mask: u64,
    pub witnesses: Vec<AlphaWitness>,
}

impl AlphaSet {
    pub fn members(&self) -> Vec<usize> {
        bits(self.mask).collect()
    }
}

/// Bitmask of α^i(H).
fn alpha_mask(game: &Game, masks: &[u64], player: usize) -> u64 {
    let n = game.shape()[player];
    let stride = game.payoffs().strides()[player];
    let pay = game.payoffs().player(player);
    let mut found = masks[player];
    let all = full_mask(n);
    for_each_profile(masks, game.payoffs().strides(), |r, digits| {
        if found == all {
            return;
        }
        let base = r - digits[player] * stride;
        let reference = pay[r];
        for h in 0..n {
            if found >> h & 1 == 0 && pay[base + h * stride] >= reference {
                found |= 1 << h;
            }
        }
    });
    found
}

fn cuwbr_masks(game: &Game, masks: &[u64]) -> bool {
    (0..masks.len()).all(|i| alpha_mask(game, masks, i) & !masks[i] == 0)
}

/// Exact α^i(H) with one pure certificate per member.
pub fn alpha(game: &Game, h: &ProductSet, player: usize) -> Result<AlphaSet> {
    h.check(game)?;
    if player >= game.n_players() {
        return Err(Error::OutOfRange(format!("strategic player {player}")));
    }
    let n = game.shape()[player];
    let stride = game.payoffs().strides()[player];
    let pay = game.payoffs().player(player);
    let mut witnesses: Vec<Option<AlphaWitness>> = vec![None; n];
    for_each_profile(&h.masks, game.payoffs().strides(), |r, digits| {
        let base = r - digits[player] * stride;
        for (s, slot) in witnesses.iter_mut().enumerate() {
            if slot.is_none() && pay[base + s * stride] >= pay[r] {
                *slot = Some(AlphaWitness {
                    strategy: s,
                    reference: digits[player],
                    profile: digits.to_vec(),
                    payoff: pay[base + s * stride],
                    reference_payoff: pay[r],
                });
            }
        }
    });
    let witnesses: Vec<AlphaWitness> = witnesses.into_iter().flatten().collect();
    let mask = witnesses.iter().fold(0u64, |m, w| m | 1 << w.strategy);
    Ok(AlphaSet { player, mask, witnesses })
}

pub fn is_cuwbr(game: &Game, h: &ProductSet) -> Result<bool> {
    h.check(game)?;
    Ok(cuwbr_masks(game, &h.masks))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchLimits {
    /// Boxes visited before giving up.
    pub box_cap: usize,
    /// Candidate families examined by the quasi-stability search.
    pub family_cap: usize,
    /// Use every box, not only maximal ones, as the quasi-stability universe.
    pub exhaustive: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            box_cap: 10_000_000,
            family_cap: 4096,
            exhaustive: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<W> {
    Holds(W),
    Fails,
    Undecided(String),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Verdict::Undecided(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds(w) => Some(w),
            _ => None,
        }
    }

    pub fn decision(&self) -> Decision {
        match self {
            Verdict::Holds(_) => Decision::Yes,
            Verdict::Fails => Decision::No,
            Verdict::Undecided(_) => Decision::Undecided,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Undecided,
}

struct CapHit;

/// Depth-first enumeration of boxes inside a set of profiles.
///
/// `acc` at level `i` flags which suffixes (strategies of players `i..`)
/// are compatible with every prefix chosen so far.
struct BoxSearch<'a> {
    shape: &'a [usize],
    suffix: Vec<usize>,
    maximal_only: bool,
    cap: usize,
    count: &'a AtomicUsize,
}

impl BoxSearch<'_> {
    fn bump(&self) -> std::result::Result<(), CapHit> {
        if self.count.fetch_add(1, AtomicOrdering::Relaxed) + 1 > self.cap {
            Err(CapHit)
        } else {
            Ok(())
        }
    }

    fn candidates(&self, level: usize, acc: &[bool]) -> Vec<usize> {
        let sub = self.suffix[level + 1];
        (0..self.shape[level])
            .filter(|&h| acc[h * sub..(h + 1) * sub].iter().any(|&b| b))
            .collect()
    }

    /// Nonempty subsets of the level's candidates that leave some suffix,
    /// with the narrowed suffix flags.
    fn choices(&self, level: usize, acc: &[bool]) -> Vec<(u64, Vec<bool>)> {
        let mut out = Vec::new();
        let cands = self.candidates(level, acc);
        self.grow(level, acc, &cands, 0, 0, None, &mut |m, next| {
            out.push((m, next.to_vec()));
            Ok(())
        })
        .ok();
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        &self,
        level: usize,
        acc: &[bool],
        cands: &[usize],
        start: usize,
        mask: u64,
        current: Option<&[bool]>,
        f: &mut dyn FnMut(u64, &[bool]) -> std::result::Result<(), CapHit>,
    ) -> std::result::Result<(), CapHit> {
        let sub = self.suffix[level + 1];
        for k in start..cands.len() {
            let h = cands[k];
            let slice = &acc[h * sub..(h + 1) * sub];
            let next: Vec<bool> = match current {
                None => slice.to_vec(),
                Some(c) => c.iter().zip(slice).map(|(a, b)| *a && *b).collect(),
            };
            if !next.iter().any(|&b| b) {
                continue;
            }
            let m = mask | 1 << h;
            f(m, &next)?;
            self.grow(level, acc, cands, k + 1, m, Some(&next), f)?;
        }
        Ok(())
    }

    fn descend(
        &self,
        level: usize,
        acc: &[bool],
        prefix: &mut Vec<u64>,
        visit: &mut dyn FnMut(&[u64]),
    ) -> std::result::Result<(), CapHit> {
        let d = self.shape.len();
        if level == d - 1 {
            let full = acc.iter().enumerate().filter(|(_, &b)| b).fold(0u64, |m, (h, _)| m | 1 << h);
            if full == 0 {
                return Ok(());
            }
            if self.maximal_only {
                self.bump()?;
                prefix.push(full);
                visit(prefix);
                prefix.pop();
            } else {
                let mut s = full;
                while s != 0 {
                    self.bump()?;
                    prefix.push(s);
                    visit(prefix);
                    prefix.pop();
                    s = (s - 1) & full;
                }
            }
            return Ok(());
        }
        let cands = self.candidates(level, acc);
        self.grow(level, acc, &cands, 0, 0, None, &mut |m, next| {
            prefix.push(m);
            let r = self.descend(level + 1, next, prefix, visit);
            prefix.pop();
            r
        })
    }
}

/// Run `visit` over every box inside `inside` (or only over boxes whose
/// last component cannot grow, when `maximal_only`), in parallel over the
/// first player's subsets, folding per task and merging in task order.
fn search_boxes<T: Send>(
    shape: &[usize],
    inside: &[bool],
    maximal_only: bool,
    cap: usize,
    init: impl Fn() -> T + Sync,
    visit: impl Fn(&mut T, &[u64]) + Sync,
    merge: impl Fn(T, T) -> T + Sync,
) -> std::result::Result<T, CapHit> {
    let d = shape.len();
    let mut suffix = vec![1usize; d + 1];
    for k in (0..d).rev() {
        suffix[k] = suffix[k + 1] * shape[k];
    }
    let count = AtomicUsize::new(0);
    let search = BoxSearch {
        shape,
        suffix,
        maximal_only,
        cap,
        count: &count,
    };
    if d == 1 {
        let mut acc = init();
        search.descend(0, inside, &mut Vec::new(), &mut |b| visit(&mut acc, b))?;
        return Ok(acc);
    }
    let mut firsts = search.choices(0, inside);
    // big first components first, so large boxes turn up early
    firsts.sort_by_key(|(m, _)| std::cmp::Reverse(m.count_ones()));
    let parts: Vec<std::result::Result<T, CapHit>> = firsts
        .par_iter()
        .map(|(m, next)| {
            let mut acc = init();
            let mut prefix = vec![*m];
            search.descend(1, next, &mut prefix, &mut |b| visit(&mut acc, b))?;
            Ok(acc)
        })
        .collect();
    let mut out = init();
    for p in parts {
        out = merge(out, p?);
    }
    Ok(out)
}

fn fits(inside: &[bool], strides: &[usize], masks: &[u64]) -> bool {
    let mut ok = true;
    for_each_profile(masks, strides, |r, _| ok &= inside[r]);
    ok
}

/// No single added strategy keeps the box inside.
fn is_maximal(inside: &[bool], shape: &[usize], strides: &[usize], masks: &[u64]) -> bool {
    let mut probe = masks.to_vec();
    for i in 0..masks.len() {
        for h in 0..shape[i] {
            if masks[i] >> h & 1 == 1 {
                continue;
            }
            probe[i] = 1 << h;
            if fits(inside, strides, &probe) {
                return false;
            }
        }
        probe[i] = masks[i];
    }
    true
}

fn sorted(mut boxes: Vec<ProductSet>) -> Vec<ProductSet> {
    boxes.sort_by(|a, b| a.canonical_cmp(b));
    boxes
}

fn cap_message(cap: usize) -> String {
    format!("more than {cap} boxes")
}

/// Every box inside the preimage, in canonical order.
pub fn all_partial_preimages(game: &Game, matching: &Matching, box_cap: usize) -> Result<Vec<ProductSet>> {
    let id = outcome_id_of(game, matching)?;
    if id.is_none() {
        return Ok(Vec::new());
    }
    let inside = membership(game, id);
    let found = search_boxes(
        game.shape(),
        &inside,
        false,
        box_cap,
        Vec::new,
        |acc: &mut Vec<ProductSet>, m| acc.push(ProductSet::from_masks(m.to_vec())),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
    .map_err(|_| Error::SearchCapExceeded(cap_message(box_cap)))?;
    Ok(sorted(found))
}

/// Boxes inside the preimage that are maximal under inclusion, canonical
/// order.
pub fn maximal_partial_preimages(game: &Game, matching: &Matching) -> Result<Vec<ProductSet>> {
    maximal_capped(game, matching, usize::MAX)
}

fn maximal_capped(game: &Game, matching: &Matching, cap: usize) -> Result<Vec<ProductSet>> {
    let id = outcome_id_of(game, matching)?;
    if id.is_none() {
        return Ok(Vec::new());
    }
    let inside = membership(game, id);
    let shape = game.shape();
    let strides = game.payoffs().strides();
    let found = search_boxes(
        shape,
        &inside,
        true,
        cap,
        Vec::new,
        |acc: &mut Vec<ProductSet>, m| {
            if is_maximal(&inside, shape, strides, m) {
                acc.push(ProductSet::from_masks(m.to_vec()));
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )
    .map_err(|_| Error::SearchCapExceeded(cap_message(cap)))?;
    Ok(sorted(found))
}

/// Search every box inside the preimage for one closed under weakly better
/// replies; the witness is the first such box in canonical order.
pub fn check_asymptotic_stability(
    game: &Game,
    matching: &Matching,
    limits: &SearchLimits,
) -> Result<Verdict<ProductSet>> {
    let id = outcome_id_of(game, matching)?;
    if id.is_none() {
        return Ok(Verdict::Fails);
    }
    let inside = membership(game, id);
    let keep_first = |a: Option<ProductSet>, b: Option<ProductSet>| match (a, b) {
        (Some(a), Some(b)) => Some(if b.canonical_cmp(&a) == Ordering::Less { b } else { a }),
        (a, b) => a.or(b),
    };
    // largest cuwbr cardinality seen by any task; strictly smaller boxes
    // can never be the canonical witness
    let floor = AtomicU64::new(0);
    let best = search_boxes(
        game.shape(),
        &inside,
        false,
        limits.box_cap,
        || None,
        |acc: &mut Option<ProductSet>, m| {
            let card = m.iter().fold(1u64, |a, x| a.saturating_mul(x.count_ones() as u64));
            if card < floor.load(AtomicOrdering::Relaxed) {
                return;
            }
            let candidate = ProductSet::from_masks(m.to_vec());
            if let Some(cur) = acc {
                if candidate.canonical_cmp(cur) != Ordering::Less {
                    return;
                }
            }
            if cuwbr_masks(game, m) {
                floor.fetch_max(card, AtomicOrdering::Relaxed);
                *acc = Some(candidate);
            }
        },
        keep_first,
    );
    Ok(match best {
        Err(_) => Verdict::Undecided(cap_message(limits.box_cap)),
        Ok(Some(w)) => Verdict::Holds(w),
        Ok(None) => Verdict::Fails,
    })
}

/// Largest family of boxes (maximal ones, or all of them when exhaustive)
/// whose weakly-better-reply sets stay inside the family's per-player
/// union. Any qualifying family is contained in it, so the property holds
/// exactly when it is nonempty. The witness lists its maximal members.
pub fn check_quasi_asymptotic_stability(
    game: &Game,
    matching: &Matching,
    limits: &SearchLimits,
) -> Result<Verdict<Vec<ProductSet>>> {
    let universe = if limits.exhaustive {
        all_partial_preimages(game, matching, limits.box_cap)
    } else {
        maximal_capped(game, matching, limits.box_cap)
    };
    let universe = match universe {
        Ok(u) => u,
        Err(Error::SearchCapExceeded(msg)) => return Ok(Verdict::Undecided(msg)),
        Err(e) => return Err(e),
    };
    let d = game.n_players();
    let alphas: Vec<Vec<u64>> = universe
        .par_iter()
        .map(|b| (0..d).map(|i| alpha_mask(game, &b.masks, i)).collect())
        .collect();
    let mut active = vec![true; universe.len()];
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        if rounds > limits.family_cap {
            return Ok(Verdict::Undecided(format!("more than {} families", limits.family_cap)));
        }
        let mut union = vec![0u64; d];
        for (b, _) in universe.iter().zip(&active).filter(|(_, &a)| a) {
            for i in 0..d {
                union[i] |= b.masks[i];
            }
        }
        let mut changed = false;
        for k in 0..universe.len() {
            if active[k] && (0..d).any(|i| alphas[k][i] & !union[i] != 0) {
                active[k] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let family: Vec<&ProductSet> = universe.iter().zip(&active).filter(|(_, &a)| a).map(|(b, _)| b).collect();
    if family.is_empty() {
        return Ok(Verdict::Fails);
    }
    let top: Vec<ProductSet> = family
        .iter()
        .filter(|b| !family.iter().any(|o| o != *b && b.is_subset_of(o)))
        .map(|b| (*b).clone())
        .collect();
    Ok(Verdict::Holds(sorted(top)))
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub strategy: String,
    pub reference: String,
    pub profile: Vec<String>,
    pub payoff: f64,
    pub reference_payoff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaReport {
    pub player: String,
    pub members: Vec<String>,
    /// Members outside the box's own component.
    pub escapes: Vec<String>,
    pub certificates: Vec<CertificateReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxReport {
    pub label: String,
    pub components: Vec<Vec<String>>,
    pub cardinality: u128,
    pub cuwbr: bool,
    pub alpha: Vec<AlphaReport>,
}

impl BoxReport {
    pub fn new(game: &Game, b: &ProductSet) -> Result<Self> {
        let mut alpha_reports = Vec::new();
        let mut cuwbr = true;
        for i in 0..game.n_players() {
            let a = alpha(game, b, i)?;
            let label = |h: usize| game.strategy_label(i, h);
            let escapes: Vec<String> = a.members().into_iter().filter(|&h| !b.contains(i, h)).map(label).collect();
            cuwbr &= escapes.is_empty();
            alpha_reports.push(AlphaReport {
                player: game.player_id(i).to_string(),
                members: a.members().into_iter().map(label).collect(),
                escapes,
                certificates: a
                    .witnesses
                    .iter()
                    .map(|w| CertificateReport {
                        strategy: label(w.strategy),
                        reference: label(w.reference),
                        profile: w.profile.iter().enumerate().map(|(j, &h)| game.strategy_label(j, h)).collect(),
                        payoff: w.payoff,
                        reference_payoff: w.reference_payoff,
                    })
                    .collect(),
            });
        }
        Ok(BoxReport {
            label: b.label(game),
            components: (0..b.n_players())
                .map(|i| b.component(i).into_iter().map(|h| game.strategy_label(i, h)).collect())
                .collect(),
            cardinality: b.cardinality(),
            cuwbr,
            alpha: alpha_reports,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub matching: String,
    pub pairs: String,
    pub preimage_size: usize,
    pub maximal_preimages: Vec<BoxReport>,
    pub asymptotically_stable: Decision,
    pub witness: Option<BoxReport>,
    pub quasi_stable: Decision,
    pub quasi_witness: Option<Vec<BoxReport>>,
    /// Classical stability under the true preferences.
    pub stable: bool,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl StabilityReport {
    pub fn is_undecided(&self) -> bool {
        self.asymptotically_stable == Decision::Undecided || self.quasi_stable == Decision::Undecided
    }
}

pub fn analyze_matching(game: &Game, matching: &Matching, limits: &SearchLimits) -> Result<StabilityReport> {
    let pre = preimage(game, matching)?;
    let mut notes = Vec::new();
    let maximal = match maximal_capped(game, matching, limits.box_cap) {
        Ok(m) => m,
        Err(Error::SearchCapExceeded(msg)) => {
            notes.push(format!("maximal preimages not listed: {msg}"));
            Vec::new()
        }
        Err(e) => return Err(e),
    };
    let asym = check_asymptotic_stability(game, matching, limits)?;
    let quasi = check_quasi_asymptotic_stability(game, matching, limits)?;
    for v in [asym.decision(), quasi.decision()] {
        if v == Decision::Undecided {
            notes.push("search cap reached; result undecided".into());
            break;
        }
    }
    Ok(StabilityReport {
        matching: matching.label(),
        pairs: matching.to_string(),
        preimage_size: pre.len(),
        maximal_preimages: maximal.iter().map(|b| BoxReport::new(game, b)).collect::<Result<_>>()?,
        asymptotically_stable: asym.decision(),
        witness: asym.witness().map(|b| BoxReport::new(game, b)).transpose()?,
        quasi_stable: quasi.decision(),
        quasi_witness: quasi
            .witness()
            .map(|f| f.iter().map(|b| BoxReport::new(game, b)).collect::<Result<Vec<_>>>())
            .transpose()?,
        stable: is_stable(matching, game.instance())?,
        exhaustive: limits.exhaustive,
        notes,
    })
}

/// Outcome matchings reported asymptotically stable but classically
/// unstable. Empty whenever the implication holds.
pub fn asymptotic_stability_violations(game: &Game, limits: &SearchLimits) -> Result<Vec<Matching>> {
    let mut bad = Vec::new();
    for m in game.outcomes() {
        if check_asymptotic_stability(game, m, limits)?.holds() && !is_stable(m, game.instance())? {
            bad.push(m.clone());
        }
    }
    Ok(bad)
}

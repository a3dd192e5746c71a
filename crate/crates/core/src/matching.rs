//! Marriage-problem instances, matchings, deferred acceptance and the
//! classical stability predicates.
//!
//! Players are addressed by side and zero-based index. Preferences are full
//! strict rankings of the opposite side (everybody is acceptable), so a
//! player always prefers any partner to staying single.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Men,
    Women,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Men => Side::Women,
            Side::Women => Side::Men,
        }
    }

    /// Lower-case player prefix (`m`, `w`).
    pub fn player_prefix(self) -> char {
        match self {
            Side::Men => 'm',
            Side::Women => 'w',
        }
    }

    /// Upper-case prefix used for labels of preferences held by this side.
    pub fn label_prefix(self) -> char {
        match self {
            Side::Men => 'M',
            Side::Women => 'W',
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Men => f.write_str("men"),
            Side::Women => f.write_str("women"),
        }
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "men" | "m" | "M" => Ok(Side::Men),
            "women" | "w" | "W" => Ok(Side::Women),
            _ => Err(Error::InvalidPreference(format!("unknown side `{s}`"))),
        }
    }
}

/// A player of the marriage problem, e.g. `w2` is `(Women, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerId {
    pub side: Side,
    pub index: usize,
}

impl PlayerId {
    pub fn man(index: usize) -> Self {
        PlayerId { side: Side::Men, index }
    }

    pub fn woman(index: usize) -> Self {
        PlayerId {
            side: Side::Women,
            index,
        }
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side.player_prefix(), self.index + 1)
    }
}

impl FromStr for PlayerId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPreference(format!("bad player id `{s}`"));
        let mut chars = s.chars();
        let side = match chars.next() {
            Some('m') | Some('M') => Side::Men,
            Some('w') | Some('W') => Side::Women,
            _ => return Err(bad()),
        };
        let number: usize = chars.as_str().parse().map_err(|_| bad())?;
        if number == 0 {
            return Err(bad());
        }
        Ok(PlayerId {
            side,
            index: number - 1,
        })
    }
}

/// A strict ranking over the opposite side, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Preference {
    ranking: Vec<usize>,
    rank: Vec<usize>,
}

impl Preference {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let n = ranking.len();
        if n == 0 {
            return Err(Error::InvalidPreference("empty ranking".into()));
        }
        let mut rank = vec![usize::MAX; n];
        for (pos, &j) in ranking.iter().enumerate() {
            if j >= n || rank[j] != usize::MAX {
                return Err(Error::InvalidPreference(format!(
                    "{ranking:?} is not a permutation of 0..{n}"
                )));
            }
            rank[j] = pos;
        }
        Ok(Preference { ranking, rank })
    }

    /// All `n!` rankings in lexicographic order. For `n = 3` this is the
    /// M1..M6 / W1..W6 labelling order.
    pub fn all(n: usize) -> Vec<Preference> {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        if n == 0 {
            return out;
        }
        loop {
            out.push(Preference::new(perm.clone()).expect("permutation"));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out
    }

    /// Preference with lexicographic rank `index` among the `n!` rankings.
    pub fn from_lex_index(n: usize, mut index: usize) -> Result<Self> {
        let total = factorial(n);
        if n == 0 || index >= total {
            return Err(Error::InvalidPreference(format!(
                "lexicographic index {index} out of range for n = {n}"
            )));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let mut ranking = Vec::with_capacity(n);
        for k in (0..n).rev() {
            let f = factorial(k);
            ranking.push(pool.remove(index / f));
            index %= f;
        }
        Preference::new(ranking)
    }

    /// Parse a Table-style label such as `W5` for a ranking of `n` players.
    pub fn from_label(label: &str, holder: Side, n: usize) -> Result<Self> {
        let bad = || Error::InvalidPreference(format!("bad preference label `{label}`"));
        let mut chars = label.chars();
        if chars.next() != Some(holder.label_prefix()) {
            return Err(bad());
        }
        let k: usize = chars.as_str().parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Preference::from_lex_index(n, k - 1)
    }

    pub fn lex_index(&self) -> usize {
        lex_rank(&self.ranking)
    }

    pub fn label(&self, holder: Side) -> String {
        format!("{}{}", holder.label_prefix(), self.lex_index() + 1)
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    /// Zero-based position of `j` in the ranking.
    pub fn rank_of(&self, j: usize) -> usize {
        self.rank[j]
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }

    /// Whether `candidate` beats the current assignment (`None` = single).
    fn prefers_to_assignment(&self, candidate: usize, current: Option<usize>) -> bool {
        match current {
            None => true,
            Some(c) => self.prefers(candidate, c),
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn lex_rank(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        rank += smaller * factorial(n - 1 - i);
    }
    rank
}

/// True preferences of every man and woman.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceProfile {
    men: Vec<Preference>,
    women: Vec<Preference>,
}

impl PreferenceProfile {
    pub fn new(men: Vec<Preference>, women: Vec<Preference>) -> Result<Self> {
        if men.is_empty() || women.is_empty() {
            return Err(Error::DimensionMismatch("both sides must be nonempty".into()));
        }
        if let Some(p) = men.iter().find(|p| p.len() != women.len()) {
            return Err(Error::DimensionMismatch(format!(
                "man ranking of length {} but there are {} women",
                p.len(),
                women.len()
            )));
        }
        if let Some(p) = women.iter().find(|p| p.len() != men.len()) {
            return Err(Error::DimensionMismatch(format!(
                "woman ranking of length {} but there are {} men",
                p.len(),
                men.len()
            )));
        }
        Ok(PreferenceProfile { men, women })
    }

    /// Build from Table-style labels, men first, e.g.
    /// `["M3","M1","M1","W2","W5","W1"]` for a 3x3 market.
    pub fn from_labels(labels: &[&str], n_men: usize, n_women: usize) -> Result<Self> {
        if labels.len() != n_men + n_women {
            return Err(Error::DimensionMismatch(format!(
                "expected {} labels, got {}",
                n_men + n_women,
                labels.len()
            )));
        }
        let men = labels[..n_men]
            .iter()
            .map(|l| Preference::from_label(l, Side::Men, n_women))
            .collect::<Result<Vec<_>>>()?;
        let women = labels[n_men..]
            .iter()
            .map(|l| Preference::from_label(l, Side::Women, n_men))
            .collect::<Result<Vec<_>>>()?;
        PreferenceProfile::new(men, women)
    }

    pub fn n_men(&self) -> usize {
        self.men.len()
    }

    pub fn n_women(&self) -> usize {
        self.women.len()
    }

    pub fn side_size(&self, side: Side) -> usize {
        match side {
            Side::Men => self.men.len(),
            Side::Women => self.women.len(),
        }
    }

    pub fn prefs(&self, side: Side) -> &[Preference] {
        match side {
            Side::Men => &self.men,
            Side::Women => &self.women,
        }
    }

    pub fn men(&self) -> &[Preference] {
        &self.men
    }

    pub fn women(&self) -> &[Preference] {
        &self.women
    }

    pub fn pref(&self, player: PlayerId) -> &Preference {
        &self.prefs(player.side)[player.index]
    }

    pub fn contains(&self, player: PlayerId) -> bool {
        player.index < self.side_size(player.side)
    }

    /// Replace one player's list, keeping everybody else's.
    pub fn set_pref(&mut self, player: PlayerId, pref: Preference) -> Result<()> {
        if !self.contains(player) {
            return Err(Error::OutOfRange(format!("no player {player}")));
        }
        if pref.len() != self.side_size(player.side.other()) {
            return Err(Error::DimensionMismatch(format!(
                "ranking for {player} has length {}",
                pref.len()
            )));
        }
        match player.side {
            Side::Men => self.men[player.index] = pref,
            Side::Women => self.women[player.index] = pref,
        }
        Ok(())
    }

    /// Label tuple such as `M1,M1,M2,W1,W2,W1`.
    pub fn label(&self) -> String {
        self.men
            .iter()
            .map(|p| p.label(Side::Men))
            .chain(self.women.iter().map(|p| p.label(Side::Women)))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// One-to-one matching; `None` means the player is matched to themself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    man_partner: Vec<Option<usize>>,
    woman_partner: Vec<Option<usize>>,
}

impl Matching {
    pub fn from_man_partner(man_partner: Vec<Option<usize>>, n_women: usize) -> Result<Self> {
        let mut woman_partner = vec![None; n_women];
        for (m, partner) in man_partner.iter().enumerate() {
            if let Some(w) = *partner {
                if w >= n_women {
                    return Err(Error::InvalidMatching(format!("woman index {w} out of range")));
                }
                if woman_partner[w].is_some() {
                    return Err(Error::InvalidMatching(format!("w{} matched twice", w + 1)));
                }
                woman_partner[w] = Some(m);
            }
        }
        Ok(Matching {
            man_partner,
            woman_partner,
        })
    }

    /// Pairs are `(man, woman)`; everybody else is single.
    pub fn from_pairs(n_men: usize, n_women: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut man_partner = vec![None; n_men];
        for &(m, w) in pairs {
            if m >= n_men {
                return Err(Error::InvalidMatching(format!("man index {m} out of range")));
            }
            if man_partner[m].is_some() {
                return Err(Error::InvalidMatching(format!("m{} matched twice", m + 1)));
            }
            man_partner[m] = Some(w);
        }
        Matching::from_man_partner(man_partner, n_women)
    }

    /// Parse either a `muK` label (perfect matchings of a balanced market,
    /// lexicographic order) or the pair notation produced by `Display`.
    pub fn from_label(label: &str, n_men: usize, n_women: usize) -> Result<Self> {
        let bad = || Error::InvalidMatching(format!("bad matching label `{label}`"));
        if let Some(k) = label.strip_prefix("mu") {
            if n_men != n_women {
                return Err(bad());
            }
            let k: usize = k.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            let perm = Preference::from_lex_index(n_men, k - 1).map_err(|_| bad())?;
            return Matching::from_man_partner(
                perm.ranking().iter().map(|&w| Some(w)).collect(),
                n_women,
            );
        }
        let inner = label
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(bad)?;
        let mut pairs = Vec::new();
        for chunk in inner.split(')').map(str::trim).filter(|c| !c.is_empty()) {
            let chunk = chunk.trim_start_matches(',').trim().strip_prefix('(').ok_or_else(bad)?;
            let (a, b) = chunk.split_once(',').ok_or_else(bad)?;
            let man: PlayerId = a.trim().parse().map_err(|_| bad())?;
            let woman: PlayerId = b.trim().parse().map_err(|_| bad())?;
            if man.side != Side::Men || woman.side != Side::Women {
                return Err(bad());
            }
            pairs.push((man.index, woman.index));
        }
        Matching::from_pairs(n_men, n_women, &pairs)
    }

    pub fn n_men(&self) -> usize {
        self.man_partner.len()
    }

    pub fn n_women(&self) -> usize {
        self.woman_partner.len()
    }

    pub fn man_partner(&self) -> &[Option<usize>] {
        &self.man_partner
    }

    pub fn woman_partner(&self) -> &[Option<usize>] {
        &self.woman_partner
    }

    pub fn partner_index(&self, player: PlayerId) -> Option<usize> {
        match player.side {
            Side::Men => self.man_partner[player.index],
            Side::Women => self.woman_partner[player.index],
        }
    }

    pub fn partner(&self, player: PlayerId) -> Option<PlayerId> {
        self.partner_index(player).map(|index| PlayerId {
            side: player.side.other(),
            index,
        })
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.man_partner
            .iter()
            .enumerate()
            .filter_map(|(m, w)| w.map(|w| (m, w)))
            .collect()
    }

    pub fn is_perfect(&self) -> bool {
        self.man_partner.iter().all(Option::is_some) && self.woman_partner.iter().all(Option::is_some)
    }

    /// `mu1`, `mu2`, ... for perfect matchings of balanced markets, pair
    /// notation otherwise.
    pub fn label(&self) -> String {
        if self.n_men() == self.n_women() && self.is_perfect() {
            let perm: Vec<usize> = self.man_partner.iter().map(|w| w.unwrap()).collect();
            format!("mu{}", lex_rank(&perm) + 1)
        } else {
            self.to_string()
        }
    }

    pub(crate) fn check_dims(&self, profile: &PreferenceProfile) -> Result<()> {
        if self.n_men() != profile.n_men() || self.n_women() != profile.n_women() {
            return Err(Error::DimensionMismatch(format!(
                "matching is {}x{} but instance is {}x{}",
                self.n_men(),
                self.n_women(),
                profile.n_men(),
                profile.n_women()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(m, w)| format!("(m{},w{})", m + 1, w + 1))
            .collect();
        write!(f, "[{}]", pairs.join(","))
    }
}

fn run_deferred_acceptance(
    proposers: &[Preference],
    receivers: &[Preference],
    mut next_free: impl FnMut(&mut VecDeque<usize>) -> Option<usize>,
) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let mut next_choice = vec![0usize; proposers.len()];
    let mut held: Vec<Option<usize>> = vec![None; receivers.len()];
    let mut free: VecDeque<usize> = (0..proposers.len()).collect();
    while let Some(p) = next_free(&mut free) {
        let list = proposers[p].ranking();
        if next_choice[p] >= list.len() {
            // exhausted list: stays single
            continue;
        }
        let r = list[next_choice[p]];
        next_choice[p] += 1;
        match held[r] {
            None => held[r] = Some(p),
            Some(q) if receivers[r].prefers(p, q) => {
                held[r] = Some(p);
                free.push_back(q);
            }
            Some(_) => free.push_back(p),
        }
    }
    let mut proposer_partner = vec![None; proposers.len()];
    for (r, p) in held.iter().enumerate() {
        if let Some(p) = *p {
            proposer_partner[p] = Some(r);
        }
    }
    (proposer_partner, held)
}

fn da_with_order(
    profile: &PreferenceProfile,
    proposing: Side,
    next_free: impl FnMut(&mut VecDeque<usize>) -> Option<usize>,
) -> Matching {
    match proposing {
        Side::Men => {
            let (man_partner, woman_partner) =
                run_deferred_acceptance(profile.men(), profile.women(), next_free);
            Matching {
                man_partner,
                woman_partner,
            }
        }
        Side::Women => {
            let (woman_partner, man_partner) =
                run_deferred_acceptance(profile.women(), profile.men(), next_free);
            Matching {
                man_partner,
                woman_partner,
            }
        }
    }
}

/// Gale-Shapley deferred acceptance; returns the proposing side's optimal
/// stable matching. Free proposers are served in index order.
pub fn deferred_acceptance(profile: &PreferenceProfile, proposing: Side) -> Matching {
    da_with_order(profile, proposing, |free| free.pop_front())
}

/// Same algorithm, serving the most recently freed proposer first.
#[doc(hidden)]
pub fn deferred_acceptance_lifo(profile: &PreferenceProfile, proposing: Side) -> Matching {
    da_with_order(profile, proposing, |free| free.pop_back())
}

/// Pairs `(m, w)` that both prefer each other to their assignment.
pub fn blocking_pairs(matching: &Matching, profile: &PreferenceProfile) -> Result<Vec<(usize, usize)>> {
    matching.check_dims(profile)?;
    let mut out = Vec::new();
    for m in 0..profile.n_men() {
        for w in 0..profile.n_women() {
            if matching.man_partner[m] == Some(w) {
                continue;
            }
            let man_wants = profile.men()[m].prefers_to_assignment(w, matching.man_partner[m]);
            let woman_wants = profile.women()[w].prefers_to_assignment(m, matching.woman_partner[w]);
            if man_wants && woman_wants {
                out.push((m, w));
            }
        }
    }
    Ok(out)
}

/// With full rankings every partner is acceptable, so this only checks
/// dimensions and returns true.
pub fn is_individually_rational(matching: &Matching, profile: &PreferenceProfile) -> Result<bool> {
    matching.check_dims(profile)?;
    Ok(true)
}

pub fn is_stable(matching: &Matching, profile: &PreferenceProfile) -> Result<bool> {
    Ok(is_individually_rational(matching, profile)? && blocking_pairs(matching, profile)?.is_empty())
}

/// Every matching of an `n_men x n_women` market, singles included. Each man
/// in turn takes a free woman (ascending) or stays single (last).
pub fn enumerate_matchings(n_men: usize, n_women: usize) -> Vec<Matching> {
    fn rec(
        m: usize,
        n_women: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<Option<usize>>,
        out: &mut Vec<Matching>,
    ) {
        if m == current.len() {
            out.push(Matching::from_man_partner(current.clone(), n_women).expect("valid by construction"));
            return;
        }
        for w in 0..n_women {
            if !used[w] {
                used[w] = true;
                current[m] = Some(w);
                rec(m + 1, n_women, used, current, out);
                used[w] = false;
            }
        }
        current[m] = None;
        rec(m + 1, n_women, used, current, out);
    }
    let mut out = Vec::new();
    rec(0, n_women, &mut vec![false; n_women], &mut vec![None; n_men], &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct StableSet {
    pub stable: Vec<Matching>,
    pub men_optimal: Matching,
    pub women_optimal: Matching,
}

pub fn stable_set(profile: &PreferenceProfile) -> StableSet {
    let stable = enumerate_matchings(profile.n_men(), profile.n_women())
        .into_iter()
        .filter(|m| is_stable(m, profile).expect("dimensions agree"))
        .collect();
    StableSet {
        stable,
        men_optimal: deferred_acceptance(profile, Side::Men),
        women_optimal: deferred_acceptance(profile, Side::Women),
    }
}

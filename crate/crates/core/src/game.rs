//! The preference revelation game induced by deferred acceptance.
//!
//! Pure profiles are indexed in mixed radix, row-major over the strategic
//! players in `StrategicSet` order: the first player is the most significant
//! digit and the last one varies fastest. Each strategic player's strategy
//! space is every full ranking of the opposite side, in lexicographic order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{deferred_acceptance, Matching, PlayerId, Preference, PreferenceProfile, Side};

/// Cardinal utility by partner rank: `values[k]` is the payoff of being
/// matched with one's `(k+1)`-th choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityFunction {
    values: Vec<f64>,
    single_value: f64,
}

impl UtilityFunction {
    pub fn new(values: Vec<f64>, single_value: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidUtility("no values".into()));
        }
        if values.iter().chain(std::iter::once(&single_value)).any(|v| !v.is_finite()) {
            return Err(Error::InvalidUtility("values must be finite".into()));
        }
        if values.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidUtility(format!("{values:?} is not strictly decreasing")));
        }
        if single_value >= *values.last().unwrap() {
            return Err(Error::InvalidUtility(format!(
                "single value {single_value} must be below the last-ranked payoff"
            )));
        }
        Ok(UtilityFunction { values, single_value })
    }

    /// Values with the default single payoff of 0.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 0.0)
    }

    /// `(25, 10, 1)`, used for the simulations.
    pub fn conv() -> Self {
        Self::from_values(vec![25.0, 10.0, 1.0]).unwrap()
    }

    /// `(15, 10, 5)`.
    pub fn lin() -> Self {
        Self::from_values(vec![15.0, 10.0, 5.0]).unwrap()
    }

    /// `(5 sqrt 3, 5 sqrt 2, 5)`.
    pub fn conc() -> Self {
        Self::from_values(vec![5.0 * 3f64.sqrt(), 5.0 * 2f64.sqrt(), 5.0]).unwrap()
    }

    /// `(25, 5, 1)`, the values the printed payoff tables were computed with.
    pub fn table() -> Self {
        Self::from_values(vec![25.0, 5.0, 1.0]).unwrap()
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "u_conv" => Some(Self::conv()),
            "u_lin" => Some(Self::lin()),
            "u_conc" => Some(Self::conc()),
            "u_table" => Some(Self::table()),
            _ => None,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn single_value(&self) -> f64 {
        self.single_value
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Payoff for a zero-based partner rank, `None` when single.
    pub fn payoff(&self, rank: Option<usize>) -> f64 {
        rank.map_or(self.single_value, |r| self.values[r])
    }
}

/// The players who choose reports; everybody else reports truthfully.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicSet {
    players: Vec<PlayerId>,
    truthful_rest: bool,
}

impl StrategicSet {
    pub fn new(players: Vec<PlayerId>) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::DimensionMismatch("strategic set is empty".into()));
        }
        for (i, p) in players.iter().enumerate() {
            if players[..i].contains(p) {
                return Err(Error::DimensionMismatch(format!("{p} listed twice")));
            }
        }
        Ok(StrategicSet {
            players,
            truthful_rest: true,
        })
    }

    /// Every player of one side, by index.
    pub fn side(side: Side, size: usize) -> Result<Self> {
        Self::new((0..size).map(|index| PlayerId { side, index }).collect())
    }

    /// Men then women.
    pub fn everyone(n_men: usize, n_women: usize) -> Result<Self> {
        Self::new(
            (0..n_men)
                .map(PlayerId::man)
                .chain((0..n_women).map(PlayerId::woman))
                .collect(),
        )
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn len(&self) -> usize {
        self.players.len()
    }

    pub fn is_empty(&self) -> bool {
        self.players.is_empty()
    }

    pub fn truthful_rest(&self) -> bool {
        self.truthful_rest
    }

    pub fn position(&self, player: PlayerId) -> Option<usize> {
        self.players.iter().position(|&p| p == player)
    }
}

/// All `n!` strict rankings of `n` players in canonical order.
pub fn enumerate_preferences(n_opposite: usize) -> Result<Vec<Preference>> {
    if n_opposite == 0 {
        return Err(Error::InvalidPreference("no players to rank".into()));
    }
    Ok(Preference::all(n_opposite))
}

/// Payoffs stored player-major: `data[player * n_profiles + profile]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTensor {
    shape: Vec<usize>,
    strides: Vec<usize>,
    n_profiles: usize,
    data: Vec<f64>,
}

impl PayoffTensor {
    fn new(shape: Vec<usize>) -> Self {
        let strides = strides_for(&shape);
        let n_profiles = shape.iter().product();
        let data = vec![0.0; n_profiles * shape.len()];
        PayoffTensor {
            shape,
            strides,
            n_profiles,
            data,
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn n_players(&self) -> usize {
        self.shape.len()
    }

    pub fn n_profiles(&self) -> usize {
        self.n_profiles
    }

    pub fn get(&self, player: usize, profile: usize) -> f64 {
        self.data[player * self.n_profiles + profile]
    }

    /// One player's payoffs over all pure profiles.
    pub fn player(&self, player: usize) -> &[f64] {
        &self.data[player * self.n_profiles..(player + 1) * self.n_profiles]
    }

    pub fn profile_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.shape.len() {
            return Err(Error::OutOfRange(format!(
                "profile has {} entries, game has {} players",
                digits.len(),
                self.shape.len()
            )));
        }
        let mut index = 0;
        for (k, (&d, &n)) in digits.iter().zip(&self.shape).enumerate() {
            if d >= n {
                return Err(Error::OutOfRange(format!("strategy {d} of player {k} (has {n})")));
            }
            index += d * self.strides[k];
        }
        Ok(index)
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.shape.len()];
        for k in 0..self.shape.len() {
            out[k] = index / self.strides[k];
            index %= self.strides[k];
        }
        out
    }
}

pub(crate) fn strides_for(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

#[derive(Debug, Clone)]
pub struct Game {
    instance: PreferenceProfile,
    strategic: StrategicSet,
    utility: UtilityFunction,
    proposing: Side,
    spaces: Vec<Vec<Preference>>,
    outcomes: Vec<Matching>,
    outcome_of: Vec<u32>,
    payoffs: PayoffTensor,
}

/// Build the game: run deferred acceptance on every pure report profile and
/// score each strategic player's partner under their TRUE ranking.
pub fn build_game(
    profile: &PreferenceProfile,
    strategic: &StrategicSet,
    utility: &UtilityFunction,
    proposing: Side,
) -> Result<Game> {
    for p in strategic.players() {
        if !profile.contains(*p) {
            return Err(Error::DimensionMismatch(format!("{p} is not in the instance")));
        }
        let opposite = profile.side_size(p.side.other());
        if utility.len() != opposite {
            return Err(Error::DimensionMismatch(format!(
                "utility has {} values but {p} ranks {opposite} players",
                utility.len()
            )));
        }
    }
    let spaces: Vec<Vec<Preference>> = strategic
        .players()
        .iter()
        .map(|p| Preference::all(profile.side_size(p.side.other())))
        .collect();
    let shape: Vec<usize> = spaces.iter().map(Vec::len).collect();
    let mut payoffs = PayoffTensor::new(shape);
    let n_profiles = payoffs.n_profiles;

    let mut outcome_ids: Vec<Matching> = Vec::new();
    let mut raw_outcome = Vec::with_capacity(n_profiles);
    let mut reports = profile.clone();
    let mut digits = vec![0usize; strategic.len()];
    for r in 0..n_profiles {
        for (k, p) in strategic.players().iter().enumerate() {
            reports.set_pref(*p, spaces[k][digits[k]].clone())?;
        }
        let matching = deferred_acceptance(&reports, proposing);
        for (k, p) in strategic.players().iter().enumerate() {
            let rank = matching.partner_index(*p).map(|j| profile.pref(*p).rank_of(j));
            payoffs.data[k * n_profiles + r] = utility.payoff(rank);
        }
        let id = match outcome_ids.iter().position(|m| *m == matching) {
            Some(id) => id,
            None => {
                outcome_ids.push(matching);
                outcome_ids.len() - 1
            }
        };
        raw_outcome.push(id);
        increment(&mut digits, &payoffs.shape);
    }

    // canonical outcome order
    let mut order: Vec<usize> = (0..outcome_ids.len()).collect();
    order.sort_by(|&a, &b| outcome_ids[a].cmp(&outcome_ids[b]));
    let mut remap = vec![0u32; order.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new as u32;
    }
    let outcomes = order.iter().map(|&old| outcome_ids[old].clone()).collect();
    let outcome_of = raw_outcome.into_iter().map(|id| remap[id]).collect();

    Ok(Game {
        instance: profile.clone(),
        strategic: strategic.clone(),
        utility: utility.clone(),
        proposing,
        spaces,
        outcomes,
        outcome_of,
        payoffs,
    })
}

/// Advance mixed-radix digits, last digit fastest.
pub(crate) fn increment(digits: &mut [usize], shape: &[usize]) {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < shape[k] {
            return;
        }
        digits[k] = 0;
    }
}

impl Game {
    pub fn instance(&self) -> &PreferenceProfile {
        &self.instance
    }

    pub fn strategic(&self) -> &StrategicSet {
        &self.strategic
    }

    pub fn utility(&self) -> &UtilityFunction {
        &self.utility
    }

    pub fn proposing(&self) -> Side {
        self.proposing
    }

    pub fn n_players(&self) -> usize {
        self.spaces.len()
    }

    pub fn shape(&self) -> &[usize] {
        self.payoffs.shape()
    }

    pub fn n_profiles(&self) -> usize {
        self.payoffs.n_profiles()
    }

    pub fn space(&self, player: usize) -> &[Preference] {
        &self.spaces[player]
    }

    pub fn payoffs(&self) -> &PayoffTensor {
        &self.payoffs
    }

    /// Distinct matchings produced by the mechanism, in canonical order.
    pub fn outcomes(&self) -> &[Matching] {
        &self.outcomes
    }

    pub fn outcome_id(&self, profile: usize) -> usize {
        self.outcome_of[profile] as usize
    }

    pub fn outcome(&self, profile: usize) -> &Matching {
        &self.outcomes[self.outcome_of[profile] as usize]
    }

    pub fn outcome_index_of(&self, matching: &Matching) -> Option<usize> {
        self.outcomes.binary_search(matching).ok()
    }

    pub fn profile_index(&self, digits: &[usize]) -> Result<usize> {
        self.payoffs.profile_index(digits)
    }

    pub fn digits(&self, profile: usize) -> Vec<usize> {
        self.payoffs.digits(profile)
    }

    pub fn payoff_of_profile(&self, player: usize, report: &[usize]) -> Result<f64> {
        if player >= self.n_players() {
            return Err(Error::OutOfRange(format!("strategic player {player}")));
        }
        let r = self.profile_index(report)?;
        Ok(self.payoffs.get(player, r))
    }

    pub fn player_id(&self, player: usize) -> PlayerId {
        self.strategic.players()[player]
    }

    pub fn strategy_label(&self, player: usize, strategy: usize) -> String {
        self.spaces[player][strategy].label(self.player_id(player).side)
    }

    pub fn profile_labels(&self, profile: usize) -> Vec<String> {
        self.digits(profile)
            .iter()
            .enumerate()
            .map(|(k, &s)| self.strategy_label(k, s))
            .collect()
    }

    /// Strategy index of `label` for a strategic player.
    pub fn strategy_by_label(&self, player: usize, label: &str) -> Result<usize> {
        let side = self.player_id(player).side;
        let n = self.spaces[player][0].len();
        let pref = Preference::from_label(label, side, n)?;
        Ok(pref.lex_index())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> PreferenceProfile {
        PreferenceProfile::from_labels(&["M1", "M1", "M2", "W1", "W2", "W1"], 3, 3).unwrap()
    }

    fn p2() -> PreferenceProfile {
        PreferenceProfile::from_labels(&["M3", "M1", "M1", "W2", "W5", "W1"], 3, 3).unwrap()
    }

    fn women_game(p: &PreferenceProfile, u: UtilityFunction) -> Game {
        build_game(p, &StrategicSet::side(Side::Women, 3).unwrap(), &u, Side::Men).unwrap()
    }

    fn payoff_triple(g: &Game, labels: [&str; 3]) -> Vec<f64> {
        let digits: Vec<usize> = labels
            .iter()
            .enumerate()
            .map(|(k, l)| g.strategy_by_label(k, l).unwrap())
            .collect();
        (0..3).map(|i| g.payoff_of_profile(i, &digits).unwrap()).collect()
    }

    #[test]
    fn enumerate_preferences_sizes() {
        assert_eq!(enumerate_preferences(1).unwrap().len(), 1);
        assert_eq!(enumerate_preferences(3).unwrap().len(), 6);
        assert_eq!(enumerate_preferences(4).unwrap().len(), 24);
        assert!(enumerate_preferences(0).is_err());
    }

    #[test]
    fn utility_validation() {
        assert!(UtilityFunction::from_values(vec![1.0, 2.0]).is_err());
        assert!(UtilityFunction::from_values(vec![2.0, 2.0]).is_err());
        assert!(UtilityFunction::new(vec![3.0, 2.0], 2.0).is_err());
        assert!(UtilityFunction::from_values(vec![f64::NAN]).is_err());
        assert_eq!(UtilityFunction::preset("u_conv").unwrap().values(), &[25.0, 10.0, 1.0]);
        assert!(UtilityFunction::preset("nope").is_none());
    }

    #[test]
    fn payoff_examples() {
        let g2 = women_game(&p2(), UtilityFunction::table());
        assert_eq!(payoff_triple(&g2, ["W1", "W4", "W1"]), vec![25.0, 1.0, 1.0]);
        assert_eq!(payoff_triple(&g2, ["W2", "W6", "W1"]), vec![25.0, 25.0, 5.0]);
        assert_eq!(payoff_triple(&g2, ["W5", "W1", "W1"])[2], 5.0);
        let g1 = women_game(&p1(), UtilityFunction::table());
        assert_eq!(payoff_triple(&g1, ["W5", "W3", "W1"]), vec![1.0, 1.0, 25.0]);
        assert_eq!(payoff_triple(&g1, ["W1", "W1", "W1"])[0], 25.0);
    }

    #[test]
    fn rejects_mismatched_utility() {
        let u = UtilityFunction::from_values(vec![2.0, 1.0]).unwrap();
        let s = StrategicSet::side(Side::Women, 3).unwrap();
        assert!(build_game(&p1(), &s, &u, Side::Men).is_err());
        let outside = StrategicSet::new(vec![PlayerId::woman(5)]).unwrap();
        assert!(build_game(&p1(), &outside, &UtilityFunction::conv(), Side::Men).is_err());
        assert!(StrategicSet::new(vec![]).is_err());
        assert!(StrategicSet::new(vec![PlayerId::man(0), PlayerId::man(0)]).is_err());
    }

    #[test]
    fn out_of_range_lookup() {
        let g = women_game(&p1(), UtilityFunction::conv());
        assert!(g.payoff_of_profile(3, &[0, 0, 0]).is_err());
        assert!(g.payoff_of_profile(0, &[6, 0, 0]).is_err());
        assert!(g.payoff_of_profile(0, &[0, 0]).is_err());
    }

    #[test]
    fn profile_indexing_is_row_major() {
        let g = women_game(&p1(), UtilityFunction::conv());
        assert_eq!(g.profile_index(&[0, 0, 1]).unwrap(), 1);
        assert_eq!(g.profile_index(&[1, 0, 0]).unwrap(), 36);
        assert_eq!(g.digits(215), vec![5, 5, 5]);
        assert_eq!(g.profile_labels(37), vec!["W2", "W1", "W2"]);
    }

    #[test]
    fn outcome_independence_structure() {
        let g1 = women_game(&p1(), UtilityFunction::table());
        for r in 0..216 {
            let d = g1.digits(r);
            let no_w3 = g1.profile_index(&[d[0], d[1], 0]).unwrap();
            assert_eq!(g1.outcome(r), g1.outcome(no_w3), "P1 outcome ignores w3's report");
            if d[0] < 4 {
                let base = g1.profile_index(&[d[0], 0, 0]).unwrap();
                assert_eq!(g1.outcome(r), g1.outcome(base), "rows W1..W4 are column-constant");
            }
        }
        // rows W5, W6 do depend on w2
        let a = g1.profile_index(&[4, 0, 0]).unwrap();
        let b = g1.profile_index(&[4, 2, 0]).unwrap();
        assert_ne!(g1.outcome(a), g1.outcome(b));
        let g2 = women_game(&p2(), UtilityFunction::table());
        for r in 0..216 {
            let d = g2.digits(r);
            let base = g2.profile_index(&[d[0], d[1], 0]).unwrap();
            assert_eq!(g2.outcome(r), g2.outcome(base), "P2 outcome ignores w3's report");
        }
    }
}

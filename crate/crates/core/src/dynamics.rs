//! Selection dynamics on the product of strategy simplices.
//!
//! States are stored flat: player `i` owns `shares[offsets[i]..offsets[i+1]]`.
//! Integration is classical fixed-step RK4 followed by clipping negative
//! shares to zero and renormalising every player's vector.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::matching::Matching;

/// Tolerance on per-player share sums for externally supplied states.
pub const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    offsets: Vec<usize>,
    shares: Vec<f64>,
}

impl PopulationState {
    pub fn from_shares(shares: Vec<Vec<f64>>) -> Result<Self> {
        if shares.is_empty() {
            return Err(Error::InvalidState("no players".into()));
        }
        let mut offsets = vec![0];
        let mut flat = Vec::new();
        for (i, x) in shares.iter().enumerate() {
            if x.is_empty() {
                return Err(Error::InvalidState(format!("player {i} has no strategies")));
            }
            if x.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidState(format!("player {i} has a negative or non-finite share")));
            }
            let sum: f64 = x.iter().sum();
            if (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::InvalidState(format!("player {i} shares sum to {sum}")));
            }
            flat.extend_from_slice(x);
            offsets.push(flat.len());
        }
        Ok(PopulationState { offsets, shares: flat })
    }

    pub fn uniform(shape: &[usize]) -> Self {
        let mut offsets = vec![0];
        let mut shares = Vec::new();
        for &n in shape {
            shares.extend(std::iter::repeat_n(1.0 / n as f64, n));
            offsets.push(shares.len());
        }
        PopulationState { offsets, shares }
    }

    /// Everybody plays the given pure strategy.
    pub fn vertex(shape: &[usize], profile: &[usize]) -> Result<Self> {
        if profile.len() != shape.len() || profile.iter().zip(shape).any(|(s, n)| s >= n) {
            return Err(Error::InvalidState(format!("profile {profile:?} does not fit {shape:?}")));
        }
        let mut state = PopulationState::uniform(shape);
        for i in 0..shape.len() {
            let off = state.offsets[i];
            for h in 0..shape[i] {
                state.shares[off + h] = if h == profile[i] { 1.0 } else { 0.0 };
            }
        }
        Ok(state)
    }

    pub fn n_players(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn shape(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn player(&self, i: usize) -> &[f64] {
        &self.shares[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn share(&self, player: usize, strategy: usize) -> f64 {
        self.player(player)[strategy]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.shares
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.n_players()).map(|i| self.player(i).to_vec()).collect()
    }

    /// Max-norm distance.
    pub fn distance(&self, other: &PopulationState) -> f64 {
        self.shares
            .iter()
            .zip(&other.shares)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn check_game(&self, game: &Game) -> Result<()> {
        if self.shape() != game.shape() {
            return Err(Error::DimensionMismatch(format!(
                "state shape {:?} vs game shape {:?}",
                self.shape(),
                game.shape()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DynamicsKind {
    Replicator,
    /// Growth rates `tanh(beta * excess payoff)`, rebalanced so that every
    /// player's shares still sum to one without changing any sign.
    PayoffPositiveSigmoid { beta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsSpec {
    pub kind: DynamicsKind,
    pub dt: f64,
    pub t_max: f64,
    pub stationarity_tol: f64,
    pub stationarity_window: usize,
    pub survival_threshold: f64,
    /// Record every `sample_stride`-th step (segment ends are always kept).
    pub sample_stride: usize,
    /// End the run at the first stationary step.
    pub stop_at_stationary: bool,
}

impl Default for DynamicsSpec {
    fn default() -> Self {
        DynamicsSpec {
            kind: DynamicsKind::Replicator,
            dt: 0.01,
            t_max: 20.0,
            stationarity_tol: 1e-5,
            stationarity_window: 4,
            survival_threshold: 1e-3,
            sample_stride: 1,
            stop_at_stationary: false,
        }
    }
}

impl DynamicsSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDynamics(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt = {}", self.dt));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("t_max = {}", self.t_max));
        }
        if !(self.stationarity_tol > 0.0) {
            return bad(format!("stationarity_tol = {}", self.stationarity_tol));
        }
        if self.stationarity_window == 0 {
            return bad("stationarity_window must be at least 1".into());
        }
        if !(self.survival_threshold >= 0.0 && self.survival_threshold < 1.0) {
            return bad(format!("survival_threshold = {}", self.survival_threshold));
        }
        if self.sample_stride == 0 {
            return bad("sample_stride must be at least 1".into());
        }
        if let DynamicsKind::PayoffPositiveSigmoid { beta } = self.kind {
            if !(beta > 0.0 && beta.is_finite()) {
                return bad(format!("beta = {beta}"));
            }
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

/// Add `delta` to one share at `time`, then divide that player's vector by
/// `1 + delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationEvent {
    pub time: f64,
    pub player: usize,
    pub strategy: usize,
    pub delta: f64,
}

/// Expected payoff of every pure strategy of every player, written into `f`
/// (same layout as `x`).
fn fill_expected_payoffs(game: &Game, offsets: &[usize], x: &[f64], f: &mut [f64]) {
    let shape = game.shape();
    let d = shape.len();
    let tensor = game.payoffs();
    let n = tensor.n_profiles();
    f.iter_mut().for_each(|v| *v = 0.0);
    let mut digits = vec![0usize; d];
    let mut prefix = vec![1.0; d + 1];
    let mut suffix = vec![1.0; d + 1];
    for r in 0..n {
        for k in 0..d {
            prefix[k + 1] = prefix[k] * x[offsets[k] + digits[k]];
        }
        for k in (0..d).rev() {
            suffix[k] = suffix[k + 1] * x[offsets[k] + digits[k]];
        }
        for i in 0..d {
            let w = prefix[i] * suffix[i + 1];
            if w != 0.0 {
                f[offsets[i] + digits[i]] += w * tensor.get(i, r);
            }
        }
        crate::game::increment(&mut digits, shape);
    }
}

/// `(f, phi)`: expected payoff of each pure strategy of `player` against
/// the others' mixed strategies, and the population average.
pub fn expected_payoffs(game: &Game, state: &PopulationState, player: usize) -> Result<(Vec<f64>, f64)> {
    state.check_game(game)?;
    if player >= game.n_players() {
        return Err(Error::OutOfRange(format!("strategic player {player}")));
    }
    let mut f = vec![0.0; state.shares.len()];
    fill_expected_payoffs(game, &state.offsets, &state.shares, &mut f);
    let range = state.offsets[player]..state.offsets[player + 1];
    let fi = f[range.clone()].to_vec();
    let phi = state.shares[range].iter().zip(&fi).map(|(x, f)| x * f).sum();
    Ok((fi, phi))
}

struct Workspace {
    f: Vec<f64>,
    growth: Vec<f64>,
}

impl Workspace {
    fn new(len: usize) -> Self {
        Workspace {
            f: vec![0.0; len],
            growth: vec![0.0; len],
        }
    }
}

fn fill_rhs(game: &Game, kind: DynamicsKind, offsets: &[usize], x: &[f64], ws: &mut Workspace, out: &mut [f64]) {
    fill_expected_payoffs(game, offsets, x, &mut ws.f);
    for i in 0..offsets.len() - 1 {
        let range = offsets[i]..offsets[i + 1];
        let xi = &x[range.clone()];
        let fi = &ws.f[range.clone()];
        let phi: f64 = xi.iter().zip(fi).map(|(a, b)| a * b).sum();
        match kind {
            DynamicsKind::Replicator => {
                for (k, o) in out[range].iter_mut().enumerate() {
                    *o = xi[k] * (fi[k] - phi);
                }
            }
            DynamicsKind::PayoffPositiveSigmoid { beta } => {
                let g = &mut ws.growth[range.clone()];
                let (mut pos, mut neg) = (0.0, 0.0);
                for k in 0..xi.len() {
                    let excess = fi[k] - phi;
                    g[k] = (beta * excess).tanh();
                    if excess > 0.0 {
                        pos += xi[k] * g[k];
                    } else if excess < 0.0 {
                        neg -= xi[k] * g[k];
                    }
                }
                // scale gains by total loss and losses by total gain so the
                // x-weighted rates cancel
                let total = pos + neg;
                for k in 0..xi.len() {
                    let excess = fi[k] - phi;
                    let scale = if total <= 0.0 {
                        0.0
                    } else if excess > 0.0 {
                        2.0 * neg / total
                    } else {
                        2.0 * pos / total
                    };
                    out[offsets[i] + k] = xi[k] * g[k] * scale;
                }
            }
        }
    }
}

/// Time derivative of the state, one vector per player.
pub fn rhs(game: &Game, spec: &DynamicsSpec, state: &PopulationState) -> Result<Vec<Vec<f64>>> {
    state.check_game(game)?;
    let mut ws = Workspace::new(state.shares.len());
    let mut out = vec![0.0; state.shares.len()];
    fill_rhs(game, spec.kind, &state.offsets, &state.shares, &mut ws, &mut out);
    Ok((0..state.n_players())
        .map(|i| out[state.offsets[i]..state.offsets[i + 1]].to_vec())
        .collect())
}

pub fn apply_perturbation(state: &PopulationState, event: &PerturbationEvent) -> Result<PopulationState> {
    if event.player >= state.n_players() || event.strategy >= state.player(event.player).len() {
        return Err(Error::InvalidPerturbation(format!(
            "no strategy {} for player {}",
            event.strategy, event.player
        )));
    }
    if !(event.delta > -1.0 && event.delta.is_finite()) {
        return Err(Error::InvalidPerturbation(format!("delta = {} must exceed -1", event.delta)));
    }
    let mut next = state.clone();
    let off = next.offsets[event.player];
    let bumped = next.shares[off + event.strategy] + event.delta;
    if bumped < 0.0 {
        return Err(Error::InvalidPerturbation(format!(
            "share would become {bumped} after adding {}",
            event.delta
        )));
    }
    next.shares[off + event.strategy] = bumped;
    for v in &mut next.shares[off..next.offsets[event.player + 1]] {
        *v /= 1.0 + event.delta;
    }
    Ok(next)
}

/// Strategies whose share exceeds `threshold`, per player.
pub fn survivors(state: &PopulationState, threshold: f64) -> Vec<Vec<usize>> {
    (0..state.n_players())
        .map(|i| {
            state
                .player(i)
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > threshold)
                .map(|(h, _)| h)
                .collect()
        })
        .collect()
}

/// Number of pure profiles in the product of the survivor sets.
pub fn surviving_profile_count(survivors: &[Vec<usize>]) -> usize {
    survivors.iter().map(Vec::len).product()
}

/// Distinct matchings reachable from the product of per-player supports.
pub fn matchings_on_support(game: &Game, support: &[Vec<usize>]) -> Vec<Matching> {
    let mut ids = vec![false; game.outcomes().len()];
    if support.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let strides = game.payoffs().strides().to_vec();
    let mut pos = vec![0usize; support.len()];
    loop {
        let r: usize = pos.iter().enumerate().map(|(k, &p)| support[k][p] * strides[k]).sum();
        ids[game.outcome_id(r)] = true;
        let mut k = support.len();
        loop {
            if k == 0 {
                return ids
                    .iter()
                    .enumerate()
                    .filter(|(_, &hit)| hit)
                    .map(|(id, _)| game.outcomes()[id].clone())
                    .collect();
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < support[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}

fn distribution_by_id(game: &Game, offsets: &[usize], x: &[f64]) -> Vec<f64> {
    let shape = game.shape();
    let d = shape.len();
    let mut out = vec![0.0; game.outcomes().len()];
    let mut digits = vec![0usize; d];
    for r in 0..game.n_profiles() {
        let w: f64 = (0..d).map(|k| x[offsets[k] + digits[k]]).product();
        out[game.outcome_id(r)] += w;
        crate::game::increment(&mut digits, shape);
    }
    out
}

/// Probability of each outcome matching when reports are drawn
/// independently from the state.
pub fn matching_distribution(game: &Game, state: &PopulationState) -> Result<BTreeMap<Matching, f64>> {
    state.check_game(game)?;
    let probs = distribution_by_id(game, &state.offsets, &state.shares);
    Ok(game.outcomes().iter().cloned().zip(probs).collect())
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PopulationState>,
    /// Aligned with `outcomes`.
    pub matching_shares: Vec<Vec<f64>>,
    pub outcomes: Vec<Matching>,
    /// Every step at which the state became stationary.
    pub stationary_onsets: Vec<f64>,
    /// Ends of integration segments (before each perturbation, and the
    /// final step) at which the state was stationary.
    pub stationary_times: Vec<f64>,
    pub stationary_states: Vec<PopulationState>,
    pub final_time: f64,
    pub final_state: PopulationState,
    pub final_survivors: Vec<Vec<usize>>,
}

impl Trajectory {
    pub fn is_stationary_at_end(&self) -> bool {
        self.stationary_times.last() == Some(&self.final_time)
    }

    pub fn distribution_at(&self, sample: usize) -> BTreeMap<Matching, f64> {
        self.outcomes
            .iter()
            .cloned()
            .zip(self.matching_shares[sample].iter().copied())
            .collect()
    }
}

fn validate_events(game: &Game, spec: &DynamicsSpec, events: &[PerturbationEvent]) -> Result<()> {
    let mut last = f64::NEG_INFINITY;
    for e in events {
        if !(e.time >= 0.0 && e.time <= spec.t_max) {
            return Err(Error::InvalidPerturbation(format!("time {} outside [0, t_max]", e.time)));
        }
        if e.time < last {
            return Err(Error::InvalidPerturbation("events must be sorted by time".into()));
        }
        last = e.time;
        if e.player >= game.n_players() || e.strategy >= game.shape()[e.player] {
            return Err(Error::InvalidPerturbation(format!(
                "no strategy {} for player {}",
                e.strategy, e.player
            )));
        }
        if !(e.delta > -1.0) {
            return Err(Error::InvalidPerturbation(format!("delta = {} must exceed -1", e.delta)));
        }
    }
    Ok(())
}

fn normalize(offsets: &[usize], x: &mut [f64]) -> bool {
    for i in 0..offsets.len() - 1 {
        let xi = &mut x[offsets[i]..offsets[i + 1]];
        for v in xi.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = xi.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return false;
        }
        xi.iter_mut().for_each(|v| *v /= sum);
    }
    true
}

/// Integrate from `x0`, applying `events` at the step nearest their time.
/// Stationarity holds at a step when each of the last `stationarity_window`
/// steps changed the state by less than `stationarity_tol` in max norm; a
/// perturbation restarts that count.
pub fn integrate(
    game: &Game,
    spec: &DynamicsSpec,
    x0: &PopulationState,
    events: &[PerturbationEvent],
) -> Result<Trajectory> {
    spec.validate()?;
    x0.check_game(game)?;
    validate_events(game, spec, events)?;

    let offsets = x0.offsets.clone();
    let len = x0.shares.len();
    let n_steps = spec.n_steps();
    let dt = spec.dt;
    let event_step = |e: &PerturbationEvent| (e.time / dt).round() as usize;

    let mut x = x0.clone();
    let mut next_event = 0;
    while next_event < events.len() && event_step(&events[next_event]) == 0 {
        x = apply_perturbation(&x, &events[next_event])?;
        next_event += 1;
    }

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        matching_shares: Vec::new(),
        outcomes: game.outcomes().to_vec(),
        stationary_onsets: Vec::new(),
        stationary_times: Vec::new(),
        stationary_states: Vec::new(),
        final_time: 0.0,
        final_state: x.clone(),
        final_survivors: Vec::new(),
    };
    let record = |traj: &mut Trajectory, t: f64, x: &PopulationState| {
        traj.times.push(t);
        traj.matching_shares.push(distribution_by_id(game, &offsets, &x.shares));
        traj.states.push(x.clone());
    };
    record(&mut traj, 0.0, &x);

    let mut ws = Workspace::new(len);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    let mut tmp = vec![0.0; len];
    let mut next = vec![0.0; len];
    let mut calm = 0usize;
    let mut was_stationary = false;
    let mut t = 0.0;

    for step in 1..=n_steps {
        let xs = &x.shares;
        fill_rhs(game, spec.kind, &offsets, xs, &mut ws, &mut k1);
        for j in 0..len {
            tmp[j] = xs[j] + 0.5 * dt * k1[j];
        }
        fill_rhs(game, spec.kind, &offsets, &tmp, &mut ws, &mut k2);
        for j in 0..len {
            tmp[j] = xs[j] + 0.5 * dt * k2[j];
        }
        fill_rhs(game, spec.kind, &offsets, &tmp, &mut ws, &mut k3);
        for j in 0..len {
            tmp[j] = xs[j] + dt * k3[j];
        }
        fill_rhs(game, spec.kind, &offsets, &tmp, &mut ws, &mut k4);
        for j in 0..len {
            next[j] = xs[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        t = step as f64 * dt;
        if next.iter().any(|v| !v.is_finite()) || !normalize(&offsets, &mut next) {
            return Err(Error::Diverged { time: t });
        }

        let change = next.iter().zip(xs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut x.shares, &mut next);
        calm = if change < spec.stationarity_tol { calm + 1 } else { 0 };
        let stationary = calm >= spec.stationarity_window;
        if stationary && !was_stationary {
            traj.stationary_onsets.push(t);
        }
        was_stationary = stationary;

        let has_event = next_event < events.len() && event_step(&events[next_event]) == step;
        let stopping = spec.stop_at_stationary && stationary;
        let segment_end = has_event || step == n_steps || stopping;
        if segment_end && stationary {
            traj.stationary_times.push(t);
            traj.stationary_states.push(x.clone());
        }
        if segment_end || step % spec.sample_stride == 0 {
            record(&mut traj, t, &x);
        }
        if stopping {
            break;
        }
        if has_event {
            while next_event < events.len() && event_step(&events[next_event]) == step {
                x = apply_perturbation(&x, &events[next_event])?;
                next_event += 1;
            }
            calm = 0;
            was_stationary = false;
            record(&mut traj, t, &x);
        }
    }

    traj.final_time = t;
    traj.final_survivors = survivors(&x, spec.survival_threshold);
    traj.final_state = x;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_game, StrategicSet, UtilityFunction};
    use crate::matching::{PreferenceProfile, Side};

    fn game(labels: [&str; 6], u: UtilityFunction) -> Game {
        let p = PreferenceProfile::from_labels(&labels, 3, 3).unwrap();
        build_game(&p, &StrategicSet::side(Side::Women, 3).unwrap(), &u, Side::Men).unwrap()
    }

    fn p1() -> Game {
        game(["M1", "M1", "M2", "W1", "W2", "W1"], UtilityFunction::conv())
    }

    #[test]
    fn pure_state_payoffs_are_table_entries() {
        let g = p1();
        let x = PopulationState::vertex(g.shape(), &[4, 2, 0]).unwrap();
        for i in 0..3 {
            let (f, phi) = expected_payoffs(&g, &x, i).unwrap();
            let r = g.profile_index(&[4, 2, 0]).unwrap();
            assert_eq!(phi, g.payoffs().get(i, r));
            let own = [4, 2, 0][i];
            assert_eq!(f[own], phi);
        }
    }

    #[test]
    fn vertices_are_fixed() {
        let g = p1();
        let x = PopulationState::vertex(g.shape(), &[3, 1, 5]).unwrap();
        for kind in [DynamicsKind::Replicator, DynamicsKind::PayoffPositiveSigmoid { beta: 2.0 }] {
            let spec = DynamicsSpec { kind, ..Default::default() };
            let d = rhs(&g, &spec, &x).unwrap();
            assert!(d.iter().flatten().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn uniform_p1_favours_truthful_w1() {
        let g = p1();
        let x = PopulationState::uniform(g.shape());
        let d = rhs(&g, &DynamicsSpec::default(), &x).unwrap();
        assert!(d[0][0] > 0.0);
        assert!(d[0][4] < 0.0);
    }

    #[test]
    fn perturbation_arithmetic() {
        let x = PopulationState::vertex(&[6, 6], &[0, 0]).unwrap();
        let e = PerturbationEvent { time: 0.0, player: 0, strategy: 4, delta: 0.1 };
        let y = apply_perturbation(&x, &e).unwrap();
        assert!((y.share(0, 0) - 1.0 / 1.1).abs() < 1e-15);
        assert!((y.share(0, 4) - 0.1 / 1.1).abs() < 1e-15);
        assert_eq!(y.player(1), x.player(1));
        let zero = PerturbationEvent { delta: 0.0, ..e.clone() };
        assert_eq!(apply_perturbation(&x, &zero).unwrap(), x);
        let too_negative = PerturbationEvent { strategy: 1, delta: -0.5, ..e.clone() };
        assert!(apply_perturbation(&x, &too_negative).is_err());
        let out_of_bounds = PerturbationEvent { delta: -2.0, ..e };
        assert!(apply_perturbation(&x, &out_of_bounds).is_err());
    }

    #[test]
    fn survivors_of_simple_states() {
        let x = PopulationState::vertex(&[6, 6, 6], &[1, 2, 3]).unwrap();
        assert_eq!(survivors(&x, 1e-3), vec![vec![1], vec![2], vec![3]]);
        let u = PopulationState::uniform(&[6, 6, 6]);
        assert_eq!(survivors(&u, 1e-3), vec![(0..6).collect::<Vec<_>>(); 3]);
    }

    #[test]
    fn state_validation() {
        assert!(PopulationState::from_shares(vec![vec![0.5, 0.6]]).is_err());
        assert!(PopulationState::from_shares(vec![vec![-0.1, 1.1]]).is_err());
        assert!(PopulationState::from_shares(vec![]).is_err());
        assert!(PopulationState::from_shares(vec![vec![0.25, 0.75]]).is_ok());
    }

    #[test]
    fn spec_validation() {
        assert!(DynamicsSpec { dt: 0.0, ..Default::default() }.validate().is_err());
        assert!(DynamicsSpec { stationarity_window: 0, ..Default::default() }.validate().is_err());
        assert!(DynamicsSpec {
            kind: DynamicsKind::PayoffPositiveSigmoid { beta: -1.0 },
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn vertex_trajectory_is_constant_and_converges_at_first_window() {
        let g = p1();
        let x = PopulationState::vertex(g.shape(), &[2, 2, 2]).unwrap();
        let spec = DynamicsSpec { t_max: 1.0, ..Default::default() };
        let traj = integrate(&g, &spec, &x, &[]).unwrap();
        assert!(traj.states.iter().all(|s| *s == x));
        assert!((traj.stationary_onsets[0] - 0.04).abs() < 1e-12);
        assert!(traj.is_stationary_at_end());
    }

    #[test]
    fn unsorted_or_bad_events_rejected() {
        let g = p1();
        let x = PopulationState::uniform(g.shape());
        let spec = DynamicsSpec { t_max: 1.0, ..Default::default() };
        let e = |time: f64, delta: f64| PerturbationEvent { time, player: 0, strategy: 0, delta };
        assert!(integrate(&g, &spec, &x, &[e(0.5, 0.1), e(0.2, 0.1)]).is_err());
        assert!(integrate(&g, &spec, &x, &[e(2.0, 0.1)]).is_err());
        assert!(integrate(&g, &spec, &x, &[e(0.5, -2.0)]).is_err());
    }

    #[test]
    fn short_run_never_stationary() {
        let g = p1();
        let x = PopulationState::vertex(g.shape(), &[0, 0, 0]).unwrap();
        let spec = DynamicsSpec { t_max: 0.03, ..Default::default() };
        let traj = integrate(&g, &spec, &x, &[]).unwrap();
        assert!(traj.stationary_onsets.is_empty());
    }
}

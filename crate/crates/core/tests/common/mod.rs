#![allow(dead_code)]

pub mod golden;

use matchdyn::dynamics::{DynamicsSpec, PerturbationEvent};
use matchdyn::game::{build_game, Game, StrategicSet, UtilityFunction};
use matchdyn::matching::{Matching, PreferenceProfile, Side};
use matchdyn::stability::ProductSet;

pub fn profile(labels: [&str; 6]) -> PreferenceProfile {
    PreferenceProfile::from_labels(&labels, 3, 3).unwrap()
}

pub fn p1() -> PreferenceProfile {
    profile(["M1", "M1", "M2", "W1", "W2", "W1"])
}

pub fn p2() -> PreferenceProfile {
    profile(["M3", "M1", "M1", "W2", "W5", "W1"])
}

/// Women report strategically, men truthfully, men propose.
pub fn women_game(p: &PreferenceProfile, u: &UtilityFunction) -> Game {
    build_game(p, &StrategicSet::side(Side::Women, 3).unwrap(), u, Side::Men).unwrap()
}

pub fn mu(k: usize) -> Matching {
    Matching::from_label(&format!("mu{k}"), 3, 3).unwrap()
}

/// Box from strategy labels; `["S"]` stands for the full set.
pub fn bx(game: &Game, comps: &[&[&str]]) -> ProductSet {
    let c: Vec<Vec<usize>> = comps
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c == &["S"] {
                (0..game.shape()[i]).collect()
            } else {
                c.iter().map(|l| game.strategy_by_label(i, l).unwrap()).collect()
            }
        })
        .collect();
    ProductSet::new(&c, game.shape()).unwrap()
}

pub fn labels(game: &Game, sets: &[Vec<usize>]) -> Vec<Vec<String>> {
    sets.iter()
        .enumerate()
        .map(|(i, s)| s.iter().map(|&h| game.strategy_label(i, h)).collect())
        .collect()
}

pub fn all_six() -> Vec<String> {
    (1..=6).map(|k| format!("W{k}")).collect()
}

pub fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn event(game: &Game, time: f64, player: usize, label: &str, delta: f64) -> PerturbationEvent {
    PerturbationEvent {
        time,
        player,
        strategy: game.strategy_by_label(player, label).unwrap(),
        delta,
    }
}

/// First example: kicks to w1's W5 at t = 1 and W1 at t = 2, horizon 3.
pub fn fig1a(u: &UtilityFunction) -> (Game, DynamicsSpec, Vec<PerturbationEvent>) {
    let g = women_game(&p1(), u);
    let spec = DynamicsSpec {
        t_max: 3.0,
        ..DynamicsSpec::default()
    };
    let events = vec![event(&g, 1.0, 0, "W5", 0.1), event(&g, 2.0, 0, "W1", 0.1)];
    (g, spec, events)
}

/// Second example: kicks to w2's W5 at t = 3 and w1's W5 at t = 6, horizon 7.
pub fn fig1b(u: &UtilityFunction) -> (Game, DynamicsSpec, Vec<PerturbationEvent>) {
    let g = women_game(&p2(), u);
    let spec = DynamicsSpec {
        t_max: 7.0,
        ..DynamicsSpec::default()
    };
    let events = vec![event(&g, 3.0, 1, "W5", 0.1), event(&g, 6.0, 0, "W5", 0.1)];
    (g, spec, events)
}

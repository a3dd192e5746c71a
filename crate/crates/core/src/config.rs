//! TOML run configuration.
//!
//! ```toml
//! [instance]
//! men = ["M3", "M1", "M1"]        # labels (3x3 only) or 1-based rankings
//! women = ["W2", "W5", "W1"]
//! strategic = "women"             # "men", "women", "all" or ["w1", "m2"]
//! proposing = "men"
//!
//! [utility]
//! preset = "u_conv"               # or values = [25.0, 10.0, 1.0]
//!
//! [dynamics]
//! t_max = 10.0
//!
//! [[perturbation]]
//! time = 3.0
//! player = "w2"
//! strategy = "W5"
//! delta = 0.1
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{DynamicsKind, DynamicsSpec, PerturbationEvent, PopulationState};
use crate::error::{Error, Result};
use crate::game::{Game, StrategicSet, UtilityFunction};
use crate::matching::{Matching, PlayerId, Preference, PreferenceProfile, Side};
use crate::stability::SearchLimits;
use crate::sweep::SweepConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrefSpec {
    Label(String),
    /// Partners numbered from 1, most preferred first.
    Ranking(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StrategicSpec {
    Named(String),
    Players(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSection {
    pub men: Vec<PrefSpec>,
    pub women: Vec<PrefSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategic: Option<StrategicSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proposing: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilitySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Payoff for staying single.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub single: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSection {
    /// "replicator" or "sigmoid".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationarity_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationarity_window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub survival_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_stride: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    /// "uniform" (default) or "explicit".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shares: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub time: f64,
    pub player: String,
    pub strategy: String,
    pub delta: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    /// Matchings to analyse (`mu2` or pair notation); default: every
    /// outcome of the game.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matchings: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Player id to preference, e.g. `{ m1 = "M1" }`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<BTreeMap<String, PrefSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<bool>,
    /// Outcome file name inside the output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub instance: InstanceSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub utility: UtilitySection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub dynamics: DynamicsSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub initial: InitialSection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturbation: Vec<PerturbationSpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub stability: StabilitySection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub sweep: SweepSection,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

/// Parse and fully validate a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        Error::ConfigParse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    config.validate()?;
    Ok(config)
}

fn parse_pref(spec: &PrefSpec, holder: Side, n_opposite: usize, field: &str) -> Result<Preference> {
    match spec {
        PrefSpec::Label(label) => {
            if n_opposite != 3 {
                return Err(Error::field(field, "labels need a 3x3 instance; use rankings"));
            }
            Preference::from_label(label, holder, n_opposite).map_err(|e| Error::field(field, e.to_string()))
        }
        PrefSpec::Ranking(r) => {
            if r.contains(&0) {
                return Err(Error::field(field, "rankings number partners from 1"));
            }
            let zero_based = r.iter().map(|k| k - 1).collect();
            Preference::new(zero_based).map_err(|e| Error::field(field, e.to_string()))
        }
    }
}

fn parse_side(s: &str, field: &str) -> Result<Side> {
    s.parse().map_err(|_| Error::field(field, format!("`{s}` is not `men` or `women`")))
}

impl RunConfig {
    /// Serialise back to TOML.
    pub fn render(&self) -> String {
        toml::to_string(self).expect("config values are representable")
    }

    /// Hex SHA-256 of the rendered config.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.render().as_bytes()))
    }

    pub fn validate(&self) -> Result<()> {
        let profile = self.profile()?;
        self.strategic_set()?;
        self.proposing()?;
        let utility = self.utility()?;
        let strategic = self.strategic_set()?;
        for p in strategic.players() {
            let need = profile.side_size(p.side.other());
            if utility.len() != need {
                return Err(Error::field(
                    "utility",
                    format!("{} values but {p} ranks {need} partners", utility.len()),
                ));
            }
        }
        self.dynamics_spec()?;
        self.search_limits()?;
        let shape: Vec<usize> = strategic
            .players()
            .iter()
            .map(|p| crate::matching::factorial(profile.side_size(p.side.other())))
            .collect();
        self.initial_shares(&shape)?;
        for (k, p) in self.perturbation.iter().enumerate() {
            let field = |name: &str| format!("perturbation[{k}].{name}");
            if !(p.delta > -1.0) || !p.delta.is_finite() {
                return Err(Error::field(field("delta"), format!("{} must exceed -1", p.delta)));
            }
            if !(p.time >= 0.0) || !p.time.is_finite() {
                return Err(Error::field(field("time"), format!("{} is not a valid time", p.time)));
            }
            if k > 0 && p.time < self.perturbation[k - 1].time {
                return Err(Error::field(field("time"), "perturbations must be in time order"));
            }
            let id: PlayerId = p.player.parse().map_err(|_| Error::field(field("player"), format!("`{}`", p.player)))?;
            let Some(pos) = strategic.position(id) else {
                return Err(Error::field(field("player"), format!("{id} is not strategic")));
            };
            let holder = strategic.players()[pos].side;
            Preference::from_label(&p.strategy, holder, profile.side_size(holder.other()))
                .map_err(|e| Error::field(field("strategy"), e.to_string()))?;
        }
        if let Some(ms) = &self.stability.matchings {
            for (k, m) in ms.iter().enumerate() {
                Matching::from_label(m, profile.n_men(), profile.n_women())
                    .map_err(|e| Error::field(format!("stability.matchings[{k}]"), e.to_string()))?;
            }
        }
        self.sweep_config()?;
        Ok(())
    }

    pub fn profile(&self) -> Result<PreferenceProfile> {
        let (nm, nw) = (self.instance.men.len(), self.instance.women.len());
        if nm == 0 || nw == 0 {
            return Err(Error::field("instance", "both sides need players"));
        }
        let men = self
            .instance
            .men
            .iter()
            .enumerate()
            .map(|(k, s)| parse_pref(s, Side::Men, nw, &format!("instance.men[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let women = self
            .instance
            .women
            .iter()
            .enumerate()
            .map(|(k, s)| parse_pref(s, Side::Women, nm, &format!("instance.women[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        PreferenceProfile::new(men, women).map_err(|e| Error::field("instance", e.to_string()))
    }

    pub fn strategic_set(&self) -> Result<StrategicSet> {
        let (nm, nw) = (self.instance.men.len(), self.instance.women.len());
        let field = "instance.strategic";
        let wrap = |e: Error| Error::field(field, e.to_string());
        match &self.instance.strategic {
            None => StrategicSet::side(Side::Women, nw).map_err(wrap),
            Some(StrategicSpec::Named(s)) if s == "all" => StrategicSet::everyone(nm, nw).map_err(wrap),
            Some(StrategicSpec::Named(s)) => {
                let side = parse_side(s, field)?;
                let n = if side == Side::Men { nm } else { nw };
                StrategicSet::side(side, n).map_err(wrap)
            }
            Some(StrategicSpec::Players(ps)) => {
                let ids = ps
                    .iter()
                    .map(|p| p.parse::<PlayerId>().map_err(|_| Error::field(field, format!("`{p}`"))))
                    .collect::<Result<Vec<_>>>()?;
                for id in &ids {
                    let n = if id.side == Side::Men { nm } else { nw };
                    if id.index >= n {
                        return Err(Error::field(field, format!("{id} is not in the instance")));
                    }
                }
                StrategicSet::new(ids).map_err(wrap)
            }
        }
    }

    pub fn proposing(&self) -> Result<Side> {
        self.instance
            .proposing
            .as_deref()
            .map_or(Ok(Side::Men), |s| parse_side(s, "instance.proposing"))
    }

    pub fn utility(&self) -> Result<UtilityFunction> {
        let u = &self.utility;
        match (&u.preset, &u.values) {
            (Some(_), Some(_)) => Err(Error::field("utility", "give either `preset` or `values`")),
            (Some(name), None) => {
                if u.single.is_some() {
                    return Err(Error::field("utility.single", "only allowed with `values`"));
                }
                UtilityFunction::preset(name).ok_or_else(|| Error::field("utility.preset", format!("unknown preset `{name}`")))
            }
            (None, Some(v)) => UtilityFunction::new(v.clone(), u.single.unwrap_or(0.0))
                .map_err(|e| Error::field("utility.values", e.to_string())),
            (None, None) => {
                if u.single.is_some() {
                    return Err(Error::field("utility.single", "only allowed with `values`"));
                }
                Ok(UtilityFunction::conv())
            }
        }
    }

    pub fn dynamics_spec(&self) -> Result<DynamicsSpec> {
        let d = &self.dynamics;
        let base = DynamicsSpec::default();
        let kind = match d.kind.as_deref() {
            None | Some("replicator") => {
                if d.beta.is_some() {
                    return Err(Error::field("dynamics.beta", "only used by the sigmoid dynamics"));
                }
                DynamicsKind::Replicator
            }
            Some("sigmoid") => DynamicsKind::PayoffPositiveSigmoid { beta: d.beta.unwrap_or(1.0) },
            Some(other) => return Err(Error::field("dynamics.kind", format!("unknown dynamics `{other}`"))),
        };
        let spec = DynamicsSpec {
            kind,
            dt: d.dt.unwrap_or(base.dt),
            t_max: d.t_max.unwrap_or(base.t_max),
            stationarity_tol: d.stationarity_tol.unwrap_or(base.stationarity_tol),
            stationarity_window: d.stationarity_window.unwrap_or(base.stationarity_window),
            survival_threshold: d.survival_threshold.unwrap_or(base.survival_threshold),
            sample_stride: d.sample_stride.unwrap_or(base.sample_stride),
            stop_at_stationary: false,
        };
        spec.validate().map_err(|e| Error::field("dynamics", e.to_string()))?;
        Ok(spec)
    }

    pub fn search_limits(&self) -> Result<SearchLimits> {
        let base = SearchLimits::default();
        let s = &self.stability;
        let limits = SearchLimits {
            box_cap: s.box_cap.unwrap_or(base.box_cap),
            family_cap: s.family_cap.unwrap_or(base.family_cap),
            exhaustive: s.exhaustive.unwrap_or(base.exhaustive),
        };
        if limits.box_cap == 0 {
            return Err(Error::field("stability.box_cap", "must be positive"));
        }
        if limits.family_cap == 0 {
            return Err(Error::field("stability.family_cap", "must be positive"));
        }
        Ok(limits)
    }

    fn initial_shares(&self, shape: &[usize]) -> Result<PopulationState> {
        match (self.initial.kind.as_deref(), &self.initial.shares) {
            (None | Some("uniform"), None) => Ok(PopulationState::uniform(shape)),
            (None | Some("uniform"), Some(_)) => Err(Error::field("initial.shares", "only allowed with kind = \"explicit\"")),
            (Some("explicit"), None) => Err(Error::field("initial.shares", "required for kind = \"explicit\"")),
            (Some("explicit"), Some(shares)) => {
                let got: Vec<usize> = shares.iter().map(Vec::len).collect();
                if got != shape {
                    return Err(Error::field("initial.shares", format!("shape {got:?}, expected {shape:?}")));
                }
                PopulationState::from_shares(shares.clone()).map_err(|e| Error::field("initial.shares", e.to_string()))
            }
            (Some(other), _) => Err(Error::field("initial.kind", format!("unknown kind `{other}`"))),
        }
    }

    pub fn initial_state(&self, game: &Game) -> Result<PopulationState> {
        self.initial_shares(game.shape())
    }

    /// Perturbations with players and strategies resolved against `game`.
    pub fn events(&self, game: &Game) -> Result<Vec<PerturbationEvent>> {
        self.perturbation
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let id: PlayerId = p
                    .player
                    .parse()
                    .map_err(|_| Error::field(format!("perturbation[{k}].player"), p.player.clone()))?;
                let player = game
                    .strategic()
                    .position(id)
                    .ok_or_else(|| Error::field(format!("perturbation[{k}].player"), format!("{id} is not strategic")))?;
                let strategy = game
                    .strategy_by_label(player, &p.strategy)
                    .map_err(|e| Error::field(format!("perturbation[{k}].strategy"), e.to_string()))?;
                Ok(PerturbationEvent {
                    time: p.time,
                    player,
                    strategy,
                    delta: p.delta,
                })
            })
            .collect()
    }

    pub fn matchings(&self, game: &Game) -> Result<Vec<Matching>> {
        let inst = game.instance();
        match &self.stability.matchings {
            None => Ok(game.outcomes().to_vec()),
            Some(ms) => ms
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    Matching::from_label(m, inst.n_men(), inst.n_women())
                        .map_err(|e| Error::field(format!("stability.matchings[{k}]"), e.to_string()))
                })
                .collect(),
        }
    }

    pub fn output_dir(&self) -> &str {
        self.output.dir.as_deref().unwrap_or("out")
    }

    pub fn svg(&self) -> bool {
        self.output.svg.unwrap_or(false)
    }

    pub fn sweep_file(&self) -> &str {
        self.sweep.file.as_deref().unwrap_or("sweep.csv")
    }

    /// Sweep over the instance's size; dynamics come from `[dynamics]`
    /// except the horizon, which defaults to 200.
    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let profile = self.profile()?;
        if profile.n_men() != profile.n_women() {
            return Err(Error::field("instance", "sweeps need a balanced market"));
        }
        let n = profile.n_men();
        let base = SweepConfig::default();
        let fixed = match &self.sweep.fixed {
            None if n == 3 => base.fixed.clone(),
            None => vec![(PlayerId::man(0), Preference::from_lex_index(n, 0)?)],
            Some(map) => map
                .iter()
                .map(|(who, spec)| {
                    let field = format!("sweep.fixed.{who}");
                    let id: PlayerId = who.parse().map_err(|_| Error::field(&field, "not a player id"))?;
                    Ok((id, parse_pref(spec, id.side, n, &field)?))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let strategic = self.strategic_set()?;
        let players = strategic.players();
        let side = players[0].side;
        if players.len() != n || players.iter().any(|p| p.side != side) {
            return Err(Error::field("instance.strategic", "sweeps need one whole side strategic"));
        }
        let mut dynamics = self.dynamics_spec()?;
        dynamics.t_max = self.sweep.t_max.unwrap_or(base.dynamics.t_max);
        dynamics.stop_at_stationary = true;
        let config = SweepConfig {
            n,
            fixed,
            strategic: side,
            proposing: self.proposing()?,
            utility: self.utility()?,
            dynamics,
            threads: self.sweep.threads,
            cross_check: self.sweep.cross_check.unwrap_or(false),
        };
        config.validate().map_err(|e| match e {
            Error::ConfigValidation { .. } => e,
            Error::InvalidDynamics(m) => Error::field("sweep.t_max", m),
            other => Error::field("sweep", other.to_string()),
        })?;
        Ok(config)
    }
}

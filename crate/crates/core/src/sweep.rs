//! Batch runs over every preference profile with some players held fixed.

use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate, matchings_on_support, DynamicsSpec, PopulationState, Trajectory};
use crate::error::{Error, Result};
use crate::game::{build_game, Game, StrategicSet, UtilityFunction};
use crate::matching::{is_stable, factorial, Matching, PlayerId, Preference, PreferenceProfile, Side};
use crate::stability::{check_asymptotic_stability, SearchLimits};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Players per side.
    pub n: usize,
    pub fixed: Vec<(PlayerId, Preference)>,
    pub strategic: Side,
    pub proposing: Side,
    pub utility: UtilityFunction,
    pub dynamics: DynamicsSpec,
    pub threads: Option<usize>,
    /// Run the asymptotic-stability check on every unique final matching.
    pub cross_check: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: 3,
            fixed: vec![(PlayerId::man(0), Preference::from_lex_index(3, 0).expect("M1"))],
            strategic: Side::Women,
            proposing: Side::Men,
            utility: UtilityFunction::conv(),
            dynamics: DynamicsSpec {
                t_max: 200.0,
                stop_at_stationary: true,
                ..DynamicsSpec::default()
            },
            threads: None,
            cross_check: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::field("sweep.n", "market must have players"));
        }
        if self.utility.len() != self.n {
            return Err(Error::field(
                "utility",
                format!("{} values for {} partners", self.utility.len(), self.n),
            ));
        }
        for (k, (p, pref)) in self.fixed.iter().enumerate() {
            if p.index >= self.n || pref.len() != self.n {
                return Err(Error::field("sweep.fixed", format!("{p} does not fit a {0}x{0} market", self.n)));
            }
            if self.fixed[..k].iter().any(|(q, _)| q == p) {
                return Err(Error::field("sweep.fixed", format!("{p} fixed twice")));
            }
        }
        self.dynamics.validate()
    }

    /// Players whose preference varies, men first.
    pub fn free_players(&self) -> Vec<PlayerId> {
        (0..self.n)
            .map(PlayerId::man)
            .chain((0..self.n).map(PlayerId::woman))
            .filter(|p| !self.fixed.iter().any(|(q, _)| q == p))
            .collect()
    }

    pub fn n_profiles(&self) -> usize {
        factorial(self.n).pow(self.free_players().len() as u32)
    }

    /// The `index`-th profile: free players' lexicographic indices as
    /// digits, last player fastest.
    pub fn profile(&self, mut index: usize) -> Result<PreferenceProfile> {
        let base = factorial(self.n);
        let free = self.free_players();
        let mut digits = vec![0usize; free.len()];
        for d in digits.iter_mut().rev() {
            *d = index % base;
            index /= base;
        }
        let first = Preference::from_lex_index(self.n, 0)?;
        let mut profile = PreferenceProfile::new(vec![first.clone(); self.n], vec![first; self.n])?;
        for (p, pref) in &self.fixed {
            profile.set_pref(*p, pref.clone())?;
        }
        for (p, d) in free.iter().zip(digits) {
            profile.set_pref(*p, Preference::from_lex_index(self.n, d)?)?;
        }
        Ok(profile)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Converged,
    Fluctuating,
    Diverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub profile: String,
    pub status: Status,
    pub stationary_t: Option<f64>,
    pub survivors: Vec<Vec<String>>,
    pub final_matchings: Vec<Matching>,
    /// Only set for converged runs.
    pub unique_matching: Option<bool>,
    /// Set when the cross-check ran: the unique matching was found
    /// asymptotically stable yet classically unstable.
    pub violation: Option<bool>,
}

/// Status and final matching set of a finished run. Stationarity has to be
/// reached at or before the last step; the support is the survivor set of
/// the final state.
pub fn classify_outcome(game: &Game, run: &Result<Trajectory>) -> (Status, Option<f64>, Vec<Vec<usize>>, Vec<Matching>) {
    match run {
        Err(_) => (Status::Diverged, None, Vec::new(), Vec::new()),
        Ok(traj) => {
            let matchings = matchings_on_support(game, &traj.final_survivors);
            match traj.stationary_onsets.last() {
                Some(&t) if traj.is_stationary_at_end() => (Status::Converged, Some(t), traj.final_survivors.clone(), matchings),
                _ => (Status::Fluctuating, None, traj.final_survivors.clone(), matchings),
            }
        }
    }
}

fn run_one(config: &SweepConfig, index: usize) -> Result<SweepOutcome> {
    let profile = config.profile(index)?;
    let strategic = StrategicSet::side(config.strategic, config.n)?;
    let game = build_game(&profile, &strategic, &config.utility, config.proposing)?;
    let x0 = PopulationState::uniform(game.shape());
    let run = integrate(&game, &config.dynamics, &x0, &[]);
    if let Err(e) = &run {
        if !matches!(e, Error::Diverged { .. }) {
            return Err(Error::InvalidDynamics(e.to_string()));
        }
    }
    let (status, stationary_t, survivors, final_matchings) = classify_outcome(&game, &run);
    let unique_matching = (status == Status::Converged).then_some(final_matchings.len() == 1);
    let violation = if config.cross_check && unique_matching == Some(true) {
        let m = &final_matchings[0];
        let asym = check_asymptotic_stability(&game, m, &SearchLimits::default())?.holds();
        Some(asym && !is_stable(m, &profile)?)
    } else {
        None
    };
    Ok(SweepOutcome {
        profile: profile.label(),
        status,
        stationary_t,
        survivors: survivors
            .iter()
            .enumerate()
            .map(|(i, s)| s.iter().map(|&h| game.strategy_label(i, h)).collect())
            .collect(),
        final_matchings,
        unique_matching,
        violation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Record {
    profile_labels: String,
    status: Status,
    stationary_t: String,
    survivors_per_player: String,
    final_matchings: String,
    unique_matching: String,
}

fn to_record(o: &SweepOutcome) -> Record {
    Record {
        profile_labels: o.profile.clone(),
        status: o.status,
        stationary_t: o.stationary_t.map(|t| format!("{t:.2}")).unwrap_or_default(),
        survivors_per_player: o.survivors.iter().map(|s| s.join(" ")).collect::<Vec<_>>().join("|"),
        final_matchings: o.final_matchings.iter().map(Matching::label).collect::<Vec<_>>().join(" "),
        unique_matching: o.unique_matching.map(|u| u.to_string()).unwrap_or_default(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub total: usize,
    pub converged: usize,
    pub fluctuating: usize,
    pub diverged: usize,
    /// Converged runs with more than one final matching.
    pub non_unique: usize,
    pub violations: usize,
    /// Records found in the output file and not recomputed.
    pub resumed: usize,
}

impl SweepSummary {
    fn add(&mut self, status: Status, unique: Option<bool>, violation: Option<bool>) {
        self.total += 1;
        match status {
            Status::Converged => self.converged += 1,
            Status::Fluctuating => self.fluctuating += 1,
            Status::Diverged => self.diverged += 1,
        }
        if unique == Some(false) {
            self.non_unique += 1;
        }
        if violation == Some(true) {
            self.violations += 1;
        }
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        b = b.num_threads(t);
    }
    b.build().map_err(|e| Error::InvalidDynamics(format!("thread pool: {e}")))
}

/// Run the profiles with indices in `range`, in order.
pub fn run_profiles(config: &SweepConfig, range: std::ops::Range<usize>) -> Result<Vec<SweepOutcome>> {
    config.validate()?;
    pool(config.threads)?.install(|| range.into_par_iter().map(|i| run_one(config, i)).collect())
}

pub fn run_sweep(config: &SweepConfig) -> Result<(Vec<SweepOutcome>, SweepSummary)> {
    let outcomes = run_profiles(config, 0..config.n_profiles())?;
    let mut summary = SweepSummary::default();
    for o in &outcomes {
        summary.add(o.status, o.unique_matching, o.violation);
    }
    Ok((outcomes, summary))
}

const CHUNK: usize = 256;

/// Drop a trailing partial line left by an interrupted write.
fn trim_partial_line(file: &mut File) -> Result<String> {
    let mut text = String::new();
    file.read_to_string(&mut text)?;
    if !text.is_empty() && !text.ends_with('\n') {
        let keep = text.rfind('\n').map_or(0, |p| p + 1);
        text.truncate(keep);
        file.set_len(keep as u64)?;
    }
    Ok(text)
}

/// Run the sweep, appending one CSV record per profile to `path` in
/// profile order. Records already present are kept and skipped, so an
/// interrupted sweep resumes where it stopped. The first line carries
/// `# config_digest=<digest>`; resuming under another digest is refused.
pub fn run_sweep_to_file(config: &SweepConfig, path: &Path, digest: &str) -> Result<SweepSummary> {
    config.validate()?;
    let header_line = format!("# config_digest={digest}\n");
    let mut file = OpenOptions::new().read(true).append(true).create(true).open(path)?;
    let text = trim_partial_line(&mut file)?;

    let mut summary = SweepSummary::default();
    if text.is_empty() {
        file.write_all(header_line.as_bytes())?;
    } else if !text.starts_with(&header_line) {
        return Err(Error::Record(format!(
            "{} was written for a different configuration",
            path.display()
        )));
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut done = 0usize;
    let mut wrote_header = reader.headers().map(|h| !h.is_empty()).unwrap_or(false);
    for rec in reader.deserialize::<Record>() {
        let rec = rec.map_err(|e| Error::Record(e.to_string()))?;
        let expected = config.profile(done)?.label();
        if rec.profile_labels != expected {
            return Err(Error::Record(format!(
                "record {done} is {}, expected {expected}",
                rec.profile_labels
            )));
        }
        let unique = match rec.unique_matching.as_str() {
            "" => None,
            s => Some(s == "true"),
        };
        summary.add(rec.status, unique, None);
        done += 1;
    }
    summary.resumed = done;

    file.seek(SeekFrom::End(0))?;
    let total = config.n_profiles();
    let workers = pool(config.threads)?;
    let mut start = done;
    while start < total {
        let end = (start + CHUNK).min(total);
        let batch: Vec<SweepOutcome> =
            workers.install(|| (start..end).into_par_iter().map(|i| run_one(config, i)).collect::<Result<_>>())?;
        let mut writer = csv::WriterBuilder::new().has_headers(!wrote_header).from_writer(Vec::new());
        for o in &batch {
            writer.serialize(to_record(o)).map_err(|e| Error::Record(e.to_string()))?;
            summary.add(o.status, o.unique_matching, o.violation);
        }
        wrote_header = true;
        let bytes = writer.into_inner().map_err(|e| Error::Record(e.to_string()))?;
        file.write_all(&bytes)?;
        file.flush()?;
        start = end;
    }
    Ok(summary)
}

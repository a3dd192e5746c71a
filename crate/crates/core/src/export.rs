//! CSV, JSON and SVG output. Every file starts with the digest of the
//! configuration that produced it.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::game::Game;

/// Shortest `%.9g`-style rendering: nine significant digits, trailing zeros
/// dropped, exponent form outside `1e-5 ..= 1e9`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn digest_line(digest: &str) -> String {
    format!("# config_digest={digest}\n")
}

fn csv_error(e: csv::Error) -> Error {
    Error::Record(e.to_string())
}

fn finish(out: &mut impl Write, digest: &str, w: csv::Writer<Vec<u8>>) -> Result<()> {
    out.write_all(digest_line(digest).as_bytes())?;
    out.write_all(&w.into_inner().map_err(|e| Error::Record(e.to_string()))?)?;
    Ok(())
}

/// `t,player,strategy,share`, one row per recorded sample and strategy.
pub fn write_shares_csv(out: &mut impl Write, game: &Game, traj: &Trajectory, digest: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "player", "strategy", "share"]).map_err(csv_error)?;
    for (t, state) in traj.times.iter().zip(&traj.states) {
        let t = format_number(*t);
        for i in 0..game.n_players() {
            let player = game.player_id(i).to_string();
            for (h, x) in state.player(i).iter().enumerate() {
                w.write_record([t.as_str(), &player, &game.strategy_label(i, h), &format_number(*x)])
                    .map_err(csv_error)?;
            }
        }
    }
    finish(out, digest, w)
}

/// `t,matching,probability` over the outcomes of the game.
pub fn write_matchings_csv(out: &mut impl Write, traj: &Trajectory, digest: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "matching", "probability"]).map_err(csv_error)?;
    let labels: Vec<String> = traj.outcomes.iter().map(|m| m.label()).collect();
    for (t, probs) in traj.times.iter().zip(&traj.matching_shares) {
        let t = format_number(*t);
        for (label, p) in labels.iter().zip(probs) {
            w.write_record([t.as_str(), label, &format_number(*p)]).map_err(csv_error)?;
        }
    }
    finish(out, digest, w)
}

/// One row per pure profile: reports, resulting matching, payoffs.
pub fn write_payoffs_csv(out: &mut impl Write, game: &Game, digest: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ids: Vec<String> = (0..game.n_players()).map(|i| game.player_id(i).to_string()).collect();
    let header: Vec<String> = ids
        .iter()
        .cloned()
        .chain(std::iter::once("matching".to_string()))
        .chain(ids.iter().map(|p| format!("payoff_{p}")))
        .collect();
    w.write_record(&header).map_err(csv_error)?;
    for r in 0..game.n_profiles() {
        let mut row = game.profile_labels(r);
        row.push(game.outcome(r).label());
        row.extend((0..game.n_players()).map(|i| format_number(game.payoffs().get(i, r))));
        w.write_record(&row).map_err(csv_error)?;
    }
    finish(out, digest, w)
}

#[derive(Serialize)]
struct Wrapped<'a, T: Serialize> {
    config_digest: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON object with a `config_digest` field next to `body`'s fields.
pub fn write_json<T: Serialize>(out: &mut impl Write, body: &T, digest: &str) -> Result<()> {
    let text = serde_json::to_string_pretty(&Wrapped {
        config_digest: digest,
        body,
    })
    .map_err(|e| Error::Record(e.to_string()))?;
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}

const PANEL_W: f64 = 760.0;
const PANEL_H: f64 = 200.0;
const MARGIN_L: f64 = 50.0;
const MARGIN_R: f64 = 110.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 30.0;
const MAX_POINTS: usize = 1500;
const COLORS: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn panel(svg: &mut String, top: f64, title: &str, times: &[f64], series: &[(String, Vec<f64>)]) {
    let t0 = times.first().copied().unwrap_or(0.0);
    let t1 = times.last().copied().unwrap_or(1.0).max(t0 + 1e-12);
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let x = |t: f64| MARGIN_L + (t - t0) / (t1 - t0) * plot_w;
    let y = |v: f64| top + MARGIN_T + (1.0 - v) * plot_h;
    let _ = writeln!(
        svg,
        r#"<text x="{MARGIN_L}" y="{:.1}" font-size="13">{title}</text>"#,
        top + 16.0
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_L}" y="{:.1}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444"/>"##,
        top + MARGIN_T
    );
    for v in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{v}</text>"#,
            MARGIN_L - 4.0,
            y(v) + 3.0
        );
    }
    for t in [t0, (t0 + t1) / 2.0, t1] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
            x(t),
            top + PANEL_H - 12.0,
            format_number((t * 100.0).round() / 100.0)
        );
    }
    let step = times.len().div_ceil(MAX_POINTS).max(1);
    for (k, (name, values)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut points = String::new();
        for (j, (t, v)) in times.iter().zip(values).enumerate() {
            if j % step == 0 || j + 1 == times.len() {
                let _ = write!(points, "{:.1},{:.1} ", x(*t), y(*v));
            }
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.3" points="{}"/>"#,
            points.trim_end()
        );
        let ly = top + MARGIN_T + 12.0 + 14.0 * k as f64;
        let lx = PANEL_W - MARGIN_R + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="11">{name}</text>"#,
            ly - 4.0,
            lx + 16.0,
            ly - 4.0,
            lx + 20.0,
            ly
        );
    }
}

/// Shares of every strategic player and the outcome distribution, one
/// panel each, stacked vertically.
pub fn trajectory_svg(game: &Game, traj: &Trajectory, digest: &str) -> String {
    let d = game.n_players();
    let height = PANEL_H * (d + 1) as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_W}" height="{height}" viewBox="0 0 {PANEL_W} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, "<!-- config_digest={digest} -->");
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for i in 0..d {
        let series: Vec<(String, Vec<f64>)> = (0..game.shape()[i])
            .map(|h| (game.strategy_label(i, h), traj.states.iter().map(|s| s.share(i, h)).collect()))
            .collect();
        panel(&mut svg, PANEL_H * i as f64, &format!("player {}", game.player_id(i)), &traj.times, &series);
    }
    let series: Vec<(String, Vec<f64>)> = traj
        .outcomes
        .iter()
        .enumerate()
        .map(|(k, m)| (m.label(), traj.matching_shares.iter().map(|p| p[k]).collect()))
        .collect();
    panel(&mut svg, PANEL_H * d as f64, "matchings", &traj.times, &series);
    svg.push_str("</svg>\n");
    svg
}

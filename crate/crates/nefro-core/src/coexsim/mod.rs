//! MAC-abstraction coexistence simulator.
//!
//! Generates `(SINR, capacity)` feature points for dense LTE-U/LAA + Wi-Fi
//! coexistence scenarios: 6 nodes at 23 dBm in the 5 GHz band, inter-node
//! distances 5–10 m, bandwidths 5/10/15/20 MHz, with LBT (LAA), duty-cycle
//! CSAT (LTE-U), and CSMA (Wi-Fi) channel access abstracted to airtime
//! shares and collision-overlap factors.
//!
//! The generator is deterministic: identical `(config, n_samples, mac)`
//! inputs produce bit-identical datasets. The capacity written into every
//! feature point equals [`shannon_capacity`] applied to that point's own
//! SINR, bandwidth, and effective airtime before measurement noise is
//! injected; the underlying capacity-vs-SINR curve the generator targets is
//! quadratic in dB (see [`ground_truth_cir`]), so downstream model
//! selection has a recoverable truth.

mod generate;
mod link;
mod mac;

pub use generate::{
    contaminate, simulate_scenario, simulate_scenario_traced, EpochTrace,
};
pub use link::{
    client_positions, compute_sinr, dbm_to_mw, mw_to_dbm, noise_floor_dbm,
    shannon_capacity, Propagation,
};
pub use mac::channel_airtime;
pub(crate) use mac::{airtime_shares, collision_overlap, sensing_matrix, NodeRole};

use crate::seed::{mix2, TAG_PLACEMENT, TAG_SCENARIO};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Scenario enumeration
// ---------------------------------------------------------------------------

/// Unlicensed LTE variant under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LteVariant {
    #[serde(rename = "LTE_U")]
    LteU,
    #[serde(rename = "LAA")]
    Laa,
}

impl LteVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            LteVariant::LteU => "LTE_U",
            LteVariant::Laa => "LAA",
        }
    }
}

/// Coexisting Wi-Fi standard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WifiVariant {
    #[serde(rename = "IEEE80211N")]
    Ieee80211N,
    #[serde(rename = "IEEE80211AC")]
    Ieee80211Ac,
}

impl WifiVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            WifiVariant::Ieee80211N => "IEEE80211N",
            WifiVariant::Ieee80211Ac => "IEEE80211AC",
        }
    }
}

/// Which variable acts as the regression predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Predictor {
    #[serde(rename = "SINR")]
    Sinr,
    #[serde(rename = "CAPACITY")]
    Capacity,
}

impl Predictor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Predictor::Sinr => "SINR",
            Predictor::Capacity => "CAPACITY",
        }
    }
}

/// Valid channel bandwidths in MHz.
pub const BANDWIDTHS_MHZ: [u32; 4] = [5, 10, 15, 20];

/// Number of distinct test scenarios (LTE × Wi-Fi × bandwidth × predictor).
pub const SCENARIO_COUNT: usize = 32;

// ---------------------------------------------------------------------------
// Configuration types
// ---------------------------------------------------------------------------

/// One of the 32 test scenarios plus topology/radio parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub lte_variant: LteVariant,
    pub wifi_variant: WifiVariant,
    pub bandwidth_mhz: u32,
    pub predictor: Predictor,
    #[serde(default = "default_node_count")]
    pub node_count: usize,
    #[serde(default = "default_tx_power")]
    pub tx_power_dbm: f64,
    #[serde(default = "default_carrier")]
    pub carrier_ghz: f64,
    #[serde(default = "default_inter_min")]
    pub inter_node_min_m: f64,
    #[serde(default = "default_inter_max")]
    pub inter_node_max_m: f64,
    pub seed: u64,
}

fn default_node_count() -> usize {
    6
}
fn default_tx_power() -> f64 {
    23.0
}
fn default_carrier() -> f64 {
    5.0
}
fn default_inter_min() -> f64 {
    5.0
}
fn default_inter_max() -> f64 {
    10.0
}

impl ScenarioConfig {
    /// Scenario with default topology parameters (6 nodes, 23 dBm, 5 GHz,
    /// 5–10 m spacing).
    pub fn new(
        lte_variant: LteVariant,
        wifi_variant: WifiVariant,
        bandwidth_mhz: u32,
        predictor: Predictor,
        seed: u64,
    ) -> Self {
        Self {
            lte_variant,
            wifi_variant,
            bandwidth_mhz,
            predictor,
            node_count: default_node_count(),
            tx_power_dbm: default_tx_power(),
            carrier_ghz: default_carrier(),
            inter_node_min_m: default_inter_min(),
            inter_node_max_m: default_inter_max(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !BANDWIDTHS_MHZ.contains(&self.bandwidth_mhz) {
            return Err(Error::InvalidConfig(format!(
                "bandwidth_mhz {} not in {:?}",
                self.bandwidth_mhz, BANDWIDTHS_MHZ
            )));
        }
        if self.node_count < 2 {
            return Err(Error::InvalidConfig(format!(
                "node_count {} < 2",
                self.node_count
            )));
        }
        if self.inter_node_min_m > self.inter_node_max_m || self.inter_node_min_m <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "inter-node interval [{}, {}] invalid",
                self.inter_node_min_m, self.inter_node_max_m
            )));
        }
        if !(self.carrier_ghz > 0.0) || !self.tx_power_dbm.is_finite() {
            return Err(Error::InvalidConfig("carrier/tx power invalid".into()));
        }
        Ok(())
    }

    /// Canonical scenario id in 1..=32.
    ///
    /// `id = 1 + predictor + 2*bandwidth_index + 8*wifi + 16*lte`, with
    /// `LTE_U=0, LAA=1`, `IEEE80211N=0, IEEE80211AC=1`, bandwidth index in
    /// declaration order of [`BANDWIDTHS_MHZ`], `SINR=0, CAPACITY=1`.
    pub fn scenario_id(&self) -> usize {
        let lte = match self.lte_variant {
            LteVariant::LteU => 0,
            LteVariant::Laa => 1,
        };
        let wifi = match self.wifi_variant {
            WifiVariant::Ieee80211N => 0,
            WifiVariant::Ieee80211Ac => 1,
        };
        let bw = BANDWIDTHS_MHZ
            .iter()
            .position(|&b| b == self.bandwidth_mhz)
            .expect("validated bandwidth");
        let pred = match self.predictor {
            Predictor::Sinr => 0,
            Predictor::Capacity => 1,
        };
        1 + pred + 2 * bw + 8 * wifi + 16 * lte
    }

    /// Inverse of [`ScenarioConfig::scenario_id`]; the per-scenario seed is
    /// derived from `root_seed` so sibling scenarios get independent streams.
    pub fn from_id(id: usize, root_seed: u64) -> Result<Self> {
        if !(1..=SCENARIO_COUNT).contains(&id) {
            return Err(Error::InvalidConfig(format!("scenario id {id} not in 1..=32")));
        }
        let z = id - 1;
        let pred = if z % 2 == 0 { Predictor::Sinr } else { Predictor::Capacity };
        let bw = BANDWIDTHS_MHZ[(z / 2) % 4];
        let wifi = if (z / 8) % 2 == 0 {
            WifiVariant::Ieee80211N
        } else {
            WifiVariant::Ieee80211Ac
        };
        let lte = if (z / 16) % 2 == 0 { LteVariant::LteU } else { LteVariant::Laa };
        Ok(Self::new(lte, wifi, bw, pred, mix2(root_seed, TAG_SCENARIO ^ id as u64)))
    }

    /// All 32 scenarios in id order.
    pub fn all_scenarios(root_seed: u64) -> Vec<Self> {
        (1..=SCENARIO_COUNT)
            .map(|id| Self::from_id(id, root_seed).expect("id in range"))
            .collect()
    }
}

/// MAC-layer abstraction parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacParams {
    /// LAA listen-before-talk energy-detection threshold (dBm).
    #[serde(default = "default_laa_ed")]
    pub laa_ed_dbm: f64,
    /// Wi-Fi energy-detection threshold for non-Wi-Fi signals (dBm).
    #[serde(default = "default_wifi_ed")]
    pub wifi_ed_dbm: f64,
    /// Wi-Fi preamble-detection threshold for Wi-Fi signals (dBm).
    #[serde(default = "default_wifi_preamble")]
    pub wifi_preamble_dbm: f64,
    /// Maximum LAA transmission opportunity (ms).
    #[serde(default = "default_txop")]
    pub laa_txop_ms: f64,
    /// Fraction of time an LTE-U node's duty cycle is ON when coexisting.
    #[serde(default = "default_duty")]
    pub lteu_duty_on_fraction: f64,
    /// Slot duration (ms).
    #[serde(default = "default_slot")]
    pub slot_ms: f64,
}

fn default_laa_ed() -> f64 {
    -72.0
}
fn default_wifi_ed() -> f64 {
    -62.0
}
fn default_wifi_preamble() -> f64 {
    -82.0
}
fn default_txop() -> f64 {
    8.0
}
fn default_duty() -> f64 {
    0.5
}
fn default_slot() -> f64 {
    0.009
}

impl Default for MacParams {
    fn default() -> Self {
        Self {
            laa_ed_dbm: default_laa_ed(),
            wifi_ed_dbm: default_wifi_ed(),
            wifi_preamble_dbm: default_wifi_preamble(),
            laa_txop_ms: default_txop(),
            lteu_duty_on_fraction: default_duty(),
            slot_ms: default_slot(),
        }
    }
}

impl MacParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.laa_txop_ms > 0.0) {
            return Err(Error::InvalidConfig("laa_txop_ms must be > 0".into()));
        }
        if !(self.lteu_duty_on_fraction > 0.0 && self.lteu_duty_on_fraction <= 1.0) {
            return Err(Error::InvalidConfig(
                "lteu_duty_on_fraction must be in (0, 1]".into(),
            ));
        }
        if !(self.slot_ms > 0.0) {
            return Err(Error::InvalidConfig("slot_ms must be > 0".into()));
        }
        Ok(())
    }
}

/// Dispersion knobs of the generator: shadowing, jitter, measurement noise,
/// and heavy-tail events. These are synthetic stand-ins for unpublished
/// testbed conditions; LTE-U draws wider SINR noise and more fade/glitch
/// events than LAA so downstream analytics have a signal to detect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionParams {
    /// Log-normal shadowing sigma (dB).
    pub shadowing_sigma_db: f64,
    /// Uniform jitter half-width applied to the LTE-U duty cycle.
    pub duty_jitter: f64,
    /// Fractional downward jitter on contention airtime shares.
    pub airtime_jitter: f64,
    /// SINR measurement-noise sigma (dB) for LAA scenarios.
    pub sinr_noise_db: f64,
    /// LTE-U multiplier on `sinr_noise_db`.
    pub lteu_noise_multiplier: f64,
    /// Capacity measurement-noise sigma as a fraction of bandwidth.
    pub capacity_noise_frac: f64,
    /// Per-epoch deep-fade probability for LAA scenarios.
    pub deep_fade_prob: f64,
    /// LTE-U multiplier on fade and glitch probabilities.
    pub lteu_event_multiplier: f64,
    /// Depth of a deep fade (dB subtracted from network SINR).
    pub deep_fade_db: f64,
    /// Per-epoch probability of a gross capacity glitch for LAA scenarios.
    pub glitch_prob: f64,
    /// Glitch sigma as a multiple of the capacity noise sigma.
    pub glitch_scale: f64,
}

impl Default for DispersionParams {
    fn default() -> Self {
        Self {
            shadowing_sigma_db: 4.0,
            duty_jitter: 0.1,
            airtime_jitter: 0.05,
            sinr_noise_db: 1.0,
            lteu_noise_multiplier: 1.5,
            capacity_noise_frac: 0.02,
            deep_fade_prob: 0.02,
            lteu_event_multiplier: 2.5,
            deep_fade_db: 12.0,
            glitch_prob: 0.012,
            glitch_scale: 8.0,
        }
    }
}

impl DispersionParams {
    /// All stochastic dispersion disabled; the generator becomes an exact
    /// function of the scenario geometry.
    pub fn none() -> Self {
        Self {
            shadowing_sigma_db: 0.0,
            duty_jitter: 0.0,
            airtime_jitter: 0.0,
            sinr_noise_db: 0.0,
            lteu_noise_multiplier: 1.0,
            capacity_noise_frac: 0.0,
            deep_fade_prob: 0.0,
            lteu_event_multiplier: 1.0,
            deep_fade_db: 0.0,
            glitch_prob: 0.0,
            glitch_scale: 0.0,
        }
    }
}

// ---------------------------------------------------------------------------
// Data types
// ---------------------------------------------------------------------------

/// One observation pair with its scenario tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeaturePoint {
    pub sinr_db: f64,
    pub capacity_mbps: f64,
    pub scenario_id: usize,
    pub sample_index: usize,
}

/// An ordered set of feature points for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub config: ScenarioConfig,
    pub points: Vec<FeaturePoint>,
}

impl Dataset {
    /// Number of training points.
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Feature dimensionality (univariate CIR study).
    pub fn d(&self) -> usize {
        1
    }

    /// Predictor values in the configured direction.
    pub fn xs(&self) -> Vec<f64> {
        match self.config.predictor {
            Predictor::Sinr => self.points.iter().map(|p| p.sinr_db).collect(),
            Predictor::Capacity => self.points.iter().map(|p| p.capacity_mbps).collect(),
        }
    }

    /// Response values in the configured direction.
    pub fn ys(&self) -> Vec<f64> {
        match self.config.predictor {
            Predictor::Sinr => self.points.iter().map(|p| p.capacity_mbps).collect(),
            Predictor::Capacity => self.points.iter().map(|p| p.sinr_db).collect(),
        }
    }

    /// CSV serialization: UTF-8, LF line endings, 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.points.len() + 1));
        out.push_str(
            "scenario_id,lte_variant,wifi_variant,bandwidth_mhz,predictor,sample_index,sinr_db,capacity_mbps\n",
        );
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                p.scenario_id,
                self.config.lte_variant.as_str(),
                self.config.wifi_variant.as_str(),
                self.config.bandwidth_mhz,
                self.config.predictor.as_str(),
                p.sample_index,
                format_sig9(p.sinr_db),
                format_sig9(p.capacity_mbps),
            ));
        }
        out
    }

    /// Parse a dataset back from its CSV form. The scenario config is
    /// reconstructed from the embedded id via [`ScenarioConfig::from_id`].
    pub fn from_csv(text: &str, root_seed: u64) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty csv".into()))?;
        if !header.starts_with("scenario_id,") {
            return Err(Error::Parse(format!("unexpected header: {header}")));
        }
        let mut points = Vec::new();
        let mut id = None;
        for (ln, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 8 {
                return Err(Error::Parse(format!("line {}: expected 8 columns", ln + 2)));
            }
            let sid: usize = cols[0]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad scenario_id", ln + 2)))?;
            id.get_or_insert(sid);
            if id != Some(sid) {
                return Err(Error::Parse("mixed scenario ids in one file".into()));
            }
            let parse_f = |s: &str, what: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad {what}", ln + 2)))
            };
            points.push(FeaturePoint {
                scenario_id: sid,
                sample_index: cols[5]
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad sample_index", ln + 2)))?,
                sinr_db: parse_f(cols[6], "sinr_db")?,
                capacity_mbps: parse_f(cols[7], "capacity_mbps")?,
            });
        }
        let id = id.ok_or_else(|| Error::Parse("csv has no data rows".into()))?;
        Ok(Dataset {
            config: ScenarioConfig::from_id(id, root_seed)?,
            points,
        })
    }
}

/// Format with 9 significant digits in positional notation.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0.0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

// ---------------------------------------------------------------------------
// Ground-truth CIR
// ---------------------------------------------------------------------------

/// Quadratic capacity-vs-SINR curve targeted by the generator, as
/// `[c0, c1, c2]` with `capacity = c0 + c1*s + c2*s^2` (s in dB, capacity
/// in Mbps). Scaled by bandwidth, with a higher cap for 802.11ac.
pub fn ground_truth_cir(config: &ScenarioConfig) -> [f64; 3] {
    let cap_scale = match config.wifi_variant {
        WifiVariant::Ieee80211N => 1.0,
        WifiVariant::Ieee80211Ac => 1.15,
    };
    let b = config.bandwidth_mhz as f64 * cap_scale;
    [0.10 * b, 0.055 * b, -0.00045 * b]
}

/// Effective-SINR offset (dB) applied to 802.11ac scenarios as a coarse
/// beamforming proxy.
pub fn wifi_sinr_offset_db(wifi: WifiVariant) -> f64 {
    match wifi {
        WifiVariant::Ieee80211N => 0.0,
        WifiVariant::Ieee80211Ac => 3.0,
    }
}

// ---------------------------------------------------------------------------
// Node placement
// ---------------------------------------------------------------------------

/// Candidate budget for uniform rejection sampling in [`place_nodes`].
const PLACEMENT_SQUARE_BUDGET: usize = 60_000;
/// Template-construction budget in [`place_nodes`].
const PLACEMENT_RING_BUDGET: usize = 20_000;
const PLACEMENT_EPS: f64 = 1e-9;

fn pairwise_ok(points: &[[f64; 2]], lo: f64, hi: f64) -> bool {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = ((points[i][0] - points[j][0]).powi(2)
                + (points[i][1] - points[j][1]).powi(2))
            .sqrt();
            if d < lo - PLACEMENT_EPS || d > hi + PLACEMENT_EPS {
                return false;
            }
        }
    }
    true
}

/// Place `node_count` nodes so every pairwise distance lies within
/// `[inter_node_min_m, inter_node_max_m]`. Deterministic for a fixed seed.
///
/// Two samplers run in turn: uniform rejection inside a square of side
/// `inter_node_max_m` (effective when the interval is loose), then a
/// jittered ring-plus-center template (the only shapes with usable volume
/// when `max ≈ 2·min`, as in the default 5–10 m dense cluster). Exhausting
/// both budgets signals over-constrained geometry.
pub fn place_nodes(config: &ScenarioConfig) -> Result<Vec<[f64; 2]>> {
    let n = config.node_count;
    let (lo, hi) = (config.inter_node_min_m, config.inter_node_max_m);
    if lo > hi || lo <= 0.0 {
        return Err(Error::InvalidConfig("inter-node interval invalid".into()));
    }
    if n == 1 {
        return Ok(vec![[0.0, 0.0]]);
    }
    // Degenerate interval: the feasible set has measure zero, so sampling
    // cannot hit it. Two nodes admit an exact construction.
    if lo == hi && n == 2 {
        return Ok(vec![[0.0, 0.0], [lo, 0.0]]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(mix2(config.seed, TAG_PLACEMENT));
    let mut attempts = 0usize;

    // Square rejection.
    let mut placed: Vec<[f64; 2]> = Vec::with_capacity(n);
    while attempts < PLACEMENT_SQUARE_BUDGET {
        attempts += 1;
        let cand = [rng.random_range(0.0..hi), rng.random_range(0.0..hi)];
        let ok = placed.iter().all(|p| {
            let d = ((p[0] - cand[0]).powi(2) + (p[1] - cand[1]).powi(2)).sqrt();
            d >= lo - PLACEMENT_EPS && d <= hi + PLACEMENT_EPS
        });
        if ok {
            placed.push(cand);
            if placed.len() == n {
                return Ok(placed);
            }
        } else if placed.len() > 1 && attempts % 10_000 == 0 {
            // Restart: an unlucky prefix can wall off the feasible region.
            placed.truncate(1);
        }
    }

    // Ring template: one center node, n-1 on a jittered ring.
    let ring = n - 1;
    for _ in 0..PLACEMENT_RING_BUDGET {
        attempts += 1;
        let r = rng.random_range(lo..=(lo + 0.06 * (hi - lo)).max(lo * 1.000_001));
        let min_gap = 2.0 * (lo / (2.0 * r)).min(1.0).asin();
        let slack = std::f64::consts::TAU - min_gap * ring as f64;
        if slack < 0.0 {
            break;
        }
        let rotation = rng.random_range(0.0..std::f64::consts::TAU);
        // Distribute the angular slack over the gaps.
        let mut gaps: Vec<f64> = (0..ring).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = gaps.iter().sum();
        for g in &mut gaps {
            *g = min_gap + *g / total * slack;
        }
        let mut pts = vec![[0.0, 0.0]];
        let mut theta = rotation;
        for g in gaps {
            pts.push([r * theta.cos(), r * theta.sin()]);
            theta += g;
        }
        if pairwise_ok(&pts, lo, hi) {
            return Ok(pts);
        }
    }
    Err(Error::PlacementInfeasible { retries: attempts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_ids_enumerate_exactly_32() {
        let all = ScenarioConfig::all_scenarios(7);
        assert_eq!(all.len(), 32);
        for (i, cfg) in all.iter().enumerate() {
            assert_eq!(cfg.scenario_id(), i + 1);
            cfg.validate().unwrap();
        }
        // Round trip.
        for id in 1..=32 {
            let cfg = ScenarioConfig::from_id(id, 7).unwrap();
            assert_eq!(cfg.scenario_id(), id);
        }
        // Cross product is distinct.
        let mut keys: Vec<_> = all
            .iter()
            .map(|c| (c.lte_variant, c.wifi_variant, c.bandwidth_mhz, c.predictor))
            .collect();
        keys.sort_by_key(|k| format!("{k:?}"));
        keys.dedup();
        assert_eq!(keys.len(), 32);
    }

    #[test]
    fn place_nodes_degenerate_interval_two_nodes() {
        let mut cfg = ScenarioConfig::from_id(1, 0).unwrap();
        cfg.node_count = 2;
        cfg.inter_node_min_m = 5.0;
        cfg.inter_node_max_m = 5.0;
        let pos = place_nodes(&cfg).unwrap();
        let d = ((pos[0][0] - pos[1][0]).powi(2) + (pos[0][1] - pos[1][1]).powi(2)).sqrt();
        assert!((d - 5.0).abs() < 1e-12);
    }

    #[test]
    fn place_nodes_pairwise_distances_in_interval() {
        let mut cfg = ScenarioConfig::from_id(3, 0).unwrap();
        cfg.seed = 42;
        let pos = place_nodes(&cfg).unwrap();
        assert_eq!(pos.len(), 6);
        let mut pairs = 0;
        for i in 0..pos.len() {
            for j in (i + 1)..pos.len() {
                let d = ((pos[i][0] - pos[j][0]).powi(2) + (pos[i][1] - pos[j][1]).powi(2)).sqrt();
                assert!(d >= 5.0 - 1e-9 && d <= 10.0 + 1e-9, "pair ({i},{j}) at {d}");
                pairs += 1;
            }
        }
        assert_eq!(pairs, 15);
    }

    #[test]
    fn place_nodes_overconstrained_fails() {
        let mut cfg = ScenarioConfig::from_id(1, 0).unwrap();
        cfg.node_count = 50;
        cfg.inter_node_min_m = 9.9;
        cfg.inter_node_max_m = 10.0;
        match place_nodes(&cfg) {
            Err(Error::PlacementInfeasible { .. }) => {}
            other => panic!("expected PlacementInfeasible, got {other:?}"),
        }
    }

    #[test]
    fn place_nodes_deterministic() {
        let cfg = ScenarioConfig::from_id(9, 123).unwrap();
        assert_eq!(place_nodes(&cfg).unwrap(), place_nodes(&cfg).unwrap());
    }

    #[test]
    fn csv_round_trip_preserves_points() {
        let cfg = ScenarioConfig::from_id(5, 99).unwrap();
        let ds = Dataset {
            config: cfg,
            points: vec![
                FeaturePoint { sinr_db: 21.1234567891, capacity_mbps: 8.5, scenario_id: 5, sample_index: 0 },
                FeaturePoint { sinr_db: -3.25, capacity_mbps: 0.0, scenario_id: 5, sample_index: 1 },
            ],
        };
        let csv = ds.to_csv();
        assert!(csv.starts_with("scenario_id,lte_variant,wifi_variant,bandwidth_mhz,predictor,sample_index,sinr_db,capacity_mbps\n"));
        let back = Dataset::from_csv(&csv, 99).unwrap();
        assert_eq!(back.config, ds.config);
        assert_eq!(back.n(), 2);
        // 9 significant digits survive the round trip.
        assert!((back.points[0].sinr_db - 21.1234568).abs() < 1e-6);
        assert_eq!(back.points[1].capacity_mbps, 0.0);
    }

    #[test]
    fn config_json_uses_spec_field_names() {
        let cfg = ScenarioConfig::from_id(1, 0).unwrap();
        let j = serde_json::to_string(&cfg).unwrap();
        for key in [
            "lte_variant",
            "wifi_variant",
            "bandwidth_mhz",
            "predictor",
            "node_count",
            "tx_power_dbm",
            "carrier_ghz",
            "inter_node_min_m",
            "inter_node_max_m",
            "seed",
        ] {
            assert!(j.contains(key), "missing {key} in {j}");
        }
        assert!(j.contains("\"LTE_U\""));
        assert!(j.contains("\"IEEE80211N\""));
        assert!(j.contains("\"SINR\""));
        let mac = serde_json::to_string(&MacParams::default()).unwrap();
        for key in [
            "laa_ed_dbm",
            "wifi_ed_dbm",
            "wifi_preamble_dbm",
            "laa_txop_ms",
            "lteu_duty_on_fraction",
            "slot_ms",
        ] {
            assert!(mac.contains(key), "missing {key}");
        }
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.0), "0.0");
        assert_eq!(format_sig9(1.0), "1.00000000");
        assert_eq!(format_sig9(12.5), "12.5000000");
        assert_eq!(format_sig9(-0.001234567891), "-0.00123456789");
    }
}

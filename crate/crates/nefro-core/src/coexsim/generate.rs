//! Scenario sample generation.

use super::link::{
    dbm_to_mw, distance, noise_floor_dbm, sinr_from_gains, Propagation,
};
use super::mac::{
    airtime_shares, collision_overlap, node_roles, node_rx_energy, sensing_matrix,
};
use super::{
    client_positions, ground_truth_cir, place_nodes, shannon_capacity, wifi_sinr_offset_db,
    Dataset, DispersionParams, FeaturePoint, LteVariant, MacParams, ScenarioConfig,
};
use crate::seed::{mix3, TAG_EPOCH, TAG_MEASURE};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Per-epoch internals kept alongside the emitted feature point; used by
/// tests and by the optimization stage to freeze a scenario's operating
/// point.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochTrace {
    pub per_node_airtime: Vec<f64>,
    pub per_node_sinr_db: Vec<f64>,
    /// Network SINR after the Wi-Fi variant offset and fade events, before
    /// measurement noise.
    pub mean_sinr_db: f64,
    /// Capacity on the ground-truth curve at `mean_sinr_db`.
    pub capacity_noiseless_mbps: f64,
    /// Airtime such that the Shannon abstraction reproduces
    /// `capacity_noiseless_mbps` at `mean_sinr_db` exactly.
    pub effective_airtime: f64,
}

/// Generate `n_samples` feature points for one scenario with default
/// dispersion. Identical inputs produce a bit-identical dataset.
pub fn simulate_scenario(
    config: &ScenarioConfig,
    n_samples: usize,
    mac: &MacParams,
) -> Result<Dataset> {
    simulate_scenario_traced(config, n_samples, mac, &DispersionParams::default())
        .map(|(ds, _)| ds)
}

/// [`simulate_scenario`] with explicit dispersion parameters and the
/// per-epoch traces exposed.
pub fn simulate_scenario_traced(
    config: &ScenarioConfig,
    n_samples: usize,
    mac: &MacParams,
    disp: &DispersionParams,
) -> Result<(Dataset, Vec<EpochTrace>)> {
    config.validate()?;
    mac.validate()?;
    if n_samples < 10 {
        return Err(Error::InvalidConfig(format!(
            "n_samples {n_samples} < 10: too few for stable 5-fold CV"
        )));
    }

    let positions = place_nodes(config)?;
    let rx = client_positions(&positions);
    let n = positions.len();
    let roles = node_roles(config);
    let prop = Propagation::for_config(config, disp.shadowing_sigma_db);
    let bw = config.bandwidth_mhz as f64;
    let noise_mw = dbm_to_mw(noise_floor_dbm(bw));
    let cir = ground_truth_cir(config);
    let sinr_offset = wifi_sinr_offset_db(config.wifi_variant);
    let scenario_id = config.scenario_id();
    let is_lteu = config.lte_variant == LteVariant::LteU;
    let event_mult = if is_lteu { disp.lteu_event_multiplier } else { 1.0 };
    let sinr_sigma = disp.sinr_noise_db * if is_lteu { disp.lteu_noise_multiplier } else { 1.0 };
    let cap_sigma = disp.capacity_noise_frac * bw;

    // Static geometry: path losses do not change across epochs, only the
    // shadowing and MAC draws do.
    let base_gain_intf: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| -prop.path_loss_db(distance(rx[i], positions[j]))).collect())
        .collect();

    let mut points = Vec::with_capacity(n_samples);
    let mut traces = Vec::with_capacity(n_samples);
    for sample_index in 0..n_samples {
        let epoch_seed = mix3(config.seed, TAG_EPOCH, sample_index as u64);
        let shadow = super::link::shadowing_matrix(n, disp.shadowing_sigma_db, epoch_seed);

        // MAC state for this epoch.
        let rx_dbm = node_rx_energy(&positions, config.tx_power_dbm, &prop, &shadow);
        let senses = sensing_matrix(&roles, &rx_dbm, mac);
        let mut mac_rng = ChaCha8Rng::seed_from_u64(mix3(epoch_seed, TAG_EPOCH, 1));
        let airtimes = airtime_shares(&roles, &senses, mac, disp, &mut mac_rng);
        let kappa = collision_overlap(&roles, &senses);

        // Link budget with collision-discounted interference overlap.
        let gain_db: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| base_gain_intf[i][j] + shadow[i][j]).collect())
            .collect();
        let overlap: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| airtimes[j] * kappa[i][j]).collect())
            .collect();
        let tx = vec![config.tx_power_dbm; n];
        let per_node_sinr = sinr_from_gains(&tx, &gain_db, &overlap, noise_mw);

        // Network-level SINR with variant offset and occasional deep fades.
        let mut meas_rng = ChaCha8Rng::seed_from_u64(mix3(epoch_seed, TAG_MEASURE, 0));
        let fade = if disp.deep_fade_prob > 0.0
            && meas_rng.random::<f64>() < disp.deep_fade_prob * event_mult
        {
            disp.deep_fade_db
        } else {
            0.0
        };
        let mean_sinr = per_node_sinr.iter().sum::<f64>() / n as f64 + sinr_offset - fade;

        // Capacity on the injected quadratic curve, kept under the Shannon
        // ceiling so an effective airtime in [0, 1] always reproduces it.
        let ceiling = bw * (1.0 + dbm_to_mw(mean_sinr)).log2();
        let q = cir[0] + cir[1] * mean_sinr + cir[2] * mean_sinr * mean_sinr;
        let capacity_noiseless = q.clamp(0.0, ceiling);
        let effective_airtime = if ceiling > 0.0 { capacity_noiseless / ceiling } else { 0.0 };
        debug_assert!(
            (shannon_capacity(mean_sinr, bw, effective_airtime) - capacity_noiseless).abs()
                < 1e-9
        );

        // Measurement noise, drawn after the epoch state so disabling it
        // leaves the noiseless pipeline untouched.
        let sinr_noise = if sinr_sigma > 0.0 {
            Normal::new(0.0, sinr_sigma).expect("sigma > 0").sample(&mut meas_rng)
        } else {
            0.0
        };
        let mut cap_noise = if cap_sigma > 0.0 {
            Normal::new(0.0, cap_sigma).expect("sigma > 0").sample(&mut meas_rng)
        } else {
            0.0
        };
        if disp.glitch_prob > 0.0 && meas_rng.random::<f64>() < disp.glitch_prob * event_mult {
            cap_noise += Normal::new(0.0, cap_sigma.max(0.05 * bw) * disp.glitch_scale)
                .expect("sigma > 0")
                .sample(&mut meas_rng);
        }

        points.push(FeaturePoint {
            sinr_db: mean_sinr + sinr_noise,
            capacity_mbps: (capacity_noiseless + cap_noise).max(0.0),
            scenario_id,
            sample_index,
        });
        traces.push(EpochTrace {
            per_node_airtime: airtimes,
            per_node_sinr_db: per_node_sinr,
            mean_sinr_db: mean_sinr,
            capacity_noiseless_mbps: capacity_noiseless,
            effective_airtime,
        });
    }

    Ok((Dataset { config: config.clone(), points }, traces))
}

/// Replace `fraction` of the points (rounded up, chosen by seed) with gross
/// outliers displaced several response-scales off the CIR curve. Returns
/// the contaminated dataset and the sorted indices that were touched; used
/// by outlier-robustness experiments.
pub fn contaminate(dataset: &Dataset, fraction: f64, seed: u64) -> (Dataset, Vec<usize>) {
    let n = dataset.n();
    let count = ((n as f64 * fraction).ceil() as usize).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(mix3(seed, TAG_MEASURE, 0xC0));
    let mut idx: Vec<usize> = (0..n).collect();
    // Partial Fisher-Yates: the first `count` entries are the sample.
    for i in 0..count {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    let mut chosen: Vec<usize> = idx[..count].to_vec();
    chosen.sort_unstable();

    let caps: Vec<f64> = dataset.points.iter().map(|p| p.capacity_mbps).collect();
    let mean = caps.iter().sum::<f64>() / n as f64;
    let sd = (caps.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    let scale = sd.max(0.05 * dataset.config.bandwidth_mhz as f64);

    let mut out = dataset.clone();
    for &i in &chosen {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let magnitude = rng.random_range(6.0..10.0) * scale;
        let p = &mut out.points[i];
        p.capacity_mbps = (p.capacity_mbps + sign * magnitude).max(0.0);
    }
    (out, chosen)
}

//! Link-budget primitives: path loss, noise floor, SINR, Shannon capacity.

use super::ScenarioConfig;
use crate::seed::{mix3, TAG_EPOCH};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Log-distance propagation model with log-normal shadowing.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    /// Path-loss exponent; 3.5 models indoor NLOS with walls and furniture.
    pub exponent: f64,
    /// Carrier frequency (GHz); sets the 1 m reference loss.
    pub carrier_ghz: f64,
    /// Log-normal shadowing sigma (dB); 0 disables shadowing entirely.
    pub shadowing_sigma_db: f64,
}

impl Propagation {
    pub fn new(carrier_ghz: f64, shadowing_sigma_db: f64) -> Self {
        Self { exponent: 3.5, carrier_ghz, shadowing_sigma_db }
    }

    pub fn for_config(config: &ScenarioConfig, shadowing_sigma_db: f64) -> Self {
        Self::new(config.carrier_ghz, shadowing_sigma_db)
    }

    /// Free-space loss at the 1 m reference distance (dB).
    pub fn ref_loss_db(&self) -> f64 {
        32.44 + 20.0 * self.carrier_ghz.log10()
    }

    /// Deterministic part of the path loss at distance `d_m` (meters).
    pub fn path_loss_db(&self, d_m: f64) -> f64 {
        let d = d_m.max(0.1);
        self.ref_loss_db() + 10.0 * self.exponent * d.log10()
    }
}

/// Thermal noise floor over `bandwidth_mhz` with a 9 dB receiver noise
/// figure: `-174 dBm/Hz + 9 dB + 10 log10(B_Hz)`.
pub fn noise_floor_dbm(bandwidth_mhz: f64) -> f64 {
    -174.0 + 9.0 + 10.0 * (bandwidth_mhz * 1.0e6).log10()
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Golden-angle client offsets: the receiver of node `i` sits
/// [`CLIENT_DISTANCE_M`] away at bearing `i * golden_angle`, which spreads
/// clients deterministically without extra randomness.
pub const CLIENT_DISTANCE_M: f64 = 2.0;
const GOLDEN_ANGLE_RAD: f64 = 2.399_963_229_728_653;

/// Receiver positions paired with the given transmitter positions.
pub fn client_positions(positions: &[[f64; 2]]) -> Vec<[f64; 2]> {
    positions
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let theta = GOLDEN_ANGLE_RAD * i as f64;
            [
                p[0] + CLIENT_DISTANCE_M * theta.cos(),
                p[1] + CLIENT_DISTANCE_M * theta.sin(),
            ]
        })
        .collect()
}

pub(crate) fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// SINR of each link from explicit channel gains.
///
/// `gain_db[i][j]` is the channel gain (negative path loss plus shadowing)
/// from transmitter `j` to the receiver of link `i`; `overlap[i][j]` is the
/// fraction of link `i`'s active time during which interferer `j`
/// transmits. For each link:
///
/// `SINR_dB = (tx_j=i + gain_ii) - 10*log10( sum_j interference_mW * overlap + noise_mW )`
pub(crate) fn sinr_from_gains(
    tx_dbm: &[f64],
    gain_db: &[Vec<f64>],
    overlap: &[Vec<f64>],
    noise_mw: f64,
) -> Vec<f64> {
    let n = tx_dbm.len();
    (0..n)
        .map(|i| {
            let signal_dbm = tx_dbm[i] + gain_db[i][i];
            let mut denom_mw = noise_mw;
            for j in 0..n {
                if j != i {
                    denom_mw += dbm_to_mw(tx_dbm[j] + gain_db[i][j]) * overlap[i][j];
                }
            }
            signal_dbm - mw_to_dbm(denom_mw)
        })
        .collect()
}

/// Per-link SINR (dB) for nodes at `positions` transmitting to their
/// golden-angle clients, treating every other node as an interferer active
/// for its airtime fraction. Shadowing is drawn from `epoch_seed`
/// (disabled when `prop.shadowing_sigma_db == 0`), so the result is
/// deterministic per seed.
pub fn compute_sinr(
    positions: &[[f64; 2]],
    tx_power_dbm: &[f64],
    airtimes: &[f64],
    bandwidth_mhz: f64,
    prop: &Propagation,
    epoch_seed: u64,
) -> Vec<f64> {
    let n = positions.len();
    assert_eq!(tx_power_dbm.len(), n);
    assert_eq!(airtimes.len(), n);
    let rx = client_positions(positions);
    let shadow = shadowing_matrix(n, prop.shadowing_sigma_db, epoch_seed);
    let gain_db: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| -prop.path_loss_db(distance(rx[i], positions[j])) + shadow[i][j])
                .collect()
        })
        .collect();
    let overlap: Vec<Vec<f64>> = (0..n).map(|_| airtimes.to_vec()).collect();
    sinr_from_gains(tx_power_dbm, &gain_db, &overlap, dbm_to_mw(noise_floor_dbm(bandwidth_mhz)))
}

/// One shadowing draw per directed (receiver, transmitter) pair, in fixed
/// row-major order so the stream is reproducible.
pub(crate) fn shadowing_matrix(n: usize, sigma_db: f64, epoch_seed: u64) -> Vec<Vec<f64>> {
    if sigma_db == 0.0 {
        return vec![vec![0.0; n]; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix3(epoch_seed, TAG_EPOCH, 0));
    let normal = Normal::new(0.0, sigma_db).expect("sigma > 0");
    (0..n)
        .map(|_| (0..n).map(|_| normal.sample(&mut rng)).collect())
        .collect()
}

/// Shannon link abstraction: `capacity = airtime * B * log2(1 + sinr_linear)`
/// in Mbps for `B` in MHz.
pub fn shannon_capacity(sinr_db: f64, bandwidth_mhz: f64, airtime: f64) -> f64 {
    debug_assert!((0.0..=1.0 + 1e-12).contains(&airtime), "airtime {airtime} out of [0,1]");
    airtime * bandwidth_mhz * (1.0 + dbm_to_mw(sinr_db)).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn shannon_trivial_values() {
        // log2(2) = 1.
        assert_abs_diff_eq!(shannon_capacity(0.0, 20.0, 1.0), 20.0, epsilon = 1e-12);
        // sinr_linear = 3 => log2(4) = 2.
        let sinr_db = 10.0 * 3f64.log10();
        assert_abs_diff_eq!(shannon_capacity(sinr_db, 10.0, 0.5), 10.0, epsilon = 1e-9);
        assert_eq!(shannon_capacity(17.0, 20.0, 0.0), 0.0);
    }

    #[test]
    fn sinr_zero_interferers_at_noise_floor() {
        // Single node: signal equals the noise floor => SINR = 0 dB.
        let prop = Propagation::new(5.0, 0.0);
        let bw = 20.0;
        let tx = noise_floor_dbm(bw) + prop.path_loss_db(CLIENT_DISTANCE_M);
        let s = compute_sinr(&[[0.0, 0.0]], &[tx], &[1.0], bw, &prop, 1);
        assert_abs_diff_eq!(s[0], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn sinr_equal_power_interferer_near_zero_db() {
        // Symmetric two-node layout: each link's interferer is received at a
        // power close to the signal, noise negligible at high tx power.
        let prop = Propagation::new(5.0, 0.0);
        let positions = [[0.0, 0.0], [7.0, 0.0]];
        let rx = client_positions(&positions);
        // Hand-build the budget for link 0.
        let tx = 60.0;
        let s = compute_sinr(&positions, &[tx, tx], &[1.0, 1.0], 20.0, &prop, 9);
        let sig = tx - prop.path_loss_db(distance(rx[0], positions[0]));
        let intf = tx - prop.path_loss_db(distance(rx[0], positions[1]));
        let expect = sig - mw_to_dbm(dbm_to_mw(intf) + dbm_to_mw(noise_floor_dbm(20.0)));
        assert_abs_diff_eq!(s[0], expect, epsilon = 1e-9);
        // At 60 dBm the noise term is negligible; the ratio is set by the
        // path-loss difference between the 2 m client link and the 5-9 m
        // interference path, so SINR sits well above 0 but finite.
        assert!(s[0].is_finite());
    }

    #[test]
    fn sinr_three_node_line_matches_hand_budget() {
        // 3-node line at x = 0, 6, 12; no shadowing; airtimes 1.
        let prop = Propagation::new(5.0, 0.0);
        let positions = [[0.0, 0.0], [6.0, 0.0], [12.0, 0.0]];
        let tx = [23.0, 23.0, 23.0];
        let air = [1.0, 1.0, 1.0];
        let bw = 10.0;
        let got = compute_sinr(&positions, &tx, &air, bw, &prop, 5);
        let rx = client_positions(&positions);
        let noise = dbm_to_mw(noise_floor_dbm(bw));
        for i in 0..3 {
            let sig = tx[i] - prop.path_loss_db(distance(rx[i], positions[i]));
            let mut denom = noise;
            for j in 0..3 {
                if j != i {
                    denom += dbm_to_mw(tx[j] - prop.path_loss_db(distance(rx[i], positions[j])));
                }
            }
            assert_abs_diff_eq!(got[i], sig - mw_to_dbm(denom), epsilon = 1e-9);
        }
    }

    #[test]
    fn raising_interferer_power_never_raises_victim_sinr() {
        let prop = Propagation::new(5.0, 0.0);
        let positions = [[0.0, 0.0], [5.0, 3.0], [9.0, -2.0]];
        let air = [0.4, 0.6, 0.8];
        let base = compute_sinr(&positions, &[20.0, 18.0, 15.0], &air, 20.0, &prop, 2);
        for bump in [0.5, 2.0, 8.0] {
            let s = compute_sinr(&positions, &[20.0, 18.0 + bump, 15.0], &air, 20.0, &prop, 2);
            assert!(s[0] <= base[0] + 1e-12);
            assert!(s[2] <= base[2] + 1e-12);
        }
    }

    #[test]
    fn noise_floor_matches_link_budget_convention() {
        // -174 + 9 + 10log10(20e6) = -91.99 dBm.
        assert_abs_diff_eq!(noise_floor_dbm(20.0), -91.9897, epsilon = 1e-3);
    }
}

//! Channel-access abstraction: sensing, airtime shares, collision overlap.
//!
//! LAA defers to any energy above its -72 dBm ED threshold (LBT); Wi-Fi
//! defers to Wi-Fi preambles above -82 dBm and to non-Wi-Fi energy above
//! -62 dBm (CSMA); LTE-U never senses and transmits for its CSAT duty-cycle
//! ON fraction regardless of the medium.

use super::link::{distance, Propagation};
use super::{DispersionParams, LteVariant, MacParams, ScenarioConfig, WifiVariant};
use crate::seed::{mix3, TAG_EPOCH};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Role of a node in the coexistence topology. Node 0 carries the LTE
/// (LTE-U or LAA) small cell; the remaining nodes are Wi-Fi APs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum NodeRole {
    Lte(LteVariant),
    Wifi(WifiVariant),
}

pub(crate) fn node_roles(config: &ScenarioConfig) -> Vec<NodeRole> {
    (0..config.node_count)
        .map(|i| {
            if i == 0 {
                NodeRole::Lte(config.lte_variant)
            } else {
                NodeRole::Wifi(config.wifi_variant)
            }
        })
        .collect()
}

/// Residual collision overlap between mutually sensing CSMA/LBT nodes
/// (slot-boundary collisions only).
pub(crate) const CSMA_RESIDUAL_OVERLAP: f64 = 0.06;
/// Collision overlap for pairs involving an LTE-U node that the partner can
/// hear: CSAT switches ON/OFF without regard to in-flight frames.
pub(crate) const LTEU_COLLISION_OVERLAP: f64 = 0.35;

/// `senses[i][j]`: node `i` defers to transmissions of node `j`, given the
/// received energy `rx_dbm[i][j]` of `j` at `i`.
pub(crate) fn sensing_matrix(
    roles: &[NodeRole],
    rx_dbm: &[Vec<f64>],
    mac: &MacParams,
) -> Vec<Vec<bool>> {
    let n = roles.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return false;
                    }
                    match roles[i] {
                        // CSAT has no energy-detection threshold.
                        NodeRole::Lte(LteVariant::LteU) => false,
                        NodeRole::Lte(LteVariant::Laa) => rx_dbm[i][j] >= mac.laa_ed_dbm,
                        NodeRole::Wifi(_) => match roles[j] {
                            // Wi-Fi decodes Wi-Fi preambles far below its
                            // energy threshold.
                            NodeRole::Wifi(_) => rx_dbm[i][j] >= mac.wifi_preamble_dbm,
                            NodeRole::Lte(_) => rx_dbm[i][j] >= mac.wifi_ed_dbm,
                        },
                    }
                })
                .collect()
        })
        .collect()
}

/// Connected components of the mutual-awareness graph (edge when either
/// side senses the other).
fn contention_components(senses: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = senses.len();
    let mut comp = vec![usize::MAX; n];
    let mut components = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        comp[start] = id;
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                if comp[j] == usize::MAX && (senses[i][j] || senses[j][i]) {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// Per-node airtime fractions.
///
/// Within each contention domain, LTE-U nodes take their (jittered) duty
/// fraction off the top — CSAT is load-dependent, so an LTE-U node alone in
/// its domain takes the whole channel. The remaining budget is split among
/// sensing nodes proportionally to `1/(1 + deferral_count)`, then scaled so
/// the domain total never exceeds 1. Airtime jitter only ever shrinks
/// shares, preserving conservation.
pub(crate) fn airtime_shares(
    roles: &[NodeRole],
    senses: &[Vec<bool>],
    mac: &MacParams,
    disp: &DispersionParams,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let n = roles.len();
    let mut airtime = vec![0.0; n];
    // Draw jitters in node order regardless of component structure so the
    // stream stays stable.
    let duty_jitter: Vec<f64> = (0..n)
        .map(|_| {
            if disp.duty_jitter > 0.0 {
                rng.random_range(-disp.duty_jitter..disp.duty_jitter)
            } else {
                0.0
            }
        })
        .collect();
    let share_jitter: Vec<f64> = (0..n)
        .map(|_| {
            if disp.airtime_jitter > 0.0 {
                rng.random_range(0.0..disp.airtime_jitter)
            } else {
                0.0
            }
        })
        .collect();

    for members in contention_components(senses) {
        let lteu: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| roles[i] == NodeRole::Lte(LteVariant::LteU))
            .collect();
        let rest: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| roles[i] != NodeRole::Lte(LteVariant::LteU))
            .collect();

        let mut budget = 1.0;
        for &i in &lteu {
            let duty = if members.len() == 1 {
                1.0
            } else {
                (mac.lteu_duty_on_fraction + duty_jitter[i]).clamp(0.05, 1.0)
            };
            airtime[i] = duty;
            budget -= duty;
        }
        budget = budget.max(0.0);

        if rest.is_empty() {
            continue;
        }
        let raw: Vec<f64> = rest
            .iter()
            .map(|&i| {
                let deferrals = members
                    .iter()
                    .filter(|&&j| j != i && senses[i][j])
                    .count();
                1.0 / (1.0 + deferrals as f64)
            })
            .collect();
        let total: f64 = raw.iter().sum();
        let scale = if total > budget { budget / total } else { 1.0 };
        for (&i, &r) in rest.iter().zip(&raw) {
            airtime[i] = r * scale * (1.0 - share_jitter[i]);
        }
    }
    airtime
}

/// Collision-overlap factor `kappa[i][j]`: the fraction of interferer `j`'s
/// airtime that actually lands on victim link `i`. Mutual sensing between
/// non-LTE-U nodes suppresses overlap to slot-boundary residue; pairs
/// involving LTE-U keep a substantial overlap because CSAT switches
/// independently of in-flight frames; hidden pairs overlap fully.
pub(crate) fn collision_overlap(roles: &[NodeRole], senses: &[Vec<bool>]) -> Vec<Vec<f64>> {
    let n = roles.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return 0.0;
                    }
                    let coupled = senses[i][j] || senses[j][i];
                    let lteu_involved = roles[i] == NodeRole::Lte(LteVariant::LteU)
                        || roles[j] == NodeRole::Lte(LteVariant::LteU);
                    if !coupled {
                        1.0
                    } else if lteu_involved {
                        LTEU_COLLISION_OVERLAP
                    } else {
                        CSMA_RESIDUAL_OVERLAP
                    }
                })
                .collect()
        })
        .collect()
}

/// Per-node airtime fractions for a scenario epoch.
///
/// Places the nodes from `config.seed`, draws epoch shadowing from
/// `epoch_seed`, derives who senses whom, and splits airtime per contention
/// domain. Deterministic for fixed `(config, mac, epoch_seed)`.
pub fn channel_airtime(
    config: &ScenarioConfig,
    mac: &MacParams,
    epoch_seed: u64,
) -> Result<Vec<f64>> {
    config.validate()?;
    mac.validate()?;
    channel_airtime_with(config, mac, &DispersionParams::default(), epoch_seed)
}

pub(crate) fn channel_airtime_with(
    config: &ScenarioConfig,
    mac: &MacParams,
    disp: &DispersionParams,
    epoch_seed: u64,
) -> Result<Vec<f64>> {
    let positions = super::place_nodes(config)?;
    let roles = node_roles(config);
    let prop = Propagation::for_config(config, disp.shadowing_sigma_db);
    let shadow = super::link::shadowing_matrix(positions.len(), disp.shadowing_sigma_db, epoch_seed);
    let rx_dbm = node_rx_energy(&positions, config.tx_power_dbm, &prop, &shadow);
    let senses = sensing_matrix(&roles, &rx_dbm, mac);
    let mut rng = ChaCha8Rng::seed_from_u64(mix3(epoch_seed, TAG_EPOCH, 1));
    Ok(airtime_shares(&roles, &senses, mac, disp, &mut rng))
}

/// Received power of node `j` at node `i` (node-to-node, used for sensing).
pub(crate) fn node_rx_energy(
    positions: &[[f64; 2]],
    tx_power_dbm: f64,
    prop: &Propagation,
    shadow: &[Vec<f64>],
) -> Vec<Vec<f64>> {
    let n = positions.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        f64::INFINITY
                    } else {
                        tx_power_dbm - prop.path_loss_db(distance(positions[i], positions[j]))
                            + shadow[i][j]
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wifi_roles(n: usize) -> Vec<NodeRole> {
        (0..n).map(|_| NodeRole::Wifi(WifiVariant::Ieee80211N)).collect()
    }

    fn all_sensing(n: usize) -> Vec<Vec<bool>> {
        (0..n).map(|i| (0..n).map(|j| i != j).collect()).collect()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    #[test]
    fn single_node_gets_full_airtime_any_role() {
        let mac = MacParams::default();
        let disp = DispersionParams::none();
        for role in [
            NodeRole::Wifi(WifiVariant::Ieee80211Ac),
            NodeRole::Lte(LteVariant::Laa),
            NodeRole::Lte(LteVariant::LteU),
        ] {
            let a = airtime_shares(&[role], &[vec![false]], &mac, &disp, &mut rng());
            assert_eq!(a, vec![1.0], "{role:?}");
        }
    }

    #[test]
    fn lteu_airtime_equals_duty_without_jitter() {
        let mac = MacParams::default();
        let disp = DispersionParams::none();
        let roles = vec![NodeRole::Lte(LteVariant::LteU), NodeRole::Wifi(WifiVariant::Ieee80211N)];
        // Wi-Fi senses the LTE-U node; LTE-U senses nothing.
        let senses = vec![vec![false, false], vec![true, false]];
        let a = airtime_shares(&roles, &senses, &mac, &disp, &mut rng());
        assert_eq!(a[0], 0.5);
        assert!(a[1] <= 0.5 + 1e-12);
    }

    #[test]
    fn laa_defers_harder_when_neighbor_is_above_ed() {
        // One LAA, one Wi-Fi neighbor. Above-threshold neighbor: LAA defers;
        // hidden neighbor: LAA does not.
        let mac = MacParams::default();
        let disp = DispersionParams::none();
        let roles = vec![NodeRole::Lte(LteVariant::Laa), NodeRole::Wifi(WifiVariant::Ieee80211N)];
        let energy_above = vec![vec![f64::INFINITY, -60.0], vec![-60.0, f64::INFINITY]];
        let energy_below = vec![vec![f64::INFINITY, -80.0], vec![-60.0, f64::INFINITY]];
        let s_above = sensing_matrix(&roles, &energy_above, &mac);
        let s_below = sensing_matrix(&roles, &energy_below, &mac);
        let a_above = airtime_shares(&roles, &s_above, &mac, &disp, &mut rng());
        let a_below = airtime_shares(&roles, &s_below, &mac, &disp, &mut rng());
        assert!(
            a_above[0] < a_below[0],
            "deferring LAA should get strictly less airtime: {} vs {}",
            a_above[0],
            a_below[0]
        );
    }

    #[test]
    fn airtime_conserved_per_domain() {
        let mac = MacParams::default();
        let disp = DispersionParams::default();
        for n in [2usize, 4, 6, 9] {
            let mut roles = wifi_roles(n);
            roles[0] = NodeRole::Lte(LteVariant::LteU);
            let senses = {
                let mut s = all_sensing(n);
                // LTE-U never senses.
                s[0] = vec![false; n];
                s
            };
            for seed in 0..20 {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                let a = airtime_shares(&roles, &senses, &mac, &disp, &mut r);
                let total: f64 = a.iter().sum();
                assert!(total <= 1.0 + 1e-9, "n={n} seed={seed} total={total}");
                assert!(a.iter().all(|&x| (0.0..=1.0).contains(&x)));
            }
        }
    }

    #[test]
    fn channel_airtime_deterministic() {
        let cfg = ScenarioConfig::from_id(18, 5).unwrap();
        let mac = MacParams::default();
        let a = channel_airtime(&cfg, &mac, 77).unwrap();
        let b = channel_airtime(&cfg, &mac, 77).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn lteu_pairs_overlap_more_than_csma_pairs() {
        let roles = vec![
            NodeRole::Lte(LteVariant::LteU),
            NodeRole::Wifi(WifiVariant::Ieee80211N),
            NodeRole::Wifi(WifiVariant::Ieee80211N),
        ];
        let mut senses = all_sensing(3);
        senses[0] = vec![false; 3];
        let k = collision_overlap(&roles, &senses);
        assert_eq!(k[1][0], LTEU_COLLISION_OVERLAP);
        assert_eq!(k[0][1], LTEU_COLLISION_OVERLAP);
        assert_eq!(k[1][2], CSMA_RESIDUAL_OVERLAP);
        // Hidden pair overlaps fully.
        let mut hidden = senses.clone();
        hidden[1][2] = false;
        hidden[2][1] = false;
        let k = collision_overlap(&roles, &hidden);
        assert_eq!(k[1][2], 1.0);
    }
}

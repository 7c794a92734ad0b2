//! Ready-made experiment layouts.
//!
//! `fig1` is the 4 RSU x 5 content road used for the cache-refresh study;
//! `fig2` covers the same 20 regions with 5 RSUs of 4 regions each.

use crate::config::{Policy, PopularityMode, ServicePolicy, SystemConfig};

pub const NAMES: [&str; 2] = ["fig1", "fig2"];

fn road(num_rsus: usize, regions_per_rsu: usize, max_aoi: Vec<u32>) -> SystemConfig {
    let num_regions = num_rsus * regions_per_rsu;
    SystemConfig {
        num_uvs: 100,
        num_rsus,
        num_regions,
        regions_per_rsu,
        max_aoi,
        aoi_weight: 1.0,
        update_cost: vec![vec![0.5; num_regions]; num_rsus],
        service_cost: 1.0,
        service_rate: 1.0,
        lyapunov_v: 10.0,
        mbs_generation_prob: 1.0,
        uv_arrival_rate: 0.5,
        uv_speed: 1.0,
        popularity_mode: PopularityMode::StaticZipf { exponent: 0.0 },
        horizon_slots: 1000,
        seed: 1,
        policy: Policy::MdpIndex,
        service_policy: ServicePolicy::Lyapunov,
    }
}

pub fn fig1() -> SystemConfig {
    road(4, 5, vec![10; 20])
}

pub fn fig2() -> SystemConfig {
    road(5, 4, (0..20).map(|h| 8 + 2 * (h % 4) as u32).collect())
}

pub fn by_name(name: &str) -> Option<SystemConfig> {
    match name {
        "fig1" => Some(fig1()),
        "fig2" => Some(fig2()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in NAMES {
            by_name(name).unwrap().validate().unwrap();
        }
        assert!(by_name("fig3").is_none());
        assert_eq!(fig2().num_rsus, 5);
    }
}

//! Regenerates the bundled demo scenes under `data/scenes/`.
//!
//! Four synthetic downtown grids, each with one transmitter at street level,
//! plus a single-slab scene and an open field.
//!
//!     cargo run -p mmwpl-core --example demo_scenes -- data/scenes

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

struct GridScene {
    name: &'static str,
    seed: u64,
    /// block footprint along x and y
    block: (f64, f64),
    /// street width along x and y
    street: (f64, f64),
    /// lots per block along x
    lots: usize,
    heights: (f64, f64),
    /// chance that a lot stays empty (plazas, low lots)
    gap_chance: f64,
    tx: [f64; 3],
}

const EXTENT: f64 = 320.0;

fn round_half(v: f64) -> f64 {
    (v * 2.0).round() / 2.0
}

fn grid_scene(s: &GridScene) -> Value {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let pitch = (s.block.0 + s.street.0, s.block.1 + s.street.1);
    let nx = (EXTENT / pitch.0).ceil() as i32;
    let ny = (EXTENT / pitch.1).ceil() as i32;
    let lot = s.block.0 / s.lots as f64;
    let mut buildings = Vec::new();
    for i in -nx..nx {
        for j in -ny..ny {
            // blocks are offset so the origin sits in the middle of a street
            let x0 = i as f64 * pitch.0 + s.street.0 / 2.0;
            let y0 = j as f64 * pitch.1 + s.street.1 / 2.0;
            for k in 0..s.lots {
                if rng.random::<f64>() < s.gap_chance {
                    continue;
                }
                let h = round_half(rng.random_range(s.heights.0..s.heights.1));
                let lx = x0 + k as f64 * lot;
                buildings.push(json!({
                    "min": [round_half(lx), round_half(y0), 0.0],
                    "max": [round_half(lx + lot), round_half(y0 + s.block.1), h],
                }));
            }
        }
    }
    json!({
        "name": s.name,
        "buildings": buildings,
        "sites": [{"id": s.name.to_uppercase(), "position": s.tx}],
    })
}

fn main() -> std::io::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/scenes".into()));
    std::fs::create_dir_all(&out)?;

    let scenes = [
        GridScene {
            name: "downtown_a",
            seed: 1,
            block: (70.0, 45.0),
            street: (18.0, 14.0),
            lots: 4,
            heights: (12.0, 45.0),
            gap_chance: 0.08,
            tx: [0.0, 0.0, 7.0],
        },
        GridScene {
            name: "downtown_b",
            seed: 2,
            block: (60.0, 50.0),
            street: (22.0, 16.0),
            lots: 3,
            heights: (10.0, 40.0),
            gap_chance: 0.12,
            tx: [-30.0, 0.0, 7.0],
        },
        GridScene {
            name: "downtown_c",
            seed: 3,
            block: (55.0, 35.0),
            street: (14.0, 12.0),
            lots: 5,
            heights: (15.0, 70.0),
            gap_chance: 0.04,
            tx: [0.0, 20.0, 17.0],
        },
        GridScene {
            name: "downtown_d",
            seed: 4,
            block: (90.0, 40.0),
            street: (20.0, 12.0),
            lots: 6,
            heights: (8.0, 35.0),
            gap_chance: 0.10,
            tx: [25.0, 0.0, 7.0],
        },
    ];
    for s in &scenes {
        let doc = grid_scene(s);
        std::fs::write(out.join(format!("{}.json", s.name)), serde_json::to_string_pretty(&doc)? + "\n")?;
    }

    let slab = json!({
        "name": "slab",
        "buildings": [{"min": [10.0, -1000.0, 0.0], "max": [20.0, 1000.0, 50.0]}],
        "sites": [{"id": "TX", "position": [0.0, 0.0, 7.0]}],
    });
    std::fs::write(out.join("slab.json"), serde_json::to_string_pretty(&slab)? + "\n")?;

    let open = json!({"name": "open", "buildings": [], "sites": [{"id": "TX", "position": [0.0, 0.0, 7.0]}]});
    std::fs::write(out.join("open.json"), serde_json::to_string_pretty(&open)? + "\n")?;
    Ok(())
}

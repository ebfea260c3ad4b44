//! Table and summary writers. Tables are CSV preceded by `#` comment lines
//! carrying the tool version, the config hash and the seed.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use phasefront::tracker::{Profile, Trajectory};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Full round-trip precision.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        write!(out, "{b:02x}").expect("write to string");
    }
    out
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub config_sha256: String,
    pub seed: Option<u64>,
}

impl Provenance {
    fn header(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!("# phasefront {VERSION}\n# config_sha256 {}\n# seed {seed}\n", self.config_sha256)
    }
}

pub struct TableWriter {
    dir: PathBuf,
    prov: Provenance,
    pub written: Vec<PathBuf>,
}

impl TableWriter {
    pub fn new(dir: &Path, prov: Provenance) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(TableWriter { dir: dir.to_path_buf(), prov, written: Vec::new() })
    }

    pub fn table(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> std::io::Result<()> {
        let path = self.dir.join(name);
        let mut file = std::io::BufWriter::new(fs::File::create(&path)?);
        file.write_all(self.prov.header().as_bytes())?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> std::io::Result<()> {
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
        text.push('\n');
        fs::write(&path, text)?;
        self.written.push(path);
        Ok(())
    }
}

pub fn events_rows(traj: &Trajectory) -> Vec<Vec<String>> {
    traj.records
        .iter()
        .map(|r| {
            let outgoing = r
                .outgoing
                .iter()
                .map(|w| format!("{}:{}:{}:{}", w.id, w.kind.label(), num(w.strength), w.order))
                .collect::<Vec<_>>()
                .join(" ");
            let mut row = vec![r.index.to_string(), num(r.time), num(r.x), r.kind.label().into(), r.classification.label()];
            for w in &r.incoming {
                row.extend([w.id.to_string(), w.kind.label().into(), num(w.strength), w.order.to_string()]);
            }
            row.extend([outgoing, num(r.residual)]);
            row
        })
        .collect()
}

pub const EVENTS_HEADER: &[&str] = &[
    "index", "t", "x", "kind", "class", "a_id", "a_kind", "a_strength", "a_order", "b_id", "b_kind", "b_strength", "b_order",
    "outgoing", "residual",
];

pub const TIMELINE_HEADER: &[&str] =
    &["id", "kind", "order", "strength", "speed", "t_start", "x_start", "t_end", "x_end", "alive"];

/// One straight segment per front; fronts alive at the end are cut at the
/// final time.
pub fn timeline_rows(traj: &Trajectory) -> Vec<Vec<String>> {
    let t_end = traj.stats.final_time;
    traj.timeline
        .iter()
        .map(|e| {
            let alive = e.death_t.is_none();
            let (t1, x1) = match (e.death_t, e.death_x) {
                (Some(t), Some(x)) => (t, x),
                _ => (t_end, e.birth_x + e.speed * (t_end - e.birth_t)),
            };
            vec![
                e.id.to_string(),
                e.kind.label().into(),
                e.order.to_string(),
                num(e.strength),
                num(e.speed),
                num(e.birth_t),
                num(e.birth_x),
                num(t1),
                num(x1),
                alive.to_string(),
            ]
        })
        .collect()
}

pub const FUNCTIONALS_HEADER: &[&str] = &["t", "L", "V", "Q", "F", "Lbar", "composite_abs", "max_order", "F2_tail", "TV_v_u"];

pub fn functionals_rows(traj: &Trajectory) -> Vec<Vec<String>> {
    traj.snapshots
        .iter()
        .map(|s| {
            vec![
                num(s.t),
                num(s.l),
                num(s.v),
                num(s.q),
                num(s.f),
                num(s.lbar),
                num(s.composite_abs),
                s.max_order.to_string(),
                num(s.tail2),
                num(s.tv_vu),
            ]
        })
        .collect()
}

pub const PROFILES_HEADER: &[&str] = &["t", "x_left", "x_right", "v", "u", "lam"];

pub fn profile_rows(profiles: &[Profile]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for p in profiles {
        for (i, s) in p.states.iter().enumerate() {
            let left = if i == 0 { f64::NEG_INFINITY } else { p.x[i - 1] };
            let right = p.x.get(i).copied().unwrap_or(f64::INFINITY);
            rows.push(vec![num(p.t), num(left), num(right), num(s.v), num(s.u), num(s.lam)]);
        }
    }
    rows
}

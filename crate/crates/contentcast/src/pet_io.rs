//! PET files on disk.
//!
//! `encode` writes `layout.json` and one `packet_NNN.pet` per packet into
//! the output directory. `decode` writes `segment_NNN.bin` for every segment
//! it recovers plus `status.json` describing all of them.

use std::path::{Path, PathBuf};

use contentcast_core::pet::{self, wire, PetLayout, PetPacket, PriorityProfile, SegmentOutcome};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::files;

pub const LAYOUT_FILE: &str = "layout.json";
pub const STATUS_FILE: &str = "status.json";

/// How segment priorities are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum RhoSpec {
    Explicit(Vec<f64>),
    /// Popularity falling as `1/rank` in input order, mapped with the given
    /// floor.
    Auto { floor: f64 },
}

impl RhoSpec {
    /// `auto` or a comma-separated list.
    pub fn parse(text: &str, floor: f64) -> Result<Self> {
        if text.trim() == "auto" {
            return Ok(RhoSpec::Auto { floor });
        }
        text.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::config(format!("--rho: {v:?} is not a number"))))
            .collect::<Result<Vec<_>>>()
            .map(RhoSpec::Explicit)
    }

    pub fn profile(&self, segments: usize) -> Result<PriorityProfile> {
        match self {
            RhoSpec::Explicit(r) => {
                if r.len() != segments {
                    return Err(CliError::config(format!("--rho has {} values for {segments} inputs", r.len())));
                }
                Ok(PriorityProfile::new(r.clone())?)
            }
            RhoSpec::Auto { floor } => {
                let weights: Vec<f64> = (1..=segments).map(|r| 1.0 / r as f64).collect();
                let total: f64 = weights.iter().sum();
                let pops: Vec<f64> = weights.iter().map(|w| w / total).collect();
                Ok(pet::assign_priorities(&pops, *floor)?)
            }
        }
    }
}

pub fn packet_file_name(index: usize) -> String {
    format!("packet_{index:03}.pet")
}

pub fn segment_file_name(index: usize) -> String {
    format!("segment_{index:03}.bin")
}

/// Encodes `inputs` (one segment each, in order) and writes the result
/// into `out_dir`. Returns the layout.
pub fn encode_files(inputs: &[PathBuf], rho: &RhoSpec, n_packets: usize, out_dir: &Path) -> Result<PetLayout> {
    if inputs.is_empty() {
        return Err(CliError::config("at least one input file is required"));
    }
    let data = inputs.iter().map(|p| files::read_bytes(p)).collect::<Result<Vec<_>>>()?;
    if let Some(i) = data.iter().position(|d| d.is_empty()) {
        return Err(CliError::config(format!("{}: empty files cannot be encoded", inputs[i].display())));
    }
    let segments: Vec<&[u8]> = data.iter().map(Vec::as_slice).collect();
    let profile = rho.profile(segments.len())?;
    let (layout, packets) = pet::pet_encode(&segments, &profile, n_packets)?;
    files::write_json(&out_dir.join(LAYOUT_FILE), &layout)?;
    for p in &packets {
        files::write_bytes(&out_dir.join(packet_file_name(p.index)), &wire::write_packet(p, n_packets)?)?;
    }
    Ok(layout)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SegmentStatus {
    Decoded { segment: u32, bytes: usize, file: String },
    NotYetDecodable { segment: u32, have: usize, need: usize },
}

/// Reads one `.pet` file holding exactly one packet.
pub fn read_packet_file(path: &Path, layout: &PetLayout) -> Result<PetPacket> {
    let buf = files::read_bytes(path)?;
    let bad = |why: String| CliError::config(format!("{}: {why}", path.display()));
    let (wp, used) = wire::read_packet(&buf).map_err(|e| bad(e.to_string()))?;
    if used != buf.len() {
        return Err(bad(format!("{} trailing bytes after the packet", buf.len() - used)));
    }
    if wp.n_packets != layout.n_packets {
        return Err(bad(format!("packet is from a {}-packet codeword, layout has {}", wp.n_packets, layout.n_packets)));
    }
    Ok(wp.packet)
}

/// Decodes whatever `packets` allow and writes segments and `status.json`
/// into `out_dir`.
pub fn decode_files(layout_path: &Path, packets: &[PathBuf], out_dir: &Path) -> Result<Vec<SegmentStatus>> {
    let layout: PetLayout = files::read_json(layout_path)?;
    layout.validate().map_err(|e| CliError::config(format!("{}: {e}", layout_path.display())))?;
    let packets = packets.iter().map(|p| read_packet_file(p, &layout)).collect::<Result<Vec<_>>>()?;
    let outcomes = pet::pet_decode(&layout, &packets)?;
    let mut status = Vec::with_capacity(outcomes.len());
    for (i, (seg, outcome)) in layout.segments.iter().zip(outcomes).enumerate() {
        status.push(match outcome {
            SegmentOutcome::Decoded(bytes) => {
                let file = segment_file_name(i);
                files::write_bytes(&out_dir.join(&file), &bytes)?;
                SegmentStatus::Decoded { segment: seg.id, bytes: bytes.len(), file }
            }
            SegmentOutcome::NotYetDecodable { have, need } => {
                SegmentStatus::NotYetDecodable { segment: seg.id, have, need }
            }
        });
    }
    files::write_json(&out_dir.join(STATUS_FILE), &status)?;
    Ok(status)
}

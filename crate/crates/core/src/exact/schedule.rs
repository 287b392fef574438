use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::envelope::PulseEnvelope;
use super::propagate::SimParams;
use crate::architecture::{ArchitectureGraph, CouplingClass, Role};
use crate::effective::{ChargeMode, SpeciesPulse};
use crate::statevec::{mat2_max_diff, RotationSpec};
use crate::{Error, Result, C64};

/// Tolerance for matching a requested class rotation against what one
/// physical drive produces.
pub const REALIZATION_TOLERANCE: f64 = 1e-9;

/// A drive on one species line. The complex field at absolute time `t` is
/// `Omega(t - start) e^{i phase} sum_k e^{i tones[k] t}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    pub species: String,
    pub envelope: PulseEnvelope,
    /// Frequency offsets of the carrier tones in rad/s; `[0.0]` is a plain
    /// resonant drive.
    pub tones: Vec<f64>,
}

impl Drive {
    pub fn resonant(species: impl Into<String>, envelope: PulseEnvelope) -> Self {
        Self {
            species: species.into(),
            envelope,
            tones: vec![0.0],
        }
    }

    pub fn is_single_resonant_tone(&self) -> bool {
        self.tones.len() == 1 && self.tones[0] == 0.0
    }

    /// Complex drive coefficient for an average Rabi frequency `rabi` at
    /// absolute time `t`.
    pub fn coefficient(&self, rabi: f64, t: f64) -> C64 {
        let carrier: C64 = self
            .tones
            .iter()
            .map(|&d| C64::from_polar(1.0, d * t))
            .sum();
        C64::from_polar(rabi, self.envelope.phase) * carrier
    }
}

/// Drives that start together. Its duration covers the longest drive and can
/// be longer, which leaves the system idle for the remainder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub drives: Vec<Drive>,
    pub duration: f64,
}

impl Segment {
    pub fn single(drive: Drive) -> Self {
        let duration = drive.envelope.duration;
        Self {
            drives: vec![drive],
            duration,
        }
    }

    /// Simultaneous drives; allowed only on species that share no edge.
    pub fn simultaneous(drives: Vec<Drive>) -> Self {
        let duration = drives
            .iter()
            .map(|d| d.envelope.duration)
            .fold(0.0, f64::max);
        Self { drives, duration }
    }

    pub fn idle(duration: f64) -> Self {
        Self {
            drives: vec![],
            duration,
        }
    }
}

/// Ordered, contiguous drive segments starting at `t = 0`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DriveSchedule {
    pub segments: Vec<Segment>,
}

impl DriveSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, segment: Segment) {
        self.segments.push(segment);
    }

    pub fn extend(&mut self, other: DriveSchedule) {
        self.segments.extend(other.segments);
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Checks species, timing and that simultaneous drives act on uncoupled lines.
    pub fn check(&self, graph: &ArchitectureGraph) -> Result<()> {
        for seg in &self.segments {
            if !(seg.duration >= 0.0 && seg.duration.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "segment duration {}",
                    seg.duration
                )));
            }
            for (k, d) in seg.drives.iter().enumerate() {
                if !graph.has_species(&d.species) {
                    return Err(Error::UnknownSpecies(d.species.clone()));
                }
                if d.envelope.duration > seg.duration * (1.0 + 1e-12) || d.envelope.duration < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "drive on {} outlasts its segment",
                        d.species
                    )));
                }
                if d.tones.is_empty() {
                    return Err(Error::InvalidParameter(format!(
                        "drive on {} has no tones",
                        d.species
                    )));
                }
                for other in &seg.drives[..k] {
                    if other.species == d.species
                        || graph.species_coupled(&other.species, &d.species)
                    {
                        return Err(Error::OverlappingSupports(
                            other.species.clone(),
                            d.species.clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn is_equatorial(axis: &[f64; 3]) -> bool {
    axis[2].abs() <= 1e-12
}

/// Drive phase producing rotations about the equatorial axis `n`:
/// `n = (cos phi, -sin phi, 0)`.
pub fn axis_phase(axis: &[f64; 3]) -> f64 {
    (-axis[1]).atan2(axis[0])
}

fn envelope_for(params: &SimParams, area: f64, axis: &[f64; 3]) -> Result<PulseEnvelope> {
    let (area, phase) = if area < 0.0 {
        (-area, axis_phase(axis) + PI)
    } else {
        (area, axis_phase(axis))
    };
    PulseEnvelope::calibrated(
        params.shape,
        params.peak_rabi,
        params.ramp_fraction,
        area,
        phase,
    )
}

/// Classes present on a species line, lowest multiplier first.
fn present_classes(graph: &ArchitectureGraph, species: &str) -> Vec<CouplingClass> {
    let set: BTreeSet<usize> = graph
        .members_of(species)
        .iter()
        .map(|&i| {
            CouplingClass::ALL
                .iter()
                .position(|c| *c == graph.nodes()[i].class)
                .unwrap_or(0)
        })
        .collect();
    set.into_iter().map(|k| CouplingClass::ALL[k]).collect()
}

/// Equatorial rotations `V`, `R'` with `R(theta, n) = V R' V^dagger`.
fn equatorial_conjugation(rot: &RotationSpec) -> (RotationSpec, RotationSpec) {
    let [nx, ny, nz] = rot.axis;
    let rho = nx.hypot(ny);
    let np = if rho > 1e-12 {
        [nx / rho, ny / rho, 0.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let a = [-np[1], np[0], 0.0];
    let beta = nz.atan2(rho);
    let v = RotationSpec {
        angle: -beta,
        axis: a,
    };
    (
        v,
        RotationSpec {
            angle: rot.angle,
            axis: np,
        },
    )
}

/// Drives that realise `pulse` with physical single-tone drives.
///
/// One drive rotates every class on the line about a common equatorial axis,
/// with angles in the ratio 1 : 2 : 4. Pulses outside that family are accepted
/// only when a single class is present, via an equatorial conjugation; all
/// other requests fail with [`Error::UnrealizablePulse`].
pub fn realize_pulse(
    graph: &ArchitectureGraph,
    pulse: &SpeciesPulse,
    params: &SimParams,
) -> Result<Vec<Drive>> {
    if !graph.has_species(&pulse.species) {
        return Err(Error::UnknownSpecies(pulse.species.clone()));
    }
    let classes = present_classes(graph, &pulse.species);
    let Some(&lowest) = classes.first() else {
        return Ok(vec![]);
    };
    let target = pulse.rotation_for(lowest);
    let m0 = lowest.multiplier();
    let per_drive: Vec<RotationSpec> = if is_equatorial(&target.axis) || target.is_identity() {
        vec![target]
    } else if classes.len() == 1 {
        let (v, r) = equatorial_conjugation(&target);
        vec![v.inverse(), r, v]
    } else {
        return Err(Error::UnrealizablePulse(format!(
            "{}: off-equatorial rotation with several classes on the line",
            pulse.species
        )));
    };
    // what the drives do to every present class, composed in order
    for &class in &classes {
        let ratio = class.multiplier() / m0;
        let achieved = per_drive.iter().fold(RotationSpec::identity(), |acc, r| {
            RotationSpec {
                angle: r.angle * ratio,
                axis: r.axis,
            }
            .compose(&acc)
        });
        if mat2_max_diff(&achieved.matrix(), &pulse.rotation_for(class).matrix())
            > REALIZATION_TOLERANCE
        {
            return Err(Error::UnrealizablePulse(format!(
                "{}: class {class:?} cannot follow the drive",
                pulse.species
            )));
        }
    }
    per_drive
        .iter()
        .filter(|r| r.angle != 0.0)
        .map(|r| {
            Ok(Drive::resonant(
                pulse.species.clone(),
                envelope_for(params, r.angle / m0, &r.axis)?,
            ))
        })
        .collect()
}

/// Sequential schedule for a list of species pulses (first pulse first).
pub fn schedule_for_pulses(
    graph: &ArchitectureGraph,
    pulses: &[SpeciesPulse],
    params: &SimParams,
) -> Result<DriveSchedule> {
    let mut schedule = DriveSchedule::new();
    for p in pulses {
        for d in realize_pulse(graph, p, params)? {
            schedule.push(Segment::single(d));
        }
    }
    Ok(schedule)
}

/// A pi pulse about x flipping `actuator`. The compensated form adds one tone
/// per possible number of excited neighbours so the flip happens whatever
/// they hold. The drive acts on the whole species line, so the actuator must
/// be the only member of its species.
pub fn actuator_flip_drive(
    graph: &ArchitectureGraph,
    actuator: usize,
    mode: ChargeMode,
    params: &SimParams,
) -> Result<Drive> {
    let node = graph.node(actuator)?;
    if node.role != Role::Actuator {
        return Err(Error::NotAnActuator(actuator));
    }
    if graph.members_of(&node.species).len() != 1 {
        return Err(Error::UnrealizablePulse(format!(
            "actuator {actuator} shares drive line {} with other qubits",
            node.species
        )));
    }
    let m = node.class.multiplier();
    let envelope = envelope_for(params, PI / m, &[1.0, 0.0, 0.0])?;
    let tones = match mode {
        ChargeMode::Resonant => vec![0.0],
        ChargeMode::Compensated => (0..=graph.coordination(actuator))
            .map(|k| 2.0 * graph.zeta() * k as f64)
            .collect(),
    };
    Ok(Drive {
        species: node.species.clone(),
        envelope,
        tones,
    })
}

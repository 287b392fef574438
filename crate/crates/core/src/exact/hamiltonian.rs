use nalgebra::DMatrix;

use super::schedule::DriveSchedule;
use crate::architecture::ArchitectureGraph;
use crate::statevec::{qubit_mask, DenseOperator, MAX_DENSE_QUBITS};
use crate::{Error, Result, C64};

/// Instantaneous drive on one species line: regular-class Rabi frequency and phase.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveDrive {
    pub species: String,
    pub rabi: f64,
    pub phase: f64,
}

impl ActiveDrive {
    pub fn new(species: impl Into<String>, rabi: f64, phase: f64) -> Self {
        Self {
            species: species.into(),
            rabi,
            phase,
        }
    }

    /// From a complex field `rabi * e^{i phase}`.
    pub fn from_field(species: impl Into<String>, field: C64) -> Self {
        Self {
            species: species.into(),
            rabi: field.norm(),
            phase: field.arg(),
        }
    }

    fn field(&self) -> C64 {
        C64::from_polar(self.rabi, self.phase)
    }
}

/// Diagonal of the ZZ term: `2 zeta` per edge with both ends excited.
pub fn zz_diagonal(graph: &ArchitectureGraph) -> Vec<f64> {
    let n = graph.n_qubits();
    let masks: Vec<usize> = graph
        .edges()
        .iter()
        .filter(|(a, b)| a < &n && b < &n && a != b)
        .map(|&(a, b)| qubit_mask(n, a) | qubit_mask(n, b))
        .collect();
    let two_zeta = 2.0 * graph.zeta();
    (0..1usize << n)
        .map(|i| two_zeta * masks.iter().filter(|&&m| i & m == m).count() as f64)
        .collect()
}

/// Adds `(field/2) |g><e| + h.c.` on qubit `q`.
pub(crate) fn add_drive_term(h: &mut DMatrix<C64>, n: usize, q: usize, field: C64) {
    let bit = qubit_mask(n, q);
    for i in 0..1usize << n {
        if i & bit == 0 {
            h[(i, i | bit)] += field * 0.5;
            h[(i | bit, i)] += field.conj() * 0.5;
        }
    }
}

/// Rotating-frame Hamiltonian (hbar = 1): class-scaled drive terms on every
/// member of each driven species plus the ZZ interaction.
pub fn build_rwa_hamiltonian(
    graph: &ArchitectureGraph,
    drives: &[ActiveDrive],
) -> Result<DenseOperator> {
    let n = graph.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::DenseLimit {
            limit: MAX_DENSE_QUBITS,
            requested: n,
        });
    }
    let d = 1usize << n;
    let zz = zz_diagonal(graph);
    let mut h = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::new(zz[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    for drive in drives {
        if !graph.has_species(&drive.species) {
            return Err(Error::UnknownSpecies(drive.species.clone()));
        }
        for q in graph.members_of(&drive.species) {
            add_drive_term(
                &mut h,
                n,
                q,
                drive.field() * graph.nodes()[q].class.multiplier(),
            );
        }
    }
    DenseOperator::from_matrix(n, h)
}

/// The drives of `schedule` that are on at absolute time `t`.
pub fn active_drives_at(schedule: &DriveSchedule, t: f64) -> Vec<ActiveDrive> {
    let mut start = 0.0;
    for seg in &schedule.segments {
        if t >= start && t < start + seg.duration {
            let local = t - start;
            return seg
                .drives
                .iter()
                .filter(|d| local <= d.envelope.duration)
                .map(|d| {
                    ActiveDrive::from_field(
                        d.species.clone(),
                        d.coefficient(d.envelope.rabi(local), t),
                    )
                })
                .collect();
        }
        start += seg.duration;
    }
    vec![]
}

/// `H(t)` for a schedule.
pub fn schedule_hamiltonian(
    graph: &ArchitectureGraph,
    schedule: &DriveSchedule,
    t: f64,
) -> Result<DenseOperator> {
    build_rwa_hamiltonian(graph, &active_drives_at(schedule, t))
}

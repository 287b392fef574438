use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::architecture::{ArchitectureGraph, CouplingClass};
use crate::statevec::{DenseOperator, RotationSpec, StateVector};
use crate::{Error, Result};

/// One global pulse on a drive line with independent rotations per coupling
/// class. A missing double-crossed rotation means those qubits stay idle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesPulse {
    pub species: String,
    pub regular: RotationSpec,
    pub crossed: RotationSpec,
    pub double_crossed: Option<RotationSpec>,
}

impl SpeciesPulse {
    pub fn new(species: impl Into<String>, regular: RotationSpec, crossed: RotationSpec) -> Self {
        Self {
            species: species.into(),
            regular,
            crossed,
            double_crossed: None,
        }
    }

    pub fn with_double_crossed(mut self, rot: RotationSpec) -> Self {
        self.double_crossed = Some(rot);
        self
    }

    /// Rotates only the members of `class`.
    pub fn on_class(species: impl Into<String>, class: CouplingClass, rot: RotationSpec) -> Self {
        let id = RotationSpec::identity();
        match class {
            CouplingClass::Regular => Self::new(species, rot, id),
            CouplingClass::Crossed => Self::new(species, id, rot),
            CouplingClass::DoubleCrossed => Self::new(species, id, id).with_double_crossed(rot),
        }
    }

    /// The pulse a single physical drive of regular-class area `angle` produces:
    /// crossed and double-crossed members rotate by twice and four times the angle.
    pub fn physical(species: impl Into<String>, angle: f64, axis: [f64; 3]) -> Result<Self> {
        Ok(Self {
            species: species.into(),
            regular: RotationSpec::new(angle, axis)?,
            crossed: RotationSpec::new(2.0 * angle, axis)?,
            double_crossed: Some(RotationSpec::new(4.0 * angle, axis)?),
        })
    }

    pub fn rotation_for(&self, class: CouplingClass) -> RotationSpec {
        match class {
            CouplingClass::Regular => self.regular,
            CouplingClass::Crossed => self.crossed,
            CouplingClass::DoubleCrossed => {
                self.double_crossed.unwrap_or_else(RotationSpec::identity)
            }
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            species: self.species.clone(),
            regular: self.regular.inverse(),
            crossed: self.crossed.inverse(),
            double_crossed: self.double_crossed.map(|r| r.inverse()),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.regular.is_identity()
            && self.crossed.is_identity()
            && self.double_crossed.is_none_or(|r| r.is_identity())
    }
}

fn check_state(graph: &ArchitectureGraph, state: &StateVector) -> Result<()> {
    if state.n_qubits() != graph.n_qubits() {
        return Err(Error::DimensionMismatch(state.n_qubits(), graph.n_qubits()));
    }
    Ok(())
}

/// Applies the conditional rotation of `target` in place: `rot` acts when
/// every graph neighbour of `target` is in `|g>`.
pub fn apply_conditional_rotation(
    graph: &ArchitectureGraph,
    target: usize,
    rot: &RotationSpec,
    state: &mut StateVector,
) -> Result<()> {
    check_state(graph, state)?;
    graph.node(target)?;
    state.apply_controlled_rotation(target, graph.neighbors(target), rot)
}

/// Dense form of the conditional rotation of `target`.
pub fn conditional_rotation(
    graph: &ArchitectureGraph,
    target: usize,
    rot: &RotationSpec,
) -> Result<DenseOperator> {
    graph.node(target)?;
    DenseOperator::from_state_map(graph.n_qubits(), |mut s| {
        apply_conditional_rotation(graph, target, rot, &mut s)?;
        Ok(s)
    })
}

/// Applies a species pulse in place, skipping the qubits in `frozen`.
pub fn apply_species_pulse_except(
    graph: &ArchitectureGraph,
    pulse: &SpeciesPulse,
    frozen: &HashSet<usize>,
    state: &mut StateVector,
) -> Result<()> {
    check_state(graph, state)?;
    if !graph.has_species(&pulse.species) {
        return Err(Error::UnknownSpecies(pulse.species.clone()));
    }
    for i in graph.members_of(&pulse.species) {
        if frozen.contains(&i) {
            continue;
        }
        let rot = pulse.rotation_for(graph.nodes()[i].class);
        if !rot.is_identity() {
            state.apply_controlled_rotation(i, graph.neighbors(i), &rot)?;
        }
    }
    Ok(())
}

/// Applies a species pulse in place. Members of one species are never
/// adjacent, so their conditional rotations commute and order is irrelevant.
pub fn apply_species_pulse(
    graph: &ArchitectureGraph,
    pulse: &SpeciesPulse,
    state: &mut StateVector,
) -> Result<()> {
    apply_species_pulse_except(graph, pulse, &HashSet::new(), state)
}

/// Dense operator of a species pulse.
pub fn species_pulse(graph: &ArchitectureGraph, pulse: &SpeciesPulse) -> Result<DenseOperator> {
    if !graph.has_species(&pulse.species) {
        return Err(Error::UnknownSpecies(pulse.species.clone()));
    }
    DenseOperator::from_state_map(graph.n_qubits(), |mut s| {
        apply_species_pulse(graph, pulse, &mut s)?;
        Ok(s)
    })
}

/// Applies `pulses` in list order (the first pulse acts first).
pub fn apply_sequence(
    graph: &ArchitectureGraph,
    pulses: &[SpeciesPulse],
    state: &StateVector,
) -> Result<StateVector> {
    check_state(graph, state)?;
    let mut out = state.clone();
    for p in pulses {
        apply_species_pulse(graph, p, &mut out)?;
    }
    Ok(out)
}

/// Species pulse with every member of `region` held fixed, which is what a
/// pulse does to qubits whose actuator partners are excited.
pub fn frozen_propagator(
    graph: &ArchitectureGraph,
    region: &[usize],
    pulse: &SpeciesPulse,
) -> Result<DenseOperator> {
    for &q in region {
        graph.node(q)?;
        if graph.actuator_partners(q).is_empty() {
            return Err(Error::MissingPartner(q));
        }
    }
    if !graph.has_species(&pulse.species) {
        return Err(Error::UnknownSpecies(pulse.species.clone()));
    }
    let frozen: HashSet<usize> = region.iter().copied().collect();
    DenseOperator::from_state_map(graph.n_qubits(), |mut s| {
        apply_species_pulse_except(graph, pulse, &frozen, &mut s)?;
        Ok(s)
    })
}

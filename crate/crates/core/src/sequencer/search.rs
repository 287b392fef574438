use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::contract::{contract_basis, expected_output};
use super::ir::ScheduleIR;
use super::request::GateRequest;
use crate::architecture::ArchitectureGraph;
use crate::effective::{apply_species_pulse, SpeciesPulse};
use crate::statevec::{DenseOperator, RotationSpec, StateVector};
use crate::{Error, Result, C64};

/// Largest register the search accepts.
pub const SEARCH_MAX_QUBITS: usize = 8;
/// Largest depth the search accepts.
pub const SEARCH_MAX_DEPTH: usize = 8;
/// Default cap on distinct operators visited.
pub const DEFAULT_NODE_CAP: usize = 200_000;
/// Cap on stored amplitudes across the frontier (about 512 MiB).
pub const SEARCH_AMPLITUDE_BUDGET: usize = 1 << 25;
/// Phase-insensitive match tolerance on operator entries.
pub const SEARCH_TOLERANCE: f64 = 1e-8;

/// What the search must reproduce: `target` restricted to the listed input
/// columns (all columns when `inputs` is empty).
#[derive(Debug, Clone)]
pub struct SearchTarget {
    pub operator: DenseOperator,
    pub inputs: Vec<usize>,
}

impl SearchTarget {
    pub fn full(operator: DenseOperator) -> Self {
        Self {
            operator,
            inputs: Vec::new(),
        }
    }

    pub fn on_inputs(operator: DenseOperator, inputs: Vec<usize>) -> Self {
        Self { operator, inputs }
    }

    /// The contract of `req` on its basis inputs. Columns outside the
    /// contract basis are left as identity and never compared.
    pub fn for_request(graph: &ArchitectureGraph, req: &GateRequest) -> Result<Self> {
        let n = graph.n_qubits();
        if n > SEARCH_MAX_QUBITS {
            return Err(Error::DenseLimit {
                limit: SEARCH_MAX_QUBITS,
                requested: n,
            });
        }
        let inputs = contract_basis(graph, req)?;
        let mut m = DMatrix::identity(1usize << n, 1usize << n);
        for &j in &inputs {
            let out = expected_output(graph, req, &StateVector::basis(n, j)?)?;
            m.set_column(j, &nalgebra::DVector::from_column_slice(out.amplitudes()));
        }
        Ok(Self::on_inputs(DenseOperator::from_matrix(n, m)?, inputs))
    }
}

/// Angles and axes of the default alphabet.
pub const ALPHABET_ANGLES: [f64; 5] = [
    std::f64::consts::FRAC_PI_2,
    -std::f64::consts::FRAC_PI_2,
    std::f64::consts::PI,
    -std::f64::consts::PI,
    2.0 * std::f64::consts::PI,
];

/// Class-selective pulses for every species and class present in the graph,
/// angles from [`ALPHABET_ANGLES`] and axes x, y and z.
pub fn default_alphabet(graph: &ArchitectureGraph) -> Vec<SpeciesPulse> {
    let mut out = Vec::new();
    for sp in graph.species() {
        let mut classes: Vec<_> = graph
            .members_of(&sp.id)
            .into_iter()
            .map(|i| graph.nodes()[i].class)
            .collect();
        classes.sort_by_key(|c| c.multiplier() as u32);
        classes.dedup();
        for class in classes {
            for angle in ALPHABET_ANGLES {
                for rot in [
                    RotationSpec::x(angle),
                    RotationSpec::y(angle),
                    RotationSpec::z(angle),
                ] {
                    out.push(SpeciesPulse::on_class(sp.id.clone(), class, rot));
                }
            }
        }
    }
    out
}

type Columns = Vec<StateVector>;

fn phase_key(cols: &Columns) -> u64 {
    // divide out the phase of the largest first-column entry so that
    // operators equal up to a global phase collide
    let first = cols[0].amplitudes();
    let pivot = first.iter().copied().fold(C64::new(0.0, 0.0), |best, a| {
        if a.norm() > best.norm() + 1e-9 {
            a
        } else {
            best
        }
    });
    let unit = if pivot.norm() > 0.0 {
        pivot.conj() / pivot.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let mut h = DefaultHasher::new();
    for c in cols {
        for a in c.amplitudes() {
            let z = a * unit;
            ((z.re * 1e7).round() as i64).hash(&mut h);
            ((z.im * 1e7).round() as i64).hash(&mut h);
        }
    }
    h.finish()
}

fn matches(cols: &Columns, want: &DMatrix<C64>) -> bool {
    let overlap: C64 = cols
        .iter()
        .enumerate()
        .map(|(j, c)| {
            c.amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| want[(i, j)].conj() * a)
                .sum::<C64>()
        })
        .sum();
    if overlap.norm() == 0.0 {
        return false;
    }
    let phase = overlap.conj() / overlap.norm();
    cols.iter().enumerate().all(|(j, c)| {
        c.amplitudes()
            .iter()
            .enumerate()
            .all(|(i, a)| (a * phase - want[(i, j)]).norm() <= SEARCH_TOLERANCE)
    })
}

/// Breadth-first search for the shortest pulse string whose effective
/// replay equals `target` up to a global phase. Among shortest strings the
/// lexicographically smallest (by alphabet index) is returned. `Ok(None)`
/// means no string up to `max_depth` works.
pub fn search_sequence_with(
    graph: &ArchitectureGraph,
    target: &SearchTarget,
    alphabet: &[SpeciesPulse],
    max_depth: usize,
    node_cap: usize,
) -> Result<Option<ScheduleIR>> {
    let n = graph.n_qubits();
    if n > SEARCH_MAX_QUBITS {
        return Err(Error::DenseLimit {
            limit: SEARCH_MAX_QUBITS,
            requested: n,
        });
    }
    if max_depth > SEARCH_MAX_DEPTH {
        return Err(Error::InvalidRequest(format!(
            "search depth {max_depth} exceeds {SEARCH_MAX_DEPTH}"
        )));
    }
    if target.operator.n_qubits() != n {
        return Err(Error::DimensionMismatch(target.operator.n_qubits(), n));
    }
    for p in alphabet {
        if !graph.has_species(&p.species) {
            return Err(Error::UnknownSpecies(p.species.clone()));
        }
    }
    let inputs: Vec<usize> = if target.inputs.is_empty() {
        (0..1usize << n).collect()
    } else {
        target.inputs.clone()
    };
    let want = DMatrix::from_fn(1usize << n, inputs.len(), |i, j| {
        target.operator.get(i, inputs[j])
    });
    let start: Columns = inputs
        .iter()
        .map(|&i| StateVector::basis(n, i))
        .collect::<Result<_>>()?;
    let build = |path: &[usize]| {
        ScheduleIR::from_pulses("search", path.iter().map(|&k| alphabet[k].clone()))
    };
    if matches(&start, &want) {
        return Ok(Some(build(&[])));
    }
    let node_cap = node_cap
        .min(SEARCH_AMPLITUDE_BUDGET / (inputs.len() << n))
        .max(1);
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(phase_key(&start));
    let mut frontier: Vec<(Vec<usize>, Columns)> = vec![(Vec::new(), start)];
    for _depth in 1..=max_depth {
        let mut next_frontier = Vec::new();
        // chunks keep the expanded children small; order is preserved
        for chunk in frontier.chunks(64) {
            let children: Vec<Vec<(Vec<usize>, Columns)>> = chunk
                .par_iter()
                .map(|(path, cols)| {
                    alphabet
                        .iter()
                        .enumerate()
                        .map(|(k, pulse)| {
                            let mut next = cols.clone();
                            for c in &mut next {
                                apply_species_pulse(graph, pulse, c)?;
                            }
                            let mut p = path.clone();
                            p.push(k);
                            Ok((p, next))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            // children are in lexicographic order because the frontier is
            for (path, cols) in children.into_iter().flatten() {
                if matches(&cols, &want) {
                    return Ok(Some(build(&path)));
                }
                if seen.insert(phase_key(&cols)) {
                    if seen.len() > node_cap {
                        return Err(Error::SearchOverflow(node_cap));
                    }
                    next_frontier.push((path, cols));
                }
            }
        }
        if next_frontier.is_empty() {
            break;
        }
        frontier = next_frontier;
    }
    Ok(None)
}

/// [`search_sequence_with`] on the full space with the default node cap.
pub fn search_sequence(
    graph: &ArchitectureGraph,
    target: &DenseOperator,
    alphabet: &[SpeciesPulse],
    max_depth: usize,
) -> Result<Option<ScheduleIR>> {
    search_sequence_with(
        graph,
        &SearchTarget::full(target.clone()),
        alphabet,
        max_depth,
        DEFAULT_NODE_CAP,
    )
}

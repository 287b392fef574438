use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::envelope::PulseShape;
use super::hamiltonian::{add_drive_term, zz_diagonal};
use super::schedule::{DriveSchedule, Segment};
use crate::architecture::ArchitectureGraph;
use crate::statevec::{
    mat2_mul, mat2_unitarity_defect, qubit_mask, DenseOperator, Mat2, StateVector, MAX_DENSE_QUBITS,
};
use crate::{Error, Result, C64};

pub const DEFAULT_RAMP_FRACTION: f64 = 0.1;
pub const DEFAULT_MAX_STEP_PHASE: f64 = 0.02;
pub const DEFAULT_MIN_RAMP_STEPS: usize = 16;
pub const DEFAULT_UNITARITY_TOLERANCE: f64 = 1e-10;

/// Registers up to this size use the dense backend under [`Backend::Auto`].
pub const AUTO_DENSE_MAX_QUBITS: usize = 4;

/// The dense backend accumulates the full propagator up to this size and
/// otherwise evolves the state directly.
const DENSE_ACCUMULATE_MAX_QUBITS: usize = 6;

/// Number of step-halving retries before giving up on unitarity.
const MAX_REFINEMENTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Auto,
    /// Midpoint exponentials of the full Hamiltonian.
    Dense,
    /// Exact factorisation into two-level problems, one per driven qubit and
    /// number of excited neighbours, in the interaction frame of the ZZ term.
    Factorized,
}

/// Integration settings. `zeta` must equal the graph's coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub zeta: f64,
    /// Peak Rabi frequency of the regular class.
    pub peak_rabi: f64,
    pub shape: PulseShape,
    pub ramp_fraction: f64,
    /// Largest phase any Hamiltonian frequency may accumulate in one step.
    pub max_step_phase: f64,
    pub min_ramp_steps: usize,
    /// Fixed step size; disables automatic refinement.
    pub dt: Option<f64>,
    pub unitarity_tolerance: f64,
    pub backend: Backend,
    /// Report results in the interaction frame of the ZZ term, which is the
    /// frame of the blockade-limit model.
    pub zz_frame: bool,
}

impl SimParams {
    /// Parameters with blockade ratio `eta = |zeta / peak_rabi|`.
    pub fn for_eta(zeta: f64, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidSimParams(format!(
                "blockade ratio must be positive, got {eta}"
            )));
        }
        if !(zeta != 0.0 && zeta.is_finite()) {
            return Err(Error::InvalidSimParams(format!(
                "zeta must be nonzero, got {zeta}"
            )));
        }
        Ok(Self {
            zeta,
            peak_rabi: zeta.abs() / eta,
            shape: PulseShape::CosineRampFlatTop,
            ramp_fraction: DEFAULT_RAMP_FRACTION,
            max_step_phase: DEFAULT_MAX_STEP_PHASE,
            min_ramp_steps: DEFAULT_MIN_RAMP_STEPS,
            dt: None,
            unitarity_tolerance: DEFAULT_UNITARITY_TOLERANCE,
            backend: Backend::Auto,
            zz_frame: true,
        })
    }

    pub fn eta(&self) -> f64 {
        (self.zeta / self.peak_rabi).abs()
    }

    /// Same settings at another blockade ratio.
    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        let base = Self::for_eta(self.zeta, eta)?;
        Ok(Self {
            peak_rabi: base.peak_rabi,
            ..self.clone()
        })
    }

    pub fn check(&self, graph: &ArchitectureGraph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSimParams(msg));
        if (self.zeta - graph.zeta()).abs() > 1e-12 * graph.zeta().abs() {
            return bad(format!(
                "zeta {} differs from the graph's {}",
                self.zeta,
                graph.zeta()
            ));
        }
        if !(self.peak_rabi > 0.0 && self.peak_rabi.is_finite()) {
            return bad(format!("peak Rabi frequency {}", self.peak_rabi));
        }
        if !(self.max_step_phase > 0.0) {
            return bad(format!("max step phase {}", self.max_step_phase));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("time step {dt}"));
            }
        }
        if !(self.unitarity_tolerance > 0.0) {
            return bad(format!("unitarity tolerance {}", self.unitarity_tolerance));
        }
        if !(0.0..0.5).contains(&self.ramp_fraction) {
            return bad(format!("ramp fraction {}", self.ramp_fraction));
        }
        Ok(())
    }
}

/// Diagnostics of one propagation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagationStats {
    pub backend: Backend,
    pub steps: usize,
    /// `max |(U^dagger U - 1)_ij|`, exact for accumulated propagators and an
    /// upper bound (sum over factors) otherwise.
    pub unitarity_defect: f64,
    /// Total schedule duration in seconds.
    pub duration: f64,
    pub refinements: usize,
}

/// One integration step: its length and the regular-class field of every
/// drive in the segment (envelope averaged over the step, carrier at the
/// midpoint).
struct Step {
    dt: f64,
    fields: Vec<C64>,
}

fn max_frequency(graph: &ArchitectureGraph, seg: &Segment) -> f64 {
    let kappa_max = (0..graph.n_qubits())
        .map(|i| graph.coordination(i))
        .max()
        .unwrap_or(0) as f64;
    let mut w = 2.0 * graph.zeta().abs() * kappa_max;
    for d in &seg.drives {
        let m = graph
            .members_of(&d.species)
            .iter()
            .map(|&i| graph.nodes()[i].class.multiplier())
            .fold(0.0, f64::max);
        w += d.envelope.peak_rabi * m * d.tones.len() as f64;
        w += d.tones.iter().map(|t| t.abs()).fold(0.0, f64::max);
    }
    w
}

fn segment_steps(
    graph: &ArchitectureGraph,
    seg: &Segment,
    start: f64,
    params: &SimParams,
    phase_budget: f64,
) -> Vec<Step> {
    if seg.duration <= 0.0 {
        return vec![];
    }
    let w = max_frequency(graph, seg);
    let dt_max = params.dt.unwrap_or(if w > 0.0 {
        phase_budget / w
    } else {
        f64::INFINITY
    });
    let mut cuts: Vec<f64> = vec![0.0, seg.duration];
    for d in &seg.drives {
        cuts.extend(d.envelope.breakpoints());
    }
    cuts.retain(|&t| (0.0..=seg.duration).contains(&t));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * seg.duration);
    let mut steps = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let ramping = seg.drives.iter().any(|d| d.envelope.is_ramping(a, b));
        let oscillating = seg
            .drives
            .iter()
            .any(|d| a < d.envelope.duration && !d.is_single_resonant_tone());
        let constant = !ramping && !oscillating;
        let n = if constant && params.dt.is_none() {
            1
        } else {
            let by_dt = ((b - a) / dt_max).ceil().max(1.0) as usize;
            if ramping {
                by_dt.max(params.min_ramp_steps)
            } else {
                by_dt
            }
        };
        let h = (b - a) / n as f64;
        for s in 0..n {
            let s0 = a + h * s as f64;
            let s1 = if s + 1 == n { b } else { s0 + h };
            let t_mid = start + 0.5 * (s0 + s1);
            let fields = seg
                .drives
                .iter()
                .map(|d| {
                    if s0 >= d.envelope.duration {
                        return C64::new(0.0, 0.0);
                    }
                    let rabi = (d.envelope.area_until(s1) - d.envelope.area_until(s0)) / (s1 - s0);
                    d.coefficient(rabi, t_mid)
                })
                .collect();
            steps.push(Step {
                dt: s1 - s0,
                fields,
            });
        }
    }
    steps
}

fn resolve_backend(graph: &ArchitectureGraph, params: &SimParams) -> Backend {
    match params.backend {
        Backend::Auto if graph.n_qubits() <= AUTO_DENSE_MAX_QUBITS => Backend::Dense,
        Backend::Auto => Backend::Factorized,
        b => b,
    }
}

/// `exp(-i H dt)` for `H = [[0, b], [b*, d]]`.
fn expm2(b: C64, d: f64, dt: f64) -> Mat2 {
    let a0 = 0.5 * d;
    let (ax, ay, az) = (b.re, -b.im, -0.5 * d);
    let r = (ax * ax + ay * ay + az * az).sqrt();
    let c = (r * dt).cos();
    let s = if r > 0.0 { (r * dt).sin() / r } else { dt };
    let ph = C64::from_polar(1.0, -a0 * dt);
    let i = C64::new(0.0, 1.0);
    [
        [ph * (C64::new(c, 0.0) - i * s * az), ph * (-i * s * b)],
        [
            ph * (-i * s * b.conj()),
            ph * (C64::new(c, 0.0) + i * s * az),
        ],
    ]
}

fn expm_hermitian(h: DMatrix<C64>, dt: f64) -> DMatrix<C64> {
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors;
    let phases = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| {
        v[(i, j)] * C64::from_polar(1.0, -eig.eigenvalues[j] * dt)
    });
    phases * v.adjoint()
}

fn matrix_defect(u: &DMatrix<C64>) -> f64 {
    let p = u.adjoint() * u;
    let mut worst: f64 = 0.0;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let t = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - C64::new(t, 0.0)).norm());
        }
    }
    worst
}

/// Either a full propagator or a set of state columns being evolved.
enum Target<'a> {
    Matrix(&'a mut DMatrix<C64>),
    States(&'a mut [Vec<C64>]),
}

fn dense_step_matrix(
    graph: &ArchitectureGraph,
    seg: &Segment,
    zz: &[f64],
    step: &Step,
) -> DMatrix<C64> {
    let n = graph.n_qubits();
    let d = zz.len();
    if step.fields.iter().all(|f| f.norm() == 0.0) {
        return DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::from_polar(1.0, -zz[i] * step.dt)
            } else {
                C64::new(0.0, 0.0)
            }
        });
    }
    let mut h = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::new(zz[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    for (drive, field) in seg.drives.iter().zip(&step.fields) {
        for q in graph.members_of(&drive.species) {
            add_drive_term(&mut h, n, q, *field * graph.nodes()[q].class.multiplier());
        }
    }
    expm_hermitian(h, step.dt)
}

/// Dense evolution in the Schrodinger picture of the rotating frame.
/// Returns (steps, defect contribution).
fn run_dense(
    graph: &ArchitectureGraph,
    schedule: &DriveSchedule,
    params: &SimParams,
    budget: f64,
    target: &mut Target,
) -> (usize, f64) {
    let zz = zz_diagonal(graph);
    let mut start = 0.0;
    let mut count = 0;
    let mut defect_sum = 0.0;
    for seg in &schedule.segments {
        for step in segment_steps(graph, seg, start, params, budget) {
            let u = dense_step_matrix(graph, seg, &zz, &step);
            match target {
                Target::Matrix(m) => **m = &u * &**m,
                Target::States(states) => {
                    defect_sum += matrix_defect(&u);
                    for s in states.iter_mut() {
                        let v = nalgebra::DVector::from_column_slice(s);
                        s.copy_from_slice((&u * v).as_slice());
                    }
                }
            }
            count += 1;
        }
        start += seg.duration;
    }
    (count, defect_sum)
}

/// Conditional two-level update applied in place: the block used for qubit
/// `bit` depends on how many bits of `nmask` are set.
struct LocalOp {
    bit: usize,
    nmask: usize,
    blocks: Vec<Mat2>,
}

fn apply_local_op(op: &LocalOp, amps: &mut [C64]) {
    for idx in 0..amps.len() {
        if idx & op.bit != 0 {
            continue;
        }
        let j = idx | op.bit;
        let u = &op.blocks[(idx & op.nmask).count_ones() as usize];
        let (a, b) = (amps[idx], amps[j]);
        amps[idx] = u[0][0] * a + u[0][1] * b;
        amps[j] = u[1][0] * a + u[1][1] * b;
    }
}

/// Interaction-frame factors for every driven qubit of every segment.
fn factorized_ops(
    graph: &ArchitectureGraph,
    schedule: &DriveSchedule,
    params: &SimParams,
    budget: f64,
) -> Result<(Vec<LocalOp>, usize, f64)> {
    let n = graph.n_qubits();
    let mut ops = Vec::new();
    let mut start = 0.0;
    let mut count = 0;
    let mut defect = 0.0;
    for seg in &schedule.segments {
        let steps = segment_steps(graph, seg, start, params, budget);
        count += steps.len();
        let t0 = start;
        let t1 = start + seg.duration;
        for (di, drive) in seg.drives.iter().enumerate() {
            if graph.species_coupled(&drive.species, &drive.species) {
                return Err(Error::InvalidGraph(format!(
                    "species {} has internal edges",
                    drive.species
                )));
            }
            // cache keyed by (multiplier, excited-neighbour count)
            let mut cache: Vec<((u8, usize), Mat2)> = Vec::new();
            for q in graph.members_of(&drive.species) {
                let m = graph.nodes()[q].class.multiplier();
                let kappa = graph.coordination(q);
                let mut blocks = Vec::with_capacity(kappa + 1);
                let mut worst: f64 = 0.0;
                for k in 0..=kappa {
                    let key = (m as u8, k);
                    let u = if let Some((_, u)) = cache.iter().find(|(kk, _)| *kk == key) {
                        *u
                    } else {
                        let det = 2.0 * graph.zeta() * k as f64;
                        let mut us: Mat2 = [
                            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
                        ];
                        for step in &steps {
                            us = mat2_mul(&expm2(step.fields[di] * m * 0.5, det, step.dt), &us);
                        }
                        let e0 = C64::from_polar(1.0, -det * t0);
                        let e1 = C64::from_polar(1.0, det * t1);
                        let ui = [
                            [us[0][0], us[0][1] * e0],
                            [e1 * us[1][0], e1 * e0 * us[1][1]],
                        ];
                        cache.push((key, ui));
                        ui
                    };
                    worst = worst.max(mat2_unitarity_defect(&u));
                    blocks.push(u);
                }
                defect += worst;
                let nmask = graph
                    .neighbors(q)
                    .iter()
                    .fold(0, |acc, &j| acc | qubit_mask(n, j));
                ops.push(LocalOp {
                    bit: qubit_mask(n, q),
                    nmask,
                    blocks,
                });
            }
        }
        start = t1;
    }
    Ok((ops, count, defect))
}

fn frame_phase(zz: &[f64], sign: f64, t: f64, amps: &mut [C64]) {
    for (a, w) in amps.iter_mut().zip(zz) {
        *a *= C64::from_polar(1.0, sign * w * t);
    }
}

/// Evolves the given columns; returns them with stats.
fn evolve_columns(
    graph: &ArchitectureGraph,
    schedule: &DriveSchedule,
    params: &SimParams,
    mut columns: Vec<Vec<C64>>,
    want_matrix: bool,
) -> Result<(Vec<Vec<C64>>, Option<DMatrix<C64>>, PropagationStats)> {
    params.check(graph)?;
    schedule.check(graph)?;
    let n = graph.n_qubits();
    let backend = resolve_backend(graph, params);
    if backend == Backend::Dense && n > MAX_DENSE_QUBITS {
        return Err(Error::DenseLimit {
            limit: MAX_DENSE_QUBITS,
            requested: n,
        });
    }
    let total = schedule.total_duration();
    let dim = 1usize << n;
    let mut last_defect = f64::INFINITY;
    let retries = if params.dt.is_some() {
        0
    } else {
        MAX_REFINEMENTS
    };
    for refinement in 0..=retries {
        let budget = params.max_step_phase / f64::powi(2.0, refinement as i32);
        let (steps, defect, matrix, out) = match backend {
            Backend::Dense | Backend::Auto => {
                if want_matrix || n <= DENSE_ACCUMULATE_MAX_QUBITS {
                    let mut u = DMatrix::<C64>::identity(dim, dim);
                    let (steps, _) =
                        run_dense(graph, schedule, params, budget, &mut Target::Matrix(&mut u));
                    if params.zz_frame {
                        let zz = zz_diagonal(graph);
                        for (i, w) in zz.iter().enumerate() {
                            let ph = C64::from_polar(1.0, w * total);
                            u.row_mut(i).iter_mut().for_each(|z| *z *= ph);
                        }
                    }
                    let defect = matrix_defect(&u);
                    let out = columns
                        .iter()
                        .map(|c| {
                            (&u * nalgebra::DVector::from_column_slice(c))
                                .as_slice()
                                .to_vec()
                        })
                        .collect::<Vec<_>>();
                    (steps, defect, Some(u), out)
                } else {
                    let mut cols = columns.clone();
                    let (steps, defect) = run_dense(
                        graph,
                        schedule,
                        params,
                        budget,
                        &mut Target::States(&mut cols),
                    );
                    if params.zz_frame {
                        let zz = zz_diagonal(graph);
                        cols.iter_mut()
                            .for_each(|c| frame_phase(&zz, 1.0, total, c));
                    }
                    (steps, defect, None, cols)
                }
            }
            Backend::Factorized => {
                let (ops, steps, defect) = factorized_ops(graph, schedule, params, budget)?;
                let zz = (!params.zz_frame).then(|| zz_diagonal(graph));
                let mut cols = columns.clone();
                for c in cols.iter_mut() {
                    for op in &ops {
                        apply_local_op(op, c);
                    }
                    if let Some(zz) = &zz {
                        frame_phase(zz, -1.0, total, c);
                    }
                }
                let matrix = want_matrix.then(|| DMatrix::from_fn(dim, dim, |i, j| cols[j][i]));
                (steps, defect, matrix, cols)
            }
        };
        last_defect = defect;
        if defect <= params.unitarity_tolerance {
            columns = out;
            let stats = PropagationStats {
                backend,
                steps,
                unitarity_defect: defect,
                duration: total,
                refinements: refinement,
            };
            return Ok((columns, matrix, stats));
        }
    }
    Err(Error::UnitarityViolated(last_defect))
}

/// Evolves `state` under `schedule` and reports diagnostics.
pub fn propagate_report(
    graph: &ArchitectureGraph,
    schedule: &DriveSchedule,
    params: &SimParams,
    state: &StateVector,
) -> Result<(StateVector, PropagationStats)> {
    if state.n_qubits() != graph.n_qubits() {
        return Err(Error::DimensionMismatch(state.n_qubits(), graph.n_qubits()));
    }
    let (mut cols, _, stats) = evolve_columns(
        graph,
        schedule,
        params,
        vec![state.amplitudes().to_vec()],
        false,
    )?;
    Ok((
        StateVector::from_raw(graph.n_qubits(), cols.remove(0)),
        stats,
    ))
}

/// Evolves `state` under `schedule`.
pub fn propagate(
    graph: &ArchitectureGraph,
    schedule: &DriveSchedule,
    params: &SimParams,
    state: &StateVector,
) -> Result<StateVector> {
    propagate_report(graph, schedule, params, state).map(|(s, _)| s)
}

/// Full propagator of `schedule`.
pub fn propagator(
    graph: &ArchitectureGraph,
    schedule: &DriveSchedule,
    params: &SimParams,
) -> Result<(DenseOperator, PropagationStats)> {
    let n = graph.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::DenseLimit {
            limit: MAX_DENSE_QUBITS,
            requested: n,
        });
    }
    let dim = 1usize << n;
    let backend = resolve_backend(graph, params);
    let columns = if backend == Backend::Factorized {
        (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|i| C64::new((i == j) as u8 as f64, 0.0))
                    .collect()
            })
            .collect()
    } else {
        vec![]
    };
    let (_, matrix, stats) = evolve_columns(graph, schedule, params, columns, true)?;
    let matrix = matrix.expect("matrix requested");
    let mut stats = stats;
    if backend == Backend::Factorized {
        stats.unitarity_defect = matrix_defect(&matrix);
    }
    Ok((DenseOperator::from_matrix(n, matrix)?, stats))
}

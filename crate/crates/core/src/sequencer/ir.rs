use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::architecture::{ArchitectureGraph, Role};
use crate::effective::{ChargeMode, SpeciesPulse};
use crate::statevec::RotationSpec;
use crate::{Error, Result};

/// One instruction of a [`ScheduleIR`].
#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Pulse(SpeciesPulse),
    /// Drive the actuator to `|e>`.
    Charge {
        actuator: usize,
        mode: ChargeMode,
    },
    /// Drive the actuator to `|g>`.
    Discharge {
        actuator: usize,
        mode: ChargeMode,
    },
    /// Marks a gate boundary; no effect on the dynamics.
    Barrier,
}

/// An ordered list of global-control instructions plus the name of the
/// operation it was compiled from.
///
/// Text form, one instruction per line:
///
/// ```text
/// # source: cz
/// PULSE A r:0,1,0,0 x:6.283185307179586,1,0,0 xx:0,1,0,0
/// CHARGE 8 comp
/// DISCHARGE 8
/// BARRIER
/// ```
///
/// `r:`, `x:` and `xx:` give the rotation `angle,nx,ny,nz` of the regular,
/// crossed and double-crossed members; `xx:` may be omitted, which leaves
/// double-crossed members idle. A trailing `comp` selects the compensated
/// multi-tone flip. Lines starting with `#` are comments except for the
/// `# source:` header. Numbers are printed in their shortest round-trip form,
/// so printing and parsing are exact inverses.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScheduleIR {
    pub source: String,
    pub ops: Vec<Instruction>,
}

impl ScheduleIR {
    pub fn new(source: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            ops: Vec::new(),
        }
    }

    pub fn from_pulses(
        source: impl Into<String>,
        pulses: impl IntoIterator<Item = SpeciesPulse>,
    ) -> Self {
        Self {
            source: source.into(),
            ops: pulses.into_iter().map(Instruction::Pulse).collect(),
        }
    }

    pub fn push(&mut self, op: Instruction) {
        self.ops.push(op);
    }

    pub fn extend(&mut self, other: &ScheduleIR) {
        self.ops.extend(other.ops.iter().cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn pulses(&self) -> impl Iterator<Item = &SpeciesPulse> {
        self.ops.iter().filter_map(|op| match op {
            Instruction::Pulse(p) => Some(p),
            _ => None,
        })
    }

    pub fn pulse_count(&self) -> usize {
        self.pulses().count()
    }

    /// The IR that undoes this one: reversed order, inverted pulses and
    /// swapped charge/discharge.
    pub fn inverse(&self) -> Self {
        let ops = self
            .ops
            .iter()
            .rev()
            .map(|op| match op {
                Instruction::Pulse(p) => Instruction::Pulse(p.inverse()),
                Instruction::Charge { actuator, mode } => Instruction::Discharge {
                    actuator: *actuator,
                    mode: *mode,
                },
                Instruction::Discharge { actuator, mode } => Instruction::Charge {
                    actuator: *actuator,
                    mode: *mode,
                },
                Instruction::Barrier => Instruction::Barrier,
            })
            .collect();
        Self {
            source: self.source.clone(),
            ops,
        }
    }

    /// Checks the IR against a graph: every pulse names an existing species
    /// and every charge or discharge names an actuator.
    pub fn check(&self, graph: &ArchitectureGraph) -> Result<()> {
        for op in &self.ops {
            match op {
                Instruction::Pulse(p) => {
                    if !graph.has_species(&p.species) {
                        return Err(Error::UnknownSpecies(p.species.clone()));
                    }
                }
                Instruction::Charge { actuator, .. } | Instruction::Discharge { actuator, .. } => {
                    if graph.node(*actuator)?.role != Role::Actuator {
                        return Err(Error::NotAnActuator(*actuator));
                    }
                }
                Instruction::Barrier => {}
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }
}

fn write_rotation(out: &mut String, key: &str, r: &RotationSpec) {
    let [x, y, z] = r.axis;
    let _ = write!(out, " {key}:{},{x},{y},{z}", r.angle);
}

impl fmt::Display for ScheduleIR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.source.is_empty() {
            writeln!(f, "# source: {}", self.source)?;
        }
        for op in &self.ops {
            let mut line = String::new();
            match op {
                Instruction::Pulse(p) => {
                    line.push_str("PULSE ");
                    line.push_str(&p.species);
                    write_rotation(&mut line, "r", &p.regular);
                    write_rotation(&mut line, "x", &p.crossed);
                    if let Some(xx) = &p.double_crossed {
                        write_rotation(&mut line, "xx", xx);
                    }
                }
                Instruction::Charge { actuator, mode }
                | Instruction::Discharge { actuator, mode } => {
                    let word = if matches!(op, Instruction::Charge { .. }) {
                        "CHARGE"
                    } else {
                        "DISCHARGE"
                    };
                    let _ = write!(line, "{word} {actuator}");
                    if *mode == ChargeMode::Compensated {
                        line.push_str(" comp");
                    }
                }
                Instruction::Barrier => line.push_str("BARRIER"),
            }
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn parse_rotation(line: usize, body: &str) -> Result<RotationSpec> {
    let err = |msg: String| Error::IrParse { line, msg };
    let nums: Vec<f64> = body
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| err(format!("bad number `{s}`")))
        })
        .collect::<Result<_>>()?;
    let [angle, x, y, z] = nums[..] else {
        return Err(err(format!("rotation needs 4 numbers, got {}", nums.len())));
    };
    let norm = (x * x + y * y + z * z).sqrt();
    let rot = if (norm - 1.0).abs() <= 1e-12 {
        RotationSpec::new(angle, [x, y, z])
    } else if (norm - 1.0).abs() <= 1e-3 {
        RotationSpec::normalized(angle, [x, y, z])
    } else {
        return Err(err(format!("axis norm {norm} is not 1")));
    };
    rot.map_err(|e| err(e.to_string()))
}

fn parse_mode(line: usize, word: Option<&str>) -> Result<ChargeMode> {
    match word {
        None => Ok(ChargeMode::Resonant),
        Some("comp") => Ok(ChargeMode::Compensated),
        Some(other) => Err(Error::IrParse {
            line,
            msg: format!("unexpected `{other}`"),
        }),
    }
}

impl FromStr for ScheduleIR {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut ir = ScheduleIR::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(src) = comment.trim_start().strip_prefix("source:") {
                    ir.source = src.trim().to_string();
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let mut words = trimmed.split_whitespace();
            let head = words.next().unwrap_or_default();
            let err = |msg: String| Error::IrParse { line, msg };
            let op = match head {
                "PULSE" => {
                    let species = words
                        .next()
                        .ok_or_else(|| err("missing species".into()))?
                        .to_string();
                    let (mut r, mut x, mut xx) = (None, None, None);
                    for w in words {
                        let (key, body) = w
                            .split_once(':')
                            .ok_or_else(|| err(format!("expected key:value, got `{w}`")))?;
                        let slot = match key {
                            "r" => &mut r,
                            "x" => &mut x,
                            "xx" => &mut xx,
                            other => return Err(err(format!("unknown class key `{other}`"))),
                        };
                        if slot.is_some() {
                            return Err(err(format!("class key `{key}` given twice")));
                        }
                        *slot = Some(parse_rotation(line, body)?);
                    }
                    let regular = r.ok_or_else(|| err("missing r: rotation".into()))?;
                    let crossed = x.ok_or_else(|| err("missing x: rotation".into()))?;
                    Instruction::Pulse(SpeciesPulse {
                        species,
                        regular,
                        crossed,
                        double_crossed: xx,
                    })
                }
                "CHARGE" | "DISCHARGE" => {
                    let idx = words
                        .next()
                        .ok_or_else(|| err("missing actuator index".into()))?;
                    let actuator = idx
                        .parse()
                        .map_err(|_| err(format!("bad actuator index `{idx}`")))?;
                    let mode = parse_mode(line, words.next())?;
                    if let Some(extra) = words.next() {
                        return Err(err(format!("unexpected `{extra}`")));
                    }
                    if head == "CHARGE" {
                        Instruction::Charge { actuator, mode }
                    } else {
                        Instruction::Discharge { actuator, mode }
                    }
                }
                "BARRIER" => {
                    if let Some(extra) = words.next() {
                        return Err(err(format!("unexpected `{extra}`")));
                    }
                    Instruction::Barrier
                }
                other => return Err(err(format!("unknown instruction `{other}`"))),
            };
            ir.ops.push(op);
        }
        Ok(ir)
    }
}

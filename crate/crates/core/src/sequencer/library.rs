use std::sync::OnceLock;

use super::ir::ScheduleIR;
use super::replay::{contract_fidelity, Engine};
use super::request::{GateName, GateRequest};
use crate::architecture::{
    build_conveyor_belt, build_ladder, ArchitectureGraph, Geometry, GeometryKind,
};
use crate::{Error, Result};

/// The library text compiled into the crate.
pub const BUILTIN_LIBRARY: &str = include_str!("library.txt");

/// Library entries must reproduce their contract to this fidelity.
pub const LIBRARY_FIDELITY: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LibraryEntry {
    pub gate: GateName,
    pub kind: GeometryKind,
    pub variants: Vec<String>,
    pub provenance: String,
    pub ir: ScheduleIR,
}

impl LibraryEntry {
    pub fn applies_to(&self, geometry: &Geometry) -> bool {
        geometry.kind == self.kind && self.variants.contains(&geometry.variant)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Library {
    pub version: u32,
    pub entries: Vec<LibraryEntry>,
}

fn kind_from_str(s: &str) -> Option<GeometryKind> {
    match s {
        "ladder" => Some(GeometryKind::Ladder),
        "conveyor" => Some(GeometryKind::Conveyor),
        "star" => Some(GeometryKind::Star),
        "modular" => Some(GeometryKind::Modular),
        _ => None,
    }
}

impl Library {
    /// Parses library text. Line numbers in errors refer to the whole file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut version = None;
        let mut entries = Vec::new();
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        while let Some((line, l)) = lines.next() {
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::IrParse { line, msg };
            let mut words = l.split_whitespace();
            match words.next() {
                Some("version") => {
                    let v = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| err("bad version".into()))?;
                    version = Some(v);
                }
                Some("entry") => {
                    let gate: GateName = words
                        .next()
                        .ok_or_else(|| err("missing gate name".into()))?
                        .parse()?;
                    let (mut kind, mut variants, mut provenance) =
                        (None, Vec::new(), String::from("unspecified"));
                    let mut body = String::new();
                    let mut closed = false;
                    for (line, l) in lines.by_ref() {
                        let mut w = l.split_whitespace();
                        match w.next() {
                            Some("geometry") => {
                                let k = w.next().and_then(kind_from_str);
                                kind = Some(k.ok_or_else(|| Error::IrParse {
                                    line,
                                    msg: "unknown geometry kind".into(),
                                })?);
                                variants = w.map(str::to_string).collect();
                            }
                            Some("provenance") => provenance = w.collect::<Vec<_>>().join(" "),
                            Some("end") => {
                                closed = true;
                                break;
                            }
                            _ => {
                                // keep line numbering aligned with the file
                                while body.lines().count() + 1 < line {
                                    body.push('\n');
                                }
                                body.push_str(l);
                                body.push('\n');
                            }
                        }
                    }
                    if !closed {
                        return Err(err(format!("entry `{}` has no `end`", gate.as_str())));
                    }
                    let kind = kind.ok_or_else(|| {
                        err(format!("entry `{}` has no geometry line", gate.as_str()))
                    })?;
                    let mut ir = ScheduleIR::parse(&body)?;
                    ir.source = gate.as_str().to_string();
                    entries.push(LibraryEntry {
                        gate,
                        kind,
                        variants,
                        provenance,
                        ir,
                    });
                }
                Some(other) => return Err(err(format!("unexpected `{other}`"))),
                None => {}
            }
        }
        let version = version.ok_or_else(|| Error::IrParse {
            line: 1,
            msg: "missing version line".into(),
        })?;
        Ok(Self { version, entries })
    }

    pub fn lookup(&self, gate: GateName, graph: &ArchitectureGraph) -> Option<&LibraryEntry> {
        let geometry = graph.geometry()?;
        self.entries
            .iter()
            .find(|e| e.gate == gate && e.applies_to(geometry))
    }

    /// Checks every entry against its gate contract on small instances.
    pub fn verify(&self) -> Result<()> {
        for entry in &self.entries {
            for variant in &entry.variants {
                let fail = |msg: String| {
                    Error::LibraryCheck(format!("{} on {variant}", entry.gate.as_str()), msg)
                };
                for (graph, req) in
                    verification_cases(entry, variant).map_err(|e| fail(e.to_string()))?
                {
                    let f = contract_fidelity(&graph, &req, &entry.ir, &Engine::Effective, None)
                        .map_err(|e| fail(e.to_string()))?;
                    if f < LIBRARY_FIDELITY {
                        return Err(fail(format!(
                            "contract fidelity {f:.12} at N = {}",
                            graph.geometry().map_or(0, |g| g.n)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn verification_cases(
    entry: &LibraryEntry,
    variant: &str,
) -> Result<Vec<(ArchitectureGraph, GateRequest)>> {
    let mut cases = Vec::new();
    match (entry.gate, entry.kind) {
        (GateName::SwapStep, GeometryKind::Conveyor) => {
            for n in [2, 4] {
                let graph = build_conveyor_belt(n, variant.parse()?)?;
                cases.push((graph, GateRequest::new(GateName::SwapStep)));
            }
        }
        (GateName::IccShift, GeometryKind::Ladder) => {
            let graph = build_ladder(2, variant.parse()?)?;
            for k in 0..2 {
                cases.push((
                    graph.clone(),
                    GateRequest::new(GateName::IccShift).at_position(k),
                ));
            }
        }
        (gate, kind) => {
            return Err(Error::InvalidRequest(format!(
                "no verification rule for {} on {kind:?}",
                gate.as_str()
            )));
        }
    }
    Ok(cases)
}

static BUILTIN: OnceLock<std::result::Result<Library, Error>> = OnceLock::new();

/// The built-in library, parsed and verified on first use.
pub fn library() -> Result<&'static Library> {
    BUILTIN
        .get_or_init(|| {
            let lib = Library::parse(BUILTIN_LIBRARY)?;
            lib.verify()?;
            Ok(lib)
        })
        .as_ref()
        .map_err(Clone::clone)
}

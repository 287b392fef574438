use actsim::architecture::*;
use proptest::prelude::*;

fn ladder_qubits(n: usize) -> usize {
    2 * n * n + 4 * n - 1
}

#[test]
fn ladder_counts_follow_closed_forms() {
    for n in [2, 4, 6, 8] {
        let g = build_ladder(n, LadderVariant::ThreeSpecies).unwrap();
        let r = resource_summary(&g).unwrap();
        assert_eq!(r.physical_qubits, ladder_qubits(n));
        assert_eq!(r.crossed, 3 * n - 1);
        assert_eq!(r.double_crossed, 0);
        assert_eq!(r.drive_lines, 3);
        assert_eq!(r.actuators, 0);

        let g = build_ladder(n, LadderVariant::TwoSpeciesLowOverhead).unwrap();
        let r = resource_summary(&g).unwrap();
        assert_eq!(r.physical_qubits, ladder_qubits(n));
        assert_eq!(r.crossed, n / 2 - 1);
        assert_eq!(r.double_crossed, n + n / 2);
        assert_eq!(r.drive_lines, 2);

        let g = build_ladder(n, LadderVariant::ActuatorVariant).unwrap();
        let r = resource_summary(&g).unwrap();
        assert_eq!(r.physical_qubits, ladder_qubits(n));
        assert_eq!(r.actuators, n - 1);
        assert_eq!(r.drive_lines, 3 + 1);

        let g = build_ladder(n, LadderVariant::ActuatorLowOverhead).unwrap();
        let r = resource_summary(&g).unwrap();
        assert_eq!(r.actuators, n - 1);
        assert_eq!(r.drive_lines, 2 + 1);
    }
}

#[test]
fn conveyor_counts_follow_closed_forms() {
    for n in [2, 4, 6, 8] {
        let r = resource_summary(&build_conveyor_belt(n, ConveyorVariant::ThreeRegister).unwrap())
            .unwrap();
        assert_eq!(
            (r.physical_qubits, r.crossed, r.drive_lines),
            (4 * n + 1, 2, 2)
        );
        let r = resource_summary(&build_conveyor_belt(n, ConveyorVariant::SingleRegister).unwrap())
            .unwrap();
        assert_eq!(
            (
                r.physical_qubits,
                r.crossed,
                r.double_crossed,
                r.drive_lines
            ),
            (2 * n + 1, n, 2, 2)
        );
        let r =
            resource_summary(&build_conveyor_belt(n, ConveyorVariant::ActuatorVariant).unwrap())
                .unwrap();
        assert_eq!(
            (r.physical_qubits, r.actuators, r.drive_lines),
            (4 * n + 1, 1, 3)
        );
        let r = resource_summary(
            &build_conveyor_belt(n, ConveyorVariant::ActuatorSingleRegister).unwrap(),
        )
        .unwrap();
        assert_eq!(
            (r.physical_qubits, r.actuators, r.drive_lines),
            (2 * n + 1, 1, 3)
        );
    }
}

#[test]
fn builder_examples() {
    let r = resource_summary(&build_ladder(2, LadderVariant::ThreeSpecies).unwrap()).unwrap();
    assert_eq!((r.physical_qubits, r.crossed, r.drive_lines), (15, 5, 3));
    let r =
        resource_summary(&build_ladder(2, LadderVariant::TwoSpeciesLowOverhead).unwrap()).unwrap();
    assert_eq!(
        (
            r.physical_qubits,
            r.crossed,
            r.double_crossed,
            r.drive_lines
        ),
        (15, 0, 3, 2)
    );
    let r = resource_summary(&build_ladder(4, LadderVariant::ActuatorVariant).unwrap()).unwrap();
    assert_eq!((r.actuators, r.drive_lines), (3, 4));
    assert_eq!(
        resource_summary(&build_ladder(4, LadderVariant::ThreeSpecies).unwrap())
            .unwrap()
            .physical_qubits,
        47
    );
    let r = resource_summary(&build_conveyor_belt(4, ConveyorVariant::SingleRegister).unwrap())
        .unwrap();
    assert_eq!((r.physical_qubits, r.crossed), (9, 4));
}

#[test]
fn odd_or_small_n_rejected() {
    for n in [0, 1, 3, 5] {
        assert!(build_ladder(n, LadderVariant::ThreeSpecies).is_err());
        assert!(build_conveyor_belt(n, ConveyorVariant::ThreeRegister).is_err());
    }
}

#[test]
fn empty_graph_has_zero_resources() {
    let g = ArchitectureGraph::new(1.0, 1.0, vec![], vec![], vec![], vec![], None);
    let r = resource_summary(&g).unwrap();
    assert_eq!(
        (
            r.drive_lines,
            r.physical_qubits,
            r.crossed,
            r.double_crossed,
            r.actuators
        ),
        (0, 0, 0, 0, 0)
    );
}

fn two_node_graph(same_species: bool, freq_offset: f64) -> ArchitectureGraph {
    let species = vec![
        Species {
            id: "A".into(),
            drive_frequency: 10.0,
        },
        Species {
            id: "B".into(),
            drive_frequency: 20.0,
        },
    ];
    let nodes = vec![
        QubitNode {
            index: 0,
            species: "A".into(),
            class: CouplingClass::Regular,
            role: Role::Computational,
            transition_frequency: 10.5 + freq_offset,
        },
        QubitNode {
            index: 1,
            species: if same_species { "A".into() } else { "B".into() },
            class: CouplingClass::Regular,
            role: Role::Computational,
            transition_frequency: if same_species { 10.5 } else { 20.5 },
        },
    ];
    ArchitectureGraph::new(0.5, 1.0, species, nodes, vec![(0, 1)], vec![], None)
}

#[test]
fn validate_reports_same_species_edge() {
    let report = validate(&two_node_graph(true, 0.0));
    assert!(!report.ok);
    assert_eq!(
        report.violations,
        vec![Violation::SameSpecies {
            edge: (0, 1),
            species: "A".into()
        }]
    );
    assert!(validate(&two_node_graph(false, 0.0)).ok);
}

#[test]
fn validate_reports_detuning_violation() {
    let report = validate(&two_node_graph(false, 0.25));
    assert!(matches!(
        report.violations.as_slice(),
        [Violation::Detuning { node: 0, .. }]
    ));
}

#[test]
fn validate_reports_malformed_edges() {
    let g = two_node_graph(false, 0.0);
    let (species, nodes) = (g.species().to_vec(), g.nodes().to_vec());
    let bad = ArchitectureGraph::new(
        0.5,
        1.0,
        species,
        nodes,
        vec![(0, 1), (1, 0), (1, 1), (0, 7)],
        vec![],
        None,
    );
    let v = validate(&bad).violations;
    assert!(v.contains(&Violation::DuplicateEdge { edge: (1, 0) }));
    assert!(v.contains(&Violation::SelfLoop { edge: (1, 1) }));
    assert!(v.contains(&Violation::EdgeOutOfRange { edge: (0, 7) }));
}

#[test]
fn resource_summary_rejects_invalid_graph() {
    assert!(resource_summary(&two_node_graph(true, 0.0)).is_err());
}

#[test]
fn attach_layer_examples() {
    let g = build_ladder(2, LadderVariant::ThreeSpecies).unwrap();
    assert_eq!(attach_actuator_layer(&g, &[]).unwrap(), g);

    let one = attach_actuator_layer(&g, &[3]).unwrap();
    assert_eq!(one.n_qubits(), g.n_qubits() + 1);
    assert_eq!(one.edges().len(), g.edges().len() + 1);
    assert_eq!(one.species().len(), g.species().len() + 1);
    assert!(validate(&one).ok);

    let row: Vec<usize> = (0..7).collect();
    let layered = attach_actuator_layer(&g, &row).unwrap();
    assert!(validate(&layered).ok);
    let before = resource_summary(&g).unwrap();
    let after = resource_summary(&layered).unwrap();
    assert_eq!(after.actuators - before.actuators, 7);
    assert_eq!(after.drive_lines, before.drive_lines + 1);
    let mask = layered
        .masks()
        .iter()
        .find(|m| m.kind == MaskKind::FreezeRegion)
        .unwrap();
    assert_eq!(mask.members, row);
    for q in row {
        assert_eq!(layered.actuator_partners(q).len(), 1);
    }
}

#[test]
fn attach_layer_rejects_actuator_members() {
    let g = build_conveyor_belt(2, ConveyorVariant::ActuatorVariant).unwrap();
    let act = g.actuators()[0];
    assert!(matches!(
        attach_actuator_layer(&g, &[act]),
        Err(actsim::Error::InvalidRegion(..))
    ));
}

#[test]
fn stacked_layers_get_distinct_lines() {
    let g = build_conveyor_belt(2, ConveyorVariant::ActuatorVariant).unwrap();
    let g1 = attach_actuator_layer(&g, &[0, 1]).unwrap();
    let g2 = attach_actuator_layer(&g1, &[2]).unwrap();
    assert!(validate(&g2).ok);
    let ids: Vec<&str> = g2.species().iter().map(|s| s.id.as_str()).collect();
    assert_eq!(ids, ["A", "B", "QA", "QA1", "QA2"]);
    assert_eq!(resource_summary(&g2).unwrap().actuators, 1 + 3);
}

#[test]
fn bridge_examples() {
    let a = build_conveyor_belt(2, ConveyorVariant::ActuatorVariant).unwrap();
    let b = build_conveyor_belt(2, ConveyorVariant::ActuatorVariant).unwrap();
    let joined = bridge_between(&a, &b, (0, 0)).unwrap();
    assert!(validate(&joined).ok);
    let r = resource_summary(&joined).unwrap();
    assert_eq!(r.actuators, 1 + 1 + 1);
    assert_eq!(r.physical_qubits, 9 + 9 + 1);
    let boundaries: Vec<&str> = joined
        .masks()
        .iter()
        .filter(|m| m.kind == MaskKind::ModuleBoundary)
        .map(|m| m.name.as_str())
        .collect();
    assert_eq!(boundaries, ["L", "R"]);
    let bridge = joined.mask("bridge").unwrap();
    assert_eq!(bridge.members, vec![18, 0, 9]);
    let bridge_line = &joined.node(18).unwrap().species;
    assert!(a.species().iter().all(|s| &s.id != bridge_line));

    assert_eq!(
        bridge_between(&a, &a, (0, 0)),
        Err(actsim::Error::SameModule)
    );
    assert!(bridge_between(&a, &b, (0, 99)).is_err());
}

#[test]
fn json_round_trip_is_bit_exact() {
    let graphs = vec![
        build_ladder(2, LadderVariant::ActuatorVariant).unwrap(),
        build_conveyor_belt(4, ConveyorVariant::ThreeRegister).unwrap(),
        attach_actuator_layer(&build_star(3).unwrap(), &[0]).unwrap(),
        bridge_between(
            &build_conveyor_belt(2, ConveyorVariant::SingleRegister).unwrap(),
            &build_conveyor_belt(2, ConveyorVariant::ActuatorSingleRegister).unwrap(),
            (2, 0),
        )
        .unwrap(),
    ];
    for g in graphs {
        let text = to_json(&g);
        let back = from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(to_json(&back), text);
    }
}

#[test]
fn json_without_frequencies_derives_them() {
    let text = r#"{"zeta": 0.5, "base_coupling": 1.0,
        "species": [{"id": "A", "drive_frequency": 10.0}, {"id": "B", "drive_frequency": 20.0}],
        "nodes": [{"index": 0, "species": "A", "class": "regular", "role": "computational"},
                  {"index": 1, "species": "B", "class": "crossed", "role": "actuator"}],
        "edges": [[0, 1]], "masks": []}"#;
    let g = from_json(text).unwrap();
    assert!(validate(&g).ok);
    assert_eq!(g.node(1).unwrap().transition_frequency, 20.5);
    assert!(from_json("{not json").is_err());
}

fn all_builds() -> impl Strategy<Value = ArchitectureGraph> {
    let n = prop_oneof![Just(2usize), Just(4), Just(6), Just(8)];
    (n, 0..8usize).prop_map(|(n, v)| {
        if v < 4 {
            build_ladder(n, LadderVariant::ALL[v]).unwrap()
        } else {
            build_conveyor_belt(n, ConveyorVariant::ALL[v - 4]).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_build_validates(g in all_builds()) {
        let report = validate(&g);
        prop_assert!(report.ok, "{:?}", report.violations);
        for i in 0..g.n_qubits() {
            let sp = g.species_by_id(&g.node(i).unwrap().species).unwrap();
            prop_assert_eq!(g.node(i).unwrap().transition_frequency, sp.drive_frequency + g.coordination(i) as f64 * g.zeta());
        }
    }

    #[test]
    fn layer_composition_counts_consistently(g in all_builds(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..6)) {
        let eligible: Vec<usize> = g.nodes().iter().filter(|n| matches!(n.role, Role::Computational | Role::Register)).map(|n| n.index).collect();
        let mut region: Vec<usize> = picks.iter().map(|i| eligible[i.index(eligible.len())]).collect();
        region.sort();
        region.dedup();
        let layered = attach_actuator_layer(&g, &region).unwrap();
        prop_assert!(validate(&layered).ok);
        let before = resource_summary(&g).unwrap();
        let after = resource_summary(&layered).unwrap();
        prop_assert_eq!(after.actuators, before.actuators + region.len());
        prop_assert_eq!(after.physical_qubits, before.physical_qubits + region.len());
    }
}

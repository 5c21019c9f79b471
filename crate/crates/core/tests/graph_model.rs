use orbigraph::exact::{rat, Int, Rat};
use orbigraph::fixtures::{self, Fixture};
use orbigraph::graph::{
    enumerate_faces, infer_connection, reverse, validate, OrbifoldGkmGraph, ValidationMode, Violation,
    DEFAULT_VALENCE_CAP,
};
use orbigraph::poly::LinearForm;
use orbigraph::quotient::derive_graph;

fn lf(v: &[Rat]) -> LinearForm {
    LinearForm::new(v.to_vec())
}

fn torus_fixtures() -> Vec<(String, OrbifoldGkmGraph)> {
    let mut out = vec![
        ("spindle-2-3".to_string(), fixtures::spindle(2, 3)),
        ("spindle-diag-2-5".to_string(), fixtures::spindle_diag(2, 5)),
        ("doubled_square".to_string(), fixtures::doubled_square()),
    ];
    for name in ["p1236", "cp2", "cp3", "p112", "nonfree-triangle", "two-gon"] {
        let Some(Fixture::Pair(p)) = fixtures::by_name(name) else { panic!("{name}") };
        out.push((name.to_string(), derive_graph(&p).unwrap().graph));
    }
    out
}

#[test]
fn rtilde_examples() {
    let g = OrbifoldGkmGraph::from_named(
        2,
        &["a", "b"],
        vec![("a", "b", lf(&[rat(1, 2), rat(0, 1)]), lf(&[rat(-1, 2), rat(0, 1)]))],
    )
    .unwrap();
    assert_eq!(g.rtilde(0).unwrap(), Int::from(2));
    let g = OrbifoldGkmGraph::from_named(
        2,
        &["a", "b"],
        vec![("a", "b", lf(&[rat(0, 1), rat(1, 1)]), lf(&[rat(0, 1), rat(-1, 1)]))],
    )
    .unwrap();
    assert_eq!(g.rtilde(0).unwrap(), Int::from(1));
    assert_eq!(lf(&[rat(2, 3), rat(2, 3)]).denominator_lcm(), Int::from(3));
}

#[test]
fn spindle_is_valid_with_expected_rtilde() {
    for (m, n) in [(2, 3), (1, 1), (4, 6)] {
        let g = fixtures::spindle(m, n);
        assert!(validate(&g, ValidationMode::Torus).is_valid());
        assert_eq!(g.rtilde(0).unwrap(), Int::from(m));
        assert_eq!(g.rtilde(1).unwrap(), Int::from(n));
    }
}

#[test]
fn equal_labels_are_reported() {
    let e = lf(&[rat(1, 1), rat(0, 1)]);
    let g = OrbifoldGkmGraph::from_named(
        2,
        &["a", "b"],
        vec![("a", "b", e.clone(), e.clone()), ("a", "b", e.clone(), e.clone())],
    )
    .unwrap();
    let report = validate(&g, ValidationMode::Gkm);
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v, Violation::PairwiseDependent { .. })));
}

#[test]
fn empty_graph_is_invalid() {
    let g = OrbifoldGkmGraph::new(2, vec![], vec![]).unwrap();
    assert_eq!(validate(&g, ValidationMode::Gkm).violations, vec![Violation::Empty]);
}

#[test]
fn doubled_square_is_a_torus_graph() {
    let g = fixtures::doubled_square();
    assert!(validate(&g, ValidationMode::Torus).is_valid());
    let theta = infer_connection(&g).unwrap();
    let faces = enumerate_faces(&g, &theta, DEFAULT_VALENCE_CAP).unwrap();
    assert_eq!(faces.count_by_dim(), vec![4, 8, 7, 4, 1]);
}

#[test]
fn weighted_projective_111222_is_gkm() {
    let g = fixtures::p111222();
    assert_eq!(g.valence(), Some(5));
    assert!(validate(&g, ValidationMode::Gkm).is_valid());
    // labels at P34 from the tangential representation
    let v = g.vertex_index("P34").unwrap();
    let mut labels: Vec<String> = g.darts_at(v).iter().map(|&d| g.alpha(d).to_string()).collect();
    labels.sort();
    let mut expect = vec!["e1 + e2 - 1/2*e3", "e1 + 1/2*e3", "e1 - 1/2*e3", "e2", "e2 - e3"];
    expect.sort();
    assert_eq!(labels, expect);
    // k < n: full independence is impossible
    assert!(!validate(&g, ValidationMode::Torus).is_valid());
}

#[test]
fn p1236_connection_example() {
    let Some(Fixture::Pair(p)) = fixtures::by_name("p1236") else { unreachable!() };
    let g = derive_graph(&p).unwrap().graph;
    let theta = infer_connection(&g).unwrap();
    let from = g.vertex_index("F2.F3.F4").unwrap();
    let to = g.vertex_index("F1.F3.F4").unwrap();
    let along = *g.darts_at(from).iter().find(|&&d| g.terminus(d) == to).unwrap();
    let e2 = *g
        .darts_at(from)
        .iter()
        .find(|&&d| g.alpha(d) == &lf(&[rat(0, 1), rat(1, 1), rat(0, 1)]))
        .unwrap();
    let image = theta.apply(along, e2);
    assert_eq!(g.alpha(image), &lf(&[rat(-3, 2), rat(1, 1), rat(0, 1)]));
}

#[test]
fn cp2_connection_by_hand() {
    let Some(Fixture::Pair(p)) = fixtures::by_name("cp2") else { unreachable!() };
    let g = derive_graph(&p).unwrap().graph;
    let theta = infer_connection(&g).unwrap();
    // e2 runs v1 -> v2; the other dart at v1 is the reverse of e1, carried to e3
    assert_eq!(theta.apply(2, 1), 4);
    assert_eq!(theta.apply(2, 2), 3);
    assert_eq!(theta.witness(2, 1), Some(&Int::from(1)));
}

#[test]
fn connection_normalisation_and_round_trip() {
    for (name, g) in torus_fixtures() {
        let theta = infer_connection(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
        for e in 0..g.num_darts() {
            assert_eq!(theta.apply(e, e), reverse(e), "{name}");
            for &e1 in g.darts_at(g.origin(e)) {
                assert_eq!(theta.apply(reverse(e), theta.apply(e, e1)), e1, "{name}");
            }
        }
    }
}

#[test]
fn rtilde_scaled_values_agree_up_to_sign() {
    for (name, g) in torus_fixtures() {
        for e in 0..g.num_darts() {
            let a = g.modulus(e).unwrap();
            let b = g.modulus(reverse(e)).unwrap();
            assert!(a.is_integral(), "{name}");
            let q = a.ratio_to(&b).unwrap();
            assert!(q == rat(1, 1) || q == rat(-1, 1), "{name}: {a} vs {b}");
        }
    }
}

#[test]
fn face_counts() {
    let count = |g: &OrbifoldGkmGraph| {
        let theta = infer_connection(g).unwrap();
        enumerate_faces(g, &theta, DEFAULT_VALENCE_CAP).unwrap().count_by_dim()
    };
    let all = torus_fixtures();
    let get = |n: &str| &all.iter().find(|(k, _)| k == n).unwrap().1;
    assert_eq!(count(get("p1236")), vec![4, 6, 4, 1]);
    assert_eq!(count(get("spindle-2-3")), vec![2, 1]);
    assert_eq!(count(get("cp2")), vec![3, 3, 1]);
    assert_eq!(count(get("two-gon")), vec![2, 2, 1]);
    assert_eq!(count(get("cp3")), vec![4, 6, 4, 1]);
}

#[test]
fn every_face_is_a_torus_graph() {
    for (name, g) in torus_fixtures() {
        let theta = infer_connection(&g).unwrap();
        let poset = enumerate_faces(&g, &theta, DEFAULT_VALENCE_CAP).unwrap();
        for face in poset.faces() {
            let sub = g.subgraph(&face.vertices, &face.edges).unwrap();
            let report = validate(&sub, ValidationMode::Torus);
            assert!(report.is_valid(), "{name}: {face:?} {:?}", report.violations);
        }
    }
}

#[test]
fn joins_and_meets() {
    let Some(Fixture::Pair(p)) = fixtures::by_name("p1236") else { unreachable!() };
    let g = derive_graph(&p).unwrap().graph;
    let theta = infer_connection(&g).unwrap();
    let poset = enumerate_faces(&g, &theta, DEFAULT_VALENCE_CAP).unwrap();
    let facets = poset.ids_of_dim(2);
    let (a, b) = (facets[0], facets[1]);
    assert_eq!(poset.join(a, b).unwrap(), poset.top().unwrap());
    let meet = poset.meet_components(a, b).unwrap();
    assert_eq!(meet.len(), 1);
    assert_eq!(poset.face(meet[0]).dim, 1);
    assert_eq!(poset.join(a, a).unwrap(), a);
    assert_eq!(poset.meet_components(a, a).unwrap(), vec![a]);

    let g = fixtures::doubled_square();
    let theta = infer_connection(&g).unwrap();
    let poset = enumerate_faces(&g, &theta, DEFAULT_VALENCE_CAP).unwrap();
    // bottom and top sides of the square
    let bottom = poset.edge_face(&g, 0).unwrap();
    let top = poset.edge_face(&g, 1).unwrap();
    assert!(poset.meet_components(bottom, top).unwrap().is_empty());
}

#[test]
fn json_round_trip() {
    for (name, g) in torus_fixtures().into_iter().chain([("p111222".to_string(), fixtures::p111222())]) {
        let text = g.to_json_string();
        let back = OrbifoldGkmGraph::from_json_str(&text).unwrap();
        assert_eq!(back, g, "{name}");
        assert_eq!(back.to_json_string(), text, "{name}");
    }
}

#[test]
fn json_accepts_integers_and_rejects_zero_denominators() {
    let ok = r#"{"torus_rank":1,"vertices":["p","q"],"edges":[{"from":"p","to":"q","alpha_from":[1],"alpha_to":["-1/2"]}]}"#;
    let g = OrbifoldGkmGraph::from_json_str(ok).unwrap();
    assert_eq!(g.alpha(1), &lf(&[rat(-1, 2)]));
    let bad = ok.replace("-1/2", "1/0");
    assert!(OrbifoldGkmGraph::from_json_str(&bad).is_err());
    let unknown = ok.replace(r#""to":"q""#, r#""to":"z""#);
    assert!(OrbifoldGkmGraph::from_json_str(&unknown).is_err());
}

use mobclinic::model::{
    haversine_km, validate, Client, DistanceMatrix, InstanceData, Location, LocationKind, Metric, ModelError,
    Violation, EARTH_RADIUS_KM,
};
use mobclinic::{Distance, Instance};
use proptest::prelude::*;

#[test]
fn meridian_and_equator_arcs() {
    let per_degree = EARTH_RADIUS_KM * std::f64::consts::PI / 180.0;
    for deg in [0.001, 0.5, 1.0, 10.0, 45.0, 90.0, 179.0] {
        assert!((haversine_km(0.0, 0.0, 0.0, deg) - deg * per_degree).abs() < 1e-3, "equator {deg}");
        assert!((haversine_km(0.0, 12.0, deg.min(90.0), 12.0) - deg.min(90.0) * per_degree).abs() < 1e-3);
    }
    assert!((haversine_km(-90.0, 0.0, 90.0, 0.0) - 180.0 * per_degree).abs() < 1e-3);
}

proptest! {
    #[test]
    fn haversine_is_a_metric(a in -89.0..89.0f64, b in -179.0..179.0f64, c in -89.0..89.0f64,
                             d in -179.0..179.0f64, e in -89.0..89.0f64, f in -179.0..179.0f64) {
        let ab = haversine_km(a, b, c, d);
        prop_assert_eq!(ab, haversine_km(c, d, a, b));
        prop_assert!(ab >= 0.0);
        let bc = haversine_km(c, d, e, f);
        let ac = haversine_km(a, b, e, f);
        prop_assert!(ac <= ab + bc + 1e-9);
    }
}

fn two_point_data(rows: Vec<Vec<f64>>) -> InstanceData {
    InstanceData {
        locations: vec![
            Location::indexed("a", LocationKind::Activity, 0),
            Location::indexed("b", LocationKind::Activity, 1),
        ],
        clients: vec![Client::new("p", None, ["a"])],
        sites: vec!["b".into()],
        metric: Metric::matrix(DistanceMatrix::new(rows).unwrap()),
    }
}

#[test]
fn asymmetric_matrix_rejected() {
    let err = validate(&two_point_data(vec![vec![0.0, 1.0], vec![2.0, 0.0]])).unwrap_err();
    assert!(err.iter().any(|v| v.to_string().contains("asymmetry")));
    assert!(matches!(
        Instance::new(two_point_data(vec![vec![0.0, 1.0], vec![2.0, 0.0]])),
        Err(ModelError::Invalid(_))
    ));
    assert!(validate(&two_point_data(vec![vec![0.0, 1.0], vec![1.0, 0.0]])).is_ok());
}

#[test]
fn triangle_violation_rejected() {
    let rows = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
    let data = InstanceData {
        locations: (0..3).map(|i| Location::indexed(format!("l{i}"), LocationKind::Activity, i)).collect(),
        clients: vec![Client::new("p", None, ["l0"])],
        sites: vec!["l2".into()],
        metric: Metric::matrix(DistanceMatrix::new(rows).unwrap()),
    };
    let err = validate(&data).unwrap_err();
    assert!(err.iter().any(|v| matches!(v, Violation::Triangle { .. })), "{err:?}");
}

#[test]
fn empty_visits_rejected() {
    let mut data = two_point_data(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    data.clients[0].visited.clear();
    let err = validate(&data).unwrap_err();
    assert!(err.iter().any(|v| v.to_string() == "empty S_p for client p"));
}

#[test]
fn geo_instance_distances() {
    let data = InstanceData {
        locations: vec![
            Location::geo("x", LocationKind::Activity, 0.0, 0.0),
            Location::geo("y", LocationKind::Activity, 0.0, 1.0),
        ],
        clients: vec![Client::new("p", None, ["x"])],
        sites: vec!["y".into()],
        metric: Metric::haversine(),
    };
    let inst = Instance::new(data).unwrap();
    assert!((inst.dist(0, 1) - 111.19508).abs() < 1e-3);
}

//! Dirichlet domains as collections of boundary primitives, with boundary
//! data, optional source term, the bounding-box map to the unit cube, and the
//! five built-in scenes.

mod formula;
mod grid;
mod primitive;
mod scene;

pub use formula::{pacman_angle, Formula};
pub use primitive::{BoundaryPrimitive, Point, Shape};
pub use scene::{
    BoundingBox, Closest, Scene, SceneFile, SourceMode, SourceSpec, ValueSpec, BOUNDARY_TOLERANCE,
    BUILTIN_SCENES,
};

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn distance_examples() {
        let disk = Scene::unit_disk();
        assert_eq!(disk.distance(&[0.0, 0.5, 0.0]), 0.5);
        let ball = Scene::unit_ball();
        assert!(close(
            ball.distance(&[0.2, 0.3, -0.1]),
            1.0 - 0.14f64.sqrt(),
            1e-15
        ));
        let bell = Scene::dumbbell(1.5, 1.0, 0.4).unwrap();
        assert!(close(bell.distance(&[0.5, 0.0, 0.0]), 0.4, 1e-15));
    }

    #[test]
    fn projection_examples() {
        let disk = Scene::unit_disk();
        assert_eq!(disk.project(&[0.0, 0.5, 0.0]), [0.0, 1.0, 0.0]);
        let pac = Scene::pacman();
        let c = pac.closest(&[0.5, 0.01, 0.0]);
        assert_eq!(c.point, [0.5, 0.0, 0.0]);
        assert_eq!(pac.primitives()[c.primitive].label, "edge_zero");
        let on = [0.6, 0.8, 0.0];
        assert!(Scene::distance_between(&disk.project(&on), &on) < 1e-15);
    }

    #[test]
    fn boundary_value_examples() {
        let disk = Scene::unit_disk();
        assert_eq!(disk.boundary_value(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!(disk.boundary_value(&[0.5, 0.0, 0.0]).is_err());
        let gasket = Scene::gasket();
        let bore = gasket
            .primitives()
            .iter()
            .find(|p| p.label == "bore")
            .unwrap();
        let Shape::Circle { center, radius } = bore.shape else {
            panic!("bore is a circle")
        };
        assert_eq!(
            gasket
                .boundary_value(&[center[0] + radius, center[1], 0.0])
                .unwrap(),
            160.0
        );
        let pac = Scene::pacman();
        assert!(close(
            pac.boundary_value(&[1.0, 0.0, 0.0]).unwrap(),
            0.606_530_659_712_633_4,
            1e-15
        ));
    }

    #[test]
    fn source_examples() {
        let pac = Scene::pacman();
        assert_eq!(pac.source_value(&[0.0; 3]).unwrap(), -2.0);
        assert!(pac.source_value(&[2f64.sqrt(), 0.0, 0.0]).unwrap().abs() < 1e-15);
        let bell = Scene::builtin("dumbbell").unwrap();
        assert_eq!(bell.source_value(&[0.3, 0.1, 0.0]).unwrap(), -2.0);
        assert_eq!(bell.source_mode(), SourceMode::ConstantShortcut);
        assert!(Scene::unit_disk().source_value(&[0.0; 3]).is_err());
        assert!(Scene::unit_disk()
            .with_source_mode(SourceMode::ConstantShortcut)
            .is_err());
    }

    #[test]
    fn unit_cube_map_examples() {
        let disk = Scene::unit_disk();
        assert_eq!(disk.to_unit_cube(&[0.0, 0.0, 0.0])[..2], [0.5, 0.5]);
        assert_eq!(disk.to_unit_cube(&[-1.0, -1.0, 0.0])[..2], [0.0, 0.0]);
        let bell = Scene::builtin("dumbbell").unwrap();
        assert_eq!(bell.to_unit_cube(&[2.5, 1.0, 0.0])[..2], [1.0, 1.0]);
    }

    #[test]
    fn exact_solution_examples() {
        let disk = Scene::unit_disk();
        assert!(close(
            disk.exact_solution(&[0.0, 0.5, 0.0]).unwrap(),
            0.5 * 4.25f64.ln(),
            1e-15
        ));
        assert!(close(
            disk.exact_solution(&[0.0, 0.5, 0.0]).unwrap(),
            0.723_459_4,
            1e-7
        ));
        let ball = Scene::unit_ball();
        assert!(close(
            ball.exact_solution(&[0.2, 0.3, -0.1]).unwrap(),
            0.547_176,
            1e-6
        ));
        let pac = Scene::pacman();
        let (r, t) = (0.1244f64, -0.7906f64);
        let expected = r.cbrt() * (t / 3.0).sin() + (-r * r / 2.0).exp();
        let z0 = pac.evaluation_point().unwrap();
        assert!(close(pac.exact_solution(&z0).unwrap(), expected, 1e-14));
        assert!(Scene::gasket().exact_solution(&[0.0; 3]).is_err());
        assert!(Scene::builtin("dumbbell")
            .unwrap()
            .exact_solution(&[0.0; 3])
            .is_err());
    }

    #[test]
    fn gasket_layout() {
        let g = Scene::gasket();
        assert_eq!(
            g.primitives()
                .iter()
                .filter(|p| matches!(p.shape, Shape::Circle { .. }))
                .count(),
            50
        );
        let z = g.evaluation_point().unwrap();
        assert_eq!(z[..2], [0.240999, 0.3]);
        assert!(g.contains(&z));
        assert_eq!(g.default_epsilon(), Some(1e-3));
        for label in ["coolant", "oil_return", "outer", "oil", "bore"] {
            assert!(g.primitives().iter().any(|p| p.label == label), "{label}");
        }
        assert!(g.accelerator_load().unwrap() < 10.0);
    }

    #[test]
    fn scenes_round_trip_through_json() {
        for name in BUILTIN_SCENES {
            let s = Scene::builtin(name).unwrap();
            let back = Scene::from_json(&s.to_json().unwrap()).unwrap();
            assert_eq!(back.spec(), s.spec());
        }
        assert!(Scene::builtin("torus").is_err());
        assert!(Scene::from_json("{\"name\":\"x\"}").is_err());
    }

    #[test]
    fn contains_matches_simple_shapes() {
        let pac = Scene::pacman();
        assert!(pac.contains(&[-0.5, 0.5, 0.0]));
        assert!(pac.contains(&[0.5, -0.5, 0.0]));
        assert!(!pac.contains(&[0.5, 0.5, 0.0]));
        let bell = Scene::builtin("dumbbell").unwrap();
        assert!(bell.contains(&[0.0, 0.3, 0.0]));
        assert!(!bell.contains(&[0.0, 0.5, 0.0]));
        assert!(bell.contains(&[-1.5, 0.9, 0.0]));
        let ball = Scene::unit_ball();
        assert!(ball.contains(&[0.5, 0.5, 0.5]));
        assert!(!ball.contains(&[0.7, 0.7, 0.7]));
    }
}

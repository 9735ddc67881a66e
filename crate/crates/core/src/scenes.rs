//! Bundled demonstration scenes.

use crate::geometry::{Environment, Polygon, Rect, Vec2};

/// A reference scene: obstacles, starting positions, speeds and an evader
/// script.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub env: Environment,
    pub pursuer: Vec2,
    pub evader: Vec2,
    pub pursuer_speed: f64,
    pub evader_speed: f64,
    pub waypoints: Vec<Vec2>,
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
    Polygon::new(vec![Vec2::new(x0, y0), Vec2::new(x1, y0), Vec2::new(x1, y1), Vec2::new(x0, y1)])
        .expect("valid rectangle")
}

/// One square obstacle whose top-right vertex (0, 0) is the studied corner.
pub fn wedge() -> Scene {
    let bounds = Rect::new(Vec2::new(-5.0, -5.0), Vec2::new(5.0, 5.0)).expect("valid bounds");
    Scene {
        env: Environment::new(vec![rect(-4.0, -4.0, 0.0, 0.0)], bounds).expect("valid scene"),
        pursuer: Vec2::new(2.0, -3.0),
        evader: Vec2::new(-0.2, 1.5),
        pursuer_speed: 1.0,
        evader_speed: 0.5,
        waypoints: vec![Vec2::new(-3.0, 1.0), Vec2::new(-4.5, -2.0)],
    }
}

/// Two rectangles with a corridor between them.
pub fn two_obstacle() -> Scene {
    let bounds = Rect::new(Vec2::new(-8.0, -8.0), Vec2::new(8.0, 8.0)).expect("valid bounds");
    Scene {
        env: Environment::new(vec![rect(-4.0, -1.0, -1.0, 1.5), rect(1.0, -2.0, 3.5, 1.0)], bounds)
            .expect("valid scene"),
        pursuer: Vec2::new(0.0, 2.0),
        evader: Vec2::new(0.0, 3.5),
        pursuer_speed: 1.0,
        evader_speed: 0.5,
        waypoints: vec![Vec2::new(-2.5, 3.5), Vec2::new(-5.0, 2.5), Vec2::new(-5.0, -2.5), Vec2::new(-2.0, -3.0)],
    }
}

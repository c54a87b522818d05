use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Up,
        Direction::Down,
        Direction::Left,
        Direction::Right,
    ];

    pub fn unit(self) -> Vec2 {
        match self {
            Direction::Up => Vec2::new(0.0, 1.0),
            Direction::Down => Vec2::new(0.0, -1.0),
            Direction::Left => Vec2::new(-1.0, 0.0),
            Direction::Right => Vec2::new(1.0, 0.0),
        }
    }
}

/// Robot speeds in units/s.
pub const ROBOT_SPEEDS: [f64; 2] = [1.0, 2.0];

/// Number of actions available to every robot.
pub const ROBOT_ACTION_COUNT: usize = Direction::ALL.len() * ROBOT_SPEEDS.len();

/// One of the eight robot motion primitives.
///
/// Action index `2·d + s` pairs direction `d` of [`Direction::ALL`] with
/// speed `s` of [`ROBOT_SPEEDS`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotAction {
    pub direction: Direction,
    pub speed: f64,
}

impl RobotAction {
    pub fn from_index(index: usize) -> Self {
        assert!(
            index < ROBOT_ACTION_COUNT,
            "robot action {index} out of range"
        );
        Self {
            direction: Direction::ALL[index / ROBOT_SPEEDS.len()],
            speed: ROBOT_SPEEDS[index % ROBOT_SPEEDS.len()],
        }
    }

    pub fn index(self) -> usize {
        let d = Direction::ALL
            .iter()
            .position(|&d| d == self.direction)
            .expect("known direction");
        let s = ROBOT_SPEEDS
            .iter()
            .position(|&s| s == self.speed)
            .expect("known speed");
        d * ROBOT_SPEEDS.len() + s
    }

    pub fn displacement(self, dt: f64) -> Vec2 {
        self.direction.unit() * (self.speed * dt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_distinct_actions() {
        let displacements: Vec<Vec2> = (0..ROBOT_ACTION_COUNT)
            .map(|i| RobotAction::from_index(i).displacement(1.0))
            .collect();
        assert_eq!(displacements.len(), 8);
        for i in 0..8 {
            assert_eq!(RobotAction::from_index(i).index(), i);
            for j in 0..i {
                assert_ne!(displacements[i], displacements[j]);
            }
        }
    }

    #[test]
    fn right_at_unit_speed() {
        let a = RobotAction {
            direction: Direction::Right,
            speed: 1.0,
        };
        assert_eq!(a.index(), 6);
        assert_eq!(a.displacement(0.5), Vec2::new(0.5, 0.0));
    }
}

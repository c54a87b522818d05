//! Target motion models.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::geometry::Vec2;
use crate::error::{Error, Result};

const TIME_EPS: f64 = 1e-12;

/// Evasive target parameters. Distances in units, speeds in units/s,
/// durations in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversarialParams {
    pub trigger_radius: f64,
    pub dodge_speed: f64,
    pub dodge_duration: f64,
    pub return_duration: f64,
    pub return_vertical_speed: f64,
    pub return_horizontal_speed: f64,
    pub nominal_speed: f64,
}

impl Default for AdversarialParams {
    fn default() -> Self {
        Self {
            trigger_radius: 1.5,
            dodge_speed: 2.0,
            dodge_duration: 1.0,
            return_duration: 0.05,
            return_vertical_speed: 40.0,
            return_horizontal_speed: 30.0,
            nominal_speed: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetBehavior {
    /// Constant velocity.
    StraightLine { velocity: Vec2 },
    /// Counter-clockwise loop around a `width × height` rectangle whose
    /// lower-left corner is the start position, with a Gaussian lateral
    /// velocity of the given variance resampled every step.
    NoisyRect {
        width: f64,
        height: f64,
        speed: f64,
        lateral_variance: f64,
    },
    /// Moves right along a horizontal line and dodges robots that come close.
    Adversarial(AdversarialParams),
}

impl TargetBehavior {
    pub fn noisy_rect(width: f64, height: f64) -> Self {
        TargetBehavior::NoisyRect {
            width,
            height,
            speed: 1.0,
            lateral_variance: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(format!("target behavior: {what}")));
        match *self {
            TargetBehavior::StraightLine { velocity } if !velocity.is_finite() => {
                bad("velocity must be finite")
            }
            TargetBehavior::NoisyRect {
                width,
                height,
                speed,
                lateral_variance,
            } if !(width > 0.0 && height > 0.0 && speed >= 0.0 && lateral_variance >= 0.0) => {
                bad("rectangle needs positive sides and non-negative speed and variance")
            }
            TargetBehavior::Adversarial(p)
                if !(p.trigger_radius >= 0.0
                    && p.dodge_speed >= 0.0
                    && p.dodge_duration > 0.0
                    && p.return_duration > 0.0
                    && p.return_vertical_speed >= 0.0
                    && p.return_horizontal_speed >= 0.0
                    && p.nominal_speed >= 0.0) =>
            {
                bad("adversarial parameters must be non-negative with positive durations")
            }
            _ => Ok(()),
        }
    }
}

/// Phase of an adversarial target. Dodging and Returning are committed for
/// their full duration; only a Nominal target can be triggered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvasionMode {
    Nominal,
    /// `sign` is +1 for up, −1 for down.
    Dodging {
        sign: f64,
        remaining: f64,
    },
    /// `sign` is the vertical direction back toward the nominal line.
    Returning {
        sign: f64,
        remaining: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub position: Vec2,
    behavior: TargetBehavior,
    mode: EvasionMode,
    maneuvers: u64,
    nominal_y: f64,
    rect_origin: Vec2,
    /// Arc length travelled along the nominal rectangle.
    rect_progress: f64,
}

impl Target {
    pub fn new(position: Vec2, behavior: TargetBehavior) -> Self {
        Self {
            position,
            behavior,
            mode: EvasionMode::Nominal,
            maneuvers: 0,
            nominal_y: position.y,
            rect_origin: position,
            rect_progress: 0.0,
        }
    }

    pub fn behavior(&self) -> &TargetBehavior {
        &self.behavior
    }

    pub fn mode(&self) -> EvasionMode {
        self.mode
    }

    /// Number of Nominal → Dodging transitions so far.
    pub fn maneuvers(&self) -> u64 {
        self.maneuvers
    }

    /// Advances the target by `dt` seconds given robot positions at the
    /// start of the step.
    pub fn advance<R: Rng + ?Sized>(&mut self, dt: f64, robots: &[Vec2], rng: &mut R) {
        match self.behavior {
            TargetBehavior::StraightLine { velocity } => self.position += velocity * dt,
            TargetBehavior::NoisyRect {
                width,
                height,
                speed,
                lateral_variance,
            } => {
                let before = rect_point(width, height, self.rect_progress);
                let heading = rect_heading(width, height, self.rect_progress);
                self.rect_progress += speed * dt;
                let after = rect_point(width, height, self.rect_progress);
                let lateral = if lateral_variance > 0.0 {
                    Normal::new(0.0, lateral_variance.sqrt())
                        .expect("finite standard deviation")
                        .sample(rng)
                } else {
                    0.0
                };
                self.position += (after - before) + heading.perp() * (lateral * dt);
            }
            TargetBehavior::Adversarial(params) => self.advance_evasive(&params, dt, robots),
        }
    }

    fn advance_evasive(&mut self, p: &AdversarialParams, dt: f64, robots: &[Vec2]) {
        if self.mode == EvasionMode::Nominal
            && nearest_distance(self.position, robots) <= p.trigger_radius
        {
            let reach = p.dodge_speed * p.dodge_duration;
            let up = nearest_distance(self.position + Vec2::new(0.0, reach), robots);
            let down = nearest_distance(self.position + Vec2::new(0.0, -reach), robots);
            let sign = if up >= down { 1.0 } else { -1.0 };
            self.mode = EvasionMode::Dodging {
                sign,
                remaining: p.dodge_duration,
            };
            self.maneuvers += 1;
        }

        let mut left = dt;
        while left > TIME_EPS {
            match self.mode {
                EvasionMode::Nominal => {
                    self.position.x += p.nominal_speed * left;
                    left = 0.0;
                }
                EvasionMode::Dodging { sign, remaining } => {
                    let span = left.min(remaining);
                    self.position.y += sign * p.dodge_speed * span;
                    left -= span;
                    let remaining = remaining - span;
                    self.mode = if remaining <= TIME_EPS {
                        EvasionMode::Returning {
                            sign: -sign,
                            remaining: p.return_duration,
                        }
                    } else {
                        EvasionMode::Dodging { sign, remaining }
                    };
                }
                EvasionMode::Returning { sign, remaining } => {
                    let span = left.min(remaining);
                    self.position.x += p.return_horizontal_speed * span;
                    self.position.y += sign * p.return_vertical_speed * span;
                    left -= span;
                    let remaining = remaining - span;
                    if remaining <= TIME_EPS {
                        self.position.y = self.nominal_y;
                        self.mode = EvasionMode::Nominal;
                    } else {
                        self.mode = EvasionMode::Returning { sign, remaining };
                    }
                }
            }
        }
    }
}

fn nearest_distance(point: Vec2, robots: &[Vec2]) -> f64 {
    robots
        .iter()
        .map(|r| r.distance(point))
        .fold(f64::INFINITY, f64::min)
}

/// Point at arc length `s` on the counter-clockwise loop right, up, left,
/// down, relative to the lower-left corner.
fn rect_point(width: f64, height: f64, s: f64) -> Vec2 {
    let perimeter = 2.0 * (width + height);
    let s = s.rem_euclid(perimeter);
    if s < width {
        Vec2::new(s, 0.0)
    } else if s < width + height {
        Vec2::new(width, s - width)
    } else if s < 2.0 * width + height {
        Vec2::new(width - (s - width - height), height)
    } else {
        Vec2::new(0.0, height - (s - 2.0 * width - height))
    }
}

fn rect_heading(width: f64, height: f64, s: f64) -> Vec2 {
    let perimeter = 2.0 * (width + height);
    let s = s.rem_euclid(perimeter);
    if s < width {
        Vec2::new(1.0, 0.0)
    } else if s < width + height {
        Vec2::new(0.0, 1.0)
    } else if s < 2.0 * width + height {
        Vec2::new(-1.0, 0.0)
    } else {
        Vec2::new(0.0, -1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    fn close(a: Vec2, b: Vec2) -> bool {
        a.distance(b) < 1e-9
    }

    #[test]
    fn straight_line_moves_by_velocity() {
        let mut t = Target::new(
            Vec2::new(1.0, 1.0),
            TargetBehavior::StraightLine {
                velocity: Vec2::new(1.0, 0.0),
            },
        );
        t.advance(0.1, &[], &mut rng());
        assert!(close(t.position, Vec2::new(1.1, 1.0)));
    }

    #[test]
    fn far_robot_leaves_target_nominal() {
        let mut t = Target::new(
            Vec2::ZERO,
            TargetBehavior::Adversarial(AdversarialParams::default()),
        );
        t.advance(0.05, &[Vec2::new(-2.0, 0.0)], &mut rng());
        assert_eq!(t.mode(), EvasionMode::Nominal);
        assert_eq!(t.maneuvers(), 0);
        assert!(close(t.position, Vec2::new(0.05, 0.0)));
    }

    #[test]
    fn robot_below_triggers_upward_dodge() {
        let mut t = Target::new(
            Vec2::ZERO,
            TargetBehavior::Adversarial(AdversarialParams::default()),
        );
        // Up lands at (0, 2): distance 3 to the robot; down lands at (0, -2): distance 1.
        t.advance(0.05, &[Vec2::new(0.0, -1.0)], &mut rng());
        assert_eq!(t.maneuvers(), 1);
        assert!(matches!(t.mode(), EvasionMode::Dodging { sign, .. } if sign == 1.0));
        assert!(close(t.position, Vec2::new(0.0, 0.1)));
    }

    #[test]
    fn equidistant_dodge_goes_up() {
        let mut t = Target::new(
            Vec2::ZERO,
            TargetBehavior::Adversarial(AdversarialParams::default()),
        );
        t.advance(0.05, &[Vec2::new(1.0, 0.0)], &mut rng());
        assert!(matches!(t.mode(), EvasionMode::Dodging { sign, .. } if sign == 1.0));
    }

    #[test]
    fn full_maneuver_lands_on_nominal_line() {
        let params = AdversarialParams::default();
        let mut t = Target::new(Vec2::new(0.0, 3.0), TargetBehavior::Adversarial(params));
        let robot_above = [Vec2::new(0.0, 4.0)];
        let dt = 0.05;
        // Trigger, then keep the robot glued so any re-trigger would show.
        for _ in 0..20 {
            t.advance(dt, &robot_above, &mut rng());
        }
        // 1 s of dodging downwards at 2 units/s.
        assert!(close(t.position, Vec2::new(0.0, 1.0)), "{}", t.position);
        assert!(matches!(t.mode(), EvasionMode::Returning { .. }));
        t.advance(dt, &[Vec2::new(100.0, 100.0)], &mut rng());
        assert_eq!(t.mode(), EvasionMode::Nominal);
        assert!(close(t.position, Vec2::new(1.5, 3.0)), "{}", t.position);
        assert_eq!(t.maneuvers(), 1);
    }

    #[test]
    fn coarse_steps_split_phases_exactly() {
        // dt = 0.1 straddles the 0.05 s return and 0.05 s of nominal motion.
        let params = AdversarialParams::default();
        let mut t = Target::new(Vec2::ZERO, TargetBehavior::Adversarial(params));
        t.advance(0.1, &[Vec2::new(0.0, -1.0)], &mut rng());
        let far = [Vec2::new(100.0, 0.0)];
        for _ in 0..9 {
            t.advance(0.1, &far, &mut rng());
        }
        assert!(close(t.position, Vec2::new(0.0, 2.0)), "{}", t.position);
        t.advance(0.1, &far, &mut rng());
        assert!(close(t.position, Vec2::new(1.55, 0.0)), "{}", t.position);
        assert_eq!(t.mode(), EvasionMode::Nominal);
    }

    #[test]
    fn dodging_target_never_retriggers() {
        let mut t = Target::new(
            Vec2::ZERO,
            TargetBehavior::Adversarial(AdversarialParams::default()),
        );
        let mut transitions = 0;
        let mut was_nominal = true;
        for step in 0..400 {
            // A robot that teleports onto the target every step.
            let robot = [t.position + Vec2::new(0.3, 0.0)];
            t.advance(0.05, &robot, &mut rng());
            let dodging = matches!(t.mode(), EvasionMode::Dodging { .. });
            if was_nominal && dodging {
                transitions += 1;
            }
            was_nominal = t.mode() == EvasionMode::Nominal;
            assert!(t.position.is_finite(), "step {step}");
        }
        assert_eq!(t.maneuvers(), transitions);
        // Each maneuver lasts 21 steps (20 dodging + 1 returning) here.
        assert_eq!(transitions, 400 / 21 + 1);
    }

    #[test]
    fn noiseless_rectangle_closes_the_loop() {
        let mut t = Target::new(
            Vec2::new(2.0, -1.0),
            TargetBehavior::NoisyRect {
                width: 4.0,
                height: 3.0,
                speed: 1.0,
                lateral_variance: 0.0,
            },
        );
        let mut r = rng();
        for _ in 0..70 {
            t.advance(0.1, &[], &mut r);
        }
        // 7 units: along the bottom (4) then up the right side (3).
        assert!(close(t.position, Vec2::new(6.0, 2.0)), "{}", t.position);
        for _ in 0..70 {
            t.advance(0.1, &[], &mut r);
        }
        assert!(close(t.position, Vec2::new(2.0, -1.0)), "{}", t.position);
    }

    #[test]
    fn noisy_rectangle_moves_laterally() {
        let mut t = Target::new(Vec2::ZERO, TargetBehavior::noisy_rect(10.0, 10.0));
        let mut r = rng();
        for _ in 0..10 {
            t.advance(0.1, &[], &mut r);
        }
        assert!((t.position.x - 1.0).abs() < 1e-9);
        assert!(t.position.y != 0.0);
    }

    #[test]
    fn validation() {
        assert!(TargetBehavior::noisy_rect(0.0, 2.0).validate().is_err());
        assert!(TargetBehavior::Adversarial(AdversarialParams::default())
            .validate()
            .is_ok());
        assert!(TargetBehavior::StraightLine {
            velocity: Vec2::new(f64::NAN, 0.0)
        }
        .validate()
        .is_err());
    }
}

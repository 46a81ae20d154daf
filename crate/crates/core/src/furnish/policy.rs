use std::collections::BTreeMap;

use super::{FurnishError, FurnitureKind};

/// Where along the room's walls a piece may go, relative to the entrance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateSide {
    /// Against the wall facing the entrance, aligned with the opening.
    Opposite,
    /// In the corner diagonally across from the entrance, against either of
    /// the two walls meeting there.
    DiagonallyOpposite,
    /// Against the entrance wall, clear of the opening.
    BesideEntrance,
    /// Centred against any of the four walls.
    AnySide,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeRule {
    /// Footprint is `fraction` of the room area with long:short = `aspect`.
    /// `long_along_wall` puts the long side against the wall.
    AreaFraction {
        fraction: f64,
        aspect: f64,
        long_along_wall: bool,
    },
    Fixed {
        along: i32,
        depth: i32,
    },
    /// Spans the full length of the wall it stands against.
    WallLength {
        depth: i32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KindRule {
    pub size: SizeRule,
    pub sides: Vec<CandidateSide>,
    /// Minimum gap between a piece beside the entrance and the opening.
    pub entrance_gap: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementPolicy {
    pub rules: BTreeMap<FurnitureKind, KindRule>,
}

impl Default for PlacementPolicy {
    fn default() -> Self {
        use CandidateSide::*;
        let rule = |size, sides: &[CandidateSide]| KindRule {
            size,
            sides: sides.to_vec(),
            entrance_gap: 4,
        };
        let rules = BTreeMap::from([
            (
                FurnitureKind::Bed,
                rule(
                    SizeRule::AreaFraction {
                        fraction: 0.30,
                        aspect: 4.0 / 3.0,
                        long_along_wall: false,
                    },
                    &[Opposite, DiagonallyOpposite],
                ),
            ),
            (
                FurnitureKind::Desk,
                rule(
                    SizeRule::AreaFraction {
                        fraction: 0.15,
                        aspect: 2.0,
                        long_along_wall: true,
                    },
                    &[BesideEntrance, Opposite],
                ),
            ),
            (
                FurnitureKind::Toilet,
                rule(
                    SizeRule::Fixed {
                        along: 8,
                        depth: 12,
                    },
                    &[Opposite, DiagonallyOpposite],
                ),
            ),
            (
                FurnitureKind::Stove,
                rule(
                    SizeRule::WallLength { depth: 8 },
                    &[Opposite, DiagonallyOpposite],
                ),
            ),
            (
                FurnitureKind::WashingMachine,
                rule(
                    SizeRule::Fixed {
                        along: 10,
                        depth: 10,
                    },
                    &[AnySide],
                ),
            ),
        ]);
        Self { rules }
    }
}

impl PlacementPolicy {
    pub fn validate(&self) -> Result<(), FurnishError> {
        for (kind, rule) in &self.rules {
            if rule.sides.is_empty() {
                return Err(FurnishError::InvalidPolicy(format!(
                    "{kind:?}: empty candidate set"
                )));
            }
            match rule.size {
                SizeRule::AreaFraction {
                    fraction, aspect, ..
                } => {
                    if !(fraction > 0.0 && fraction <= 1.0) {
                        return Err(FurnishError::InvalidPolicy(format!(
                            "{kind:?}: size fraction {fraction} outside (0, 1]"
                        )));
                    }
                    if !(aspect >= 1.0 && aspect.is_finite()) {
                        return Err(FurnishError::InvalidPolicy(format!(
                            "{kind:?}: aspect {aspect}"
                        )));
                    }
                }
                SizeRule::Fixed { along, depth } => {
                    if along < 1 || depth < 1 {
                        return Err(FurnishError::InvalidPolicy(format!(
                            "{kind:?}: empty fixed size"
                        )));
                    }
                }
                SizeRule::WallLength { depth } => {
                    if depth < 1 {
                        return Err(FurnishError::InvalidPolicy(format!(
                            "{kind:?}: empty depth"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rule(&self, kind: FurnitureKind) -> Option<&KindRule> {
        self.rules.get(&kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_policy_is_valid() {
        PlacementPolicy::default().validate().unwrap();
    }

    #[test]
    fn zero_fraction_is_rejected() {
        let mut p = PlacementPolicy::default();
        p.rules.get_mut(&FurnitureKind::Bed).unwrap().size = SizeRule::AreaFraction {
            fraction: 0.0,
            aspect: 1.0,
            long_along_wall: true,
        };
        assert!(p.validate().is_err());
    }
}

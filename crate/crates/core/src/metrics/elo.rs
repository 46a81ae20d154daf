use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::MetricsError;

/// Two players times 42.
pub const DEFAULT_K: f64 = 84.0;
pub const INITIAL_RATING: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    AWins,
    BWins,
    Draw,
}

impl Outcome {
    /// Score of player A.
    pub fn score_a(self) -> f64 {
        match self {
            Outcome::AWins => 1.0,
            Outcome::BWins => 0.0,
            Outcome::Draw => 0.5,
        }
    }
}

/// One line of a match log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchLogEntry {
    pub player_a: String,
    pub player_b: String,
    #[serde(default)]
    pub question: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub player_a: String,
    pub player_b: String,
    pub outcome: Outcome,
    pub delta_a: f64,
    pub delta_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EloTable {
    ratings: BTreeMap<String, f64>,
    k_factor: f64,
    history: Vec<MatchRecord>,
}

impl Default for EloTable {
    fn default() -> Self {
        Self {
            ratings: BTreeMap::new(),
            k_factor: DEFAULT_K,
            history: Vec::new(),
        }
    }
}

impl EloTable {
    pub fn new(k_factor: f64) -> Result<Self, MetricsError> {
        if !(k_factor > 0.0 && k_factor.is_finite()) {
            return Err(MetricsError::InvalidK(k_factor));
        }
        Ok(Self {
            k_factor,
            ..Self::default()
        })
    }

    /// Adds a player at the initial rating; existing players are untouched.
    pub fn register(&mut self, id: impl Into<String>) {
        self.ratings.entry(id.into()).or_insert(INITIAL_RATING);
    }

    pub fn with_rating(mut self, id: impl Into<String>, rating: f64) -> Self {
        self.ratings.insert(id.into(), rating);
        self
    }

    pub fn rating(&self, id: &str) -> Option<f64> {
        self.ratings.get(id).copied()
    }

    pub fn ratings(&self) -> &BTreeMap<String, f64> {
        &self.ratings
    }

    pub fn k_factor(&self) -> f64 {
        self.k_factor
    }

    pub fn history(&self) -> &[MatchRecord] {
        &self.history
    }

    /// Applies one match in place. B's change is the exact negation of A's.
    pub fn record(
        &mut self,
        a: &str,
        b: &str,
        outcome: Outcome,
    ) -> Result<&MatchRecord, MetricsError> {
        let ra = self
            .rating(a)
            .ok_or_else(|| MetricsError::UnknownPlayer(a.to_string()))?;
        let rb = self
            .rating(b)
            .ok_or_else(|| MetricsError::UnknownPlayer(b.to_string()))?;
        let (ea, _) = elo_expected(ra, rb);
        let delta_a = self.k_factor * (outcome.score_a() - ea);
        let delta_b = -delta_a;
        *self.ratings.get_mut(a).expect("checked") += delta_a;
        *self.ratings.get_mut(b).expect("checked") += delta_b;
        self.history.push(MatchRecord {
            player_a: a.to_string(),
            player_b: b.to_string(),
            outcome,
            delta_a,
            delta_b,
        });
        Ok(self.history.last().expect("just pushed"))
    }

    /// Replays a match log, registering unseen players first.
    pub fn replay<'a>(
        &mut self,
        entries: impl IntoIterator<Item = &'a MatchLogEntry>,
    ) -> Result<(), MetricsError> {
        for e in entries {
            self.register(e.player_a.clone());
            self.register(e.player_b.clone());
            self.record(&e.player_a, &e.player_b, e.outcome)?;
        }
        Ok(())
    }
}

/// Expected scores of A and B.
pub fn elo_expected(r_a: f64, r_b: f64) -> (f64, f64) {
    let e_a = 1.0 / (1.0 + 10f64.powf((r_b - r_a) / 400.0));
    (e_a, 1.0 - e_a)
}

/// Value-in, value-out form of [`EloTable::record`].
pub fn elo_update(
    table: &EloTable,
    a: &str,
    b: &str,
    outcome: Outcome,
) -> Result<EloTable, MetricsError> {
    let mut t = table.clone();
    t.record(a, b, outcome)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(ra: f64, rb: f64) -> EloTable {
        EloTable::default()
            .with_rating("a", ra)
            .with_rating("b", rb)
    }

    #[test]
    fn expected_scores() {
        assert_eq!(elo_expected(1500.0, 1500.0), (0.5, 0.5));
        let (e, _) = elo_expected(1100.0, 1000.0);
        assert!((e - 0.64).abs() < 0.005);
        let (e, f) = elo_expected(1400.0, 1000.0);
        assert!((e - 10.0 / 11.0).abs() < 1e-12);
        assert!((e + f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_ratings_win_moves_42() {
        let t = elo_update(&pair(1000.0, 1000.0), "a", "b", Outcome::AWins).unwrap();
        assert_eq!(t.rating("a"), Some(1042.0));
        assert_eq!(t.rating("b"), Some(958.0));
        let d = elo_update(&pair(1000.0, 1000.0), "a", "b", Outcome::Draw).unwrap();
        assert_eq!(d.rating("a"), Some(1000.0));
    }

    #[test]
    fn favourite_gains_less() {
        let t = elo_update(&pair(1100.0, 1000.0), "a", "b", Outcome::AWins).unwrap();
        let gain = t.rating("a").unwrap() - 1100.0;
        // oracle: K (1 - E_a) with E_a evaluated directly
        let ea = 1.0 / (1.0 + 10f64.powf(-0.25));
        assert!((gain - 84.0 * (1.0 - ea)).abs() < 1e-9);
        assert!((gain - 30.2).abs() < 0.1);
    }

    #[test]
    fn unknown_player() {
        let r = elo_update(&pair(1000.0, 1000.0), "a", "z", Outcome::AWins);
        assert_eq!(r, Err(MetricsError::UnknownPlayer("z".into())));
    }

    #[test]
    fn log_replay_registers_players() {
        let line = r#"{"player_a":"ours","player_b":"base","question":"q1","outcome":"a_wins"}"#;
        let e: MatchLogEntry = serde_json::from_str(line).unwrap();
        let mut t = EloTable::default();
        t.replay([&e]).unwrap();
        assert_eq!(t.rating("ours"), Some(1042.0));
        assert_eq!(t.history().len(), 1);
        assert!(EloTable::new(0.0).is_err());
    }
}

use serde::{Deserialize, Serialize};

use super::{GenError, UnitImage};

/// Patch-wise discriminator probabilities, each strictly within (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMap {
    values: Vec<f64>,
}

impl ScoreMap {
    pub fn new(values: Vec<f64>) -> Result<Self, GenError> {
        if let Some(&value) = values.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
            return Err(GenError::ScoreOutOfRange { value });
        }
        if values.is_empty() {
            return Err(GenError::SizeMismatch("empty score map".into()));
        }
        Ok(Self { values })
    }

    pub fn constant(value: f64, patches: usize) -> Result<Self, GenError> {
        Self::new(vec![value; patches])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn mean(v: impl Iterator<Item = f64>, n: usize) -> f64 {
    v.sum::<f64>() / n as f64
}

/// mean(log real) + mean(log(1 − fake)).
pub fn adversarial_loss(real: &ScoreMap, fake: &ScoreMap) -> f64 {
    mean(real.values.iter().map(|v| v.ln()), real.values.len())
        + mean(
            fake.values.iter().map(|v| (1.0 - v).ln()),
            fake.values.len(),
        )
}

fn l1(a: &UnitImage, b: &UnitImage) -> Result<f64, GenError> {
    if a.shape() != b.shape() {
        return Err(GenError::SizeMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if a.data().is_empty() {
        return Ok(0.0);
    }
    Ok(mean(
        a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()),
        a.data().len(),
    ))
}

/// Mean absolute difference between a reconstruction and its original.
pub fn cycle_loss(reconstructed: &UnitImage, original: &UnitImage) -> Result<f64, GenError> {
    l1(reconstructed, original)
}

/// Mean absolute difference between an identity-mapped image and its target.
pub fn identity_loss(generated: &UnitImage, target: &UnitImage) -> Result<f64, GenError> {
    l1(generated, target)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            lambda1: 1.0,
            lambda2: 10.0,
            lambda3: 5.0,
        }
    }
}

/// The six terms of the combined objective.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossParts {
    pub adv_f: f64,
    pub adv_b: f64,
    pub cyc_b: f64,
    pub cyc_f: f64,
    pub id_b: f64,
    pub id_f: f64,
}

/// λ1(adv_f + adv_b) + λ2(cyc_b + cyc_f) + λ3(id_b + id_f).
pub fn total_loss(parts: &LossParts, w: &LossWeights) -> Result<f64, GenError> {
    for (name, v) in [
        ("adv_f", parts.adv_f),
        ("adv_b", parts.adv_b),
        ("cyc_b", parts.cyc_b),
        ("cyc_f", parts.cyc_f),
        ("id_b", parts.id_b),
        ("id_f", parts.id_f),
        ("lambda1", w.lambda1),
        ("lambda2", w.lambda2),
        ("lambda3", w.lambda3),
    ] {
        if !v.is_finite() {
            return Err(GenError::NonFiniteInput(name));
        }
    }
    Ok(w.lambda1 * (parts.adv_f + parts.adv_b)
        + w.lambda2 * (parts.cyc_b + parts.cyc_f)
        + w.lambda3 * (parts.id_b + parts.id_f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(values: &[f64]) -> UnitImage {
        UnitImage::new(1, values.len(), 1, values.to_vec()).unwrap()
    }

    #[test]
    fn adversarial_at_half() {
        let s = ScoreMap::constant(0.5, 30 * 30).unwrap();
        assert!((adversarial_loss(&s, &s) - 2.0 * 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn adversarial_optimum_approaches_zero() {
        let eps = 1e-12;
        let real = ScoreMap::constant(1.0 - eps, 4).unwrap();
        let fake = ScoreMap::constant(eps, 4).unwrap();
        assert!(adversarial_loss(&real, &fake).abs() < 1e-9);
    }

    #[test]
    fn scores_must_be_open_interval() {
        assert!(matches!(
            ScoreMap::new(vec![0.3, 1.0]),
            Err(GenError::ScoreOutOfRange { .. })
        ));
        assert!(matches!(
            ScoreMap::new(vec![0.0]),
            Err(GenError::ScoreOutOfRange { .. })
        ));
        assert!(ScoreMap::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn l1_shift_and_inversion() {
        let x = img(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(cycle_loss(&x, &x).unwrap(), 0.0);
        let shifted = x.map(|v| v + 0.25);
        assert!((cycle_loss(&shifted, &x).unwrap() - 0.25).abs() < 1e-12);
        let t = img(&[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(identity_loss(&t.map(|v| 1.0 - v), &t).unwrap(), 1.0);
        assert!(cycle_loss(&x, &img(&[0.0; 3])).is_err());
    }

    #[test]
    fn total_with_unit_parts() {
        let p = LossParts {
            adv_f: 1.0,
            adv_b: 1.0,
            cyc_b: 1.0,
            cyc_f: 1.0,
            id_b: 1.0,
            id_f: 1.0,
        };
        assert_eq!(total_loss(&p, &LossWeights::default()).unwrap(), 32.0);
        assert_eq!(
            total_loss(&LossParts::default(), &LossWeights::default()).unwrap(),
            0.0
        );
        let bad = LossParts {
            cyc_f: f64::INFINITY,
            ..p
        };
        assert!(matches!(
            total_loss(&bad, &LossWeights::default()),
            Err(GenError::NonFiniteInput("cyc_f"))
        ));
    }
}

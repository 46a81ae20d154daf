use super::{
    adversarial_loss, cycle_loss, identity_loss, total_loss, GenError, LossParts, LossWeights,
    ScoreMap, UnitImage,
};

/// One training triple: boundary, activity map and the matching floorplan.
#[derive(Debug, Clone)]
pub struct GanSample {
    pub boundary: UnitImage,
    pub activity: UnitImage,
    pub floorplan: UnitImage,
}

pub type Discriminator<'a> = dyn Fn(&UnitImage) -> Result<ScoreMap, GenError> + 'a;

/// Averaged loss terms together with the weighted total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveTerms {
    pub parts: LossParts,
    pub total: f64,
}

/// Cycle and identity terms averaged over `samples`. `g_f` maps an image and
/// an activity map to a floorplan; `g_b` maps a floorplan to a boundary. The
/// floorplan identity term feeds `g_f` an all-zero activity map.
pub fn cycle_identity_terms<F, B>(
    samples: &[GanSample],
    g_f: F,
    g_b: B,
) -> Result<LossParts, GenError>
where
    F: Fn(&UnitImage, &UnitImage) -> Result<UnitImage, GenError>,
    B: Fn(&UnitImage) -> Result<UnitImage, GenError>,
{
    let mut parts = LossParts::default();
    for s in samples {
        let zero = UnitImage::zeros(
            s.activity.channels(),
            s.activity.width(),
            s.activity.height(),
        );
        parts.cyc_b += cycle_loss(&g_b(&g_f(&s.boundary, &s.activity)?)?, &s.boundary)?;
        parts.id_b += identity_loss(&g_b(&s.boundary)?, &s.boundary)?;
        parts.cyc_f += cycle_loss(&g_f(&g_b(&s.floorplan)?, &s.activity)?, &s.floorplan)?;
        parts.id_f += identity_loss(&g_f(&s.floorplan, &zero)?, &s.floorplan)?;
    }
    let n = samples.len().max(1) as f64;
    parts.cyc_b /= n;
    parts.id_b /= n;
    parts.cyc_f /= n;
    parts.id_f /= n;
    Ok(parts)
}

/// Every term of the combined objective, with discriminators supplied as
/// score functions.
pub fn objective<F, B>(
    samples: &[GanSample],
    g_f: F,
    g_b: B,
    d_f: &Discriminator,
    d_b: &Discriminator,
    weights: &LossWeights,
) -> Result<ObjectiveTerms, GenError>
where
    F: Fn(&UnitImage, &UnitImage) -> Result<UnitImage, GenError>,
    B: Fn(&UnitImage) -> Result<UnitImage, GenError>,
{
    let mut parts = cycle_identity_terms(samples, &g_f, &g_b)?;
    for s in samples {
        parts.adv_f +=
            adversarial_loss(&d_f(&s.floorplan)?, &d_f(&g_f(&s.boundary, &s.activity)?)?);
        parts.adv_b += adversarial_loss(&d_b(&s.boundary)?, &d_b(&g_b(&s.floorplan)?)?);
    }
    let n = samples.len().max(1) as f64;
    parts.adv_f /= n;
    parts.adv_b /= n;
    Ok(ObjectiveTerms {
        total: total_loss(&parts, weights)?,
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(seed: u64) -> GanSample {
        let v = |k: u64| {
            (0..16)
                .map(|i| ((i as u64 * 7 + seed * 3 + k) % 5) as f64 / 4.0)
                .collect()
        };
        GanSample {
            boundary: UnitImage::new(1, 4, 4, v(0)).unwrap(),
            activity: UnitImage::new(1, 4, 4, v(1)).unwrap(),
            floorplan: UnitImage::new(1, 4, 4, v(2)).unwrap(),
        }
    }

    #[test]
    fn inverting_boundary_generator() {
        let samples: Vec<_> = (0..3).map(sample).collect();
        // g_b inverts and g_f passes through: every round trip flips once
        let parts =
            cycle_identity_terms(&samples, |x, _| Ok(x.clone()), |x| Ok(x.map(|v| 1.0 - v)))
                .unwrap();
        let flip =
            |x: &UnitImage| x.data().iter().map(|v| (1.0 - 2.0 * v).abs()).sum::<f64>() / 16.0;
        let expected_b = samples.iter().map(|s| flip(&s.boundary)).sum::<f64>() / 3.0;
        assert!((parts.cyc_b - expected_b).abs() < 1e-12);
        assert!((parts.id_b - expected_b).abs() < 1e-12);
        assert_eq!(parts.id_f, 0.0);
        assert!(parts.id_b > 0.0);
    }

    #[test]
    fn constant_discriminators() {
        let samples: Vec<_> = (0..2).map(sample).collect();
        let half = |_: &UnitImage| ScoreMap::constant(0.5, 9);
        let t = objective(
            &samples,
            |x, _| Ok(x.clone()),
            |x| Ok(x.clone()),
            &half,
            &half,
            &LossWeights::default(),
        )
        .unwrap();
        assert!((t.parts.adv_f - 2.0 * 0.5f64.ln()).abs() < 1e-12);
        assert!(
            (t.total - (4.0 * 0.5f64.ln() + 10.0 * (t.parts.cyc_b + t.parts.cyc_f))).abs() < 1e-9
        );
    }
}

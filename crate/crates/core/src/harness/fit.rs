use log::warn;

/// Least-squares slope of `log(norm)` against `log(ε)` over `(ε, norm)` pairs.
///
/// Pairs with a nonpositive or non-finite norm are dropped with a warning.
/// `None` when fewer than three usable pairs remain.
pub fn fit_rate(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(eps, norm)| {
            let ok = norm > 0.0 && norm.is_finite() && eps > 0.0;
            if !ok {
                warn!("excluding (eps={eps}, norm={norm}) from the rate fit");
            }
            ok
        })
        .map(|&(eps, norm)| (eps.ln(), norm.ln()))
        .collect();
    if logs.len() < 3 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// `log(norm_a/norm_b) / log(ε_a/ε_b)` for consecutive pairs.
pub fn two_point_rates(points: &[(f64, f64)]) -> Vec<f64> {
    points
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_lines() {
        let one = fit_rate(&[(1.0, 1.0), (0.5, 0.5), (0.25, 0.25)]).unwrap();
        assert!((one - 1.0).abs() < 1e-14);
        let half = fit_rate(&[(1.0, 1.0), (0.5, 0.5_f64.sqrt()), (0.25, 0.5)]).unwrap();
        assert!((half - 0.5).abs() < 1e-14);
    }

    #[test]
    fn too_few_usable_points() {
        assert_eq!(fit_rate(&[(1.0, 1.0), (0.5, 0.5)]), None);
        assert_eq!(fit_rate(&[(1.0, 1.0), (0.5, 0.0), (0.25, 0.25)]), None);
        assert_eq!(fit_rate(&[(1.0, 0.0), (0.5, 0.0), (0.25, 0.0)]), None);
        let r = fit_rate(&[(1.0, 1.0), (0.5, -1.0), (0.5, 0.5), (0.25, 0.25)]).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_point_rates_of_power_law() {
        for r in two_point_rates(&[(0.2, 0.04), (0.1, 0.01), (0.05, 0.0025)]) {
            assert!((r - 2.0).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn recovers_power_laws(rate in -2.0f64..3.0, scale in 1e-3f64..1e3) {
            let pts: Vec<(f64, f64)> = [0.2, 0.1, 0.05, 0.025]
                .iter()
                .map(|&e: &f64| (e, scale * e.powf(rate)))
                .collect();
            let fit = fit_rate(&pts).unwrap();
            prop_assert!((fit - rate).abs() < 1e-10);
        }

        #[test]
        fn invariant_under_norm_scaling(norms in prop::collection::vec(1e-6f64..1e6, 4), k in 1e-3f64..1e3) {
            let eps = [0.2, 0.1, 0.05, 0.025];
            let a: Vec<_> = eps.iter().copied().zip(norms.iter().copied()).collect();
            let b: Vec<_> = eps.iter().copied().zip(norms.iter().map(|n| n * k)).collect();
            prop_assert!((fit_rate(&a).unwrap() - fit_rate(&b).unwrap()).abs() < 1e-9);
        }
    }
}

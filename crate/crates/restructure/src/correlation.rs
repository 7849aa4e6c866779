//! Pearson correlation between branching-factor change and distortion
//! change across a set of restructured hierarchies.

use crate::RestructureError;

/// Pearson correlation coefficient over `(avg_bf_delta, d_avg_delta)`
/// records. Requires at least two records and nonzero variance in both
/// columns; a constant column makes the coefficient undefined and
/// raises [`RestructureError::DegenerateVariance`].
pub fn bf_distortion_correlation(records: &[(f64, f64)]) -> Result<f64, RestructureError> {
    if records.len() < 2 {
        return Err(RestructureError::DegenerateVariance {
            column: "branching-factor",
        });
    }
    let n = records.len() as f64;
    let mean_x = records.iter().map(|r| r.0).sum::<f64>() / n;
    let mean_y = records.iter().map(|r| r.1).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for &(x, y) in records {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 {
        return Err(RestructureError::DegenerateVariance {
            column: "branching-factor",
        });
    }
    if var_y == 0.0 {
        return Err(RestructureError::DegenerateVariance {
            column: "distortion",
        });
    }
    Ok(cov / (var_x.sqrt() * var_y.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_anticorrelation_is_minus_one() {
        let records = [(1.0, -1.0), (2.0, -2.0), (3.0, -3.0)];
        let r = bf_distortion_correlation(&records).unwrap();
        assert!((r - (-1.0)).abs() < 1e-12, "r = {r}");
    }

    #[test]
    fn constant_bf_deltas_are_degenerate() {
        let records = [(1.0, -1.0), (1.0, -2.0), (1.0, -3.0)];
        let err = bf_distortion_correlation(&records).unwrap_err();
        assert_eq!(
            err,
            RestructureError::DegenerateVariance {
                column: "branching-factor"
            }
        );
    }

    #[test]
    fn constant_distortion_deltas_are_degenerate() {
        let records = [(1.0, -1.0), (2.0, -1.0), (3.0, -1.0)];
        let err = bf_distortion_correlation(&records).unwrap_err();
        assert_eq!(
            err,
            RestructureError::DegenerateVariance {
                column: "distortion"
            }
        );
    }

    #[test]
    fn single_record_is_degenerate() {
        assert!(bf_distortion_correlation(&[(1.0, 2.0)]).is_err());
    }

    #[test]
    fn uncorrelated_square_is_zero() {
        let records = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
        let r = bf_distortion_correlation(&records).unwrap();
        assert!(r.abs() < 1e-12, "r = {r}");
    }

    #[test]
    fn coefficient_is_symmetric_and_bounded() {
        let records = [(0.5, -0.1), (2.0, -0.3), (3.5, -0.2), (4.0, -0.6)];
        let r = bf_distortion_correlation(&records).unwrap();
        assert!((-1.0..=1.0).contains(&r));
        let flipped: Vec<(f64, f64)> = records.iter().map(|&(x, y)| (y, x)).collect();
        let r2 = bf_distortion_correlation(&flipped).unwrap();
        assert!((r - r2).abs() < 1e-12);
    }
}

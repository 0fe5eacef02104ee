use crate::{Error, RankVector, Result};

/// Kendall's tau between two rankings of the same `n >= 2` items:
/// `(concordant - discordant) / (n (n - 1) / 2)`.
pub fn kendall_tau(predicted: &RankVector, label: &RankVector) -> Result<f64> {
    let (a, b) = (predicted.as_slice(), label.as_slice());
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "rank vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::DimensionMismatch(
            "kendall tau needs at least two items".into(),
        ));
    }
    let a: Vec<f64> = a.iter().map(|&x| x as f64).collect();
    let b: Vec<f64> = b.iter().map(|&x| x as f64).collect();
    Ok(tau_a(&a, &b))
}

/// Tau-a over arbitrary scores: tied pairs count as neither concordant nor
/// discordant. Returns 0 when fewer than two items are given.
pub(crate) fn tau_a(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let mut score = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let s = (x[i] - x[j]).signum() * (y[i] - y[j]).signum();
            if x[i] != x[j] && y[i] != y[j] {
                score += s as i64;
            }
        }
    }
    score as f64 / (n * (n - 1) / 2) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rv(x: &[usize]) -> RankVector {
        RankVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn fixture_cases() {
        assert_eq!(kendall_tau(&rv(&[1, 2, 3, 4]), &rv(&[1, 2, 3, 4])).unwrap(), 1.0);
        assert_eq!(kendall_tau(&rv(&[1, 2, 3, 4]), &rv(&[4, 3, 2, 1])).unwrap(), -1.0);
        assert_eq!(kendall_tau(&rv(&[1, 2, 3]), &rv(&[1, 3, 2])).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(kendall_tau(&rv(&[1, 2]), &rv(&[1, 2, 3])).is_err());
        assert!(kendall_tau(&rv(&[1]), &rv(&[1])).is_err());
    }

    #[test]
    fn constant_labels_give_zero() {
        assert_eq!(tau_a(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]), 0.0);
    }

    fn two_perms() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
        (2usize..30).prop_flat_map(|n| {
            let p = Just((1..=n).collect::<Vec<_>>());
            (p.clone().prop_shuffle(), p.prop_shuffle())
        })
    }

    proptest! {
        #[test]
        fn symmetric_bounded_and_reversal((a, b) in two_perms()) {
            let (ra, rb) = (rv(&a), rv(&b));
            let t = kendall_tau(&ra, &rb).unwrap();
            prop_assert!((-1.0..=1.0).contains(&t));
            prop_assert_eq!(t, kendall_tau(&rb, &ra).unwrap());
            prop_assert_eq!(kendall_tau(&ra, &ra).unwrap(), 1.0);
            let n = a.len();
            let rev: Vec<usize> = a.iter().map(|r| n + 1 - r).collect();
            prop_assert_eq!(kendall_tau(&ra, &rv(&rev)).unwrap(), -1.0);
        }
    }
}

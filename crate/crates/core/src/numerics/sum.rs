/// Neumaier-compensated sum of `terms`, accumulated in descending order of
/// magnitude.
pub fn compensated_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - next) + t;
        } else {
            carry += (t - next) + sum;
        }
        sum = next;
    }
    sum + carry
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_mass() {
        let terms = vec![1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(terms), 2.0);
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(compensated_sum(Vec::new()), 0.0);
    }
}

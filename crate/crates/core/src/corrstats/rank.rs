use super::StatsError;

/// Ranks `values` in ascending order, giving every tied group the mean of
/// the integer ranks it occupies (1-based).
///
/// Non-finite values are rejected since they have no place in a total order.
pub fn midranks(values: &[f64]) -> Result<Vec<f64>, StatsError> {
    if values.is_empty() {
        return Err(StatsError::TooFewObservations { needed: 1, got: 0 });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(StatsError::InvalidInput(format!("non-finite value {} at index {i}", values[i])));
    }

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        // -0.0 and 0.0 compare equal here, unlike under total_cmp
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    Ok(ranks)
}

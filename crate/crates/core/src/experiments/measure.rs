use crate::solvers::Trace;

/// Differences between successive restart iterations; empty with fewer than
/// two restarts.
///
/// With a reference optimum, restarts from the first iteration whose relative
/// suboptimality reaches `1e-13` onward are dropped as rounding noise.
pub fn measure_restart_intervals(trace: &Trace) -> Vec<usize> {
    let end = noise_floor_iteration(trace).unwrap_or(usize::MAX);
    trace
        .restart_iterations()
        .into_iter()
        .filter(|&k| k < end)
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect()
}

fn noise_floor_iteration(trace: &Trace) -> Option<usize> {
    let rel = trace.relative_suboptimality()?;
    rel.iter().position(|&r| r <= NOISE_FLOOR).map(|i| trace.records[i].k)
}

/// Mean of the measured restart intervals.
pub fn mean_interval(intervals: &[usize]) -> Option<f64> {
    if intervals.is_empty() {
        None
    } else {
        Some(intervals.iter().sum::<usize>() as f64 / intervals.len() as f64)
    }
}

/// Floor below which relative suboptimality is treated as rounding noise.
const NOISE_FLOOR: f64 = 1e-13;

/// Mean spacing between successive local minima of `f` from iteration `skip` on.
///
/// A local minimum is a strict 3-point minimum (`f[k−1] > f[k] ≤ f[k+1]`).
/// When the trace carries a reference optimum the window ends where the relative
/// suboptimality reaches `1e-13`, since later wiggles are rounding noise. Returns
/// `None` when fewer than two minima are found.
pub fn measure_oscillation_period(trace: &Trace, skip: usize) -> Option<f64> {
    let mut f = trace.f_values();
    if let Some(end) = noise_floor_iteration(trace) {
        f.truncate(end);
    }
    oscillation_period(&f, skip)
}

/// Mean spacing between successive local minima of a sampled signal.
pub fn oscillation_period(f: &[f64], skip: usize) -> Option<f64> {
    if f.len() < 3 {
        return None;
    }
    let minima: Vec<usize> = (skip.max(1)..f.len() - 1)
        .filter(|&k| f[k] < f[k - 1] && f[k] <= f[k + 1])
        .collect();
    if minima.len() < 2 {
        return None;
    }
    Some((minima[minima.len() - 1] - minima[0]) as f64 / (minima.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::TraceRecord;
    use crate::Vector;

    fn trace_from(f: &[f64], restarts: &[usize]) -> Trace {
        Trace {
            records: f
                .iter()
                .enumerate()
                .map(|(k, &f)| TraceRecord {
                    k,
                    f,
                    beta: 0.0,
                    step: 1.0,
                    restarted: restarts.contains(&k),
                })
                .collect(),
            final_x: Vector::zeros(1),
            f_star_ref: None,
            iterates: Vec::new(),
            operator_counts: None,
            converged: false,
        }
    }

    #[test]
    fn intervals_from_restarts() {
        let t = trace_from(&[1.0; 50], &[10, 25, 40]);
        assert_eq!(measure_restart_intervals(&t), vec![15, 15]);
        assert_eq!(mean_interval(&[15, 15]), Some(15.0));
        let mut f: Vec<f64> = (0..50).map(|k| 0.5f64.powi(k)).collect();
        f[49] = 0.0;
        let floored = trace_from(&f, &[10, 25, 44]).with_f_star(0.0);
        assert_eq!(measure_restart_intervals(&floored), vec![15]);
        let one = trace_from(&[1.0; 50], &[10]);
        assert!(measure_restart_intervals(&one).is_empty());
        assert_eq!(mean_interval(&[]), None);
    }

    #[test]
    fn period_of_decaying_cosine() {
        let f: Vec<f64> = (0..400)
            .map(|k| (0.1 * k as f64).cos().powi(2) * 0.99f64.powi(k))
            .collect();
        let p = oscillation_period(&f, 0).unwrap();
        assert!((p - std::f64::consts::PI / 0.1).abs() <= 1.0, "period {p}");
    }

    #[test]
    fn monotone_trace_has_no_period() {
        let f: Vec<f64> = (0..100).map(|k| 1.0 / (k + 1) as f64).collect();
        assert_eq!(measure_oscillation_period(&trace_from(&f, &[]), 0), None);
    }
}

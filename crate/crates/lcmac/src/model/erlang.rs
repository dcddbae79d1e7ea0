//! M/M/m queueing helpers used to turn per-channel access delays into
//! end-to-end packet delays.

/// Erlang-C probability that an arrival to an M/M/m queue has to wait.
///
/// `m` is the number of servers and `rho = lambda / (m * mu)` the per-server
/// utilisation. Computed through the Erlang-B recurrence
/// `B(j) = a B(j-1) / (j + a B(j-1))` with offered load `a = m * rho`, which
/// is numerically stable for large `m` where the factorial form overflows.
///
/// Returns 1.0 when `rho >= 1` (an overloaded queue delays every arrival).
pub fn erlang_c(m: u32, rho: f64) -> f64 {
    assert!(m >= 1, "need at least one server");
    assert!(rho >= 0.0, "utilisation must be non-negative");
    if rho >= 1.0 {
        return 1.0;
    }
    let a = m as f64 * rho;
    let mut b = 1.0;
    for j in 1..=m {
        b = a * b / (j as f64 + a * b);
    }
    b / (1.0 - rho * (1.0 - b))
}

/// Mean sojourn time (wait + service) of an M/M/m queue with arrival rate
/// `lambda` and per-server service rate `mu`:
/// `C(m, rho) / (m mu - lambda) + 1 / mu`.
///
/// Returns `f64::INFINITY` when the queue is unstable (`lambda >= m mu`).
pub fn mm_m_sojourn(m: u32, lambda: f64, mu: f64) -> f64 {
    assert!(m >= 1, "need at least one server");
    assert!(mu > 0.0, "service rate must be positive");
    assert!(lambda >= 0.0, "arrival rate must be non-negative");
    let capacity = m as f64 * mu;
    if lambda >= capacity {
        return f64::INFINITY;
    }
    let rho = lambda / capacity;
    erlang_c(m, rho) / (capacity - lambda) + 1.0 / mu
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_server_wait_probability_is_rho() {
        // For M/M/1 the probability of waiting is exactly the utilisation.
        for rho in [0.0, 0.1, 0.5, 0.9, 0.99] {
            assert!((erlang_c(1, rho) - rho).abs() < 1e-12, "rho = {rho}");
        }
    }

    #[test]
    fn two_servers_at_half_load() {
        // C(2, 0.5) = 1/3 by direct evaluation of the Erlang-C formula.
        assert!((erlang_c(2, 0.5) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn overload_always_waits() {
        assert_eq!(erlang_c(3, 1.0), 1.0);
        assert_eq!(erlang_c(3, 1.7), 1.0);
    }

    #[test]
    fn large_server_counts_stay_finite() {
        let c = erlang_c(500, 0.95);
        assert!((0.0..=1.0).contains(&c), "C = {c}");
    }

    #[test]
    fn sojourn_reduces_to_mm1() {
        // M/M/1: T = 1 / (mu - lambda).
        let t = mm_m_sojourn(1, 3.0, 5.0);
        assert!((t - 1.0 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn sojourn_two_servers_half_load() {
        // lambda = 1, mu = 1, m = 2 => rho = 0.5, C = 1/3,
        // T = (1/3) / (2 - 1) + 1 = 4/3.
        let t = mm_m_sojourn(2, 1.0, 1.0);
        assert!((t - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_queue_sojourn_is_service_time() {
        assert!((mm_m_sojourn(4, 0.0, 2.5) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn unstable_queue_reports_infinity() {
        assert_eq!(mm_m_sojourn(2, 10.0, 1.0), f64::INFINITY);
        assert_eq!(mm_m_sojourn(2, 2.0, 1.0), f64::INFINITY);
    }
}

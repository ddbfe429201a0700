//! Combinatorial size of the firing-pattern space and query-cost comparison
//! between a classical scan and the Grover sweep.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::grover::iteration_count;

/// `log₁₀ C(population, active)` via log-gamma.
pub fn log10_binomial(population: u64, active: u64) -> Result<f64> {
    if active > population {
        return Err(Error::validation(format!(
            "active count {active} exceeds population {population}"
        )));
    }
    if active == 0 || active == population {
        return Ok(0.0);
    }
    let n = population as f64;
    let k = active as f64;
    let ln = ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
    Ok((ln / std::f64::consts::LN_10).max(0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QueryCost {
    pub bits: u32,
    pub list_size: u64,
    pub repetitions: u64,
    /// Padded list register size used by the Grover search.
    pub search_space: u64,
    /// `2^n · M`: scanning the whole list once per code.
    pub classical_scan_queries: f64,
    /// Worst-case iterations per target, `⌊(π/4)·√N⌋`.
    pub grover_iterations_per_target: u64,
    /// `2^n · r · k`.
    pub grover_oracle_calls: f64,
    pub speedup: f64,
    /// Classical worst case for deciding constancy of the firing function
    /// over the code space: `2^(n−1) + 1` evaluations.
    pub dj_classical_queries: f64,
    /// Two oracle queries, one per fill bit.
    pub dj_quantum_queries: u64,
}

pub fn query_cost(bits: u32, list_size: u64, repetitions: u64) -> Result<QueryCost> {
    if list_size == 0 {
        return Err(Error::validation("list size must be at least 1"));
    }
    if repetitions == 0 {
        return Err(Error::validation("repetitions must be at least 1"));
    }
    if bits == 0 || bits > 62 {
        return Err(Error::validation(format!(
            "bit width {bits} outside [1, 62]"
        )));
    }
    let search_space = list_size
        .checked_next_power_of_two()
        .ok_or_else(|| Error::validation("list size too large"))?;
    let k = iteration_count(search_space as usize, 0)? as u64;
    let codes = 2f64.powi(bits as i32);
    let classical = codes * list_size as f64;
    let grover = codes * repetitions as f64 * k as f64;
    Ok(QueryCost {
        bits,
        list_size,
        repetitions,
        search_space,
        classical_scan_queries: classical,
        grover_iterations_per_target: k,
        grover_oracle_calls: grover,
        speedup: if grover > 0.0 {
            classical / grover
        } else {
            f64::INFINITY
        },
        dj_classical_queries: 2f64.powi(bits as i32 - 1) + 1.0,
        dj_quantum_queries: 2,
    })
}

/// Enumeration and size caps shared by every module.
///
/// Caps are configuration, not constants baked into algorithms; every
/// operation that can blow up checks the relevant field and fails with a
/// cap error naming the limit instead of running away.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Limits {
    /// Largest ground set for exact subset iteration and value tables.
    pub max_ground: usize,
    /// Largest number of parts in a quotient point.
    pub max_k: usize,
    /// Largest number of leaves an exact profile enumeration may visit.
    pub max_iterations: u128,
    /// Largest ground set for exhaustive submodularity checks (4^n pairs).
    pub max_submodular_ground: usize,
    /// Largest ground set for flat enumeration.
    pub max_flat_ground: usize,
    pub max_flats: usize,
    /// Largest common ground for the brute-force matroid union verifier.
    pub max_union_brute_ground: usize,
    pub max_pattern_nodes: usize,
    pub max_target_nodes: usize,
    pub max_steps: usize,
    /// Largest node count for the exact labeled cut distance.
    pub max_cut_nodes: usize,
    pub max_colors: usize,
    /// Violations kept by the submodularity and monotonicity checkers.
    pub max_reported_violations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_ground: 24,
            max_k: 8,
            max_iterations: 1 << 26,
            max_submodular_ground: 12,
            max_flat_ground: 20,
            max_flats: 100_000,
            max_union_brute_ground: 16,
            max_pattern_nodes: 5,
            max_target_nodes: 16,
            max_steps: 12,
            max_cut_nodes: 24,
            max_colors: 8,
            max_reported_violations: 1024,
        }
    }
}

pub(crate) fn check_cap(what: &'static str, value: usize, cap: usize) -> crate::Result<()> {
    if value > cap {
        Err(crate::Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}

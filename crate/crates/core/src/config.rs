/// Tunables shared by the congruence-image and prime-set computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Largest orbit (in vectors of `F_p^n`) a stabilizer chain may build.
    pub orbit_budget: u64,
    /// Seed for the randomized phase of chain construction. Results never
    /// depend on it.
    pub seed: u64,
    /// Number of random elements sifted before deterministic verification.
    pub random_elements: usize,
    /// Pollard rho trials per cofactor during factorization.
    pub factor_effort: usize,
    pub verbosity: u8,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            orbit_budget: 10_000_000,
            seed: 0x5eed,
            random_elements: 24,
            factor_effort: 16,
            verbosity: 0,
        }
    }
}

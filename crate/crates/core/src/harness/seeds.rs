/// One step of the splitmix64 generator, used as a 64-bit mixer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fold `parts` into `master` one mixing round at a time.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(master), |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}

const CHANNEL_STREAM: u64 = 0;
const ALGORITHM_STREAM: u64 = 1;

/// Channel seed of a realization. It ignores the scenario point, so every
/// point and algorithm sees the same geometry and fading for a given index.
pub fn channel_seed(master: u64, realization: usize) -> u64 {
    derive_seed(master, &[CHANNEL_STREAM, realization as u64])
}

/// Seed of one algorithm run at `(scenario, realization)`.
pub fn algorithm_seed(master: u64, scenario: usize, realization: usize, algorithm: u64) -> u64 {
    derive_seed(
        master,
        &[
            ALGORITHM_STREAM,
            scenario as u64,
            realization as u64,
            algorithm,
        ],
    )
}

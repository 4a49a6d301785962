use crate::error::{Error, Result};
use crate::scalar::Precision;

/// Execution geometry: `omega` lanes per tile (warp width), `sigma` steps per
/// lane and `block_size` lanes per block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimtConfig {
    omega: u32,
    sigma: u32,
    block_size: u32,
    offset_bits: u32,
}

/// Lanes per block used when the caller does not choose one.
pub const DEFAULT_BLOCK_WARPS: u32 = 8;

/// `ceil(log2(v))` for `v >= 1`.
pub(crate) fn ceil_log2(v: u64) -> u32 {
    debug_assert!(v >= 1);
    64 - (v - 1).leading_zeros()
}

impl SimtConfig {
    pub fn new(omega: u32, sigma: u32, block_size: u32) -> Result<Self> {
        if omega == 0 || sigma == 0 {
            return Err(Error::InfeasibleConfig(
                "omega and sigma must both be at least 1".into(),
            ));
        }
        if block_size == 0 || !block_size.is_multiple_of(omega) {
            return Err(Error::InfeasibleConfig(format!(
                "block size {block_size} is not a positive multiple of omega = {omega}"
            )));
        }
        let offset_bits = ceil_log2(omega as u64 * sigma as u64);
        if 2 * offset_bits as u64 + sigma as u64 > 32 {
            return Err(Error::InfeasibleConfig(format!(
                "2*ceil(log2({omega}*{sigma})) + {sigma} = {} > 32: descriptor does not fit in 32 bits",
                2 * offset_bits + sigma
            )));
        }
        Ok(Self {
            omega,
            sigma,
            block_size,
            offset_bits,
        })
    }

    /// `omega` lanes per tile with `DEFAULT_BLOCK_WARPS` tiles per block.
    pub fn with_default_block(omega: u32, sigma: u32) -> Result<Self> {
        Self::new(omega, sigma, omega.saturating_mul(DEFAULT_BLOCK_WARPS))
    }

    /// Warp width 32 and the precision's default sigma.
    pub fn for_precision(p: Precision) -> Self {
        Self::with_default_block(32, p.default_sigma()).expect("default configurations are feasible")
    }

    pub fn with_block_size(self, block_size: u32) -> Result<Self> {
        Self::new(self.omega, self.sigma, block_size)
    }

    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    pub fn offset_bits(&self) -> u32 {
        self.offset_bits
    }

    /// Path steps covered by one full tile.
    pub fn tile_span(&self) -> usize {
        self.omega as usize * self.sigma as usize
    }

    pub fn warps_per_block(&self) -> usize {
        (self.block_size / self.omega) as usize
    }

    /// Scratch capacity per block in scalars: `(b + 1) * sigma`.
    pub fn scratch_len(&self) -> usize {
        (self.block_size as usize + 1) * self.sigma as usize
    }

    /// Shared-memory bytes per block for the given precision.
    pub fn smem_bytes(&self, p: Precision) -> usize {
        self.scratch_len() * p.size_of_value()
    }
}

impl std::fmt::Display for SimtConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "omega={} sigma={} block={}", self.omega, self.sigma, self.block_size)
    }
}

/// Steps per lane for a precision, unless explicitly overridden.
pub fn select_sigma(p: Precision, override_sigma: Option<u32>) -> u32 {
    override_sigma.unwrap_or_else(|| p.default_sigma())
}

//! Search caps and window sizes shared by the analyses.

use crate::shift::GroupShift;

/// Every window-scale answer is relative to these numbers; reports echo them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Horizons {
    /// Padding on each side when certifying a finite word as a member.
    pub margin: usize,
    /// Past horizon `L` for the steering checks; `None` means `2 × (span + n)`.
    pub past: Option<usize>,
    /// Largest candidate `n` for the controllability indices.
    pub index_cap: usize,
    /// Largest block length tried for the finite-type memory.
    pub memory_cap: usize,
    /// Longest finite member searched when building generating sets.
    pub support_cap: usize,
    /// Largest block `[0, N]` tried by the injectivity check.
    pub block_cap: usize,
    /// Window lengths checked by the surjectivity, density and finite-multiple checks.
    pub verify: usize,
}

impl Horizons {
    pub const DEFAULT_CAP: usize = 16;
    pub const DEFAULT_VERIFY: usize = 8;

    pub fn for_shift(g: &GroupShift) -> Self {
        let span = g.max_span();
        Horizons {
            margin: 2 * span,
            past: None,
            index_cap: Self::DEFAULT_CAP,
            memory_cap: Self::DEFAULT_CAP,
            support_cap: Self::DEFAULT_CAP,
            block_cap: Self::DEFAULT_CAP,
            verify: Self::DEFAULT_VERIFY,
        }
    }

    /// Past horizon used for candidate index `n`.
    pub fn past_for(&self, g: &GroupShift, n: usize) -> usize {
        self.past.unwrap_or(2 * (g.max_span() + n)).max(1)
    }
}

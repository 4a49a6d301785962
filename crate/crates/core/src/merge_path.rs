//! Merge-path geometry.
//!
//! The merge path of a CSR matrix with `m` nonzeros and `n` rows is the
//! monotone lattice path from `(0, 0)` to `(m, n)`: at `(x, y)` it steps
//! Right (consume nonzero `x` into row `y`) while `x < row_offsets[y + 1]`,
//! otherwise Down (finalize row `y`).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PathCoord {
    /// Nonzero index, `0..=m`.
    pub x: usize,
    /// Row index, `0..=n`.
    pub y: usize,
}

impl PathCoord {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    pub fn diagonal(self) -> usize {
        self.x + self.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MergeStep {
    Right,
    Down,
}

impl MergeStep {
    pub fn apply(self, c: PathCoord) -> PathCoord {
        match self {
            MergeStep::Right => PathCoord::new(c.x + 1, c.y),
            MergeStep::Down => PathCoord::new(c.x, c.y + 1),
        }
    }
}

fn dims(row_offsets: &[usize]) -> (usize, usize) {
    let n = row_offsets.len().saturating_sub(1);
    (n, row_offsets.last().copied().unwrap_or(0))
}

/// Intersection of the merge path with the diagonal `x + y = diag`, by binary
/// search on `y`.
pub fn merge_search(row_offsets: &[usize], diag: usize, n: usize, m: usize) -> Result<PathCoord> {
    merge_search_counted(row_offsets, diag, n, m).map(|(c, _)| c)
}

/// [`merge_search`] that also reports how many probes the search made.
pub fn merge_search_counted(
    row_offsets: &[usize],
    diag: usize,
    n: usize,
    m: usize,
) -> Result<(PathCoord, u32)> {
    if diag > m + n {
        return Err(Error::InvalidArgument(format!(
            "diagonal {diag} outside [0, {}]",
            m + n
        )));
    }
    debug_assert_eq!(row_offsets.len(), n + 1);
    let mut y_min = diag.saturating_sub(m);
    let mut y_max = diag.min(n);
    let mut probes = 0;
    while y_min < y_max {
        probes += 1;
        let mid = (y_min + y_max) >> 1;
        if row_offsets[mid + 1] < diag - mid {
            y_min = mid + 1;
        } else {
            y_max = mid;
        }
    }
    Ok((PathCoord::new(diag - y_min, y_min.min(n)), probes))
}

/// The full merge path, built by walking it one step at a time.
pub fn sequential_path(row_offsets: &[usize]) -> Vec<MergeStep> {
    let (n, m) = dims(row_offsets);
    let mut steps = Vec::with_capacity(m + n);
    let (mut x, mut y) = (0, 0);
    while x < m || y < n {
        if y < n && x < row_offsets[y + 1] {
            steps.push(MergeStep::Right);
            x += 1;
        } else {
            steps.push(MergeStep::Down);
            y += 1;
        }
    }
    steps
}

/// Coordinates visited by `steps` starting at the origin, including both
/// endpoints (`steps.len() + 1` entries).
pub fn path_coordinates(steps: &[MergeStep]) -> Vec<PathCoord> {
    let mut out = Vec::with_capacity(steps.len() + 1);
    let mut c = PathCoord::default();
    out.push(c);
    for s in steps {
        c = s.apply(c);
        out.push(c);
    }
    out
}

/// Lane and tile start coordinates of a partition into `sigma`-step lanes
/// grouped `omega` lanes per tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub lane_starts: Vec<PathCoord>,
    pub tile_starts: Vec<PathCoord>,
}

pub fn partition_starts(row_offsets: &[usize], omega: usize, sigma: usize) -> Result<Partition> {
    if omega == 0 || sigma == 0 {
        return Err(Error::InfeasibleConfig("omega and sigma must be at least 1".into()));
    }
    let (n, m) = dims(row_offsets);
    let lane_num = (m + n).div_ceil(sigma);
    let lane_starts = (0..lane_num)
        .map(|j| merge_search(row_offsets, j * sigma, n, m))
        .collect::<Result<Vec<_>>>()?;
    let tile_starts = lane_starts.iter().step_by(omega).copied().collect();
    Ok(Partition {
        lane_starts,
        tile_starts,
    })
}

//! Snake-order shear sorting network for 3x3 windows.
//!
//! The network treats the nine window values as a 3x3 mesh and runs fixed
//! stages of parallel three-cell sorters:
//!
//! 1. row sort — rows 1 and 3 ascending, row 2 descending;
//! 2. column sort — all three columns ascending;
//! 3. row sort again (same directions);
//! 4. column sort again;
//! 5. two semi-diagonal sorts: the cells holding snake ranks 2-4 and the
//!    cells holding snake ranks 6-8, each ascending along the snake.
//!
//! Reading the mesh in snake (boustrophedon) order — row 1 left to right,
//! row 2 right to left, row 3 left to right — then yields the ascending
//! sequence. The base wiring above leaves the center cell (the median slot)
//! unordered against its snake neighbors for a small set of inputs, so the
//! shipped network appends one more three-cell sorter on snake ranks 4-6
//! (the middle row). [`verify_network`] proves the result exhaustively:
//! zero failures over all 512 binary inputs (the 0-1 principle) and all
//! 362,880 permutations of nine distinct values.

use std::fmt::Write as _;

use itertools::Itertools;

use crate::image::Window;

/// Mesh cells in snake (boustrophedon) order, row-major indexing.
pub const SNAKE_ORDER: [usize; 9] = [0, 1, 2, 5, 4, 3, 6, 7, 8];

/// The nine values of a 3x3 window in ascending order.
///
/// Ranks are one-based to match the forward/reverse trim counters:
/// rank 1 is the minimum, rank 9 the maximum, rank 5 the median.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortedWindow([u8; 9]);

impl SortedWindow {
    /// Wraps an already-ascending array. Panics if the order is violated.
    pub fn from_sorted(values: [u8; 9]) -> Self {
        assert!(
            values.windows(2).all(|w| w[0] <= w[1]),
            "values must be ascending: {values:?}"
        );
        Self(values)
    }

    /// Sorts arbitrary window values (via the shipped network).
    pub fn from_values(values: [u8; 9]) -> Self {
        sort9(values)
    }

    pub fn values(&self) -> &[u8; 9] {
        &self.0
    }

    /// Value at one-based `rank` (1 = minimum, 9 = maximum).
    pub fn rank(&self, rank: usize) -> u8 {
        assert!((1..=9).contains(&rank), "rank {rank} outside 1..=9");
        self.0[rank - 1]
    }

    /// The middle value, rank 5.
    pub fn median(&self) -> u8 {
        self.0[4]
    }
}

/// Orders three values with exactly three compare-exchange operations.
pub fn sort3(a: u8, b: u8, c: u8) -> (u8, u8, u8) {
    let (mut lo, mut mid, mut hi) = (a, b, c);
    if lo > mid {
        std::mem::swap(&mut lo, &mut mid);
    }
    if mid > hi {
        std::mem::swap(&mut mid, &mut hi);
    }
    if lo > mid {
        std::mem::swap(&mut lo, &mut mid);
    }
    (lo, mid, hi)
}

/// One three-input sorter: reads its three slots, writes the minimum to the
/// first slot, the middle to the second, and the maximum to the third.
///
/// A descending placement is expressed by listing the slots in reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThreeCellSorter {
    pub slots: [usize; 3],
}

impl ThreeCellSorter {
    const fn new(slots: [usize; 3]) -> Self {
        Self { slots }
    }

    fn apply(&self, mesh: &mut [u8; 9]) {
        let [a, b, c] = self.slots;
        let (lo, mid, hi) = sort3(mesh[a], mesh[b], mesh[c]);
        mesh[a] = lo;
        mesh[b] = mid;
        mesh[c] = hi;
    }
}

/// A fixed, data-oblivious wiring of three-cell sorter stages over the mesh.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    stages: Vec<Vec<ThreeCellSorter>>,
}

// Stage wiring shared by both networks. Row 2 sorts descending (slots
// reversed) so its maximum lands in column 1, keeping the snake direction.
const ROW_STAGE: [ThreeCellSorter; 3] = [
    ThreeCellSorter::new([0, 1, 2]),
    ThreeCellSorter::new([5, 4, 3]),
    ThreeCellSorter::new([6, 7, 8]),
];
const COLUMN_STAGE: [ThreeCellSorter; 3] = [
    ThreeCellSorter::new([0, 3, 6]),
    ThreeCellSorter::new([1, 4, 7]),
    ThreeCellSorter::new([2, 5, 8]),
];
// Semi-diagonal sorts: snake ranks 2-4 live in cells 1, 2, 5 and snake
// ranks 6-8 in cells 3, 6, 7.
const DIAGONAL_STAGE: [ThreeCellSorter; 2] = [
    ThreeCellSorter::new([1, 2, 5]),
    ThreeCellSorter::new([3, 6, 7]),
];
// Cleanup sorter over snake ranks 4-6 (the middle row, descending), added by
// the shipped network so the median slot is ordered for every input.
const CLEANUP_STAGE: [ThreeCellSorter; 1] = [ThreeCellSorter::new([5, 4, 3])];

impl Network {
    /// The base wiring: two row/column shear rounds plus the two
    /// semi-diagonal sorts — 5 stages, 14 sorters, 42 comparators.
    ///
    /// This wiring is *not* a complete sorting network; see
    /// [`verify_network`] for the exact failure set.
    pub fn base() -> Self {
        Self {
            stages: vec![
                ROW_STAGE.to_vec(),
                COLUMN_STAGE.to_vec(),
                ROW_STAGE.to_vec(),
                COLUMN_STAGE.to_vec(),
                DIAGONAL_STAGE.to_vec(),
            ],
        }
    }

    /// The shipped wiring: [`Network::base`] plus one cleanup sorter on the
    /// middle row — 6 stages, 15 sorters, 45 comparators, exhaustively
    /// verified to sort.
    pub fn shipped() -> Self {
        let mut net = Self::base();
        net.stages.push(CLEANUP_STAGE.to_vec());
        net
    }

    pub fn stages(&self) -> &[Vec<ThreeCellSorter>] {
        &self.stages
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    /// Total compare-exchange count (three per sorter).
    pub fn comparator_count(&self) -> usize {
        self.stages.iter().map(|s| s.len() * 3).sum::<usize>()
    }

    /// Runs every stage over the mesh (row-major values) in place.
    pub fn apply(&self, mut mesh: [u8; 9]) -> [u8; 9] {
        for stage in &self.stages {
            for sorter in stage {
                sorter.apply(&mut mesh);
            }
        }
        mesh
    }

    /// Runs the network and reads the mesh out in snake order.
    pub fn sort(&self, mesh: [u8; 9]) -> [u8; 9] {
        let sorted = self.apply(mesh);
        SNAKE_ORDER.map(|i| sorted[i])
    }
}

/// Sorts a 3x3 window through the shipped network.
///
/// Output always equals [`reference_sort`]; the equivalence is established
/// exhaustively by [`verify_network`].
pub fn snake_sort_network(window: &Window) -> SortedWindow {
    assert_eq!(window.size(), 3, "the sorting network handles 3x3 windows");
    let mesh: [u8; 9] = window.values().try_into().expect("3x3 window has 9 values");
    sort9(mesh)
}

/// Hot-path entry: sorts nine row-major values through the shipped network.
///
/// Iterates the same constant stage tables [`Network::shipped`] is built
/// from, without allocating.
pub fn sort9(mut mesh: [u8; 9]) -> SortedWindow {
    let stages = ROW_STAGE
        .iter()
        .chain(&COLUMN_STAGE)
        .chain(&ROW_STAGE)
        .chain(&COLUMN_STAGE)
        .chain(&DIAGONAL_STAGE)
        .chain(&CLEANUP_STAGE);
    for sorter in stages {
        sorter.apply(&mut mesh);
    }
    SortedWindow(SNAKE_ORDER.map(|i| mesh[i]))
}

/// Comparison-sort oracle for the network.
pub fn reference_sort(window: &Window) -> SortedWindow {
    assert_eq!(window.size(), 3, "reference sort handles 3x3 windows");
    let mut values: [u8; 9] = window.values().try_into().expect("3x3 window has 9 values");
    values.sort_unstable();
    SortedWindow(values)
}

/// Outcome of exhaustively checking a [`Network`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkReport {
    pub comparator_count: usize,
    pub stage_count: usize,
    /// Input vectors (row-major) the network failed to sort; empty iff the
    /// wiring is a correct sorting network.
    pub failures: Vec<[u8; 9]>,
}

impl NetworkReport {
    pub fn is_sorting_network(&self) -> bool {
        self.failures.is_empty()
    }

    /// Plain-text form: counts plus up to `max_listed` failing vectors.
    pub fn to_text(&self, max_listed: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "stages = {}", self.stage_count);
        let _ = writeln!(out, "comparators = {}", self.comparator_count);
        let _ = writeln!(out, "failures = {}", self.failures.len());
        for v in self.failures.iter().take(max_listed) {
            let _ = writeln!(out, "  failed: {v:?}");
        }
        if self.failures.len() > max_listed {
            let _ = writeln!(out, "  ... and {} more", self.failures.len() - max_listed);
        }
        out
    }
}

/// Exhaustively verifies a network: all 512 binary {0, 255} meshes (the 0-1
/// principle makes these sufficient for a compare-exchange network) and all
/// 9! permutations of nine distinct values.
pub fn verify_network(network: &Network) -> NetworkReport {
    let mut failures = Vec::new();

    for mask in 0u16..512 {
        let mesh: [u8; 9] = std::array::from_fn(|i| if mask & (1 << i) != 0 { 255 } else { 0 });
        let out = network.sort(mesh);
        if !out.windows(2).all(|w| w[0] <= w[1]) {
            failures.push(mesh);
        }
    }

    for perm in (1u8..=9).permutations(9) {
        let mesh: [u8; 9] = perm.try_into().expect("permutation of nine values");
        let out = network.sort(mesh);
        if out != [1, 2, 3, 4, 5, 6, 7, 8, 9] {
            failures.push(mesh);
        }
    }

    NetworkReport {
        comparator_count: network.comparator_count(),
        stage_count: network.stage_count(),
        failures,
    }
}

//! Published reference bounds for identifiability ranges, used to compare scan
//! output against known values.

use crate::poly::binomial;

/// Columns of the catalecticant table, one triple per degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundTriple {
    /// Largest `r` for which the middle catalecticant has the expected rank.
    pub spade: usize,
    /// Largest `r` certified by the normal-space test, when known.
    pub club: Option<usize>,
    /// Kruskal bound `⌊(d(n+1) - d + 1)/2⌋`.
    pub square: usize,
}

pub const TABLE1_DEGREES: [usize; 5] = [4, 5, 6, 7, 8];

const N: Option<usize> = None;

#[rustfmt::skip]
const TABLE1: [[(usize, Option<usize>, usize); 5]; 10] = [
    [(2, Some(2), 2), (2, Some(2), 3), (3, Some(3), 3), (3, Some(3), 4), (4, Some(4), 4)],
    [(3, Some(4), 4), (3, Some(4), 5), (6, Some(6), 6), (6, Some(7), 7), (10, Some(10), 8)],
    [(4, Some(5), 6), (4, Some(6), 8), (10, Some(12), 9), (10, Some(15), 11), (20, Some(23), 12)],
    [(5, Some(7), 8), (5, Some(9), 10), (15, Some(21), 12), (15, Some(27), 14), (35, Some(47), 16)],
    [(6, Some(10), 10), (6, Some(14), 13), (21, Some(33), 15), (21, N, 18), (56, Some(87), 20)],
    [(7, Some(12), 12), (7, Some(19), 15), (28, Some(50), 18), (28, N, 21), (84, N, 24)],
    [(8, Some(16), 14), (8, Some(25), 18), (36, Some(72), 21), (36, N, 25), (120, N, 28)],
    [(9, Some(20), 16), (9, Some(33), 20), (45, N, 24), (45, N, 28), (165, N, 32)],
    [(10, Some(25), 18), (10, Some(41), 23), (55, N, 27), (55, N, 32), (220, N, 36)],
    [(11, Some(29), 20), (11, N, 25), (66, N, 30), (66, N, 35), (286, N, 40)],
];

/// Reference triple for `1 ≤ n ≤ 10`, `4 ≤ d ≤ 8`.
pub fn table1(n: usize, d: usize) -> Option<BoundTriple> {
    let row = TABLE1.get(n.checked_sub(1)?)?;
    let col = TABLE1_DEGREES.iter().position(|&x| x == d)?;
    let (spade, club, square) = row[col];
    Some(BoundTriple { spade, club, square })
}

const TABLE2: [usize; 9] = [2, 3, 5, 6, 8, 11, 11, 14, 15];

/// Largest `r` certified for cubics in `n+1` variables, `1 ≤ n ≤ 9`.
pub fn table2(n: usize) -> Option<usize> {
    TABLE2.get(n.checked_sub(1)?).copied()
}

/// `binom(n+δ-1, δ-1)` with `δ = ⌊d/2⌋`.
pub fn spade_formula(n: usize, d: usize) -> usize {
    let delta = d / 2;
    binomial(n + delta - 1, delta - 1)
}

/// `⌊(d(n+1) - d + 1)/2⌋`.
pub fn kruskal_formula(n: usize, d: usize) -> usize {
    (d * (n + 1) - d + 1) / 2
}

/// `⌈binom(n+d,d)/(n+1)⌉`, the rank of a general form.
pub fn generic_rank(n: usize, d: usize) -> usize {
    binomial(n + d, d).div_ceil(n + 1)
}

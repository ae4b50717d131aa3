//! Coverage bound for complete arcs of a fixed target size.
//!
//! Let `S` be an (n,r)-arc contained in a complete (M,r)-arc `A`, and let
//! `U` be the points of `S`'s complement lying on no `r`-secant of `S`.
//! Completeness of `A` puts each point of `U \ A` on an `r`-secant of `A`,
//! and that line is not an `r`-secant of `S`, so it carries a point `x` of
//! `A \ S`. Through `x` pass at most `⌊(M−1)/(r−1)⌋` lines holding `r`
//! points of `A`, each with `q+1−r` points outside `A`. Charging every
//! point of `U` to such an `x` (or to itself when it lies in `A`) gives
//!
//! ```text
//! |U| ≤ (M − n) · (1 + ⌊(M−1)/(r−1)⌋ · (q+1−r)).
//! ```
//!
//! Every subset of `A` satisfies the bound, so a level-wise search that
//! drops sets violating it still reaches every complete arc of size `M`.

/// Whether an n-point arc with `addable` addable points can still grow into
/// a complete (M,r)-arc.
pub fn coverage_bound_allows(n: usize, addable: usize, target: usize, q: u32, r: u32) -> bool {
    if n > target {
        return false;
    }
    if r < 2 {
        return addable == 0;
    }
    let lines = target.saturating_sub(1) / (r as usize - 1);
    let per_point = 1 + lines * (q as usize + 1 - r as usize);
    addable <= (target - n) * per_point
}

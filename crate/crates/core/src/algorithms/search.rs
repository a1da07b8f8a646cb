/// Smallest position `p` in `(lo, hi]` with `dependent(p)`, where `lo` is
/// known independent (`None` stands for the empty prefix) and `hi` is known
/// dependent. Probes `⌈(lo+hi)/2⌉`, so at most `⌈log2(hi − lo)⌉` calls.
pub fn smallest_dependent_prefix(
    lo: Option<usize>,
    hi: usize,
    mut dependent: impl FnMut(usize) -> bool,
) -> usize {
    let mut lo = lo.map_or(-1, |l| l as isize);
    let mut hi = hi as isize;
    assert!(lo < hi, "empty search range");
    while hi - lo > 1 {
        let mid = lo + (hi - lo + 1) / 2;
        if dependent(mid as usize) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi as usize
}

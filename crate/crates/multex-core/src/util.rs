//! Small combinatorial helpers shared across modules.

/// Binomial coefficient as u64; panics on overflow, which cannot happen for
/// the vertex counts this crate handles.
pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(n, 2)` as usize.
pub(crate) fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Dense index of the unordered pair `{i, j}` (`i < j`) in the row-major
/// triangular layout used by `Multigraph`.
pub(crate) fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Calls `f` with every k-subset of `0..n` in lexicographic order. The slice
/// is reused between calls, so callers must not hold on to it.
pub(crate) fn for_each_subset<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance to the next lexicographic k-subset
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if idx[pos] != pos + n - k {
                break;
            }
            if pos == 0 {
                return;
            }
        }
        idx[pos] += 1;
        for t in pos + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// All vertices of the pair with dense index `e` on `n` vertices; the inverse
/// of `pair_index`.
pub(crate) fn pair_from_index(e: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    let mut base = 0;
    loop {
        let row = n - i - 1;
        if e < base + row {
            return (i, i + 1 + (e - base));
        }
        base += row;
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(21, 8), 203_490);
        assert_eq!(binomial(7, 5), 21);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 9), 0);
    }

    #[test]
    fn pair_index_roundtrip() {
        for n in 2..10 {
            let mut e = 0;
            for i in 0..n {
                for j in i + 1..n {
                    assert_eq!(pair_index(i, j, n), e);
                    assert_eq!(pair_from_index(e, n), (i, j));
                    e += 1;
                }
            }
            assert_eq!(e, choose2(n));
        }
    }

    #[test]
    fn subset_enumeration_counts() {
        let mut count = 0u64;
        for_each_subset(7, 5, |s| {
            assert_eq!(s.len(), 5);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            count += 1;
        });
        assert_eq!(count, binomial(7, 5));
        count = 0;
        for_each_subset(4, 4, |_| count += 1);
        assert_eq!(count, 1);
        count = 0;
        for_each_subset(3, 5, |_| count += 1);
        assert_eq!(count, 0);
    }
}

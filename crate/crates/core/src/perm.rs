//! Permutations of `{0, .., k-1}` stored in one-line notation (`p[i]` is the image of `i`).

use itertools::Itertools;

pub type Permutation = Vec<usize>;

pub fn identity(k: usize) -> Permutation {
    (0..k).collect()
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// +1 or -1; panics if `p` is not a permutation.
pub fn sign(p: &[usize]) -> i32 {
    assert!(is_permutation(p), "not a permutation: {p:?}");
    let mut visited = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = p[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(outer ∘ inner)(i) = outer[inner[i]]`.
pub fn compose(outer: &[usize], inner: &[usize]) -> Permutation {
    inner.iter().map(|&i| outer[i]).collect()
}

pub fn inverse(p: &[usize]) -> Permutation {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// All permutations of `k` points in lexicographic order.
pub fn all(k: usize) -> impl Iterator<Item = Permutation> {
    (0..k).permutations(k)
}

/// Disjoint cycles, each starting at its smallest element, ordered by that element.
pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut visited = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            cycle.push(i);
            i = p[i];
        }
        out.push(cycle);
    }
    out
}

//! Edit distance between the visited parts of two tours.

/// Classic Levenshtein distance (substitutions, deletions, insertions each
/// cost 1) between two node sequences. Callers pass visited nodes only, so
/// the inactive tails of tours never influence the distance.
pub fn levenshtein(a: &[usize], b: &[usize]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut row = vec![0usize; b.len() + 1];
    for (i, &ai) in a.iter().enumerate() {
        row[0] = i + 1;
        for (j, &bj) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ai != bj);
            row[j + 1] = sub.min(prev[j + 1] + 1).min(row[j] + 1);
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[b.len()]
}

//! Realizability of branch data by a branched covering of the sphere, decided
//! by searching permutation tuples.

use std::collections::HashMap;

pub const DEFAULT_BOUND: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzData {
    pub degree: usize,
    /// One partition of `degree` per branch point.
    pub branch_data: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hurwitz {
    /// One permutation per branch point, as images of 0..n.
    Realizable(Vec<Vec<usize>>),
    NotRealizable(String),
    SearchExceeded,
}

impl HurwitzData {
    pub fn branching(&self) -> usize {
        self.branch_data.iter().map(|p| self.degree - p.len()).sum()
    }
}

pub type Perm = Vec<u8>;

pub fn compose(a: &[u8], b: &[u8]) -> Perm {
    // apply a, then b
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn inverse(a: &[u8]) -> Perm {
    let mut out = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

pub fn cycle_type(a: &[u8]) -> Vec<usize> {
    let mut seen = vec![false; a.len()];
    let mut out = Vec::new();
    for i in 0..a.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = a[j] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

/// All permutations of 0..n with the given cycle type.
fn class(n: usize, shape: &[usize]) -> Vec<Perm> {
    let mut want = shape.to_vec();
    want.sort_unstable_by(|x, y| y.cmp(x));
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    permute(&mut p, 0, &mut |q| {
        if cycle_type(q) == want {
            out.push(q.to_vec());
        }
    });
    out
}

fn permute(p: &mut [u8], k: usize, f: &mut dyn FnMut(&[u8])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// A fixed permutation with the given cycle type.
fn representative(n: usize, shape: &[usize]) -> Perm {
    let mut p = vec![0u8; n];
    let mut start = 0;
    for &len in shape {
        for i in 0..len {
            p[start + i] = (start + (i + 1) % len) as u8;
        }
        start += len;
    }
    p
}

/// Orbit partition as a canonical label vector.
fn merge(labels: &[u8], perm: &[u8]) -> Vec<u8> {
    let mut lab = labels.to_vec();
    loop {
        let mut changed = false;
        for i in 0..perm.len() {
            let (a, b) = (lab[i], lab[perm[i] as usize]);
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                for x in lab.iter_mut() {
                    if *x == hi {
                        *x = lo;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            return lab;
        }
    }
}

pub fn hurwitz_realizable(h: &HurwitzData, bound: usize) -> Hurwitz {
    let n = h.degree;
    for p in &h.branch_data {
        if p.iter().sum::<usize>() != n || p.contains(&0) {
            return Hurwitz::NotRealizable(format!("{p:?} is not a partition of {n}"));
        }
    }
    let data: Vec<&Vec<usize>> = h.branch_data.iter().filter(|p| p.len() < n).collect();
    let total = h.branching();
    if total % 2 == 1 {
        return Hurwitz::NotRealizable(format!("odd total branching {total}"));
    }
    if n >= 2 && total != 2 * n - 2 {
        return Hurwitz::NotRealizable(format!("total branching {total} differs from 2n-2 = {}", 2 * n - 2));
    }
    if n == 1 {
        return Hurwitz::Realizable(vec![vec![0]; h.branch_data.len()]);
    }
    if n > bound {
        return Hurwitz::SearchExceeded;
    }
    // data has at least two nontrivial entries here
    let k = data.len();
    let first = representative(n, data[0]);
    let start_lab: Vec<u8> = merge(&(0..n as u8).collect::<Vec<_>>(), &first);
    // layer: (product, orbit labels) → back pointer
    type Key = (Perm, Vec<u8>);
    let mut layers: Vec<HashMap<Key, (Key, Perm)>> = Vec::new();
    let mut frontier: HashMap<Key, (Key, Perm)> = HashMap::new();
    frontier.insert((first.clone(), start_lab.clone()), ((first.clone(), start_lab), first.clone()));
    for shape in &data[1..k - 1] {
        let cls = class(n, shape);
        let mut next: HashMap<Key, (Key, Perm)> = HashMap::new();
        for (prod, lab) in frontier.keys() {
            for s in &cls {
                let key = (compose(prod, s), merge(lab, s));
                next.entry(key).or_insert_with(|| ((prod.clone(), lab.clone()), s.clone()));
            }
        }
        layers.push(std::mem::replace(&mut frontier, next));
    }
    let mut last_want = data[k - 1].clone();
    last_want.sort_unstable_by(|x, y| y.cmp(x));
    let mut keys: Vec<&Key> = frontier.keys().collect();
    keys.sort();
    for key in keys {
        let (prod, lab) = key;
        let s = inverse(prod);
        if cycle_type(&s) != last_want {
            continue;
        }
        let fin = merge(lab, &s);
        if fin.iter().any(|&x| x != 0) {
            continue;
        }
        // walk back pointers
        let mut perms = vec![s];
        let mut cur = key.clone();
        let mut idx = layers.len();
        let mut table = &frontier;
        loop {
            let (prev, chosen) = table[&cur].clone();
            if idx == 0 {
                perms.push(first.clone());
                break;
            }
            perms.push(chosen);
            cur = prev;
            idx -= 1;
            table = &layers[idx];
        }
        perms.reverse();
        return Hurwitz::Realizable(expand(h, &data, perms));
    }
    Hurwitz::NotRealizable("no transitive tuple with product the identity".into())
}

/// Reinserts identity permutations for trivial partitions.
fn expand(h: &HurwitzData, data: &[&Vec<usize>], perms: Vec<Perm>) -> Vec<Vec<usize>> {
    let n = h.degree;
    let mut it = perms.into_iter();
    let mut out = Vec::new();
    let mut used = 0;
    for p in &h.branch_data {
        if p.len() < n && used < data.len() {
            used += 1;
            out.push(it.next().unwrap().into_iter().map(usize::from).collect());
        } else {
            out.push((0..n).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hd(n: usize, d: &[&[usize]]) -> HurwitzData {
        HurwitzData { degree: n, branch_data: d.iter().map(|p| p.to_vec()).collect() }
    }

    #[test]
    fn monomial_and_parity() {
        assert!(matches!(hurwitz_realizable(&hd(3, &[&[3], &[3]]), 8), Hurwitz::Realizable(_)));
        assert!(matches!(hurwitz_realizable(&hd(4, &[&[3, 1], &[2, 1, 1], &[3, 1]]), 8), Hurwitz::NotRealizable(_)));
        assert!(matches!(hurwitz_realizable(&hd(3, &[&[2, 1], &[2, 1], &[2, 1], &[2, 1]]), 8), Hurwitz::Realizable(_)));
    }

    #[test]
    fn known_exception() {
        // degree 4, [2,2],[2,2],[3,1] has branching 6 but no realization
        assert!(matches!(hurwitz_realizable(&hd(4, &[&[2, 2], &[2, 2], &[3, 1]]), 8), Hurwitz::NotRealizable(_)));
    }

    #[test]
    fn bound_is_reported() {
        assert_eq!(hurwitz_realizable(&hd(9, &[&[9], &[9]]), 8), Hurwitz::SearchExceeded);
    }
}

//! Hurwitz search against an independent brute force over permutation tuples.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tms_core::validate::hurwitz::{hurwitz_realizable, Hurwitz, HurwitzData};

pub type Perm = Vec<usize>;

pub fn shape(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for i in 0..p.len() {
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

pub fn sorted(p: &[usize]) -> Vec<usize> {
    let mut v = p.to_vec();
    v.sort_unstable();
    v
}

pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=k {
                let mut q: Perm = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// x ↦ b(a(x))
pub fn then(a: &[usize], b: &[usize]) -> Perm {
    a.iter().map(|&x| b[x]).collect()
}

pub fn transitive(n: usize, perms: &[Perm]) -> bool {
    let mut reach = vec![false; n];
    let mut stack = vec![0];
    reach[0] = true;
    while let Some(x) = stack.pop() {
        for p in perms {
            if !reach[p[x]] {
                reach[p[x]] = true;
                stack.push(p[x]);
            }
        }
    }
    reach.into_iter().all(|r| r)
}

/// A valid realization: cycle types match, product is the identity, the
/// group is transitive.
pub fn is_realization(h: &HurwitzData, perms: &[Perm]) -> bool {
    let n = h.degree;
    perms.len() == h.branch_data.len()
        && perms.iter().zip(&h.branch_data).all(|(p, d)| shape(p) == sorted(d))
        && perms.iter().fold((0..n).collect::<Perm>(), |acc, p| then(&acc, p)) == (0..n).collect::<Perm>()
        && transitive(n, perms)
}

/// Exhaustive: the first permutation is fixed up to conjugacy, the last is
/// forced by the product.
pub fn brute_force(h: &HurwitzData) -> bool {
    let n = h.degree;
    let data: Vec<Vec<usize>> = h.branch_data.iter().map(|d| sorted(d)).filter(|d| d.len() < n).collect();
    if data.len() < 2 {
        return n == 1 && data.is_empty();
    }
    let perms = all_perms(n);
    let classes: Vec<Vec<&Perm>> = data.iter().map(|d| perms.iter().filter(|p| shape(p) == *d).collect()).collect();
    let first = classes[0][0].clone();
    fn go(classes: &[Vec<&Perm>], k: usize, acc: Perm, chosen: &mut Vec<Perm>, n: usize, last: &[usize]) -> bool {
        if k == classes.len() - 1 {
            let mut inv = vec![0; n];
            for (i, &x) in acc.iter().enumerate() {
                inv[x] = i;
            }
            if shape(&inv) != last {
                return false;
            }
            chosen.push(inv);
            let ok = transitive(n, chosen);
            chosen.pop();
            return ok;
        }
        for p in &classes[k] {
            chosen.push((*p).clone());
            let ok = go(classes, k + 1, then(&acc, p), chosen, n, last);
            chosen.pop();
            if ok {
                return true;
            }
        }
        false
    }
    let last = data.last().unwrap().clone();
    let mut chosen = vec![first.clone()];
    go(&classes, 1, first, &mut chosen, n, &last)
}

pub fn partition(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut out = Vec::new();
    while left > 0 {
        let k = rng.gen_range(1..=left);
        out.push(k);
        left -= k;
    }
    out
}

pub fn necessary(h: &HurwitzData) -> bool {
    let n = h.degree;
    let b = h.branching();
    b % 2 == 0 && (n == 1 || b == 2 * n - 2)
}

pub fn random_data(rng: &mut StdRng, want_rh: bool) -> HurwitzData {
    loop {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(2..=4);
        let h = HurwitzData { degree: n, branch_data: (0..k).map(|_| partition(rng, n)).collect() };
        if !want_rh || necessary(&h) {
            return h;
        }
    }
}


/// 100 random data sets, half of them satisfying the necessary conditions.
/// Returns the realizable and exceptional counts.
pub fn random_suite(seed: u64) -> Result<(usize, usize), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut realizable, mut exceptions) = (0, 0);
    for i in 0..100 {
        let h = random_data(&mut rng, i % 2 == 0);
        let got = hurwitz_realizable(&h, 6);
        let brute = necessary(&h) && brute_force(&h);
        match &got {
            Hurwitz::Realizable(p) => {
                if !necessary(&h) || !is_realization(&h, p) {
                    return Err(format!("bad realization {h:?} {p:?}"));
                }
                realizable += 1;
            }
            Hurwitz::NotRealizable(_) if necessary(&h) => exceptions += 1,
            Hurwitz::NotRealizable(_) => {}
            Hurwitz::SearchExceeded => return Err(format!("undecided {h:?}")),
        }
        if matches!(got, Hurwitz::Realizable(_)) != brute {
            return Err(format!("disagrees with brute force on {h:?}"));
        }
    }
    Ok((realizable, exceptions))
}

//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own versions of the quantities being checked.

#![allow(dead_code)]

use ira_fec::code::IraCode;
use rand::Rng;

/// Line-by-line transcription of the reference C routine, generalized over
/// its constants, with `j < 0` guarding the first swap.
pub fn fig7_reference(length: usize, len_l: usize, s: usize, p: usize, table: &[usize]) -> Vec<usize> {
    let length_i = length as i64;
    let mut ptr = vec![0i64; length];
    let mut ptr2 = vec![0i64; length];
    let mut dst = vec![0i64; length];
    for i in 0..length {
        let j = i % len_l;
        ptr[i] = (i - j) as i64 + table[j] as i64;
        ptr2[i] = 0;
    }
    for i in 0..length {
        dst[i] = (s as i64 + ptr[i] * p as i64) % length_i;
        ptr2[((s + i * p) % length) as usize] += 1;
    }
    let mut j: i64 = -1;
    let mut i = 0;
    while i < length {
        if ptr2[i] > 0 && j >= 0 {
            dst.swap(j as usize, i);
        }
        j = i as i64;
        i += len_l;
    }
    dst.into_iter().map(|x| x as usize).collect()
}

/// Every value in `0..n` hit exactly once, by counting.
pub fn counting_bijection(map: &[usize]) -> bool {
    let mut count = vec![0u32; map.len()];
    for &v in map {
        if v >= map.len() {
            return false;
        }
        count[v] += 1;
    }
    count.iter().all(|&c| c == 1)
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Dense binary parity-check matrix, rows = checks, columns = info then parity.
pub fn dense_h(code: &IraCode) -> Vec<Vec<u8>> {
    let (k, m) = (code.k(), code.m());
    let mut h = vec![vec![0u8; k + m]; m];
    for (j, row) in h.iter_mut().enumerate() {
        for &u in code.check_info(j) {
            row[u] ^= 1;
        }
        row[k + j] ^= 1;
        if j > 0 {
            row[k + j - 1] ^= 1;
        }
    }
    h
}

/// Cycle-4 counts from the column Gram matrix `H^T H`: entry `(u, v)` is the
/// number of shared checks, each pair of which closes a 4-cycle.
pub fn cycle4_oracle(code: &IraCode) -> (usize, usize) {
    let h = dense_h(code);
    let n = code.n();
    let min_deg = *code.rep_degree().iter().min().unwrap();
    let is_min = |v: usize| v < code.k() && code.rep_degree()[v] == min_deg;
    let (mut total, mut minimal) = (0, 0);
    for u in 0..n {
        for v in u + 1..n {
            let shared: usize = h.iter().map(|row| (row[u] & row[v]) as usize).sum();
            let c = shared * shared.saturating_sub(1) / 2;
            total += c;
            if is_min(u) && is_min(v) {
                minimal += c;
            }
        }
    }
    (total, minimal)
}

/// Size of the smallest stopping set with at most `bound` variables, by
/// trying every subset in order of size.
pub fn smallest_stopping_set(code: &IraCode, bound: usize) -> Option<usize> {
    let h = dense_h(code);
    let n = code.n();
    let is_stopping = |set: &[usize]| {
        h.iter().all(|row| {
            let hits = set.iter().filter(|&&v| row[v] == 1).count();
            hits != 1
        }) && set.iter().all(|&v| h.iter().any(|row| row[v] == 1))
    };
    fn subsets(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for v in start..n {
            cur.push(v);
            if subsets(n, size, v + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    (1..=bound).find(|&size| subsets(n, size, 0, &mut Vec::new(), &mut |s| is_stopping(s)))
}

/// Codeword bits (systematic then parity) for a full information vector,
/// computed straight from the wiring.
pub fn encode_reference(code: &IraCode, info: &[u8]) -> Vec<u8> {
    let mut out = info.to_vec();
    let mut acc = 0u8;
    for j in 0..code.m() {
        let c = code.check_info(j).iter().fold(0u8, |x, &u| x ^ info[u]);
        acc ^= c;
        out.push(acc);
    }
    out
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Exhaustive bitwise MAP LLRs of every information bit (pinned bits held at
/// their values).
pub fn map_posteriors(code: &IraCode, channel: &[f64]) -> Vec<f64> {
    let k = code.k();
    let free: Vec<usize> = (0..k).filter(|u| code.pinned().iter().all(|&(p, _)| p != *u)).collect();
    let mut acc = vec![[f64::NEG_INFINITY; 2]; k];
    let mut info = vec![0u8; k];
    for &(p, b) in code.pinned() {
        info[p] = b;
    }
    for word in 0u64..1 << free.len() {
        for (i, &u) in free.iter().enumerate() {
            info[u] = ((word >> i) & 1) as u8;
        }
        let cw = encode_reference(code, &info);
        let metric: f64 = cw.iter().zip(channel).map(|(&b, &l)| if b == 0 { l / 2.0 } else { -l / 2.0 }).sum();
        for (a, &b) in acc.iter_mut().zip(&info) {
            a[b as usize] = log_add(a[b as usize], metric);
        }
    }
    acc.iter().map(|&[z, o]| z - o).collect()
}

/// Random permutation of `0..n`.
pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
    v
}

//! Integer partitions, stored as non-increasing part lists.

use num_bigint::BigInt;
use num_traits::Zero;

pub type Partition = Vec<u8>;

/// All partitions of `n` with every part at most `max_part` and at least `min_part`,
/// in descending lexicographic order.
pub fn partitions_bounded(n: u32, max_part: u32, min_part: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, max_part.min(n), min_part.max(1), &mut cur, &mut out);
    out
}

fn fill(rest: u32, max_part: u32, min_part: u32, cur: &mut Partition, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    let mut p = max_part.min(rest);
    while p >= min_part {
        cur.push(p as u8);
        fill(rest - p, p, min_part, cur, out);
        cur.pop();
        p -= 1;
    }
}

pub fn partitions(n: u32) -> Vec<Partition> {
    partitions_bounded(n, n, 1)
}

/// `p(0), ..., p(len-1)` by Euler's pentagonal recurrence.
pub fn partition_counts(len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len.max(1)];
    p[0] = BigInt::from(1);
    for n in 1..len {
        let mut acc = BigInt::zero();
        let mut k: i64 = 1;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let g2 = (k * (3 * k + 1) / 2) as usize;
            let term = if g2 <= n { &p[n - g1] + &p[n - g2] } else { p[n - g1].clone() };
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
            k += 1;
        }
        p[n] = acc;
    }
    p.truncate(len);
    p
}

/// Multiplicities `c_s` of each part size, indexed by `s`.
pub fn multiplicities(parts: &[u8]) -> Vec<u32> {
    let top = parts.first().copied().unwrap_or(0) as usize;
    let mut c = vec![0u32; top + 1];
    for &p in parts {
        c[p as usize] += 1;
    }
    c
}

/// Every sub-multiset of `parts`, each with its complement.
pub fn submultisets(parts: &[u8]) -> Vec<(Partition, Partition)> {
    let mut groups: Vec<(u8, usize)> = Vec::new();
    for &p in parts {
        match groups.last_mut() {
            Some((q, c)) if *q == p => *c += 1,
            _ => groups.push((p, 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new())];
    for (p, c) in groups {
        let mut next = Vec::with_capacity(out.len() * (c + 1));
        for (taken, left) in &out {
            for t in 0..=c {
                let mut a = taken.clone();
                let mut b = left.clone();
                a.extend(std::iter::repeat_n(p, t));
                b.extend(std::iter::repeat_n(p, c - t));
                next.push((a, b));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_oracle(n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|p| count_oracle(n - p, p)).sum()
    }

    #[test]
    fn enumeration_order_is_descending_lex() {
        let p4 = partitions(4);
        assert_eq!(p4, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
    }

    #[test]
    fn pentagonal_counts_match_recursive_oracle() {
        let p = partition_counts(30);
        for n in 0..30u32 {
            assert_eq!(p[n as usize], BigInt::from(count_oracle(n, n)));
            assert_eq!(partitions(n).len() as u64, count_oracle(n, n));
        }
    }

    #[test]
    fn submultiset_count_is_product_of_multiplicities_plus_one() {
        let parts = [3u8, 3, 2, 1, 1, 1];
        assert_eq!(submultisets(&parts).len(), 3 * 2 * 4);
    }
}

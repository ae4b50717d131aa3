//! Names for groups of order at most 16 (and S4) from order statistics.

use std::collections::BTreeMap;

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    out
}

/// Invariant factors of an abelian group, from the orders of its elements.
fn abelian_name(n: u64, orders: &[u64]) -> String {
    if n == 1 {
        return "1".into();
    }
    // per prime, the exponents a_i of the cyclic p-factors
    let mut parts: Vec<Vec<u64>> = Vec::new();
    for (p, a) in factor(n) {
        let mut prev = 0u32;
        let mut at_least: Vec<u32> = Vec::new();
        for k in 1..=a {
            let pk = p.pow(k);
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let s = count.ilog(p);
            at_least.push(s - prev);
            prev = s;
        }
        // at_least[k-1] = number of factors with exponent >= k
        let mut exps = Vec::new();
        for k in (1..=a as usize).rev() {
            let more = if k < a as usize { at_least[k] } else { 0 };
            for _ in 0..(at_least[k - 1] - more) {
                exps.push(p.pow(k as u32));
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        parts.push(exps);
    }
    let width = parts.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..width)
        .map(|i| parts.iter().filter_map(|v| v.get(i)).product())
        .collect();
    factors.sort_unstable_by(|a, b| b.cmp(a));
    factors
        .iter()
        .map(|d| format!("C{d}"))
        .collect::<Vec<_>>()
        .join("x")
}

/// Structure name for a group of order at most 16 given the order of each
/// element, or `None` when order statistics do not determine the group.
pub fn structure_name(order: u64, abelian: bool, element_orders: &[u64]) -> Option<String> {
    if (order > 16 && order != 24) || element_orders.len() as u64 != order {
        return None;
    }
    if abelian {
        return Some(abelian_name(order, element_orders));
    }
    let mut stats: BTreeMap<u64, usize> = BTreeMap::new();
    for &o in element_orders {
        *stats.entry(o).or_default() += 1;
    }
    let stats: Vec<(u64, usize)> = stats.into_iter().collect();
    let name = match (order, stats.as_slice()) {
        (6, _) => "S3",
        (8, [(1, 1), (2, 5), (4, 2)]) => "D8",
        (8, [(1, 1), (2, 1), (4, 6)]) => "Q8",
        (10, _) => "D10",
        (12, [(1, 1), (2, 3), (3, 8)]) => "A4",
        (12, [(1, 1), (2, 7), (3, 2), (6, 2)]) => "D12",
        (12, [(1, 1), (2, 1), (3, 2), (4, 6), (6, 2)]) => "Dic12",
        (14, _) => "D14",
        (16, [(1, 1), (2, 9), (4, 2), (8, 4)]) => "D16",
        (16, [(1, 1), (2, 5), (4, 6), (8, 4)]) => "SD16",
        (16, [(1, 1), (2, 1), (4, 10), (8, 4)]) => "Q16",
        (16, [(1, 1), (2, 3), (4, 4), (8, 8)]) => "M16",
        (16, [(1, 1), (2, 11), (4, 4)]) => "C2xD8",
        (24, [(1, 1), (2, 9), (3, 8), (4, 6)]) => "S4",
        _ => return None,
    };
    Some(name.into())
}

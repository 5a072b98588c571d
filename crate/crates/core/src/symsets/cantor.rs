//! Iterated Cantor pairing `^kω ↔ ω`.

/// `π(a, b) = (a+b)(a+b+1)/2 + b`.
pub fn pair(a: u64, b: u64) -> Option<u64> {
    let s = (a as u128) + (b as u128);
    let v = s * (s + 1) / 2 + b as u128;
    u64::try_from(v).ok()
}

pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    // largest w with w(w+1)/2 <= z
    let mut w = (((8 * z + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let b = z - w * (w + 1) / 2;
    let a = w - b;
    (a as u64, b as u64)
}

/// `enc(t) = π(t_0, π(t_1, … t_{k-1}))`; the identity for `k = 1`.
pub fn encode(t: &[u64]) -> Option<u64> {
    let (last, init) = t.split_last()?;
    let mut acc = *last;
    for &x in init.iter().rev() {
        acc = pair(x, acc)?;
    }
    Some(acc)
}

pub fn decode(k: usize, mut z: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    for _ in 1..k {
        let (a, b) = unpair(z);
        out.push(a);
        z = b;
    }
    if k > 0 {
        out.push(z);
    }
    out
}

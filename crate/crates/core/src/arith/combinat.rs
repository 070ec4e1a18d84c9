/// All set partitions of `{0, .., n-1}`, blocks in order of their least element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fill(0, 0, &mut labels, &mut out);
    out
}

fn fill(i: usize, blocks: usize, labels: &mut [usize], out: &mut Vec<Vec<Vec<usize>>>) {
    if i == labels.len() {
        let mut parts = vec![Vec::new(); blocks];
        for (j, &b) in labels.iter().enumerate() {
            parts[b].push(j);
        }
        out.push(parts);
        return;
    }
    for b in 0..=blocks {
        labels[i] = b;
        fill(i + 1, blocks.max(b + 1), labels, out);
    }
}

/// Double factorial `n!!` with `(-1)!! = 1`.
pub fn double_factorial(n: i64) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::from(1);
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(n).len(), b);
        }
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), 1.into());
        assert_eq!(double_factorial(7), 105.into());
        assert_eq!(double_factorial(6), 48.into());
    }
}

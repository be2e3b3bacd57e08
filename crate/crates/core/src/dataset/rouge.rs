// SPDX-License-Identifier: Apache-2.0

//! Word-level ROUGE-L.

use std::collections::HashMap;
use std::hash::Hash;

use num_rational::Ratio;

use super::DatasetError;

/// Lowercased words, split on runs of non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Length of the longest common subsequence.
///
/// Bit-parallel over `a`: one machine word covers 64 positions, so the cost
/// is O(|b| * ceil(|a| / 64)).
pub fn lcs_len<T: Eq + Hash>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let words = a.len().div_ceil(64);
    let mut masks: HashMap<&T, Vec<u64>> = HashMap::new();
    for (i, x) in a.iter().enumerate() {
        masks.entry(x).or_insert_with(|| vec![0; words])[i / 64] |= 1 << (i % 64);
    }
    // Zero bits of `v` mark positions of `a` that end a longer common subsequence.
    let mut v = vec![u64::MAX; words];
    for y in b {
        let Some(m) = masks.get(y) else { continue };
        let mut carry = 0u64;
        for w in 0..words {
            let u = v[w] & m[w];
            let (s1, c1) = v[w].overflowing_add(u);
            let (s2, c2) = s1.overflowing_add(carry);
            carry = (c1 | c2) as u64;
            v[w] = s2 | (v[w] & !u);
        }
    }
    let tail = a.len() % 64;
    v.iter()
        .enumerate()
        .map(|(w, bits)| {
            let live = if w + 1 == words && tail != 0 { (1u64 << tail) - 1 } else { u64::MAX };
            (!bits & live).count_ones() as usize
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RougeScore {
    pub lcs: usize,
    pub candidate_len: usize,
    pub reference_len: usize,
    pub beta: f64,
}

impl RougeScore {
    /// Exact F-measure `(1 + b) * lcs / (candidate_len + b * reference_len)`
    /// with `b = beta^2` taken as a rational.
    pub fn ratio(&self) -> Ratio<i128> {
        let b = Ratio::<i128>::approximate_float(self.beta * self.beta).unwrap_or_else(|| Ratio::from_integer(1));
        let l = Ratio::from_integer(self.lcs as i128);
        let c = Ratio::from_integer(self.candidate_len as i128);
        let r = Ratio::from_integer(self.reference_len as i128);
        (Ratio::from_integer(1) + b) * l / (c + b * r)
    }

    pub fn value(&self) -> f64 {
        if self.lcs == 0 {
            return 0.0;
        }
        let b = self.beta * self.beta;
        (1.0 + b) * self.lcs as f64 / (self.candidate_len as f64 + b * self.reference_len as f64)
    }
}

pub fn rouge_l<T: Eq + Hash>(candidate: &[T], reference: &[T], beta: f64) -> Result<RougeScore, DatasetError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(DatasetError::InvalidBeta(beta));
    }
    if candidate.is_empty() || reference.is_empty() {
        return Err(DatasetError::EmptySequence);
    }
    Ok(RougeScore {
        lcs: lcs_len(candidate, reference),
        candidate_len: candidate.len(),
        reference_len: reference.len(),
        beta,
    })
}

pub fn rouge_l_text(candidate: &str, reference: &str, beta: f64) -> Result<RougeScore, DatasetError> {
    rouge_l(&tokenize(candidate), &tokenize(reference), beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenization() {
        assert_eq!(tokenize("Hello, World! v_addr 11-bit"), ["hello", "world", "v", "addr", "11", "bit"]);
        assert!(tokenize(" ,;-- ").is_empty());
    }

    #[test]
    fn spec_examples() {
        let s = rouge_l_text("a c d", "a b c d", 1.0).unwrap();
        assert_eq!(s.lcs, 3);
        assert_eq!(s.ratio(), Ratio::new(6, 7));
        assert!((s.value() - 6.0 / 7.0).abs() < 1e-12);
        assert_eq!(rouge_l_text("x y", "x y", 1.0).unwrap().ratio(), Ratio::from_integer(1));
        assert_eq!(rouge_l_text("p q", "r s", 1.0).unwrap().value(), 0.0);
        assert!(matches!(rouge_l_text("", "a", 1.0), Err(DatasetError::EmptySequence)));
        assert!(matches!(rouge_l_text("a", "a", 0.0), Err(DatasetError::InvalidBeta(_))));
    }

    #[test]
    fn beta_weights_recall() {
        // P = 1, R = 1/2.
        let s = rouge_l_text("a b", "a b c d", 2.0).unwrap();
        let p = 1.0;
        let r = 0.5;
        let expect = 5.0 * p * r / (r + 4.0 * p);
        assert!((s.value() - expect).abs() < 1e-12);
        assert_eq!(s.ratio(), Ratio::new(10, 18));
    }

    #[test]
    fn lcs_across_word_boundaries() {
        let a: Vec<u32> = (0..200).map(|i| i % 7).collect();
        let b: Vec<u32> = (0..150).map(|i| (i * 3) % 7).collect();
        // Classic DP for comparison.
        let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                dp[i][j] = if a[i - 1] == b[j - 1] { dp[i - 1][j - 1] + 1 } else { dp[i - 1][j].max(dp[i][j - 1]) };
            }
        }
        assert_eq!(lcs_len(&a, &b), dp[a.len()][b.len()]);
        assert_eq!(lcs_len(&a, &a), 200);
    }
}

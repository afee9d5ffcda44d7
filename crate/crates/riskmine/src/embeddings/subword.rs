//! Character n-gram extraction and bucket hashing.

/// Character n-grams of a word, drawn from its boundary-marked form
/// (`<word>`), lengths `ngram_min..=ngram_max`.
///
/// Words shorter than `ngram_min` characters yield no n-grams, so one- and
/// two-character out-of-vocabulary strings have no subword representation.
pub fn subword_ngrams(word: &str, ngram_min: usize, ngram_max: usize) -> Vec<String> {
    let word_len = word.chars().count();
    if word_len < ngram_min || word.is_empty() {
        return Vec::new();
    }
    let wrapped: Vec<char> = std::iter::once('<')
        .chain(word.chars())
        .chain(std::iter::once('>'))
        .collect();
    let mut grams = Vec::new();
    for len in ngram_min..=ngram_max.min(wrapped.len()) {
        for start in 0..=wrapped.len() - len {
            grams.push(wrapped[start..start + len].iter().collect());
        }
    }
    grams
}

/// FNV-1a bucket assignment for an n-gram.
pub fn bucket_of(ngram: &str, bucket_count: usize) -> usize {
    let mut hash: u32 = 2_166_136_261;
    for byte in ngram.as_bytes() {
        hash ^= u32::from(*byte);
        hash = hash.wrapping_mul(16_777_619);
    }
    (hash as usize) % bucket_count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracts_boundary_marked_grams() {
        let grams = subword_ngrams("cat", 3, 4);
        assert_eq!(grams, vec!["<ca", "cat", "at>", "<cat", "cat>"]);
    }

    #[test]
    fn short_words_have_no_grams() {
        assert!(subword_ngrams("at", 3, 6).is_empty());
        assert!(subword_ngrams("", 3, 6).is_empty());
        assert_eq!(subword_ngrams("cat", 3, 6).len(), 3 + 2 + 1);
    }

    #[test]
    fn buckets_are_stable_and_in_range() {
        let b = bucket_of("<ca", 1000);
        assert_eq!(b, bucket_of("<ca", 1000));
        for gram in subword_ngrams("terrorism", 3, 6) {
            assert!(bucket_of(&gram, 37) < 37);
        }
    }

    #[test]
    fn multibyte_words_are_handled() {
        let grams = subword_ngrams("café", 3, 6);
        assert!(!grams.is_empty());
        assert!(grams.contains(&"<ca".to_string()));
    }
}

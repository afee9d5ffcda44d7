//! Rule-based word tokenizer with byte offsets.

use super::Token;

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Split text into tokens.
///
/// A word token is a maximal run of letters/digits; a hyphen, apostrophe, or
/// period stays inside the token when flanked by letters/digits on both sides
/// ("bio-terrorism", "company's", "u.s", "3.14" are single tokens). Any other
/// non-whitespace character becomes a one-character punctuation token.
/// Whitespace separates tokens and is never emitted. Offsets are byte offsets
/// into `text`, so `text[char_start..char_end] == surface` always holds.
///
/// Lemmas are initialized to the lowercase surface; [`super::Ingestor`]
/// replaces them with real lemmas.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();

    while let Some((start, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        let mut end = start + c.len_utf8();
        if is_word_char(c) {
            while let Some(&(i, d)) = chars.peek() {
                if is_word_char(d) {
                    end = i + d.len_utf8();
                    chars.next();
                } else if d == '-' || d == '\'' || d == '.' {
                    // Keep the joiner only when the next char continues the word.
                    let mut ahead = chars.clone();
                    ahead.next();
                    match ahead.peek() {
                        Some(&(_, e)) if is_word_char(e) => {
                            chars.next();
                        }
                        _ => break,
                    }
                } else {
                    break;
                }
            }
        }
        let surface = &text[start..end];
        tokens.push(Token {
            surface: surface.to_string(),
            lemma: surface.to_lowercase(),
            char_start: start,
            char_end: end,
            token_index: tokens.len(),
        });
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn splits_words_and_trailing_period() {
        let tokens = tokenize("pipe bomb.");
        let spans: Vec<_> = tokens.iter().map(|t| (t.char_start, t.char_end)).collect();
        assert_eq!(surfaces("pipe bomb."), ["pipe", "bomb", "."]);
        assert_eq!(spans, [(0, 4), (5, 9), (9, 10)]);
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn keeps_internal_hyphen() {
        assert_eq!(
            surfaces("bio-terrorism, hijack"),
            ["bio-terrorism", ",", "hijack"]
        );
    }

    #[test]
    fn keeps_internal_apostrophe_and_period() {
        assert_eq!(
            surfaces("Verizon's U.S. unit"),
            ["Verizon's", "U.S", ".", "unit"]
        );
        assert_eq!(surfaces("pi is 3.14."), ["pi", "is", "3.14", "."]);
    }

    #[test]
    fn dangling_joiners_become_punctuation() {
        assert_eq!(surfaces("well- known"), ["well", "-", "known"]);
        assert_eq!(surfaces("'quote'"), ["'", "quote", "'"]);
        assert_eq!(surfaces("end-"), ["end", "-"]);
    }

    #[test]
    fn punctuation_is_single_char_tokens() {
        assert_eq!(surfaces("a?!b"), ["a", "?", "!", "b"]);
        assert_eq!(surfaces("..."), [".", ".", "."]);
    }

    #[test]
    fn token_indices_are_sequential() {
        for (i, t) in tokenize("one two three. four").iter().enumerate() {
            assert_eq!(t.token_index, i);
        }
    }

    #[test]
    fn handles_multibyte_text() {
        let text = "café attacké — naïve";
        for t in tokenize(text) {
            assert_eq!(&text[t.char_start..t.char_end], t.surface);
        }
    }
}

use std::collections::HashSet;
use std::fmt::Write as _;

use super::SymbolicError;

/// Finite word over a named alphabet, with the index of position 0 when the
/// word stands for a window of a two-sided sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<u16>,
    alphabet: Vec<String>,
    origin: usize,
}

impl Word {
    pub fn new(symbols: Vec<u16>, alphabet: Vec<String>, origin: usize) -> Result<Self, SymbolicError> {
        if alphabet.is_empty() || alphabet.len() > u16::MAX as usize {
            return Err(SymbolicError::InvalidParameter("alphabet must have 1..65535 letters".into()));
        }
        let distinct: HashSet<&String> = alphabet.iter().collect();
        if distinct.len() != alphabet.len() || alphabet.iter().any(|a| a.is_empty() || a.contains(char::is_whitespace)) {
            return Err(SymbolicError::InvalidParameter("alphabet letters must be distinct nonblank tokens".into()));
        }
        if let Some(s) = symbols.iter().find(|&&s| s as usize >= alphabet.len()) {
            return Err(SymbolicError::InvalidSymbol(format!("index {s}")));
        }
        if origin > symbols.len().saturating_sub(1) && !(symbols.is_empty() && origin == 0) {
            return Err(SymbolicError::InvalidParameter(format!("origin {origin} outside the word")));
        }
        Ok(Word { symbols, alphabet, origin })
    }

    /// One-character letters, e.g. `Word::from_letters("abaab", &["a", "b"])`.
    pub fn from_letters(s: &str, alphabet: &[&str]) -> Result<Self, SymbolicError> {
        let symbols = s
            .chars()
            .map(|c| {
                alphabet
                    .iter()
                    .position(|a| a.len() == c.len_utf8() && a.starts_with(c))
                    .map(|i| i as u16)
                    .ok_or_else(|| SymbolicError::InvalidSymbol(c.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(symbols, alphabet.iter().map(|a| a.to_string()).collect(), 0)
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Numeric weight of an alphabet letter: its name when that is an
    /// integer, else its 1-based index.
    pub fn letter_value(&self, idx: u16) -> i64 {
        let name = &self.alphabet[idx as usize];
        name.parse().unwrap_or(idx as i64 + 1)
    }

    pub fn values(&self) -> Vec<i64> {
        self.symbols.iter().map(|&s| self.letter_value(s)).collect()
    }

    /// Concatenated letter names (only unambiguous for one-character letters).
    pub fn to_letters(&self) -> String {
        self.symbols.iter().map(|&s| self.alphabet[s as usize].as_str()).collect()
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word {
            symbols: self.symbols[from..to].to_vec(),
            alphabet: self.alphabet.clone(),
            origin: self.origin.saturating_sub(from).min(to.saturating_sub(from + 1)),
        }
    }

    /// Distinct factors of length `n`.
    pub fn factor_count(&self, n: usize) -> usize {
        if n == 0 || n > self.symbols.len() {
            return usize::from(n == 0);
        }
        self.symbols.windows(n).collect::<HashSet<_>>().len()
    }

    /// `alphabet=a,b origin=0` header, then the letters, 64 per line.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("alphabet={} origin={}\n", self.alphabet.join(","), self.origin);
        for chunk in self.symbols.chunks(64) {
            let line: Vec<&str> = chunk.iter().map(|&s| self.alphabet[s as usize].as_str()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Lines starting with `#` are ignored.
    pub fn from_file_string(s: &str) -> Result<Self, SymbolicError> {
        let mut lines = s.lines().filter(|l| !l.trim_start().starts_with('#'));
        let header = lines.next().ok_or_else(|| SymbolicError::Parse("empty word file".into()))?;
        let mut alphabet = None;
        let mut origin = 0usize;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("alphabet", v)) => alphabet = Some(v.split(',').map(str::to_string).collect::<Vec<_>>()),
                Some(("origin", v)) => {
                    origin = v.parse().map_err(|_| SymbolicError::Parse(format!("bad origin `{v}`")))?
                }
                _ => return Err(SymbolicError::Parse(format!("unknown header field `{field}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| SymbolicError::Parse("header lacks alphabet=".into()))?;
        let symbols = lines
            .flat_map(str::split_whitespace)
            .map(|t| {
                alphabet
                    .iter()
                    .position(|a| a == t)
                    .map(|i| i as u16)
                    .ok_or_else(|| SymbolicError::InvalidSymbol(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(symbols, alphabet, origin)
    }
}

/// Occurrences of `v` in `w`, overlaps included.
pub fn count_occurrences(v: &Word, w: &Word) -> Result<usize, SymbolicError> {
    if v.is_empty() {
        return Err(SymbolicError::InvalidParameter("pattern must be nonempty".into()));
    }
    // compare by letter names so differently indexed alphabets still match
    let map: Vec<Option<u16>> = v
        .alphabet
        .iter()
        .map(|a| w.alphabet.iter().position(|b| b == a).map(|i| i as u16))
        .collect();
    let Some(pat) = v.symbols.iter().map(|&s| map[s as usize]).collect::<Option<Vec<u16>>>() else {
        return Ok(0);
    };
    if pat.len() > w.len() {
        return Ok(0);
    }
    Ok(w.symbols.windows(pat.len()).filter(|win| *win == pat.as_slice()).count())
}

/// A non-erasing substitution rule per letter.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    alphabet: Vec<String>,
    images: Vec<Vec<u16>>,
}

impl Substitution {
    /// Rules as `(letter, image letters)`; every letter used must have a rule.
    pub fn new(rules: &[(&str, &[&str])]) -> Result<Self, SymbolicError> {
        let alphabet: Vec<String> = rules.iter().map(|(a, _)| a.to_string()).collect();
        let images = rules
            .iter()
            .map(|(a, img)| {
                if img.is_empty() {
                    return Err(SymbolicError::InvalidRule(format!("`{a}` maps to the empty word")));
                }
                img.iter()
                    .map(|t| {
                        alphabet
                            .iter()
                            .position(|x| x == t)
                            .map(|i| i as u16)
                            .ok_or_else(|| SymbolicError::InvalidRule(format!("`{t}` has no rule")))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(vec![], alphabet.clone(), 0)?;
        Ok(Substitution { alphabet, images })
    }

    /// `a->ab,b->a` with one-character letters.
    pub fn parse(s: &str) -> Result<Self, SymbolicError> {
        let mut owned: Vec<(String, Vec<String>)> = Vec::new();
        for rule in s.split(',').map(str::trim).filter(|r| !r.is_empty()) {
            let (lhs, rhs) = rule
                .split_once("->")
                .ok_or_else(|| SymbolicError::InvalidRule(format!("`{rule}` is not of the form x->w")))?;
            owned.push((lhs.trim().to_string(), rhs.trim().chars().map(String::from).collect()));
        }
        let views: Vec<(&str, Vec<&str>)> =
            owned.iter().map(|(a, img)| (a.as_str(), img.iter().map(String::as_str).collect())).collect();
        let rules: Vec<(&str, &[&str])> = views.iter().map(|(a, img)| (*a, img.as_slice())).collect();
        Substitution::new(&rules)
    }

    pub fn fibonacci() -> Self {
        Substitution::parse("a->ab,b->a").expect("static rule")
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    fn seed_index(&self, seed: &str) -> Result<u16, SymbolicError> {
        self.alphabet
            .iter()
            .position(|a| a == seed)
            .map(|i| i as u16)
            .ok_or_else(|| SymbolicError::InvalidSymbol(seed.to_string()))
    }

    fn apply(&self, w: &[u16], cap: usize) -> Vec<u16> {
        let mut out = Vec::with_capacity(w.len().saturating_mul(2).min(cap));
        for &s in w {
            out.extend_from_slice(&self.images[s as usize]);
            if out.len() >= cap {
                out.truncate(cap);
                break;
            }
        }
        out
    }
}

/// `sigma^iterations(seed)`, truncated to `max_len` letters if given.
pub fn substitution_word(
    rules: &Substitution,
    seed: &str,
    iterations: usize,
    max_len: Option<usize>,
) -> Result<Word, SymbolicError> {
    let cap = max_len.unwrap_or(usize::MAX);
    let mut w = vec![rules.seed_index(seed)?];
    for _ in 0..iterations {
        let next = rules.apply(&w, cap);
        if next == w {
            break;
        }
        w = next;
    }
    w.truncate(cap);
    Word::new(w, rules.alphabet.clone(), 0)
}

/// First `len` letters of the fixed point of `sigma` starting with `seed`;
/// requires `sigma(seed)` to start with `seed` and be longer than it.
pub fn substitution_fixed_point(rules: &Substitution, seed: &str, len: usize) -> Result<Word, SymbolicError> {
    let s = rules.seed_index(seed)?;
    let img = &rules.images[s as usize];
    if img[0] != s || img.len() < 2 {
        return Err(SymbolicError::NonExtendingSeed(seed.to_string()));
    }
    let mut w = vec![s];
    while w.len() < len {
        w = rules.apply(&w, len);
    }
    w.truncate(len);
    Word::new(w, rules.alphabet.clone(), 0)
}

/// Order-`k` Fibonacci word: `S_0 = b`, `S_1 = a`, `S_{k+1} = S_k S_{k-1}`,
/// of length `F_k` (`F_0 = F_1 = 1`); for `k >= 1` it is `sigma^{k-1}(a)`.
pub fn fibonacci_word(order: usize) -> Word {
    let sub = Substitution::fibonacci();
    let w = if order == 0 {
        substitution_word(&sub, "b", 0, None)
    } else {
        substitution_word(&sub, "a", order - 1, None)
    };
    w.expect("static rule")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_five_iterations() {
        let w = substitution_word(&Substitution::fibonacci(), "a", 5, None).unwrap();
        assert_eq!(w.to_letters(), "abaababaabaab");
        assert_eq!(fibonacci_word(10).len(), 89);
        assert_eq!(fibonacci_word(6).to_letters(), "abaababaabaab");
        assert_eq!(fibonacci_word(0).to_letters(), "b");
    }

    #[test]
    fn thue_morse_and_identity() {
        let tm = Substitution::parse("a->ab,b->ba").unwrap();
        let w = substitution_word(&tm, "a", 4, None).unwrap();
        assert_eq!(w.len(), 16);
        assert!(w.to_letters().starts_with("abbabaab"));
        let id = Substitution::parse("a->a").unwrap();
        assert_eq!(substitution_word(&id, "a", 10, None).unwrap().to_letters(), "a");
        assert!(matches!(substitution_fixed_point(&id, "a", 5), Err(SymbolicError::NonExtendingSeed(_))));
        let fp = substitution_fixed_point(&tm, "a", 10).unwrap();
        assert_eq!(fp.to_letters(), "abbabaabba");
    }

    #[test]
    fn bad_rules() {
        assert!(Substitution::parse("a->ac").is_err());
        assert!(Substitution::parse("a->").is_err());
    }

    #[test]
    fn occurrence_counts() {
        let ab = ["a", "b"];
        let w = |s: &str| Word::from_letters(s, &ab).unwrap();
        assert_eq!(count_occurrences(&w("aa"), &w("aaaa")).unwrap(), 3);
        assert_eq!(count_occurrences(&w("ab"), &w("abaab")).unwrap(), 2);
        assert_eq!(count_occurrences(&w("abab"), &w("ab")).unwrap(), 0);
    }

    #[test]
    fn file_round_trip() {
        let w = Word::new(vec![0, 1, 1, 0], vec!["x".into(), "yy".into()], 2).unwrap();
        let s = w.to_file_string();
        assert!(s.starts_with("alphabet=x,yy origin=2\n"));
        assert_eq!(Word::from_file_string(&s).unwrap(), w);
        assert!(Word::from_file_string("alphabet=a\na b").is_err());
    }
}

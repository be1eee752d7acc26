//! Corpus ingestion and preprocessing.
//!
//! Raw records carry an id, a category label and a short free-text narrative.
//! Preprocessing lowercases the text, splits it into alphanumeric tokens,
//! removes stop-words and reporting-role shorthand (`SUSP`, `V1`, ...),
//! optionally stems, and then iteratively prunes rare terms and short
//! documents until both rules hold simultaneously.

mod porter;
mod stopwords;

pub use porter::stem;
pub use stopwords::DEFAULT_STOP_WORDS;

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One text record: the unit that becomes a matrix column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub label: String,
    pub raw_text: String,
    pub tokens: Vec<String>,
}

/// Token filtering rules: a stop-word set plus the role-word pattern.
///
/// The role pattern matches case-insensitive abbreviations of the words
/// "suspect" and "victim" (`s`, `su`, `susp`, `suspect`, `suspects`, `v`,
/// `vic`, `vict`, `victim`, `victims`), each optionally followed by digits,
/// so `V1`, `SUSP` and `vict` are removed while `vehicle` is kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRules {
    pub stop_words: BTreeSet<String>,
}

const ROLE_STEMS: &[&str] = &[
    "s", "su", "susp", "suspect", "suspects", "v", "vic", "vict", "victim", "victims",
];

impl Default for StopRules {
    fn default() -> Self {
        StopRules {
            stop_words: DEFAULT_STOP_WORDS.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl StopRules {
    /// Rules with a caller-supplied stop list replacing the default one.
    pub fn with_stop_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        StopRules {
            stop_words: words.into_iter().map(|w| w.into().to_lowercase()).collect(),
        }
    }

    /// Extends the current stop list.
    pub fn add_stop_words<I, S>(&mut self, words: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for w in words {
            self.stop_words.insert(w.into().to_lowercase());
        }
    }

    /// Case-insensitive stop-word test.
    pub fn is_stop_word(&self, token: &str) -> bool {
        if token.bytes().any(|b| b.is_ascii_uppercase()) {
            self.stop_words.contains(&token.to_ascii_lowercase())
        } else {
            self.stop_words.contains(token)
        }
    }

    /// Case-insensitive test for suspect/victim shorthand, optionally
    /// digit-suffixed.
    pub fn is_role_variant(&self, token: &str) -> bool {
        if token.bytes().any(|b| b.is_ascii_uppercase()) {
            return self.is_role_variant(&token.to_ascii_lowercase());
        }
        ROLE_STEMS.iter().any(|prefix| {
            token.strip_prefix(prefix).is_some_and(|rest| {
                rest.is_empty() || rest.bytes().all(|b| b.is_ascii_digit())
            })
        })
    }

    /// Fast path for already-lowercased tokens.
    fn keep(&self, token: &str) -> bool {
        !self.stop_words.contains(token) && !self.is_role_variant(token)
    }
}

/// Splits `raw_text` into normalized tokens.
///
/// Tokens are maximal runs of ASCII alphanumerics, lowercased. Digits-only
/// tokens, stop-words and role-word variants are dropped; with `stem` on,
/// surviving tokens are Porter-stemmed and the filters re-applied to the
/// stems so no stop-word or role variant survives preprocessing.
pub fn tokenize(raw_text: &str, rules: &StopRules, stem_tokens: bool) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    for ch in raw_text.chars() {
        if ch.is_ascii_alphanumeric() {
            current.push(ch.to_ascii_lowercase());
        } else if !current.is_empty() {
            push_token(&mut out, std::mem::take(&mut current), rules, stem_tokens);
        }
    }
    if !current.is_empty() {
        push_token(&mut out, current, rules, stem_tokens);
    }
    out
}

fn push_token(out: &mut Vec<String>, token: String, rules: &StopRules, stem_tokens: bool) {
    if token.bytes().all(|b| b.is_ascii_digit()) {
        return;
    }
    if !rules.keep(&token) {
        return;
    }
    let token = if stem_tokens { stem(&token) } else { token };
    if !token.is_empty() && rules.keep(&token) {
        out.push(token);
    }
}

/// Tokenizes a batch of documents in parallel. Pure per document, so the
/// output is independent of thread scheduling.
pub fn tokenize_documents(docs: &mut [Document], rules: &StopRules, stem_tokens: bool) {
    docs.par_iter_mut().for_each(|doc| {
        doc.tokens = tokenize(&doc.raw_text, rules, stem_tokens);
    });
}

/// Term statistics for the retained corpus. Terms are sorted, so row ids are
/// canonical regardless of document order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub terms: Vec<String>,
    pub corpus_count: Vec<u32>,
    pub doc_freq: Vec<u32>,
}

impl Vocabulary {
    fn from_documents(docs: &[Document]) -> Self {
        let mut counts: HashMap<&str, (u32, u32)> = HashMap::new();
        for doc in docs {
            let mut seen: BTreeSet<&str> = BTreeSet::new();
            for token in &doc.tokens {
                counts.entry(token).or_default().0 += 1;
                seen.insert(token);
            }
            for token in seen {
                counts.get_mut(token).expect("counted above").1 += 1;
            }
        }
        let mut terms: Vec<String> = counts.keys().map(|t| t.to_string()).collect();
        terms.sort_unstable();
        let (corpus_count, doc_freq) = terms
            .iter()
            .map(|t| counts[t.as_str()])
            .unzip();
        Vocabulary {
            terms,
            corpus_count,
            doc_freq,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Row id of `term`, if retained.
    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    pub fn term(&self, row: usize) -> &str {
        &self.terms[row]
    }
}

/// Alternately drops terms occurring fewer than `min_term_count` times in the
/// corpus and documents left with fewer than `min_doc_len` tokens, until
/// neither rule fires. Dropping a document can push a term below threshold
/// and vice versa, so the loop runs to a fixed point. Returns the surviving
/// documents (input order preserved) and the final vocabulary.
pub fn prune_corpus(
    docs: Vec<Document>,
    min_term_count: usize,
    min_doc_len: usize,
) -> (Vec<Document>, Vocabulary) {
    let mut docs = docs;
    loop {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for doc in &docs {
            for token in &doc.tokens {
                *counts.entry(token.as_str()).or_default() += 1;
            }
        }
        let dropped_terms: BTreeSet<String> = counts
            .iter()
            .filter(|&(_, &c)| c < min_term_count)
            .map(|(t, _)| t.to_string())
            .collect();

        let mut changed = false;
        if !dropped_terms.is_empty() {
            changed = true;
            for doc in &mut docs {
                doc.tokens.retain(|t| !dropped_terms.contains(t));
            }
        }
        let before = docs.len();
        docs.retain(|doc| doc.tokens.len() >= min_doc_len);
        changed |= docs.len() != before;

        if !changed {
            break;
        }
    }
    let vocab = Vocabulary::from_documents(&docs);
    (docs, vocab)
}

//! Pluggable word-category lexicon features.
//!
//! File format: one `word<TAB>cat1,cat2` entry per line; a trailing `*` on
//! the word makes it a prefix pattern. `#` starts a comment line. A token
//! takes the categories of its exact entry if there is one, else those of
//! the longest matching prefix.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ngram::hex;
use super::sparse::SparseVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryLexicon {
    categories: Vec<String>,
    exact: BTreeMap<String, Vec<usize>>,
    prefixes: BTreeMap<String, Vec<usize>>,
}

impl CategoryLexicon {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw: Vec<(String, bool, Vec<String>)> = Vec::new();
        let mut names = BTreeSet::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, cats) = line.split_once('\t').ok_or_else(|| {
                Error::Config(format!("lexicon line {}: expected word<TAB>categories", n + 1))
            })?;
            let word = word.trim().to_lowercase();
            let (word, prefix) = match word.strip_suffix('*') {
                Some(w) => (w.to_string(), true),
                None => (word, false),
            };
            if word.is_empty() {
                return Err(Error::Config(format!("lexicon line {}: empty word", n + 1)));
            }
            let cats: Vec<String> = cats
                .split(',')
                .map(|c| c.trim().to_string())
                .filter(|c| !c.is_empty())
                .collect();
            if cats.is_empty() {
                return Err(Error::Config(format!("lexicon line {}: no categories", n + 1)));
            }
            names.extend(cats.iter().cloned());
            raw.push((word, prefix, cats));
        }
        let categories: Vec<String> = names.into_iter().collect();
        let index = |c: &String| categories.binary_search(c).expect("category collected above");
        let mut exact: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut prefixes: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (word, prefix, cats) in raw {
            let target = if prefix { &mut prefixes } else { &mut exact };
            let ids = target.entry(word).or_default();
            for c in &cats {
                let i = index(c);
                if !ids.contains(&i) {
                    ids.push(i);
                }
            }
            ids.sort_unstable();
        }
        Ok(CategoryLexicon {
            categories,
            exact,
            prefixes,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read lexicon {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Category names in column order (sorted).
    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn dim(&self) -> usize {
        self.categories.len()
    }

    fn lookup(&self, token: &str) -> &[usize] {
        let lower = token.to_lowercase();
        if let Some(ids) = self.exact.get(&lower) {
            return ids;
        }
        let mut end = lower.len();
        loop {
            if let Some(ids) = self.prefixes.get(&lower[..end]) {
                return ids;
            }
            match lower[..end].char_indices().next_back() {
                Some((i, _)) if i > 0 => end = i,
                _ => return &[],
            }
        }
    }

    /// Per-category relative frequency: matches / token count.
    pub fn transform<S: AsRef<str>>(&self, tokens: &[S]) -> SparseVector {
        if tokens.is_empty() {
            return SparseVector::zeros(self.dim());
        }
        let n = tokens.len() as f64;
        let pairs = tokens
            .iter()
            .flat_map(|t| self.lookup(t.as_ref()).iter().map(|&i| (i, 1.0 / n)))
            .collect();
        SparseVector::from_pairs(self.dim(), pairs)
    }

    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"lexicon");
        for (kind, map) in [("=", &self.exact), ("*", &self.prefixes)] {
            for (w, ids) in map {
                h.update(kind.as_bytes());
                h.update(w.as_bytes());
                for i in ids {
                    h.update(self.categories[*i].as_bytes());
                    h.update([0u8]);
                }
            }
        }
        hex(&h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_frequencies() {
        let lex = CategoryLexicon::parse("i\tself\nwe\tself,social\n").unwrap();
        assert_eq!(lex.categories(), &["self", "social"]);
        let v = lex.transform(&["i", "we", "go"]);
        assert!((v.get(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((v.get(1) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(lex.transform::<&str>(&[]).nnz(), 0);
    }

    #[test]
    fn exact_beats_prefix_and_longest_prefix_wins() {
        let lex = CategoryLexicon::parse("agre*\tassent\nagree*\tstrong\nagreement\tnoun\n").unwrap();
        let cols = |t: &str| lex.transform(&[t]).entries().iter().map(|e| e.0).collect::<Vec<_>>();
        let idx = |c: &str| lex.categories().iter().position(|x| x == c).unwrap();
        assert_eq!(cols("agreement"), vec![idx("noun")]);
        assert_eq!(cols("agreed"), vec![idx("strong")]);
        assert_eq!(cols("agr"), Vec::<usize>::new());
        assert_eq!(cols("agre"), vec![idx("assent")]);
    }

    #[test]
    fn malformed_lines() {
        assert!(CategoryLexicon::parse("word-without-tab\n").is_err());
        assert!(CategoryLexicon::parse("w\t\n").is_err());
    }
}

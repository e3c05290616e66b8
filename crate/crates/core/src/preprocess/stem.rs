//! Deterministic English stemmer.
//!
//! Porter2-style suffix stripping. The suffix tables for steps 2-4 and the
//! exception words live in `data/stemmer.txt`; the structural steps (0, 1a,
//! 1b, 1c, 5) are coded here. The result is iterated to a fixpoint so that
//! `stem(stem(t)) == stem(t)` holds for every token.

use std::collections::HashMap;
use std::sync::OnceLock;

pub const STEMMER_RULES: &str = include_str!("../../data/stemmer.txt");

#[derive(Debug, Clone)]
enum Condition {
    None,
    After(Vec<char>),
    InR2,
}

#[derive(Debug, Clone)]
struct SuffixRule {
    suffix: Vec<char>,
    replacement: Vec<char>,
    condition: Condition,
}

#[derive(Debug, Default)]
struct RuleTable {
    exceptions: HashMap<String, String>,
    invariants: Vec<String>,
    step2: Vec<SuffixRule>,
    step3: Vec<SuffixRule>,
    step4: Vec<SuffixRule>,
}

fn table() -> &'static RuleTable {
    static TABLE: OnceLock<RuleTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = RuleTable::default();
        for line in STEMMER_RULES.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            match cols[0] {
                "exception" => {
                    t.exceptions.insert(cols[1].to_string(), cols[2].to_string());
                }
                "invariant" => t.invariants.push(cols[1].to_string()),
                step => {
                    let replacement = if cols[2] == "-" { Vec::new() } else { cols[2].chars().collect() };
                    let condition = match cols.get(3) {
                        Some(c) if c.starts_with("after:") => Condition::After(c[6..].chars().collect()),
                        Some(&"r2") => Condition::InR2,
                        _ => Condition::None,
                    };
                    let rule = SuffixRule {
                        suffix: cols[1].chars().collect(),
                        replacement,
                        condition,
                    };
                    match step {
                        "step2" => t.step2.push(rule),
                        "step3" => t.step3.push(rule),
                        "step4" => t.step4.push(rule),
                        other => panic!("unknown stemmer rule kind {other:?}"),
                    }
                }
            }
        }
        t
    })
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

fn ends_with(w: &[char], suffix: &str) -> bool {
    let n = suffix.chars().count();
    w.len() >= n && w[w.len() - n..].iter().copied().eq(suffix.chars())
}

/// Start of the region after the first non-vowel following a vowel, at or after `from`.
fn region_after(w: &[char], from: usize) -> usize {
    let mut i = from;
    while i + 1 < w.len() {
        if is_vowel(w[i]) && !is_vowel(w[i + 1]) {
            return i + 2;
        }
        i += 1;
    }
    w.len()
}

fn short_syllable_at_end(w: &[char]) -> bool {
    let n = w.len();
    if n == 2 {
        return is_vowel(w[0]) && !is_vowel(w[1]);
    }
    n >= 3
        && !is_vowel(w[n - 3])
        && is_vowel(w[n - 2])
        && !is_vowel(w[n - 1])
        && !matches!(w[n - 1], 'w' | 'x' | 'Y')
}

fn is_double(w: &[char]) -> bool {
    let n = w.len();
    n >= 2
        && w[n - 1] == w[n - 2]
        && matches!(w[n - 1], 'b' | 'd' | 'f' | 'g' | 'm' | 'n' | 'p' | 'r' | 't')
}

fn apply_table(w: &mut Vec<char>, rules: &[SuffixRule], region: usize, r2: usize) {
    let best = rules
        .iter()
        .filter(|r| w.len() >= r.suffix.len() && w[w.len() - r.suffix.len()..] == r.suffix[..])
        .max_by_key(|r| r.suffix.len());
    let Some(rule) = best else { return };
    let at = w.len() - rule.suffix.len();
    if at < region {
        return;
    }
    let ok = match &rule.condition {
        Condition::None => true,
        Condition::After(letters) => at > 0 && letters.contains(&w[at - 1]),
        Condition::InR2 => at >= r2,
    };
    if ok {
        w.truncate(at);
        w.extend_from_slice(&rule.replacement);
    }
}

fn stem_once(token: &str) -> String {
    let t = table();
    if let Some(s) = t.exceptions.get(token) {
        return s.clone();
    }
    let mut w: Vec<char> = token.chars().collect();
    if w.first() == Some(&'\'') {
        w.remove(0);
    }
    if w.len() <= 2 {
        return w.into_iter().collect();
    }
    if w[0] == 'y' {
        w[0] = 'Y';
    }
    for i in 1..w.len() {
        if w[i] == 'y' && is_vowel(w[i - 1]) {
            w[i] = 'Y';
        }
    }

    let s: String = w.iter().collect();
    let r1 = ["gener", "commun", "arsen"]
        .iter()
        .find(|p| s.starts_with(*p))
        .map(|p| p.len())
        .unwrap_or_else(|| region_after(&w, 0));
    let r2 = region_after(&w, r1.min(w.len()));

    // Step 0
    for suf in ["'s'", "'s", "'"] {
        if ends_with(&w, suf) {
            w.truncate(w.len() - suf.len());
            break;
        }
    }

    // Step 1a
    if ends_with(&w, "sses") {
        w.truncate(w.len() - 2);
    } else if ends_with(&w, "ied") || ends_with(&w, "ies") {
        let keep = if w.len() > 4 { w.len() - 2 } else { w.len() - 1 };
        w.truncate(keep);
    } else if ends_with(&w, "us") || ends_with(&w, "ss") {
    } else if ends_with(&w, "s") && w.len() >= 2 && w[..w.len() - 2].iter().any(|c| is_vowel(*c)) {
        w.pop();
    }

    let after_1a: String = w.iter().collect();
    if t.invariants.iter().any(|x| *x == after_1a) {
        return after_1a;
    }

    // Step 1b
    let long_forms = ["eedly", "ingly", "edly", "eed", "ing", "ed"];
    if let Some(suf) = long_forms.iter().find(|s| ends_with(&w, s)) {
        let at = w.len() - suf.len();
        if suf.starts_with("eed") {
            if at >= r1 {
                w.truncate(at);
                w.extend(['e', 'e']);
            }
        } else if w[..at].iter().any(|c| is_vowel(*c)) {
            w.truncate(at);
            if ends_with(&w, "at") || ends_with(&w, "bl") || ends_with(&w, "iz") {
                w.push('e');
            } else if is_double(&w) {
                w.pop();
            } else if r1 >= w.len() && short_syllable_at_end(&w) {
                w.push('e');
            }
        }
    }

    // Step 1c
    let n = w.len();
    if n > 2 && matches!(w[n - 1], 'y' | 'Y') && !is_vowel(w[n - 2]) {
        w[n - 1] = 'i';
    }

    apply_table(&mut w, &t.step2, r1, r2);
    apply_table(&mut w, &t.step3, r1, r2);
    apply_table(&mut w, &t.step4, r2, r2);

    // Step 5
    let n = w.len();
    if n > 0 && w[n - 1] == 'e' {
        let at = n - 1;
        if at >= r2 || (at >= r1 && !short_syllable_at_end(&w[..at])) {
            w.pop();
        }
    } else if n > 1 && w[n - 1] == 'l' && n - 1 >= r2 && w[n - 2] == 'l' {
        w.pop();
    }

    w.into_iter().map(|c| if c == 'Y' { 'y' } else { c }).collect()
}

/// Stems a lowercase token. Tokens containing anything other than ASCII
/// letters and apostrophes are returned unchanged.
pub fn stem(token: &str) -> String {
    if token.is_empty() || !token.chars().all(|c| c.is_ascii_lowercase() || c == '\'') {
        return token.to_string();
    }
    let mut current = token.to_string();
    for _ in 0..8 {
        let next = stem_once(&current);
        if next == current || next.is_empty() {
            return current;
        }
        current = next;
    }
    current
}

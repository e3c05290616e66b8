//! Marker-table politeness score in (0, 1).
//!
//! `score = logistic(sum of marker weights)`, each marker counted per
//! occurrence over lowercased surface tokens. With no markers the score is
//! exactly 0.5.

use std::sync::OnceLock;

pub const POLITENESS_MARKERS: &str = include_str!("../../data/politeness_markers.tsv");

#[derive(Debug, Clone)]
struct Marker {
    phrase: Vec<String>,
    weight: f64,
}

#[derive(Debug, Clone)]
pub struct PolitenessMarkers {
    markers: Vec<Marker>,
    imperatives: Vec<(String, f64)>,
    skip: Vec<String>,
}

impl PolitenessMarkers {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut out = PolitenessMarkers {
            markers: Vec::new(),
            imperatives: Vec::new(),
            skip: Vec::new(),
        };
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(format!("line {}: expected kind<TAB>weight<TAB>phrase", n + 1));
            }
            let weight: f64 = cols[1]
                .trim()
                .parse()
                .map_err(|_| format!("line {}: invalid weight {:?}", n + 1, cols[1]))?;
            let phrase = cols[2].trim().to_lowercase();
            match cols[0].trim() {
                "imperative" => out.imperatives.push((phrase, weight)),
                "skip" => out.skip.push(phrase),
                _ => out.markers.push(Marker {
                    phrase: phrase.split(' ').map(String::from).collect(),
                    weight,
                }),
            }
        }
        Ok(out)
    }

    pub fn bundled() -> &'static PolitenessMarkers {
        static M: OnceLock<PolitenessMarkers> = OnceLock::new();
        M.get_or_init(|| PolitenessMarkers::parse(POLITENESS_MARKERS).expect("bundled marker table parses"))
    }

    /// Sum of signed marker weights.
    pub fn marker_sum<S: AsRef<str>>(&self, tokens: &[S]) -> f64 {
        let lower: Vec<String> = tokens.iter().map(|t| t.as_ref().to_lowercase()).collect();
        let mut total = 0.0;
        for m in &self.markers {
            let n = m.phrase.len();
            if n == 0 || n > lower.len() {
                continue;
            }
            let hits = lower.windows(n).filter(|w| *w == m.phrase.as_slice()).count();
            total += hits as f64 * m.weight;
        }
        let mut words = lower.iter().filter(|t| t.chars().any(char::is_alphanumeric));
        let mut first = words.next();
        while let Some(w) = first {
            if self.skip.iter().any(|s| s == w) {
                first = words.next();
            } else {
                break;
            }
        }
        if let Some(w) = first {
            if let Some((_, weight)) = self.imperatives.iter().find(|(v, _)| v == w) {
                total += weight;
            }
        }
        total
    }

    pub fn score<S: AsRef<str>>(&self, tokens: &[S]) -> f64 {
        logistic(self.marker_sum(tokens))
    }
}

pub fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Politeness of a quote's surface tokens using the bundled markers.
pub fn politeness_score<S: AsRef<str>>(tokens: &[S]) -> f64 {
    PolitenessMarkers::bundled().score(tokens)
}

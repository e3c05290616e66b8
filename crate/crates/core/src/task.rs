use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Component, LabelSet, Level1, Standpoint};
use crate::error::{Error, Result};

/// The three classification problems. Component and standpoint are only
/// defined on argumentative quotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Level1,
    Component,
    Standpoint,
}

impl Task {
    pub const ALL: [Task; 3] = [Task::Level1, Task::Component, Task::Standpoint];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Level1 => "level1",
            Task::Component => "component",
            Task::Standpoint => "standpoint",
        }
    }

    /// Class names in declared (alphabetical) order.
    pub fn classes(self) -> Vec<String> {
        let mut names: Vec<String> = match self {
            Task::Level1 => Level1::ALL.iter().map(|c| c.as_str().to_string()).collect(),
            Task::Component => Component::ALL.iter().map(|c| c.as_str().to_string()).collect(),
            Task::Standpoint => Standpoint::ALL.iter().map(|c| c.as_str().to_string()).collect(),
        };
        names.sort();
        names
    }

    /// The label for this task, or `None` when the quote is outside the
    /// task's population.
    pub fn label(self, labels: &LabelSet) -> Option<&'static str> {
        match self {
            Task::Level1 => Some(labels.level1.as_str()),
            Task::Component => labels.component.map(|c| c.as_str()),
            Task::Standpoint => labels.standpoint.map(|s| s.as_str()),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown task {s:?}; expected level1, component or standpoint")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_are_sorted() {
        assert_eq!(Task::Level1.classes(), vec!["argumentative", "non_argumentative"]);
        assert_eq!(Task::Standpoint.classes(), vec!["against", "support"]);
        assert_eq!(Task::Component.classes(), vec!["claim", "ground", "warrant"]);
    }

    #[test]
    fn population() {
        let non = LabelSet::non_argumentative();
        assert_eq!(Task::Level1.label(&non), Some("non_argumentative"));
        assert_eq!(Task::Component.label(&non), None);
        let arg = LabelSet::argumentative(Component::Warrant, Standpoint::Against, Some(1));
        assert_eq!(Task::Standpoint.label(&arg), Some("against"));
    }
}

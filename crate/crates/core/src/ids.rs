//! Case-insensitive identifiers for memory-graph nodes and SPM vertices.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Name of a data chunk stored in the knowledge base.
///
/// Equality, ordering and hashing use the trimmed lower-case form so that
/// "Fridge" and "fridge" address the same node, while the original spelling
/// is kept for rendering.
#[derive(Clone)]
pub struct NodeId {
    key: String,
    display: String,
}

impl NodeId {
    pub fn new(name: impl AsRef<str>) -> Self {
        let display = name.as_ref().split_whitespace().collect::<Vec<_>>().join(" ");
        Self {
            key: display.to_lowercase(),
            display,
        }
    }

    /// Lower-case lookup key.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// Spelling as first declared.
    pub fn name(&self) -> &str {
        &self.display
    }

    pub fn is_empty(&self) -> bool {
        self.key.is_empty()
    }
}

impl PartialEq for NodeId {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for NodeId {}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl Hash for NodeId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.display)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::new(s)
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId::new(s)
    }
}

impl Serialize for NodeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.display)
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(NodeId::new(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_insensitive_identity() {
        assert_eq!(NodeId::new("Fridge"), NodeId::new("fridge"));
        assert_eq!(NodeId::new("Queen  Elizabeth").name(), "Queen Elizabeth");
        assert_eq!(NodeId::new(" Sofa ").key(), "sofa");
    }
}

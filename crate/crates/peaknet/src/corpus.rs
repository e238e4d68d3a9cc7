//! Parsing of scene-segmented script files and alias maps.
//!
//! The `.scenes` format is one scene per line, character names separated by
//! `|`. Whitespace around names is ignored, `#` starts a comment line and
//! blank lines are skipped. The `.alias` format is one `alias => canonical`
//! mapping per line with the same comment rules.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: empty character name between separators")]
    EmptyName { line: usize },
    #[error("no scenes found in input")]
    NoScenes,
    #[error("line {line}: expected `alias => canonical`, got {content:?}")]
    MalformedAlias { line: usize, content: String },
    #[error("line {line}: alias {alias:?} already maps to {existing:?}")]
    DuplicateAlias {
        line: usize,
        alias: String,
        existing: String,
    },
    #[error("alias chain: {alias:?} maps to {canonical:?}, which is itself an alias")]
    AliasChain { alias: String, canonical: String },
    #[error("scene {scene} is empty")]
    EmptyScene { scene: usize },
}

/// An ordered list of scenes, each an ordered duplicate-free set of
/// canonical character names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneSequence {
    scenes: Vec<Vec<String>>,
    source_name: String,
}

impl SceneSequence {
    /// Builds a sequence from raw scenes, trimming names and collapsing
    /// within-scene duplicates (first occurrence wins).
    pub fn new(
        scenes: Vec<Vec<String>>,
        source_name: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        if scenes.is_empty() {
            return Err(CorpusError::NoScenes);
        }
        let mut cleaned = Vec::with_capacity(scenes.len());
        for (i, scene) in scenes.into_iter().enumerate() {
            let mut members: Vec<String> = Vec::with_capacity(scene.len());
            for name in scene {
                let name = name.trim();
                if name.is_empty() {
                    return Err(CorpusError::EmptyScene { scene: i + 1 });
                }
                if !members.iter().any(|m| m == name) {
                    members.push(name.to_string());
                }
            }
            if members.is_empty() {
                return Err(CorpusError::EmptyScene { scene: i + 1 });
            }
            cleaned.push(members);
        }
        Ok(Self {
            scenes: cleaned,
            source_name: source_name.into(),
        })
    }

    pub fn scenes(&self) -> &[Vec<String>] {
        &self.scenes
    }

    pub fn len(&self) -> usize {
        self.scenes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenes.is_empty()
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }
}

/// Result of parsing a `.scenes` file: the sequence plus how many
/// within-scene duplicate names were collapsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedScenes {
    pub sequence: SceneSequence,
    pub duplicates_collapsed: usize,
}

/// Parses the `.scenes` text format.
///
/// Scene order follows file order; comment (`#`) and blank lines are
/// skipped. A name that is empty after trimming (e.g. `"A|"` or `"A||B"`)
/// is a parse error carrying the 1-based line number.
pub fn parse_scenes(text: &str, source_name: &str) -> Result<ParsedScenes, CorpusError> {
    let mut scenes: Vec<Vec<String>> = Vec::new();
    let mut duplicates = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut members: Vec<String> = Vec::new();
        for part in line.split('|') {
            let name = part.trim();
            if name.is_empty() {
                return Err(CorpusError::EmptyName { line: idx + 1 });
            }
            if members.iter().any(|m| m == name) {
                duplicates += 1;
            } else {
                members.push(name.to_string());
            }
        }
        scenes.push(members);
    }
    if scenes.is_empty() {
        return Err(CorpusError::NoScenes);
    }
    Ok(ParsedScenes {
        sequence: SceneSequence {
            scenes,
            source_name: source_name.to_string(),
        },
        duplicates_collapsed: duplicates,
    })
}

/// Writes a sequence back in the `.scenes` format, one line per scene.
///
/// Round-trips through [`parse_scenes`] as long as names contain no `|`,
/// no newline and do not start with `#`, which holds for anything that was
/// itself parsed from the format.
pub fn to_scenes_format(seq: &SceneSequence) -> String {
    let mut out = String::new();
    for scene in &seq.scenes {
        out.push_str(&scene.join("|"));
        out.push('\n');
    }
    out
}

/// Alias-to-canonical name mapping with no resolution chains.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasMap {
    entries: BTreeMap<String, String>,
}

impl AliasMap {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a map from `(alias, canonical)` pairs.
    ///
    /// Identity entries (`X => X`) are dropped. Fails if an alias appears
    /// twice with different canonicals, or if any canonical is itself an
    /// alias (a resolution chain).
    pub fn from_entries<I>(pairs: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut entries: BTreeMap<String, String> = BTreeMap::new();
        for (alias, canonical) in pairs {
            if alias == canonical {
                continue;
            }
            if let Some(existing) = entries.get(&alias) {
                if *existing != canonical {
                    return Err(CorpusError::DuplicateAlias {
                        line: 0,
                        alias,
                        existing: existing.clone(),
                    });
                }
                continue;
            }
            entries.insert(alias, canonical);
        }
        for (alias, canonical) in &entries {
            if entries.contains_key(canonical) {
                return Err(CorpusError::AliasChain {
                    alias: alias.clone(),
                    canonical: canonical.clone(),
                });
            }
        }
        Ok(Self { entries })
    }

    /// Canonical form of `name`; names without an alias entry pass through.
    pub fn resolve<'a>(&'a self, name: &'a str) -> &'a str {
        self.entries.get(name).map(String::as_str).unwrap_or(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Parses the `.alias` text format (`alias => canonical` per line).
pub fn parse_alias_map(text: &str) -> Result<AliasMap, CorpusError> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut seen: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((alias, canonical)) = line.split_once("=>") else {
            return Err(CorpusError::MalformedAlias {
                line: idx + 1,
                content: line.to_string(),
            });
        };
        let alias = alias.trim();
        let canonical = canonical.trim();
        if alias.is_empty() || canonical.is_empty() {
            return Err(CorpusError::MalformedAlias {
                line: idx + 1,
                content: line.to_string(),
            });
        }
        if let Some((_, existing)) = seen.get(alias) {
            if existing != canonical {
                return Err(CorpusError::DuplicateAlias {
                    line: idx + 1,
                    alias: alias.to_string(),
                    existing: existing.clone(),
                });
            }
            continue;
        }
        seen.insert(alias.to_string(), (idx + 1, canonical.to_string()));
        pairs.push((alias.to_string(), canonical.to_string()));
    }
    AliasMap::from_entries(pairs)
}

/// Replaces every name by its canonical form, collapsing scene members
/// that merge into one name. Scene order is unchanged; unknown names pass
/// through. Idempotent because canonicals are never themselves aliases.
pub fn resolve_aliases(seq: &SceneSequence, aliases: &AliasMap) -> SceneSequence {
    let scenes = seq
        .scenes
        .iter()
        .map(|scene| {
            let mut members: Vec<String> = Vec::with_capacity(scene.len());
            for name in scene {
                let resolved = aliases.resolve(name);
                if !members.iter().any(|m| m == resolved) {
                    members.push(resolved.to_string());
                }
            }
            members
        })
        .collect();
    SceneSequence {
        scenes,
        source_name: seq.source_name.clone(),
    }
}

/// Parses a removal-list file: one node name per line, `#` comments and
/// blank lines ignored.
pub fn parse_node_list(text: &str) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !names.iter().any(|n| n == line) {
            names.push(line.to_string());
        }
    }
    names
}

//! Format-neutral document tree. Numbers keep their source text so that
//! monetary values and factors are read exactly.

use indexmap::IndexMap;
use yaml_rust2::yaml::{Hash, Yaml};
use yaml_rust2::{YamlEmitter, YamlLoader};

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Null,
    Bool(bool),
    Number(String),
    String(String),
    Seq(Vec<Node>),
    Map(IndexMap<String, Node>),
}

impl Node {
    pub fn kind(&self) -> &'static str {
        match self {
            Node::Null => "null",
            Node::Bool(_) => "boolean",
            Node::Number(_) => "number",
            Node::String(_) => "string",
            Node::Seq(_) => "sequence",
            Node::Map(_) => "mapping",
        }
    }

    pub fn as_map(&self) -> Option<&IndexMap<String, Node>> {
        match self {
            Node::Map(m) => Some(m),
            _ => None,
        }
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        self.as_map().and_then(|m| m.get(key))
    }

    /// Follows an RFC 6901 pointer.
    pub fn pointer(&self, pointer: &str) -> Option<&Node> {
        if pointer.is_empty() {
            return Some(self);
        }
        let mut node = self;
        for raw in pointer.strip_prefix('/')?.split('/') {
            let token = raw.replace("~1", "/").replace("~0", "~");
            node = match node {
                Node::Map(m) => m.get(&token)?,
                Node::Seq(items) => items.get(token.parse::<usize>().ok()?)?,
                _ => return None,
            };
        }
        Some(node)
    }

    pub fn str(s: impl Into<String>) -> Node {
        Node::String(s.into())
    }

    pub fn map<K: Into<String>>(entries: impl IntoIterator<Item = (K, Node)>) -> Node {
        Node::Map(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxFailure {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn parse_yaml(text: &str) -> Result<Node, SyntaxFailure> {
    let docs = YamlLoader::load_from_str(text).map_err(|e| SyntaxFailure {
        line: e.marker().line(),
        column: e.marker().col() + 1,
        message: e.info().to_string(),
    })?;
    match docs.len() {
        0 => Ok(Node::Null),
        1 => from_yaml(&docs[0]),
        n => Err(SyntaxFailure { line: 1, column: 1, message: format!("expected one YAML document, found {n}") }),
    }
}

pub fn parse_json(text: &str) -> Result<Node, SyntaxFailure> {
    // serde_json gives JSON-accurate syntax errors; the tree itself is read
    // through the YAML loader, which keeps numeric literals verbatim.
    serde_json::from_str::<serde::de::IgnoredAny>(text).map_err(|e| SyntaxFailure {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    parse_yaml(text)
}

fn from_yaml(y: &Yaml) -> Result<Node, SyntaxFailure> {
    Ok(match y {
        Yaml::Null => Node::Null,
        Yaml::Boolean(b) => Node::Bool(*b),
        Yaml::Integer(i) => Node::Number(i.to_string()),
        Yaml::Real(r) => Node::Number(r.clone()),
        Yaml::String(s) => Node::String(s.clone()),
        Yaml::Array(items) => Node::Seq(items.iter().map(from_yaml).collect::<Result<_, _>>()?),
        Yaml::Hash(h) => {
            let mut map = IndexMap::with_capacity(h.len());
            for (k, v) in h {
                let key = match k {
                    Yaml::String(s) | Yaml::Real(s) => s.clone(),
                    Yaml::Integer(i) => i.to_string(),
                    Yaml::Boolean(b) => b.to_string(),
                    Yaml::Null => "null".to_string(),
                    other => {
                        return Err(SyntaxFailure {
                            line: 1,
                            column: 1,
                            message: format!("unsupported mapping key {other:?}"),
                        })
                    }
                };
                if map.insert(key.clone(), from_yaml(v)?).is_some() {
                    return Err(SyntaxFailure { line: 1, column: 1, message: format!("duplicate key `{key}`") });
                }
            }
            Node::Map(map)
        }
        Yaml::Alias(_) | Yaml::BadValue => {
            return Err(SyntaxFailure { line: 1, column: 1, message: "unsupported YAML value".to_string() })
        }
    })
}

fn to_yaml(node: &Node) -> Yaml {
    match node {
        Node::Null => Yaml::Null,
        Node::Bool(b) => Yaml::Boolean(*b),
        Node::Number(n) => match n.parse::<i64>() {
            Ok(i) => Yaml::Integer(i),
            Err(_) => Yaml::Real(n.clone()),
        },
        Node::String(s) => Yaml::String(s.clone()),
        Node::Seq(items) => Yaml::Array(items.iter().map(to_yaml).collect()),
        Node::Map(m) => {
            let mut h = Hash::new();
            for (k, v) in m {
                h.insert(Yaml::String(k.clone()), to_yaml(v));
            }
            Yaml::Hash(h)
        }
    }
}

pub fn emit_yaml(node: &Node) -> String {
    let mut out = String::new();
    YamlEmitter::new(&mut out).dump(&to_yaml(node)).expect("writing to a String cannot fail");
    out.push('\n');
    out
}

pub fn emit_json(node: &Node) -> String {
    let mut out = String::new();
    write_json(node, 0, &mut out);
    out.push('\n');
    out
}

fn write_json(node: &Node, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match node {
        Node::Null => out.push_str("null"),
        Node::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Node::Number(n) => out.push_str(n),
        Node::String(s) => out.push_str(&serde_json::to_string(s).expect("strings always serialize")),
        Node::Seq(items) if items.is_empty() => out.push_str("[]"),
        Node::Map(m) if m.is_empty() => out.push_str("{}"),
        Node::Seq(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Node::Map(m) => {
            out.push_str("{\n");
            for (i, (k, v)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("strings always serialize"));
                out.push_str(": ");
                write_json(v, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Builds RFC 6901 pointers.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pointer(String);

impl Pointer {
    pub fn root() -> Self {
        Pointer(String::new())
    }

    pub fn join(&self, token: impl std::fmt::Display) -> Self {
        let token = token.to_string().replace('~', "~0").replace('/', "~1");
        Pointer(format!("{}/{}", self.0, token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for Pointer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

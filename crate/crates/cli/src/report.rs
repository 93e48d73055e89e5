use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub key: String,
    pub value: Option<String>,
    pub children: Vec<Node>,
}

impl Node {
    pub fn leaf(key: impl Into<String>, value: impl ToString) -> Node {
        Node { key: key.into(), value: Some(value.to_string()), children: Vec::new() }
    }

    pub fn branch(key: impl Into<String>, children: Vec<Node>) -> Node {
        Node { key: key.into(), value: None, children }
    }

    pub fn with_value(mut self, value: impl ToString) -> Node {
        self.value = Some(value.to_string());
        self
    }

    pub fn find(&self, key: &str) -> Option<&Node> {
        self.children.iter().find(|c| c.key == key)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Tree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub digest: String,
    pub body: Vec<Node>,
    /// Set when a verification verdict failed.
    pub failed: bool,
}

impl Report {
    pub fn find(&self, key: &str) -> Option<&Node> {
        self.body.iter().find(|n| n.key == key)
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                writeln!(out, "command: {}", self.command).unwrap();
                writeln!(out, "input: {}", self.digest).unwrap();
                for n in &self.body {
                    text(&mut out, n, 0);
                }
            }
            Format::Tree => {
                writeln!(out, "command = {}", self.command).unwrap();
                writeln!(out, "input = {}", self.digest).unwrap();
                for n in &self.body {
                    tree(&mut out, n, "");
                }
            }
        }
        out
    }
}

fn text(out: &mut String, n: &Node, depth: usize) {
    let pad = "  ".repeat(depth);
    match &n.value {
        Some(v) => writeln!(out, "{pad}{}: {v}", n.key).unwrap(),
        None => writeln!(out, "{pad}{}:", n.key).unwrap(),
    }
    for c in &n.children {
        text(out, c, depth + 1);
    }
}

fn tree(out: &mut String, n: &Node, prefix: &str) {
    let path = if prefix.is_empty() { n.key.clone() } else { format!("{prefix}.{}", n.key) };
    if let Some(v) = &n.value {
        writeln!(out, "{path} = {v}").unwrap();
    }
    for c in &n.children {
        tree(out, c, &path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let body = vec![Node::leaf("dim", 3), Node::branch("stages", vec![Node::leaf("H1", "dim 2")]).with_value(1)];
        Report { command: "hull".into(), digest: "sha256:00".into(), body, failed: false }
    }

    #[test]
    fn text_indents_children() {
        assert_eq!(sample().render(Format::Text), "command: hull\ninput: sha256:00\ndim: 3\nstages: 1\n  H1: dim 2\n");
    }

    #[test]
    fn tree_uses_dotted_paths() {
        assert_eq!(sample().render(Format::Tree), "command = hull\ninput = sha256:00\ndim = 3\nstages = 1\nstages.H1 = dim 2\n");
    }
}

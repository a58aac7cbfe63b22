//! Line-oriented feature-model DSL.
//!
//! ```text
//! WebPortal
//!   WebServer!          # mandatory
//!     Protocols?        # optional
//!       <or>
//!         ftp
//!         https
//! ---
//! requires DataTransfer https
//! excludes https ms
//! ```
//!
//! Indentation is two spaces per level. A `<xor>` or `<or>` line opens a
//! group whose indented children are its members (bare names). Everything
//! after `---` is the constraint list.

use std::fmt::{self, Write as _};

use thiserror::Error;

use super::{
    ConstraintKind, FeatureId, FeatureKind, FeatureModel, FeatureModelBuilder, GroupId, GroupKind, ModelError, Slot,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A model-DSL error with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    fn model(line: usize, column: usize, err: ModelError) -> Self {
        ParseError {
            line,
            column,
            kind: ParseErrorKind::Model(err),
        }
    }
}

#[derive(Clone, Copy)]
enum Node {
    Feature(FeatureId),
    Group(GroupId),
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim_end()
}

pub fn parse_model(text: &str) -> Result<FeatureModel, ParseError> {
    let mut builder: Option<FeatureModelBuilder> = None;
    // (depth, node); the root sits at depth 0.
    let mut stack: Vec<(usize, Node)> = Vec::new();
    let mut group_lines: Vec<(GroupId, usize)> = Vec::new();
    let mut in_constraints = false;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }

        if in_constraints {
            parse_constraint(line, lineno, builder.as_mut().expect("tree precedes constraints"))?;
            continue;
        }
        if line == "---" {
            if builder.is_none() {
                return Err(ParseError::syntax(lineno, 1, "constraint section before any feature"));
            }
            in_constraints = true;
            continue;
        }

        let indent = line.len() - line.trim_start_matches(' ').len();
        let body = &line[indent..];
        let column = indent + 1;
        if body.starts_with('\t') || body.contains(char::is_whitespace) {
            return Err(ParseError::syntax(
                lineno,
                column,
                "unexpected whitespace in feature line",
            ));
        }
        if !indent.is_multiple_of(2) {
            return Err(ParseError::syntax(
                lineno,
                1,
                "indentation must be a multiple of two spaces",
            ));
        }
        let depth = indent / 2;

        let Some(b) = builder.as_mut() else {
            if depth != 0 {
                return Err(ParseError::syntax(lineno, column, "root feature must not be indented"));
            }
            let name = body.strip_suffix('!').unwrap_or(body);
            let b = FeatureModelBuilder::new(name).map_err(|e| ParseError::model(lineno, column, e))?;
            stack.push((0, Node::Feature(b.root())));
            builder = Some(b);
            continue;
        };

        if depth == 0 {
            return Err(ParseError::syntax(lineno, column, "a model has exactly one root"));
        }
        while stack.last().is_some_and(|&(d, _)| d >= depth) {
            stack.pop();
        }
        let &(parent_depth, parent) = stack.last().expect("root stays on the stack");
        if parent_depth + 1 != depth {
            return Err(ParseError::syntax(lineno, column, "indentation skips a level"));
        }

        let node = match (body, parent) {
            ("<xor>" | "<or>", Node::Feature(p)) => {
                let kind = if body == "<xor>" { GroupKind::Xor } else { GroupKind::Or };
                let g = b.add_group(kind, p);
                group_lines.push((g, lineno));
                Node::Group(g)
            }
            ("<xor>" | "<or>", Node::Group(_)) => {
                return Err(ParseError::syntax(
                    lineno,
                    column,
                    "a group cannot directly contain a group",
                ));
            }
            (_, Node::Group(g)) => {
                if body.ends_with(['!', '?']) {
                    return Err(ParseError::syntax(
                        lineno,
                        column + body.len() - 1,
                        "group members take no `!`/`?` marker",
                    ));
                }
                let id = b
                    .add_member(g, body)
                    .map_err(|e| ParseError::model(lineno, column, e))?;
                Node::Feature(id)
            }
            (_, Node::Feature(p)) => {
                let (name, kind) = if let Some(n) = body.strip_suffix('!') {
                    (n, FeatureKind::Mandatory)
                } else if let Some(n) = body.strip_suffix('?') {
                    (n, FeatureKind::Optional)
                } else {
                    return Err(ParseError::syntax(
                        lineno,
                        column + body.len(),
                        "expected `!` (mandatory) or `?` (optional) after feature name",
                    ));
                };
                let id = b
                    .add_feature(name, p, kind)
                    .map_err(|e| ParseError::model(lineno, column, e))?;
                Node::Feature(id)
            }
        };
        stack.push((depth, node));
    }

    let Some(b) = builder else {
        return Err(ParseError::syntax(1, 1, "empty model"));
    };
    for &(g, line) in &group_lines {
        let found = b.group_size(g);
        if found < 2 {
            let parent = b.group_parent_name(g).to_string();
            return Err(ParseError::model(line, 1, ModelError::GroupTooSmall { parent, found }));
        }
    }
    b.build().map_err(|e| ParseError::model(0, 0, e))
}

fn parse_constraint(line: &str, lineno: usize, b: &mut FeatureModelBuilder) -> Result<(), ParseError> {
    let mut tokens = Vec::new();
    let mut offset = 0;
    for tok in line.split_whitespace() {
        let start = line[offset..].find(tok).expect("token comes from line") + offset;
        offset = start + tok.len();
        tokens.push((start + 1, tok));
    }
    let [(kcol, kind), (lcol, lhs), (rcol, rhs)] = tokens[..] else {
        return Err(ParseError::syntax(
            lineno,
            1,
            "expected `requires <A> <B>` or `excludes <A> <B>`",
        ));
    };
    let kind = match kind {
        "requires" => ConstraintKind::Requires,
        "excludes" => ConstraintKind::Excludes,
        other => {
            return Err(ParseError::syntax(
                lineno,
                kcol,
                format!("unknown constraint kind `{other}`"),
            ));
        }
    };
    for (col, name) in [(lcol, lhs), (rcol, rhs)] {
        if b.lookup(name).is_none() {
            return Err(ParseError::model(
                lineno,
                col,
                ModelError::UnknownFeature(name.to_string()),
            ));
        }
    }
    if lhs == rhs {
        return Err(ParseError::model(
            lineno,
            rcol,
            ModelError::SelfConstraint {
                kind,
                name: lhs.to_string(),
            },
        ));
    }
    b.add_constraint(kind, lhs, rhs);
    Ok(())
}

/// Renders a model back into the DSL. `parse_model(serialize_model(m))`
/// reproduces any model obtained from `parse_model`.
pub fn serialize_model(model: &FeatureModel) -> String {
    struct Tree<'a>(&'a FeatureModel);

    impl Tree<'_> {
        fn write(&self, out: &mut String, id: FeatureId, depth: usize) -> fmt::Result {
            let m = self.0;
            for slot in m.slots(id) {
                match slot {
                    Slot::Solitary(c) => {
                        let mark = match m.feature(c).kind {
                            FeatureKind::Mandatory => '!',
                            _ => '?',
                        };
                        writeln!(out, "{:w$}{}{}", "", m.name(c), mark, w = 2 * (depth + 1))?;
                        self.write(out, c, depth + 1)?;
                    }
                    Slot::Group(g) => {
                        let group = m.group(g);
                        writeln!(out, "{:w$}<{}>", "", group.kind, w = 2 * (depth + 1))?;
                        for &member in &group.members {
                            writeln!(out, "{:w$}{}", "", m.name(member), w = 2 * (depth + 2))?;
                            self.write(out, member, depth + 2)?;
                        }
                    }
                }
            }
            Ok(())
        }
    }

    let mut out = String::new();
    out.push_str(model.name(model.root()));
    out.push('\n');
    Tree(model)
        .write(&mut out, model.root(), 0)
        .expect("writing to a String cannot fail");
    if !model.constraints().is_empty() {
        out.push_str("---\n");
        for c in model.constraints() {
            let _ = writeln!(out, "{} {} {}", c.kind, model.name(c.lhs), model.name(c.rhs));
        }
    }
    out
}

//! Arenas for generalised safety/reachability games.
//!
//! A game is a finite directed graph whose vertices are split between the
//! protagonist and the antagonist. Some vertices are *leaves*: they carry an
//! integer payoff and their only outgoing edge is a self-loop. A play that
//! enters a leaf pays that leaf's payoff; a play that never does pays 0.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{syntax, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Player {
    Protagonist,
    Antagonist,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Protagonist => Player::Antagonist,
            Player::Antagonist => Player::Protagonist,
        }
    }
}

/// An immutable, validated game arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameGraph {
    names: Vec<String>,
    owners: Vec<Player>,
    succ: Vec<Vec<VertexId>>,
    payoffs: Vec<Option<i64>>,
    init: VertexId,
    by_name: HashMap<String, VertexId>,
}

impl GameGraph {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId::from)
    }

    pub fn init(&self) -> VertexId {
        self.init
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.owners[v.index()]
    }

    pub fn is_protagonist(&self, v: VertexId) -> bool {
        self.owners[v.index()] == Player::Protagonist
    }

    /// Successors in declaration order.
    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v.index()]
    }

    pub fn has_edge(&self, from: VertexId, to: VertexId) -> bool {
        self.succ[from.index()].contains(&to)
    }

    /// The payoff of `v` if it is a leaf.
    pub fn payoff(&self, v: VertexId) -> Option<i64> {
        self.payoffs[v.index()]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.payoffs[v.index()].is_some()
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(|&v| self.is_leaf(v))
    }

    /// The same arena with a different initial vertex.
    pub fn with_init(&self, init: VertexId) -> GameGraph {
        assert!(init.index() < self.vertex_count());
        GameGraph {
            init,
            ..self.clone()
        }
    }

    /// Payoff of the ultimately periodic play `prefix · cycle^ω`.
    pub fn payoff_of_lasso(&self, play: &Lasso) -> Result<i64> {
        play.validate(self)?;
        // Leaves only loop on themselves, so a cycle touching a leaf is that leaf.
        Ok(play.cycle.iter().find_map(|&v| self.payoff(v)).unwrap_or(0))
    }

    /// Canonical text rendering; `parse_game(render())` reproduces the graph.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for v in self.vertices() {
            let owner = match self.owner(v) {
                Player::Protagonist => "P",
                Player::Antagonist => "A",
            };
            out.push_str(&format!("vertex {} owner={}", self.name(v), owner));
            if let Some(p) = self.payoff(v) {
                out.push_str(&format!(" leaf={p}"));
            }
            out.push('\n');
        }
        for v in self.vertices() {
            for &w in self.successors(v) {
                out.push_str(&format!("edge {} {}\n", self.name(v), self.name(w)));
            }
        }
        out.push_str(&format!("init {}\n", self.name(self.init)));
        out
    }
}

impl fmt::Display for GameGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Incremental construction of a [`GameGraph`]; all invariants are checked in
/// [`GameBuilder::build`].
#[derive(Debug, Default, Clone)]
pub struct GameBuilder {
    names: Vec<String>,
    owners: Vec<Player>,
    payoffs: Vec<Option<i64>>,
    edges: Vec<(VertexId, VertexId)>,
    init: Option<VertexId>,
    by_name: HashMap<String, VertexId>,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: &str, owner: Player, leaf: Option<i64>) -> Result<VertexId> {
        if self.by_name.contains_key(name) {
            return Err(Error::InvalidGame(format!(
                "vertex `{name}` declared twice"
            )));
        }
        let id = VertexId::from(self.names.len());
        self.names.push(name.to_string());
        self.owners.push(owner);
        self.payoffs.push(leaf);
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn edge(&mut self, from: VertexId, to: VertexId) -> &mut Self {
        self.edges.push((from, to));
        self
    }

    pub fn init(&mut self, v: VertexId) -> &mut Self {
        self.init = Some(v);
        self
    }

    pub fn lookup(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    pub fn build(self) -> Result<GameGraph> {
        let n = self.names.len();
        if n == 0 {
            return Err(Error::InvalidGame("no vertices".into()));
        }
        let mut succ = vec![Vec::new(); n];
        for &(from, to) in &self.edges {
            if from.index() >= n || to.index() >= n {
                return Err(Error::InvalidGame(
                    "edge references an unknown vertex".into(),
                ));
            }
            let list: &mut Vec<VertexId> = &mut succ[from.index()];
            if list.contains(&to) {
                return Err(Error::InvalidGame(format!(
                    "duplicate edge {} -> {}",
                    self.names[from.index()],
                    self.names[to.index()]
                )));
            }
            list.push(to);
        }
        for (i, list) in succ.iter().enumerate() {
            let name = &self.names[i];
            if list.is_empty() {
                return Err(Error::InvalidGame(format!(
                    "vertex `{name}` has no successor"
                )));
            }
            if self.payoffs[i].is_some() && list.as_slice() != [VertexId::from(i)] {
                return Err(Error::InvalidGame(format!(
                    "leaf `{name}` must have exactly its self-loop as outgoing edge"
                )));
            }
        }
        let init = self
            .init
            .ok_or_else(|| Error::InvalidGame("missing init".into()))?;
        if init.index() >= n {
            return Err(Error::InvalidGame("init is not a vertex".into()));
        }
        Ok(GameGraph {
            names: self.names,
            owners: self.owners,
            succ,
            payoffs: self.payoffs,
            init,
            by_name: self.by_name,
        })
    }
}

/// Tokens of a line with `#` comments stripped.
pub(crate) fn tokens(line: &str) -> Vec<&str> {
    let line = line.split('#').next().unwrap_or("");
    line.split_whitespace().collect()
}

/// Parses the line-based game format:
///
/// ```text
/// vertex <name> owner=<P|A> [leaf=<int>]
/// edge <from> <to>
/// init <name>
/// ```
///
/// Vertex indices follow declaration order. Declarations may appear in any
/// order relative to the edges that mention them.
pub fn parse_game(text: &str) -> Result<GameGraph> {
    let mut b = GameBuilder::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut init: Option<(usize, String)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some((&kw, args)) = toks.split_first() else {
            continue;
        };
        match kw {
            "vertex" => {
                let (name, attrs) = args
                    .split_first()
                    .ok_or_else(|| syntax(line, "vertex needs a name"))?;
                let mut owner = None;
                let mut leaf = None;
                for attr in attrs {
                    match attr.split_once('=') {
                        Some(("owner", "P")) => owner = Some(Player::Protagonist),
                        Some(("owner", "A")) => owner = Some(Player::Antagonist),
                        Some(("owner", o)) => {
                            return Err(syntax(line, format!("unknown owner `{o}`")))
                        }
                        Some(("leaf", p)) => {
                            leaf = Some(p.parse::<i64>().map_err(|_| {
                                syntax(line, format!("leaf payoff `{p}` is not an integer"))
                            })?)
                        }
                        _ => return Err(syntax(line, format!("unexpected attribute `{attr}`"))),
                    }
                }
                let owner = owner.ok_or_else(|| syntax(line, "vertex needs owner=P or owner=A"))?;
                b.vertex(name, owner, leaf).map_err(|e| match e {
                    Error::InvalidGame(msg) => syntax(line, msg),
                    other => other,
                })?;
            }
            "edge" => match args {
                [from, to] => edges.push((line, from.to_string(), to.to_string())),
                _ => return Err(syntax(line, "edge takes exactly two vertex names")),
            },
            "init" => match args {
                [name] => {
                    if init.is_some() {
                        return Err(syntax(line, "init declared twice"));
                    }
                    init = Some((line, name.to_string()));
                }
                _ => return Err(syntax(line, "init takes exactly one vertex name")),
            },
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }

    for (line, from, to) in edges {
        let f = b.lookup(&from).ok_or_else(|| {
            Error::InvalidGame(format!("line {line}: edge from undeclared vertex `{from}`"))
        })?;
        let t = b.lookup(&to).ok_or_else(|| {
            Error::InvalidGame(format!("line {line}: edge to undeclared vertex `{to}`"))
        })?;
        b.edge(f, t);
    }
    match init {
        Some((line, name)) => {
            let v = b.lookup(&name).ok_or_else(|| {
                Error::InvalidGame(format!(
                    "line {line}: init names undeclared vertex `{name}`"
                ))
            })?;
            b.init(v);
        }
        None => return Err(Error::InvalidGame("missing init".into())),
    }
    b.build()
}

/// An ultimately periodic play `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<VertexId>,
    pub cycle: Vec<VertexId>,
}

impl Lasso {
    pub fn new(prefix: Vec<VertexId>, cycle: Vec<VertexId>) -> Self {
        Lasso { prefix, cycle }
    }

    /// Checks that every consecutive pair, the prefix/cycle junction and the
    /// cycle wrap-around are edges of `g`.
    pub fn validate(&self, g: &GameGraph) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(Error::InvalidPath("empty cycle".into()));
        }
        let n = g.vertex_count();
        if let Some(v) = self
            .prefix
            .iter()
            .chain(&self.cycle)
            .find(|v| v.index() >= n)
        {
            return Err(Error::InvalidPath(format!(
                "vertex index {} out of range",
                v.0
            )));
        }
        let walk: Vec<VertexId> = self
            .prefix
            .iter()
            .chain(&self.cycle)
            .chain(std::iter::once(&self.cycle[0]))
            .copied()
            .collect();
        for pair in walk.windows(2) {
            if !g.has_edge(pair[0], pair[1]) {
                return Err(Error::InvalidPath(format!(
                    "{} -> {} is not an edge",
                    g.name(pair[0]),
                    g.name(pair[1])
                )));
            }
        }
        Ok(())
    }
}

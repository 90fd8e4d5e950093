//! Graph representation, seeded `G(n,p)` sampling, and edge-list text I/O.
//!
//! Graphs are simple and undirected on vertices `0..n`. Adjacency is stored
//! as `n` packed 64-bit rows so that neighbourhood queries are masked row
//! scans; a graph is immutable once built and safe to share across threads.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Seed for [`sample_gnp`].
///
/// Identical seed and parameters yield a bit-identical graph on every
/// platform: the sampler is ChaCha8 keyed by the SplitMix64 expansion of
/// `value` (`SeedableRng::seed_from_u64`), consuming exactly one 53-bit
/// uniform draw per vertex pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

/// Errors from graph construction and sampling.
#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("edge probability {0} is not in [0, 1]")]
    BadProbability(f64),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
}

/// What went wrong on one line of an edge-list stream.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected header \"n m\"")]
    BadHeader,
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("expected edge line \"u v\"")]
    BadEdge,
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop {0} {0} is not allowed")]
    Loop(usize),
    #[error("edge endpoints must satisfy u < v")]
    Unordered,
    #[error("duplicate edge {u} {v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("expected {expected} edges, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("read failed: {0}")]
    Io(String),
}

/// Edge-list parse error carrying the 1-based line number it occurred on.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// Simple undirected graph with adjacency in packed 64-bit rows.
///
/// Invariants: the bit matrix is symmetric with a zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words_per_row: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let words_per_row = n.div_ceil(64);
        Ok(Self {
            n,
            words_per_row,
            rows: vec![0u64; n * words_per_row],
        })
    }

    /// Complete graph on `n >= 1` vertices.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for u in 0..n {
            for v in (u + 1)..n {
                g.set_edge(u, v);
            }
        }
        Ok(g)
    }

    /// Builds a graph from an explicit edge list (either endpoint order;
    /// duplicates are merged). Rejects loops and out-of-range vertices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let w = self.words_per_row;
        self.rows[u * w + v / 64] |= 1u64 << (v % 64);
        self.rows[v * w + u / 64] |= 1u64 << (u % 64);
    }

    /// Number of vertices.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of 64-bit words in each adjacency row.
    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    /// The packed adjacency row of vertex `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        let w = self.words_per_row;
        &self.rows[v * w..(v + 1) * w]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 != 0
    }

    /// Degree of `v`.
    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Maximum degree over all vertices (0 for the edgeless graph).
    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Number of unordered adjacent pairs.
    pub fn edge_count(&self) -> usize {
        let total: usize = self.rows.iter().map(|w| w.count_ones() as usize).sum();
        total / 2
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }

    /// True iff `v` has a neighbour inside the vertex set given as a packed
    /// bit mask of `words_per_row()` words.
    #[inline]
    pub fn neighbour_in_mask(&self, v: usize, mask: &[u64]) -> bool {
        debug_assert_eq!(mask.len(), self.words_per_row);
        self.row(v).iter().zip(mask).any(|(a, b)| a & b != 0)
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbours(u)
                .skip_while(move |&v| v <= u)
                .map(move |v| (u, v))
        })
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn relabelled(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let edges: Vec<(usize, usize)> =
            self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Self::from_edges(self.n, &edges)
    }
}

/// Iterates set bit positions of a packed mask in increasing order.
pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        std::iter::successors(
            if w == 0 { None } else { Some(w) },
            |&rest| {
                let rest = rest & (rest - 1);
                if rest == 0 {
                    None
                } else {
                    Some(rest)
                }
            },
        )
        .map(move |rest| i * 64 + rest.trailing_zeros() as usize)
    })
}

/// Samples `G(n,p)`: each of the `C(n,2)` vertex pairs becomes an edge
/// independently with probability `p`.
///
/// Pairs `(u, v)` with `u < v` are visited in lexicographic order and each
/// consumes one uniform draw `x` in `[0,1)` from a ChaCha8 stream seeded by
/// `seed`; the edge is present iff `x < p`. This makes samples reproducible
/// across platforms and re-implementable from the stream description alone.
pub fn sample_gnp(n: usize, p: f64, seed: Seed) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::BadProbability(p));
    }
    let mut g = Graph::empty(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                g.set_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Reads the edge-list text format: a header line `n m`, then `m` lines
/// `u v` with `0 <= u < v < n`. Lines starting with `#` and blank lines are
/// ignored. Duplicate edges, loops, unordered pairs, and out-of-range
/// vertices are rejected with the offending line number.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut g: Option<Graph> = None;
    let mut found = 0usize;
    let mut line_no = 0usize;

    for line in reader.lines() {
        line_no += 1;
        let line = line.map_err(|e| ParseError {
            line: line_no,
            kind: ParseErrorKind::Io(e.to_string()),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |kind| ParseError { line: line_no, kind };

        match header {
            None => {
                let (n, m) = parse_pair(line).ok_or_else(|| err(ParseErrorKind::BadHeader))?;
                if n == 0 {
                    return Err(err(ParseErrorKind::NoVertices));
                }
                header = Some((n, m));
                g = Some(Graph::empty(n).expect("n >= 1 checked above"));
            }
            Some((n, m)) => {
                let (u, v) = parse_pair(line).ok_or_else(|| err(ParseErrorKind::BadEdge))?;
                if u >= n {
                    return Err(err(ParseErrorKind::VertexOutOfRange { vertex: u, n }));
                }
                if v >= n {
                    return Err(err(ParseErrorKind::VertexOutOfRange { vertex: v, n }));
                }
                if u == v {
                    return Err(err(ParseErrorKind::Loop(u)));
                }
                if u > v {
                    return Err(err(ParseErrorKind::Unordered));
                }
                let graph = g.as_mut().expect("graph exists once header is read");
                if graph.has_edge(u, v) {
                    return Err(err(ParseErrorKind::DuplicateEdge { u, v }));
                }
                found += 1;
                if found > m {
                    return Err(err(ParseErrorKind::EdgeCountMismatch {
                        expected: m,
                        found,
                    }));
                }
                graph.set_edge(u, v);
            }
        }
    }

    let (_, m) = header.ok_or(ParseError {
        line: line_no + 1,
        kind: ParseErrorKind::BadHeader,
    })?;
    if found != m {
        return Err(ParseError {
            line: line_no + 1,
            kind: ParseErrorKind::EdgeCountMismatch {
                expected: m,
                found,
            },
        });
    }
    Ok(g.expect("graph exists once header is read"))
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Writes the canonical edge-list text: header `n m`, then the edges sorted
/// lexicographically. `read_edge_list(write_edge_list(g)) == g`.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Renders the canonical edge-list text to a string.
pub fn edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge list text is ASCII")
}

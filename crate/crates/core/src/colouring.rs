//! Colourings, neighbourhood colour sets, validity checks, and the block
//! construction that set-colours `G(n,p)` with `~ r lg n` colours.
//!
//! Colour identifiers run from 1 to `k`. A colouring is *proper* if adjacent
//! vertices differ in colour, and a *set colouring* if adjacent vertices
//! differ in neighbourhood colour set; every proper colouring is a set
//! colouring.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::graph::Graph;
use crate::theory::{self, TheoryError};

#[derive(Debug, Error, PartialEq)]
pub enum ColouringError {
    #[error("colouring has {got} entries for a graph on {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("colour {colour} at vertex {vertex} is outside 1..={k}")]
    ColourOutOfRange { vertex: usize, colour: u32, k: u32 },
    #[error("colouring needs at least one vertex and one colour")]
    Empty,
    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("construction needs {required} block vertices but the graph has only {available}")]
    Infeasible { required: u64, available: u64 },
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// What went wrong on one line of a colouring stream.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColouringParseErrorKind {
    #[error("expected header \"n k\"")]
    BadHeader,
    #[error("expected assignment line \"v c\"")]
    BadAssignment,
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("colour {colour} is outside 1..={k}")]
    ColourOutOfRange { colour: u32, k: u32 },
    #[error("vertex {0} assigned twice")]
    DuplicateVertex(usize),
    #[error("vertex {0} has no assignment")]
    MissingVertex(usize),
    #[error("read failed: {0}")]
    Io(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ColouringParseError {
    pub line: usize,
    pub kind: ColouringParseErrorKind,
}

/// Total assignment of colours `1..=k` to vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    colours: Vec<u32>,
    k: u32,
}

impl Colouring {
    /// Validates that every entry lies in `1..=k` and `k >= 1`.
    pub fn new(colours: Vec<u32>, k: u32) -> Result<Self, ColouringError> {
        if k == 0 || colours.is_empty() {
            return Err(ColouringError::Empty);
        }
        for (vertex, &colour) in colours.iter().enumerate() {
            if colour == 0 || colour > k {
                return Err(ColouringError::ColourOutOfRange { vertex, colour, k });
            }
        }
        Ok(Self { colours, k })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.colours.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    /// Number of colours `k`.
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Colour of vertex `v`.
    #[inline]
    pub fn colour(&self, v: usize) -> u32 {
        self.colours[v]
    }

    #[inline]
    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    /// Size of each colour class, indexed by colour `1..=k` at `[colour-1]`.
    pub fn class_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.k as usize];
        for &c in &self.colours {
            sizes[(c - 1) as usize] += 1;
        }
        sizes
    }

    /// Applies a colour relabelling: colour `c` becomes `perm[c-1]`, which
    /// must be a permutation of `1..=k`.
    pub fn relabelled(&self, perm: &[u32]) -> Result<Self, ColouringError> {
        if perm.len() != self.k as usize {
            return Err(ColouringError::NotAPermutation(self.k as usize));
        }
        let mut seen = vec![false; self.k as usize];
        for &c in perm {
            if c == 0 || c > self.k || seen[(c - 1) as usize] {
                return Err(ColouringError::NotAPermutation(self.k as usize));
            }
            seen[(c - 1) as usize] = true;
        }
        let colours = self
            .colours
            .iter()
            .map(|&c| perm[(c - 1) as usize])
            .collect();
        Self::new(colours, self.k)
    }
}

/// Set of colours seen in a vertex's neighbourhood, packed as `k` bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColourSet {
    bits: Vec<u64>,
}

impl ColourSet {
    fn empty(k: u32) -> Self {
        Self {
            bits: vec![0u64; (k as usize).div_ceil(64)],
        }
    }

    #[inline]
    fn insert(&mut self, colour: u32) {
        let i = (colour - 1) as usize;
        self.bits[i / 64] |= 1u64 << (i % 64);
    }

    /// Whether `colour` appears in the set.
    pub fn contains(&self, colour: u32) -> bool {
        let i = (colour - 1) as usize;
        self.bits[i / 64] >> (i % 64) & 1 != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Colours present, in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        crate::graph::iter_bits(&self.bits).map(|i| i as u32 + 1)
    }
}

fn check_lengths(g: &Graph, c: &Colouring) -> Result<(), ColouringError> {
    if c.len() != g.n() {
        return Err(ColouringError::LengthMismatch {
            expected: g.n(),
            got: c.len(),
        });
    }
    Ok(())
}

/// Neighbourhood colour set of every vertex: entry `v` holds exactly the
/// colours appearing on `v`'s neighbours (empty for isolated vertices).
///
/// Computed as masked row scans: one packed vertex mask per colour class,
/// intersected against each adjacency row.
pub fn neighbourhood_colour_sets(
    g: &Graph,
    c: &Colouring,
) -> Result<Vec<ColourSet>, ColouringError> {
    check_lengths(g, c)?;
    let n = g.n();
    let k = c.k() as usize;
    let w = g.words_per_row();

    let mut class_masks = vec![0u64; k * w];
    for v in 0..n {
        let colour = (c.colour(v) - 1) as usize;
        class_masks[colour * w + v / 64] |= 1u64 << (v % 64);
    }

    let mut sets = Vec::with_capacity(n);
    for v in 0..n {
        let mut set = ColourSet::empty(c.k());
        for colour in 0..k {
            if g.neighbour_in_mask(v, &class_masks[colour * w..(colour + 1) * w]) {
                set.insert(colour as u32 + 1);
            }
        }
        sets.push(set);
    }
    Ok(sets)
}

/// Outcome of a validity check: valid, or the lexicographically smallest
/// violating edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid { u: usize, v: usize },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Valid => write!(f, "VALID"),
            Verdict::Invalid { u, v } => write!(f, "INVALID {u} {v}"),
        }
    }
}

/// Checks the set-colouring condition: every edge `uv` must have
/// `C(u) != C(v)`.
pub fn is_set_colouring(g: &Graph, c: &Colouring) -> Result<Verdict, ColouringError> {
    let sets = neighbourhood_colour_sets(g, c)?;
    for (u, v) in g.edges() {
        if sets[u] == sets[v] {
            return Ok(Verdict::Invalid { u, v });
        }
    }
    Ok(Verdict::Valid)
}

/// Checks the proper-colouring condition: adjacent vertices differ in colour.
pub fn is_proper_colouring(g: &Graph, c: &Colouring) -> Result<Verdict, ColouringError> {
    check_lengths(g, c)?;
    for (u, v) in g.edges() {
        if c.colour(u) == c.colour(v) {
            return Ok(Verdict::Invalid { u, v });
        }
    }
    Ok(Verdict::Valid)
}

/// First-fit proper colouring along the given vertex order: each vertex
/// takes the smallest colour absent from its already-coloured neighbours.
/// Uses at most `max_degree + 1` colours.
pub fn greedy_proper_colouring(g: &Graph, order: &[usize]) -> Result<Colouring, ColouringError> {
    let n = g.n();
    if order.len() != n {
        return Err(ColouringError::NotAPermutation(n));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return Err(ColouringError::NotAPermutation(n));
        }
        seen[v] = true;
    }

    let mut colours = vec![0u32; n];
    let mut k = 1u32;
    let mut used = Vec::new();
    for &v in order {
        used.clear();
        used.resize(g.degree(v) + 2, false);
        for u in g.neighbours(v) {
            let c = colours[u] as usize;
            if c != 0 && c < used.len() {
                used[c] = true;
            }
        }
        let colour = (1..used.len())
            .find(|&c| !used[c])
            .expect("first-fit always finds a colour among deg+1 candidates")
            as u32;
        colours[v] = colour;
        k = k.max(colour);
    }
    Colouring::new(colours, k)
}

/// Parameters of the block construction: the slack `omega` added to the
/// block count, and the edge probability the class size and block count are
/// derived from.
#[derive(Clone, Copy, Debug)]
pub struct ConstructiveParams {
    pub omega: u32,
    pub p: f64,
}

/// Shape of the block construction at `(n, p, omega)`: the class size
/// `ell0`, the number of blocks `B = ceil(r_upper lg n + omega)`, and the
/// total colour count `B + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructiveShape {
    pub ell0: u64,
    pub blocks: u64,
    pub colours: u64,
}

/// Computes the block-construction shape without touching any graph.
///
/// The exponent `r_upper(n, p) * lg n` is evaluated in one step as
/// `lg(n^2 p) / lg(1/s)`, keeping it exact at powers of two instead of
/// round-tripping through the quotient `r_upper`.
pub fn constructive_shape(
    n: u64,
    p: f64,
    omega: u32,
) -> Result<ConstructiveShape, ColouringError> {
    let (s, ell0) = theory::s_and_ell0(p)?;
    let nf = n as f64;
    let n2p = nf * nf * p;
    if n2p <= 1.0 {
        return Err(TheoryError::UpperRUndefined(n2p).into());
    }
    let r_lg_n = n2p.log2() / -s.log2();
    let blocks = (r_lg_n + omega as f64).ceil() as u64;
    Ok(ConstructiveShape {
        ell0,
        blocks,
        colours: blocks + 1,
    })
}

/// The block set colouring: vertices `0 .. B*ell0` are grouped consecutively
/// into `B` blocks of size `ell0`, block `b` coloured `b + 1`; all remaining
/// vertices share the extra colour `B + 1`.
///
/// The partition depends only on `(n, p, omega)`, never on the edges, so the
/// same parameters give the same colouring on every graph of that order.
/// Fails as infeasible when `B * ell0 > n`.
pub fn constructive_set_colouring(
    g: &Graph,
    params: &ConstructiveParams,
) -> Result<Colouring, ColouringError> {
    let n = g.n() as u64;
    let shape = constructive_shape(n, params.p, params.omega)?;
    let required = shape.blocks.checked_mul(shape.ell0).ok_or(
        ColouringError::Infeasible {
            required: u64::MAX,
            available: n,
        },
    )?;
    if required > n {
        return Err(ColouringError::Infeasible {
            required,
            available: n,
        });
    }
    let mut colours = vec![(shape.blocks + 1) as u32; g.n()];
    for (v, colour) in colours.iter_mut().enumerate().take(required as usize) {
        *colour = (v as u64 / shape.ell0 + 1) as u32;
    }
    Colouring::new(colours, (shape.blocks + 1) as u32)
}

/// First-moment numerator for the failure probability of the block
/// construction: `C(n,2) * p * s^(r lg n + omega - 2)`, with the exponent
/// using the exact (unrounded) `r_upper lg n`.
///
/// When `r_upper` solves its defining identity exactly this is
/// `(1 - 1/n) * s^(omega - 2) / 2`; each increment of `omega` multiplies the
/// value by `s`.
pub fn expected_undistinguished_pairs(n: u64, p: f64, omega: u32) -> Result<f64, ColouringError> {
    let (s, _) = theory::s_and_ell0(p)?;
    let nf = n as f64;
    let n2p = nf * nf * p;
    if n2p <= 1.0 {
        return Err(TheoryError::UpperRUndefined(n2p).into());
    }
    let r_lg_n = n2p.log2() / -s.log2();
    let pairs = nf * (nf - 1.0) / 2.0;
    Ok(pairs * p * s.powf(r_lg_n + omega as f64 - 2.0))
}

/// Reads the colouring text format: header `n k`, then `n` lines `v c`.
/// Lines starting with `#` and blank lines are ignored; every vertex must be
/// assigned exactly once.
pub fn read_colouring<R: BufRead>(reader: R) -> Result<Colouring, ColouringParseError> {
    let mut header: Option<(usize, u32)> = None;
    let mut colours: Vec<u32> = Vec::new();
    let mut line_no = 0usize;

    for line in reader.lines() {
        line_no += 1;
        let line = line.map_err(|e| ColouringParseError {
            line: line_no,
            kind: ColouringParseErrorKind::Io(e.to_string()),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |kind| ColouringParseError { line: line_no, kind };

        let mut it = line.split_ascii_whitespace();
        let a = it.next();
        let b = it.next();
        let extra = it.next();
        match header {
            None => {
                let (Some(a), Some(b), None) = (a, b, extra) else {
                    return Err(err(ColouringParseErrorKind::BadHeader));
                };
                let n: usize = a
                    .parse()
                    .map_err(|_| err(ColouringParseErrorKind::BadHeader))?;
                let k: u32 = b
                    .parse()
                    .map_err(|_| err(ColouringParseErrorKind::BadHeader))?;
                if n == 0 || k == 0 {
                    return Err(err(ColouringParseErrorKind::BadHeader));
                }
                header = Some((n, k));
                colours = vec![0u32; n];
            }
            Some((n, k)) => {
                let (Some(a), Some(b), None) = (a, b, extra) else {
                    return Err(err(ColouringParseErrorKind::BadAssignment));
                };
                let v: usize = a
                    .parse()
                    .map_err(|_| err(ColouringParseErrorKind::BadAssignment))?;
                let colour: u32 = b
                    .parse()
                    .map_err(|_| err(ColouringParseErrorKind::BadAssignment))?;
                if v >= n {
                    return Err(err(ColouringParseErrorKind::VertexOutOfRange {
                        vertex: v,
                        n,
                    }));
                }
                if colour == 0 || colour > k {
                    return Err(err(ColouringParseErrorKind::ColourOutOfRange { colour, k }));
                }
                if colours[v] != 0 {
                    return Err(err(ColouringParseErrorKind::DuplicateVertex(v)));
                }
                colours[v] = colour;
            }
        }
    }

    let Some((_, k)) = header else {
        return Err(ColouringParseError {
            line: line_no + 1,
            kind: ColouringParseErrorKind::BadHeader,
        });
    };
    if let Some(v) = colours.iter().position(|&c| c == 0) {
        return Err(ColouringParseError {
            line: line_no + 1,
            kind: ColouringParseErrorKind::MissingVertex(v),
        });
    }
    Ok(Colouring::new(colours, k).expect("entries validated during parse"))
}

/// Writes the colouring text format: header `n k`, then `v c(v)` per vertex.
pub fn write_colouring<W: Write>(c: &Colouring, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", c.len(), c.k())?;
    for (v, &colour) in c.colours().iter().enumerate() {
        writeln!(out, "{v} {colour}")?;
    }
    Ok(())
}

/// Renders the colouring text to a string.
pub fn colouring_string(c: &Colouring) -> String {
    let mut buf = Vec::new();
    write_colouring(c, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("colouring text is ASCII")
}

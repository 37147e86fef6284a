//! Orders of constituents and the permutahedron they live on.
//!
//! An [`Order`] is a permutation of the symbols of an [`Alphabet`]. Two orders
//! are neighbours in the [`Permutahedron`] when one is obtained from the other
//! by swapping two adjacent constituents, so the swap distance between orders
//! is their shortest-path distance in that graph. For three constituents the
//! graph is a hexagon, which is also where the rotation view is defined.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest alphabet for which all `n!` orders are enumerated.
pub const MAX_ENUMERATED_ARITY: usize = 7;

/// A single constituent label, e.g. `S`, `O` or `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constituent(pub char);

impl fmt::Display for Constituent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The declared sequence of distinct constituent symbols.
///
/// The declaration order matters: it is the identity order, it fixes the
/// lexicographic enumeration of orders and it orients the ring for `n = 3`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        if symbols.len() > u8::MAX as usize {
            return Err(Error::InvalidAlphabet("too many symbols".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if c.is_whitespace() || *c == ',' || *c == '<' {
                return Err(Error::InvalidAlphabet(format!("symbol {c:?} is reserved")));
            }
            if symbols[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Self { symbols })
    }

    /// Subject, object, verb.
    pub fn sov() -> Self {
        Self {
            symbols: vec!['S', 'O', 'V'],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    pub fn contains(&self, c: Constituent) -> bool {
        self.index_of(c.0).is_some()
    }

    /// Parses an order written as a string of symbols, e.g. `"SOV"`.
    pub fn order(self: &Arc<Self>, text: &str) -> Result<Order> {
        Order::parse_in(self, text)
    }

    /// All `n!` orders in lexicographic order of symbol index.
    ///
    /// For the default alphabet this yields SOV, SVO, OSV, OVS, VSO, VOS.
    pub fn orders(self: &Arc<Self>) -> Result<Vec<Order>> {
        let n = self.len();
        check_enumerable(n)?;
        let mut seq: Vec<u8> = (0..n as u8).collect();
        let mut out = Vec::with_capacity(factorial(n));
        loop {
            out.push(Order {
                alphabet: Arc::clone(self),
                seq: seq.clone(),
            });
            if !next_permutation(&mut seq) {
                break;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn check_enumerable(n: usize) -> Result<()> {
    if !(2..=MAX_ENUMERATED_ARITY).contains(&n) {
        return Err(Error::Size {
            what: "permutahedron",
            size: n,
            min: 2,
            max: MAX_ENUMERATED_ARITY,
        });
    }
    Ok(())
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Advances `seq` to its lexicographic successor. Returns `false` (leaving the
/// slice sorted ascending) once the last permutation has been passed.
pub(crate) fn next_permutation<T: Ord>(seq: &mut [T]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        seq.reverse();
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// An arrangement of every constituent of an alphabet exactly once.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order {
    alphabet: Arc<Alphabet>,
    seq: Vec<u8>,
}

impl Order {
    /// Parses `text` against the default S/O/V alphabet when it uses exactly
    /// those symbols, otherwise against an alphabet declared by `text` itself.
    pub fn parse(text: &str) -> Result<Self> {
        let sov = Arc::new(Alphabet::sov());
        if text.chars().count() == 3 && text.chars().all(|c| sov.index_of(c).is_some()) {
            return Self::parse_in(&sov, text);
        }
        let alphabet = Arc::new(
            Alphabet::new(text.chars()).map_err(|e| Error::InvalidOrder {
                order: text.to_string(),
                reason: e.to_string(),
            })?,
        );
        Self::parse_in(&alphabet, text)
    }

    pub fn parse_in(alphabet: &Arc<Alphabet>, text: &str) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidOrder {
            order: text.to_string(),
            reason,
        };
        let mut seq = Vec::with_capacity(alphabet.len());
        let mut seen = vec![false; alphabet.len()];
        for c in text.trim().chars() {
            let i = alphabet
                .index_of(c)
                .ok_or_else(|| invalid(format!("{c:?} is not in alphabet {alphabet}")))?;
            if seen[i] {
                return Err(invalid(format!("{c:?} appears more than once")));
            }
            seen[i] = true;
            seq.push(i as u8);
        }
        if seq.len() != alphabet.len() {
            return Err(invalid(format!(
                "expected {} constituents, got {}",
                alphabet.len(),
                seq.len()
            )));
        }
        Ok(Self {
            alphabet: Arc::clone(alphabet),
            seq,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn symbol_at(&self, position: usize) -> char {
        self.alphabet.symbols[self.seq[position] as usize]
    }

    pub fn position_of(&self, c: Constituent) -> Option<usize> {
        let idx = self.alphabet.index_of(c.0)? as u8;
        self.seq.iter().position(|&s| s == idx)
    }

    /// The order obtained by swapping positions `i` and `i + 1`.
    pub fn swapped(&self, i: usize) -> Order {
        let mut seq = self.seq.clone();
        seq.swap(i, i + 1);
        Order {
            alphabet: Arc::clone(&self.alphabet),
            seq,
        }
    }

    pub fn reversed(&self) -> Order {
        let mut seq = self.seq.clone();
        seq.reverse();
        Order {
            alphabet: Arc::clone(&self.alphabet),
            seq,
        }
    }

    /// Permutation parity (number of inversions mod 2) relative to the
    /// alphabet's declared order.
    pub fn parity(&self) -> usize {
        inversions(&self.seq) % 2
    }

    fn ensure_same_alphabet(&self, other: &Order) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: other.alphabet.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.seq.len() {
            write!(f, "{}", self.symbol_at(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Order({self})")
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Order::parse(s)
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn inversions(seq: &[u8]) -> usize {
    let mut count = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                count += 1;
            }
        }
    }
    count
}

/// Minimum number of adjacent swaps turning `a` into `b`.
///
/// Counted as the inversions of `a` written in `b`'s coordinates.
pub fn swap_distance(a: &Order, b: &Order) -> Result<usize> {
    a.ensure_same_alphabet(b)?;
    let mut pos_in_b = vec![0u8; b.len()];
    for (pos, &sym) in b.seq.iter().enumerate() {
        pos_in_b[sym as usize] = pos as u8;
    }
    let relabelled: Vec<u8> = a.seq.iter().map(|&s| pos_in_b[s as usize]).collect();
    Ok(inversions(&relabelled))
}

/// `(n - 1) - position of head`: 0 when the head is last.
pub fn head_distance_to_end(order: &Order, head: Constituent) -> Result<usize> {
    let pos = order
        .position_of(head)
        .ok_or(Error::UnknownConstituent(head.0))?;
    Ok(order.len() - 1 - pos)
}

/// 0 for the canonical order, 1 for every other order.
pub fn canonical_indicator(order: &Order, canonical: &Order) -> Result<u8> {
    order.ensure_same_alphabet(canonical)?;
    Ok(u8::from(order != canonical))
}

/// The ring for three constituents: starting at the identity order it
/// alternately swaps the last two and the first two constituents.
/// For S/O/V this is SOV, SVO, VSO, VOS, OVS, OSV.
pub fn ring(alphabet: &Arc<Alphabet>) -> Result<Vec<Order>> {
    if alphabet.len() != 3 {
        return Err(Error::UnsupportedArity {
            expected: 3,
            found: alphabet.len(),
        });
    }
    let mut current = Order {
        alphabet: Arc::clone(alphabet),
        seq: vec![0, 1, 2],
    };
    let mut cycle = Vec::with_capacity(6);
    for step in 0..6 {
        cycle.push(current.clone());
        current = current.swapped(if step % 2 == 0 { 1 } else { 0 });
    }
    Ok(cycle)
}

/// Signed rotation (degrees) that carries `order` onto `canonical` on the ring.
///
/// Anticlockwise is positive. The antipodal order is reported as `+180`.
/// `|angle| / 60` equals the swap distance.
pub fn rotation_angle(order: &Order, canonical: &Order) -> Result<i32> {
    order.ensure_same_alphabet(canonical)?;
    let cycle = ring(order.alphabet())?;
    let step = ring_step(&cycle, canonical, order);
    Ok(if step <= 3 {
        60 * step as i32
    } else {
        -60 * (6 - step) as i32
    })
}

fn ring_step(cycle: &[Order], from: &Order, to: &Order) -> usize {
    let i = cycle.iter().position(|o| o == from).expect("order on ring");
    let j = cycle.iter().position(|o| o == to).expect("order on ring");
    (j + 6 - i) % 6
}

/// Orders grouped by swap distance from `canonical`, cheapest first.
///
/// Within a level, orders are listed anticlockwise along the ring for
/// three constituents and lexicographically otherwise.
pub fn predicted_cost_levels(canonical: &Order) -> Result<Vec<Vec<Order>>> {
    let orders = canonical.alphabet().orders()?;
    let max = canonical.len() * (canonical.len() - 1) / 2;
    let mut levels: Vec<Vec<Order>> = vec![Vec::new(); max + 1];
    let cycle = if canonical.len() == 3 {
        Some(ring(canonical.alphabet())?)
    } else {
        None
    };
    let mut orders = orders;
    if let Some(cycle) = &cycle {
        orders.sort_by_key(|o| ring_step(cycle, canonical, o));
    }
    for order in orders {
        let d = swap_distance(&order, canonical)?;
        levels[d].push(order);
    }
    levels.retain(|l| !l.is_empty());
    Ok(levels)
}

/// Formats levels as `SOV < SVO, OSV < VSO, OVS < VOS`.
pub fn format_levels(levels: &[Vec<Order>]) -> String {
    levels
        .iter()
        .map(|level| {
            level
                .iter()
                .map(Order::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect::<Vec<_>>()
        .join(" < ")
}

/// Rank labelling of orders: 1 for the first visited, and so on.
pub type RankLabeling = BTreeMap<Order, usize>;

/// Every traversal of the ring from `canonical` that visits its BFS layers in
/// order, as rank labellings. There are `prod(layer_size!)` of them, 4 for
/// three constituents.
pub fn bfs_rank_labelings(canonical: &Order) -> Result<Vec<RankLabeling>> {
    if canonical.len() != 3 {
        return Err(Error::UnsupportedArity {
            expected: 3,
            found: canonical.len(),
        });
    }
    let graph = Permutahedron::build(canonical.alphabet())?;
    let source = graph.index_of(canonical).expect("canonical is a vertex");
    let dist = graph.bfs_distances(source);
    let depth = dist.iter().copied().max().unwrap_or(0);
    let layers: Vec<Vec<usize>> = (0..=depth)
        .map(|l| (0..dist.len()).filter(|&v| dist[v] == l).collect())
        .collect();

    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(dist.len());
    expand_layers(&layers, 0, &mut prefix, &mut |visit| {
        out.push(
            visit
                .iter()
                .enumerate()
                .map(|(rank, &v)| (graph.vertices[v].clone(), rank + 1))
                .collect(),
        );
    });
    Ok(out)
}

fn expand_layers(
    layers: &[Vec<usize>],
    layer: usize,
    prefix: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if layer == layers.len() {
        emit(prefix);
        return;
    }
    let mut members = layers[layer].clone();
    members.sort_unstable();
    loop {
        let keep = prefix.len();
        prefix.extend_from_slice(&members);
        expand_layers(layers, layer + 1, prefix, emit);
        prefix.truncate(keep);
        if !next_permutation(&mut members) {
            break;
        }
    }
}

/// Whether `labeling` ranks the ring's orders in breadth-first layer order
/// from `canonical`.
pub fn is_bfs_labeling(labeling: &RankLabeling, canonical: &Order) -> Result<bool> {
    if canonical.len() != 3 {
        return Err(Error::UnsupportedArity {
            expected: 3,
            found: canonical.len(),
        });
    }
    let orders = canonical.alphabet().orders()?;
    if labeling.len() != orders.len() || orders.iter().any(|o| !labeling.contains_key(o)) {
        return Ok(false);
    }
    let mut ranks: Vec<usize> = labeling.values().copied().collect();
    ranks.sort_unstable();
    if ranks != (1..=orders.len()).collect::<Vec<_>>() {
        return Ok(false);
    }
    let mut by_rank: Vec<(usize, usize)> = Vec::with_capacity(orders.len());
    for (order, &rank) in labeling {
        by_rank.push((rank, swap_distance(order, canonical)?));
    }
    by_rank.sort_unstable();
    Ok(by_rank.windows(2).all(|w| w[0].1 <= w[1].1))
}

/// The Cayley graph of the symmetric group under adjacent transpositions.
#[derive(Debug, Clone)]
pub struct Permutahedron {
    alphabet: Arc<Alphabet>,
    vertices: Vec<Order>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Permutahedron {
    pub fn build(alphabet: &Arc<Alphabet>) -> Result<Self> {
        let vertices = alphabet.orders()?;
        let index: HashMap<&Order, usize> =
            vertices.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let mut edges = Vec::new();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (u, order) in vertices.iter().enumerate() {
            for i in 0..order.len() - 1 {
                let v = index[&order.swapped(i)];
                adjacency[u].push(v);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Ok(Self {
            alphabet: Arc::clone(alphabet),
            vertices,
            edges,
            adjacency,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn vertices(&self) -> &[Order] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn index_of(&self, order: &Order) -> Option<usize> {
        self.vertices.iter().position(|o| o == order)
    }

    /// Edge-count distance from `source` to every vertex.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertices.len()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Per-vertex measure values for `canonical` and `head`.
    pub fn annotate(&self, canonical: &Order, head: Constituent) -> Result<Vec<VertexAnnotation>> {
        self.vertices
            .iter()
            .map(|order| {
                Ok(VertexAnnotation {
                    order: order.clone(),
                    d: swap_distance(order, canonical)?,
                    p: head_distance_to_end(order, head)?,
                    c: canonical_indicator(order, canonical)?,
                    rotation: if order.len() == 3 {
                        Some(rotation_angle(order, canonical)?)
                    } else {
                        None
                    },
                })
            })
            .collect()
    }

    /// Graphviz rendering: one `a -- b;` line per edge, preceded by one
    /// attribute line per vertex when annotations are given.
    pub fn to_dot(&self, annotations: Option<&[VertexAnnotation]>) -> String {
        let mut out = String::from("graph permutahedron {\n");
        if let Some(annotations) = annotations {
            for a in annotations {
                out.push_str(&format!("  {} [d={}, p={}, c={}", a.order, a.d, a.p, a.c));
                if let Some(r) = a.rotation {
                    out.push_str(&format!(", rotation={r}"));
                }
                out.push_str("];\n");
            }
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!(
                "  {} -- {};\n",
                self.vertices[u], self.vertices[v]
            ));
        }
        out.push_str("}\n");
        out
    }

    /// `{"vertices": [...], "edges": [[a, b], ...]}`, plus a `"measures"`
    /// array when annotations are given.
    pub fn to_json(&self, annotations: Option<&[VertexAnnotation]>) -> serde_json::Value {
        let vertices: Vec<String> = self.vertices.iter().map(Order::to_string).collect();
        let edges: Vec<[String; 2]> = self
            .edges
            .iter()
            .map(|&(u, v)| [vertices[u].clone(), vertices[v].clone()])
            .collect();
        let mut value = serde_json::json!({ "vertices": vertices, "edges": edges });
        if let Some(annotations) = annotations {
            value["measures"] = serde_json::to_value(annotations).expect("serializable");
        }
        value
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexAnnotation {
    pub order: Order,
    pub d: usize,
    pub p: usize,
    pub c: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<i32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MeasureKind {
    /// Swap distance to the canonical order (`d`).
    Swap,
    /// Distance of the head to the end of the order (`p`).
    HeadToEnd,
    /// 0 for the canonical order and 1 otherwise (`c`).
    CanonicalIndicator,
}

impl MeasureKind {
    pub fn symbol(self) -> &'static str {
        match self {
            MeasureKind::Swap => "d",
            MeasureKind::HeadToEnd => "p",
            MeasureKind::CanonicalIndicator => "c",
        }
    }
}

/// A distance of every order to a reference, used as the predictor in the
/// correlation tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMeasure {
    kind: MeasureKind,
    canonical: Order,
    head: Constituent,
}

impl DistanceMeasure {
    pub fn new(kind: MeasureKind, canonical: Order, head: Constituent) -> Result<Self> {
        if !canonical.alphabet().contains(head) {
            return Err(Error::UnknownConstituent(head.0));
        }
        Ok(Self {
            kind,
            canonical,
            head,
        })
    }

    /// `d`, `p` and `c` for the given canonical order and head.
    pub fn standard(canonical: &Order, head: Constituent) -> Result<[DistanceMeasure; 3]> {
        Ok([
            Self::new(MeasureKind::Swap, canonical.clone(), head)?,
            Self::new(MeasureKind::HeadToEnd, canonical.clone(), head)?,
            Self::new(MeasureKind::CanonicalIndicator, canonical.clone(), head)?,
        ])
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn canonical(&self) -> &Order {
        &self.canonical
    }

    pub fn head(&self) -> Constituent {
        self.head
    }

    pub fn symbol(&self) -> &'static str {
        self.kind.symbol()
    }

    pub fn value(&self, order: &Order) -> Result<usize> {
        match self.kind {
            MeasureKind::Swap => swap_distance(order, &self.canonical),
            MeasureKind::HeadToEnd => {
                order.ensure_same_alphabet(&self.canonical)?;
                head_distance_to_end(order, self.head)
            }
            MeasureKind::CanonicalIndicator => {
                canonical_indicator(order, &self.canonical).map(usize::from)
            }
        }
    }

    pub fn values(&self, orders: &[Order]) -> Result<Vec<f64>> {
        orders
            .iter()
            .map(|o| self.value(o).map(|v| v as f64))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sov() -> Arc<Alphabet> {
        Arc::new(Alphabet::sov())
    }

    fn o(s: &str) -> Order {
        sov().order(s).unwrap()
    }

    #[test]
    fn swap_distances_from_sov() {
        let k = o("SOV");
        for (order, d) in [
            ("SOV", 0),
            ("SVO", 1),
            ("OSV", 1),
            ("VSO", 2),
            ("OVS", 2),
            ("VOS", 3),
        ] {
            assert_eq!(swap_distance(&o(order), &k).unwrap(), d, "{order}");
        }
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let other = Arc::new(Alphabet::new("ABC".chars()).unwrap());
        let err = swap_distance(&o("SOV"), &other.order("ABC").unwrap()).unwrap_err();
        assert!(matches!(err, Error::AlphabetMismatch { .. }));
        assert!(canonical_indicator(&o("SOV"), &other.order("CBA").unwrap()).is_err());
    }

    #[test]
    fn order_parsing_validates_permutation() {
        assert!(Order::parse("SOV").is_ok());
        assert!(sov().order("SOO").is_err());
        assert!(sov().order("SO").is_err());
        assert!(sov().order("SOX").is_err());
        assert!(Alphabet::new("SS".chars()).is_err());
        assert!(Alphabet::new("S".chars()).is_err());
        // VOS parses against the default alphabet, not one declared by itself
        assert_eq!(
            Order::parse("VOS").unwrap().alphabet().as_ref(),
            &Alphabet::sov()
        );
    }

    #[test]
    fn lexicographic_enumeration_matches_file_convention() {
        let names: Vec<String> = sov()
            .orders()
            .unwrap()
            .iter()
            .map(Order::to_string)
            .collect();
        assert_eq!(names, ["SOV", "SVO", "OSV", "OVS", "VSO", "VOS"]);
    }

    #[test]
    fn ring_is_the_hexagon() {
        let names: Vec<String> = ring(&sov()).unwrap().iter().map(Order::to_string).collect();
        assert_eq!(names, ["SOV", "SVO", "VSO", "VOS", "OVS", "OSV"]);
        let g = Permutahedron::build(&sov()).unwrap();
        assert_eq!(g.vertices().len(), 6);
        assert_eq!(g.edges().len(), 6);
        let cycle = ring(&sov()).unwrap();
        for i in 0..6 {
            let u = g.index_of(&cycle[i]).unwrap();
            let v = g.index_of(&cycle[(i + 1) % 6]).unwrap();
            assert!(g.neighbors(u).contains(&v));
        }
    }

    #[test]
    fn small_and_larger_permutahedra() {
        let two = Arc::new(Alphabet::new("AB".chars()).unwrap());
        let g = Permutahedron::build(&two).unwrap();
        assert_eq!((g.vertices().len(), g.edges().len()), (2, 1));

        let four = Arc::new(Alphabet::new("ABCD".chars()).unwrap());
        let g = Permutahedron::build(&four).unwrap();
        assert_eq!(g.vertices().len(), 24);
        assert_eq!(g.edges().len(), 24 * 3 / 2);
        assert!((0..24).all(|v| g.neighbors(v).len() == 3));
    }

    #[test]
    fn size_guard() {
        let eight = Arc::new(Alphabet::new("ABCDEFGH".chars()).unwrap());
        assert!(matches!(
            Permutahedron::build(&eight),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn rotation_angles_from_sov() {
        let k = o("SOV");
        for (order, angle) in [
            ("SOV", 0),
            ("SVO", 60),
            ("VSO", 120),
            ("VOS", 180),
            ("OSV", -60),
            ("OVS", -120),
        ] {
            assert_eq!(rotation_angle(&o(order), &k).unwrap(), angle, "{order}");
        }
        let four = Arc::new(Alphabet::new("ABCD".chars()).unwrap());
        let x = four.order("ABCD").unwrap();
        assert!(matches!(
            rotation_angle(&x, &x),
            Err(Error::UnsupportedArity {
                expected: 3,
                found: 4
            })
        ));
    }

    #[test]
    fn rotation_matches_distance_everywhere() {
        let orders = sov().orders().unwrap();
        for a in &orders {
            for k in &orders {
                let angle = rotation_angle(a, k).unwrap();
                assert_eq!(
                    angle.unsigned_abs() as usize / 60,
                    swap_distance(a, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn head_distance() {
        let v = Constituent('V');
        for (order, p) in [("SOV", 0), ("SVO", 1), ("VOS", 2), ("OSV", 0)] {
            assert_eq!(head_distance_to_end(&o(order), v).unwrap(), p);
        }
        let two = Arc::new(Alphabet::new("SV".chars()).unwrap());
        assert_eq!(
            head_distance_to_end(&two.order("VS").unwrap(), v).unwrap(),
            1
        );
        assert!(matches!(
            head_distance_to_end(&o("SOV"), Constituent('X')),
            Err(Error::UnknownConstituent('X'))
        ));
    }

    #[test]
    fn canonical_indicator_is_unique_zero() {
        let k = o("SOV");
        assert_eq!(canonical_indicator(&k, &k).unwrap(), 0);
        assert_eq!(canonical_indicator(&o("VOS"), &k).unwrap(), 1);
        let zeros = sov()
            .orders()
            .unwrap()
            .iter()
            .filter(|x| canonical_indicator(x, &k).unwrap() == 0)
            .count();
        assert_eq!(zeros, 1);
    }

    #[test]
    fn predicted_levels() {
        assert_eq!(
            format_levels(&predicted_cost_levels(&o("SOV")).unwrap()),
            "SOV < SVO, OSV < VSO, OVS < VOS"
        );
        let svo = predicted_cost_levels(&o("SVO")).unwrap();
        let mut level1: Vec<String> = svo[1].iter().map(Order::to_string).collect();
        level1.sort();
        assert_eq!(level1, ["SOV", "VSO"]);
        for k in sov().orders().unwrap() {
            let sizes: Vec<usize> = predicted_cost_levels(&k)
                .unwrap()
                .iter()
                .map(Vec::len)
                .collect();
            assert_eq!(sizes, [1, 2, 2, 1]);
        }
    }

    #[test]
    fn table_one_columns() {
        let k = o("SOV");
        let [d, p, c] = DistanceMeasure::standard(&k, Constituent('V')).unwrap();
        let orders: Vec<Order> = ["SOV", "OSV", "SVO", "OVS", "VSO", "VOS"]
            .iter()
            .map(|s| o(s))
            .collect();
        assert_eq!(d.values(&orders).unwrap(), [0.0, 1.0, 1.0, 2.0, 2.0, 3.0]);
        assert_eq!(p.values(&orders).unwrap(), [0.0, 0.0, 1.0, 1.0, 2.0, 2.0]);
        assert_eq!(c.values(&orders).unwrap(), [0.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        assert!(DistanceMeasure::new(MeasureKind::HeadToEnd, k, Constituent('X')).is_err());
    }

    #[test]
    fn bfs_labelings() {
        let k = o("SOV");
        let labelings = bfs_rank_labelings(&k).unwrap();
        assert_eq!(labelings.len(), 4);
        let table_one: RankLabeling = [
            ("SOV", 1),
            ("OSV", 2),
            ("SVO", 3),
            ("OVS", 4),
            ("VSO", 5),
            ("VOS", 6),
        ]
        .iter()
        .map(|&(s, r)| (o(s), r))
        .collect();
        assert!(labelings.contains(&table_one));
        assert!(is_bfs_labeling(&table_one, &k).unwrap());

        let mut bad = table_one.clone();
        bad.insert(o("VOS"), 2);
        bad.insert(o("OSV"), 6);
        assert!(!is_bfs_labeling(&bad, &k).unwrap());
        for l in &labelings {
            assert!(is_bfs_labeling(l, &k).unwrap());
        }
    }

    #[test]
    fn dot_and_json_exports() {
        let g = Permutahedron::build(&sov()).unwrap();
        let dot = g.to_dot(None);
        assert!(dot.contains("  SOV -- SVO;\n"));
        assert_eq!(dot.matches(" -- ").count(), 6);
        let ann = g.annotate(&o("SOV"), Constituent('V')).unwrap();
        let json = g.to_json(Some(&ann));
        assert_eq!(json["vertices"].as_array().unwrap().len(), 6);
        assert_eq!(json["edges"].as_array().unwrap().len(), 6);
        assert_eq!(json["measures"][0]["order"], "SOV");
    }
}

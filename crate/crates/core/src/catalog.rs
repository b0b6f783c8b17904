//! Built-in reduction graphs: Kodaira fibers, a genus-2 configuration, and a
//! seeded generator of random valid models obtained by blowing up catalog
//! entries.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EdgeId, GraphError, ReductionGraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaType {
    /// `I_n`; `I_0` is good reduction, `I_n` for `n >= 2` an `n`-cycle.
    I(u32),
    /// `I_n^*`.
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
    /// Minimal sncd-model of `I_1`: the nodal rational curve blown up at its node.
    I1Resolved,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unsupported type {0}: the nodal fiber is not strict normal crossings, use I1res")]
    UnsupportedType(String),
    #[error("unknown catalog tag `{0}`")]
    UnknownTag(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
            KodairaType::I1Resolved => f.write_str("I1res"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tag = s.trim().replace('_', "");
        let t = match tag.as_str() {
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "IV*" => KodairaType::IVStar,
            "III*" => KodairaType::IIIStar,
            "II*" => KodairaType::IIStar,
            "I1res" => KodairaType::I1Resolved,
            _ => {
                let rest = tag
                    .strip_prefix('I')
                    .ok_or_else(|| CatalogError::UnknownTag(s.to_string()))?;
                let (digits, star) = match rest.strip_suffix('*') {
                    Some(d) => (d, true),
                    None => (rest, false),
                };
                let n: u32 = digits
                    .parse()
                    .map_err(|_| CatalogError::UnknownTag(s.to_string()))?;
                if star {
                    KodairaType::IStar(n)
                } else {
                    KodairaType::I(n)
                }
            }
        };
        Ok(t)
    }
}

impl KodairaType {
    /// The jump of an elliptic curve with this reduction type.
    pub fn expected_jump(&self) -> Rational64 {
        let r = Rational64::new;
        match self {
            KodairaType::I(_) | KodairaType::I1Resolved => r(0, 1),
            KodairaType::II => r(1, 6),
            KodairaType::III => r(1, 4),
            KodairaType::IV => r(1, 3),
            KodairaType::IStar(_) => r(1, 2),
            KodairaType::IVStar => r(2, 3),
            KodairaType::IIIStar => r(3, 4),
            KodairaType::IIStar => r(5, 6),
        }
    }
}

struct Builder {
    vertices: Vec<Vertex>,
    edges: Vec<(String, String)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn v(&mut self, id: &str, n: u64, g: u64) -> &mut Self {
        self.vertices.push(Vertex::new(id, n, g));
        self
    }

    fn e(&mut self, a: &str, b: &str) -> &mut Self {
        self.edges.push((a.to_string(), b.to_string()));
        self
    }

    /// Chain of vertices hanging off `root`; ids `{prefix}1`, `{prefix}2`, ...
    fn arm(&mut self, root: &str, prefix: &str, mults: &[u64]) -> &mut Self {
        let mut prev = root.to_string();
        for (k, &n) in mults.iter().enumerate() {
            let id = format!("{prefix}{}", k + 1);
            self.v(&id, n, 0);
            self.e(&prev, &id);
            prev = id;
        }
        self
    }

    fn build(&mut self, name: String) -> Result<ReductionGraph, GraphError> {
        Ok(ReductionGraph::new(
            std::mem::take(&mut self.vertices),
            std::mem::take(&mut self.edges),
        )?
        .with_name(name))
    }
}

/// The minimal sncd-model of the given Kodaira type.
pub fn kodaira_graph(t: KodairaType) -> Result<ReductionGraph, CatalogError> {
    let mut b = Builder::new();
    match t {
        KodairaType::I(0) => {
            b.v("e", 1, 1);
        }
        KodairaType::I(1) => return Err(CatalogError::UnsupportedType(t.to_string())),
        KodairaType::I(n) => {
            for k in 0..n {
                b.v(&format!("v{k}"), 1, 0);
            }
            for k in 0..n {
                b.e(&format!("v{k}"), &format!("v{}", (k + 1) % n));
            }
        }
        KodairaType::I1Resolved => {
            b.v("e", 1, 0).v("x", 2, 0).e("e", "x").e("e", "x");
        }
        KodairaType::II => {
            b.v("c", 6, 0).arm("c", "a", &[3]).arm("c", "b", &[2]).arm("c", "d", &[1]);
        }
        KodairaType::III => {
            b.v("c", 4, 0).arm("c", "a", &[2]).arm("c", "b", &[1]).arm("c", "d", &[1]);
        }
        KodairaType::IV => {
            b.v("c", 3, 0).arm("c", "a", &[1]).arm("c", "b", &[1]).arm("c", "d", &[1]);
        }
        KodairaType::IStar(n) => {
            for k in 0..=n {
                b.v(&format!("c{k}"), 2, 0);
                if k > 0 {
                    b.e(&format!("c{}", k - 1), &format!("c{k}"));
                }
            }
            let last = format!("c{n}");
            b.arm("c0", "s", &[1]).arm("c0", "t", &[1]);
            b.arm(&last, "u", &[1]).arm(&last, "w", &[1]);
        }
        KodairaType::IVStar => {
            b.v("c", 3, 0)
                .arm("c", "a", &[2, 1])
                .arm("c", "b", &[2, 1])
                .arm("c", "d", &[2, 1]);
        }
        KodairaType::IIIStar => {
            b.v("c", 4, 0)
                .arm("c", "a", &[2])
                .arm("c", "b", &[3, 2, 1])
                .arm("c", "d", &[3, 2, 1]);
        }
        KodairaType::IIStar => {
            b.v("c", 6, 0)
                .arm("c", "a", &[3])
                .arm("c", "b", &[4, 2])
                .arm("c", "d", &[5, 4, 3, 2, 1]);
        }
    }
    Ok(b.build(t.to_string())?)
}

/// A genus-2 fiber with a genus-one component of multiplicity 2 and two
/// rational tails of multiplicity 1.
pub fn genus2_example() -> ReductionGraph {
    let mut b = Builder::new();
    b.v("c", 2, 1).arm("c", "a", &[1]).arm("c", "b", &[1]);
    b.build("genus2".into()).expect("genus-2 example is valid")
}

/// Every named entry a caller can ask for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogEntry {
    Kodaira(KodairaType),
    Genus2Example,
}

impl CatalogEntry {
    pub fn graph(&self) -> Result<ReductionGraph, CatalogError> {
        match self {
            CatalogEntry::Kodaira(t) => kodaira_graph(*t),
            CatalogEntry::Genus2Example => Ok(genus2_example()),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            CatalogEntry::Kodaira(t) => t.to_string(),
            CatalogEntry::Genus2Example => "genus2".to_string(),
        }
    }
}

impl FromStr for CatalogEntry {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "genus2" {
            Ok(CatalogEntry::Genus2Example)
        } else {
            s.parse().map(CatalogEntry::Kodaira)
        }
    }
}

/// The entries listed by `catalog` and used as seeds for random models.
pub fn standard_entries() -> Vec<CatalogEntry> {
    use KodairaType::*;
    let mut out = vec![CatalogEntry::Kodaira(I(0)), CatalogEntry::Kodaira(I1Resolved)];
    out.extend((2..=6).map(|n| CatalogEntry::Kodaira(I(n))));
    out.extend([II, III, IV].map(CatalogEntry::Kodaira));
    out.extend((0..=3).map(|n| CatalogEntry::Kodaira(IStar(n))));
    out.extend([IVStar, IIIStar, IIStar].map(CatalogEntry::Kodaira));
    out.push(CatalogEntry::Genus2Example);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    FreePoint { vertex: String },
    Edge { a: String, b: String },
}

/// A random valid model together with the minimal seed it was blown up from.
#[derive(Clone, Debug)]
pub struct RandomGraph {
    pub seed_entry: CatalogEntry,
    pub seed_graph: ReductionGraph,
    pub graph: ReductionGraph,
    pub moves: Vec<Move>,
}

/// Picks a catalog seed and applies `moves` random blow-ups. Deterministic per seed.
pub fn random_valid_graph(seed: u64, moves: usize) -> RandomGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = standard_entries();
    let seed_entry = *entries.choose(&mut rng).expect("non-empty catalog");
    let seed_graph = seed_entry.graph().expect("catalog entries are valid");
    let mut graph = seed_graph.clone();
    let mut log = Vec::with_capacity(moves);
    for _ in 0..moves {
        let use_edge = graph.edge_count() > 0 && rng.gen_bool(0.5);
        if use_edge {
            let e = rng.gen_range(0..graph.edge_count());
            let (_, a, b) = graph.edges().nth(e).expect("edge in range");
            log.push(Move::Edge {
                a: a.to_string(),
                b: b.to_string(),
            });
            graph = graph.blow_up_edge(EdgeId(e)).expect("blow-up keeps validity");
        } else {
            let k = rng.gen_range(0..graph.vertex_count());
            let id = graph.vertices()[k].id.clone();
            graph = graph.blow_up_free_point(&id).expect("blow-up keeps validity");
            log.push(Move::FreePoint { vertex: id });
        }
    }
    RandomGraph {
        seed_entry,
        seed_graph,
        graph,
        moves: log,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jumps::compute_jumps;

    #[test]
    fn tags_round_trip() {
        for e in standard_entries() {
            assert_eq!(e.tag().parse::<CatalogEntry>().unwrap(), e);
        }
        assert_eq!("I_3*".parse::<KodairaType>().unwrap(), KodairaType::IStar(3));
        assert!("V".parse::<KodairaType>().is_err());
        assert!("I*".parse::<KodairaType>().is_err());
    }

    #[test]
    fn i1_rejected() {
        assert_eq!(
            kodaira_graph(KodairaType::I(1)).unwrap_err(),
            CatalogError::UnsupportedType("I1".into())
        );
    }

    #[test]
    fn examples() {
        let ii = kodaira_graph(KodairaType::II).unwrap();
        assert_eq!(ii.vertex_count(), 4);
        assert_eq!(
            compute_jumps(&ii).unwrap().entries(),
            &[(Rational64::new(1, 6), 1)]
        );
        let ivs = kodaira_graph(KodairaType::IVStar).unwrap();
        assert_eq!(
            compute_jumps(&ivs).unwrap().entries(),
            &[(Rational64::new(2, 3), 1)]
        );
        let i0 = kodaira_graph(KodairaType::I(0)).unwrap();
        assert_eq!(
            compute_jumps(&i0).unwrap().entries(),
            &[(Rational64::new(0, 1), 1)]
        );
    }

    #[test]
    fn i_star_chain_is_elliptic() {
        for n in 0..=20 {
            let g = kodaira_graph(KodairaType::IStar(n)).unwrap();
            assert_eq!(g.genus(), 1, "I{n}*");
            assert!(g.is_minimal());
            assert_eq!(g.vertex_count(), n as usize + 5);
        }
    }

    #[test]
    fn genus2_example_properties() {
        let g = genus2_example();
        assert_eq!(g.genus(), 2);
        assert_eq!(g.stabilization_index().unwrap(), 2);
        assert_eq!(crate::jumps::unipotent_rank(&g).unwrap(), 1);
    }

    #[test]
    fn random_graph_is_deterministic() {
        let a = random_valid_graph(17, 6);
        let b = random_valid_graph(17, 6);
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.moves, b.moves);
        assert_eq!(a.moves.len(), 6);
        let z = random_valid_graph(3, 0);
        assert_eq!(z.graph, z.seed_graph);
    }
}

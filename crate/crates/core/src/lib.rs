//! Combinatorics of untwisted outer automorphisms of right-angled Artin
//! groups: Whitehead partitions, compatibility, maximal ranks of abelian
//! subgroups and the free-face collapse of the local spine.

pub mod clique;
pub mod fixtures;
pub mod graph;
pub mod letter;
pub mod partition;
pub mod rank;
pub mod spine;
pub mod whitehead;
pub mod words;

pub use graph::{parse_graph, EquivClass, GraphError, SimplicialGraph, VertexRelations};
pub use letter::{Letter, LetterSet, VertexSet, MAX_VERTICES};
pub use words::{equal, is_conjugate, normalize, NormalForm, Word, WordError};
pub use partition::{compatible, enumerate_partitions, make_partition, CompatMode, GWPartition, PartitionError};
pub use rank::{
    build_abelian_generators, complete_abelian, condition_holds, condition_violation, m_single_closed_form, max_compatible,
    normalize_class, verify_abelian_rank, CompatibleCollection, RankError, RankReport, RankVerdict, DEFAULT_NODE_BUDGET,
};
pub use spine::{build_star, collapse_pass, is_irreplaceable, is_sandwiched, CollapseReport, SpineError, StarComplex};
pub use whitehead::{compose, is_inner, GeneratorMap, Innerness, WhiteheadAuto, WhiteheadError};

//! Game specifications, admissible collections, measures and the protocol engine.

mod collections;
mod file;
mod measure;
mod protocol;
mod spec;

pub use collections::{
    build_admissible_collections, build_admissible_collections_with_budget, collection_image,
    AdmissibleCollections, Collection, CollectionSpace, Witness, DEFAULT_SUBSET_BUDGET,
    DEFAULT_TYPE_BUDGET,
};
pub use file::{parse_spec, HypothesesField, SpecFile, StrategyConfig, SystemField};
pub use measure::{Measure, Prediction, Threshold};
pub use protocol::{
    build_transcript, comparator_loss, play_game, play_game_in, Adversary, Learner, Observation,
    Outcome, Round, Transcript,
};
pub use spec::{
    Feedback, GameSpec, HypothesisClass, Protocol, Realizability, SetFamily, SetSystem, Visibility,
    MAX_HORIZON,
};

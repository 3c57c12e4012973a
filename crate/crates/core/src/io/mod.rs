mod documents;
pub mod ser;

pub use documents::{
    CharacterPair, CharacterSetEntry, DocumentError, FanDocument, IdealEntry,
    MatrixFactorizationDocument, PolytopeDocument, WeightConfigDocument, SCHEMA_VERSION,
};

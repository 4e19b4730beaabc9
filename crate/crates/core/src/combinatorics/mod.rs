//! Search spaces, Hamming embeddings and dictionary constructions.

mod dictionary;
mod space;
mod stats;
pub mod theory;
mod wavelet;

pub use dictionary::{
    build_dictionary, build_diverse_random_binary, build_diverse_random_categorical, build_naive_random,
    build_wavelet_dictionary, Dictionary, DictionaryDoc, DictionaryKind, DictionaryStrategy, Embedding,
};
pub use space::{hamming_distance, Point, SearchSpace};
pub use stats::{dictionary_stats, DictionaryStats};
pub use theory::{
    cardinality_bound, coherence_mu, enumerate_embedded_cardinality, gaussian_projection_cardinality,
};
pub use wavelet::{binary_wavelet_matrix, sequency, BinaryMatrix};

#include "readlab/error.hpp"

namespace readlab {

const char* errc_name(errc code) {
    switch (code) {
        case errc::missing_field: return "MissingField";
        case errc::bad_level: return "BadLevel";
        case errc::empty_corpus: return "EmptyCorpus";
        case errc::empty_document: return "EmptyDocument";
        case errc::class_too_small: return "ClassTooSmall";
        case errc::bad_level_token: return "BadLevelToken";
        case errc::empty_class: return "EmptyClass";
        case errc::missing_annotation: return "MissingAnnotation";
        case errc::too_few_words: return "TooFewWords";
        case errc::anchor_overflow: return "AnchorOverflow";
        case errc::empty_vocabulary: return "EmptyVocabulary";
        case errc::vocab_mismatch: return "VocabMismatch";
        case errc::missing_embedding: return "MissingEmbedding";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::all_zero: return "AllZero";
        case errc::non_positive: return "NonPositive";
        case errc::empty_matrix: return "EmptyMatrix";
        case errc::degenerate_marginals: return "DegenerateMarginals";
        case errc::constant_input: return "ConstantInput";
        case errc::empty_vocab: return "EmptyVocab";
        case errc::invalid_argument: return "InvalidArgument";
        case errc::io_error: return "IoError";
        case errc::parse_error: return "ParseError";
    }
    return "UnknownError";
}

}  // namespace readlab

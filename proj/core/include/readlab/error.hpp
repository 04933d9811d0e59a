#pragma once

#include <stdexcept>
#include <string>

namespace readlab {

// Failure categories surfaced by the library. Each maps to one documented
// error condition of a pipeline operation; the CLI serializes the code name
// into its machine-readable error line.
enum class errc {
    missing_field,
    bad_level,
    empty_corpus,
    empty_document,
    class_too_small,
    bad_level_token,
    empty_class,
    missing_annotation,
    too_few_words,
    anchor_overflow,
    empty_vocabulary,
    vocab_mismatch,
    missing_embedding,
    dimension_mismatch,
    all_zero,
    non_positive,
    empty_matrix,
    degenerate_marginals,
    constant_input,
    empty_vocab,
    invalid_argument,
    io_error,
    parse_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace readlab

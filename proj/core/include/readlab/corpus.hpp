#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace readlab {

// Half-open index range [begin, end).
struct Span {
    int begin = 0;
    int end = 0;

    int length() const { return end - begin; }
    bool operator==(const Span&) const = default;
};

// dep_head uses kRootHead for the sentence root; std::nullopt means the
// annotation layer is absent for this token.
inline constexpr int kRootHead = -1;

struct Token {
    std::string surface;
    std::optional<std::string> pos;
    std::optional<int> dep_head;
    std::optional<std::string> dep_rel;
    std::vector<std::string> chars;  // code points of surface
};

Token make_token(std::string surface);

struct Document {
    std::string id;
    int level = 0;  // 1..N
    std::string raw_text;
    std::vector<Token> tokens;
    std::vector<Span> sentences;   // token-index spans
    std::vector<Span> paragraphs;  // sentence-index spans
    std::vector<Span> segments;    // token-index spans, filled by segment()

    int token_count() const { return static_cast<int>(tokens.size()); }
};

struct Corpus {
    std::vector<Document> documents;
    int num_levels = 0;
    std::string language;  // BCP-47-ish tag; decides the raw-text tokenizer

    size_t size() const { return documents.size(); }
};

enum class CorpusFormat { jsonl };

// levels: level -> word set. Sets may overlap across levels when the source
// lexicon does.
struct GradedLexicon {
    std::map<int, std::set<std::string>> levels;
    int k = 0;

    const std::set<std::string>* level(int i) const {
        auto it = levels.find(i);
        return it == levels.end() ? nullptr : &it->second;
    }
};

// Lookup tables backing the resource-dependent features. Missing keys mean
// "unregistered"; loaders leave absent tables empty.
struct ResourceTables {
    std::unordered_map<std::string, double> char_strokes;
    std::unordered_map<std::string, double> char_freq;
    std::unordered_map<std::string, double> word_freq;
    std::unordered_map<std::string, int> char_levels;
    std::unordered_map<std::string, int> word_levels;
    std::unordered_set<std::string> common_chars;
    std::unordered_set<std::string> idioms;

    bool empty() const {
        return char_strokes.empty() && char_freq.empty() && word_freq.empty() &&
               char_levels.empty() && word_levels.empty() && common_chars.empty() &&
               idioms.empty();
    }
};

struct ClassLengths {
    double average = 0.0;
    double median = 0.0;
    double minimum = 0.0;
    double maximum = 0.0;
};

struct LengthStats {
    std::vector<ClassLengths> per_class;  // index 0 = level 1
};

struct SplitRatios {
    double train = 0.8;
    double valid = 0.1;
    double test = 0.1;
};

struct CorpusSplit {
    Corpus train;
    Corpus valid;
    Corpus test;
};

// Parses one JSONL corpus. Records carry either "text" (tokenized here) or a
// "tokens" layer with optional "sentences"/"paragraphs" spans. num_levels = 0
// infers N from the maximum level seen.
Corpus load_corpus(const std::string& path, CorpusFormat format, int num_levels = 0,
                   const std::string& language = "");
Corpus parse_corpus_jsonl(const std::string& text, int num_levels, const std::string& language,
                          const std::string& origin);

// Tokenizes raw text and derives sentence/paragraph spans. Space-delimited
// languages split on whitespace with punctuation peeled into its own tokens;
// others fall back to one token per code point.
void tokenize_document(Document& doc, const std::string& language);

// Fills doc.segments with contiguous spans: every segment except the last has
// exactly max_segment_len tokens. n_max > 0 caps the segment count; trailing
// tokens are dropped. A document shorter than one segment keeps its true
// length (no pad tokens are materialized).
Document segment(Document doc, int max_segment_len, int n_max = 0);

// Stratified deterministic split. Largest-remainder allocation per class;
// every class keeps at least one document per part when it has >= 3.
CorpusSplit split(const Corpus& corpus, SplitRatios ratios, uint64_t seed);

// TSV `word<TAB>level` per line. Duplicate pairs collapse.
GradedLexicon load_graded_lexicon(const std::string& path);

// Loads conventional file names under dir (all optional): char_strokes.tsv,
// char_freq.tsv, word_freq.tsv, char_levels.tsv, word_levels.tsv,
// common_chars.tsv, idioms.tsv. Each is TSV `key<TAB>value`.
ResourceTables load_resource_tables(const std::string& dir);

LengthStats length_stats(const Corpus& corpus);

// Token surface -> number of documents containing it.
std::map<std::string, int> document_frequencies(const Corpus& corpus);
// Token surface -> total occurrence count.
std::map<std::string, long> term_frequencies(const Corpus& corpus);

}  // namespace readlab

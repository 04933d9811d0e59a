#include "readlab/lingfeats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "readlab/error.hpp"
#include "readlab/utf8.hpp"

namespace readlab {

int FeatureSchema::total_dim() const {
    int total = 0;
    for (const SchemaEntry& e : entries) total += e.dim;
    return total;
}

int FeatureSchema::offset_of(const std::string& name) const {
    int offset = 0;
    for (const SchemaEntry& e : entries) {
        if (e.name == name) return offset;
        offset += e.dim;
    }
    return -1;
}

FeatureConfig FeatureConfig::defaults() {
    FeatureConfig config;
    // 17 universal POS tags followed by the CTB set and a few Penn extras;
    // 56 slots ahead of the reserved unknown bucket.
    config.pos_tags = {
        "ADJ", "ADP", "ADV",  "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART",
        "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
        "NR", "NT", "NN", "PN", "VV", "VC", "VE", "VA", "AD", "CD", "OD", "M",
        "DT", "LC", "DEG", "DER", "DEV", "DEC", "SP", "AS", "MSP", "BA", "SB",
        "LB", "CS", "P", "CC", "ETC", "IJ", "ON", "JJ", "FW", "NOI", "PU",
        "NNS", "NNP", "VBD", "VBG", "RB"};
    config.dep_relations = {"nsubj", "obj",  "iobj", "obl",  "advmod", "amod", "nmod",
                            "det",   "case", "mark", "conj", "cc",     "root"};
    config.clause_delimiters = {",",  ";",  ":",  "-",  "--", "—", "——",
                                "，", "；", "：", "、"};
    return config;
}

namespace {

std::shared_ptr<const FeatureSchema> make_schema(std::vector<SchemaEntry> entries) {
    auto schema = std::make_shared<FeatureSchema>();
    schema->entries = std::move(entries);
    return schema;
}

SchemaEntry plain(const char* name, int dim = 1) { return {name, dim, false, false}; }
SchemaEntry res(const char* name, int dim = 1) { return {name, dim, true, false}; }
SchemaEntry ann(const char* name, int dim = 1) { return {name, dim, false, true}; }

// Cursor-style writer that fills values in exact schema order.
class BlockWriter {
public:
    explicit BlockWriter(std::shared_ptr<const FeatureSchema> schema)
        : schema_(std::move(schema)) {
        vec_.schema = schema_;
        vec_.values.assign(static_cast<size_t>(schema_->total_dim()), 0.0);
    }

    void scalar(double value) { vec_.values[cursor_++] = value; }

    void block(const std::vector<double>& values) {
        for (double v : values) vec_.values[cursor_++] = v;
    }

    void skip(int dim) { cursor_ += static_cast<size_t>(dim); }

    void mark_zeroed(const std::string& entry_name) { vec_.zeroed_blocks.push_back(entry_name); }

    FeatureVector finish() {
        if (cursor_ != vec_.values.size())
            raise(errc::dimension_mismatch, "feature writer did not fill the schema");
        return std::move(vec_);
    }

private:
    std::shared_ptr<const FeatureSchema> schema_;
    FeatureVector vec_;
    size_t cursor_ = 0;
};

double safe_div(double numerator, double denominator) {
    return denominator != 0.0 ? numerator / denominator : 0.0;
}

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return safe_div(sum, static_cast<double>(values.size()));
}

double max_of(const std::vector<double>& values) {
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    return best;
}

}  // namespace

std::shared_ptr<const FeatureSchema> char_feature_schema() {
    static std::shared_ptr<const FeatureSchema> schema = make_schema({
        plain("char_total"),
        plain("char_types"),
        plain("char_ttr"),
        res("char_avg_strokes"),
        res("char_weighted_avg_strokes"),
        res("char_stroke_counts", kStrokeBins),
        res("char_stroke_props", kStrokeBins),
        res("char_avg_freq"),
        res("char_weighted_avg_freq"),
        plain("char_single_count"),
        plain("char_single_prop"),
        res("char_common_count"),
        res("char_common_prop"),
        res("char_unregistered_count"),
        res("char_unregistered_prop"),
        res("char_level1_count"),
        res("char_level1_prop"),
        res("char_level2_count"),
        res("char_level2_prop"),
        res("char_level3_count"),
        res("char_level3_prop"),
        res("char_level4_count"),
        res("char_level4_prop"),
        res("char_avg_level"),
    });
    return schema;
}

std::shared_ptr<const FeatureSchema> word_feature_schema() {
    static std::shared_ptr<const FeatureSchema> schema = make_schema({
        plain("word_total"),
        plain("word_types"),
        plain("word_ttr"),
        plain("word_avg_length"),
        res("word_weighted_avg_length"),
        res("word_avg_freq"),
        res("word_weighted_avg_freq"),
        plain("word_len1_count"),
        plain("word_len1_prop"),
        plain("word_len2_count"),
        plain("word_len2_prop"),
        plain("word_len3_count"),
        plain("word_len3_prop"),
        plain("word_len4_count"),
        plain("word_len4_prop"),
        plain("word_multi_count"),
        plain("word_multi_prop"),
        res("word_idiom_count"),
        plain("word_single_count"),
        plain("word_single_prop"),
        res("word_unregistered_count"),
        res("word_unregistered_prop"),
        res("word_level1_count"),
        res("word_level1_prop"),
        res("word_level2_count"),
        res("word_level2_prop"),
        res("word_level3_count"),
        res("word_level3_prop"),
        res("word_level4_count"),
        res("word_level4_prop"),
        res("word_avg_level"),
        ann("word_pos_counts", kPosDims),
        ann("word_pos_props", kPosDims),
    });
    return schema;
}

std::shared_ptr<const FeatureSchema> sentence_feature_schema() {
    static std::shared_ptr<const FeatureSchema> schema = make_schema({
        plain("sent_total"),
        plain("sent_avg_chars"),
        plain("sent_avg_words"),
        plain("sent_max_chars"),
        plain("sent_max_words"),
        plain("clause_total"),
        plain("clause_avg_chars"),
        plain("clause_avg_words"),
        plain("clause_max_chars"),
        plain("clause_max_words"),
        plain("sent_length_dist", kSentenceLengthBins),
        ann("tree_avg_height"),
        ann("tree_max_height"),
        ann("tree_height_le5_ratio"),
        ann("tree_height_le10_ratio"),
        ann("tree_height_le15_ratio"),
        ann("tree_height_ge16_ratio"),
        ann("dep_relation_dist", kDepDims),
    });
    return schema;
}

std::shared_ptr<const FeatureSchema> paragraph_feature_schema() {
    static std::shared_ptr<const FeatureSchema> schema = make_schema({
        plain("para_total"),
        plain("para_avg_chars"),
        plain("para_avg_words"),
        plain("para_max_chars"),
        plain("para_max_words"),
    });
    return schema;
}

std::shared_ptr<const FeatureSchema> traditional_feature_schema() {
    static std::shared_ptr<const FeatureSchema> schema = [] {
        std::vector<SchemaEntry> entries;
        for (const auto& src : {char_feature_schema(), word_feature_schema(),
                                sentence_feature_schema(), paragraph_feature_schema()})
            entries.insert(entries.end(), src->entries.begin(), src->entries.end());
        return make_schema(std::move(entries));
    }();
    return schema;
}

FeatureVector extract_char_features(const Document& doc, const ResourceTables& resources,
                                    const FeatureConfig& config) {
    (void)config;
    BlockWriter out(char_feature_schema());

    std::vector<const std::string*> chars;
    for (const Token& tok : doc.tokens)
        for (const std::string& c : tok.chars) chars.push_back(&c);
    double total = static_cast<double>(chars.size());

    std::unordered_map<std::string, long> counts;
    for (const std::string* c : chars) ++counts[*c];

    out.scalar(total);
    out.scalar(static_cast<double>(counts.size()));
    out.scalar(safe_div(static_cast<double>(counts.size()), total));

    // strokes
    if (resources.char_strokes.empty()) {
        out.mark_zeroed("char_avg_strokes");
        out.mark_zeroed("char_weighted_avg_strokes");
        out.mark_zeroed("char_stroke_counts");
        out.mark_zeroed("char_stroke_props");
        out.scalar(0.0);
        out.scalar(0.0);
        out.skip(2 * kStrokeBins);
    } else {
        if (resources.char_freq.empty()) out.mark_zeroed("char_weighted_avg_strokes");
        double stroke_sum = 0.0, stroke_n = 0.0;
        double weighted_sum = 0.0, weight_sum = 0.0;
        std::vector<double> bins(kStrokeBins, 0.0);
        for (const std::string* c : chars) {
            auto it = resources.char_strokes.find(*c);
            if (it == resources.char_strokes.end()) continue;
            stroke_sum += it->second;
            stroke_n += 1.0;
            int bin = std::clamp(static_cast<int>(it->second), 1, kStrokeBins) - 1;
            bins[static_cast<size_t>(bin)] += 1.0;
            auto fit = resources.char_freq.find(*c);
            if (fit != resources.char_freq.end()) {
                weighted_sum += fit->second * it->second;
                weight_sum += fit->second;
            }
        }
        out.scalar(safe_div(stroke_sum, stroke_n));
        out.scalar(safe_div(weighted_sum, weight_sum));
        out.block(bins);
        std::vector<double> props(bins);
        for (double& v : props) v = safe_div(v, total);
        out.block(props);
    }

    // frequency
    if (resources.char_freq.empty()) {
        out.mark_zeroed("char_avg_freq");
        out.mark_zeroed("char_weighted_avg_freq");
        out.scalar(0.0);
        out.scalar(0.0);
    } else {
        double freq_sum = 0.0, freq_n = 0.0, freq_sq = 0.0;
        for (const std::string* c : chars) {
            auto it = resources.char_freq.find(*c);
            if (it == resources.char_freq.end()) continue;
            freq_sum += it->second;
            freq_sq += it->second * it->second;
            freq_n += 1.0;
        }
        out.scalar(safe_div(freq_sum, freq_n));
        out.scalar(safe_div(freq_sq, freq_sum));
    }

    long singles = 0;
    for (const auto& [c, n] : counts)
        if (n == 1) ++singles;
    out.scalar(static_cast<double>(singles));
    out.scalar(safe_div(static_cast<double>(singles), total));

    if (resources.common_chars.empty()) {
        out.mark_zeroed("char_common_count");
        out.mark_zeroed("char_common_prop");
        out.scalar(0.0);
        out.scalar(0.0);
    } else {
        double common = 0.0;
        for (const std::string* c : chars)
            if (resources.common_chars.count(*c)) common += 1.0;
        out.scalar(common);
        out.scalar(safe_div(common, total));
    }

    if (resources.char_freq.empty()) {
        out.mark_zeroed("char_unregistered_count");
        out.mark_zeroed("char_unregistered_prop");
        out.scalar(0.0);
        out.scalar(0.0);
    } else {
        double unregistered = 0.0;
        for (const std::string* c : chars)
            if (!resources.char_freq.count(*c)) unregistered += 1.0;
        out.scalar(unregistered);
        out.scalar(safe_div(unregistered, total));
    }

    if (resources.char_levels.empty()) {
        for (const char* name :
             {"char_level1_count", "char_level1_prop", "char_level2_count", "char_level2_prop",
              "char_level3_count", "char_level3_prop", "char_level4_count", "char_level4_prop",
              "char_avg_level"})
            out.mark_zeroed(name);
        out.skip(9);
    } else {
        double level_counts[4] = {0, 0, 0, 0};
        double level_sum = 0.0, level_n = 0.0;
        for (const std::string* c : chars) {
            auto it = resources.char_levels.find(*c);
            if (it == resources.char_levels.end()) continue;
            level_sum += it->second;
            level_n += 1.0;
            if (it->second >= 1 && it->second <= 4) level_counts[it->second - 1] += 1.0;
        }
        for (int lvl = 0; lvl < 4; ++lvl) {
            out.scalar(level_counts[lvl]);
            out.scalar(safe_div(level_counts[lvl], total));
        }
        out.scalar(safe_div(level_sum, level_n));
    }

    FeatureVector vec = out.finish();
    vec.kind = FeatureKind::traditional;
    return vec;
}

FeatureVector extract_word_features(const Document& doc, const ResourceTables& resources,
                                    const FeatureConfig& config) {
    bool has_pos = false;
    for (const Token& tok : doc.tokens)
        if (tok.pos) {
            has_pos = true;
            break;
        }
    if (!has_pos && config.strict_annotations && !doc.tokens.empty())
        raise(errc::missing_annotation,
              "document '" + doc.id + "' lacks a POS layer (strict mode)");

    BlockWriter out(word_feature_schema());
    double total = static_cast<double>(doc.tokens.size());

    std::unordered_map<std::string, long> counts;
    for (const Token& tok : doc.tokens) ++counts[tok.surface];

    out.scalar(total);
    out.scalar(static_cast<double>(counts.size()));
    out.scalar(safe_div(static_cast<double>(counts.size()), total));

    double len_sum = 0.0;
    double len_bins[5] = {0, 0, 0, 0, 0};  // 1,2,3,4,multi
    for (const Token& tok : doc.tokens) {
        size_t len = tok.chars.size();
        len_sum += static_cast<double>(len);
        if (len >= 1) len_bins[std::min<size_t>(len, 5) - 1] += 1.0;
    }
    out.scalar(safe_div(len_sum, total));

    if (resources.word_freq.empty()) {
        out.mark_zeroed("word_weighted_avg_length");
        out.mark_zeroed("word_avg_freq");
        out.mark_zeroed("word_weighted_avg_freq");
        out.skip(3);
    } else {
        double wlen_sum = 0.0, w_sum = 0.0, freq_sum = 0.0, freq_sq = 0.0, freq_n = 0.0;
        for (const Token& tok : doc.tokens) {
            auto it = resources.word_freq.find(tok.surface);
            if (it == resources.word_freq.end()) continue;
            wlen_sum += it->second * static_cast<double>(tok.chars.size());
            w_sum += it->second;
            freq_sum += it->second;
            freq_sq += it->second * it->second;
            freq_n += 1.0;
        }
        out.scalar(safe_div(wlen_sum, w_sum));
        out.scalar(safe_div(freq_sum, freq_n));
        out.scalar(safe_div(freq_sq, freq_sum));
    }

    for (int b = 0; b < 5; ++b) {
        out.scalar(len_bins[b]);
        out.scalar(safe_div(len_bins[b], total));
    }

    if (resources.idioms.empty()) {
        out.mark_zeroed("word_idiom_count");
        out.scalar(0.0);
    } else {
        double idioms = 0.0;
        for (const Token& tok : doc.tokens)
            if (resources.idioms.count(tok.surface)) idioms += 1.0;
        out.scalar(idioms);
    }

    long singles = 0;
    for (const auto& [w, n] : counts)
        if (n == 1) ++singles;
    out.scalar(static_cast<double>(singles));
    out.scalar(safe_div(static_cast<double>(singles), total));

    if (resources.word_freq.empty()) {
        out.mark_zeroed("word_unregistered_count");
        out.mark_zeroed("word_unregistered_prop");
        out.skip(2);
    } else {
        double unregistered = 0.0;
        for (const Token& tok : doc.tokens)
            if (!resources.word_freq.count(tok.surface)) unregistered += 1.0;
        out.scalar(unregistered);
        out.scalar(safe_div(unregistered, total));
    }

    if (resources.word_levels.empty()) {
        for (const char* name :
             {"word_level1_count", "word_level1_prop", "word_level2_count", "word_level2_prop",
              "word_level3_count", "word_level3_prop", "word_level4_count", "word_level4_prop",
              "word_avg_level"})
            out.mark_zeroed(name);
        out.skip(9);
    } else {
        double level_counts[4] = {0, 0, 0, 0};
        double level_sum = 0.0, level_n = 0.0;
        for (const Token& tok : doc.tokens) {
            auto it = resources.word_levels.find(tok.surface);
            if (it == resources.word_levels.end()) continue;
            level_sum += it->second;
            level_n += 1.0;
            if (it->second >= 1 && it->second <= 4) level_counts[it->second - 1] += 1.0;
        }
        for (int lvl = 0; lvl < 4; ++lvl) {
            out.scalar(level_counts[lvl]);
            out.scalar(safe_div(level_counts[lvl], total));
        }
        out.scalar(safe_div(level_sum, level_n));
    }

    if (!has_pos) {
        out.mark_zeroed("word_pos_counts");
        out.mark_zeroed("word_pos_props");
        out.skip(2 * kPosDims);
    } else {
        std::unordered_map<std::string, int> tag_index;
        int limit = std::min<int>(static_cast<int>(config.pos_tags.size()), kPosDims - 1);
        for (int i = 0; i < limit; ++i) tag_index[config.pos_tags[static_cast<size_t>(i)]] = i;
        std::vector<double> bins(kPosDims, 0.0);
        for (const Token& tok : doc.tokens) {
            if (!tok.pos) continue;
            auto it = tag_index.find(*tok.pos);
            int idx = it == tag_index.end() ? kPosDims - 1 : it->second;
            bins[static_cast<size_t>(idx)] += 1.0;
        }
        out.block(bins);
        for (double& v : bins) v = safe_div(v, total);
        out.block(bins);
    }

    FeatureVector vec = out.finish();
    vec.kind = FeatureKind::traditional;
    return vec;
}

namespace {

struct SentenceShape {
    double chars = 0.0;
    double words = 0.0;
};

double token_chars(const Document& doc, const Span& span) {
    double chars = 0.0;
    for (int i = span.begin; i < span.end; ++i)
        chars += static_cast<double>(doc.tokens[static_cast<size_t>(i)].chars.size());
    return chars;
}

// Longest node count on any token-to-root head chain within the span.
int tree_height(const Document& doc, const Span& sentence) {
    int best = 0;
    int span_len = sentence.length();
    for (int i = sentence.begin; i < sentence.end; ++i) {
        if (!doc.tokens[static_cast<size_t>(i)].dep_head) continue;
        int length = 0;
        int cursor = i;
        while (cursor != kRootHead && length <= span_len) {
            const auto& head = doc.tokens[static_cast<size_t>(cursor)].dep_head;
            if (!head) break;
            ++length;
            cursor = *head;
        }
        best = std::max(best, length);
    }
    return best;
}

}  // namespace

FeatureVector extract_sentence_features(const Document& doc, const FeatureConfig& config) {
    BlockWriter out(sentence_feature_schema());

    std::vector<SentenceShape> sentences;
    for (const Span& span : doc.sentences)
        sentences.push_back({token_chars(doc, span), static_cast<double>(span.length())});

    std::vector<double> sent_chars, sent_words;
    for (const SentenceShape& s : sentences) {
        sent_chars.push_back(s.chars);
        sent_words.push_back(s.words);
    }

    out.scalar(static_cast<double>(sentences.size()));
    out.scalar(mean_of(sent_chars));
    out.scalar(mean_of(sent_words));
    out.scalar(max_of(sent_chars));
    out.scalar(max_of(sent_words));

    // clauses: runs of tokens between delimiter or sentence-terminal tokens
    std::vector<double> clause_chars, clause_words;
    for (const Span& span : doc.sentences) {
        double chars = 0.0, words = 0.0;
        auto flush = [&]() {
            if (words > 0) {
                clause_chars.push_back(chars);
                clause_words.push_back(words);
            }
            chars = 0.0;
            words = 0.0;
        };
        for (int i = span.begin; i < span.end; ++i) {
            const Token& tok = doc.tokens[static_cast<size_t>(i)];
            bool is_delim = config.clause_delimiters.count(tok.surface) > 0 ||
                            (tok.chars.size() == 1 &&
                             is_sentence_terminal(utf8_first_codepoint(tok.chars.front())));
            if (is_delim) {
                flush();
            } else {
                chars += static_cast<double>(tok.chars.size());
                words += 1.0;
            }
        }
        flush();
    }
    out.scalar(static_cast<double>(clause_words.size()));
    out.scalar(mean_of(clause_chars));
    out.scalar(mean_of(clause_words));
    out.scalar(max_of(clause_chars));
    out.scalar(max_of(clause_words));

    std::vector<double> length_bins(kSentenceLengthBins, 0.0);
    for (const SentenceShape& s : sentences) {
        int words = static_cast<int>(s.words);
        int bin = words <= 1 ? 0
                             : std::min((words - 1) / kSentenceLengthBinWidth,
                                        kSentenceLengthBins - 1);
        length_bins[static_cast<size_t>(bin)] += 1.0;
    }
    for (double& v : length_bins) v = safe_div(v, static_cast<double>(sentences.size()));
    out.block(length_bins);

    bool has_deps = false;
    for (const Token& tok : doc.tokens)
        if (tok.dep_head) {
            has_deps = true;
            break;
        }
    if (!has_deps) {
        for (const char* name : {"tree_avg_height", "tree_max_height", "tree_height_le5_ratio",
                                 "tree_height_le10_ratio", "tree_height_le15_ratio",
                                 "tree_height_ge16_ratio"})
            out.mark_zeroed(name);
        out.skip(6);
    } else {
        std::vector<double> heights;
        for (const Span& span : doc.sentences) {
            int h = tree_height(doc, span);
            if (h > 0) heights.push_back(static_cast<double>(h));
        }
        double n = static_cast<double>(heights.size());
        double le5 = 0.0, le10 = 0.0, le15 = 0.0, ge16 = 0.0;
        for (double h : heights) {
            if (h <= 5) le5 += 1.0;
            if (h <= 10) le10 += 1.0;
            if (h <= 15) le15 += 1.0;
            if (h >= 16) ge16 += 1.0;
        }
        out.scalar(mean_of(heights));
        out.scalar(max_of(heights));
        out.scalar(safe_div(le5, n));
        out.scalar(safe_div(le10, n));
        out.scalar(safe_div(le15, n));
        out.scalar(safe_div(ge16, n));
    }

    bool has_rels = false;
    for (const Token& tok : doc.tokens)
        if (tok.dep_rel) {
            has_rels = true;
            break;
        }
    if (!has_rels) {
        out.mark_zeroed("dep_relation_dist");
        out.skip(kDepDims);
    } else {
        std::unordered_map<std::string, int> rel_index;
        int limit = std::min<int>(static_cast<int>(config.dep_relations.size()), kDepDims - 1);
        for (int i = 0; i < limit; ++i) rel_index[config.dep_relations[static_cast<size_t>(i)]] = i;
        std::vector<double> bins(kDepDims, 0.0);
        for (const Token& tok : doc.tokens) {
            if (!tok.dep_rel) continue;
            auto it = rel_index.find(*tok.dep_rel);
            int idx = it == rel_index.end() ? kDepDims - 1 : it->second;
            bins[static_cast<size_t>(idx)] += 1.0;
        }
        for (double& v : bins) v = safe_div(v, static_cast<double>(doc.tokens.size()));
        out.block(bins);
    }

    FeatureVector vec = out.finish();
    vec.kind = FeatureKind::traditional;
    return vec;
}

FeatureVector extract_paragraph_features(const Document& doc, const FeatureConfig& config) {
    (void)config;
    BlockWriter out(paragraph_feature_schema());

    std::vector<Span> paragraphs = doc.paragraphs;
    if (paragraphs.empty() && !doc.sentences.empty())
        paragraphs.push_back({0, static_cast<int>(doc.sentences.size())});

    std::vector<double> para_chars, para_words;
    for (const Span& para : paragraphs) {
        double chars = 0.0, words = 0.0;
        for (int s = para.begin; s < para.end; ++s) {
            const Span& sent = doc.sentences[static_cast<size_t>(s)];
            chars += token_chars(doc, sent);
            words += static_cast<double>(sent.length());
        }
        para_chars.push_back(chars);
        para_words.push_back(words);
    }

    out.scalar(static_cast<double>(paragraphs.size()));
    out.scalar(mean_of(para_chars));
    out.scalar(mean_of(para_words));
    out.scalar(max_of(para_chars));
    out.scalar(max_of(para_words));

    FeatureVector vec = out.finish();
    vec.kind = FeatureKind::traditional;
    return vec;
}

FeatureVector extract_traditional(const Document& doc, const ResourceTables& resources,
                                  const FeatureConfig& config) {
    FeatureVector parts[4] = {
        extract_char_features(doc, resources, config),
        extract_word_features(doc, resources, config),
        extract_sentence_features(doc, config),
        extract_paragraph_features(doc, config),
    };
    FeatureVector vec;
    vec.kind = FeatureKind::traditional;
    vec.schema = traditional_feature_schema();
    vec.values.reserve(static_cast<size_t>(vec.schema->total_dim()));
    for (FeatureVector& part : parts) {
        vec.values.insert(vec.values.end(), part.values.begin(), part.values.end());
        vec.zeroed_blocks.insert(vec.zeroed_blocks.end(), part.zeroed_blocks.begin(),
                                 part.zeroed_blocks.end());
    }
    return vec;
}

}  // namespace readlab

#include "readlab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"
#include "readlab/rng.hpp"
#include "readlab/utf8.hpp"

namespace readlab {

using nlohmann::json;

Token make_token(std::string surface) {
    Token tok;
    tok.chars = utf8_split(surface);
    tok.surface = std::move(surface);
    return tok;
}

namespace {

bool is_per_character_language(const std::string& language) {
    static const char* prefixes[] = {"zh", "ja", "th", "km", "lo", "my"};
    for (const char* p : prefixes) {
        if (language.rfind(p, 0) == 0) return true;
    }
    return false;
}

std::vector<std::string> split_paragraph_blocks(const std::string& text) {
    std::vector<std::string> blocks;
    std::string current;
    size_t pos = 0;
    auto flush = [&]() {
        if (current.find_first_not_of(" \t\r\n") != std::string::npos) blocks.push_back(current);
        current.clear();
    };
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            flush();
        } else {
            if (!current.empty()) current += ' ';
            current += line;
        }
        pos = eol + 1;
    }
    flush();
    return blocks;
}

// Appends tokens for one paragraph and the sentence spans they form.
void tokenize_block(const std::string& block, bool per_character, std::vector<Token>& tokens,
                    std::vector<Span>& sentences) {
    int sentence_begin = static_cast<int>(tokens.size());
    auto close_sentence = [&]() {
        int here = static_cast<int>(tokens.size());
        if (here > sentence_begin) sentences.push_back({sentence_begin, here});
        sentence_begin = here;
    };

    auto units = utf8_split(block);
    std::string word;
    auto flush_word = [&]() {
        if (!word.empty()) {
            tokens.push_back(make_token(word));
            word.clear();
        }
    };
    for (const auto& unit : units) {
        uint32_t cp = utf8_first_codepoint(unit);
        if (is_space_codepoint(cp)) {
            flush_word();
            continue;
        }
        if (per_character) {
            tokens.push_back(make_token(unit));
        } else if (is_punct_codepoint(cp) || is_sentence_terminal(cp)) {
            flush_word();
            tokens.push_back(make_token(unit));
        } else {
            word += unit;
            continue;
        }
        if (is_sentence_terminal(cp)) close_sentence();
    }
    flush_word();
    close_sentence();
}

void validate_spans(const std::vector<Span>& spans, int total, const std::string& what,
                    const std::string& id) {
    int cursor = 0;
    for (const Span& s : spans) {
        if (s.begin != cursor || s.end < s.begin)
            raise(errc::parse_error, "document '" + id + "': " + what +
                                         " spans must be ordered, non-overlapping and covering");
        cursor = s.end;
    }
    if (cursor != total)
        raise(errc::parse_error,
              "document '" + id + "': " + what + " spans do not cover all items");
}

Document parse_record(const json& rec, int num_levels, const std::string& language,
                      const std::string& origin, size_t line_no) {
    auto where = [&]() { return origin + ":" + std::to_string(line_no); };
    Document doc;
    if (!rec.contains("id") || !rec["id"].is_string())
        raise(errc::missing_field, where() + ": record lacks string 'id'");
    doc.id = rec["id"].get<std::string>();
    if (!rec.contains("level"))
        raise(errc::missing_field, where() + ": record '" + doc.id + "' lacks 'level'");
    if (!rec["level"].is_number_integer())
        raise(errc::bad_level, where() + ": level must be an integer");
    doc.level = rec["level"].get<int>();
    if (doc.level < 1 || (num_levels > 0 && doc.level > num_levels))
        raise(errc::bad_level, where() + ": level " + std::to_string(doc.level) +
                                   " outside 1.." + std::to_string(num_levels));

    if (rec.contains("tokens")) {
        for (const auto& jt : rec["tokens"]) {
            Token tok;
            if (jt.is_string()) {
                tok = make_token(jt.get<std::string>());
            } else {
                if (!jt.contains("t") || !jt["t"].is_string())
                    raise(errc::missing_field, where() + ": token lacks 't'");
                tok = make_token(jt["t"].get<std::string>());
                if (jt.contains("pos") && jt["pos"].is_string())
                    tok.pos = jt["pos"].get<std::string>();
                if (jt.contains("head") && jt["head"].is_number_integer())
                    tok.dep_head = jt["head"].get<int>();
                if (jt.contains("rel") && jt["rel"].is_string())
                    tok.dep_rel = jt["rel"].get<std::string>();
            }
            if (tok.surface.empty())
                raise(errc::parse_error, where() + ": empty token surface");
            doc.tokens.push_back(std::move(tok));
        }
        int n = doc.token_count();
        for (const Token& tok : doc.tokens) {
            if (tok.dep_head && *tok.dep_head != kRootHead &&
                (*tok.dep_head < 0 || *tok.dep_head >= n))
                raise(errc::parse_error, where() + ": dep head out of range");
        }
        if (rec.contains("sentences")) {
            for (const auto& js : rec["sentences"])
                doc.sentences.push_back({js.at(0).get<int>(), js.at(1).get<int>()});
        } else if (n > 0) {
            doc.sentences.push_back({0, n});
        }
        validate_spans(doc.sentences, n, "sentence", doc.id);
        if (rec.contains("paragraphs")) {
            for (const auto& jp : rec["paragraphs"])
                doc.paragraphs.push_back({jp.at(0).get<int>(), jp.at(1).get<int>()});
        } else if (!doc.sentences.empty()) {
            doc.paragraphs.push_back({0, static_cast<int>(doc.sentences.size())});
        }
        validate_spans(doc.paragraphs, static_cast<int>(doc.sentences.size()), "paragraph",
                       doc.id);
        if (rec.contains("text")) doc.raw_text = rec["text"].get<std::string>();
    } else if (rec.contains("text")) {
        doc.raw_text = rec["text"].get<std::string>();
        tokenize_document(doc, language);
    } else {
        raise(errc::missing_field,
              where() + ": record '" + doc.id + "' has neither 'text' nor 'tokens'");
    }
    return doc;
}

}  // namespace

void tokenize_document(Document& doc, const std::string& language) {
    doc.tokens.clear();
    doc.sentences.clear();
    doc.paragraphs.clear();
    bool per_character = is_per_character_language(language);
    for (const std::string& block : split_paragraph_blocks(doc.raw_text)) {
        int first_sentence = static_cast<int>(doc.sentences.size());
        tokenize_block(block, per_character, doc.tokens, doc.sentences);
        int last_sentence = static_cast<int>(doc.sentences.size());
        if (last_sentence > first_sentence)
            doc.paragraphs.push_back({first_sentence, last_sentence});
    }
}

Corpus parse_corpus_jsonl(const std::string& text, int num_levels, const std::string& language,
                          const std::string& origin) {
    Corpus corpus;
    corpus.language = language;
    std::unordered_set<std::string> seen_ids;
    std::istringstream stream(text);
    std::string line;
    size_t line_no = 0;
    int max_level = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            raise(errc::parse_error,
                  origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
        Document doc = parse_record(rec, num_levels, language, origin, line_no);
        if (!seen_ids.insert(doc.id).second)
            raise(errc::parse_error, origin + ": duplicate document id '" + doc.id + "'");
        max_level = std::max(max_level, doc.level);
        corpus.documents.push_back(std::move(doc));
    }
    if (corpus.documents.empty()) raise(errc::empty_corpus, origin + ": no records");
    corpus.num_levels = num_levels > 0 ? num_levels : max_level;
    return corpus;
}

Corpus load_corpus(const std::string& path, CorpusFormat format, int num_levels,
                   const std::string& language) {
    (void)format;  // jsonl is the single supported format
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot open corpus file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_corpus_jsonl(buffer.str(), num_levels, language, path);
}

Document segment(Document doc, int max_segment_len, int n_max) {
    if (max_segment_len < 1)
        raise(errc::invalid_argument, "max_segment_len must be >= 1");
    if (doc.tokens.empty())
        raise(errc::empty_document, "document '" + doc.id + "' has no tokens to segment");
    doc.segments.clear();
    int n = doc.token_count();
    for (int begin = 0; begin < n; begin += max_segment_len) {
        if (n_max > 0 && static_cast<int>(doc.segments.size()) == n_max) break;  // truncate
        doc.segments.push_back({begin, std::min(begin + max_segment_len, n)});
    }
    return doc;
}

CorpusSplit split(const Corpus& corpus, SplitRatios ratios, uint64_t seed) {
    if (ratios.train <= 0 || ratios.valid <= 0 || ratios.test <= 0)
        raise(errc::invalid_argument, "split ratios must be positive");
    if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9)
        raise(errc::invalid_argument, "split ratios must sum to 1");

    std::map<int, std::vector<size_t>> by_level;
    for (size_t i = 0; i < corpus.documents.size(); ++i)
        by_level[corpus.documents[i].level].push_back(i);

    constexpr int kParts = 3;
    for (const auto& [level, docs] : by_level) {
        if (static_cast<int>(docs.size()) < kParts)
            raise(errc::class_too_small, "level " + std::to_string(level) + " has only " +
                                             std::to_string(docs.size()) + " documents");
    }

    CorpusSplit out;
    for (Corpus* part : {&out.train, &out.valid, &out.test}) {
        part->num_levels = corpus.num_levels;
        part->language = corpus.language;
    }

    Rng rng(seed);
    for (auto& [level, docs] : by_level) {
        rng.shuffle(docs);
        size_t n = docs.size();
        double ratio[kParts] = {ratios.train, ratios.valid, ratios.test};
        size_t count[kParts];
        double frac[kParts];
        size_t assigned = 0;
        for (int p = 0; p < kParts; ++p) {
            double exact = ratio[p] * static_cast<double>(n);
            count[p] = static_cast<size_t>(std::floor(exact));
            frac[p] = exact - std::floor(exact);
            assigned += count[p];
        }
        // largest remainder; ties resolved in train > valid > test order
        while (assigned < n) {
            int best = 0;
            for (int p = 1; p < kParts; ++p)
                if (frac[p] > frac[best] + 1e-12) best = p;
            ++count[best];
            frac[best] = -1.0;
            ++assigned;
        }
        // keep every class present in every part
        for (int p = 0; p < kParts; ++p) {
            if (count[p] > 0) continue;
            int donor = 0;
            for (int q = 1; q < kParts; ++q)
                if (count[q] > count[donor]) donor = q;
            --count[donor];
            ++count[p];
        }
        size_t cursor = 0;
        Corpus* parts[kParts] = {&out.train, &out.valid, &out.test};
        for (int p = 0; p < kParts; ++p) {
            for (size_t i = 0; i < count[p]; ++i)
                parts[p]->documents.push_back(corpus.documents[docs[cursor++]]);
        }
    }
    return out;
}

GradedLexicon load_graded_lexicon(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot open lexicon file '" + path + "'");
    GradedLexicon lex;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            raise(errc::parse_error,
                  path + ":" + std::to_string(line_no) + ": expected word<TAB>level");
        std::string word = line.substr(0, tab);
        std::string level_str = line.substr(tab + 1);
        size_t consumed = 0;
        int level = 0;
        try {
            level = std::stoi(level_str, &consumed);
        } catch (const std::exception&) {
            consumed = 0;
        }
        if (consumed == 0 || consumed != level_str.size())
            raise(errc::bad_level_token, path + ":" + std::to_string(line_no) +
                                             ": non-integer level '" + level_str + "'");
        lex.levels[level].insert(word);
    }
    lex.k = lex.levels.empty() ? 0 : lex.levels.rbegin()->first;
    return lex;
}

namespace {

template <typename Fn>
void load_tsv_if_present(const std::string& dir, const char* name, Fn&& consume) {
    std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ifstream in(path, std::ios::binary);
    if (!in) return;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        std::string key = tab == std::string::npos ? line : line.substr(0, tab);
        std::string value = tab == std::string::npos ? "" : line.substr(tab + 1);
        consume(key, value, path.string() + ":" + std::to_string(line_no));
    }
}

double parse_number(const std::string& value, const std::string& where) {
    try {
        size_t consumed = 0;
        double parsed = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        raise(errc::parse_error, where + ": expected a number, got '" + value + "'");
    }
}

}  // namespace

ResourceTables load_resource_tables(const std::string& dir) {
    ResourceTables tables;
    load_tsv_if_present(dir, "char_strokes.tsv", [&](const auto& k, const auto& v, const auto& w) {
        double n = parse_number(v, w);
        if (n < 0) raise(errc::parse_error, w + ": negative stroke count");
        tables.char_strokes[k] = n;
    });
    load_tsv_if_present(dir, "char_freq.tsv", [&](const auto& k, const auto& v, const auto& w) {
        double n = parse_number(v, w);
        if (n < 0) raise(errc::parse_error, w + ": negative frequency");
        tables.char_freq[k] = n;
    });
    load_tsv_if_present(dir, "word_freq.tsv", [&](const auto& k, const auto& v, const auto& w) {
        double n = parse_number(v, w);
        if (n < 0) raise(errc::parse_error, w + ": negative frequency");
        tables.word_freq[k] = n;
    });
    load_tsv_if_present(dir, "char_levels.tsv", [&](const auto& k, const auto& v, const auto& w) {
        tables.char_levels[k] = static_cast<int>(parse_number(v, w));
    });
    load_tsv_if_present(dir, "word_levels.tsv", [&](const auto& k, const auto& v, const auto& w) {
        tables.word_levels[k] = static_cast<int>(parse_number(v, w));
    });
    load_tsv_if_present(dir, "common_chars.tsv",
                        [&](const auto& k, const auto&, const auto&) { tables.common_chars.insert(k); });
    load_tsv_if_present(dir, "idioms.tsv",
                        [&](const auto& k, const auto&, const auto&) { tables.idioms.insert(k); });
    return tables;
}

LengthStats length_stats(const Corpus& corpus) {
    if (corpus.num_levels < 1) raise(errc::invalid_argument, "corpus has no levels");
    std::vector<std::vector<double>> lengths(static_cast<size_t>(corpus.num_levels));
    for (const Document& doc : corpus.documents)
        lengths[static_cast<size_t>(doc.level - 1)].push_back(
            static_cast<double>(doc.token_count()));

    LengthStats stats;
    stats.per_class.resize(lengths.size());
    for (size_t c = 0; c < lengths.size(); ++c) {
        auto& values = lengths[c];
        if (values.empty())
            raise(errc::empty_class, "level " + std::to_string(c + 1) + " has no documents");
        std::sort(values.begin(), values.end());
        double sum = 0.0;
        for (double v : values) sum += v;
        size_t n = values.size();
        ClassLengths cl;
        cl.average = sum / static_cast<double>(n);
        cl.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
        cl.minimum = values.front();
        cl.maximum = values.back();
        stats.per_class[c] = cl;
    }
    return stats;
}

std::map<std::string, int> document_frequencies(const Corpus& corpus) {
    std::map<std::string, int> df;
    for (const Document& doc : corpus.documents) {
        std::set<std::string> seen;
        for (const Token& tok : doc.tokens) seen.insert(tok.surface);
        for (const auto& word : seen) ++df[word];
    }
    return df;
}

std::map<std::string, long> term_frequencies(const Corpus& corpus) {
    std::map<std::string, long> tf;
    for (const Document& doc : corpus.documents)
        for (const Token& tok : doc.tokens) ++tf[tok.surface];
    return tf;
}

}  // namespace readlab

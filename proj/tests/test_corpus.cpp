#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "readlab/corpus.hpp"
#include "readlab/error.hpp"

using namespace readlab;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

Document doc_with_tokens(int n, int level = 1) {
    Document doc;
    doc.id = "d" + std::to_string(n);
    doc.level = level;
    for (int i = 0; i < n; ++i) doc.tokens.push_back(make_token("t" + std::to_string(i)));
    return doc;
}

}  // namespace

TEST_CASE("load_corpus ingests a 3-record jsonl file") {
    std::string path = write_temp("corpus_ok.jsonl",
                                  R"({"id":"a","level":1,"text":"The cat sat. It purred."}
{"id":"b","level":2,"text":"Dogs bark loudly."}
{"id":"c","level":3,"text":"Photosynthesis converts light."}
)");
    Corpus corpus = load_corpus(path, CorpusFormat::jsonl, 5, "en");
    CHECK(corpus.documents.size() == 3);
    CHECK(corpus.num_levels == 5);
    CHECK(corpus.documents[0].id == "a");
    CHECK(corpus.documents[0].tokens.size() == 7);  // punctuation split off
    CHECK(corpus.documents[0].sentences.size() == 2);
    std::remove(path.c_str());
}

TEST_CASE("load_corpus rejects bad levels and empty files") {
    std::string bad = write_temp("corpus_bad.jsonl", R"({"id":"a","level":0,"text":"x"})");
    CHECK_THROWS_WITH_AS(load_corpus(bad, CorpusFormat::jsonl, 5), doctest::Contains("BadLevel"),
                         Error);
    std::remove(bad.c_str());

    std::string missing = write_temp("corpus_missing.jsonl", R"({"id":"a","text":"x"})");
    CHECK_THROWS_AS(load_corpus(missing, CorpusFormat::jsonl, 5), Error);
    try {
        load_corpus(missing, CorpusFormat::jsonl, 5);
    } catch (const Error& e) {
        CHECK(e.code() == errc::missing_field);
    }
    std::remove(missing.c_str());

    std::string empty = write_temp("corpus_empty.jsonl", "\n\n");
    try {
        load_corpus(empty, CorpusFormat::jsonl, 5);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::empty_corpus);
    }
    std::remove(empty.c_str());
}

TEST_CASE("load_corpus accepts a token layer with annotations") {
    std::string path = write_temp("corpus_tok.jsonl",
                                  R"({"id":"a","level":2,"tokens":[{"t":"he","pos":"PRON","head":1,"rel":"nsubj"},{"t":"ran","pos":"VERB","head":-1,"rel":"root"}],"sentences":[[0,2]]}
)");
    Corpus corpus = load_corpus(path, CorpusFormat::jsonl, 3);
    const Document& doc = corpus.documents.at(0);
    REQUIRE(doc.tokens.size() == 2);
    CHECK(doc.tokens[0].pos.value() == "PRON");
    CHECK(doc.tokens[0].dep_head.value() == 1);
    CHECK(doc.tokens[1].dep_head.value() == kRootHead);
    CHECK(doc.paragraphs.size() == 1);
    std::remove(path.c_str());
}

TEST_CASE("per-character tokenization for zh") {
    Document doc;
    doc.raw_text = "天天向上。";
    tokenize_document(doc, "zh");
    CHECK(doc.tokens.size() == 5);
    CHECK(doc.tokens[0].surface == "天");
    CHECK(doc.sentences.size() == 1);
}

TEST_CASE("segment splits 1200 tokens into 500/500/200") {
    Document doc = segment(doc_with_tokens(1200), 500);
    REQUIRE(doc.segments.size() == 3);
    CHECK(doc.segments[0].length() == 500);
    CHECK(doc.segments[1].length() == 500);
    CHECK(doc.segments[2].length() == 200);
}

TEST_CASE("segment keeps a short document whole") {
    Document doc = segment(doc_with_tokens(400), 500);
    REQUIRE(doc.segments.size() == 1);
    CHECK(doc.segments[0].length() == 400);
}

TEST_CASE("segment truncates beyond n_max segments") {
    Document doc = segment(doc_with_tokens(4100), 500, 8);
    REQUIRE(doc.segments.size() == 8);
    CHECK(doc.segments.back().end == 4000);  // tokens beyond 500*8 dropped
}

TEST_CASE("segment rejects an empty document") {
    try {
        segment(doc_with_tokens(0), 500);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::empty_document);
    }
}

TEST_CASE("segments concatenate back to the truncated token prefix") {
    for (int n : {1, 7, 499, 500, 501, 1250}) {
        Document doc = segment(doc_with_tokens(n), 500, 2);
        int covered = 0;
        for (const Span& s : doc.segments) {
            CHECK(s.begin == covered);
            covered = s.end;
        }
        CHECK(covered == std::min(n, 1000));
    }
}

namespace {

Corpus corpus_with_class_sizes(const std::vector<int>& sizes) {
    Corpus corpus;
    corpus.num_levels = static_cast<int>(sizes.size());
    int id = 0;
    for (size_t level = 0; level < sizes.size(); ++level)
        for (int d = 0; d < sizes[level]; ++d) {
            Document doc = doc_with_tokens(5 + d, static_cast<int>(level) + 1);
            doc.id = "doc" + std::to_string(id++);
            corpus.documents.push_back(std::move(doc));
        }
    return corpus;
}

}  // namespace

TEST_CASE("split produces 80/10/10 per class and is an exact partition") {
    Corpus corpus = corpus_with_class_sizes({100, 100, 100});
    CorpusSplit parts = split(corpus, {0.8, 0.1, 0.1}, 42);

    std::map<int, int> train_by_level, valid_by_level, test_by_level;
    for (const Document& d : parts.train.documents) ++train_by_level[d.level];
    for (const Document& d : parts.valid.documents) ++valid_by_level[d.level];
    for (const Document& d : parts.test.documents) ++test_by_level[d.level];
    for (int level = 1; level <= 3; ++level) {
        CHECK(train_by_level[level] == 80);
        CHECK(valid_by_level[level] == 10);
        CHECK(test_by_level[level] == 10);
    }

    std::multiset<std::string> all_ids, part_ids;
    for (const Document& d : corpus.documents) all_ids.insert(d.id);
    for (const Corpus* part : {&parts.train, &parts.valid, &parts.test})
        for (const Document& d : part->documents) part_ids.insert(d.id);
    CHECK(all_ids == part_ids);
}

TEST_CASE("split is deterministic for a fixed seed") {
    Corpus corpus = corpus_with_class_sizes({20, 20});
    CorpusSplit a = split(corpus, {0.8, 0.1, 0.1}, 7);
    CorpusSplit b = split(corpus, {0.8, 0.1, 0.1}, 7);
    REQUIRE(a.train.documents.size() == b.train.documents.size());
    for (size_t i = 0; i < a.train.documents.size(); ++i)
        CHECK(a.train.documents[i].id == b.train.documents[i].id);
    CorpusSplit c = split(corpus, {0.8, 0.1, 0.1}, 8);
    bool same = a.train.documents.size() == c.train.documents.size();
    if (same)
        for (size_t i = 0; i < a.train.documents.size(); ++i)
            same = same && a.train.documents[i].id == c.train.documents[i].id;
    CHECK_FALSE(same);
}

TEST_CASE("split rejects a 2-document class") {
    Corpus corpus = corpus_with_class_sizes({10, 2});
    try {
        split(corpus, {0.8, 0.1, 0.1}, 1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::class_too_small);
    }
}

TEST_CASE("split keeps every class in every part") {
    Corpus corpus = corpus_with_class_sizes({3, 4, 100});
    CorpusSplit parts = split(corpus, {0.8, 0.1, 0.1}, 3);
    for (const Corpus* part : {&parts.train, &parts.valid, &parts.test}) {
        std::set<int> levels;
        for (const Document& d : part->documents) levels.insert(d.level);
        CHECK(levels == std::set<int>{1, 2, 3});
    }
}

TEST_CASE("load_graded_lexicon groups and deduplicates") {
    std::string path = write_temp("lex.tsv", "cat\t1\ndog\t1\nphotosynthesis\t4\ncat\t1\n");
    GradedLexicon lex = load_graded_lexicon(path);
    CHECK(lex.k == 4);
    CHECK(*lex.level(1) == std::set<std::string>{"cat", "dog"});
    CHECK(*lex.level(4) == std::set<std::string>{"photosynthesis"});
    CHECK(lex.level(2) == nullptr);
    std::remove(path.c_str());
}

TEST_CASE("load_graded_lexicon rejects non-integer levels") {
    std::string path = write_temp("lex_bad.tsv", "cat\tx\n");
    try {
        load_graded_lexicon(path);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::bad_level_token);
    }
    std::remove(path.c_str());
}

TEST_CASE("length_stats matches the worked examples") {
    Corpus corpus;
    corpus.num_levels = 3;
    int id = 0;
    auto add = [&](int level, int tokens) {
        Document d = doc_with_tokens(tokens, level);
        d.id = "s" + std::to_string(id++);
        corpus.documents.push_back(std::move(d));
    };
    add(1, 100);
    add(1, 200);
    add(1, 300);
    add(2, 10);
    add(2, 20);
    add(3, 50);

    LengthStats stats = length_stats(corpus);
    CHECK(stats.per_class[0].average == doctest::Approx(200));
    CHECK(stats.per_class[0].median == doctest::Approx(200));
    CHECK(stats.per_class[0].minimum == doctest::Approx(100));
    CHECK(stats.per_class[0].maximum == doctest::Approx(300));
    CHECK(stats.per_class[1].median == doctest::Approx(15));  // even-size median
    CHECK(stats.per_class[2].average == doctest::Approx(50));
    CHECK(stats.per_class[2].median == doctest::Approx(50));
    CHECK(stats.per_class[2].minimum == doctest::Approx(50));
    CHECK(stats.per_class[2].maximum == doctest::Approx(50));
}

TEST_CASE("length_stats is permutation invariant and rejects empty classes") {
    Corpus corpus = corpus_with_class_sizes({5, 7});
    LengthStats a = length_stats(corpus);
    std::reverse(corpus.documents.begin(), corpus.documents.end());
    LengthStats b = length_stats(corpus);
    for (size_t c = 0; c < a.per_class.size(); ++c) {
        CHECK(a.per_class[c].average == b.per_class[c].average);
        CHECK(a.per_class[c].median == b.per_class[c].median);
    }

    corpus.num_levels = 3;  // level 3 has no documents
    try {
        length_stats(corpus);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::empty_class);
    }
}

TEST_CASE("resource tables load by convention and tolerate absences") {
    auto dir = std::filesystem::temp_directory_path() / "readlab_resources";
    std::filesystem::create_directories(dir);
    {
        std::ofstream strokes(dir / "char_strokes.tsv");
        strokes << "天\t4\n日\t4\n";
        std::ofstream freq(dir / "word_freq.tsv");
        freq << "cat\t100.5\n";
    }
    ResourceTables tables = load_resource_tables(dir.string());
    CHECK(tables.char_strokes.at("天") == doctest::Approx(4));
    CHECK(tables.word_freq.at("cat") == doctest::Approx(100.5));
    CHECK(tables.char_freq.empty());
    CHECK(tables.idioms.empty());
    std::filesystem::remove_all(dir);
}

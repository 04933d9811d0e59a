#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "readlab/anchors.hpp"
#include "readlab/error.hpp"
#include "readlab/rng.hpp"

using namespace readlab;

namespace {

Corpus corpus_from_words(const std::vector<std::vector<std::string>>& docs) {
    Corpus corpus;
    corpus.num_levels = 1;
    int id = 0;
    for (const auto& words : docs) {
        Document doc;
        doc.id = "d" + std::to_string(id++);
        doc.level = 1;
        for (const auto& w : words) doc.tokens.push_back(make_token(w));
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

WordEmbeddingTable pair_embeddings() {
    // two tight pairs far apart, plus one distant outlier
    WordEmbeddingTable table;
    table.dim = 2;
    auto put = [&](const char* w, double x, double y) {
        Eigen::VectorXd v(2);
        v << x, y;
        table.vectors[w] = v;
    };
    put("a1", 1.0, 0.01);
    put("a2", 1.0, -0.01);
    put("b1", -1.0, 0.01);
    put("b2", -1.0, -0.01);
    put("far", 0.0, 1.0);
    return table;
}

}  // namespace

TEST_CASE("select_level_words intersects lexicon and corpus with a frequency floor") {
    GradedLexicon lex;
    lex.levels[1] = {"a", "b"};
    lex.levels[2] = {"c"};
    lex.k = 2;
    Corpus corpus = corpus_from_words({{"b", "c", "b"}, {"c", "x"}});
    auto selected = select_level_words(lex, corpus, 1);
    CHECK(selected[1] == std::vector<std::string>{"b"});
    CHECK(selected[2] == std::vector<std::string>{"c"});

    auto strict = select_level_words(lex, corpus, 3);
    CHECK(strict[1].empty());  // b occurs twice < 3
    CHECK(strict[2].empty());

    GradedLexicon disjoint;
    disjoint.levels[1] = {"zz"};
    disjoint.k = 1;
    auto none = select_level_words(disjoint, corpus, 1);
    CHECK(none[1].empty());
}

TEST_CASE("kmeans recovers two tight pairs") {
    WordEmbeddingTable table = pair_embeddings();
    auto clusters = cluster_words({"a1", "a2", "b1", "b2"}, table, 2, 5);
    REQUIRE(clusters.size() == 2);
    std::set<std::string> first(clusters[0].begin(), clusters[0].end());
    std::set<std::string> second(clusters[1].begin(), clusters[1].end());
    CHECK(first == std::set<std::string>{"a1", "a2"});
    CHECK(second == std::set<std::string>{"b1", "b2"});
}

TEST_CASE("singleton clusters are removed") {
    WordEmbeddingTable table = pair_embeddings();
    auto clusters = cluster_words({"a1", "a2", "b1", "b2", "far"}, table, 3, 5);
    REQUIRE(clusters.size() == 2);  // the outlier's cluster is dropped
    for (const auto& cluster : clusters) CHECK(cluster.size() >= 2);
}

TEST_CASE("clustering is deterministic under a fixed seed") {
    WordEmbeddingTable table = pair_embeddings();
    auto a = cluster_words({"a1", "a2", "b1", "b2", "far"}, table, 2, 17);
    auto b = cluster_words({"a1", "a2", "b1", "b2", "far"}, table, 2, 17);
    CHECK(a == b);
}

TEST_CASE("words without embeddings are dropped and counted") {
    WordEmbeddingTable table = pair_embeddings();
    int dropped = 0;
    auto clusters = cluster_words({"a1", "a2", "ghost", "b1", "b2"}, table, 2, 1, &dropped);
    CHECK(dropped == 1);
    for (const auto& cluster : clusters)
        for (const auto& w : cluster) CHECK(w != "ghost");
}

TEST_CASE("too few embedded words raises") {
    WordEmbeddingTable table = pair_embeddings();
    try {
        cluster_words({"a1", "ghost"}, table, 1, 1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::too_few_words);
    }
}

TEST_CASE("output clusters only contain input words, sizes within bounds") {
    Rng rng(23);
    WordEmbeddingTable table;
    table.dim = 4;
    std::vector<std::string> words;
    for (int i = 0; i < 40; ++i) {
        std::string w = "w" + std::to_string(i);
        Eigen::VectorXd v(4);
        for (int d = 0; d < 4; ++d) v[d] = rng.normal();
        table.vectors[w] = v;
        words.push_back(w);
    }
    auto clusters = cluster_words(words, table, 6, 9);
    size_t clustered = 0;
    std::set<std::string> seen;
    for (const auto& cluster : clusters) {
        CHECK(cluster.size() >= 2);
        for (const auto& w : cluster) {
            CHECK(std::find(words.begin(), words.end(), w) != words.end());
            CHECK(seen.insert(w).second);  // within-level disjoint
        }
        clustered += cluster.size();
    }
    CHECK(clustered <= words.size());
}

TEST_CASE("the reference per-level anchor-topic counts add up") {
    // English run: (16, 21, 14, 9) anchored topics over levels 1..4;
    // Chinese run: (15, 36, 18, 11)
    AnchorSet english;
    auto fill = [](AnchorSet& set, const std::vector<int>& per_level) {
        int word = 0;
        for (size_t level = 0; level < per_level.size(); ++level)
            for (int c = 0; c < per_level[level]; ++c)
                set.clusters_by_level[static_cast<int>(level) + 1].push_back(
                    {"x" + std::to_string(word++), "x" + std::to_string(word++)});
    };
    fill(english, {16, 21, 14, 9});
    CHECK(english.total_clusters() == 60);
    AnchorSet chinese;
    fill(chinese, {15, 36, 18, 11});
    CHECK(chinese.total_clusters() == 80);
}

TEST_CASE("build_anchor_set respects k overrides and skips thin levels") {
    GradedLexicon lex;
    lex.levels[1] = {"a1", "a2", "b1", "b2"};
    lex.levels[2] = {"far"};  // single embedded word -> no anchors
    lex.k = 2;
    Corpus corpus = corpus_from_words({{"a1", "a2", "b1", "b2", "far"},
                                       {"a1", "a2", "b1", "b2", "far"},
                                       {"a1", "a2", "b1", "b2", "far"},
                                       {"a1", "a2", "b1", "b2", "far"},
                                       {"a1", "a2", "b1", "b2", "far"}});
    WordEmbeddingTable table = pair_embeddings();
    AnchorSet set = build_anchor_set(lex, corpus, table, {{1, 2}}, 11, 5);
    CHECK(set.clusters_by_level.count(1) == 1);
    CHECK(set.clusters_by_level.count(2) == 0);
    CHECK(set.total_clusters() == 2);

    // bit-identical rerun
    AnchorSet again = build_anchor_set(lex, corpus, table, {{1, 2}}, 11, 5);
    CHECK(set.clusters_by_level == again.clusters_by_level);
}

TEST_CASE("empty lexicon/corpus overlap gives an empty anchor set") {
    GradedLexicon lex;
    lex.levels[1] = {"nope"};
    lex.k = 1;
    Corpus corpus = corpus_from_words({{"a1", "b1"}});
    AnchorSet set = build_anchor_set(lex, corpus, pair_embeddings(), {}, 1, 1);
    CHECK(set.empty());
}

TEST_CASE("anchor sets round-trip through json") {
    AnchorSet set;
    set.clusters_by_level[1] = {{"a", "b"}, {"c", "d"}};
    set.clusters_by_level[3] = {{"e", "f"}};
    auto path = (std::filesystem::temp_directory_path() / "anchors_test.json").string();
    set.save(path);
    AnchorSet loaded = AnchorSet::load(path);
    CHECK(loaded.clusters_by_level == set.clusters_by_level);
    CHECK(loaded.total_clusters() == 3);
    std::remove(path.c_str());
}

TEST_CASE("embedding loader handles headers and dimension checks") {
    auto path = (std::filesystem::temp_directory_path() / "emb_test.txt").string();
    {
        std::ofstream out(path);
        out << "2 3\n";
        out << "cat 1.0 0.0 0.5\n";
        out << "dog 0.0 1.0 -0.5\n";
    }
    WordEmbeddingTable table = load_embeddings(path);
    CHECK(table.dim == 3);
    CHECK(table.vectors.at("cat")[2] == doctest::Approx(0.5));
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "cat 1.0 0.0\n";
        out << "dog 1.0\n";
    }
    CHECK_THROWS_AS(load_embeddings(path), Error);
    std::remove(path.c_str());
}

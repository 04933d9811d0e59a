#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "readlab/corpus.hpp"

namespace readlab {

enum class FeatureKind { traditional, topic, combined };

struct SchemaEntry {
    std::string name;
    int dim = 1;
    bool resource_dependent = false;
    bool annotation_dependent = false;
};

struct FeatureSchema {
    std::vector<SchemaEntry> entries;

    int total_dim() const;
    // Offset of the named entry in the flat vector, or -1.
    int offset_of(const std::string& name) const;
};

struct FeatureVector {
    std::vector<double> values;
    std::shared_ptr<const FeatureSchema> schema;
    FeatureKind kind = FeatureKind::traditional;
    // Entries zeroed because their resource table or annotation layer was
    // absent.
    std::vector<std::string> zeroed_blocks;

    int dim() const { return static_cast<int>(values.size()); }
};

// Tag/relation lists are mapped positionally; anything unlisted lands in the
// reserved final bucket, so the distribution dims stay fixed (57 and 14).
struct FeatureConfig {
    std::vector<std::string> pos_tags;       // up to 56 tags + unknown bucket
    std::vector<std::string> dep_relations;  // up to 13 relations + other bucket
    std::set<std::string> clause_delimiters;
    bool strict_annotations = false;  // strict: missing POS layer raises

    static FeatureConfig defaults();
};

inline constexpr int kStrokeBins = 25;
inline constexpr int kPosDims = 57;
inline constexpr int kSentenceLengthBins = 30;
inline constexpr int kSentenceLengthBinWidth = 5;
inline constexpr int kDepDims = 14;

std::shared_ptr<const FeatureSchema> char_feature_schema();
std::shared_ptr<const FeatureSchema> word_feature_schema();
std::shared_ptr<const FeatureSchema> sentence_feature_schema();
std::shared_ptr<const FeatureSchema> paragraph_feature_schema();
std::shared_ptr<const FeatureSchema> traditional_feature_schema();

FeatureVector extract_char_features(const Document& doc, const ResourceTables& resources,
                                    const FeatureConfig& config = FeatureConfig::defaults());
FeatureVector extract_word_features(const Document& doc, const ResourceTables& resources,
                                    const FeatureConfig& config = FeatureConfig::defaults());
FeatureVector extract_sentence_features(const Document& doc,
                                        const FeatureConfig& config = FeatureConfig::defaults());
FeatureVector extract_paragraph_features(const Document& doc,
                                         const FeatureConfig& config = FeatureConfig::defaults());

// f_alpha: char || word || sentence || paragraph in schema order.
FeatureVector extract_traditional(const Document& doc, const ResourceTables& resources,
                                  const FeatureConfig& config = FeatureConfig::defaults());

}  // namespace readlab

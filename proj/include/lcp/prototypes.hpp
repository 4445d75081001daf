#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcp/corpus.hpp"
#include "lcp/encoder.hpp"
#include "lcp/pcem.hpp"

namespace lcp {

enum class PrototypeKind { precedent, provision };

const char* to_string(PrototypeKind kind);

struct Prototype {
    std::size_t label_index = 0;
    PrototypeKind kind = PrototypeKind::precedent;
    std::size_t slot = 0;  // cluster index within the label; 0 for provisions
    Embedding vector;
    std::string source;  // training sample id, "centroid", or provision key
};

inline constexpr const char* kCentroidSource = "centroid";

struct DiscoveryResult {
    std::vector<Prototype> prototypes;           // label-major, slot order
    std::vector<std::size_t> labels_without_positives;
};

/// Clusters the positives of every label and snaps each centroid to its
/// highest-cosine training sample when that cosine exceeds `s_min`.
DiscoveryResult discover_prototypes(const std::vector<Embedding>& train_embeddings,
                                    const std::vector<std::string>& sample_ids,
                                    const std::vector<LabelVector>& labels, std::size_t label_count, std::size_t k,
                                    double s_min, std::uint64_t seed, unsigned jobs = 1);

/// One provision prototype per label from its encoded provision text.
/// Throws DataError listing every label without provision text.
std::vector<Prototype> encode_provision_prototypes(const LabelSet& labels, const EncoderParams& encoder);

/// Provision prototypes looked up as "provision:<key>" in an embedding table.
std::vector<Prototype> provision_prototypes_from_table(const LabelSet& labels, const EmbeddingTable& table);

std::string provision_record_id(const CitationRef& ref);

/// {"label", "kind", "source", "vector"} per line.
std::string format_prototype_dump(const std::vector<Prototype>& prototypes);
std::vector<Prototype> parse_prototype_dump(const std::string& contents);

}  // namespace lcp

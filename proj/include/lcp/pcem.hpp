#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lcp/encoder.hpp"
#include "lcp/util.hpp"

namespace lcp {

// Little-endian layout:
//   "PCEM" | u32 version | u32 dim | u64 count
//   count x ( u32 id_len | id bytes (UTF-8) | dim x f32 )
inline constexpr std::string_view kPcemMagic = "PCEM";
inline constexpr std::uint32_t kPcemVersion = 1;

struct PcemRecord {
    std::string id;
    std::vector<float> values;

    bool operator==(const PcemRecord&) const = default;
};

class PcemError : public DataError {
public:
    enum class Kind { bad_magic, version_mismatch, truncated, dimension_mismatch, trailing_data, invalid_id };

    PcemError(Kind kind, const std::string& what) : DataError(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

std::string encode_pcem(const std::vector<PcemRecord>& records, std::uint32_t dim);
std::vector<PcemRecord> decode_pcem(std::string_view bytes, std::uint32_t* dim_out = nullptr);

/// Throws PcemError(dimension_mismatch) if records disagree on dimension.
void write_embedding_file(const std::string& path, const std::vector<PcemRecord>& records);
/// expected_dim = 0 accepts any dimension.
std::vector<PcemRecord> read_embedding_file(const std::string& path, std::uint32_t expected_dim = 0);

PcemRecord to_record(const std::string& id, const Embedding& e);
Embedding to_embedding(const PcemRecord& r);

/// id -> embedding lookup for frozen-encoder runs.
using EmbeddingTable = std::unordered_map<std::string, Embedding>;
EmbeddingTable to_table(const std::vector<PcemRecord>& records);

}  // namespace lcp

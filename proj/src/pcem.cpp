#include "lcp/pcem.hpp"

#include "lcp/binary_io.hpp"

#include <cmath>

namespace lcp {
namespace {

[[noreturn]] void truncated(const char* what) {
    throw PcemError(PcemError::Kind::truncated, std::string("PCEM: truncated while reading ") + what);
}

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
        if (len == 0 || i + len > s.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
        }
        i += len;
    }
    return true;
}

}  // namespace

std::string encode_pcem(const std::vector<PcemRecord>& records, std::uint32_t dim) {
    ByteWriter out;
    out.reserve(20 + records.size() * (8 + 4 * static_cast<std::size_t>(dim)));
    out.put_bytes(kPcemMagic);
    out.put<std::uint32_t>(kPcemVersion);
    out.put<std::uint32_t>(dim);
    out.put<std::uint64_t>(records.size());
    for (const auto& r : records) {
        if (r.values.size() != dim) {
            throw PcemError(PcemError::Kind::dimension_mismatch,
                            "PCEM: record '" + r.id + "' has dimension " + std::to_string(r.values.size()) +
                                ", expected " + std::to_string(dim));
        }
        if (!valid_utf8(r.id)) throw PcemError(PcemError::Kind::invalid_id, "PCEM: id is not valid UTF-8");
        out.put_string(r.id);
        for (float v : r.values) out.put<float>(v);
    }
    return out.take();
}

std::vector<PcemRecord> decode_pcem(std::string_view bytes, std::uint32_t* dim_out) {
    ByteReader in(bytes, truncated);
    if (bytes.size() < 4 || bytes.substr(0, 4) != kPcemMagic) {
        throw PcemError(PcemError::Kind::bad_magic, "PCEM: bad magic");
    }
    in.take(4, "magic");
    const auto version = in.get<std::uint32_t>("version");
    if (version != kPcemVersion) {
        throw PcemError(PcemError::Kind::version_mismatch,
                        "PCEM: version mismatch (file " + std::to_string(version) + ", reader 1)");
    }
    const auto dim = in.get<std::uint32_t>("dim");
    const auto count = in.get<std::uint64_t>("count");
    if (dim == 0 && count > 0) throw PcemError(PcemError::Kind::dimension_mismatch, "PCEM: zero dimension");
    // every record needs at least 4 + 4*dim bytes
    const std::uint64_t min_record = 4 + 4ULL * dim;
    if (count > in.remaining() / min_record) {
        throw PcemError(PcemError::Kind::truncated, "PCEM: truncated (count exceeds file size)");
    }
    std::vector<PcemRecord> records;
    records.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
        PcemRecord r;
        const auto id_len = in.get<std::uint32_t>("id length");
        r.id = std::string(in.take(id_len, "id"));
        if (!valid_utf8(r.id)) throw PcemError(PcemError::Kind::invalid_id, "PCEM: id is not valid UTF-8");
        r.values.resize(dim);
        for (auto& v : r.values) v = in.get<float>("vector");
        records.push_back(std::move(r));
    }
    if (in.remaining() != 0) {
        throw PcemError(PcemError::Kind::trailing_data,
                        "PCEM: " + std::to_string(in.remaining()) + " trailing bytes after last record");
    }
    if (dim_out) *dim_out = dim;
    return records;
}

void write_embedding_file(const std::string& path, const std::vector<PcemRecord>& records) {
    const auto dim = records.empty() ? 0u : static_cast<std::uint32_t>(records.front().values.size());
    write_file(path, encode_pcem(records, dim));
}

std::vector<PcemRecord> read_embedding_file(const std::string& path, std::uint32_t expected_dim) {
    std::uint32_t dim = 0;
    auto records = decode_pcem(read_file(path), &dim);
    if (expected_dim != 0 && !records.empty() && dim != expected_dim) {
        throw PcemError(PcemError::Kind::dimension_mismatch,
                        "PCEM: dimension " + std::to_string(dim) + " does not match expected " +
                            std::to_string(expected_dim));
    }
    return records;
}

PcemRecord to_record(const std::string& id, const Embedding& e) {
    PcemRecord r{id, std::vector<float>(static_cast<std::size_t>(e.vector.size()))};
    for (Eigen::Index i = 0; i < e.vector.size(); ++i) r.values[static_cast<std::size_t>(i)] = static_cast<float>(e.vector(i));
    return r;
}

Embedding to_embedding(const PcemRecord& r) {
    Embedding e;
    e.vector.resize(static_cast<Eigen::Index>(r.values.size()));
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        if (!std::isfinite(r.values[i])) throw DataError("PCEM: non-finite value in record '" + r.id + "'");
        e.vector(static_cast<Eigen::Index>(i)) = r.values[i];
    }
    const double n = e.vector.norm();
    e.normalized = std::abs(n - 1.0) <= 1e-6;
    return e;
}

EmbeddingTable to_table(const std::vector<PcemRecord>& records) {
    EmbeddingTable table;
    for (const auto& r : records) {
        if (!table.emplace(r.id, to_embedding(r)).second) throw DataError("PCEM: duplicate id '" + r.id + "'");
    }
    return table;
}

}  // namespace lcp

#include <cmath>

#include "lcp/binary_io.hpp"
#include "lcp/trainer.hpp"
#include "lcp/util.hpp"

namespace lcp {
namespace {

// "PCKP" | u32 version | model and training state, all little-endian,
// doubles stored bit-for-bit.
constexpr std::string_view kMagic = "PCKP";
constexpr std::uint32_t kVersion = 1;

[[noreturn]] void truncated(const char* what) {
    throw DataError(std::string("checkpoint: truncated while reading ") + what);
}

using Reader = ByteReader<void (*)(const char*)>;

void put_matrix(ByteWriter& out, const Eigen::MatrixXd& m) {
    out.put<std::uint64_t>(static_cast<std::uint64_t>(m.rows()));
    out.put<std::uint64_t>(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) out.put<double>(m(r, c));
}

void put_vector(ByteWriter& out, const Eigen::VectorXd& v) {
    out.put<std::uint64_t>(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out.put<double>(v(i));
}

std::uint64_t get_size(Reader& in, const char* what) {
    const auto n = in.get<std::uint64_t>(what);
    // a size can never exceed the bytes left
    if (n > in.remaining()) truncated(what);
    return n;
}

Eigen::MatrixXd get_matrix(Reader& in, const char* what) {
    const auto rows = in.get<std::uint64_t>(what);
    const auto cols = in.get<std::uint64_t>(what);
    if (cols != 0 && rows > in.remaining() / 8 / cols) truncated(what);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = in.get<double>(what);
    return m;
}

Eigen::VectorXd get_vector(Reader& in, const char* what) {
    const auto n = get_size(in, what);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = in.get<double>(what);
    return v;
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& checkpoint) {
    const auto& m = checkpoint.model;
    ByteWriter out;
    out.put_bytes(kMagic);
    out.put<std::uint32_t>(kVersion);
    out.put<std::uint8_t>(static_cast<std::uint8_t>(m.mode));
    out.put<std::uint8_t>(static_cast<std::uint8_t>(m.loss.head_input));
    out.put<std::uint8_t>(m.loss.head_uses_provisions ? 1 : 0);
    const auto& w = m.loss.weights;
    for (double v : {w.lambda1, w.lambda2, w.lambda3, w.delta, w.epsilon, w.s_max, w.s_min}) out.put<double>(v);
    out.put<std::uint64_t>(checkpoint.epoch);
    out.put<double>(checkpoint.validation_macro_f1);

    out.put<std::uint64_t>(m.label_keys.size());
    for (const auto& k : m.label_keys) out.put_string(k);

    out.put<std::uint64_t>(m.encoder.hash_dim);
    out.put<std::uint64_t>(m.encoder.seed);
    put_matrix(out, m.encoder.weight);
    put_vector(out, m.encoder.bias);
    put_matrix(out, m.head.weight);
    put_vector(out, m.head.bias);

    out.put<std::uint64_t>(m.prototypes.size());
    for (const auto& p : m.prototypes) {
        out.put<std::uint64_t>(p.label_index);
        out.put<std::uint8_t>(static_cast<std::uint8_t>(p.kind));
        out.put<std::uint64_t>(p.slot);
        out.put_string(p.source);
        out.put<std::uint8_t>(p.vector.normalized ? 1 : 0);
        put_vector(out, p.vector.vector);
    }
    return out.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
    if (bytes.size() < 4 || bytes.substr(0, 4) != kMagic) throw DataError("checkpoint: bad magic");
    Reader in(bytes, truncated);
    in.take(4, "magic");
    const auto version = in.get<std::uint32_t>("version");
    if (version != kVersion) {
        throw DataError("checkpoint: unsupported version " + std::to_string(version));
    }
    Checkpoint c;
    auto& m = c.model;
    const auto mode = in.get<std::uint8_t>("mode");
    if (mode > static_cast<std::uint8_t>(TrainMode::frozen)) throw DataError("checkpoint: bad mode");
    m.mode = static_cast<TrainMode>(mode);
    const auto head_input = in.get<std::uint8_t>("head input");
    if (head_input > 1) throw DataError("checkpoint: bad head input");
    m.loss.head_input = static_cast<HeadInput>(head_input);
    m.loss.head_uses_provisions = in.get<std::uint8_t>("flags") != 0;
    auto& w = m.loss.weights;
    for (double* v : {&w.lambda1, &w.lambda2, &w.lambda3, &w.delta, &w.epsilon, &w.s_max, &w.s_min}) {
        *v = in.get<double>("weights");
    }
    c.epoch = static_cast<std::size_t>(in.get<std::uint64_t>("epoch"));
    c.validation_macro_f1 = in.get<double>("validation f1");

    const auto keys = get_size(in, "label keys");
    for (std::uint64_t i = 0; i < keys; ++i) m.label_keys.push_back(in.get_string("label key"));

    m.encoder.hash_dim = static_cast<std::size_t>(in.get<std::uint64_t>("hash dim"));
    m.encoder.seed = in.get<std::uint64_t>("encoder seed");
    m.encoder.weight = get_matrix(in, "encoder weight");
    m.encoder.bias = get_vector(in, "encoder bias");
    m.head.weight = get_matrix(in, "head weight");
    m.head.bias = get_vector(in, "head bias");

    const auto count = get_size(in, "prototypes");
    for (std::uint64_t i = 0; i < count; ++i) {
        Prototype p;
        p.label_index = static_cast<std::size_t>(in.get<std::uint64_t>("prototype label"));
        const auto kind = in.get<std::uint8_t>("prototype kind");
        if (kind > 1) throw DataError("checkpoint: bad prototype kind");
        p.kind = static_cast<PrototypeKind>(kind);
        p.slot = static_cast<std::size_t>(in.get<std::uint64_t>("prototype slot"));
        p.source = in.get_string("prototype source");
        p.vector.normalized = in.get<std::uint8_t>("prototype flag") != 0;
        p.vector.vector = get_vector(in, "prototype vector");
        if (p.label_index >= m.label_keys.size()) throw DataError("checkpoint: prototype label out of range");
        m.prototypes.push_back(std::move(p));
    }
    if (in.remaining() != 0) throw DataError("checkpoint: trailing bytes");
    if (static_cast<std::size_t>(m.head.weight.rows()) != m.label_keys.size() ||
        m.head.bias.size() != m.head.weight.rows()) {
        throw DataError("checkpoint: head shape does not match label count");
    }
    if (m.encoder.bias.size() != m.encoder.weight.rows()) throw DataError("checkpoint: encoder shape mismatch");
    return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
    write_file(path, encode_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::string& path) { return decode_checkpoint(read_file(path)); }

}  // namespace lcp

#pragma once

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>

namespace lcp {

/// Appends trivially-copyable values in little-endian byte order.
class ByteWriter {
public:
    template <class T>
    void put(T value) {
        static_assert(std::is_trivially_copyable_v<T>);
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &value, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
        out_.append(reinterpret_cast<const char*>(bytes), sizeof(T));
    }
    void put_bytes(std::string_view bytes) { out_.append(bytes); }
    void put_string(std::string_view s) {
        put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
        put_bytes(s);
    }

    const std::string& bytes() const { return out_; }
    std::string take() { return std::move(out_); }
    void reserve(std::size_t n) { out_.reserve(n); }

private:
    std::string out_;
};

/// Reads little-endian values; `on_short` is invoked (and must throw) when the
/// buffer runs out.
template <class OnShort>
class ByteReader {
public:
    ByteReader(std::string_view bytes, OnShort on_short) : bytes_(bytes), on_short_(on_short) {}

    template <class T>
    T get(const char* what) {
        need(sizeof(T), what);
        unsigned char raw[sizeof(T)];
        std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, raw, sizeof(T));
        return value;
    }
    std::string_view take(std::size_t n, const char* what) {
        need(n, what);
        auto out = bytes_.substr(pos_, n);
        pos_ += n;
        return out;
    }
    std::string get_string(const char* what) {
        const auto n = get<std::uint32_t>(what);
        return std::string(take(n, what));
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    void need(std::size_t n, const char* what) {
        if (remaining() < n) on_short_(what);
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
    OnShort on_short_;
};

}  // namespace lcp

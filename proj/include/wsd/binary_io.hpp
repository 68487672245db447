#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsd {

static_assert(std::endian::native == std::endian::little,
              "binary artifacts are written little-endian; big-endian hosts are unsupported");

/// Append-only little-endian encoder used by all persisted artifacts.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void i64(std::int64_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void str(std::string_view s);
    void magic(std::string_view m) { buf_.append(m); }
    void f64s(std::span<const double> v);

    const std::string& bytes() const { return buf_; }
    void save(const std::filesystem::path& path) const;

private:
    void raw(const void* p, std::size_t n);
    std::string buf_;
};

/// Bounds-checked decoder; every failure reports the byte offset.
class ByteReader {
public:
    explicit ByteReader(std::string bytes, std::string source = "<memory>");
    static ByteReader from_file(const std::filesystem::path& path);

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64();
    double f64();
    std::string str();
    std::vector<double> f64s();

    /// Consumes `expected.size()` bytes and throws FormatError unless they equal `expected`.
    void expect_magic(std::string_view expected);
    /// Throws FormatError unless the next u32 equals `expected`.
    void expect_version(std::uint32_t expected);
    void expect_end() const;

    std::size_t offset() const { return pos_; }
    const std::string& source() const { return source_; }
    [[noreturn]] void fail(const std::string& what) const;

private:
    void raw(void* p, std::size_t n);
    std::string buf_;
    std::string source_;
    std::size_t pos_ = 0;
};

/// 64-bit FNV-1a, used for schema fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace wsd

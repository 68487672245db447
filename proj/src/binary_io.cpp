#include "wsd/binary_io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "wsd/error.hpp"

namespace wsd {

void ByteWriter::raw(const void* p, std::size_t n) {
    buf_.append(static_cast<const char*>(p), n);
}

void ByteWriter::str(std::string_view s) {
    u64(s.size());
    buf_.append(s);
}

void ByteWriter::f64s(std::span<const double> v) {
    u64(v.size());
    raw(v.data(), v.size_bytes());
}

void ByteWriter::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out) throw Error("write failed: " + path.string());
}

ByteReader::ByteReader(std::string bytes, std::string source)
    : buf_(std::move(bytes)), source_(std::move(source)) {}

ByteReader ByteReader::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return ByteReader(std::move(bytes), path.string());
}

void ByteReader::fail(const std::string& what) const {
    throw FormatError(source_ + " @" + std::to_string(pos_) + ": " + what);
}

void ByteReader::raw(void* p, std::size_t n) {
    if (buf_.size() - pos_ < n) fail("unexpected end of data");
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
}

std::uint8_t ByteReader::u8() {
    std::uint8_t v;
    raw(&v, sizeof v);
    return v;
}

std::uint32_t ByteReader::u32() {
    std::uint32_t v;
    raw(&v, sizeof v);
    return v;
}

std::uint64_t ByteReader::u64() {
    std::uint64_t v;
    raw(&v, sizeof v);
    return v;
}

std::int64_t ByteReader::i64() {
    std::int64_t v;
    raw(&v, sizeof v);
    return v;
}

double ByteReader::f64() {
    double v;
    raw(&v, sizeof v);
    return v;
}

std::string ByteReader::str() {
    const auto n = u64();
    if (n > buf_.size() - pos_) fail("string length " + std::to_string(n) + " exceeds remaining data");
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
}

std::vector<double> ByteReader::f64s() {
    const auto n = u64();
    if (n > (buf_.size() - pos_) / sizeof(double)) fail("array length " + std::to_string(n) + " exceeds remaining data");
    std::vector<double> v(n);
    raw(v.data(), n * sizeof(double));
    return v;
}

void ByteReader::expect_magic(std::string_view expected) {
    if (buf_.size() - pos_ < expected.size() ||
        std::string_view(buf_).substr(pos_, expected.size()) != expected)
        fail("bad magic, expected \"" + std::string(expected) + "\"");
    pos_ += expected.size();
}

void ByteReader::expect_version(std::uint32_t expected) {
    const auto got = u32();
    if (got != expected)
        fail("unsupported version " + std::to_string(got) + " (expected " + std::to_string(expected) + ")");
}

void ByteReader::expect_end() const {
    if (pos_ != buf_.size()) fail(std::to_string(buf_.size() - pos_) + " trailing bytes");
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace wsd

#include "wsd/corpus_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "wsd/binary_io.hpp"
#include "wsd/error.hpp"
#include "wsd/text.hpp"

namespace wsd {

namespace {

constexpr std::string_view kMagic = "WSDINDEX";
constexpr std::uint32_t kVersion = 1;

constexpr std::uint64_t pack(std::uint32_t doc, std::uint32_t pos) {
    return (static_cast<std::uint64_t>(doc) << 32) | pos;
}

}  // namespace

void IndexConfig::validate() const {
    if (neighborhood < 1) throw Error("index config: neighborhood must be >= 1");
    if (!(smoothing_alpha >= 0.0) || !std::isfinite(smoothing_alpha))
        throw Error("index config: smoothing_alpha must be a finite value >= 0");
}

std::string IndexConfig::estimator_description() const {
    std::ostringstream os;
    os << "PMI = log2(p(w1^w2) / (p(w1) p(w2))); p(w) = (c(w)+a)/(T+2a); "
          "p(w1^w2) = (c12+a)/(P+2a); c12 counts same-document position pairs at distance <= N "
          "(unordered when w1 = w2); P = ordered same-document position pairs at distance <= N; "
          "a = "
       << smoothing_alpha << ", N = " << neighborhood << ", case_folding = " << (case_folding ? "true" : "false");
    return os.str();
}

std::uint64_t ordered_pairs_within(std::uint64_t length, std::uint64_t n) {
    if (length < 2) return 0;
    const auto d = std::min(n, length - 1);
    // sum_{k=1..d} (length - k), doubled for order
    return 2 * (d * length - d * (d + 1) / 2);
}

CooccurrenceIndex CooccurrenceIndex::build(const Corpus& documents, const IndexConfig& config) {
    config.validate();
    if (documents.empty()) throw Error("empty corpus");
    if (documents.size() > std::numeric_limits<std::uint32_t>::max()) throw Error("too many documents");

    CooccurrenceIndex index;
    index.config_ = config;
    std::unordered_map<std::string, std::uint32_t> ids;
    std::vector<std::vector<std::uint64_t>> postings;
    std::vector<std::string> terms;

    index.doc_lengths_.reserve(documents.size());
    for (std::uint32_t d = 0; d < documents.size(); ++d) {
        const auto& doc = documents[d];
        if (doc.size() >= std::numeric_limits<std::uint32_t>::max() - config.neighborhood)
            throw Error("document " + std::to_string(d) + " is too long");
        for (std::uint32_t p = 0; p < doc.size(); ++p) {
            if (doc[p].empty()) throw Error("empty token at document " + std::to_string(d) + " position " + std::to_string(p));
            auto key = config.case_folding ? text::to_lower(doc[p]) : doc[p];
            auto [it, inserted] = ids.try_emplace(std::move(key), static_cast<std::uint32_t>(terms.size()));
            if (inserted) {
                terms.push_back(it->first);
                postings.emplace_back();
            }
            postings[it->second].push_back(pack(d, p));
        }
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(doc.size()));
        index.token_total_ += doc.size();
        index.pair_total_ += ordered_pairs_within(doc.size(), config.neighborhood);
    }
    if (index.token_total_ == 0) throw Error("empty corpus");

    // Renumber terms in lexicographic order so the index layout is independent of insertion order.
    std::vector<std::uint32_t> order(terms.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return terms[a] < terms[b]; });
    index.terms_.reserve(terms.size());
    index.postings_.reserve(terms.size());
    for (auto old : order) {
        index.term_ids_.emplace(terms[old], static_cast<std::uint32_t>(index.terms_.size()));
        index.terms_.push_back(std::move(terms[old]));
        index.postings_.push_back(std::move(postings[old]));  // already ascending by construction
    }
    return index;
}

std::string CooccurrenceIndex::normalize(std::string_view w) const {
    return config_.case_folding ? text::to_lower(w) : std::string(w);
}

const std::vector<std::uint64_t>* CooccurrenceIndex::find(std::string_view w) const {
    auto it = term_ids_.find(normalize(w));
    return it == term_ids_.end() ? nullptr : &postings_[it->second];
}

std::uint64_t CooccurrenceIndex::term_frequency(std::string_view w) const {
    const auto* p = find(w);
    return p ? p->size() : 0;
}

std::uint64_t CooccurrenceIndex::count_keys(const std::vector<std::uint64_t>& a,
                                            const std::vector<std::uint64_t>& b, bool same) const {
    const std::uint64_t n = config_.neighborhood;
    std::uint64_t total = 0;
    if (same) {
        // unordered pairs: for each position count later positions within reach
        std::size_t hi = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto limit = a[i] + n;  // stays within the document: positions < 2^32 - n
            if (hi < i + 1) hi = i + 1;
            while (hi < a.size() && a[hi] <= limit) ++hi;
            total += hi - i - 1;
        }
        return total;
    }
    std::size_t lo = 0, hi = 0;
    for (const auto key : a) {
        const auto doc_start = key & ~std::uint64_t{0xffffffff};
        const auto low = key - doc_start >= n ? key - n : doc_start;
        const auto high = key + n;
        while (lo < b.size() && b[lo] < low) ++lo;
        if (hi < lo) hi = lo;
        while (hi < b.size() && b[hi] <= high) ++hi;
        total += hi - lo;
    }
    return total;
}

std::uint64_t CooccurrenceIndex::cooccurrence_count(std::string_view w1, std::string_view w2) const {
    const auto* a = find(w1);
    const auto* b = find(w2);
    if (!a || !b) return 0;
    return count_keys(*a, *b, a == b);
}

double CooccurrenceIndex::pmi(std::string_view w1, std::string_view w2) const {
    const double alpha = config_.smoothing_alpha;
    const auto c1 = static_cast<double>(term_frequency(w1));
    const auto c2 = static_cast<double>(term_frequency(w2));
    const auto c12 = static_cast<double>(cooccurrence_count(w1, w2));
    const auto t = static_cast<double>(token_total_);
    const auto pairs = static_cast<double>(pair_total_);

    if (alpha == 0.0) {
        // Unsmoothed: a term with no occurrences carries no evidence either way.
        if (c1 == 0.0 || c2 == 0.0 || pairs == 0.0) return 0.0;
        if (c12 == 0.0) return -std::numeric_limits<double>::infinity();
    }
    const double p1 = (c1 + alpha) / (t + 2 * alpha);
    const double p2 = (c2 + alpha) / (t + 2 * alpha);
    const double p12 = (c12 + alpha) / (pairs + 2 * alpha);
    return std::log2(p12 / (p1 * p2));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> CooccurrenceIndex::postings(std::string_view w) const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    if (const auto* p = find(w)) {
        out.reserve(p->size());
        for (auto key : *p) out.emplace_back(static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key));
    }
    return out;
}

std::string CooccurrenceIndex::serialize() const {
    ByteWriter w;
    w.magic(kMagic);
    w.u32(kVersion);
    w.u32(config_.neighborhood);
    w.f64(config_.smoothing_alpha);
    w.u8(config_.case_folding ? 1 : 0);
    w.u64(doc_lengths_.size());
    for (auto len : doc_lengths_) w.u32(len);
    w.u64(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        w.str(terms_[i]);
        w.u64(postings_[i].size());
        for (auto key : postings_[i]) w.u64(key);
    }
    return w.bytes();
}

CooccurrenceIndex CooccurrenceIndex::deserialize(std::string bytes, std::string source) {
    ByteReader r(std::move(bytes), std::move(source));
    r.expect_magic(kMagic);
    r.expect_version(kVersion);
    CooccurrenceIndex index;
    index.config_.neighborhood = r.u32();
    index.config_.smoothing_alpha = r.f64();
    index.config_.case_folding = r.u8() != 0;
    try {
        index.config_.validate();
    } catch (const Error& e) {
        r.fail(e.what());
    }
    const auto docs = r.u64();
    if (docs == 0 || docs > std::numeric_limits<std::uint32_t>::max()) r.fail("bad document count");
    index.doc_lengths_.resize(docs);
    for (auto& len : index.doc_lengths_) {
        len = r.u32();
        index.token_total_ += len;
        index.pair_total_ += ordered_pairs_within(len, index.config_.neighborhood);
    }
    const auto nterms = r.u64();
    std::uint64_t seen = 0;
    for (std::uint64_t i = 0; i < nterms; ++i) {
        auto term = r.str();
        if (!index.terms_.empty() && !(index.terms_.back() < term)) r.fail("terms not strictly sorted");
        const auto n = r.u64();
        std::vector<std::uint64_t> keys;
        keys.reserve(std::min<std::uint64_t>(n, 1u << 20));
        for (std::uint64_t k = 0; k < n; ++k) {
            const auto key = r.u64();
            const auto doc = key >> 32;
            const auto pos = key & 0xffffffffu;
            if (doc >= docs || pos >= index.doc_lengths_[doc]) r.fail("posting out of range for term " + term);
            if (!keys.empty() && keys.back() >= key) r.fail("postings not strictly ascending for term " + term);
            keys.push_back(key);
        }
        seen += n;
        index.term_ids_.emplace(term, static_cast<std::uint32_t>(index.terms_.size()));
        index.terms_.push_back(std::move(term));
        index.postings_.push_back(std::move(keys));
    }
    if (seen != index.token_total_) r.fail("postings do not cover the token total");
    r.expect_end();
    return index;
}

void CooccurrenceIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    const auto bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

CooccurrenceIndex CooccurrenceIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(std::move(bytes), path.string());
}

double PmiCache::operator()(std::string_view w1, std::string_view w2) const {
    std::string key;
    key.reserve(w1.size() + w2.size() + 1);
    key.append(w1).push_back('\0');
    key.append(w2);
    {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const double v = index_->pmi(w1, w2);
    std::lock_guard lock(mutex_);
    memo_.emplace(std::move(key), v);
    return v;
}

Corpus read_corpus(const std::filesystem::path& path, CorpusLayout layout, bool fold_case) {
    namespace fs = std::filesystem;
    Corpus corpus;
    auto read_file = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw Error("cannot open corpus file " + p.string());
        return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    };
    if (layout == CorpusLayout::directory) {
        if (!fs::is_directory(path)) throw Error("corpus path is not a directory: " + path.string());
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(path))
            if (entry.is_regular_file()) files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            auto tokens = text::corpus_tokens(read_file(f), fold_case);
            if (!tokens.empty()) corpus.push_back(std::move(tokens));
        }
    } else {
        std::ifstream in(path);
        if (!in) throw Error("cannot open corpus file " + path.string());
        std::string line;
        while (std::getline(in, line)) {
            auto tokens = text::corpus_tokens(line, fold_case);
            if (!tokens.empty()) corpus.push_back(std::move(tokens));
        }
    }
    if (corpus.empty()) throw Error("empty corpus: " + path.string());
    return corpus;
}

}  // namespace wsd

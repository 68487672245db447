#include "wsd/text.hpp"

#include <cctype>

namespace wsd::text {

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const auto start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::string_view strip_punct(std::string_view s) {
    while (!s.empty() && is_punct(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_punct(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string> corpus_tokens(std::string_view s, bool fold_case) {
    std::vector<std::string> out;
    for (const auto& raw : split_whitespace(s)) {
        const auto t = strip_punct(raw);
        if (t.empty()) continue;
        out.push_back(fold_case ? to_lower(t) : std::string(t));
    }
    return out;
}

std::vector<std::string> context_tokens(std::string_view s) {
    std::vector<std::string> out;
    for (const auto& raw : split_whitespace(s)) {
        std::string_view t = raw;
        std::vector<std::string> trailing;
        while (!t.empty() && is_punct(t.front()) && t.size() > 1) {
            out.emplace_back(1, t.front());
            t.remove_prefix(1);
        }
        while (t.size() > 1 && is_punct(t.back())) {
            trailing.emplace_back(1, t.back());
            t.remove_suffix(1);
        }
        if (!t.empty()) out.emplace_back(t);
        out.insert(out.end(), trailing.rbegin(), trailing.rend());
    }
    return out;
}

}  // namespace wsd::text

#include "wsd/window.hpp"

#include <algorithm>

#include "wsd/error.hpp"

namespace wsd {

void Example::validate() const {
    if (heads.empty()) throw Error("instance " + instance_id + ": no head word marked");
    for (const auto& h : heads) {
        if (h.sentence >= sentences.size() || h.token >= sentences[h.sentence].size())
            throw Error("instance " + instance_id + ": head position out of range");
    }
}

std::string slot_name(int offset) {
    if (offset == 0) return "hd0";
    return (offset < 0 ? "hm" : "hp") + std::to_string(offset < 0 ? -offset : offset);
}

std::size_t Window::null_count() const {
    return static_cast<std::size_t>(std::count(slots_.begin(), slots_.end(), std::nullopt));
}

Window candidate_window(const Example& example, HeadPosition occurrence) {
    const auto& sentence = example.sentences.at(occurrence.sentence);
    const auto head = static_cast<std::ptrdiff_t>(occurrence.token);
    std::array<Window::Slot, kWindowSize> slots{};
    for (int off = -kWindowRadius; off <= kWindowRadius; ++off) {
        const auto i = head + off;
        if (i >= 0 && i < static_cast<std::ptrdiff_t>(sentence.size()))
            slots[static_cast<std::size_t>(off + kWindowRadius)] = sentence[static_cast<std::size_t>(i)];
    }
    return Window(std::move(slots));
}

std::size_t select_occurrence(const Example& example) {
    example.validate();
    std::size_t best = 0;
    std::size_t best_nulls = kWindowSize + 1;
    for (std::size_t k = 0; k < example.heads.size(); ++k) {
        const auto nulls = candidate_window(example, example.heads[k]).null_count();
        if (nulls < best_nulls || (nulls == best_nulls && example.heads[k] < example.heads[best])) {
            best = k;
            best_nulls = nulls;
        }
    }
    return best;
}

Window select_window(const Example& example) {
    return candidate_window(example, example.heads[select_occurrence(example)]);
}

}  // namespace wsd

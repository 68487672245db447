#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/tagger.hpp"

namespace wsd {

struct HeadPosition {
    std::size_t sentence = 0;
    std::size_t token = 0;

    friend auto operator<=>(const HeadPosition&, const HeadPosition&) = default;
};

/// One lexical-sample instance: tagged sentences with one or more marked head occurrences.
struct Example {
    std::string instance_id;
    std::vector<std::vector<TaggedToken>> sentences;
    std::vector<HeadPosition> heads;  // document order
    /// Gold senses; empty when unlabeled. The first entry is the training label.
    std::vector<std::string> labels;

    std::optional<std::string> label() const {
        return labels.empty() ? std::nullopt : std::optional<std::string>(labels.front());
    }
    /// Throws wsd::Error naming the instance when a head position is out of range or absent.
    void validate() const;
};

/// Slot offsets relative to the head, hm4 = -4 .. hp4 = +4.
inline constexpr int kWindowRadius = 4;
inline constexpr std::size_t kWindowSize = 2 * kWindowRadius + 1;

/// "hm2", "hd0", "hp1", ...
std::string slot_name(int offset);

/// Nine tagged slots centered on the head; empty optionals are the null fill past a sentence edge.
class Window {
public:
    using Slot = std::optional<TaggedToken>;

    Window() = default;
    explicit Window(std::array<Slot, kWindowSize> slots) : slots_(std::move(slots)) {}

    /// offset in [-4, 4]
    const Slot& at(int offset) const { return slots_.at(static_cast<std::size_t>(offset + kWindowRadius)); }
    const TaggedToken& head() const { return *slots_[kWindowRadius]; }
    const std::array<Slot, kWindowSize>& slots() const { return slots_; }
    std::size_t null_count() const;

    friend bool operator==(const Window&, const Window&) = default;

private:
    std::array<Slot, kWindowSize> slots_{};
};

/// Window for one head occurrence, filled from the head's own sentence only.
Window candidate_window(const Example& example, HeadPosition occurrence);

/// Candidate with the fewest nulls; ties go to the earliest occurrence.
Window select_window(const Example& example);

/// Index into example.heads of the occurrence select_window picks.
std::size_t select_occurrence(const Example& example);

}  // namespace wsd

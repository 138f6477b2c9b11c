#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wakeup/memory.hpp"
#include "wakeup/program.hpp"

namespace wakeup {

enum class Combine { Sum, Min, Max };

std::string_view to_string(Combine f);

/// Payloads are restricted to 31 bits; 2^31 is reserved as the min/max
/// identity ("no value"). Sums wrap modulo 2^32.
inline constexpr std::uint32_t kPayloadLimit = 0x8000'0000u;
inline constexpr std::uint32_t kNoValue = 0x8000'0000u;

std::uint32_t identity(Combine f) noexcept;
std::uint32_t combine(Combine f, std::uint32_t a, std::uint32_t b) noexcept;

/// Internal nodes pack (version, payload) into one word so a refresh is a
/// single-word CAS. Versions only grow, which rules out ABA.
constexpr Word pack(std::uint32_t version, std::uint32_t payload) noexcept {
    return (static_cast<Word>(version) << 32) | payload;
}
constexpr std::uint32_t version_of(Word w) noexcept { return static_cast<std::uint32_t>(w >> 32); }
constexpr std::uint32_t payload_of(Word w) noexcept { return static_cast<std::uint32_t>(w); }

/// Tournament tree over n processor-owned leaves, stored heap-style in a
/// contiguous block of arena words. The leaf count is padded to the next
/// power of two so every leaf sits at the same depth; padding leaves hold the
/// identity forever.
class FArrayLayout {
public:
    FArrayLayout(std::size_t n, Combine f, Addr base = 0);

    /// Appends the tree's cells (initialized to the identity) to `arena`.
    static FArrayLayout allocate(Arena& arena, std::size_t n, Combine f);

    std::size_t n() const noexcept { return n_; }
    std::size_t leaves() const noexcept { return leaves_; }
    std::size_t height() const noexcept { return height_; }
    Combine function() const noexcept { return f_; }
    Addr base() const noexcept { return base_; }
    std::size_t cell_count() const noexcept { return 2 * leaves_ - 1; }

    /// Heap node numbering: root 1, children 2i and 2i+1, leaves
    /// [leaves, 2*leaves).
    Addr cell(std::size_t node) const noexcept { return base_ + node - 1; }
    Addr root() const noexcept { return cell(1); }
    std::size_t leaf_node(Pid pid) const noexcept { return leaves_ + pid - 1; }

    /// Shared-memory operations per update: the leaf write plus two refreshes
    /// per ancestor. A refresh at the leaves' parent skips reading the
    /// updater's own leaf (3 ops); higher refreshes read node and both
    /// children then CAS (4 ops).
    std::size_t update_steps() const noexcept { return height_ == 0 ? 1 : 8 * height_ - 1; }
    static constexpr std::size_t query_steps() noexcept { return 1; }

    std::vector<Word> initial_image() const;

    std::uint32_t root_value(const Arena& arena) const;
    std::uint32_t leaf_value(const Arena& arena, Pid pid) const;
    /// True when every internal node's payload equals the combine of its
    /// children's payloads.
    bool consistent(const Arena& arena) const;

private:
    std::size_t n_;
    std::size_t leaves_;
    std::size_t height_;
    Combine f_;
    Addr base_;
};

/// One update(pid, value): write the owned leaf, then double-refresh every
/// ancestor up to the root. Fixed operation count, hence wait-free.
class FArrayUpdate {
public:
    FArrayUpdate(const FArrayLayout& layout, Pid pid, std::uint32_t value);

    /// Yields requests until the update completes, then Return{0}.
    Action step(const std::optional<Outcome>& last);
    void encode(std::vector<Word>& out) const;

private:
    enum class Phase : std::uint8_t { Start, AwaitWrite, AwaitNode, AwaitLeft, AwaitRight, AwaitCas, Done };

    Action begin_refresh();
    Action read_left();
    Action read_right();
    Action issue_cas();

    FArrayLayout layout_;
    std::size_t leaf_;
    std::uint32_t value_;
    Phase phase_ = Phase::Start;
    std::size_t node_ = 0;
    int attempt_ = 0;
    Word old_ = 0;
    std::uint32_t left_ = 0;
    std::uint32_t right_ = 0;
};

struct FArrayOp {
    enum class Kind : std::uint8_t { Update, Query } kind;
    std::uint32_t value = 0;
};

/// Runs a list of updates/queries in order and returns the last query result
/// (0 if there was none).
class FArrayClient {
public:
    FArrayClient(const FArrayLayout& layout, Pid pid, std::vector<FArrayOp> ops);

    Action step(const std::optional<Outcome>& last);
    void encode(std::vector<Word>& out) const;

private:
    Action start_op();

    FArrayLayout layout_;
    Pid pid_;
    std::vector<FArrayOp> ops_;
    std::size_t index_ = 0;
    std::optional<FArrayUpdate> update_;
    bool awaiting_query_ = false;
    std::uint32_t last_query_ = 0;
};

std::unique_ptr<Program> farray_client_program(const FArrayLayout& layout, Pid pid, std::vector<FArrayOp> ops);

}  // namespace wakeup

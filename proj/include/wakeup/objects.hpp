#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wakeup/memory.hpp"

namespace wakeup {

/// Exact counter: increment, read, fetch-and-increment.
class CounterObject final : public SequentialObject {
public:
    explicit CounterObject(Word initial = 0) : value_(initial) {}

    Outcome apply(const ObjectOp& op) override;
    std::unique_ptr<SequentialObject> clone() const override { return std::make_unique<CounterObject>(*this); }
    void encode(std::vector<Word>& out) const override { out.push_back(value_); }
    std::string describe() const override;

    Word value() const noexcept { return value_; }

private:
    Word value_;
};

struct FixedOffset {
    std::int64_t offset = 0;
};

/// Offsets drawn deterministically from (seed, read index) in [-(h+1), h+1],
/// so both clamp bounds get exercised.
struct SeededOffset {
    std::uint64_t seed = 0;
};

using PerturbRule = std::variant<FixedOffset, SeededOffset>;

/// Reference h-approximate counter: exact value kept internally, reads
/// perturbed and clamped into [max(v - h, 0), v + h].
class ApproxCounter final : public SequentialObject {
public:
    ApproxCounter(std::uint64_t h, PerturbRule rule) : h_(h), rule_(rule) {}

    void increment() noexcept { ++value_; }
    std::uint64_t read();

    std::uint64_t slack() const noexcept { return h_; }
    std::uint64_t true_value() const noexcept { return value_; }
    /// (true value, returned value) for every read so far.
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& read_log() const noexcept { return log_; }

    Outcome apply(const ObjectOp& op) override;
    std::unique_ptr<SequentialObject> clone() const override { return std::make_unique<ApproxCounter>(*this); }
    void encode(std::vector<Word>& out) const override;
    std::string describe() const override;

private:
    std::int64_t next_offset();

    std::uint64_t h_;
    PerturbRule rule_;
    std::uint64_t value_ = 0;
    std::uint64_t reads_ = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> log_;
};

enum class RelaxedOrder { Fifo, Lifo, Priority };

const char* to_string(RelaxedOrder order);

struct StrictFirst {};
struct AlwaysHth {};
struct SeededRank {
    std::uint64_t seed = 0;
};
/// Always takes the given 1-based rank, ignoring the slack. Only for
/// exercising the legality guard.
struct FixedRank {
    std::size_t rank = 1;
};

using RemovalPolicy = std::variant<StrictFirst, AlwaysHth, SeededRank, FixedRank>;

std::string describe(const RemovalPolicy& policy);

class RelaxationViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Reference h-relaxed queue / stack / priority queue. Contents are kept in
/// removal order; a removal takes one of the first min(h, size) elements as
/// chosen by the policy. Slack 0 is treated as 1 (strict). A policy choice
/// outside the window raises RelaxationViolation.
class RelaxedContainer final : public SequentialObject {
public:
    RelaxedContainer(RelaxedOrder order, std::size_t h, RemovalPolicy policy);

    void insert(Word value);
    /// nullopt when empty.
    std::optional<Word> remove();
    /// Inserts 1..n so that strict removal yields 1, 2, ..., n; for a stack
    /// the insertion order is reversed.
    void load_sequential(std::size_t n);

    std::size_t size() const noexcept { return items_.size(); }
    std::size_t slack() const noexcept { return h_; }
    /// 1-based rank of every removed element at its removal.
    const std::vector<std::size_t>& removal_ranks() const noexcept { return ranks_; }

    Outcome apply(const ObjectOp& op) override;
    std::unique_ptr<SequentialObject> clone() const override { return std::make_unique<RelaxedContainer>(*this); }
    void encode(std::vector<Word>& out) const override;
    std::string describe() const override;

private:
    std::size_t choose(std::size_t window);

    RelaxedOrder order_;
    std::size_t h_;
    RemovalPolicy policy_;
    std::deque<Word> items_;
    std::uint64_t removals_ = 0;
    std::vector<std::size_t> ranks_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace wakeup

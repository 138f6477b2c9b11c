#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "wakeup/farray.hpp"
#include "wakeup/program.hpp"

namespace wakeup {

/// Lock-free fetch-and-increment on one word: read, then CAS(v, v+1), retrying
/// on failure. Returned values are distinct and contiguous.
struct CasLoopFai {
    Addr word;
};

/// Wait-free counter over a sum f-array: bump the caller's own leaf, then read
/// the root. Returns a value >= the caller's rank, not the exact rank.
struct FArrayFai {
    FArrayLayout layout;
};

/// Black-box fetch-and-increment held in an object cell.
struct ObjectFai {
    Addr object;
};

using FetchAndInc = std::variant<CasLoopFai, FArrayFai, ObjectFai>;

/// One fai() call by `pid`. `prior_calls` is the number of earlier calls by
/// the same processor (its leaf count for the f-array variant).
class FaiCall {
public:
    FaiCall(const FetchAndInc& target, Pid pid, std::uint32_t prior_calls = 0);

    /// Yields requests, then Return{fetched value}.
    Action step(const std::optional<Outcome>& last);
    void encode(std::vector<Word>& out) const;

private:
    FetchAndInc target_;
    Pid pid_;
    std::uint32_t prior_calls_;
    int phase_ = 0;
    Word seen_ = 0;
    std::optional<FArrayUpdate> update_;
};

/// A program that performs one fai() and returns its value.
std::unique_ptr<Program> fai_program(const FetchAndInc& target, Pid pid, std::uint32_t prior_calls = 0);

}  // namespace wakeup

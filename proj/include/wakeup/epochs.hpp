#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "wakeup/adapters.hpp"
#include "wakeup/simulator.hpp"
#include "wakeup/wakeup.hpp"

namespace wakeup {

/// k checked epochs of n processors each, followed by `remainder` unchecked
/// calls (m = k*n + remainder operations in total).
struct EpochPlan {
    std::size_t k = 1;
    std::size_t n = 0;
    std::size_t remainder = 0;

    /// Splits m operations into full epochs of n and a remainder.
    static EpochPlan for_operations(std::uint64_t m, std::size_t n);

    std::uint64_t correction(std::uint32_t epoch) const noexcept { return std::uint64_t{epoch - 1} * n; }
    std::uint64_t operations() const noexcept { return std::uint64_t{k} * n + remainder; }
};

using EpochProgramFactory = std::function<std::unique_ptr<Program>(Pid, const EpochIndex&)>;

struct EpochResult {
    std::vector<Verdict> verdicts;  // one per checked epoch that ran
    WorkReport work;                // summed over all epochs, remainder included
    std::uint64_t object_operations = 0;
    std::optional<std::size_t> failed_epoch;
    std::optional<RunResult> failing_run;

    bool passed() const noexcept { return !failed_epoch.has_value(); }
};

/// Runs the plan against one persistent arena. Each epoch is a separate run
/// (the barrier costs nothing); epoch e uses `policy`, with seeded policies
/// reseeded as seed + e - 1. Stops at the first epoch whose verdict fails.
/// `ops_per_call` is the number of object operations one program performs.
EpochResult epoch_runner(const EpochPlan& plan, const WakeupParams& params, Arena& arena,
                         const EpochProgramFactory& factory, std::size_t ops_per_call,
                         const SchedulePolicy& policy = RoundRobin{}, bool record_events = false);

}  // namespace wakeup

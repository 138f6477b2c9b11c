#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wakeup/simulator.hpp"
#include "wakeup/systems.hpp"

namespace wakeup {

inline constexpr std::uint64_t kDefaultSeedBase = 20240601;

/// Schedules every size is run under: optionally round-robin, then one
/// seeded-random run per seed.
struct ScheduleBattery {
    bool round_robin = true;
    std::vector<std::uint64_t> seeds;

    /// Round-robin plus `count` seeds base, base+1, ...
    static ScheduleBattery standard(std::size_t count, std::uint64_t base = kDefaultSeedBase);
    std::vector<SchedulePolicy> policies() const;
};

struct ExperimentSpec {
    SolverSpec solver;
    std::vector<std::size_t> ns;
    ScheduleBattery battery = ScheduleBattery::standard(0);
    std::size_t epochs = 1;
    /// Check against this problem instead of the solver's own (same n only).
    std::optional<WakeupParams> claim;

    /// Throws std::invalid_argument on an empty n list, sizes the solver
    /// cannot handle, or epochs on a one-shot solver.
    void validate() const;
};

struct ScalingRow {
    std::size_t n = 0;
    std::uint64_t total_work = 0;    // worst total over the battery
    std::uint64_t per_proc_max = 0;  // worst single processor over the battery
    std::uint64_t lower_bound = 0;   // lower_bound_value per epoch, times epochs
    double ratio_linear = 0;
    double ratio_nlogn = 0;

    bool operator==(const ScalingRow&) const = default;
};

/// Fills the ratio columns from n and total_work. For n=1
/// ratio_nlogn is infinite.
ScalingRow make_row(std::size_t n, std::uint64_t total_work, std::uint64_t per_proc_max, std::uint64_t lower_bound);

struct RunFailure {
    std::size_t n = 0;
    std::string schedule;
    std::size_t epoch = 1;
    Verdict verdict;
    Trace trace;  // full event trace of the failing run
};

struct ExperimentResult {
    std::vector<ScalingRow> rows;  // ascending n
    std::uint64_t runs = 0;
    std::optional<RunFailure> failure;

    bool passed() const noexcept { return !failure.has_value(); }
};

/// Runs every n under every battery schedule and checks each run. Sizes run
/// on up to `workers` threads; rows come back sorted by n. The first failure
/// (smallest n) is reported with its trace re-recorded.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers = 0);

std::string csv_header();
std::string to_csv(const std::vector<ScalingRow>& rows);
/// Writes to_csv(rows). Throws std::runtime_error naming the path on failure.
void emit_csv(const std::vector<ScalingRow>& rows, const std::filesystem::path& path);
/// Inverse of to_csv. Throws std::invalid_argument on malformed input.
std::vector<ScalingRow> parse_csv(const std::string& text);

}  // namespace wakeup

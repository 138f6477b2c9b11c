#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wakeup/program.hpp"
#include "wakeup/simulator.hpp"
#include "wakeup/trace.hpp"

namespace wakeup {

/// One member of the generalized wake-up family: n processors and a
/// non-decreasing slack vector 0 <= s_1 <= ... <= s_n <= n.
struct WakeupParams {
    std::size_t n = 0;
    std::vector<std::size_t> s;

    /// Validates the slack vector; throws std::invalid_argument.
    static WakeupParams from_slack(std::vector<std::size_t> s);

    bool operator==(const WakeupParams&) const = default;
};

/// s = (1, ..., 1, n)
WakeupParams easy_params(std::size_t n);
/// s = (1, 2, ..., n)
WakeupParams hard_params(std::size_t n);
/// s_i = 1 for the first n - tail_count entries, tail_value for the rest.
WakeupParams profile_params(std::size_t n, std::size_t tail_count, std::size_t tail_value);
/// Parses "1,1,1,4".
WakeupParams parse_slack(std::string_view list);

std::string to_string(const WakeupParams& params);

enum class Clause { Termination, Truthfulness, Nontriviality };
const char* to_string(Clause clause);

struct Violation {
    Clause clause;
    std::size_t subject;  // pid for termination/truthfulness, rank k for non-triviality
    std::string detail;
};

struct Verdict {
    bool termination_ok = true;
    bool truthfulness_ok = true;
    bool nontriviality_ok = true;
    bool nontriviality_evaluated = true;  // false on incomplete runs
    std::vector<Violation> violations;

    bool passed() const noexcept { return termination_ok && truthfulness_ok && nontriviality_ok; }
};

/// What the checker needs from one processor: its return value (if any) and
/// how many processors had woken by the time it returned.
struct Settlement {
    std::optional<std::int64_t> value;
    std::size_t woken_at_return = 0;
};

/// Judges settlements against the three clauses. Non-triviality is evaluated
/// only when every processor returned.
Verdict judge(const WakeupParams& params, std::span<const Settlement> settlements);

/// Number of processors woken at or before each processor's return time.
std::vector<Settlement> settlements(const Trace& trace);

/// Checks a run trace against J(s). A processor counts itself as woken at
/// its own return. Throws std::invalid_argument if the processor count differs.
Verdict check_trace(const WakeupParams& params, const Trace& trace);

/// Checks the boolean wake-up problem: every processor returns 0 or 1, no 1
/// before all n have woken, not everyone returns 0.
Verdict check_boolean_trace(std::size_t n, const Trace& trace);

/// CSV `clause,ok,detail`, one row per clause.
std::string verdict_csv(const Verdict& verdict);

/// false -> 1, true -> n. Other inner values map to 0 (outside [1,n]).
std::unique_ptr<Program> wrap_bool_as_general(std::unique_ptr<Program> inner, std::size_t n);
/// v = n -> true, 1 <= v < n -> false. Other inner values map to -1.
std::unique_ptr<Program> wrap_general_as_bool(std::unique_ptr<Program> inner, std::size_t n);

/// n + sum_i floor(log2 s_i), with s_i in {0, 1} contributing 0. A reference
/// magnitude for reports (log base 2), not a certified constant.
std::uint64_t lower_bound_value(const WakeupParams& params);

/// Wake/return history abstraction for explore_schedules.
class WakeupHistory {
public:
    explicit WakeupHistory(std::size_t n) : woken_(n, 0), settled_(n) {}

    void observe(const Machine& machine, const Event& event);
    void encode(std::vector<Word>& out) const;

    std::span<const Settlement> settlements() const noexcept { return settled_; }

private:
    std::vector<std::uint8_t> woken_;
    std::size_t woken_count_ = 0;
    std::vector<Settlement> settled_;
};

/// Checks J(s) over every schedule of the given system via memoized state
/// search. Feasible for small n; see explore_schedules.
ExploreSummary explore_wakeup(const WakeupParams& params, const ProgramList& programs, const Arena& arena,
                              const ExploreLimits& limits = {});

}  // namespace wakeup

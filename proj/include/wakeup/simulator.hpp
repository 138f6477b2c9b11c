#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wakeup/machine.hpp"

namespace wakeup {

/// Every unreturned processor steps exactly once per round, in pid order.
struct RoundRobin {};

/// Uniform choice among unreturned processors from a seeded mt19937_64.
struct SeededRandom {
    std::uint64_t seed = 0;
};

/// A fixed pid sequence; after it is exhausted the run continues round-robin.
/// Naming a returned processor is a SimulationFault.
struct ExplicitSchedule {
    std::vector<Pid> order;
};

using SchedulePolicy = std::variant<RoundRobin, SeededRandom, ExplicitSchedule>;

std::string describe(const SchedulePolicy& policy);

/// Stateful picker for one run of a SchedulePolicy.
class Scheduler {
public:
    explicit Scheduler(const SchedulePolicy& policy);
    Pid pick(const Machine& machine);

private:
    Pid next_round_robin(const Machine& machine);

    SchedulePolicy policy_;
    std::mt19937_64 rng_;
    std::size_t cursor_ = 0;
    Pid last_ = 0;
};

inline constexpr std::uint64_t kDefaultStepBudget = 10'000'000;

struct RunOptions {
    std::uint64_t step_budget = kDefaultStepBudget;
    bool record_events = true;
    /// Called after every event with the machine in its post-event state.
    std::function<void(const Machine&, const Event&)> observer;
};

/// Steps programs under `policy` until all return or the step budget runs out
/// (RunStatus::NonTermination). Deterministic in (programs, policy, arena).
RunResult run(ProgramList programs, const SchedulePolicy& policy, Arena arena, const RunOptions& options = {});

struct ExhaustiveLimits {
    std::size_t depth_limit = 256;
    std::uint64_t max_traces = UINT64_MAX;
};

struct ExhaustiveSummary {
    std::uint64_t complete = 0;
    std::uint64_t truncated = 0;
    bool capped = false;   // stopped at max_traces
    bool stopped = false;  // visitor asked to stop
};

/// Return false to stop the enumeration.
using TraceVisitor = std::function<bool(const RunResult&)>;

/// Enumerates every interleaving (each step picks any unreturned processor)
/// and hands each completed trace to `visit` exactly once. Branches that hit
/// depth_limit are handed over with RunStatus::Truncated.
ExhaustiveSummary exhaustive_run(const ProgramList& programs, const Arena& arena, const ExhaustiveLimits& limits,
                                 const TraceVisitor& visit);

using ScheduleCount = unsigned __int128;
std::string to_string(ScheduleCount count);

struct ExploreLimits {
    std::size_t depth_limit = 100'000;
    std::uint64_t max_states = 20'000'000;
};

struct ExploreSummary {
    std::uint64_t states = 0;
    std::uint64_t terminal_states = 0;
    std::uint64_t failing_states = 0;
    std::uint64_t truncated_states = 0;
    ScheduleCount schedules = 0;          // complete schedules covered
    ScheduleCount failing_schedules = 0;  // of which fail the terminal check
    bool state_budget_exhausted = false;
    std::vector<Pid> counterexample;  // schedule reaching the first failing state

    bool all_pass() const noexcept {
        return failing_states == 0 && truncated_states == 0 && !state_budget_exhausted;
    }
};

namespace detail {

struct KeyHash {
    std::size_t operator()(const std::vector<Word>& key) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (Word w : key) {
            std::uint64_t z = w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            h ^= z ^ (z >> 31);
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

/// Memoized search over every schedule of a machine.
///
/// Two schedule prefixes that reach the same machine state and the same
/// history abstraction have identical futures, so each distinct pair is
/// expanded once. The abstraction must capture everything the terminal check
/// depends on. `Abstraction` needs `observe(const Machine&, const Event&)` and
/// `encode(std::vector<Word>&) const`; `check(const Machine&, const
/// Abstraction&)` returns true when the completed run is acceptable.
template <class Abstraction, class TerminalCheck>
ExploreSummary explore_schedules(const Machine& initial, const Abstraction& start, TerminalCheck check,
                                 const ExploreLimits& limits = {}) {
    struct Node {
        ScheduleCount total = 0;
        ScheduleCount failing = 0;
    };
    ExploreSummary summary;
    std::unordered_map<std::vector<Word>, Node, detail::KeyHash> memo;
    std::vector<Pid> path;

    auto saturating_add = [](ScheduleCount a, ScheduleCount b) {
        ScheduleCount s = a + b;
        return s < a ? ~ScheduleCount{0} : s;
    };

    std::function<Node(const Machine&, const Abstraction&)> visit = [&](const Machine& m,
                                                                         const Abstraction& abs) -> Node {
        std::vector<Word> key;
        m.encode(key);
        key.push_back(~Word{0});
        abs.encode(key);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (summary.states >= limits.max_states) {
            summary.state_budget_exhausted = true;
            return {};
        }
        ++summary.states;

        Node node;
        if (m.all_returned()) {
            ++summary.terminal_states;
            node.total = 1;
            if (!check(m, abs)) {
                node.failing = 1;
                if (summary.failing_states++ == 0) summary.counterexample = path;
            }
        } else if (m.now() >= limits.depth_limit) {
            ++summary.truncated_states;
        } else {
            const std::vector<Pid> choices(m.active().begin(), m.active().end());
            for (Pid pid : choices) {
                Machine next = m;
                Abstraction next_abs = abs;
                const Event& e = next.step(pid);
                next_abs.observe(next, e);
                path.push_back(pid);
                Node child = visit(next, next_abs);
                path.pop_back();
                node.total = saturating_add(node.total, child.total);
                node.failing = saturating_add(node.failing, child.failing);
                if (summary.state_budget_exhausted) break;
            }
        }
        memo.emplace(std::move(key), node);
        return node;
    };

    Node root = visit(initial, start);
    summary.schedules = root.total;
    summary.failing_schedules = root.failing;
    return summary;
}

}  // namespace wakeup

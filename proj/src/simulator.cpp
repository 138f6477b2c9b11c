#include "wakeup/simulator.hpp"

#include <algorithm>
#include <sstream>

namespace wakeup {

std::string describe(const SchedulePolicy& policy) {
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RoundRobin>) {
                return "round-robin";
            } else if constexpr (std::is_same_v<T, SeededRandom>) {
                return "random(seed=" + std::to_string(p.seed) + ")";
            } else {
                std::ostringstream os;
                os << "explicit(";
                for (std::size_t i = 0; i < p.order.size(); ++i) os << (i ? "," : "") << p.order[i];
                os << ")";
                return os.str();
            }
        },
        policy);
}

Scheduler::Scheduler(const SchedulePolicy& policy) : policy_(policy) {
    if (const auto* r = std::get_if<SeededRandom>(&policy_)) rng_.seed(r->seed);
}

Pid Scheduler::next_round_robin(const Machine& machine) {
    auto active = machine.active();
    auto it = std::upper_bound(active.begin(), active.end(), last_);
    last_ = it == active.end() ? active.front() : *it;
    return last_;
}

Pid Scheduler::pick(const Machine& machine) {
    auto active = machine.active();
    if (std::holds_alternative<RoundRobin>(policy_)) return next_round_robin(machine);
    if (std::holds_alternative<SeededRandom>(policy_)) return active[rng_() % active.size()];
    const auto& order = std::get<ExplicitSchedule>(policy_).order;
    if (cursor_ < order.size()) {
        last_ = order[cursor_++];
        return last_;
    }
    return next_round_robin(machine);
}

RunResult run(ProgramList programs, const SchedulePolicy& policy, Arena arena, const RunOptions& options) {
    Machine machine(std::move(programs), std::move(arena), options.record_events);
    Scheduler scheduler(policy);
    while (!machine.all_returned()) {
        if (machine.now() >= options.step_budget) return std::move(machine).finish(RunStatus::NonTermination);
        const Event& e = machine.step(scheduler.pick(machine));
        if (options.observer) options.observer(machine, e);
    }
    return std::move(machine).finish(RunStatus::Complete);
}

namespace {

struct Enumerator {
    const ExhaustiveLimits& limits;
    const TraceVisitor& visit;
    ExhaustiveSummary summary;

    bool emit(const Machine& m, RunStatus status) {
        if (status == RunStatus::Complete) {
            ++summary.complete;
        } else {
            ++summary.truncated;
        }
        if (!visit(m.finish(status))) {
            summary.stopped = true;
            return false;
        }
        if (summary.complete + summary.truncated >= limits.max_traces) {
            summary.capped = true;
            return false;
        }
        return true;
    }

    // Returns false once enumeration must stop.
    bool explore(Machine& m) {
        if (m.all_returned()) return emit(m, RunStatus::Complete);
        if (m.now() >= limits.depth_limit) return emit(m, RunStatus::Truncated);
        const std::vector<Pid> choices(m.active().begin(), m.active().end());
        for (std::size_t i = 0; i < choices.size(); ++i) {
            if (i + 1 == choices.size()) {
                m.step(choices[i]);
                return explore(m);
            }
            Machine branch = m;
            branch.step(choices[i]);
            if (!explore(branch)) return false;
        }
        return true;
    }
};

}  // namespace

ExhaustiveSummary exhaustive_run(const ProgramList& programs, const Arena& arena, const ExhaustiveLimits& limits,
                                 const TraceVisitor& visit) {
    Machine root(clone_programs(programs), arena);
    Enumerator e{limits, visit, {}};
    if (limits.max_traces > 0) e.explore(root);
    return e.summary;
}

std::string to_string(ScheduleCount count) {
    if (count == 0) return "0";
    std::string digits;
    while (count > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(count % 10)));
        count /= 10;
    }
    return {digits.rbegin(), digits.rend()};
}

}  // namespace wakeup

#include "wakeup/epochs.hpp"

#include <stdexcept>

namespace wakeup {

EpochPlan EpochPlan::for_operations(std::uint64_t m, std::size_t n) {
    if (n == 0) throw std::invalid_argument("epoch plan needs n >= 1");
    if (m < n) throw std::invalid_argument("epoch plan needs at least one full epoch");
    return EpochPlan{static_cast<std::size_t>(m / n), n, static_cast<std::size_t>(m % n)};
}

namespace {

SchedulePolicy epoch_policy(const SchedulePolicy& policy, std::uint32_t epoch) {
    if (const auto* r = std::get_if<SeededRandom>(&policy)) return SeededRandom{r->seed + epoch - 1};
    return policy;
}

RunResult run_epoch(std::size_t count, std::uint32_t epoch, const EpochPlan& plan, Arena& arena,
                    const EpochProgramFactory& factory, const SchedulePolicy& policy, bool record_events) {
    ProgramList programs;
    const EpochIndex index{epoch, plan.n};
    for (std::size_t i = 0; i < count; ++i) programs.push_back(factory(static_cast<Pid>(i + 1), index));
    RunOptions options;
    options.record_events = record_events;
    RunResult result = run(std::move(programs), epoch_policy(policy, epoch), std::move(arena), options);
    arena = result.arena;
    return result;
}

}  // namespace

EpochResult epoch_runner(const EpochPlan& plan, const WakeupParams& params, Arena& arena,
                         const EpochProgramFactory& factory, std::size_t ops_per_call, const SchedulePolicy& policy,
                         bool record_events) {
    if (plan.k == 0) throw std::invalid_argument("epoch plan needs k >= 1");
    if (params.n != plan.n) throw std::invalid_argument("epoch plan and params disagree on n");

    EpochResult out;
    for (std::uint32_t e = 1; e <= plan.k; ++e) {
        RunResult r = run_epoch(plan.n, e, plan, arena, factory, policy, record_events);
        out.work += r.report;
        out.object_operations += std::uint64_t{plan.n} * ops_per_call;
        Verdict v = check_trace(params, r.trace);
        if (r.status != RunStatus::Complete) {
            v.termination_ok = false;
            v.violations.push_back({Clause::Termination, 0, std::string("run ended: ") + to_string(r.status)});
        }
        const bool ok = v.passed();
        out.verdicts.push_back(std::move(v));
        if (!ok) {
            out.failed_epoch = e;
            out.failing_run = std::move(r);
            return out;
        }
    }
    if (plan.remainder > 0) {
        RunResult r = run_epoch(plan.remainder, static_cast<std::uint32_t>(plan.k + 1), plan, arena, factory, policy,
                                record_events);
        out.work += r.report;
        out.object_operations += std::uint64_t{plan.remainder} * ops_per_call;
    }
    return out;
}

}  // namespace wakeup

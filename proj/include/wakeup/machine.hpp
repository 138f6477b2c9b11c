#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wakeup/memory.hpp"
#include "wakeup/program.hpp"
#include "wakeup/trace.hpp"

namespace wakeup {

/// The simulated asynchronous machine: an arena plus n passive programs,
/// advanced one event at a time by an external scheduler.
///
/// Each program's first action is computed on construction (local
/// computation is free). A program must issue at least one request before
/// returning; returning immediately is a SimulationFault since the processor
/// would never wake. The return is recorded at the time of the processor's
/// last event.
class Machine {
public:
    Machine(ProgramList programs, Arena arena, bool record_events = true);

    Machine(const Machine& other);
    Machine& operator=(const Machine& other);
    Machine(Machine&&) noexcept = default;
    Machine& operator=(Machine&&) noexcept = default;

    std::size_t processor_count() const noexcept { return programs_.size(); }
    /// Processors that have not returned, ascending.
    std::span<const Pid> active() const noexcept { return active_; }
    bool all_returned() const noexcept { return active_.empty(); }
    bool returned(Pid pid) const { return !pending_.at(pid - 1).has_value(); }
    Time now() const noexcept { return time_; }

    /// Executes the pending request of `pid` as the next event.
    const Event& step(Pid pid);

    const Trace& trace() const noexcept { return trace_; }
    const WorkReport& report() const noexcept { return report_; }
    const Arena& arena() const noexcept { return arena_; }
    const Program& program(Pid pid) const { return *programs_.at(pid - 1); }

    RunResult finish(RunStatus status) const&;
    RunResult finish(RunStatus status) &&;

    /// Canonical encoding of the machine state (memory, programs, pending
    /// requests, returned set). Times and history are not included.
    void encode(std::vector<Word>& out) const;

private:
    ProgramList programs_;
    std::vector<std::optional<MemRequest>> pending_;
    std::vector<Pid> active_;
    Arena arena_;
    Trace trace_;
    WorkReport report_;
    Time time_ = 0;
    bool record_events_ = true;
    Event last_{};
};

void encode_request(const MemRequest& request, std::vector<Word>& out);

}  // namespace wakeup

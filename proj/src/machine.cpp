#include "wakeup/machine.hpp"

#include <algorithm>
#include <string>

namespace wakeup {

ProgramList clone_programs(const ProgramList& programs) {
    ProgramList out;
    out.reserve(programs.size());
    for (const auto& p : programs) out.push_back(p->clone());
    return out;
}

Machine::Machine(ProgramList programs, Arena arena, bool record_events)
    : programs_(std::move(programs)), arena_(std::move(arena)), record_events_(record_events) {
    const std::size_t n = programs_.size();
    pending_.resize(n);
    trace_.processors.assign(n, {});
    report_.per_proc.assign(n, 0);
    active_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Action first = programs_[i]->step(std::nullopt);
        if (std::holds_alternative<Return>(first)) {
            throw SimulationFault("processor " + std::to_string(i + 1) + " returned before taking a step");
        }
        pending_[i] = std::get<MemRequest>(first);
        active_.push_back(static_cast<Pid>(i + 1));
    }
}

Machine::Machine(const Machine& other)
    : programs_(clone_programs(other.programs_)),
      pending_(other.pending_),
      active_(other.active_),
      arena_(other.arena_),
      trace_(other.trace_),
      report_(other.report_),
      time_(other.time_),
      record_events_(other.record_events_),
      last_(other.last_) {}

Machine& Machine::operator=(const Machine& other) {
    if (this != &other) {
        Machine copy(other);
        *this = std::move(copy);
    }
    return *this;
}

const Event& Machine::step(Pid pid) {
    if (pid == 0 || pid > programs_.size()) {
        throw SimulationFault("scheduler selected unknown processor " + std::to_string(pid));
    }
    auto& pending = pending_[pid - 1];
    if (!pending) {
        throw SimulationFault("scheduler selected returned processor " + std::to_string(pid));
    }
    MemRequest request = *pending;
    Outcome outcome = arena_.execute(request);
    outcome.time = ++time_;

    report_.record(pid, request, outcome);
    auto& rec = trace_.processor(pid);
    if (!rec.wake_time) rec.wake_time = time_;

    Action next = programs_[pid - 1]->step(outcome);
    if (auto* ret = std::get_if<Return>(&next)) {
        pending.reset();
        rec.return_time = time_;
        rec.return_value = ret->value;
        active_.erase(std::lower_bound(active_.begin(), active_.end(), pid));
    } else {
        pending = std::get<MemRequest>(std::move(next));
    }

    last_ = Event{time_, pid, std::move(request), outcome};
    if (record_events_) {
        trace_.events.push_back(last_);
        return trace_.events.back();
    }
    return last_;
}

RunResult Machine::finish(RunStatus status) const& {
    return RunResult{trace_, report_, status, arena_};
}

RunResult Machine::finish(RunStatus status) && {
    return RunResult{std::move(trace_), std::move(report_), status, std::move(arena_)};
}

void encode_request(const MemRequest& request, std::vector<Word>& out) {
    out.push_back(request.index());
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Read>) {
                out.push_back(r.addr);
            } else if constexpr (std::is_same_v<T, Write>) {
                out.push_back(r.addr);
                out.push_back(r.value);
            } else if constexpr (std::is_same_v<T, Cas>) {
                out.push_back(r.addr);
                out.push_back(r.expected);
                out.push_back(r.desired);
            } else {
                out.push_back(r.object);
                out.push_back(static_cast<Word>(r.op.kind));
                out.push_back(r.op.arg);
            }
        },
        request);
}

void Machine::encode(std::vector<Word>& out) const {
    arena_.encode(out);
    for (std::size_t i = 0; i < programs_.size(); ++i) {
        if (!pending_[i]) {
            out.push_back(~Word{0});
            continue;
        }
        encode_request(*pending_[i], out);
        const std::size_t mark = out.size();
        out.push_back(0);
        programs_[i]->encode(out);
        out[mark] = out.size() - mark - 1;
    }
}

}  // namespace wakeup

#include "wakeup/trace.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace wakeup {

bool Trace::complete() const noexcept {
    return std::all_of(processors.begin(), processors.end(),
                       [](const ProcessorRecord& p) { return p.return_value.has_value(); });
}

std::uint64_t WorkReport::max_per_proc() const noexcept {
    return per_proc.empty() ? 0 : *std::max_element(per_proc.begin(), per_proc.end());
}

void WorkReport::record(Pid pid, const MemRequest& request, const Outcome& outcome) {
    ++per_proc.at(pid - 1);
    ++total;
    switch (request.index()) {
        case 0: ++reads; break;
        case 1: ++writes; break;
        case 2:
            ++cas_attempts;
            if (outcome.ok) ++cas_successes;
            break;
        default: ++object_applies; break;
    }
}

WorkReport& WorkReport::operator+=(const WorkReport& other) {
    if (per_proc.size() < other.per_proc.size()) per_proc.resize(other.per_proc.size(), 0);
    for (std::size_t i = 0; i < other.per_proc.size(); ++i) per_proc[i] += other.per_proc[i];
    total += other.total;
    reads += other.reads;
    writes += other.writes;
    cas_attempts += other.cas_attempts;
    cas_successes += other.cas_successes;
    object_applies += other.object_applies;
    return *this;
}

const char* to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Complete: return "complete";
        case RunStatus::NonTermination: return "non-termination";
        case RunStatus::Truncated: return "truncated";
    }
    return "?";
}

void write_trace(std::ostream& os, const Trace& trace) {
    os << "# processors " << trace.processor_count() << '\n';
    for (std::size_t i = 0; i < trace.processors.size(); ++i) {
        const auto& p = trace.processors[i];
        if (p.return_value) {
            os << "# return " << (i + 1) << ' ' << *p.return_time << ' ' << *p.return_value << '\n';
        }
    }
    for (const auto& e : trace.events) {
        os << e.time << ' ' << e.pid << ' ';
        std::visit(
            [&](const auto& r) {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Read>) {
                    os << "read " << r.addr << " 0 0 " << e.outcome.value;
                } else if constexpr (std::is_same_v<T, Write>) {
                    os << "write " << r.addr << ' ' << r.value << " 0 1";
                } else if constexpr (std::is_same_v<T, Cas>) {
                    os << "cas " << r.addr << ' ' << r.expected << ' ' << r.desired << ' '
                       << (e.outcome.ok ? 1 : 0);
                } else {
                    os << "apply " << r.object << ' ' << static_cast<unsigned>(r.op.kind) << ' ' << r.op.arg
                       << ' ';
                    if (e.outcome.ok) {
                        os << e.outcome.value;
                    } else {
                        os << -1;
                    }
                }
            },
            e.request);
        os << '\n';
    }
}

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
    throw std::runtime_error("trace line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Trace parse_trace(std::istream& is) {
    Trace trace;
    std::string line;
    std::size_t line_no = 0;
    struct PendingReturn {
        Pid pid;
        Time time;
        std::int64_t value;
    };
    std::vector<PendingReturn> returns;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (line[0] == '#') {
            std::string hash, key;
            ls >> hash >> key;
            if (key == "processors") {
                std::size_t n = 0;
                if (!(ls >> n)) parse_error(line_no, "bad processor count");
                trace.processors.assign(n, {});
            } else if (key == "return") {
                PendingReturn r{};
                if (!(ls >> r.pid >> r.time >> r.value)) parse_error(line_no, "bad return record");
                returns.push_back(r);
            }
            continue;
        }
        Event e{};
        std::string op;
        Addr addr = 0;
        Word arg1 = 0, arg2 = 0;
        std::int64_t outcome = 0;
        if (!(ls >> e.time >> e.pid >> op >> addr >> arg1 >> arg2 >> outcome)) parse_error(line_no, "malformed event");
        if (e.pid == 0 || e.pid > trace.processors.size()) parse_error(line_no, "pid out of range");
        if (e.time != trace.events.size() + 1) parse_error(line_no, "event times must be consecutive from 1");
        e.outcome.time = e.time;
        if (op == "read") {
            e.request = Read{addr};
            e.outcome.value = static_cast<Word>(outcome);
        } else if (op == "write") {
            e.request = Write{addr, arg1};
            e.outcome.value = 1;
        } else if (op == "cas") {
            e.request = Cas{addr, arg1, arg2};
            e.outcome.ok = outcome != 0;
            e.outcome.value = e.outcome.ok ? 1 : 0;
        } else if (op == "apply") {
            e.request = Apply{addr, ObjectOp{static_cast<ObjectOpKind>(arg1), arg2}};
            e.outcome.ok = outcome >= 0;
            e.outcome.value = outcome >= 0 ? static_cast<Word>(outcome) : 0;
        } else {
            parse_error(line_no, "unknown op '" + op + "'");
        }
        auto& rec = trace.processor(e.pid);
        if (!rec.wake_time) rec.wake_time = e.time;
        trace.events.push_back(std::move(e));
    }
    for (const auto& r : returns) {
        if (r.pid == 0 || r.pid > trace.processors.size()) throw std::runtime_error("return record pid out of range");
        auto& rec = trace.processor(r.pid);
        rec.return_time = r.time;
        rec.return_value = r.value;
    }
    return trace;
}

void write_work_csv(std::ostream& os, const WorkReport& report) {
    os << "pid,steps\n";
    for (std::size_t i = 0; i < report.per_proc.size(); ++i) os << (i + 1) << ',' << report.per_proc[i] << '\n';
    os << "total," << report.total << '\n';
}

}  // namespace wakeup

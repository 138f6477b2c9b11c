#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wakeup/memory.hpp"

namespace wakeup {

struct Event {
    Time time;
    Pid pid;
    MemRequest request;
    Outcome outcome;
};

struct ProcessorRecord {
    std::optional<Time> wake_time;
    std::optional<Time> return_time;
    std::optional<std::int64_t> return_value;
};

/// Total order of events of one run, plus per-processor wake/return data.
/// Event times are 1, 2, 3, ... with exactly one event per slot.
struct Trace {
    std::vector<Event> events;
    std::vector<ProcessorRecord> processors;  // indexed by pid - 1

    std::size_t processor_count() const noexcept { return processors.size(); }
    const ProcessorRecord& processor(Pid pid) const { return processors.at(pid - 1); }
    ProcessorRecord& processor(Pid pid) { return processors.at(pid - 1); }
    bool complete() const noexcept;
};

struct WorkReport {
    std::vector<std::uint64_t> per_proc;  // indexed by pid - 1
    std::uint64_t total = 0;
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t cas_attempts = 0;
    std::uint64_t cas_successes = 0;
    std::uint64_t object_applies = 0;

    std::uint64_t steps(Pid pid) const { return per_proc.at(pid - 1); }
    std::uint64_t max_per_proc() const noexcept;
    void record(Pid pid, const MemRequest& request, const Outcome& outcome);
    WorkReport& operator+=(const WorkReport& other);
};

enum class RunStatus {
    Complete,
    NonTermination,  // step budget exhausted
    Truncated,       // exhaustive depth limit reached on this branch
};

const char* to_string(RunStatus status);

struct RunResult {
    Trace trace;
    WorkReport report;
    RunStatus status = RunStatus::Complete;
    Arena arena;  // final memory image
};

/// Writes `time pid op addr arg1 arg2 outcome` lines. Return records and the
/// processor count travel as `#` comment lines so the file can be re-checked.
void write_trace(std::ostream& os, const Trace& trace);
Trace parse_trace(std::istream& is);

/// CSV `pid,steps` with a trailing `total,<n>` row.
void write_work_csv(std::ostream& os, const WorkReport& report);

}  // namespace wakeup

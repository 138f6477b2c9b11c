#pragma once

#include "wakeup/program.hpp"
#include "wakeup/trace.hpp"

namespace wakeup {

/// Result of running programs on real threads.
///
/// Interleavings are uncontrolled, so `trace.events` is left empty and the
/// wake/return times are stamps from a shared atomic counter: a processor's
/// wake stamp is taken before its first operation and its return stamp after
/// its last one. The stamps preserve real-time order between a return and
/// every wake-up that could have influenced it, which is what the wake-up
/// checker needs; they are not event slots.
struct ParallelResult {
    Trace trace;
    WorkReport report;
    Arena arena;
};

/// Runs one thread per program over linearizable word cells (std::atomic)
/// and mutex-guarded object cells.
ParallelResult run_parallel(ProgramList programs, const Arena& arena);

}  // namespace wakeup

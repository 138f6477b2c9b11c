#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "wakeup/memory.hpp"

namespace wakeup {

struct Return {
    std::int64_t value;
};

/// What a processor does next: one shared-memory operation, or return.
using Action = std::variant<MemRequest, Return>;

/// A resumable per-processor state machine.
///
/// step() receives the outcome of the previously issued request (nullopt on
/// the first call) and yields the next action. Local computation between
/// requests is free. Once step() yields Return the program is never stepped
/// again.
class Program {
public:
    virtual ~Program() = default;

    virtual Action step(const std::optional<Outcome>& last) = 0;
    virtual std::unique_ptr<Program> clone() const = 0;
    /// Appends a canonical encoding of the local state.
    virtual void encode(std::vector<Word>& out) const = 0;
};

using ProgramList = std::vector<std::unique_ptr<Program>>;

ProgramList clone_programs(const ProgramList& programs);

/// Adapts a copyable procedure struct (with step/encode members) into a Program.
template <class Proc>
class ProcedureProgram final : public Program {
public:
    explicit ProcedureProgram(Proc proc) : proc_(std::move(proc)) {}

    Action step(const std::optional<Outcome>& last) override { return proc_.step(last); }
    std::unique_ptr<Program> clone() const override { return std::make_unique<ProcedureProgram>(proc_); }
    void encode(std::vector<Word>& out) const override { proc_.encode(out); }

    const Proc& procedure() const noexcept { return proc_; }

private:
    Proc proc_;
};

template <class Proc>
std::unique_ptr<Program> make_program(Proc proc) {
    return std::make_unique<ProcedureProgram<Proc>>(std::move(proc));
}

/// A program that issues a fixed list of requests and then returns a fixed
/// value, ignoring outcomes. Used for hand-built schedules and checker tests.
struct ScriptedProcedure {
    std::vector<MemRequest> requests;
    std::int64_t result = 0;
    std::size_t next = 0;

    Action step(const std::optional<Outcome>&) {
        if (next < requests.size()) return requests[next++];
        return Return{result};
    }
    void encode(std::vector<Word>& out) const { out.push_back(next); }
};

}  // namespace wakeup

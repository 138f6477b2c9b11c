#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "wakeup/adapters.hpp"
#include "wakeup/epochs.hpp"
#include "wakeup/objects.hpp"

namespace wakeup {

enum class SolverKind { Tree, Counter, Fai, CounterObject, ApproxCounter, RelaxedQueue };
enum class FaiVariant { CasLoop, FArray, Object };

/// Accepts the CLI names: tree, counter, fai, counter-obj, approx-counter,
/// relaxed-queue.
SolverKind parse_solver(std::string_view name);
const char* to_string(SolverKind kind);
/// cas-loop, farray, object
FaiVariant parse_fai_variant(std::string_view name);
const char* to_string(FaiVariant variant);
/// fifo, lifo, priority
RelaxedOrder parse_order(std::string_view name);
/// strict, hth, seeded:<seed>
RemovalPolicy parse_policy(std::string_view text);

struct SolverSpec {
    SolverKind kind = SolverKind::Tree;
    FaiVariant fai = FaiVariant::CasLoop;
    Epsilon epsilon{1, 2};
    RelaxedOrder order = RelaxedOrder::Fifo;
    RemovalPolicy policy = StrictFirst{};
    PerturbRule perturb = SeededOffset{0};
};

std::string describe(const SolverSpec& spec);

/// Solvers whose object persists meaningfully across epochs.
bool supports_epochs(SolverKind kind);

/// Everything needed to run one wake-up instance of a solver at size n: the
/// initial arena, the problem it claims to solve, and a program factory.
struct System {
    Arena arena;
    WakeupParams params;
    EpochProgramFactory factory;
    std::size_t ops_per_call = 0;  // object operations per program (0 for the native solvers)

    ProgramList programs(const EpochIndex& epoch = {}) const;
};

/// Throws std::invalid_argument for unsupported (kind, n) combinations, e.g.
/// the tree solver with n not a power of two.
System build_system(const SolverSpec& spec, std::size_t n);

}  // namespace wakeup

#include "wakeup/systems.hpp"

#include <charconv>
#include <stdexcept>

#include "wakeup/farray.hpp"
#include "wakeup/solvers.hpp"

namespace wakeup {

SolverKind parse_solver(std::string_view name) {
    if (name == "tree") return SolverKind::Tree;
    if (name == "counter") return SolverKind::Counter;
    if (name == "fai") return SolverKind::Fai;
    if (name == "counter-obj") return SolverKind::CounterObject;
    if (name == "approx-counter") return SolverKind::ApproxCounter;
    if (name == "relaxed-queue") return SolverKind::RelaxedQueue;
    throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

const char* to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::Tree: return "tree";
        case SolverKind::Counter: return "counter";
        case SolverKind::Fai: return "fai";
        case SolverKind::CounterObject: return "counter-obj";
        case SolverKind::ApproxCounter: return "approx-counter";
        case SolverKind::RelaxedQueue: return "relaxed-queue";
    }
    return "?";
}

FaiVariant parse_fai_variant(std::string_view name) {
    if (name == "cas-loop") return FaiVariant::CasLoop;
    if (name == "farray") return FaiVariant::FArray;
    if (name == "object") return FaiVariant::Object;
    throw std::invalid_argument("unknown fai variant '" + std::string(name) + "'");
}

const char* to_string(FaiVariant variant) {
    switch (variant) {
        case FaiVariant::CasLoop: return "cas-loop";
        case FaiVariant::FArray: return "farray";
        case FaiVariant::Object: return "object";
    }
    return "?";
}

RelaxedOrder parse_order(std::string_view name) {
    if (name == "fifo" || name == "queue") return RelaxedOrder::Fifo;
    if (name == "lifo" || name == "stack") return RelaxedOrder::Lifo;
    if (name == "priority" || name == "pq") return RelaxedOrder::Priority;
    throw std::invalid_argument("unknown container order '" + std::string(name) + "'");
}

RemovalPolicy parse_policy(std::string_view text) {
    if (text == "strict") return StrictFirst{};
    if (text == "hth") return AlwaysHth{};
    if (text.starts_with("seeded")) {
        SeededRank r;
        if (text.size() > 6) {
            if (text[6] != ':') throw std::invalid_argument("expected seeded:<seed>");
            const auto digits = text.substr(7);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), r.seed);
            if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
                throw std::invalid_argument("bad seed in '" + std::string(text) + "'");
            }
        }
        return r;
    }
    throw std::invalid_argument("unknown removal policy '" + std::string(text) + "'");
}

std::string describe(const SolverSpec& spec) {
    std::string out = to_string(spec.kind);
    switch (spec.kind) {
        case SolverKind::Fai: out += " variant=" + std::string(to_string(spec.fai)); break;
        case SolverKind::ApproxCounter: out += " epsilon=" + to_string(spec.epsilon); break;
        case SolverKind::RelaxedQueue:
            out += " epsilon=" + to_string(spec.epsilon) + " order=" + to_string(spec.order) +
                   " policy=" + describe(spec.policy);
            break;
        default: break;
    }
    return out;
}

bool supports_epochs(SolverKind kind) {
    return kind == SolverKind::Fai || kind == SolverKind::CounterObject || kind == SolverKind::ApproxCounter;
}

ProgramList System::programs(const EpochIndex& epoch) const {
    ProgramList out;
    for (std::size_t i = 0; i < params.n; ++i) out.push_back(factory(static_cast<Pid>(i + 1), epoch));
    return out;
}

System build_system(const SolverSpec& spec, std::size_t n) {
    if (n == 0) throw std::invalid_argument("need at least one processor");
    System sys;
    switch (spec.kind) {
        case SolverKind::Tree: {
            const TreeLayout layout = TreeLayout::allocate(sys.arena, n);
            sys.params = easy_params(n);
            sys.factory = [layout](Pid pid, const EpochIndex&) { return tree_solver_program(pid, layout); };
            break;
        }
        case SolverKind::Counter: {
            const FArrayLayout layout = FArrayLayout::allocate(sys.arena, n, Combine::Sum);
            sys.params = hard_params(n);
            sys.factory = [layout](Pid pid, const EpochIndex&) { return counter_solver_program(pid, layout); };
            break;
        }
        case SolverKind::Fai: {
            FetchAndInc target;
            switch (spec.fai) {
                case FaiVariant::CasLoop: target = CasLoopFai{sys.arena.add_words(1, 1)}; break;
                case FaiVariant::FArray:
                    target = FArrayFai{FArrayLayout::allocate(sys.arena, n, Combine::Sum)};
                    break;
                case FaiVariant::Object:
                    target = ObjectFai{sys.arena.add_object(std::make_unique<CounterObject>(1))};
                    break;
            }
            sys.params = hard_params(n);
            sys.ops_per_call = 1;
            sys.factory = [target](Pid pid, const EpochIndex& e) { return fai_adapter(target, pid, e); };
            break;
        }
        case SolverKind::CounterObject: {
            const Addr obj = sys.arena.add_object(std::make_unique<CounterObject>(0));
            sys.params = hard_params(n);
            sys.ops_per_call = 2;
            sys.factory = [obj](Pid pid, const EpochIndex& e) { return counter_adapter(obj, pid, e); };
            break;
        }
        case SolverKind::ApproxCounter: {
            const Epsilon eps = spec.epsilon;
            sys.params = reduction_profile(n, eps);
            const Addr obj =
                sys.arena.add_object(std::make_unique<ApproxCounter>(approx_counter_slack(n, eps), spec.perturb));
            sys.ops_per_call = 2;
            sys.factory = [obj, n, eps](Pid pid, const EpochIndex& e) {
                return approx_counter_adapter(obj, pid, n, eps, e);
            };
            break;
        }
        case SolverKind::RelaxedQueue: {
            const Epsilon eps = spec.epsilon;
            sys.params = reduction_profile(n, eps);
            auto container = std::make_unique<RelaxedContainer>(spec.order, relaxed_slack(n, eps), spec.policy);
            container->load_sequential(n);
            const Addr obj = sys.arena.add_object(std::move(container));
            sys.ops_per_call = 1;
            sys.factory = [obj, n, eps](Pid pid, const EpochIndex&) {
                return relaxed_dequeue_adapter(obj, pid, n, eps);
            };
            break;
        }
    }
    return sys;
}

}  // namespace wakeup

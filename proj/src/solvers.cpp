#include "wakeup/solvers.hpp"

#include <bit>
#include <stdexcept>

namespace wakeup {

TreeLayout::TreeLayout(std::size_t n, Addr base) : n_(n), height_(0), base_(base) {
    if (n == 0 || !std::has_single_bit(n)) {
        throw std::invalid_argument("tree solver needs a power-of-two processor count, got " + std::to_string(n));
    }
    height_ = static_cast<std::size_t>(std::countr_zero(n));
}

TreeLayout TreeLayout::allocate(Arena& arena, std::size_t n) {
    TreeLayout layout(n, arena.word_count());
    arena.add_words(layout.cell_count(), 0);
    return layout;
}

std::size_t TreeLayout::height_of(std::size_t node) const noexcept {
    return height_ - static_cast<std::size_t>(std::bit_width(node) - 1);
}

std::pair<Pid, Pid> TreeLayout::subtree_pids(std::size_t node) const noexcept {
    const std::size_t h = height_of(node);
    const std::size_t first_leaf = node << h;
    const std::size_t last_leaf = first_leaf + (std::size_t{1} << h) - 1;
    return {static_cast<Pid>(first_leaf - n_ + 1), static_cast<Pid>(last_leaf - n_ + 1)};
}

TreeSolver::TreeSolver(const TreeLayout& layout, Pid pid) : layout_(layout), node_(layout.leaf_node(pid)) {
    if (pid == 0 || pid > layout.n()) throw std::invalid_argument("pid out of range for tree layout");
}

Action TreeSolver::step(const std::optional<Outcome>& last) {
    switch (phase_) {
        case Phase::Start:
            phase_ = Phase::AwaitCas;
            return Cas{layout_.cell(node_), 0, static_cast<Word>(claim_)};
        case Phase::AwaitCas:
            // A nonzero node at height h certifies 2^h wake-ups, so a failed
            // CAS may still claim k.
            if (!last->ok || TreeLayout::is_root(node_)) return Return{claim_};
            phase_ = Phase::AwaitSibling;
            return Read{layout_.cell(TreeLayout::sibling(node_))};
        case Phase::AwaitSibling:
            if (last->value == 0) return Return{claim_};
            node_ = TreeLayout::parent(node_);
            claim_ *= 2;
            phase_ = Phase::AwaitCas;
            return Cas{layout_.cell(node_), 0, static_cast<Word>(claim_)};
    }
    return Return{claim_};
}

void TreeSolver::encode(std::vector<Word>& out) const {
    out.push_back(static_cast<Word>(phase_));
    out.push_back(node_);
    out.push_back(static_cast<Word>(claim_));
}

std::unique_ptr<Program> tree_solver_program(Pid pid, const TreeLayout& layout) {
    return make_program(TreeSolver(layout, pid));
}

CounterSolver::CounterSolver(const FArrayLayout& layout, Pid pid) : layout_(layout), update_(layout, pid, 1) {
    if (layout.function() != Combine::Sum) throw std::invalid_argument("counter solver needs a sum f-array");
}

Action CounterSolver::step(const std::optional<Outcome>& last) {
    if (querying_) return Return{static_cast<std::int64_t>(payload_of(last->value))};
    Action a = update_.step(last);
    if (!std::holds_alternative<Return>(a)) return a;
    querying_ = true;
    return Read{layout_.root()};
}

void CounterSolver::encode(std::vector<Word>& out) const {
    out.push_back(querying_ ? 1 : 0);
    update_.encode(out);
}

std::unique_ptr<Program> counter_solver_program(Pid pid, const FArrayLayout& layout) {
    return make_program(CounterSolver(layout, pid));
}

std::uint64_t counter_solver_steps(std::size_t n) {
    return FArrayLayout(n, Combine::Sum).update_steps() + FArrayLayout::query_steps();
}

TreeInvariantMonitor::TreeInvariantMonitor(const TreeLayout& layout)
    : layout_(layout), woken_(layout.n(), 0), successes_(layout.cell_count() + 1, 0) {}

void TreeInvariantMonitor::operator()(const Machine& machine, const Event& event) {
    woken_[event.pid - 1] = 1;
    const auto* cas = std::get_if<Cas>(&event.request);
    if (cas == nullptr || !event.outcome.ok) return;
    if (cas->addr < layout_.base() || cas->addr >= layout_.base() + layout_.cell_count()) return;
    const std::size_t node = cas->addr - layout_.base() + 1;
    if (++successes_[node] > 1) {
        violations_.push_back("node " + std::to_string(node) + " CASed successfully twice at time " +
                              std::to_string(event.time));
    }
    // Only the CASed node changed; woken counts elsewhere only grow.
    const auto [first, last] = layout_.subtree_pids(node);
    std::size_t woken = 0;
    for (Pid p = first; p <= last; ++p) woken += woken_[p - 1];
    const std::size_t need = std::size_t{1} << layout_.height_of(node);
    if (woken < need) {
        violations_.push_back("node " + std::to_string(node) + " set at time " + std::to_string(event.time) +
                              " with " + std::to_string(woken) + " woken below, need " + std::to_string(need));
    }
    (void)machine;
}

}  // namespace wakeup

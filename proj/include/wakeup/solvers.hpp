#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wakeup/farray.hpp"
#include "wakeup/machine.hpp"
#include "wakeup/program.hpp"

namespace wakeup {

/// Complete binary tree of 2n-1 word cells for n = 2^m processors, heap
/// numbered (root 1, leaves n..2n-1). All cells start at 0.
class TreeLayout {
public:
    /// Throws std::invalid_argument unless n is a power of two.
    explicit TreeLayout(std::size_t n, Addr base = 0);

    static TreeLayout allocate(Arena& arena, std::size_t n);

    std::size_t n() const noexcept { return n_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t cell_count() const noexcept { return 2 * n_ - 1; }
    Addr base() const noexcept { return base_; }

    Addr cell(std::size_t node) const noexcept { return base_ + node - 1; }
    std::size_t leaf_node(Pid pid) const noexcept { return n_ + pid - 1; }
    static constexpr bool is_root(std::size_t node) noexcept { return node == 1; }
    static constexpr std::size_t parent(std::size_t node) noexcept { return node / 2; }
    static constexpr std::size_t sibling(std::size_t node) noexcept { return node ^ 1; }
    /// Leaves have height 0, the root has height m.
    std::size_t height_of(std::size_t node) const noexcept;
    /// Leaf pids [first, last] below `node`.
    std::pair<Pid, Pid> subtree_pids(std::size_t node) const noexcept;

private:
    std::size_t n_;
    std::size_t height_;
    Addr base_;
};

/// Tournament-tree solver for the easy problem. At node x with claim k:
/// CAS(x, 0, k); on failure return k; at the root return k (= n); otherwise
/// read the sibling, and climb with 2k if it is nonzero, else return k.
class TreeSolver {
public:
    TreeSolver(const TreeLayout& layout, Pid pid);

    Action step(const std::optional<Outcome>& last);
    void encode(std::vector<Word>& out) const;

private:
    enum class Phase : std::uint8_t { Start, AwaitCas, AwaitSibling };

    TreeLayout layout_;
    std::size_t node_;
    std::int64_t claim_ = 1;
    Phase phase_ = Phase::Start;
};

std::unique_ptr<Program> tree_solver_program(Pid pid, const TreeLayout& layout);

/// Hard-problem solver over a sum f-array: update own leaf to 1, return the
/// root sum.
class CounterSolver {
public:
    CounterSolver(const FArrayLayout& layout, Pid pid);

    Action step(const std::optional<Outcome>& last);
    void encode(std::vector<Word>& out) const;

private:
    FArrayLayout layout_;
    FArrayUpdate update_;
    bool querying_ = false;
};

std::unique_ptr<Program> counter_solver_program(Pid pid, const FArrayLayout& layout);

/// Exact per-processor operation count of the counter solver.
std::uint64_t counter_solver_steps(std::size_t n);

/// Online checks for tree-solver runs, fed as a RunOptions observer:
/// every nonzero node at height h has at least 2^h woken processors below it,
/// and no cell is successfully CASed twice.
class TreeInvariantMonitor {
public:
    explicit TreeInvariantMonitor(const TreeLayout& layout);

    void operator()(const Machine& machine, const Event& event);

    bool ok() const noexcept { return violations_.empty(); }
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    TreeLayout layout_;
    std::vector<std::uint8_t> woken_;
    std::vector<std::uint32_t> successes_;
    std::vector<std::string> violations_;
};

}  // namespace wakeup

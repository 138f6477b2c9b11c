#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wakeup/memory.hpp"

namespace wakeup {

/// One completed high-level operation with its real-time interval
/// [invoke, respond] in event slots.
struct HistoryOp {
    Pid pid = 0;
    Time invoke = 0;
    Time respond = 0;
    int kind = 0;
    std::int64_t arg = 0;
    std::int64_t result = 0;
};

/// Brute-force search for a sequential witness: an order of all operations
/// that respects real-time precedence (a finishes before b starts => a before
/// b) and in which `Model::apply(op)` accepts every recorded result.
///
/// `Model` is copyable and exposes `bool apply(const HistoryOp&)`. Returns
/// the witness as indices into `ops`, or nullopt if none exists. Intended
/// for histories of a handful of operations.
template <class Model>
std::optional<std::vector<std::size_t>> find_linearization(std::span<const HistoryOp> ops, const Model& initial) {
    if (ops.size() > 63) throw std::invalid_argument("history too long for brute-force search");
    const std::uint64_t all = (std::uint64_t{1} << ops.size()) - 1;
    std::vector<std::size_t> order;

    auto search = [&](auto&& self, std::uint64_t done, const Model& model) -> bool {
        if (done == all) return true;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (done & (std::uint64_t{1} << i)) continue;
            bool minimal = true;
            for (std::size_t j = 0; j < ops.size() && minimal; ++j) {
                if (j != i && !(done & (std::uint64_t{1} << j)) && ops[j].respond < ops[i].invoke) minimal = false;
            }
            if (!minimal) continue;
            Model next = model;
            if (!next.apply(ops[i])) continue;
            order.push_back(i);
            if (self(self, done | (std::uint64_t{1} << i), next)) return true;
            order.pop_back();
        }
        return false;
    };

    if (search(search, 0, initial)) return order;
    return std::nullopt;
}

}  // namespace wakeup

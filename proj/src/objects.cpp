#include "wakeup/objects.hpp"

#include <algorithm>

namespace wakeup {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

namespace {

[[noreturn]] void unsupported(const SequentialObject& obj, const ObjectOp& op) {
    throw SimulationFault(obj.describe() + " does not support " + std::string(op_name(op.kind)));
}

}  // namespace

Outcome CounterObject::apply(const ObjectOp& op) {
    switch (op.kind) {
        case ObjectOpKind::Increment: ++value_; return {1, true, 0};
        case ObjectOpKind::Read: return {value_, true, 0};
        case ObjectOpKind::FetchAndIncrement: return {value_++, true, 0};
        default: unsupported(*this, op);
    }
}

std::string CounterObject::describe() const { return "counter(" + std::to_string(value_) + ")"; }

std::int64_t ApproxCounter::next_offset() {
    const std::uint64_t index = reads_++;
    if (const auto* fixed = std::get_if<FixedOffset>(&rule_)) return fixed->offset;
    const auto seed = std::get<SeededOffset>(rule_).seed;
    const auto span = 2 * h_ + 3;
    const auto draw = splitmix64(seed ^ splitmix64(index)) % span;
    return static_cast<std::int64_t>(draw) - static_cast<std::int64_t>(h_ + 1);
}

std::uint64_t ApproxCounter::read() {
    const auto v = static_cast<std::int64_t>(value_);
    const auto h = static_cast<std::int64_t>(h_);
    const auto lo = std::max<std::int64_t>(v - h, 0);
    const auto hi = v + h;
    const auto r = static_cast<std::uint64_t>(std::clamp(v + next_offset(), lo, hi));
    log_.emplace_back(value_, r);
    return r;
}

Outcome ApproxCounter::apply(const ObjectOp& op) {
    switch (op.kind) {
        case ObjectOpKind::Increment: increment(); return {1, true, 0};
        case ObjectOpKind::Read: return {read(), true, 0};
        default: unsupported(*this, op);
    }
}

void ApproxCounter::encode(std::vector<Word>& out) const {
    out.push_back(value_);
    out.push_back(std::holds_alternative<SeededOffset>(rule_) ? reads_ : 0);
}

std::string ApproxCounter::describe() const {
    return "approx-counter(h=" + std::to_string(h_) + ", v=" + std::to_string(value_) + ")";
}

const char* to_string(RelaxedOrder order) {
    switch (order) {
        case RelaxedOrder::Fifo: return "queue";
        case RelaxedOrder::Lifo: return "stack";
        case RelaxedOrder::Priority: return "priority-queue";
    }
    return "?";
}

std::string describe(const RemovalPolicy& policy) {
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, StrictFirst>) {
                return "strict-first";
            } else if constexpr (std::is_same_v<T, AlwaysHth>) {
                return "always-hth";
            } else if constexpr (std::is_same_v<T, SeededRank>) {
                return "seeded(" + std::to_string(p.seed) + ")";
            } else {
                return "fixed-rank(" + std::to_string(p.rank) + ")";
            }
        },
        policy);
}

RelaxedContainer::RelaxedContainer(RelaxedOrder order, std::size_t h, RemovalPolicy policy)
    : order_(order), h_(h), policy_(policy) {}

void RelaxedContainer::insert(Word value) {
    switch (order_) {
        case RelaxedOrder::Fifo: items_.push_back(value); break;
        case RelaxedOrder::Lifo: items_.push_front(value); break;
        case RelaxedOrder::Priority:
            items_.insert(std::upper_bound(items_.begin(), items_.end(), value), value);
            break;
    }
}

void RelaxedContainer::load_sequential(std::size_t n) {
    if (order_ == RelaxedOrder::Lifo) {
        for (std::size_t v = n; v >= 1; --v) insert(v);
    } else {
        for (std::size_t v = 1; v <= n; ++v) insert(v);
    }
}

std::size_t RelaxedContainer::choose(std::size_t window) {
    const std::uint64_t index = removals_++;
    return std::visit(
        [&](const auto& p) -> std::size_t {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, StrictFirst>) {
                return 0;
            } else if constexpr (std::is_same_v<T, AlwaysHth>) {
                return window - 1;
            } else if constexpr (std::is_same_v<T, SeededRank>) {
                return static_cast<std::size_t>(splitmix64(p.seed ^ splitmix64(index)) % window);
            } else {
                return p.rank - 1;
            }
        },
        policy_);
}

std::optional<Word> RelaxedContainer::remove() {
    if (items_.empty()) return std::nullopt;
    const std::size_t window = std::min(std::max<std::size_t>(h_, 1), items_.size());
    const std::size_t index = choose(window);
    if (index >= window) {
        throw RelaxationViolation("removal of rank " + std::to_string(index + 1) + " exceeds window " +
                                  std::to_string(window) + " of " + describe());
    }
    const Word value = items_[index];
    items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(index));
    ranks_.push_back(index + 1);
    return value;
}

Outcome RelaxedContainer::apply(const ObjectOp& op) {
    switch (op.kind) {
        case ObjectOpKind::Insert: insert(op.arg); return {1, true, 0};
        case ObjectOpKind::Remove: {
            auto v = remove();
            if (!v) return {0, false, 0};
            return {*v, true, 0};
        }
        default: unsupported(*this, op);
    }
}

void RelaxedContainer::encode(std::vector<Word>& out) const {
    out.push_back(removals_);
    out.insert(out.end(), items_.begin(), items_.end());
}

std::string RelaxedContainer::describe() const {
    return std::string("relaxed-") + to_string(order_) + "(h=" + std::to_string(h_) + ", " + wakeup::describe(policy_) +
           ", size=" + std::to_string(items_.size()) + ")";
}

}  // namespace wakeup

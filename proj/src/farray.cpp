#include "wakeup/farray.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace wakeup {

std::string_view to_string(Combine f) {
    switch (f) {
        case Combine::Sum: return "sum";
        case Combine::Min: return "min";
        case Combine::Max: return "max";
    }
    return "?";
}

std::uint32_t identity(Combine f) noexcept { return f == Combine::Sum ? 0 : kNoValue; }

std::uint32_t combine(Combine f, std::uint32_t a, std::uint32_t b) noexcept {
    switch (f) {
        case Combine::Sum: return a + b;
        case Combine::Min: return std::min(a, b);  // kNoValue exceeds every payload
        case Combine::Max:
            if (a == kNoValue) return b;
            if (b == kNoValue) return a;
            return std::max(a, b);
    }
    return 0;
}

FArrayLayout::FArrayLayout(std::size_t n, Combine f, Addr base)
    : n_(n), leaves_(std::bit_ceil(std::max<std::size_t>(n, 1))), height_(0), f_(f), base_(base) {
    if (n == 0) throw std::invalid_argument("f-array needs at least one leaf");
    height_ = static_cast<std::size_t>(std::countr_zero(leaves_));
}

FArrayLayout FArrayLayout::allocate(Arena& arena, std::size_t n, Combine f) {
    FArrayLayout layout(n, f, arena.word_count());
    const Addr base = arena.add_words(layout.cell_count(), identity(f));
    (void)base;
    return layout;
}

std::vector<Word> FArrayLayout::initial_image() const { return std::vector<Word>(cell_count(), identity(f_)); }

std::uint32_t FArrayLayout::root_value(const Arena& arena) const { return payload_of(arena.read(root())); }

std::uint32_t FArrayLayout::leaf_value(const Arena& arena, Pid pid) const {
    return payload_of(arena.read(cell(leaf_node(pid))));
}

bool FArrayLayout::consistent(const Arena& arena) const {
    for (std::size_t node = 1; node < leaves_; ++node) {
        const auto expect = combine(f_, payload_of(arena.read(cell(2 * node))), payload_of(arena.read(cell(2 * node + 1))));
        if (payload_of(arena.read(cell(node))) != expect) return false;
    }
    return true;
}

FArrayUpdate::FArrayUpdate(const FArrayLayout& layout, Pid pid, std::uint32_t value)
    : layout_(layout), leaf_(layout.leaf_node(pid)), value_(value) {
    if (pid == 0 || pid > layout.n()) throw std::invalid_argument("pid does not own a leaf");
    if (value >= kPayloadLimit) throw std::invalid_argument("f-array payloads are limited to 31 bits");
}

Action FArrayUpdate::begin_refresh() {
    if (node_ == 0) {
        phase_ = Phase::Done;
        return Return{0};
    }
    phase_ = Phase::AwaitNode;
    return Read{layout_.cell(node_)};
}

Action FArrayUpdate::read_left() {
    const std::size_t child = 2 * node_;
    if (child == leaf_) {
        left_ = value_;
        return read_right();
    }
    phase_ = Phase::AwaitLeft;
    return Read{layout_.cell(child)};
}

Action FArrayUpdate::read_right() {
    const std::size_t child = 2 * node_ + 1;
    if (child == leaf_) {
        right_ = value_;
        return issue_cas();
    }
    phase_ = Phase::AwaitRight;
    return Read{layout_.cell(child)};
}

Action FArrayUpdate::issue_cas() {
    phase_ = Phase::AwaitCas;
    return Cas{layout_.cell(node_), old_, pack(version_of(old_) + 1, combine(layout_.function(), left_, right_))};
}

Action FArrayUpdate::step(const std::optional<Outcome>& last) {
    switch (phase_) {
        case Phase::Start:
            phase_ = Phase::AwaitWrite;
            return Write{layout_.cell(leaf_), pack(0, value_)};
        case Phase::AwaitWrite:
            node_ = leaf_ / 2;
            attempt_ = 0;
            return begin_refresh();
        case Phase::AwaitNode:
            old_ = last->value;
            return read_left();
        case Phase::AwaitLeft:
            left_ = payload_of(last->value);
            return read_right();
        case Phase::AwaitRight:
            right_ = payload_of(last->value);
            return issue_cas();
        case Phase::AwaitCas:
            if (++attempt_ < 2) return begin_refresh();
            node_ /= 2;
            attempt_ = 0;
            return begin_refresh();
        case Phase::Done: break;
    }
    return Return{0};
}

void FArrayUpdate::encode(std::vector<Word>& out) const {
    out.push_back(static_cast<Word>(phase_));
    out.push_back(node_);
    out.push_back(static_cast<Word>(attempt_));
    out.push_back(old_);
    out.push_back(left_);
    out.push_back(right_);
    out.push_back(value_);
}

FArrayClient::FArrayClient(const FArrayLayout& layout, Pid pid, std::vector<FArrayOp> ops)
    : layout_(layout), pid_(pid), ops_(std::move(ops)) {
    if (ops_.empty()) throw std::invalid_argument("f-array client needs at least one operation");
}

Action FArrayClient::start_op() {
    if (index_ == ops_.size()) return Return{static_cast<std::int64_t>(last_query_)};
    const FArrayOp& op = ops_[index_];
    if (op.kind == FArrayOp::Kind::Query) {
        awaiting_query_ = true;
        return Read{layout_.root()};
    }
    update_.emplace(layout_, pid_, op.value);
    return update_->step(std::nullopt);
}

Action FArrayClient::step(const std::optional<Outcome>& last) {
    if (!last) return start_op();
    if (awaiting_query_) {
        awaiting_query_ = false;
        last_query_ = payload_of(last->value);
        ++index_;
        return start_op();
    }
    Action a = update_->step(last);
    if (std::holds_alternative<Return>(a)) {
        update_.reset();
        ++index_;
        return start_op();
    }
    return a;
}

void FArrayClient::encode(std::vector<Word>& out) const {
    out.push_back(index_);
    out.push_back(awaiting_query_ ? 1 : 0);
    out.push_back(last_query_);
    if (update_) update_->encode(out);
}

std::unique_ptr<Program> farray_client_program(const FArrayLayout& layout, Pid pid, std::vector<FArrayOp> ops) {
    return make_program(FArrayClient(layout, pid, std::move(ops)));
}

}  // namespace wakeup

#include "wakeup/fetch_inc.hpp"

namespace wakeup {

FaiCall::FaiCall(const FetchAndInc& target, Pid pid, std::uint32_t prior_calls)
    : target_(target), pid_(pid), prior_calls_(prior_calls) {}

Action FaiCall::step(const std::optional<Outcome>& last) {
    if (const auto* loop = std::get_if<CasLoopFai>(&target_)) {
        // phase 0: issue read; 1: read returned; 2: CAS returned
        switch (phase_) {
            case 0:
                phase_ = 1;
                return Read{loop->word};
            case 1:
                seen_ = last->value;
                phase_ = 2;
                return Cas{loop->word, seen_, seen_ + 1};
            default:
                if (last->ok) return Return{static_cast<std::int64_t>(seen_)};
                phase_ = 1;
                return Read{loop->word};
        }
    }
    if (const auto* fa = std::get_if<FArrayFai>(&target_)) {
        if (phase_ == 0) {
            update_.emplace(fa->layout, pid_, prior_calls_ + 1);
            phase_ = 1;
            return update_->step(std::nullopt);
        }
        if (phase_ == 1) {
            Action a = update_->step(last);
            if (!std::holds_alternative<Return>(a)) return a;
            update_.reset();
            phase_ = 2;
            return Read{fa->layout.root()};
        }
        return Return{static_cast<std::int64_t>(payload_of(last->value))};
    }
    const auto& obj = std::get<ObjectFai>(target_);
    if (phase_ == 0) {
        phase_ = 1;
        return Apply{obj.object, ObjectOp{ObjectOpKind::FetchAndIncrement, 0}};
    }
    return Return{static_cast<std::int64_t>(last->value)};
}

void FaiCall::encode(std::vector<Word>& out) const {
    out.push_back(static_cast<Word>(phase_));
    out.push_back(seen_);
    if (update_) update_->encode(out);
}

std::unique_ptr<Program> fai_program(const FetchAndInc& target, Pid pid, std::uint32_t prior_calls) {
    return make_program(FaiCall(target, pid, prior_calls));
}

}  // namespace wakeup

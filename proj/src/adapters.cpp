#include "wakeup/adapters.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace wakeup {

namespace {

std::uint64_t parse_uint(std::string_view text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("bad number in epsilon: '" + std::string(text) + "'");
    }
    return v;
}

std::int64_t corrected(Word raw, const EpochIndex& epoch) {
    return static_cast<std::int64_t>(raw) - static_cast<std::int64_t>(epoch.offset());
}

struct FaiAdapter {
    FaiCall call;
    EpochIndex epoch;

    Action step(const std::optional<Outcome>& last) {
        Action a = call.step(last);
        if (auto* r = std::get_if<Return>(&a)) r->value = corrected(static_cast<Word>(r->value), epoch);
        return a;
    }
    void encode(std::vector<Word>& out) const { call.encode(out); }
};

// Issues an Increment and then a Read on an object cell and maps the read.
template <class Map>
struct IncrementThenRead {
    Addr object;
    Map map;
    int phase = 0;

    Action step(const std::optional<Outcome>& last) {
        switch (phase++) {
            case 0: return Apply{object, ObjectOp{ObjectOpKind::Increment, 0}};
            case 1: return Apply{object, ObjectOp{ObjectOpKind::Read, 0}};
            default: return Return{map(last->value)};
        }
    }
    void encode(std::vector<Word>& out) const { out.push_back(static_cast<Word>(phase)); }
};

struct ExactRead {
    EpochIndex epoch;
    std::int64_t operator()(Word t) const { return corrected(t, epoch); }
};

struct ApproxRead {
    EpochIndex epoch;
    std::int64_t slack;
    std::int64_t n;
    std::int64_t operator()(Word t) const {
        const std::int64_t v = corrected(t, epoch) - slack;
        return std::clamp<std::int64_t>(std::max<std::int64_t>(v, 1), 1, n);
    }
};

struct DequeueOnce {
    Addr container;
    std::int64_t threshold;
    std::int64_t top;
    bool issued = false;

    Action step(const std::optional<Outcome>& last) {
        if (!issued) {
            issued = true;
            return Apply{container, ObjectOp{ObjectOpKind::Remove, 0}};
        }
        if (!last->ok) return Return{0};
        return Return{static_cast<std::int64_t>(last->value) > threshold ? top : 1};
    }
    void encode(std::vector<Word>& out) const { out.push_back(issued ? 1 : 0); }
};

}  // namespace

Epsilon Epsilon::parse(std::string_view text) {
    Epsilon e;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        e.num = parse_uint(text.substr(0, slash));
        e.den = parse_uint(text.substr(slash + 1));
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto whole = text.substr(0, dot);
        const auto frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 9) throw std::invalid_argument("bad epsilon '" + std::string(text) + "'");
        e.den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) e.den *= 10;
        e.num = (whole.empty() ? 0 : parse_uint(whole)) * e.den + parse_uint(frac);
    } else {
        e.num = parse_uint(text);
        e.den = 1;
    }
    if (e.den == 0 || e.num == 0 || e.num > e.den) {
        throw std::invalid_argument("epsilon must lie in (0, 1], got '" + std::string(text) + "'");
    }
    const auto g = std::gcd(e.num, e.den);
    e.num /= g;
    e.den /= g;
    return e;
}

std::string to_string(const Epsilon& eps) {
    return eps.den == 1 ? std::to_string(eps.num) : std::to_string(eps.num) + "/" + std::to_string(eps.den);
}

std::size_t reduction_tail(std::size_t n, const Epsilon& eps) {
    const std::uint64_t top = eps.num * n;
    if (top % (2 * eps.den) != 0 || top == 0) {
        throw std::invalid_argument("eps*n/2 is not a positive integer for n=" + std::to_string(n) +
                                    ", eps=" + to_string(eps));
    }
    return top / (2 * eps.den);
}

std::size_t approx_counter_slack(std::size_t n, const Epsilon& eps) {
    const std::uint64_t top = (eps.den - eps.num) * n;
    if (top % (2 * eps.den) != 0) {
        throw std::invalid_argument("(1-eps)*n/2 is not an integer for n=" + std::to_string(n) +
                                    ", eps=" + to_string(eps));
    }
    return top / (2 * eps.den);
}

std::size_t relaxed_slack(std::size_t n, const Epsilon& eps) { return 2 * approx_counter_slack(n, eps); }

WakeupParams reduction_profile(std::size_t n, const Epsilon& eps) {
    const std::size_t tail = reduction_tail(n, eps);
    approx_counter_slack(n, eps);
    return profile_params(n, tail, tail);
}

std::size_t relaxed_threshold(std::size_t n, const Epsilon& eps) {
    return std::max<std::size_t>(relaxed_slack(n, eps), 1) + reduction_tail(n, eps) - 1;
}

std::unique_ptr<Program> fai_adapter(const FetchAndInc& f, Pid pid, const EpochIndex& epoch) {
    return make_program(FaiAdapter{FaiCall(f, pid, epoch.index - 1), epoch});
}

std::unique_ptr<Program> counter_adapter(Addr counter, Pid, const EpochIndex& epoch) {
    return make_program(IncrementThenRead<ExactRead>{counter, ExactRead{epoch}});
}

std::unique_ptr<Program> approx_counter_adapter(Addr counter, Pid, std::size_t n, const Epsilon& eps,
                                                const EpochIndex& epoch) {
    reduction_tail(n, eps);
    const auto slack = static_cast<std::int64_t>(approx_counter_slack(n, eps));
    return make_program(
        IncrementThenRead<ApproxRead>{counter, ApproxRead{epoch, slack, static_cast<std::int64_t>(n)}});
}

std::unique_ptr<Program> relaxed_dequeue_adapter(Addr container, Pid, std::size_t n, const Epsilon& eps) {
    return make_program(DequeueOnce{container, static_cast<std::int64_t>(relaxed_threshold(n, eps)),
                                    static_cast<std::int64_t>(reduction_tail(n, eps))});
}

}  // namespace wakeup

#include "wakeup/wakeup.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace wakeup {

WakeupParams WakeupParams::from_slack(std::vector<std::size_t> s) {
    const std::size_t n = s.size();
    if (n == 0) throw std::invalid_argument("slack vector must be nonempty");
    for (std::size_t i = 0; i < n; ++i) {
        if (s[i] > n) throw std::invalid_argument("slack s_" + std::to_string(i + 1) + " exceeds n");
        if (i > 0 && s[i] < s[i - 1]) throw std::invalid_argument("slack vector must be non-decreasing");
    }
    return WakeupParams{n, std::move(s)};
}

WakeupParams easy_params(std::size_t n) {
    if (n == 0) throw std::invalid_argument("n must be at least 1");
    std::vector<std::size_t> s(n, 1);
    s.back() = n;
    return WakeupParams::from_slack(std::move(s));
}

WakeupParams hard_params(std::size_t n) {
    if (n == 0) throw std::invalid_argument("n must be at least 1");
    std::vector<std::size_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i + 1;
    return WakeupParams::from_slack(std::move(s));
}

WakeupParams profile_params(std::size_t n, std::size_t tail_count, std::size_t tail_value) {
    if (tail_count > n) throw std::invalid_argument("profile tail longer than n");
    std::vector<std::size_t> s(n, 1);
    std::fill(s.end() - static_cast<std::ptrdiff_t>(tail_count), s.end(), tail_value);
    return WakeupParams::from_slack(std::move(s));
}

WakeupParams parse_slack(std::string_view list) {
    std::vector<std::size_t> s;
    while (!list.empty()) {
        auto comma = list.find(',');
        auto item = list.substr(0, comma);
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            throw std::invalid_argument("bad slack entry '" + std::string(item) + "'");
        }
        s.push_back(v);
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    return WakeupParams::from_slack(std::move(s));
}

std::string to_string(const WakeupParams& params) {
    std::ostringstream os;
    os << "J(";
    for (std::size_t i = 0; i < params.s.size(); ++i) os << (i ? "," : "") << params.s[i];
    os << ")";
    return os.str();
}

const char* to_string(Clause clause) {
    switch (clause) {
        case Clause::Termination: return "termination";
        case Clause::Truthfulness: return "truthfulness";
        case Clause::Nontriviality: return "nontriviality";
    }
    return "?";
}

Verdict judge(const WakeupParams& params, std::span<const Settlement> settled) {
    if (settled.size() != params.n) {
        throw std::invalid_argument("run has " + std::to_string(settled.size()) + " processors, problem has " +
                                    std::to_string(params.n));
    }
    Verdict v;
    const auto n = static_cast<std::int64_t>(params.n);
    bool complete = true;
    for (std::size_t i = 0; i < settled.size(); ++i) {
        const Pid pid = static_cast<Pid>(i + 1);
        const auto& st = settled[i];
        if (!st.value) {
            complete = false;
            v.termination_ok = false;
            v.violations.push_back({Clause::Termination, pid, "processor " + std::to_string(pid) + " did not return"});
            continue;
        }
        if (*st.value < 1 || *st.value > n) {
            v.termination_ok = false;
            v.violations.push_back({Clause::Termination, pid,
                                    "processor " + std::to_string(pid) + " returned " + std::to_string(*st.value) +
                                        " outside [1 " + std::to_string(n) + "]"});
        }
        if (*st.value > static_cast<std::int64_t>(st.woken_at_return)) {
            v.truthfulness_ok = false;
            v.violations.push_back({Clause::Truthfulness, pid,
                                    "processor " + std::to_string(pid) + " returned " + std::to_string(*st.value) +
                                        " with only " + std::to_string(st.woken_at_return) + " woken"});
        }
    }
    if (!complete) {
        v.nontriviality_evaluated = false;
        return v;
    }
    std::vector<std::int64_t> sorted;
    sorted.reserve(settled.size());
    for (const auto& st : settled) sorted.push_back(*st.value);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (sorted[k] < static_cast<std::int64_t>(params.s[k])) {
            v.nontriviality_ok = false;
            v.violations.push_back({Clause::Nontriviality, k + 1,
                                    "rank " + std::to_string(k + 1) + " return " + std::to_string(sorted[k]) +
                                        " below s_k = " + std::to_string(params.s[k])});
        }
    }
    return v;
}

std::vector<Settlement> settlements(const Trace& trace) {
    std::vector<Time> wakes;
    for (const auto& p : trace.processors) {
        if (p.wake_time) wakes.push_back(*p.wake_time);
    }
    std::sort(wakes.begin(), wakes.end());
    std::vector<Settlement> out(trace.processors.size());
    for (std::size_t i = 0; i < trace.processors.size(); ++i) {
        const auto& p = trace.processors[i];
        if (!p.return_value) continue;
        out[i].value = p.return_value;
        out[i].woken_at_return =
            static_cast<std::size_t>(std::upper_bound(wakes.begin(), wakes.end(), *p.return_time) - wakes.begin());
    }
    return out;
}

Verdict check_trace(const WakeupParams& params, const Trace& trace) {
    return judge(params, settlements(trace));
}

Verdict check_boolean_trace(std::size_t n, const Trace& trace) {
    if (trace.processor_count() != n) throw std::invalid_argument("processor count mismatch");
    const auto settled = settlements(trace);
    Verdict v;
    bool complete = true;
    bool any_true = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Pid pid = static_cast<Pid>(i + 1);
        const auto& st = settled[i];
        if (!st.value) {
            complete = false;
            v.termination_ok = false;
            v.violations.push_back({Clause::Termination, pid, "processor " + std::to_string(pid) + " did not return"});
            continue;
        }
        if (*st.value != 0 && *st.value != 1) {
            v.termination_ok = false;
            v.violations.push_back({Clause::Termination, pid,
                                    "processor " + std::to_string(pid) + " returned non-boolean " +
                                        std::to_string(*st.value)});
            continue;
        }
        if (*st.value == 1) {
            any_true = true;
            if (st.woken_at_return < n) {
                v.truthfulness_ok = false;
                v.violations.push_back({Clause::Truthfulness, pid,
                                        "processor " + std::to_string(pid) + " returned true with only " +
                                            std::to_string(st.woken_at_return) + " woken"});
            }
        }
    }
    if (!complete) {
        v.nontriviality_evaluated = false;
        return v;
    }
    if (!any_true) {
        v.nontriviality_ok = false;
        v.violations.push_back({Clause::Nontriviality, n, "every processor returned false"});
    }
    return v;
}

std::string verdict_csv(const Verdict& verdict) {
    std::ostringstream os;
    os << "clause,ok,detail\n";
    auto row = [&](Clause c, bool ok) {
        std::string detail;
        for (const auto& viol : verdict.violations) {
            if (viol.clause != c) continue;
            if (!detail.empty()) detail += "; ";
            detail += viol.detail;
        }
        if (c == Clause::Nontriviality && !verdict.nontriviality_evaluated) detail = "not evaluated (incomplete run)";
        os << to_string(c) << ',' << (ok ? "true" : "false") << ',' << detail << '\n';
    };
    row(Clause::Termination, verdict.termination_ok);
    row(Clause::Truthfulness, verdict.truthfulness_ok);
    row(Clause::Nontriviality, verdict.nontriviality_ok);
    return os.str();
}

namespace {

class MappedReturn final : public Program {
public:
    enum class Direction { BoolToGeneral, GeneralToBool };

    MappedReturn(std::unique_ptr<Program> inner, std::size_t n, Direction dir)
        : inner_(std::move(inner)), n_(static_cast<std::int64_t>(n)), dir_(dir) {}

    Action step(const std::optional<Outcome>& last) override {
        Action a = inner_->step(last);
        if (auto* r = std::get_if<Return>(&a)) return Return{map(r->value)};
        return a;
    }

    std::unique_ptr<Program> clone() const override {
        return std::make_unique<MappedReturn>(inner_->clone(), static_cast<std::size_t>(n_), dir_);
    }

    void encode(std::vector<Word>& out) const override { inner_->encode(out); }

private:
    std::int64_t map(std::int64_t v) const {
        if (dir_ == Direction::BoolToGeneral) {
            if (v == 0) return 1;
            if (v == 1) return n_;
            return 0;
        }
        if (v == n_) return 1;
        if (v >= 1 && v < n_) return 0;
        return -1;
    }

    std::unique_ptr<Program> inner_;
    std::int64_t n_;
    Direction dir_;
};

}  // namespace

std::unique_ptr<Program> wrap_bool_as_general(std::unique_ptr<Program> inner, std::size_t n) {
    return std::make_unique<MappedReturn>(std::move(inner), n, MappedReturn::Direction::BoolToGeneral);
}

std::unique_ptr<Program> wrap_general_as_bool(std::unique_ptr<Program> inner, std::size_t n) {
    return std::make_unique<MappedReturn>(std::move(inner), n, MappedReturn::Direction::GeneralToBool);
}

std::uint64_t lower_bound_value(const WakeupParams& params) {
    std::uint64_t total = params.n;
    for (std::size_t s : params.s) {
        if (s >= 2) total += static_cast<std::uint64_t>(std::bit_width(s) - 1);
    }
    return total;
}

void WakeupHistory::observe(const Machine& machine, const Event& event) {
    const std::size_t i = event.pid - 1;
    if (!woken_[i]) {
        woken_[i] = 1;
        ++woken_count_;
    }
    if (machine.returned(event.pid) && !settled_[i].value) {
        settled_[i].value = machine.trace().processor(event.pid).return_value;
        settled_[i].woken_at_return = woken_count_;
    }
}

void WakeupHistory::encode(std::vector<Word>& out) const {
    for (std::size_t i = 0; i < woken_.size(); ++i) {
        out.push_back(woken_[i]);
        const auto& st = settled_[i];
        if (!st.value) {
            out.push_back(~Word{0});
            continue;
        }
        out.push_back(static_cast<Word>(*st.value));
        out.push_back(*st.value <= static_cast<std::int64_t>(st.woken_at_return) ? 1 : 0);
    }
}

ExploreSummary explore_wakeup(const WakeupParams& params, const ProgramList& programs, const Arena& arena,
                              const ExploreLimits& limits) {
    Machine root(clone_programs(programs), arena, /*record_events=*/false);
    return explore_schedules(
        root, WakeupHistory(params.n),
        [&](const Machine&, const WakeupHistory& h) { return judge(params, h.settlements()).passed(); }, limits);
}

}  // namespace wakeup

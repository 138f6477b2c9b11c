#include "wakeup/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wakeup {

ScheduleBattery ScheduleBattery::standard(std::size_t count, std::uint64_t base) {
    ScheduleBattery b;
    for (std::size_t i = 0; i < count; ++i) b.seeds.push_back(base + i);
    return b;
}

std::vector<SchedulePolicy> ScheduleBattery::policies() const {
    std::vector<SchedulePolicy> out;
    if (round_robin) out.emplace_back(RoundRobin{});
    for (auto seed : seeds) out.emplace_back(SeededRandom{seed});
    return out;
}

void ExperimentSpec::validate() const {
    if (ns.empty()) throw std::invalid_argument("experiment needs at least one n");
    if (epochs == 0) throw std::invalid_argument("epochs must be >= 1");
    if (epochs > 1 && !supports_epochs(solver.kind)) {
        throw std::invalid_argument(std::string("solver ") + to_string(solver.kind) + " does not run in epochs");
    }
    if (!battery.round_robin && battery.seeds.empty()) throw std::invalid_argument("schedule battery is empty");
    for (auto n : ns) build_system(solver, n);
    if (claim && (ns.size() != 1 || claim->n != ns.front())) {
        throw std::invalid_argument("a claimed problem needs a single matching n");
    }
}

ScalingRow make_row(std::size_t n, std::uint64_t total_work, std::uint64_t per_proc_max, std::uint64_t lower_bound) {
    ScalingRow r;
    r.n = n;
    r.total_work = total_work;
    r.per_proc_max = per_proc_max;
    r.lower_bound = lower_bound;
    r.ratio_linear = static_cast<double>(total_work) / static_cast<double>(n);
    r.ratio_nlogn = n < 2 ? INFINITY
                          : static_cast<double>(total_work) / (static_cast<double>(n) * std::log2(static_cast<double>(n)));
    return r;
}

namespace {

struct SizeOutcome {
    ScalingRow row;
    std::uint64_t runs = 0;
    std::optional<RunFailure> failure;
};

SizeOutcome run_size(const ExperimentSpec& spec, std::size_t n) {
    SizeOutcome out;
    std::uint64_t worst_total = 0;
    std::uint64_t worst_proc = 0;
    WakeupParams params;
    for (const auto& policy : spec.battery.policies()) {
        System sys = build_system(spec.solver, n);
        params = spec.claim.value_or(sys.params);
        const EpochPlan plan{spec.epochs, n, 0};
        EpochResult r = epoch_runner(plan, params, sys.arena, sys.factory, sys.ops_per_call, policy);
        ++out.runs;
        if (!r.passed()) {
            // Replay with event recording so the failing trace can be exported.
            System again = build_system(spec.solver, n);
            EpochResult replay = epoch_runner(plan, params, again.arena, again.factory, again.ops_per_call,
                                              policy, /*record_events=*/true);
            RunFailure f;
            f.n = n;
            f.schedule = describe(policy);
            f.epoch = *r.failed_epoch;
            f.verdict = r.verdicts.back();
            if (replay.failing_run) f.trace = replay.failing_run->trace;
            out.failure = std::move(f);
            return out;
        }
        worst_total = std::max(worst_total, r.work.total);
        worst_proc = std::max(worst_proc, r.work.max_per_proc());
    }
    out.row = make_row(n, worst_total, worst_proc, lower_bound_value(params) * spec.epochs);
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers) {
    spec.validate();
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(spec.ns.size()));

    std::vector<SizeOutcome> outcomes(spec.ns.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next++; i < spec.ns.size(); i = next++) outcomes[i] = run_size(spec, spec.ns[i]);
        }));
    }
    for (auto& f : pool) f.get();

    ExperimentResult result;
    std::vector<std::size_t> order(spec.ns.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return spec.ns[a] < spec.ns[b]; });
    for (auto i : order) {
        result.runs += outcomes[i].runs;
        if (outcomes[i].failure) {
            if (!result.failure) result.failure = std::move(outcomes[i].failure);
            continue;
        }
        result.rows.push_back(outcomes[i].row);
    }
    return result;
}

std::string csv_header() { return "n,total_work,per_proc_max,lower_bound,ratio_linear,ratio_nlogn"; }

std::string to_csv(const std::vector<ScalingRow>& rows) {
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.total_work) + "," + std::to_string(r.per_proc_max) + "," +
               std::to_string(r.lower_bound) + "," + format_double(r.ratio_linear) + "," +
               format_double(r.ratio_nlogn) + "\n";
    }
    return out;
}

void emit_csv(const std::vector<ScalingRow>& rows, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << to_csv(rows);
    f.flush();
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

namespace {

template <class T>
T parse_field(std::string_view field, std::size_t line) {
    T v{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw std::invalid_argument("bad CSV field '" + std::string(field) + "' on line " + std::to_string(line));
    }
    return v;
}

}  // namespace

std::vector<ScalingRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header()) throw std::invalid_argument("missing or wrong CSV header");
    std::vector<ScalingRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        for (;;) {
            auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 6) throw std::invalid_argument("expected 6 fields on line " + std::to_string(lineno));
        ScalingRow r;
        r.n = parse_field<std::size_t>(fields[0], lineno);
        r.total_work = parse_field<std::uint64_t>(fields[1], lineno);
        r.per_proc_max = parse_field<std::uint64_t>(fields[2], lineno);
        r.lower_bound = parse_field<std::uint64_t>(fields[3], lineno);
        r.ratio_linear = parse_field<double>(fields[4], lineno);
        r.ratio_nlogn = parse_field<double>(fields[5], lineno);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace wakeup

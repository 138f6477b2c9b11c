// wakeup-lab: run, check and measure wake-up solvers on the simulated machine.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wakeup/experiment.hpp"
#include "wakeup/farray.hpp"
#include "wakeup/simulator.hpp"
#include "wakeup/systems.hpp"
#include "wakeup/trace.hpp"
#include "wakeup/wakeup.hpp"

using namespace wakeup;

namespace {

struct SolverFlags {
    std::string solver = "tree";
    std::string fai = "cas-loop";
    std::string epsilon = "1/2";
    std::string order = "fifo";
    std::string policy = "strict";
    std::uint64_t perturb_seed = 0;

    SolverSpec spec() const {
        SolverSpec s;
        s.kind = parse_solver(solver);
        s.fai = parse_fai_variant(fai);
        s.epsilon = Epsilon::parse(epsilon);
        s.order = parse_order(order);
        s.policy = parse_policy(policy);
        s.perturb = SeededOffset{perturb_seed};
        return s;
    }

    void add_to(CLI::App* app) {
        app->add_option("--solver", solver, "tree|counter|fai|counter-obj|approx-counter|relaxed-queue");
        app->add_option("--fai-variant", fai, "cas-loop|farray|object");
        app->add_option("--epsilon", epsilon, "approximation parameter, e.g. 0.5 or 1/4");
        app->add_option("--order", order, "relaxed container: fifo|lifo|priority");
        app->add_option("--policy", policy, "relaxed removal: strict|hth|seeded:<seed>");
        app->add_option("--perturb-seed", perturb_seed, "approximate counter read perturbation seed");
    }
};

struct ParamFlags {
    std::string s;
    std::size_t easy = 0;
    std::size_t hard = 0;

    std::optional<WakeupParams> params() const {
        if (!s.empty()) return parse_slack(s);
        if (easy) return easy_params(easy);
        if (hard) return hard_params(hard);
        return std::nullopt;
    }

    void add_to(CLI::App* app) {
        auto* g = app->add_option_group("problem");
        g->add_option("--s", s, "slack vector, e.g. 1,1,1,4");
        g->add_option("--easy", easy, "easy problem on n processors");
        g->add_option("--hard", hard, "hard problem on n processors");
        g->require_option(0, 1);
    }
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
    auto number = [&](std::string_view s) {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
            throw std::invalid_argument("bad size '" + std::string(s) + "'");
        }
        return v;
    };
    std::vector<std::size_t> out;
    if (auto dots = text.find(".."); dots != std::string::npos) {
        // a..b: a, 2a, 4a, ... up to b
        const std::size_t lo = number(std::string_view(text).substr(0, dots));
        const std::size_t hi = number(std::string_view(text).substr(dots + 2));
        for (std::size_t n = lo; n <= hi; n *= 2) out.push_back(n);
        return out;
    }
    std::string_view rest = text;
    for (;;) {
        auto comma = rest.find(',');
        out.push_back(number(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

SchedulePolicy parse_schedule(const std::string& text, std::uint64_t seed) {
    if (text == "rr" || text == "round-robin") return RoundRobin{};
    if (text == "random") return SeededRandom{seed};
    if (text.starts_with("explicit:")) {
        ExplicitSchedule e;
        for (auto n : parse_sizes(text.substr(9))) e.order.push_back(static_cast<Pid>(n));
        return e;
    }
    throw std::invalid_argument("unknown schedule '" + text + "' (rr, random, explicit:1,2,...)");
}

void write_file(const std::string& path, const std::string& what, auto&& body) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + what + " to " + path);
    body(f);
}

void print_verdict(const Verdict& v) {
    std::cout << verdict_csv(v);
    for (const auto& violation : v.violations) {
        std::cout << "violation " << to_string(violation.clause) << ": " << violation.detail << "\n";
    }
}

void print_work(const WorkReport& w) {
    std::cout << "work total=" << w.total << " max_per_proc=" << w.max_per_proc() << " reads=" << w.reads
              << " writes=" << w.writes << " cas=" << w.cas_attempts << " cas_ok=" << w.cas_successes
              << " applies=" << w.object_applies << "\n";
}

Combine parse_structure(const std::string& name) {
    if (name == "farray-sum") return Combine::Sum;
    if (name == "farray-min") return Combine::Min;
    if (name == "farray-max") return Combine::Max;
    throw std::invalid_argument("unknown structure '" + name + "' (farray-sum|farray-min|farray-max)");
}

// Every processor updates its leaf with a seeded value, then queries.
int run_structure(const std::string& name, std::size_t n, const SchedulePolicy& policy, std::uint64_t seed,
                    const std::string& trace_out, const std::string& work_out) {
    Arena arena;
    const FArrayLayout layout = FArrayLayout::allocate(arena, n, parse_structure(name));
    std::mt19937_64 rng(seed);
    std::vector<Word> values;
    ProgramList programs;
    for (std::size_t i = 0; i < n; ++i) {
        values.push_back(rng() % 1000);
        programs.push_back(farray_client_program(
            layout, static_cast<Pid>(i + 1),
            {FArrayOp{FArrayOp::Kind::Update, static_cast<std::uint32_t>(values.back())}, FArrayOp{FArrayOp::Kind::Query, 0}}));
    }
    RunResult r = run(std::move(programs), policy, std::move(arena));
    std::uint32_t expected = payload_of(identity(layout.function()));
    for (Word v : values) expected = combine(layout.function(), expected, static_cast<std::uint32_t>(v));
    const std::uint32_t root = layout.root_value(r.arena);
    std::cout << "structure " << name << " n=" << n << " schedule=" << describe(policy) << "\n";
    std::cout << "root=" << root << " expected=" << expected << " consistent=" << layout.consistent(r.arena) << "\n";
    std::cout << "update_steps=" << layout.update_steps() << " query_steps=" << FArrayLayout::query_steps() << "\n";
    print_work(r.report);
    if (!trace_out.empty()) write_file(trace_out, "trace", [&](std::ostream& os) { write_trace(os, r.trace); });
    if (!work_out.empty()) write_file(work_out, "work", [&](std::ostream& os) { write_work_csv(os, r.report); });
    return root == expected && layout.consistent(r.arena) ? 0 : 1;
}

int run_solve(const SolverSpec& spec, const std::optional<WakeupParams>& claimed, std::size_t n,
              std::size_t epochs, const SchedulePolicy& policy, const std::string& trace_out,
              const std::string& work_out, const std::string& verdict_out) {
    System sys = build_system(spec, n);
    const WakeupParams params = claimed.value_or(sys.params);
    std::cout << "solver " << describe(spec) << " n=" << n << " schedule=" << describe(policy) << "\n";
    std::cout << "params " << to_string(params) << "\n";

    if (epochs > 1) {
        if (!supports_epochs(spec.kind)) throw std::invalid_argument("this solver does not run in epochs");
        const EpochPlan plan{epochs, n, 0};
        EpochResult r = epoch_runner(plan, params, sys.arena, sys.factory, sys.ops_per_call, policy,
                                     /*record_events=*/!trace_out.empty());
        for (std::size_t e = 0; e < r.verdicts.size(); ++e) {
            std::cout << "epoch " << e + 1 << " " << (r.verdicts[e].passed() ? "pass" : "FAIL") << "\n";
        }
        std::cout << "object_operations=" << r.object_operations << "\n";
        print_work(r.work);
        if (!work_out.empty()) write_file(work_out, "work", [&](std::ostream& os) { write_work_csv(os, r.work); });
        if (!r.passed()) {
            print_verdict(r.verdicts.back());
            if (!trace_out.empty() && r.failing_run) {
                write_file(trace_out, "trace", [&](std::ostream& os) { write_trace(os, r.failing_run->trace); });
            }
            return 1;
        }
        return 0;
    }

    RunResult r = run(sys.programs(), policy, sys.arena);
    Verdict v = check_trace(params, r.trace);
    if (r.status != RunStatus::Complete) {
        v.termination_ok = false;
        v.violations.push_back({Clause::Termination, 0, std::string("run ended: ") + to_string(r.status)});
    }
    std::cout << "returns";
    for (const auto& p : r.trace.processors) {
        std::cout << " " << (p.return_value ? std::to_string(*p.return_value) : std::string("-"));
    }
    std::cout << "\n";
    print_work(r.report);
    print_verdict(v);
    if (!trace_out.empty()) write_file(trace_out, "trace", [&](std::ostream& os) { write_trace(os, r.trace); });
    if (!work_out.empty()) write_file(work_out, "work", [&](std::ostream& os) { write_work_csv(os, r.report); });
    if (!verdict_out.empty()) write_file(verdict_out, "verdict", [&](std::ostream& os) { os << verdict_csv(v); });
    return v.passed() ? 0 : 1;
}

int run_check(const std::string& path, const std::optional<WakeupParams>& claimed, bool boolean) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read trace " + path);
    const Trace trace = parse_trace(f);
    const std::size_t n = trace.processor_count();
    Verdict v;
    if (boolean) {
        v = check_boolean_trace(n, trace);
    } else {
        const WakeupParams params = claimed.value_or(easy_params(n));
        std::cout << "params " << to_string(params) << "\n";
        v = check_trace(params, trace);
    }
    print_verdict(v);
    return v.passed() ? 0 : 1;
}

int run_scale(const ExperimentSpec& spec, const std::string& csv, const std::string& trace_out, unsigned workers) {
    std::cout << "solver " << describe(spec.solver) << " epochs=" << spec.epochs << "\n";
    std::cout << "schedules round-robin";
    if (!spec.battery.seeds.empty()) {
        std::cout << " + seeds " << spec.battery.seeds.front() << ".." << spec.battery.seeds.back();
    }
    std::cout << "\n";
    ExperimentResult r = run_experiment(spec, workers);
    std::cout << to_csv(r.rows);
    std::cout << "runs=" << r.runs << "\n";
    if (!csv.empty()) emit_csv(r.rows, csv);
    if (r.failure) {
        const RunFailure& f = *r.failure;
        std::cout << "FAIL n=" << f.n << " schedule=" << f.schedule << " epoch=" << f.epoch << "\n";
        print_verdict(f.verdict);
        write_file(trace_out, "trace", [&](std::ostream& os) { write_trace(os, f.trace); });
        std::cout << "trace written to " << trace_out << "\n";
        return 1;
    }
    return 0;
}

int run_exhaust(const SolverSpec& spec, std::size_t n, std::uint64_t max_states) {
    System sys = build_system(spec, n);
    ExploreLimits limits;
    limits.max_states = max_states;
    const ExploreSummary s = explore_wakeup(sys.params, sys.programs(), sys.arena, limits);
    std::cout << "solver " << describe(spec) << " n=" << n << " params " << to_string(sys.params) << "\n";
    std::cout << "states=" << s.states << " terminal=" << s.terminal_states << " schedules=" << to_string(s.schedules)
              << " failing_schedules=" << to_string(s.failing_schedules) << "\n";
    if (s.state_budget_exhausted) std::cout << "state budget exhausted; coverage incomplete\n";
    if (!s.counterexample.empty()) {
        std::cout << "counterexample schedule:";
        for (Pid p : s.counterexample) std::cout << " " << p;
        std::cout << "\n";
    }
    std::cout << (s.all_pass() ? "pass" : "FAIL") << "\n";
    return s.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wake-up problem laboratory"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "run one solver once and check it");
    SolverFlags solve_solver;
    solve_solver.add_to(solve);
    ParamFlags solve_params;
    solve_params.add_to(solve);
    std::size_t solve_n = 4;
    std::size_t solve_epochs = 1;
    std::string solve_schedule = "rr";
    std::uint64_t solve_seed = kDefaultSeedBase;
    std::string solve_structure;
    std::string solve_trace_out;
    std::string solve_work_out;
    std::string solve_verdict_out;
    solve->add_option("--n", solve_n, "processor count");
    solve->add_option("--epochs", solve_epochs, "consecutive instances on one object");
    solve->add_option("--schedule", solve_schedule, "rr | random | explicit:1,1,2,...");
    solve->add_option("--seed", solve_seed, "seed for --schedule random");
    solve->add_option("--structure", solve_structure, "run an f-array instead: farray-sum|farray-min|farray-max");
    solve->add_option("--trace-out", solve_trace_out, "write the event trace here");
    solve->add_option("--work-out", solve_work_out, "write per-processor work CSV here");
    solve->add_option("--verdict-out", solve_verdict_out, "write the verdict CSV here");

    // check
    auto* check = app.add_subcommand("check", "check a recorded trace");
    std::string check_trace_path;
    ParamFlags check_params;
    bool check_boolean = false;
    check->add_option("trace", check_trace_path, "trace file")->required();
    check_params.add_to(check);
    check->add_flag("--boolean", check_boolean, "check the boolean form instead");

    // scale
    auto* scale = app.add_subcommand("scale", "work table over a range of n");
    SolverFlags scale_solver;
    scale_solver.add_to(scale);
    std::string scale_ns = "2..64";
    std::size_t scale_seeds = 10;
    std::uint64_t scale_seed = kDefaultSeedBase;
    std::size_t scale_epochs = 1;
    std::string scale_csv;
    std::string scale_trace_out = "failing_trace.txt";
    unsigned scale_workers = 0;
    scale->add_option("--ns", scale_ns, "sizes: 2,4,8 or 4..1024 (doubling)");
    scale->add_option("--seeds", scale_seeds, "seeded-random schedules per size (plus round-robin)");
    scale->add_option("--seed", scale_seed, "first seed");
    scale->add_option("--epochs", scale_epochs, "consecutive instances on one object");
    scale->add_option("--csv", scale_csv, "write the scaling table here");
    scale->add_option("--trace-out", scale_trace_out, "where a failing trace is written");
    scale->add_option("--workers", scale_workers, "parallel sizes (0 = hardware)");

    // exhaust
    auto* exhaust = app.add_subcommand("exhaust", "check every schedule of a small system");
    SolverFlags exhaust_solver;
    exhaust_solver.add_to(exhaust);
    std::size_t exhaust_n = 2;
    std::uint64_t exhaust_states = ExploreLimits{}.max_states;
    exhaust->add_option("--n", exhaust_n, "processor count");
    exhaust->add_option("--max-states", exhaust_states, "state budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            const SchedulePolicy policy = parse_schedule(solve_schedule, solve_seed);
            if (!solve_structure.empty()) {
                return run_structure(solve_structure, solve_n, policy, solve_seed, solve_trace_out, solve_work_out);
            }
            return run_solve(solve_solver.spec(), solve_params.params(), solve_n, solve_epochs, policy,
                             solve_trace_out, solve_work_out, solve_verdict_out);
        }
        if (check->parsed()) return run_check(check_trace_path, check_params.params(), check_boolean);
        if (scale->parsed()) {
            ExperimentSpec spec;
            spec.solver = scale_solver.spec();
            spec.ns = parse_sizes(scale_ns);
            spec.battery = ScheduleBattery::standard(scale_seeds, scale_seed);
            spec.epochs = scale_epochs;
            return run_scale(spec, scale_csv, scale_trace_out, scale_workers);
        }
        if (exhaust->parsed()) return run_exhaust(exhaust_solver.spec(), exhaust_n, exhaust_states);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

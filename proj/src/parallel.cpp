#include "wakeup/parallel.hpp"

#include <atomic>
#include <exception>
#include <latch>
#include <mutex>
#include <thread>

namespace wakeup {

namespace {

class SharedArena {
public:
    explicit SharedArena(const Arena& image)
        : words_(image.word_count()), locks_(image.object_count()), image_(image) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i].store(image.read(i), std::memory_order_relaxed);
    }

    Outcome execute(const MemRequest& request) {
        return std::visit(
            [&](const auto& r) -> Outcome {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Read>) {
                    return {word(r.addr).load(), true, 0};
                } else if constexpr (std::is_same_v<T, Write>) {
                    word(r.addr).store(r.value);
                    return {1, true, 0};
                } else if constexpr (std::is_same_v<T, Cas>) {
                    Word expected = r.expected;
                    bool ok = word(r.addr).compare_exchange_strong(expected, r.desired);
                    return {ok ? Word{1} : Word{0}, ok, 0};
                } else {
                    if (r.object >= locks_.size()) throw SimulationFault("object address out of range");
                    std::lock_guard<std::mutex> guard(locks_[r.object]);
                    return image_.apply(r.object, r.op);
                }
            },
            request);
    }

    Arena snapshot() {
        for (std::size_t i = 0; i < words_.size(); ++i) image_.write(i, words_[i].load());
        return image_;
    }

private:
    std::atomic<Word>& word(Addr addr) {
        if (addr >= words_.size()) throw SimulationFault("word address out of range");
        return words_[addr];
    }

    std::vector<std::atomic<Word>> words_;
    std::vector<std::mutex> locks_;
    Arena image_;  // object cells live here; word cells are mirrored at the end
};

}  // namespace

ParallelResult run_parallel(ProgramList programs, const Arena& arena) {
    const std::size_t n = programs.size();
    SharedArena shared(arena);
    std::atomic<Time> clock{0};
    std::latch start(static_cast<std::ptrdiff_t>(n));

    std::vector<MemRequest> first(n);
    for (std::size_t i = 0; i < n; ++i) {
        Action a = programs[i]->step(std::nullopt);
        if (std::holds_alternative<Return>(a)) {
            throw SimulationFault("processor " + std::to_string(i + 1) + " returned before taking a step");
        }
        first[i] = std::get<MemRequest>(a);
    }

    std::vector<ProcessorRecord> records(n);
    std::vector<WorkReport> reports(n);
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> threads;
    threads.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        threads.emplace_back([&, i] {
            const Pid pid = static_cast<Pid>(i + 1);
            reports[i].per_proc.assign(n, 0);
            start.arrive_and_wait();
            try {
                MemRequest request = first[i];
                records[i].wake_time = clock.fetch_add(1) + 1;
                for (;;) {
                    Outcome outcome = shared.execute(request);
                    outcome.time = clock.fetch_add(1) + 1;
                    reports[i].record(pid, request, outcome);
                    Action next = programs[i]->step(outcome);
                    if (auto* ret = std::get_if<Return>(&next)) {
                        records[i].return_time = outcome.time;
                        records[i].return_value = ret->value;
                        break;
                    }
                    request = std::get<MemRequest>(std::move(next));
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }

    ParallelResult result;
    result.trace.processors = std::move(records);
    result.report.per_proc.assign(n, 0);
    for (const auto& r : reports) result.report += r;
    result.arena = shared.snapshot();
    return result;
}

}  // namespace wakeup

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "wakeup/farray.hpp"
#include "wakeup/fetch_inc.hpp"
#include "wakeup/lincheck.hpp"
#include "wakeup/objects.hpp"
#include "wakeup/simulator.hpp"

using namespace wakeup;

namespace {

std::size_t ceil_log2(std::size_t n) {
    std::size_t h = 0;
    while ((std::size_t{1} << h) < n) ++h;
    return h;
}

// Independent count: one leaf write, then per ancestor two refreshes. The
// lowest refresh reads node and sibling leaf then CASes; higher ones read
// node and both children then CAS.
std::uint64_t expected_update_steps(std::size_t n) {
    const std::size_t h = ceil_log2(n);
    return h == 0 ? 1 : 1 + 2 * 3 + 2 * 4 * (h - 1);
}

std::uint32_t fold(Combine f, const std::vector<std::uint32_t>& v) {
    std::uint32_t acc = f == Combine::Sum ? 0 : 0x8000'0000u;
    for (auto x : v) {
        if (f == Combine::Sum) acc += x;
        else if (acc == 0x8000'0000u) acc = x;
        else if (x != 0x8000'0000u) acc = f == Combine::Min ? std::min(acc, x) : std::max(acc, x);
    }
    return acc;
}

FArrayOp upd(std::uint32_t v) { return {FArrayOp::Kind::Update, v}; }
FArrayOp qry() { return {FArrayOp::Kind::Query, 0}; }

struct FArrayModel {
    Combine f;
    std::vector<std::uint32_t> leaves;

    bool apply(const HistoryOp& op) {
        if (op.kind == 0) {
            leaves[op.pid - 1] = static_cast<std::uint32_t>(op.arg);
            return true;
        }
        return fold(f, leaves) == static_cast<std::uint32_t>(op.result);
    }
};

// Splits each processor's events into f-array operations, given how many
// events each of its operations takes.
std::vector<HistoryOp> farray_history(const Trace& trace, const std::vector<std::vector<FArrayOp>>& ops,
                                      std::uint64_t update_steps) {
    std::vector<HistoryOp> out;
    std::vector<std::vector<const Event*>> per(ops.size());
    for (const auto& e : trace.events) per[e.pid - 1].push_back(&e);
    for (std::size_t p = 0; p < ops.size(); ++p) {
        std::size_t at = 0;
        for (const auto& op : ops[p]) {
            const std::size_t len = op.kind == FArrayOp::Kind::Update ? update_steps : 1;
            HistoryOp h;
            h.pid = static_cast<Pid>(p + 1);
            h.invoke = per[p][at]->time;
            h.respond = per[p][at + len - 1]->time;
            h.kind = op.kind == FArrayOp::Kind::Update ? 0 : 1;
            h.arg = op.value;
            if (h.kind == 1) h.result = payload_of(per[p][at]->outcome.value);
            out.push_back(h);
            at += len;
        }
    }
    return out;
}

ProgramList clients(const FArrayLayout& layout, const std::vector<std::vector<FArrayOp>>& ops) {
    ProgramList p;
    for (std::size_t i = 0; i < ops.size(); ++i) p.push_back(farray_client_program(layout, static_cast<Pid>(i + 1), ops[i]));
    return p;
}

// Steps only `pid` (running `ops`) to completion; everyone else stays asleep.
// Returns the machine so callers can inspect memory and work.
Machine solo(const FArrayLayout& layout, const Arena& arena, Pid pid, std::vector<FArrayOp> ops) {
    ProgramList p;
    for (Pid q = 1; q <= layout.n(); ++q) {
        p.push_back(farray_client_program(layout, q, q == pid ? ops : std::vector<FArrayOp>{qry()}));
    }
    Machine m(std::move(p), arena);
    while (!m.returned(pid)) m.step(pid);
    return m;
}

}  // namespace

TEST_CASE("payload packing") {
    CHECK(version_of(pack(3, 7)) == 3);
    CHECK(payload_of(pack(3, 7)) == 7);
    CHECK(combine(Combine::Min, kNoValue, 5) == 5);
    CHECK(combine(Combine::Max, 9, kNoValue) == 9);
    CHECK(combine(Combine::Sum, 2, 3) == 5);
}

TEST_CASE("f-array solo examples") {
    SUBCASE("sum, n=2, update(1,1) costs 7 steps") {
        Arena arena;
        auto layout = FArrayLayout::allocate(arena, 2, Combine::Sum);
        CHECK(layout.cell_count() == 3);
        Machine m = solo(layout, arena, 1, {upd(1)});
        CHECK(layout.root_value(m.arena()) == 1);
        CHECK(m.report().total == 7);
        CHECK(m.report().writes == 1);
        CHECK(m.report().cas_attempts == 2);
        CHECK(m.report().reads == 4);
    }
    SUBCASE("min, all identity, update(3,5)") {
        Arena arena;
        auto layout = FArrayLayout::allocate(arena, 4, Combine::Min);
        CHECK(layout.root_value(arena) == kNoValue);
        Machine m = solo(layout, arena, 3, {upd(5)});
        CHECK(layout.root_value(m.arena()) == 5);
    }
    SUBCASE("queries") {
        Arena arena;
        auto layout = FArrayLayout::allocate(arena, 2, Combine::Sum);
        Machine m = solo(layout, arena, 1, {qry()});
        CHECK(*m.trace().processor(1).return_value == 0);
        CHECK(m.report().total == 1);
        Machine a = solo(layout, arena, 1, {upd(1)});
        Machine b = solo(layout, a.arena(), 2, {upd(1), qry()});
        CHECK(*b.trace().processor(2).return_value == 2);
    }
    SUBCASE("non-power-of-two n pads the leaves") {
        FArrayLayout layout(5, Combine::Sum);
        CHECK(layout.leaves() == 8);
        CHECK(layout.cell_count() == 15);
        CHECK(layout.height() == 3);
    }
    CHECK_THROWS(FArrayLayout(0, Combine::Sum));
}

TEST_CASE("f-array step counts are schedule independent") {
    for (std::size_t n : {1, 2, 3, 4, 5, 8, 16, 33, 64}) {
        CHECK(FArrayLayout(n, Combine::Sum).update_steps() == expected_update_steps(n));
        Arena arena;
        auto layout = FArrayLayout::allocate(arena, n, Combine::Max);
        std::vector<std::vector<FArrayOp>> ops;
        for (std::size_t i = 0; i < n; ++i) ops.push_back(i % 2 ? std::vector<FArrayOp>{upd(i)} : std::vector<FArrayOp>{qry()});
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            RunResult r = run(clients(layout, ops), SeededRandom{seed}, arena);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(r.report.steps(static_cast<Pid>(i + 1)) == (i % 2 ? expected_update_steps(n) : 1));
            }
        }
    }
}

TEST_CASE("f-array quiescent value equals f of the last leaf values") {
    std::mt19937_64 rng(2024);
    for (Combine f : {Combine::Sum, Combine::Min, Combine::Max}) {
        for (std::size_t n : {2, 4, 8, 64}) {
            for (int rep = 0; rep < 60; ++rep) {
                Arena arena;
                auto layout = FArrayLayout::allocate(arena, n, f);
                std::vector<std::vector<FArrayOp>> ops(n);
                std::vector<std::uint32_t> last(n, f == Combine::Sum ? 0 : kNoValue);
                for (std::size_t i = 0; i < n; ++i) {
                    const int count = static_cast<int>(rng() % 3);
                    for (int c = 0; c < count; ++c) {
                        last[i] = static_cast<std::uint32_t>(rng() % 1000);
                        ops[i].push_back(upd(last[i]));
                    }
                    ops[i].push_back(qry());
                }
                RunResult r = run(clients(layout, ops), SeededRandom{rng()}, arena);
                CHECK(layout.root_value(r.arena) == fold(f, last));
                CHECK(layout.consistent(r.arena));
            }
        }
    }
}

TEST_CASE("f-array versions never decrease") {
    Arena arena;
    auto layout = FArrayLayout::allocate(arena, 8, Combine::Sum);
    std::vector<std::vector<FArrayOp>> ops(8, {upd(1), upd(2), qry()});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RunResult r = run(clients(layout, ops), SeededRandom{seed}, arena);
        std::map<Addr, std::uint32_t> version;
        for (const auto& e : r.trace.events) {
            const auto* c = std::get_if<Cas>(&e.request);
            if (!c || !e.outcome.ok) continue;
            CHECK(version_of(c->desired) == version_of(c->expected) + 1);
            CHECK(version_of(c->desired) > version[c->addr]);
            version[c->addr] = version_of(c->desired);
        }
    }
}

TEST_CASE("f-array linearizable on every schedule: 2 processors, update then query") {
    for (Combine f : {Combine::Sum, Combine::Max}) {
        Arena arena;
        auto layout = FArrayLayout::allocate(arena, 2, f);
        const std::vector<std::vector<FArrayOp>> ops{{upd(3), qry()}, {upd(5), qry()}};
        std::uint64_t traces = 0;
        exhaustive_run(clients(layout, ops), arena, {}, [&](const RunResult& r) {
            ++traces;
            const auto history = farray_history(r.trace, ops, layout.update_steps());
            FArrayModel model{f, std::vector<std::uint32_t>(2, f == Combine::Sum ? 0 : kNoValue)};
            CHECK(find_linearization<FArrayModel>(history, model).has_value());
            return true;
        });
        CHECK(traces == 12870);  // C(16, 8)
    }
}

TEST_CASE("linearization search") {
    struct Register {
        std::int64_t v = 0;
        bool apply(const HistoryOp& op) {
            if (op.kind == 0) {
                v = op.arg;
                return true;
            }
            return op.result == v;
        }
    };
    // write(1) overlaps a read that sees 1 and precedes a read that sees 0
    std::vector<HistoryOp> h{{1, 1, 4, 0, 1, 0}, {2, 2, 3, 1, 0, 1}, {2, 5, 6, 1, 0, 0}};
    CHECK_FALSE(find_linearization(std::span<const HistoryOp>(h), Register{}).has_value());
    h[2].result = 1;
    auto w = find_linearization(std::span<const HistoryOp>(h), Register{});
    REQUIRE(w.has_value());
    CHECK(*w == std::vector<std::size_t>{0, 1, 2});
    // real-time order forbids reading before a completed write
    std::vector<HistoryOp> g{{1, 1, 2, 0, 7, 0}, {2, 3, 4, 1, 0, 0}};
    CHECK_FALSE(find_linearization(std::span<const HistoryOp>(g), Register{}).has_value());
}

TEST_CASE("exact counter object") {
    CounterObject c(1);
    CHECK(c.apply({ObjectOpKind::FetchAndIncrement}).value == 1);
    c.apply({ObjectOpKind::Increment});
    CHECK(c.apply({ObjectOpKind::Read}).value == 3);
    CHECK_THROWS(c.apply({ObjectOpKind::Remove}));
}

TEST_CASE("approximate counter") {
    SUBCASE("zero slack is exact") {
        ApproxCounter c(0, SeededOffset{5});
        for (int i = 0; i < 50; ++i) {
            c.increment();
            CHECK(c.read() == c.true_value());
        }
    }
    SUBCASE("offset clamps to v-h") {
        ApproxCounter c(3, FixedOffset{-5});
        for (int i = 0; i < 10; ++i) c.increment();
        CHECK(c.read() == 7);
        ApproxCounter d(3, FixedOffset{+9});
        d.increment();
        CHECK(d.read() == 4);
        ApproxCounter e(3, FixedOffset{-9});
        e.increment();
        CHECK(e.read() == 0);
    }
    SUBCASE("every read is within the slack, both bounds get hit") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            for (std::uint64_t h : {1, 2, 5}) {
                ApproxCounter c(h, SeededOffset{seed});
                bool low = false, high = false;
                for (int i = 0; i < 200; ++i) {
                    c.increment();
                    const auto r = c.read();
                    const auto v = c.true_value();
                    CHECK(r + h >= v);
                    CHECK(r <= v + h);
                    low = low || r + h == v;
                    high = high || r == v + h;
                }
                CHECK(low);
                CHECK(high);
                CHECK(c.read_log().size() == 200);
            }
        }
    }
}

TEST_CASE("relaxed containers") {
    SUBCASE("slack 1 is strict FIFO") {
        RelaxedContainer q(RelaxedOrder::Fifo, 1, SeededRank{3});
        q.load_sequential(8);
        for (Word v = 1; v <= 8; ++v) CHECK(q.remove() == v);
        CHECK_FALSE(q.remove().has_value());
    }
    SUBCASE("AlwaysHth takes the h-th") {
        RelaxedContainer q(RelaxedOrder::Fifo, 3, AlwaysHth{});
        q.load_sequential(8);
        CHECK(q.remove() == 3);
        CHECK(q.removal_ranks() == std::vector<std::size_t>{3});
    }
    SUBCASE("stack load is reversed so strict removal yields 1..n") {
        RelaxedContainer s(RelaxedOrder::Lifo, 0, StrictFirst{});
        s.load_sequential(5);
        for (Word v = 1; v <= 5; ++v) CHECK(s.remove() == v);
        s.insert(7);
        s.insert(9);
        CHECK(s.remove() == 9);
    }
    SUBCASE("priority order is ascending") {
        RelaxedContainer pq(RelaxedOrder::Priority, 1, StrictFirst{});
        for (Word v : {5, 1, 4, 2, 3}) pq.insert(v);
        for (Word v = 1; v <= 5; ++v) CHECK(pq.remove() == v);
    }
    SUBCASE("seeded ranks stay inside the window") {
        for (RelaxedOrder order : {RelaxedOrder::Fifo, RelaxedOrder::Lifo, RelaxedOrder::Priority}) {
            for (std::uint64_t seed = 0; seed < 30; ++seed) {
                RelaxedContainer q(order, 4, SeededRank{seed});
                q.load_sequential(20);
                std::set<Word> got;
                for (int i = 0; i < 20; ++i) got.insert(*q.remove());
                CHECK(got.size() == 20);
                for (auto rank : q.removal_ranks()) {
                    CHECK(rank >= 1);
                    CHECK(rank <= 4);
                }
            }
        }
    }
    SUBCASE("a rogue policy trips the legality guard") {
        RelaxedContainer q(RelaxedOrder::Fifo, 3, FixedRank{5});
        q.load_sequential(8);
        CHECK_THROWS_AS(q.remove(), RelaxationViolation);
        // near the end the window shrinks below h
        RelaxedContainer r(RelaxedOrder::Fifo, 3, FixedRank{3});
        r.load_sequential(2);
        CHECK_THROWS_AS(r.remove(), RelaxationViolation);
    }
    SUBCASE("empty removal through apply") {
        RelaxedContainer q(RelaxedOrder::Fifo, 1, StrictFirst{});
        const Outcome o = q.apply({ObjectOpKind::Remove});
        CHECK_FALSE(o.ok);
    }
}

TEST_CASE("fetch-and-increment") {
    SUBCASE("solo caller on a fresh object") {
        Arena arena(1);
        arena.write(0, 1);
        ProgramList p;
        p.push_back(fai_program(CasLoopFai{0}, 1));
        RunResult r = run(std::move(p), RoundRobin{}, arena);
        CHECK(r.trace.processor(1).return_value == 1);
        CHECK(r.arena.read(0) == 2);
    }
    SUBCASE("sequential callers get 1..n in order") {
        Arena arena(1);
        arena.write(0, 1);
        for (Pid pid = 1; pid <= 6; ++pid) {
            ProgramList p;
            p.push_back(fai_program(CasLoopFai{0}, 1));
            RunResult r = run(std::move(p), RoundRobin{}, arena);
            CHECK(r.trace.processor(1).return_value == pid);
            arena = r.arena;
        }
    }
    SUBCASE("two callers, every schedule, return {1,2}") {
        Arena arena(1);
        arena.write(0, 1);
        ProgramList p;
        for (Pid pid = 1; pid <= 2; ++pid) p.push_back(fai_program(CasLoopFai{0}, pid));
        auto s = exhaustive_run(p, arena, {}, [](const RunResult& r) {
            std::set<std::int64_t> v{*r.trace.processor(1).return_value, *r.trace.processor(2).return_value};
            CHECK(v == std::set<std::int64_t>{1, 2});
            return true;
        });
        CHECK(s.truncated == 0);
    }
    SUBCASE("CAS loop values are distinct and contiguous") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Arena arena(1);
            arena.write(0, 1);
            ProgramList p;
            for (Pid pid = 1; pid <= 8; ++pid) p.push_back(fai_program(CasLoopFai{0}, pid));
            RunResult r = run(std::move(p), SeededRandom{seed}, arena);
            std::vector<std::int64_t> v;
            for (const auto& pr : r.trace.processors) v.push_back(*pr.return_value);
            std::sort(v.begin(), v.end());
            for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<std::int64_t>(i + 1));
        }
    }
    SUBCASE("f-array backed fai returns at least the caller's finishing rank") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Arena arena;
            auto layout = FArrayLayout::allocate(arena, 6, Combine::Sum);
            ProgramList p;
            for (Pid pid = 1; pid <= 6; ++pid) p.push_back(fai_program(FArrayFai{layout}, pid));
            RunResult r = run(std::move(p), SeededRandom{seed}, arena);
            std::vector<std::pair<Time, std::int64_t>> by_return;
            for (const auto& pr : r.trace.processors) by_return.emplace_back(*pr.return_time, *pr.return_value);
            std::sort(by_return.begin(), by_return.end());
            for (std::size_t k = 0; k < by_return.size(); ++k) {
                CHECK(by_return[k].second >= static_cast<std::int64_t>(k + 1));
                CHECK(by_return[k].second <= 6);
            }
        }
    }
    SUBCASE("object fai") {
        Arena arena;
        const Addr obj = arena.add_object(std::make_unique<CounterObject>(1));
        ProgramList p;
        for (Pid pid = 1; pid <= 4; ++pid) p.push_back(fai_program(ObjectFai{obj}, pid));
        RunResult r = run(std::move(p), SeededRandom{1}, arena);
        std::set<std::int64_t> v;
        for (const auto& pr : r.trace.processors) v.insert(*pr.return_value);
        CHECK(v == std::set<std::int64_t>{1, 2, 3, 4});
        CHECK(r.report.total == 4);
    }
}

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "wakeup/fetch_inc.hpp"
#include "wakeup/objects.hpp"
#include "wakeup/program.hpp"
#include "wakeup/wakeup.hpp"

namespace wakeup {

/// Accuracy parameter of the approximate reductions, kept as a fraction in
/// (0, 1] so integrality of the derived counts is exact.
struct Epsilon {
    std::uint64_t num = 1;
    std::uint64_t den = 2;

    /// Accepts "0.25", "1/4", "1". Throws std::invalid_argument.
    static Epsilon parse(std::string_view text);

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Epsilon&) const = default;
};

std::string to_string(const Epsilon& eps);

/// eps*n/2: the value returned by the top processors and the tail length of
/// the target profile. Throws std::invalid_argument unless integral and >= 1.
std::size_t reduction_tail(std::size_t n, const Epsilon& eps);
/// (1-eps)*n/2, the approximate counter's slack. Throws unless integral.
std::size_t approx_counter_slack(std::size_t n, const Epsilon& eps);
/// (1-eps)*n, the relaxed container's slack.
std::size_t relaxed_slack(std::size_t n, const Epsilon& eps);
/// s_i = 1 for i <= n - eps*n/2, eps*n/2 above.
WakeupParams reduction_profile(std::size_t n, const Epsilon& eps);

/// A dequeued value above this returns eps*n/2. With slack h (at least 1)
/// the j-th removal yields at most h + j - 1, so any value above
/// h + eps*n/2 - 1 certifies eps*n/2 + 1 wake-ups.
std::size_t relaxed_threshold(std::size_t n, const Epsilon& eps);

/// Position of a call within an epoch sequence: epoch index (1-based) and the
/// processor count per epoch. Raw object values are corrected by offset().
struct EpochIndex {
    std::uint32_t index = 1;
    std::size_t n = 0;

    std::uint64_t offset() const noexcept { return std::uint64_t{index - 1} * n; }
};

/// fai() once and return the value minus the epoch offset. The target must
/// start at 1 (CAS loop word, object) or at all-zero leaves (f-array).
std::unique_ptr<Program> fai_adapter(const FetchAndInc& f, Pid pid, const EpochIndex& epoch = {});

/// Increment, then read; return the read minus the epoch offset.
std::unique_ptr<Program> counter_adapter(Addr counter, Pid pid, const EpochIndex& epoch = {});

/// Increment, then read t; return max(t - offset - h, 1) clamped to [1, n].
std::unique_ptr<Program> approx_counter_adapter(Addr counter, Pid pid, std::size_t n, const Epsilon& eps,
                                                const EpochIndex& epoch = {});

/// Remove once; return eps*n/2 if the value exceeds relaxed_threshold,
/// else 1. An empty container returns 0, which the checker rejects.
std::unique_ptr<Program> relaxed_dequeue_adapter(Addr container, Pid pid, std::size_t n, const Epsilon& eps);

}  // namespace wakeup

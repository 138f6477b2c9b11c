#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wakeup {

using Word = std::uint64_t;
using Addr = std::size_t;
using Pid = std::uint32_t;   // 1-based processor index
using Time = std::uint64_t;  // event slot, 1-based

enum class ObjectOpKind : std::uint8_t {
    Increment = 1,
    Read = 2,
    FetchAndIncrement = 3,
    Insert = 4,
    Remove = 5,
};

struct ObjectOp {
    ObjectOpKind kind;
    Word arg = 0;
};

struct Read {
    Addr addr;
};
struct Write {
    Addr addr;
    Word value;
};
struct Cas {
    Addr addr;
    Word expected;
    Word desired;
};
struct Apply {
    Addr object;
    ObjectOp op;
};

using MemRequest = std::variant<Read, Write, Cas, Apply>;

/// Result of one shared-memory operation as seen by the issuing processor.
///
/// `value` carries the word read or the object response; `ok` is the CAS
/// success flag and is false when an object signals Empty. `time` is the slot
/// the operation occupied in the run's total order.
struct Outcome {
    Word value = 0;
    bool ok = true;
    Time time = 0;
};

class SimulationFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A black-box sequential object living in an arena object cell. Each
/// apply() is one atomic step of the simulated machine.
class SequentialObject {
public:
    virtual ~SequentialObject() = default;

    virtual Outcome apply(const ObjectOp& op) = 0;
    virtual std::unique_ptr<SequentialObject> clone() const = 0;
    /// Appends a canonical encoding of the object's state (state-space search key).
    virtual void encode(std::vector<Word>& out) const = 0;
    virtual std::string describe() const = 0;
};

/// Simulated shared memory: 64-bit word cells plus black-box object cells.
/// Copying an arena deep-copies its objects.
class Arena {
public:
    Arena() = default;
    explicit Arena(std::size_t word_count, std::vector<std::unique_ptr<SequentialObject>> objects = {});
    Arena(std::vector<Word> image, std::vector<std::unique_ptr<SequentialObject>> objects);

    Arena(const Arena& other);
    Arena& operator=(const Arena& other);
    Arena(Arena&&) noexcept = default;
    Arena& operator=(Arena&&) noexcept = default;

    std::size_t word_count() const noexcept { return words_.size(); }
    std::size_t object_count() const noexcept { return objects_.size(); }
    std::span<const Word> words() const noexcept { return words_; }

    /// Appends `count` cells holding `fill`; returns the first new address.
    Addr add_words(std::size_t count, Word fill = 0);
    Addr add_object(std::unique_ptr<SequentialObject> object);

    Word read(Addr addr) const;
    void write(Addr addr, Word value);
    bool compare_and_swap(Addr addr, Word expected, Word desired);
    Outcome apply(Addr object, const ObjectOp& op);

    /// Executes one request atomically. Out-of-range addresses raise SimulationFault.
    Outcome execute(const MemRequest& request);

    SequentialObject& object(Addr addr);
    const SequentialObject& object(Addr addr) const;

    void encode(std::vector<Word>& out) const;

private:
    void check_word(Addr addr) const;
    void check_object(Addr addr) const;

    std::vector<Word> words_;
    std::vector<std::unique_ptr<SequentialObject>> objects_;
};

std::string to_string(const MemRequest& request);
std::string_view op_name(ObjectOpKind kind);

}  // namespace wakeup

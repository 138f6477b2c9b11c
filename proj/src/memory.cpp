#include "wakeup/memory.hpp"

#include <sstream>

namespace wakeup {

Arena::Arena(std::size_t word_count, std::vector<std::unique_ptr<SequentialObject>> objects)
    : words_(word_count, 0), objects_(std::move(objects)) {}

Arena::Arena(std::vector<Word> image, std::vector<std::unique_ptr<SequentialObject>> objects)
    : words_(std::move(image)), objects_(std::move(objects)) {}

Arena::Arena(const Arena& other) : words_(other.words_) {
    objects_.reserve(other.objects_.size());
    for (const auto& obj : other.objects_) objects_.push_back(obj->clone());
}

Arena& Arena::operator=(const Arena& other) {
    if (this != &other) {
        Arena copy(other);
        *this = std::move(copy);
    }
    return *this;
}

Addr Arena::add_words(std::size_t count, Word fill) {
    Addr base = words_.size();
    words_.resize(words_.size() + count, fill);
    return base;
}

Addr Arena::add_object(std::unique_ptr<SequentialObject> object) {
    objects_.push_back(std::move(object));
    return objects_.size() - 1;
}

void Arena::check_word(Addr addr) const {
    if (addr >= words_.size()) {
        throw SimulationFault("word address " + std::to_string(addr) + " out of range (" +
                              std::to_string(words_.size()) + " cells)");
    }
}

void Arena::check_object(Addr addr) const {
    if (addr >= objects_.size()) {
        throw SimulationFault("object address " + std::to_string(addr) + " out of range (" +
                              std::to_string(objects_.size()) + " objects)");
    }
}

Word Arena::read(Addr addr) const {
    check_word(addr);
    return words_[addr];
}

void Arena::write(Addr addr, Word value) {
    check_word(addr);
    words_[addr] = value;
}

bool Arena::compare_and_swap(Addr addr, Word expected, Word desired) {
    check_word(addr);
    if (words_[addr] != expected) return false;
    words_[addr] = desired;
    return true;
}

Outcome Arena::apply(Addr object, const ObjectOp& op) {
    check_object(object);
    return objects_[object]->apply(op);
}

SequentialObject& Arena::object(Addr addr) {
    check_object(addr);
    return *objects_[addr];
}

const SequentialObject& Arena::object(Addr addr) const {
    check_object(addr);
    return *objects_[addr];
}

Outcome Arena::execute(const MemRequest& request) {
    struct Visitor {
        Arena& arena;
        Outcome operator()(const Read& r) const { return {arena.read(r.addr), true, 0}; }
        Outcome operator()(const Write& w) const {
            arena.write(w.addr, w.value);
            return {1, true, 0};
        }
        Outcome operator()(const Cas& c) const {
            bool ok = arena.compare_and_swap(c.addr, c.expected, c.desired);
            return {ok ? Word{1} : Word{0}, ok, 0};
        }
        Outcome operator()(const Apply& a) const { return arena.apply(a.object, a.op); }
    };
    return std::visit(Visitor{*this}, request);
}

void Arena::encode(std::vector<Word>& out) const {
    out.insert(out.end(), words_.begin(), words_.end());
    for (const auto& obj : objects_) {
        const std::size_t mark = out.size();
        out.push_back(0);
        obj->encode(out);
        out[mark] = out.size() - mark - 1;
    }
}

std::string_view op_name(ObjectOpKind kind) {
    switch (kind) {
        case ObjectOpKind::Increment: return "increment";
        case ObjectOpKind::Read: return "read";
        case ObjectOpKind::FetchAndIncrement: return "fetch-and-increment";
        case ObjectOpKind::Insert: return "insert";
        case ObjectOpKind::Remove: return "remove";
    }
    return "?";
}

std::string to_string(const MemRequest& request) {
    std::ostringstream os;
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Read>) {
                os << "read(" << r.addr << ")";
            } else if constexpr (std::is_same_v<T, Write>) {
                os << "write(" << r.addr << ", " << r.value << ")";
            } else if constexpr (std::is_same_v<T, Cas>) {
                os << "cas(" << r.addr << ", " << r.expected << ", " << r.desired << ")";
            } else {
                os << "apply(" << r.object << ", " << op_name(r.op.kind) << ", " << r.op.arg << ")";
            }
        },
        request);
    return os.str();
}

}  // namespace wakeup

#include <bit>
#include <cmath>
#include <string>
#include <unordered_map>

#include "jacobi3/errors.hpp"
#include "jacobi3/expr.hpp"

namespace jacobi3 {

namespace {

struct InstrKey {
    Op op;
    Var var;
    std::uint32_t a;
    std::uint32_t b;
    std::uint64_t value_bits;
    bool operator==(const InstrKey&) const = default;
};

struct InstrKeyHash {
    std::size_t operator()(const InstrKey& k) const noexcept
    {
        std::size_t h = std::hash<std::uint64_t>{}(k.value_bits);
        h ^= (static_cast<std::size_t>(k.op) << 1) ^ (static_cast<std::size_t>(k.var) << 9);
        h ^= std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(k.a) << 32) | k.b) + 0x9e3779b97f4a7c15ULL + (h << 6);
        return h;
    }
};

constexpr std::uint32_t none = 0xffffffffu;

[[noreturn]] void domain_error(const char* what, double arg)
{
    throw EvalDomainError(std::string(what) + " (argument " + std::to_string(arg) + ")");
}

} // namespace

Program::Program(std::span<const Expr> outputs) { compile(outputs); }

Program::Program(std::initializer_list<Expr> outputs) { compile(std::span<const Expr>(outputs.begin(), outputs.size())); }

void Program::compile(std::span<const Expr> outputs)
{
    std::unordered_map<const ExprNode*, std::uint32_t> by_node;
    std::unordered_map<InstrKey, std::uint32_t, InstrKeyHash> by_key;

    auto emit = [&](const InstrKey& key) -> std::uint32_t {
        if (auto it = by_key.find(key); it != by_key.end()) return it->second;
        const auto slot = static_cast<std::uint32_t>(code_.size());
        code_.push_back(Instr{key.op, key.var, key.a, key.b, std::bit_cast<double>(key.value_bits)});
        by_key.emplace(key, slot);
        return slot;
    };

    // Iterative post-order so deep derivative chains cannot overflow the stack.
    for (const Expr& root : outputs) {
        std::vector<std::pair<const ExprNode*, bool>> stack{{root.node(), false}};
        while (!stack.empty()) {
            auto [n, expanded] = stack.back();
            stack.pop_back();
            if (by_node.contains(n)) continue;
            if (!expanded && (n->a || n->b)) {
                stack.emplace_back(n, true);
                if (n->b && !by_node.contains(n->b.get())) stack.emplace_back(n->b.get(), false);
                if (n->a && !by_node.contains(n->a.get())) stack.emplace_back(n->a.get(), false);
                continue;
            }
            InstrKey key{n->op, Var::x, none, none, 0};
            if (n->op == Op::constant) {
                key.value_bits = std::bit_cast<std::uint64_t>(n->value == 0.0 ? 0.0 : n->value);
            } else if (n->op == Op::variable) {
                key.var = n->var;
                used_ |= var_bit(n->var);
            }
            if (n->a) key.a = by_node.at(n->a.get());
            if (n->b) key.b = by_node.at(n->b.get());
            by_node.emplace(n, emit(key));
        }
        outputs_.push_back(by_node.at(root.node()));
    }
}

void Program::evaluate(const Binding& binding, std::span<double> out, std::vector<double>& r) const
{
    if ((used_ & ~binding.mask()) != 0) {
        for (std::size_t i = 0; i < var_count; ++i) {
            const auto v = static_cast<Var>(i);
            if ((used_ & var_bit(v)) && !binding.bound(v)) {
                throw MissingBinding("no value bound for variable '" + std::string(var_name(v)) + "'");
            }
        }
    }
    r.resize(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& in = code_[i];
        const double a = in.a != none ? r[in.a] : 0.0;
        const double b = in.b != none ? r[in.b] : 0.0;
        double v = 0.0;
        switch (in.op) {
        case Op::constant:
            v = in.value;
            break;
        case Op::variable:
            v = binding.get(in.var);
            break;
        case Op::neg:
            v = -a;
            break;
        case Op::sin:
            v = std::sin(a);
            break;
        case Op::cos:
            v = std::cos(a);
            break;
        case Op::tan:
            v = std::tan(a);
            break;
        case Op::exp:
            v = std::exp(a);
            break;
        case Op::ln:
            if (!(a > 0.0)) domain_error("ln of non-positive value", a);
            v = std::log(a);
            break;
        case Op::sqrt:
            if (a < 0.0) domain_error("sqrt of negative value", a);
            v = std::sqrt(a);
            break;
        case Op::abs:
            v = std::fabs(a);
            break;
        case Op::sign:
            v = a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
            break;
        case Op::add:
            v = a + b;
            break;
        case Op::sub:
            v = a - b;
            break;
        case Op::mul:
            v = a * b;
            break;
        case Op::div:
            if (b == 0.0) domain_error("division by zero", a);
            v = a / b;
            break;
        case Op::pow:
            if (a < 0.0 && std::floor(b) != b) domain_error("negative base with non-integer exponent", a);
            if (a == 0.0 && b < 0.0) domain_error("zero base with negative exponent", b);
            if (b == 2.0) {
                v = a * a;
            } else {
                v = std::pow(a, b);
            }
            break;
        case Op::atan2:
            v = std::atan2(a, b);
            break;
        }
        r[i] = v;
    }
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = r[outputs_[k]];
}

std::vector<double> Program::operator()(const Binding& binding) const
{
    std::vector<double> out(outputs_.size());
    std::vector<double> scratch;
    evaluate(binding, out, scratch);
    return out;
}

} // namespace jacobi3

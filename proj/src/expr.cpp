#include "bislant/expr.hpp"

#include "bislant/error.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <type_traits>

namespace bislant {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 7> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sqrt", Function::Sqrt},
    {"abs", Function::Abs},
}};

bool lookup_function(std::string_view name, Function& out)
{
    for (const auto& [n, f] : kFunctions) {
        if (n == name) {
            out = f;
            return true;
        }
    }
    return false;
}

std::shared_ptr<const Node> make_literal(double v)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Literal;
    n->value = v;
    return n;
}

std::shared_ptr<const Node> make_unary(NodeKind kind, std::shared_ptr<const Node> operand,
                                       Function f = Function::Sin)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->function = f;
    n->lhs = std::move(operand);
    return n;
}

std::shared_ptr<const Node> make_binary(NodeKind kind, std::shared_ptr<const Node> l,
                                        std::shared_ptr<const Node> r)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

    std::shared_ptr<const Node> parse()
    {
        skip_ws();
        if (pos_ == src_.size()) {
            throw ParseError("empty expression", pos_);
        }
        auto root = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) {
            throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        }
        return root;
    }

private:
    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::shared_ptr<const Node> parse_sum()
    {
        auto lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(NodeKind::Add, lhs, parse_product());
            } else if (accept('-')) {
                lhs = make_binary(NodeKind::Sub, lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    std::shared_ptr<const Node> parse_product()
    {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(NodeKind::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = make_binary(NodeKind::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    std::shared_ptr<const Node> parse_unary()
    {
        if (accept('-')) {
            return make_unary(NodeKind::Negate, parse_unary());
        }
        return parse_power();
    }

    std::shared_ptr<const Node> parse_power()
    {
        auto base = parse_primary();
        if (accept('^')) {
            return make_binary(NodeKind::Pow, base, parse_unary());
        }
        return base;
    }

    std::shared_ptr<const Node> parse_primary()
    {
        skip_ws();
        if (pos_ >= src_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_sum();
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return parse_identifier();
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    std::shared_ptr<const Node> parse_number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            throw ParseError("malformed number", start);
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                ++pos_;
            }
            if (digits() == 0) {
                throw ParseError("malformed exponent", start);
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        const double v = std::strtod(text.c_str(), nullptr);
        if (!std::isfinite(v)) {
            throw ParseError("numeric literal out of range", start);
        }
        return make_literal(v);
    }

    std::shared_ptr<const Node> parse_identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = src_.substr(start, pos_ - start);

        Function f{};
        if (lookup_function(name, f)) {
            if (!accept('(')) {
                throw ParseError("function " + std::string(name) + " expects 1 argument", pos_);
            }
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == ')') {
                throw ParseError("arity mismatch: " + std::string(name) + " expects 1 argument, got 0",
                                 pos_);
            }
            auto arg = parse_sum();
            if (accept(',')) {
                throw ParseError("arity mismatch: " + std::string(name) + " expects 1 argument",
                                 pos_ - 1);
            }
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
            return make_unary(NodeKind::Call, arg, f);
        }

        std::shared_ptr<const Node> node;
        if (name == "pi") {
            node = make_literal(std::numbers::pi);
        } else {
            std::size_t index = vars_.size();
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (vars_[i] == name) {
                    index = i;
                    break;
                }
            }
            if (index == vars_.size()) {
                throw ParseError("unknown identifier " + std::string(name), start);
            }
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Variable;
            n->variable = index;
            node = n;
        }
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '(') {
            throw ParseError("arity mismatch: " + std::string(name) + " is not a function", pos_);
        }
        return node;
    }

    std::string_view src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

std::string format_literal(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void serialize_node(const Node& n, const std::vector<std::string>& vars, std::string& out)
{
    switch (n.kind) {
    case NodeKind::Literal:
        out += format_literal(n.value);
        return;
    case NodeKind::Variable:
        out += vars[n.variable];
        return;
    case NodeKind::Negate:
        out += "(-";
        serialize_node(*n.lhs, vars, out);
        out += ')';
        return;
    case NodeKind::Call:
        out += function_name(n.function);
        out += '(';
        serialize_node(*n.lhs, vars, out);
        out += ')';
        return;
    default:
        break;
    }
    char op = '+';
    switch (n.kind) {
    case NodeKind::Add: op = '+'; break;
    case NodeKind::Sub: op = '-'; break;
    case NodeKind::Mul: op = '*'; break;
    case NodeKind::Div: op = '/'; break;
    case NodeKind::Pow: op = '^'; break;
    default: break;
    }
    out += '(';
    serialize_node(*n.lhs, vars, out);
    out += ' ';
    out += op;
    out += ' ';
    serialize_node(*n.rhs, vars, out);
    out += ')';
}

struct Dual {
    double v;
    double d;
};

[[noreturn]] void domain_fail(const std::string& what, const Node& n, const std::vector<std::string>& vars)
{
    std::string sub;
    serialize_node(n, vars, sub);
    throw DomainError(what + " in " + sub);
}

bool is_integer(double x) { return std::nearbyint(x) == x; }

template <class T>
T lift(double v)
{
    if constexpr (std::is_same_v<T, Dual>) {
        return Dual{v, 0.0};
    } else {
        return v;
    }
}

template <class T>
double real(const T& x)
{
    if constexpr (std::is_same_v<T, Dual>) {
        return x.v;
    } else {
        return x;
    }
}

template <class T>
class Evaluator {
public:
    Evaluator(std::span<const T> values, const std::vector<std::string>& vars)
        : values_(values), vars_(vars) {}

    T operator()(const Node& n) const
    {
        switch (n.kind) {
        case NodeKind::Literal:
            return lift<T>(n.value);
        case NodeKind::Variable:
            return values_[n.variable];
        case NodeKind::Negate: {
            T a = (*this)(*n.lhs);
            if constexpr (std::is_same_v<T, Dual>) {
                return Dual{-a.v, -a.d};
            } else {
                return -a;
            }
        }
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Pow:
            return binary(n, (*this)(*n.lhs), (*this)(*n.rhs));
        case NodeKind::Call:
            return call(n, (*this)(*n.lhs));
        }
        return lift<T>(0.0);
    }

private:
    T binary(const Node& n, const T& a, const T& b) const
    {
        if constexpr (std::is_same_v<T, Dual>) {
            switch (n.kind) {
            case NodeKind::Add: return {a.v + b.v, a.d + b.d};
            case NodeKind::Sub: return {a.v - b.v, a.d - b.d};
            case NodeKind::Mul: return {a.v * b.v, a.d * b.v + a.v * b.d};
            case NodeKind::Div:
                if (b.v == 0.0) {
                    domain_fail("division by zero", n, vars_);
                }
                return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
            default: break;
            }
            const double value = power_value(n, a.v, b.v);
            double d = 0.0;
            if (b.d == 0.0) {
                if (a.d != 0.0) {
                    d = b.v * std::pow(a.v, b.v - 1.0) * a.d;
                }
            } else {
                if (a.v <= 0.0) {
                    domain_fail("variable exponent requires a positive base", n, vars_);
                }
                d = value * (b.d * std::log(a.v) + b.v * a.d / a.v);
            }
            if (!std::isfinite(d)) {
                domain_fail("derivative not finite", n, vars_);
            }
            return {value, d};
        } else {
            switch (n.kind) {
            case NodeKind::Add: return a + b;
            case NodeKind::Sub: return a - b;
            case NodeKind::Mul: return a * b;
            case NodeKind::Div:
                if (b == 0.0) {
                    domain_fail("division by zero", n, vars_);
                }
                return a / b;
            default: return power_value(n, a, b);
            }
        }
    }

    double power_value(const Node& n, double a, double b) const
    {
        if (a < 0.0 && !is_integer(b)) {
            domain_fail("negative base with non-integer exponent", n, vars_);
        }
        if (a == 0.0 && b < 0.0) {
            domain_fail("division by zero", n, vars_);
        }
        const double r = std::pow(a, b);
        if (!std::isfinite(r)) {
            domain_fail("overflow", n, vars_);
        }
        return r;
    }

    T call(const Node& n, const T& a) const
    {
        const double x = real(a);
        double value = 0.0;
        double slope = 0.0;  // d value / d x
        switch (n.function) {
        case Function::Sin: value = std::sin(x); slope = std::cos(x); break;
        case Function::Cos: value = std::cos(x); slope = -std::sin(x); break;
        case Function::Tan: {
            const double c = std::cos(x);
            if (c == 0.0) {
                domain_fail("tan pole", n, vars_);
            }
            value = std::tan(x);
            slope = 1.0 / (c * c);
            break;
        }
        case Function::Exp:
            value = std::exp(x);
            slope = value;
            if (!std::isfinite(value)) {
                domain_fail("overflow", n, vars_);
            }
            break;
        case Function::Log:
            if (x <= 0.0) {
                domain_fail("log of non-positive value", n, vars_);
            }
            value = std::log(x);
            slope = 1.0 / x;
            break;
        case Function::Sqrt:
            if (x < 0.0) {
                domain_fail("sqrt of negative value", n, vars_);
            }
            value = std::sqrt(x);
            slope = value > 0.0 ? 0.5 / value : 0.0;
            break;
        case Function::Abs:
            value = std::abs(x);
            slope = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
            break;
        }
        if constexpr (std::is_same_v<T, Dual>) {
            if (a.d == 0.0) {
                return {value, 0.0};
            }
            if (x == 0.0 && n.function == Function::Abs) {
                domain_fail("abs is not differentiable at 0", n, vars_);
            }
            if (x == 0.0 && n.function == Function::Sqrt) {
                domain_fail("sqrt is not differentiable at 0", n, vars_);
            }
            return {value, slope * a.d};
        } else {
            return value;
        }
    }

    std::span<const T> values_;
    const std::vector<std::string>& vars_;
};

} // namespace

std::string_view function_name(Function f)
{
    for (const auto& [n, fn] : kFunctions) {
        if (fn == f) {
            return n;
        }
    }
    return "?";
}

bool structurally_equal(const Node& a, const Node& b)
{
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
    case NodeKind::Literal: return a.value == b.value;
    case NodeKind::Variable: return a.variable == b.variable;
    case NodeKind::Negate: return structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Call: return a.function == b.function && structurally_equal(*a.lhs, *b.lhs);
    default:
        return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
}

Expression Expression::parse(std::string_view source, std::vector<std::string> variables)
{
    std::set<std::string, std::less<>> seen;
    for (const auto& v : variables) {
        Function f{};
        if (v == "pi" || lookup_function(v, f)) {
            throw ParseError("reserved name used as variable: " + v, 0);
        }
        if (!seen.insert(v).second) {
            throw ParseError("duplicate variable " + v, 0);
        }
    }
    Parser p(source, variables);
    auto root = p.parse();
    return Expression(std::move(root), std::move(variables));
}

Expression Expression::constant(double value, std::vector<std::string> variables)
{
    return Expression(make_literal(value), std::move(variables));
}

double Expression::eval(std::span<const double> values) const
{
    if (values.size() != variables_.size()) {
        throw Error("eval: expected " + std::to_string(variables_.size()) + " values, got " +
                    std::to_string(values.size()));
    }
    return Evaluator<double>(values, variables_)(*root_);
}

double Expression::eval(const Bindings& bindings) const
{
    const auto values = resolve(bindings);
    return eval(values);
}

double Expression::derivative(std::span<const double> values, std::size_t index) const
{
    if (values.size() != variables_.size() || index >= variables_.size()) {
        throw Error("derivative: variable index or value count mismatch");
    }
    std::vector<Dual> duals(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        duals[i] = Dual{values[i], i == index ? 1.0 : 0.0};
    }
    return Evaluator<Dual>(duals, variables_)(*root_).d;
}

double Expression::derivative(const Bindings& bindings, std::string_view variable) const
{
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i] == variable) {
            return derivative(resolve(bindings), i);
        }
    }
    throw Error("derivative: unknown variable " + std::string(variable));
}

std::vector<double> Expression::gradient(std::span<const double> values) const
{
    std::vector<double> g(variables_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        g[i] = derivative(values, i);
    }
    return g;
}

std::string Expression::serialize() const
{
    std::string out;
    serialize_node(*root_, variables_, out);
    return out;
}

std::vector<double> Expression::resolve(const Bindings& bindings) const
{
    std::vector<double> values(variables_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        auto it = bindings.find(variables_[i]);
        if (it == bindings.end()) {
            throw Error("missing binding for " + variables_[i]);
        }
        values[i] = it->second;
    }
    return values;
}

bool operator==(const Expression& a, const Expression& b)
{
    if (!structurally_equal(*a.root_, *b.root_)) {
        return false;
    }
    // Variable indices only mean the same thing if the names agree.
    return a.variables_ == b.variables_;
}

Expression parse(std::string_view source, const std::vector<std::string>& variables)
{
    return Expression::parse(source, variables);
}

double eval(const Expression& expr, const Bindings& bindings) { return expr.eval(bindings); }

double eval_derivative(const Expression& expr, const Bindings& bindings, std::string_view variable)
{
    return expr.derivative(bindings, variable);
}

} // namespace bislant

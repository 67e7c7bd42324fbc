#pragma once

// Closed-form scalar expressions over named real variables.
//
// Grammar (lowest to highest precedence):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | name | func '(' sum ')' | '(' sum ')'
//
// `pi` is a reserved constant. Functions: sin cos tan exp log sqrt abs.

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bislant {

enum class NodeKind { Literal, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Abs };

std::string_view function_name(Function f);

/// Immutable AST node. Children are shared between copies of an Expression.
struct Node {
    NodeKind kind = NodeKind::Literal;
    double value = 0.0;        // Literal
    std::size_t variable = 0;  // Variable: index into the expression's variable list
    Function function = Function::Sin;  // Call
    std::shared_ptr<const Node> lhs;    // Negate/Call operand, binary left side
    std::shared_ptr<const Node> rhs;    // binary right side
};

bool structurally_equal(const Node& a, const Node& b);

using Bindings = std::map<std::string, double, std::less<>>;

class Expression {
public:
    /// Parses `source`; every identifier must be a declared variable, a function, or `pi`.
    static Expression parse(std::string_view source, std::vector<std::string> variables);

    /// Constant expression, used for defaults such as sigma = 0.
    static Expression constant(double value, std::vector<std::string> variables = {});

    double eval(std::span<const double> values) const;
    double eval(const Bindings& bindings) const;

    /// Exact partial derivative with respect to variable `index` (forward-mode dual numbers).
    double derivative(std::span<const double> values, std::size_t index) const;
    double derivative(const Bindings& bindings, std::string_view variable) const;

    /// All partial derivatives, one dual-number pass per variable.
    std::vector<double> gradient(std::span<const double> values) const;

    /// Canonical text form. Re-parsing it with the same variable list yields an equal AST.
    std::string serialize() const;

    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const Node& root() const noexcept { return *root_; }

    /// Structural AST equality (same shape, same literals, same variable names).
    friend bool operator==(const Expression& a, const Expression& b);

private:
    Expression(std::shared_ptr<const Node> root, std::vector<std::string> variables)
        : root_(std::move(root)), variables_(std::move(variables)) {}

    std::vector<double> resolve(const Bindings& bindings) const;

    std::shared_ptr<const Node> root_;
    std::vector<std::string> variables_;
};

// Free-function forms of the operations.
Expression parse(std::string_view source, const std::vector<std::string>& variables);
double eval(const Expression& expr, const Bindings& bindings);
double eval_derivative(const Expression& expr, const Bindings& bindings, std::string_view variable);

} // namespace bislant

#pragma once

// Test-only reference computations. Nothing here calls into the library's derivative or
// frame code, so tests comparing against these are independent checks.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

/// Central difference with one Richardson step, step h and h/2.
inline double derivative(const std::function<double(double)>& f, double x, double h = 1e-5)
{
    auto central = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

inline std::vector<double> derivative(const std::function<std::vector<double>(double)>& f, double x,
                                      double h = 1e-5)
{
    auto central = [&](double s) {
        const auto a = f(x + s);
        const auto b = f(x - s);
        std::vector<double> d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            d[i] = (a[i] - b[i]) / (2.0 * s);
        return d;
    };
    const auto c = central(h);
    const auto fn = central(0.5 * h);
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        out[i] = (4.0 * fn[i] - c[i]) / 3.0;
    return out;
}

// Closed forms of the bi-slant example's slant angles.
inline double cos2_theta1(double u1, double u2)
{
    const double c = std::cos(u1 - u2);
    return (u1 * u2 - 1) * (u1 * u2 - 1) * c * c / ((1 + u1 * u1) * (1 + u2 * u2));
}

inline double cos2_theta2(double u3, double u4)
{
    return cos2_theta1(u3, u4);
}

// The example immersion in ambient slot order, written out by hand.
inline std::vector<double> example_position(const std::vector<double>& u)
{
    return {u[0] * std::cos(u[1]), u[0] * std::sin(u[1]), u[2] * std::cos(u[3]), u[2] * std::sin(u[3]),
            u[1] * std::cos(u[0]), u[1] * std::sin(u[0]), u[3] * std::cos(u[2]), u[3] * std::sin(u[2])};
}

inline bool example_admitted(double u1, double u2, double u3, double u4)
{
    const double pi = std::acos(-1.0);
    return std::abs(u1 * u2 - 1) > 1e-6 && u1 - u2 > 1e-6 && u1 - u2 < pi / 4 - 1e-6 &&
           std::abs(u3 * u4 - 1) > 1e-6 && u3 - u4 > pi / 4 + 1e-6 && u3 - u4 < pi / 2 - 1e-6;
}

/// Random expression source over the given variable names, depth <= max_depth.
class ExpressionGenerator {
public:
    ExpressionGenerator(std::uint64_t seed, std::vector<std::string> vars)
        : rng_(seed), vars_(std::move(vars)) {}

    std::string operator()(int max_depth) { return node(max_depth); }

private:
    std::string leaf()
    {
        std::uniform_int_distribution<int> pick(0, 3);
        if (pick(rng_) == 0) {
            std::uniform_real_distribution<double> lit(0.1, 3.0);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", lit(rng_));
            return buf;
        }
        std::uniform_int_distribution<std::size_t> v(0, vars_.size() - 1);
        return vars_[v(rng_)];
    }

    std::string node(int depth)
    {
        if (depth <= 1)
            return leaf();
        std::uniform_int_distribution<int> kind(0, 13);
        const int k = kind(rng_);
        const auto sub = [&] { return node(depth - 1); };
        switch (k) {
        case 0: return "(" + sub() + " + " + sub() + ")";
        case 1: return "(" + sub() + " - " + sub() + ")";
        case 2: return "(" + sub() + " * " + sub() + ")";
        case 3: return "(" + sub() + " / " + sub() + ")";
        case 4: return "(" + sub() + ")^2";
        case 5: return "(" + sub() + ")^3";
        case 6: return "-" + sub();
        case 7: return "sin(" + sub() + ")";
        case 8: return "cos(" + sub() + ")";
        case 9: return "exp(" + sub() + ")";
        case 10: return "log(" + sub() + ")";
        case 11: return "sqrt(" + sub() + ")";
        case 12: return "tan(" + sub() + ")";
        default: return "abs(" + sub() + ")";
        }
    }

    std::mt19937_64 rng_;
    std::vector<std::string> vars_;
};

} // namespace oracle

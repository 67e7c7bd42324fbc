#include "bislant/error.hpp"
#include "bislant/scenario.hpp"

#include <map>

namespace bislant {

namespace {

// Components are stored in J-slot order: slot k and slot k+4 form one complex coordinate.
// f = x1^2 + x5^2 + 1 restricted to the chart only involves u1, u2.
const std::string kBuiltinExample = R"json({
  "name": "paper-example",
  "description": "Bi-slant 4-fold in C^4, g = exp(-f) g0 with f = x1^2 + x5^2 + 1, warped over the (u1,u2) leaf with lambda = exp(-f/2).",
  "ambient": {
    "n": 4,
    "sigma": "-(x1^2 + x5^2 + 1)"
  },
  "chart": {
    "params": ["u1", "u2", "u3", "u4"],
    "components": [
      "u1*cos(u2)", "u1*sin(u2)", "u3*cos(u4)", "u3*sin(u4)",
      "u2*cos(u1)", "u2*sin(u1)", "u4*cos(u3)", "u4*sin(u3)"
    ],
    "domain_guard": [
      "abs(u1*u2 - 1) - 1e-6",
      "u1 - u2 - 1e-6",
      "pi/4 - (u1 - u2) - 1e-6",
      "abs(u3*u4 - 1) - 1e-6",
      "u3 - u4 - pi/4 - 1e-6",
      "pi/2 - (u3 - u4) - 1e-6"
    ]
  },
  "split": {
    "I1": [1, 2],
    "I2": [3, 4],
    "declared_cos2_theta1": "(u1*u2 - 1)^2*cos(u1 - u2)^2/((1 + u1^2)*(1 + u2^2))",
    "declared_cos2_theta2": "(u3*u4 - 1)^2*cos(u3 - u4)^2/((1 + u3^2)*(1 + u4^2))"
  },
  "warp": {
    "lambda": "exp(-((u1*cos(u2))^2 + (u2*cos(u1))^2 + 1)/2)"
  },
  "expect": {
    "d1_totally_geodesic": true,
    "d2_totally_geodesic": false,
    "d2_totally_umbilic": true
  },
  "samples": {
    "mode": "grid",
    "ranges": [[0.4, 0.8], [0.1, 0.3], [1.4, 1.6], [0.3, 0.5]],
    "counts": 3,
    "seed": 7
  }
})json";

const std::map<std::string, const std::string*>& registry()
{
    static const std::map<std::string, const std::string*> r{{"paper-example", &kBuiltinExample}};
    return r;
}

} // namespace

std::vector<std::string> builtin_names()
{
    std::vector<std::string> out;
    for (const auto& [name, _] : registry())
        out.push_back(name);
    return out;
}

const std::string& builtin_source(const std::string& name)
{
    const auto it = registry().find(name);
    if (it == registry().end())
        throw SchemaError("builtin", "unknown builtin scenario \"" + name + "\"");
    return *it->second;
}

} // namespace bislant

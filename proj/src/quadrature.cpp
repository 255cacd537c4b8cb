#include "supg/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace supg {

namespace {

void add_orbit3(QuadratureRule& rule, double a, double w) {
  const double c = 1.0 - 2.0 * a;
  rule.points.push_back({c, a, a});
  rule.points.push_back({a, c, a});
  rule.points.push_back({a, a, c});
  rule.weights.insert(rule.weights.end(), 3, w);
}

void add_orbit6(QuadratureRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  rule.points.push_back({c, a, b});
  rule.points.push_back({c, b, a});
  rule.points.push_back({a, c, b});
  rule.points.push_back({b, c, a});
  rule.points.push_back({a, b, c});
  rule.points.push_back({b, a, c});
  rule.weights.insert(rule.weights.end(), 6, w);
}

QuadratureRule make_rule(int degree) {
  QuadratureRule rule;
  switch (degree) {
    case 1:
      rule.degree = 1;
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(0.5);
      break;
    case 2:
      rule.degree = 2;
      add_orbit3(rule, 1.0 / 6.0, 1.0 / 6.0);
      break;
    case 3:
    case 4:
      // Dunavant 6-point rule, constants refined to full double precision.
      rule.degree = 4;
      add_orbit3(rule, 0.4459484909159648863183293, 0.1116907948390057328475035);
      add_orbit3(rule, 0.09157621350977074345957146, 0.05497587182766093381916316);
      break;
    case 5: {
      // Radon 7-point rule.
      rule.degree = 5;
      const double s15 = std::sqrt(15.0);
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(9.0 / 80.0);
      add_orbit3(rule, (6.0 - s15) / 21.0, (155.0 - s15) / 2400.0);
      add_orbit3(rule, (6.0 + s15) / 21.0, (155.0 + s15) / 2400.0);
      break;
    }
    case 6:
      // Dunavant 12-point rule.
      rule.degree = 6;
      add_orbit3(rule, 0.2492867451709104212916386, 0.05839313786318968301264481);
      add_orbit3(rule, 0.0630890144915022283403316, 0.0254224531851034084604684);
      add_orbit6(rule, 0.05314504984481694735324967, 0.3103524510337844054166077,
                 0.04142553780918678759677673);
      break;
    default:
      throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree) +
                                  " (supported: 1..6)");
  }
  return rule;
}

}  // namespace

QuadratureRule quadrature(int min_degree) { return make_rule(min_degree); }

const QuadratureRule& cached_quadrature(int min_degree) {
  static const std::array<QuadratureRule, 6> rules = {make_rule(1), make_rule(2), make_rule(3),
                                                      make_rule(4), make_rule(5), make_rule(6)};
  if (min_degree < 1 || min_degree > 6) {
    throw std::invalid_argument("cached_quadrature: unsupported degree " +
                                std::to_string(min_degree));
  }
  return rules[static_cast<std::size_t>(min_degree - 1)];
}

}  // namespace supg

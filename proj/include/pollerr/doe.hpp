#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pollerr {

enum class FactorKind { continuous, integer, fraction };

// One experiment factor with its low/high actual levels. Coded values map
// low -> -1, high -> +1 via (v - a)/b with a the level midpoint and b the
// half-range.
struct Factor {
  std::string name;
  double low_actual = 0.0;
  double high_actual = 0.0;
  FactorKind kind = FactorKind::continuous;
  std::optional<double> baseline_override;

  Factor() = default;
  Factor(std::string name, double low, double high,
         FactorKind kind = FactorKind::continuous,
         std::optional<double> baseline = std::nullopt);

  double midpoint() const { return (high_actual + low_actual) / 2.0; }
  double half_range() const { return (high_actual - low_actual) / 2.0; }
  double baseline_actual() const;
};

struct FactorSpace {
  std::vector<Factor> factors;

  FactorSpace() = default;
  explicit FactorSpace(std::vector<Factor> fs);

  std::size_t size() const { return factors.size(); }
  const Factor& operator[](std::size_t i) const { return factors[i]; }
  // -1 when no factor has that name.
  int index_of(const std::string& name) const;
  std::vector<std::string> names() const;
};

struct DesignPoint {
  std::vector<double> coded;
};

// Full-factorial design in Yates standard order (factor 1 alternates
// fastest). Coordinates are restricted to [-1, +1] on construction.
struct Design {
  std::vector<DesignPoint> points;
  std::vector<int> order_labels;

  Design() = default;
  Design(std::vector<DesignPoint> pts, std::vector<int> labels);
};

double to_coded(const Factor& factor, double actual);

// Inverse of to_coded; integer factors round half away from zero.
double to_actual(const Factor& factor, double coded);

Design full_factorial(int k, double scale);

// Three quick-feedback points: baseline, all +0.5, all -0.5.
std::vector<DesignPoint> diagonal_probe(int k);

std::string design_to_csv(const Design& design,
                          const std::vector<std::string>& factor_names);

}  // namespace pollerr

#include "pollerr/doe.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "pollerr/errors.hpp"

namespace pollerr {

namespace {

bool is_whole(double v) { return std::isfinite(v) && std::floor(v) == v; }

}  // namespace

Factor::Factor(std::string name_, double low, double high, FactorKind kind_,
               std::optional<double> baseline)
    : name(std::move(name_)),
      low_actual(low),
      high_actual(high),
      kind(kind_),
      baseline_override(baseline) {
  if (name.empty()) fail(errkind::invalid_argument, "factor name is empty");
  if (!(low_actual < high_actual))
    fail(errkind::invalid_argument,
         "factor '" + name + "': low level must be below high level");
  if (kind == FactorKind::fraction &&
      (low_actual < 0.0 || high_actual > 1.0))
    fail(errkind::invalid_argument,
         "factor '" + name + "': fraction levels must lie in [0, 1]");
  if (kind == FactorKind::integer &&
      (!is_whole(low_actual) || !is_whole(high_actual)))
    fail(errkind::invalid_argument,
         "factor '" + name + "': integer levels must be whole numbers");
}

double Factor::baseline_actual() const {
  if (baseline_override) return *baseline_override;
  double mid = midpoint();
  if (kind == FactorKind::integer) mid = std::round(mid);
  return mid;
}

FactorSpace::FactorSpace(std::vector<Factor> fs) : factors(std::move(fs)) {
  if (factors.empty())
    fail(errkind::invalid_argument, "factor space needs at least one factor");
  std::set<std::string> seen;
  for (const auto& f : factors)
    if (!seen.insert(f.name).second)
      fail(errkind::invalid_argument, "duplicate factor name '" + f.name + "'");
}

int FactorSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> FactorSpace::names() const {
  std::vector<std::string> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(f.name);
  return out;
}

Design::Design(std::vector<DesignPoint> pts, std::vector<int> labels)
    : points(std::move(pts)), order_labels(std::move(labels)) {
  if (points.size() != order_labels.size())
    fail(errkind::invalid_argument, "design points and labels differ in size");
  for (const auto& p : points)
    for (double c : p.coded)
      if (!(std::fabs(c) <= 1.0))
        fail(errkind::invalid_argument,
             "design coordinates must lie in [-1, +1]");
}

double to_coded(const Factor& factor, double actual) {
  return (actual - factor.midpoint()) / factor.half_range();
}

double to_actual(const Factor& factor, double coded) {
  double v = factor.midpoint() + factor.half_range() * coded;
  // std::round rounds half away from zero.
  if (factor.kind == FactorKind::integer) v = std::round(v);
  return v;
}

Design full_factorial(int k, double scale) {
  if (k < 1 || k > 20)
    fail(errkind::invalid_argument,
         "full factorial supports 1 <= k <= 20, got " + std::to_string(k));
  if (!(scale > 0.0 && scale <= 1.0))
    fail(errkind::invalid_argument, "scale must lie in (0, 1]");
  const std::size_t n = std::size_t{1} << k;
  std::vector<DesignPoint> points(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    points[i].coded.resize(k);
    for (int j = 0; j < k; ++j)
      points[i].coded[j] = ((i >> j) & 1u) ? scale : -scale;
    labels[i] = static_cast<int>(i) + 1;
  }
  return Design(std::move(points), std::move(labels));
}

std::vector<DesignPoint> diagonal_probe(int k) {
  if (k < 1) fail(errkind::invalid_argument, "diagonal probe needs k >= 1");
  std::vector<DesignPoint> out(3);
  out[0].coded.assign(k, 0.0);
  out[1].coded.assign(k, 0.5);
  out[2].coded.assign(k, -0.5);
  return out;
}

std::string design_to_csv(const Design& design,
                          const std::vector<std::string>& factor_names) {
  std::ostringstream os;
  os << "std_order";
  for (const auto& n : factor_names) os << ',' << n;
  os << '\n';
  os.precision(9);
  for (std::size_t i = 0; i < design.points.size(); ++i) {
    os << design.order_labels[i];
    for (double c : design.points[i].coded) os << ',' << c;
    os << '\n';
  }
  return os.str();
}

}  // namespace pollerr

#include "eqbk/weight.hpp"

#include <nlohmann/json.hpp>

namespace eqbk {

double eval_potential(const Weight& w, double v, int order) {
  if (!std::isfinite(v)) throw Error("eval_potential: v must be finite");
  switch (order) {
    case 0:
      return w.potential(v);
    case 1:
      return w.slope(v);
    case 2:
      return w.curvature(v);
    default:
      throw Error("eval_potential: order must be 0, 1 or 2");
  }
}

Mask positive_set(const Weight& w, const VGrid& grid, double eps) {
  if (!(eps > 0)) throw Error("positive_set: eps must be positive");
  Mask mask(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i)
    mask[i] = w.curvature(grid.node(i)) > eps ? 1 : 0;
  return mask;
}

double curvature_mass(const Weight& w, const VGrid& grid) {
  const double s_min = w.slope(grid.v_min());
  const double s_max = w.slope(grid.v_max());
  const double m = w.degree_m();
  if (!(s_min < 1e-6 && m - s_max < 1e-6))
    throw GridTooNarrowError(
        "curvature_mass: end slopes have not flattened; widen the grid "
        "(u'(v_min) and m - u'(v_max) must both be below 1e-6)");
  return s_max - s_min;
}

Weight Weight::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("Weight: expected a JSON object");
  if (!j.contains("degree_m") || !j["degree_m"].is_number_integer())
    throw Error("Weight: degree_m must be an integer");
  const int m = j["degree_m"].get<int>();
  std::optional<Bump> bump;
  if (j.contains("bump") && !j["bump"].is_null()) {
    const auto& b = j["bump"];
    if (!b.is_object() || !b.contains("amplitude") || !b.contains("center") ||
        !b.contains("halfwidth"))
      throw Error("Weight: bump needs amplitude, center, halfwidth");
    bump = Bump{b["amplitude"].get<double>(), b["center"].get<double>(),
                b["halfwidth"].get<double>()};
  }
  return Weight(m, bump);
}

nlohmann::json Weight::to_json() const {
  nlohmann::json j;
  j["degree_m"] = m_;
  if (bump_) {
    j["bump"] = {{"amplitude", bump_->amplitude},
                 {"center", bump_->center},
                 {"halfwidth", bump_->halfwidth}};
  } else {
    j["bump"] = nullptr;
  }
  return j;
}

}  // namespace eqbk

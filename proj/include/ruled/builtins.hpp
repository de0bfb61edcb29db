#pragma once

// Named closed-form curves, frames and ready-made ruled patches.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "ruled/error.hpp"
#include "ruled/field.hpp"
#include "ruled/framed_curve.hpp"

namespace ruled {

using Params = std::map<std::string, double>;

namespace builtin {

namespace detail {

inline CoordinateSeries trig(double freq, double cos_coef, double sin_coef, double offset = 0.0) {
  return {{offset}, {{freq, cos_coef, sin_coef}}};
}

inline CoordinateSeries linear(double offset, double slope) { return {{offset, slope}, {}}; }

inline CoordinateSeries zero() { return {{0.0}, {}}; }

/// (cos phi(t), sin phi(t), 0) with phi = 0 for t <= 0 and phi = t^3 for t > 0:
/// constant on the left half, turning on the right half, C^2 across t = 0.
class SplicedRotationRep final : public ruled::detail::FieldRep {
 public:
  [[nodiscard]] int dim() const override { return 3; }
  [[nodiscard]] FieldKind kind() const override { return FieldKind::builtin; }
  [[nodiscard]] std::string family() const override { return "spliced_rotation"; }
  [[nodiscard]] int max_order() const override { return 2; }
  [[nodiscard]] AmbientVector derivative(double t, int order) const override {
    const double p0 = t > 0 ? t * t * t : 0.0;
    const double p1 = t > 0 ? 3 * t * t : 0.0;
    const double p2 = t > 0 ? 6 * t : 0.0;
    const double c = std::cos(p0), s = std::sin(p0);
    switch (order) {
      case 0: return AmbientVector{{c, s, 0.0}};
      case 1: return AmbientVector{{-s * p1, c * p1, 0.0}};
      default: return AmbientVector{{-c * p1 * p1 - s * p2, -s * p1 * p1 + c * p2, 0.0}};
    }
  }
};

inline double param(const Params& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) fail(ErrorKind::config, "missing parameter '" + key + "'");
  return it->second;
}

}  // namespace detail

/// Unit-speed circular helix of radius a and pitch parameter b.
inline ParamVectorField helix(double a, double b) {
  const double c = std::hypot(a, b);
  if (!(a > 0.0) || !(c > 0.0)) fail(ErrorKind::config, "helix needs a > 0");
  return ParamVectorField::named_series(
      "helix", {detail::trig(1.0 / c, a, 0.0), detail::trig(1.0 / c, 0.0, a), detail::linear(0.0, b / c)});
}

inline ParamVectorField helix_tangent(double a, double b) {
  const double c = std::hypot(a, b);
  if (!(a > 0.0)) fail(ErrorKind::config, "helix needs a > 0");
  return ParamVectorField::named_series(
      "helix_tangent", {detail::trig(1.0 / c, 0.0, -a / c), detail::trig(1.0 / c, a / c, 0.0),
                        CoordinateSeries{{b / c}, {}}});
}

/// Unit-speed circle of radius r in the x-y plane.
inline ParamVectorField circle(double r) {
  if (!(r > 0.0)) fail(ErrorKind::config, "circle needs r > 0");
  return ParamVectorField::named_series("circle",
                                        {detail::trig(1.0 / r, r, 0.0), detail::trig(1.0 / r, 0.0, r), detail::zero()});
}

inline ParamVectorField circle_tangent(double r) {
  if (!(r > 0.0)) fail(ErrorKind::config, "circle needs r > 0");
  return ParamVectorField::named_series(
      "circle_tangent", {detail::trig(1.0 / r, 0.0, -1.0), detail::trig(1.0 / r, 1.0, 0.0), detail::zero()});
}

/// The x axis traversed at unit speed.
inline ParamVectorField line() {
  return ParamVectorField::named_series("line", {detail::linear(0.0, 1.0), detail::zero(), detail::zero()});
}

/// Unit-speed circle of radius r at height h; together with cone_ruling it sweeps the
/// circular cone with apex at the origin.
inline ParamVectorField cone_directrix(double r, double h) {
  if (!(r > 0.0)) fail(ErrorKind::config, "cone needs r > 0");
  return ParamVectorField::named_series(
      "cone_directrix", {detail::trig(1.0 / r, r, 0.0), detail::trig(1.0 / r, 0.0, r), CoordinateSeries{{h}, {}}});
}

inline ParamVectorField cone_ruling(double r, double h) {
  if (!(r > 0.0)) fail(ErrorKind::config, "cone needs r > 0");
  const double n = std::hypot(r, h);
  return ParamVectorField::named_series("cone_ruling", {detail::trig(1.0 / r, r / n, 0.0),
                                                        detail::trig(1.0 / r, 0.0, r / n), CoordinateSeries{{h / n}, {}}});
}

inline ParamVectorField helicoid_axis() {
  return ParamVectorField::named_series("helicoid_axis", {detail::zero(), detail::zero(), detail::linear(0.0, 1.0)});
}

inline ParamVectorField helicoid_ruling() {
  return ParamVectorField::named_series("helicoid_ruling",
                                        {detail::trig(1.0, 1.0, 0.0), detail::trig(1.0, 0.0, 1.0), detail::zero()});
}

inline ParamVectorField spliced_rotation() {
  return ParamVectorField(std::make_shared<detail::SplicedRotationRep>());
}

/// A named field constructor.
struct FieldFamily {
  std::string name;
  std::string description;
  Params defaults;
  std::function<ParamVectorField(const Params&)> make;
};

inline const std::vector<FieldFamily>& field_families() {
  using detail::param;
  static const std::vector<FieldFamily> families = {
      {"helix", "unit-speed helix (a cos(t/c), a sin(t/c), b t/c), c = sqrt(a^2+b^2)",
       {{"a", std::numbers::sqrt2 / 2}, {"b", std::numbers::sqrt2 / 2}},
       [](const Params& p) { return helix(param(p, "a"), param(p, "b")); }},
      {"helix_tangent", "unit tangent of the helix", {{"a", std::numbers::sqrt2 / 2}, {"b", std::numbers::sqrt2 / 2}},
       [](const Params& p) { return helix_tangent(param(p, "a"), param(p, "b")); }},
      {"circle", "unit-speed circle of radius r", {{"r", 1.0}}, [](const Params& p) { return circle(param(p, "r")); }},
      {"circle_tangent", "unit tangent of the circle", {{"r", 1.0}},
       [](const Params& p) { return circle_tangent(param(p, "r")); }},
      {"line", "x axis at unit speed", {}, [](const Params&) { return line(); }},
      {"cone_directrix", "unit-speed circle of radius r at height h", {{"r", 1.0}, {"h", 1.0}},
       [](const Params& p) { return cone_directrix(param(p, "r"), param(p, "h")); }},
      {"cone_ruling", "unit ruling of the cone through the origin", {{"r", 1.0}, {"h", 1.0}},
       [](const Params& p) { return cone_ruling(param(p, "r"), param(p, "h")); }},
      {"helicoid_axis", "z axis at unit speed", {}, [](const Params&) { return helicoid_axis(); }},
      {"helicoid_ruling", "(cos t, sin t, 0)", {}, [](const Params&) { return helicoid_ruling(); }},
      {"spliced_rotation", "(cos p, sin p, 0), p = 0 for t <= 0 and t^3 for t > 0", {},
       [](const Params&) { return spliced_rotation(); }},
  };
  return families;
}

inline const FieldFamily& find_field_family(const std::string& name) {
  for (const auto& f : field_families())
    if (f.name == name) return f;
  fail(ErrorKind::config, "unknown builtin field family '" + name + "'");
}

/// Fills defaults and rejects unknown parameter names.
inline Params resolve_params(const std::string& family, const Params& defaults, const Params& given) {
  Params out = defaults;
  for (const auto& [key, value] : given) {
    if (!defaults.contains(key)) fail(ErrorKind::config, "family '" + family + "' has no parameter '" + key + "'");
    out[key] = value;
  }
  return out;
}

inline ParamVectorField make_field(const std::string& family, const Params& params = {}) {
  const auto& f = find_field_family(family);
  return f.make(resolve_params(family, f.defaults, params));
}

// ---------------------------------------------------------------------------------
// Framed curves

inline FramedCurve cylinder(const ParamVectorField& directrix, const std::vector<AmbientVector>& directions,
                            Interval interval) {
  FramedCurve fc;
  fc.dim = directrix.dim();
  fc.m = static_cast<int>(directions.size()) + 1;
  fc.directrix = directrix;
  for (const auto& d : directions) fc.frame.push_back(ParamVectorField::constant(d));
  fc.interval = interval;
  return fc;
}

inline FramedCurve circular_cone(double r = 1.0, double h = 1.0) {
  FramedCurve fc;
  fc.dim = 3;
  fc.m = 2;
  fc.directrix = cone_directrix(r, h);
  fc.frame = {cone_ruling(r, h)};
  fc.interval = {0.0, 2.0 * std::numbers::pi * r};
  return fc;
}

inline FramedCurve helicoid_frame() {
  FramedCurve fc;
  fc.dim = 3;
  fc.m = 2;
  fc.directrix = helicoid_axis();
  fc.frame = {helicoid_ruling()};
  fc.interval = {0.0, 2.0 * std::numbers::pi};
  return fc;
}

/// Tangent developable: the ruling is the unit tangent of the (unit-speed) directrix.
inline FramedCurve tangent_developable(const ParamVectorField& curve, Interval interval) {
  FramedCurve fc;
  fc.dim = curve.dim();
  fc.m = 2;
  fc.directrix = curve;
  fc.frame = {derivative_field(curve)};
  fc.interval = interval;
  return fc;
}

/// Appends k constant directions e_{dim+1}, ..., e_{dim+k} (new ambient coordinates) to
/// the frame; the result lives in dimension dim + k with m + k.
inline FramedCurve product_with_constant_directions(const FramedCurve& base, int k) {
  if (k < 0) fail(ErrorKind::config, "k must be non-negative");
  FramedCurve fc;
  fc.dim = base.dim + k;
  fc.m = base.m + k;
  fc.interval = base.interval;
  fc.directrix = embed(base.directrix, fc.dim);
  for (const auto& x : base.frame) fc.frame.push_back(embed(x, fc.dim));
  for (int i = 0; i < k; ++i) fc.frame.push_back(ParamVectorField::constant(unit_vector(fc.dim, base.dim + i)));
  return fc;
}

/// A named ready-made patch.
struct PatchFamily {
  std::string name;
  std::string description;
  Params defaults;
  std::function<FramedCurve(const Params&)> make;
};

inline const std::vector<PatchFamily>& patch_families() {
  using detail::param;
  constexpr double pi = std::numbers::pi;
  constexpr double half_sqrt2 = std::numbers::sqrt2 / 2;
  static const std::vector<PatchFamily> families = {
      {"cylinder_helix_r4", "cylinder over a unit-speed helix in R^4 with ruling e4 (degree 0)",
       {{"a", half_sqrt2}, {"b", half_sqrt2}},
       [](const Params& p) {
         return cylinder(embed(helix(param(p, "a"), param(p, "b")), 4), {unit_vector(4, 3)}, {0.0, 2 * pi});
       }},
      {"plane", "cylinder over the x axis with ruling e2 (a plane, degree 0)", {},
       [](const Params&) { return cylinder(line(), {unit_vector(3, 1)}, {-1.0, 1.0}); }},
      {"circular_cone", "circular cone with apex at the origin (degree 1, conical)", {{"r", 1.0}, {"h", 1.0}},
       [](const Params& p) { return circular_cone(param(p, "r"), param(p, "h")); }},
      {"tangent_developable_helix", "tangent developable of a unit-speed helix (degree 1, tangent)",
       {{"a", half_sqrt2}, {"b", half_sqrt2}},
       [](const Params& p) {
         const double a = param(p, "a"), b = param(p, "b");
         return tangent_developable(helix(a, b), {0.0, 2 * pi * std::hypot(a, b)});
       }},
      {"helicoid", "helicoid: axis directrix with rotating ruling (degree 1, not rank-one)", {},
       [](const Params&) { return helicoid_frame(); }},
      {"rotation_r5", "R^5 family with two independently rotating rulings (degree 2)", {},
       [](const Params&) {
         FramedCurve fc;
         fc.dim = 5;
         fc.m = 3;
         fc.directrix = embed(line(), 5);
         fc.frame = {ParamVectorField::fourier({{}, {0.0, {1.0}, {0.0}, 1.0}, {0.0, {0.0}, {1.0}, 1.0}, {}, {}}),
                     ParamVectorField::fourier({{}, {}, {}, {0.0, {1.0}, {0.0}, 2.0}, {0.0, {0.0}, {1.0}, 2.0}})};
         fc.interval = {0.0, 2 * pi};
         return fc;
       }},
      {"helix_product_r4", "helix tangent developable times the e4 line in R^4 (m = 3, degree 1, tangent)",
       {{"a", half_sqrt2}, {"b", half_sqrt2}},
       [](const Params& p) {
         const double a = param(p, "a"), b = param(p, "b");
         return product_with_constant_directions(tangent_developable(helix(a, b), {0.0, 2 * pi * std::hypot(a, b)}),
                                                 1);
       }},
      {"rotating_frame_cylinder", "3-flat in R^4 swept by a frame rotating inside a fixed plane (degree 0)", {},
       [](const Params&) {
         FramedCurve fc;
         fc.dim = 4;
         fc.m = 3;
         fc.directrix = embed(line(), 4);
         fc.frame = {ParamVectorField::fourier({{}, {0.0, {1.0}, {0.0}, 1.0}, {0.0, {0.0}, {1.0}, 1.0}, {}}),
                     ParamVectorField::fourier({{}, {0.0, {0.0}, {-1.0}, 1.0}, {0.0, {1.0}, {0.0}, 1.0}, {}})};
         fc.interval = {0.0, 2 * pi};
         return fc;
       }},
      {"spliced_rotation", "plane for t <= 0 spliced to a helicoid-like sweep for t > 0 (degree 0 then 1)", {},
       [](const Params&) {
         FramedCurve fc;
         fc.dim = 3;
         fc.m = 2;
         fc.directrix = helicoid_axis();
         fc.frame = {spliced_rotation()};
         fc.interval = {-1.0, 1.0};
         return fc;
       }},
  };
  return families;
}

inline const PatchFamily& find_patch_family(const std::string& name) {
  for (const auto& f : patch_families())
    if (f.name == name) return f;
  fail(ErrorKind::config, "unknown builtin patch '" + name + "'");
}

inline FramedCurve make_patch(const std::string& name, const Params& params = {}) {
  const auto& f = find_patch_family(name);
  return f.make(resolve_params(name, f.defaults, params));
}

}  // namespace builtin
}  // namespace ruled

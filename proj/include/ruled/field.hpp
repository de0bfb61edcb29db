#pragma once

// Vector fields along a curve parameter t, with exact derivatives.
//
// Closed-form fields (polynomial, Fourier, constant, named builtin families) are
// evaluated from per-coordinate series of the form
//     sum_k p_k t^k + sum_j (a_j cos(w_j t) + b_j sin(w_j t)),
// which differentiate to series of the same form. Sampled fields (splines, transported
// or re-parametrized frames) differentiate their interpolants.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ruled/error.hpp"
#include "ruled/multilinear.hpp"
#include "ruled/spline.hpp"

namespace ruled {

enum class FieldKind { polynomial, fourier, builtin, constant };

inline const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::polynomial: return "polynomial";
    case FieldKind::fourier: return "fourier";
    case FieldKind::builtin: return "builtin";
    case FieldKind::constant: return "constant";
  }
  return "unknown";
}

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  [[nodiscard]] double length() const { return hi - lo; }
  [[nodiscard]] bool contains(double t, double slack = 0.0) const {
    return t >= lo - slack && t <= hi + slack;
  }
  [[nodiscard]] static Interval whole_line() { return {}; }
};

/// Slack allowed when checking a parameter against a domain boundary.
inline double domain_slack(double t) { return 1e-9 * (1.0 + std::abs(t)); }

namespace detail {

class FieldRep {
 public:
  virtual ~FieldRep() = default;
  [[nodiscard]] virtual int dim() const = 0;
  [[nodiscard]] virtual Interval domain() const { return Interval::whole_line(); }
  [[nodiscard]] virtual FieldKind kind() const = 0;
  [[nodiscard]] virtual std::string family() const = 0;
  [[nodiscard]] virtual int max_order() const = 0;
  /// True when values between sample nodes come from interpolation, so derivatives above
  /// the first are only piecewise accurate.
  [[nodiscard]] virtual bool interpolated() const { return false; }
  /// order-th derivative, 0 <= order <= max_order(); t already domain-checked.
  [[nodiscard]] virtual AmbientVector derivative(double t, int order) const = 0;
};

}  // namespace detail

/// One trigonometric term a cos(w t) + b sin(w t).
struct TrigTerm {
  double frequency = 0.0;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// Per-coordinate closed form: polynomial part (ascending powers) plus trig terms.
struct CoordinateSeries {
  std::vector<double> poly;
  std::vector<TrigTerm> trig;

  [[nodiscard]] double derivative(double t, int order) const {
    double value = 0.0;
    // Polynomial part, Horner on the differentiated coefficients.
    if (static_cast<int>(poly.size()) > order) {
      for (std::size_t k = poly.size(); k-- > static_cast<std::size_t>(order);) {
        double falling = 1.0;
        for (int q = 0; q < order; ++q) falling *= static_cast<double>(k - static_cast<std::size_t>(q));
        value = value * t + falling * poly[k];
      }
    }
    for (const auto& term : trig) {
      // Each derivative maps (a, b) -> w (b, -a).
      double a = term.cos_coef;
      double b = term.sin_coef;
      for (int q = 0; q < order; ++q) {
        const double na = term.frequency * b;
        const double nb = -term.frequency * a;
        a = na;
        b = nb;
      }
      value += a * std::cos(term.frequency * t) + b * std::sin(term.frequency * t);
    }
    return value;
  }

  [[nodiscard]] bool finite() const {
    for (double p : poly)
      if (!std::isfinite(p)) return false;
    for (const auto& term : trig)
      if (!std::isfinite(term.frequency) || !std::isfinite(term.cos_coef) || !std::isfinite(term.sin_coef))
        return false;
    return true;
  }
};

/// Coefficients of one Fourier coordinate: c0 + sum_k a_k cos(k w t) + b_k sin(k w t).
struct FourierCoordinate {
  double constant = 0.0;
  std::vector<double> cos_coefs;
  std::vector<double> sin_coefs;
  double omega = 1.0;
};

namespace detail {

class SeriesRep final : public FieldRep {
 public:
  SeriesRep(FieldKind kind, std::string family, std::vector<CoordinateSeries> coords)
      : kind_(kind), family_(std::move(family)), coords_(std::move(coords)) {
    if (coords_.empty()) fail(ErrorKind::input, "field must have at least one coordinate");
    for (const auto& c : coords_)
      if (!c.finite()) fail(ErrorKind::input, "field coefficients must be finite");
  }
  [[nodiscard]] int dim() const override { return static_cast<int>(coords_.size()); }
  [[nodiscard]] FieldKind kind() const override { return kind_; }
  [[nodiscard]] std::string family() const override { return family_; }
  [[nodiscard]] int max_order() const override { return 8; }
  [[nodiscard]] AmbientVector derivative(double t, int order) const override {
    AmbientVector out(dim());
    for (int i = 0; i < dim(); ++i) out(i) = coords_[static_cast<std::size_t>(i)].derivative(t, order);
    return out;
  }
  [[nodiscard]] const std::vector<CoordinateSeries>& coords() const { return coords_; }

 private:
  FieldKind kind_;
  std::string family_;
  std::vector<CoordinateSeries> coords_;
};

class SplineRep final : public FieldRep {
 public:
  SplineRep(std::string family, HermiteSpline spline)
      : family_(std::move(family)), spline_(std::move(spline)) {}
  [[nodiscard]] int dim() const override { return spline_.dim(); }
  [[nodiscard]] Interval domain() const override { return {spline_.front(), spline_.back()}; }
  [[nodiscard]] FieldKind kind() const override { return FieldKind::builtin; }
  [[nodiscard]] std::string family() const override { return family_; }
  [[nodiscard]] int max_order() const override { return 3; }
  [[nodiscard]] bool interpolated() const override { return true; }
  [[nodiscard]] AmbientVector derivative(double t, int order) const override {
    return spline_.eval(t, order);
  }

 private:
  std::string family_;
  HermiteSpline spline_;
};

}  // namespace detail

/// A vector field along the curve parameter: immutable, cheap to copy, shareable.
class ParamVectorField {
 public:
  static constexpr int kPublicMaxOrder = 2;

  ParamVectorField() = default;
  explicit ParamVectorField(std::shared_ptr<const detail::FieldRep> rep) : rep_(std::move(rep)) {}

  /// Per-coordinate coefficient lists in ascending powers of t.
  static ParamVectorField polynomial(const std::vector<std::vector<double>>& coeffs) {
    std::vector<CoordinateSeries> coords;
    for (const auto& c : coeffs) coords.push_back({c, {}});
    return ParamVectorField(
        std::make_shared<detail::SeriesRep>(FieldKind::polynomial, "polynomial", std::move(coords)));
  }

  static ParamVectorField fourier(const std::vector<FourierCoordinate>& coeffs) {
    std::vector<CoordinateSeries> coords;
    for (const auto& c : coeffs) {
      if (c.cos_coefs.size() != c.sin_coefs.size())
        fail(ErrorKind::input, "fourier coordinate needs equally many cosine and sine coefficients");
      CoordinateSeries s;
      s.poly = {c.constant};
      for (std::size_t k = 0; k < c.cos_coefs.size(); ++k)
        s.trig.push_back({static_cast<double>(k + 1) * c.omega, c.cos_coefs[k], c.sin_coefs[k]});
      coords.push_back(std::move(s));
    }
    return ParamVectorField(
        std::make_shared<detail::SeriesRep>(FieldKind::fourier, "fourier", std::move(coords)));
  }

  static ParamVectorField constant(const AmbientVector& value) {
    std::vector<CoordinateSeries> coords;
    for (Eigen::Index i = 0; i < value.size(); ++i) coords.push_back({{value(i)}, {}});
    return ParamVectorField(
        std::make_shared<detail::SeriesRep>(FieldKind::constant, "constant", std::move(coords)));
  }

  /// Named closed-form family, stored as a series.
  static ParamVectorField named_series(std::string family, std::vector<CoordinateSeries> coords) {
    return ParamVectorField(
        std::make_shared<detail::SeriesRep>(FieldKind::builtin, std::move(family), std::move(coords)));
  }

  static ParamVectorField spline(std::string family, HermiteSpline spline) {
    return ParamVectorField(std::make_shared<detail::SplineRep>(std::move(family), std::move(spline)));
  }

  [[nodiscard]] bool valid() const noexcept { return rep_ != nullptr; }
  [[nodiscard]] int dim() const { return rep().dim(); }
  [[nodiscard]] Interval domain() const { return rep().domain(); }
  [[nodiscard]] FieldKind kind() const { return rep().kind(); }
  [[nodiscard]] std::string family() const { return rep().family(); }
  [[nodiscard]] int max_order() const { return rep().max_order(); }
  [[nodiscard]] bool interpolated() const { return rep().interpolated(); }
  [[nodiscard]] const detail::FieldRep& rep() const {
    if (!rep_) fail(ErrorKind::input, "use of an empty field");
    return *rep_;
  }
  [[nodiscard]] const std::shared_ptr<const detail::FieldRep>& shared_rep() const noexcept { return rep_; }

  /// Value (order 0) or first/second derivative at t.
  [[nodiscard]] AmbientVector eval(double t, int order = 0) const {
    if (order < 0 || order > kPublicMaxOrder)
      fail(ErrorKind::input, "derivative order must be 0, 1 or 2");
    return derivative(t, order);
  }

  /// Any order the representation supports; used by wrappers that need one order more.
  [[nodiscard]] AmbientVector derivative(double t, int order) const {
    const auto& r = rep();
    if (!std::isfinite(t) || !r.domain().contains(t, domain_slack(t)))
      fail(ErrorKind::domain, "parameter outside the field domain [" + format_number(r.domain().lo) +
                                  ", " + format_number(r.domain().hi) + "]",
           t);
    if (order < 0 || order > r.max_order())
      fail(ErrorKind::input, "derivative order " + std::to_string(order) + " not supported by " + r.family());
    return r.derivative(t, order);
  }

 private:
  std::shared_ptr<const detail::FieldRep> rep_;
};

namespace detail {

/// d/dt of another field.
class DerivativeRep final : public FieldRep {
 public:
  explicit DerivativeRep(ParamVectorField base) : base_(std::move(base)) {
    if (base_.max_order() < 1) fail(ErrorKind::input, "field cannot be differentiated");
  }
  [[nodiscard]] int dim() const override { return base_.dim(); }
  [[nodiscard]] Interval domain() const override { return base_.domain(); }
  [[nodiscard]] FieldKind kind() const override { return FieldKind::builtin; }
  [[nodiscard]] std::string family() const override { return "derivative(" + base_.family() + ")"; }
  [[nodiscard]] int max_order() const override { return base_.max_order() - 1; }
  [[nodiscard]] bool interpolated() const override { return base_.rep().interpolated(); }
  [[nodiscard]] AmbientVector derivative(double t, int order) const override {
    return base_.derivative(t, order + 1);
  }

 private:
  ParamVectorField base_;
};

/// Zero-padding of a field into a higher-dimensional ambient space.
class EmbedRep final : public FieldRep {
 public:
  EmbedRep(ParamVectorField base, int dim) : base_(std::move(base)), dim_(dim) {
    if (dim_ < base_.dim()) fail(ErrorKind::input, "cannot embed into a smaller dimension");
  }
  [[nodiscard]] int dim() const override { return dim_; }
  [[nodiscard]] Interval domain() const override { return base_.domain(); }
  [[nodiscard]] FieldKind kind() const override { return base_.kind(); }
  [[nodiscard]] std::string family() const override { return base_.family(); }
  [[nodiscard]] int max_order() const override { return base_.max_order(); }
  [[nodiscard]] bool interpolated() const override { return base_.rep().interpolated(); }
  [[nodiscard]] AmbientVector derivative(double t, int order) const override {
    AmbientVector out = AmbientVector::Zero(dim_);
    out.head(base_.dim()) = base_.derivative(t, order);
    return out;
  }

 private:
  ParamVectorField base_;
  int dim_;
};

/// sum_k c_k f_k with constant coefficients.
class LinearComboRep final : public FieldRep {
 public:
  LinearComboRep(std::vector<ParamVectorField> terms, std::vector<double> coefs)
      : terms_(std::move(terms)), coefs_(std::move(coefs)) {
    if (terms_.empty() || terms_.size() != coefs_.size())
      fail(ErrorKind::input, "linear combination needs one coefficient per field");
    for (const auto& f : terms_)
      if (f.dim() != terms_.front().dim()) fail(ErrorKind::input, "linear combination of fields of different dimension");
  }
  [[nodiscard]] int dim() const override { return terms_.front().dim(); }
  [[nodiscard]] Interval domain() const override {
    Interval out;
    for (const auto& f : terms_) {
      out.lo = std::max(out.lo, f.domain().lo);
      out.hi = std::min(out.hi, f.domain().hi);
    }
    return out;
  }
  [[nodiscard]] FieldKind kind() const override { return FieldKind::builtin; }
  [[nodiscard]] std::string family() const override { return "combination"; }
  [[nodiscard]] int max_order() const override {
    int order = terms_.front().max_order();
    for (const auto& f : terms_) order = std::min(order, f.max_order());
    return order;
  }
  [[nodiscard]] bool interpolated() const override {
    return std::any_of(terms_.begin(), terms_.end(), [](const ParamVectorField& f) { return f.interpolated(); });
  }
  [[nodiscard]] AmbientVector derivative(double t, int order) const override {
    AmbientVector out = AmbientVector::Zero(dim());
    for (std::size_t k = 0; k < terms_.size(); ++k)
      if (coefs_[k] != 0.0) out += coefs_[k] * terms_[k].derivative(t, order);
    return out;
  }

 private:
  std::vector<ParamVectorField> terms_;
  std::vector<double> coefs_;
};

}  // namespace detail

inline ParamVectorField linear_combination(std::vector<ParamVectorField> terms, std::vector<double> coefs) {
  return ParamVectorField(std::make_shared<detail::LinearComboRep>(std::move(terms), std::move(coefs)));
}

inline ParamVectorField derivative_field(const ParamVectorField& f) {
  return ParamVectorField(std::make_shared<detail::DerivativeRep>(f));
}

inline ParamVectorField embed(const ParamVectorField& f, int dim) {
  if (dim == f.dim()) return f;
  return ParamVectorField(std::make_shared<detail::EmbedRep>(f, dim));
}

}  // namespace ruled

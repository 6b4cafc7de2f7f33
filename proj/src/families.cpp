#include "intervalkit/families.hpp"

#include <cmath>
#include <set>

namespace intervalkit {

namespace {

// Parameter bag with defaulting and strict unknown-key rejection.
class Params {
 public:
  Params(std::string family, const std::map<std::string, double>& values)
      : family_(std::move(family)), values_(values) {}

  double take(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  void require(bool condition, const std::string& what) const {
    if (!condition) {
      fail(ErrorCode::invalid_params, family_ + ": " + what);
    }
  }

  std::map<std::string, double> finish() const {
    for (const auto& [key, value] : values_) {
      (void)value;
      if (!used_.count(key)) {
        fail(ErrorCode::invalid_params,
             family_ + ": unknown parameter '" + key + "'");
      }
    }
    std::map<std::string, double> resolved;
    for (const std::string& key : used_) {
      auto it = values_.find(key);
      resolved[key] = it == values_.end() ? defaults_.at(key) : it->second;
    }
    return resolved;
  }

  void record_default(const std::string& key, double value) {
    defaults_[key] = value;
  }

 private:
  std::string family_;
  std::map<std::string, double> values_;
  std::map<std::string, double> defaults_;
  std::set<std::string> used_;
};

// take + record in one go so finish() can echo resolved values.
double param(Params& p, const std::string& key, double fallback) {
  double v = p.take(key, fallback);
  p.record_default(key, fallback);
  return v;
}

RealFn constant(double v) {
  return [v](Real) -> Real { return v; };
}

// coef * u^e with the 0 * inf corner (integer orders at u = 0) mapped to 0.
Real powc(Real coef, Real u, Real e) {
  return coef == 0.0L ? 0.0L : coef * std::pow(u, e);
}

// Monotone power piece anchored at the critical end `c`:
//   anchored right (domain [x0, c]):  f(x) = vc - K (c-x)^l, increasing
//   anchored left  (domain [c, x1]):  f(x) = vc + K (x-c)^l, sign of K sets
//                                     the orientation
Branch power_branch_left_of(double x0, double c, double l, double v0,
                            double vc) {
  const Real kk = (static_cast<Real>(vc) - v0) /
                  std::pow(static_cast<Real>(c) - x0, static_cast<Real>(l));
  const Real cr = c, lr = l, vcr = vc;
  Branch b;
  b.domain = {x0, c};
  b.orientation = kk > 0 ? Orientation::increasing : Orientation::decreasing;
  b.f = [=](Real x) { return vcr - kk * std::pow(cr - x, lr); };
  b.df1 = [=](Real x) { return powc(kk * lr, cr - x, lr - 1.0L); };
  b.df2 = [=](Real x) { return powc(-kk * lr * (lr - 1.0L), cr - x, lr - 2.0L); };
  b.df3 = [=](Real x) {
    return powc(kk * lr * (lr - 1.0L) * (lr - 2.0L), cr - x, lr - 3.0L);
  };
  b.left_value = v0;
  b.right_value = vc;
  return b;
}

Branch power_branch_right_of(double c, double x1, double l, double vc,
                             double v1) {
  const Real kk = (static_cast<Real>(v1) - vc) /
                  std::pow(static_cast<Real>(x1) - c, static_cast<Real>(l));
  const Real cr = c, lr = l, vcr = vc;
  Branch b;
  b.domain = {c, x1};
  b.orientation = kk > 0 ? Orientation::increasing : Orientation::decreasing;
  b.f = [=](Real x) { return vcr + kk * std::pow(x - cr, lr); };
  b.df1 = [=](Real x) { return powc(kk * lr, x - cr, lr - 1.0L); };
  b.df2 = [=](Real x) { return powc(kk * lr * (lr - 1.0L), x - cr, lr - 2.0L); };
  b.df3 = [=](Real x) {
    return powc(kk * lr * (lr - 1.0L) * (lr - 2.0L), x - cr, lr - 3.0L);
  };
  b.left_value = vc;
  b.right_value = v1;
  return b;
}

Branch affine_branch(double lo, double hi, double slope, double offset) {
  const Real s = slope, o = offset;
  Branch b;
  b.domain = {lo, hi};
  b.orientation =
      slope >= 0 ? Orientation::increasing : Orientation::decreasing;
  b.f = [=](Real x) { return s * x + o; };
  b.df1 = constant(slope);
  b.df2 = constant(0.0);
  b.df3 = constant(0.0);
  b.left_value = s * lo + o;
  b.right_value = s * hi + o;
  return b;
}

MapSpec make_doubling(Params& p) {
  auto resolved = p.finish();
  Branch left = affine_branch(0.0, 0.5, 2.0, 0.0);
  Branch right = affine_branch(0.5, 1.0, 2.0, -1.0);
  CriticalPoint c{0.5, 1.0, 1.0, 1.0, 0.0};
  return MapSpec("doubling", resolved, {left, right}, {c});
}

MapSpec make_tent(Params& p) {
  double s = param(p, "slope", 2.0);
  p.require(s > 0.0 && s <= 2.0, "slope must be in (0, 2]");
  auto resolved = p.finish();
  Branch left = affine_branch(0.0, 0.5, s, 0.0);
  Branch right = affine_branch(0.5, 1.0, -s, s);
  double top = s * 0.5;
  CriticalPoint c{0.5, 1.0, 1.0, top, top};
  return MapSpec("tent", resolved, {left, right}, {c});
}

MapSpec make_logistic(Params& p) {
  double mu = param(p, "mu", 4.0);
  p.require(mu > 0.0 && mu <= 4.0, "mu must be in (0, 4]");
  auto resolved = p.finish();
  const Real mur = mu;
  auto f = [mur](Real x) -> Real { return mur * x * (1.0L - x); };
  auto d1 = [mur](Real x) -> Real { return mur * (1.0L - 2.0L * x); };
  Branch left{{0.0, 0.5}, Orientation::increasing, f, d1, constant(-2.0 * mu),
              constant(0.0),   0.0,                mu * 0.25};
  Branch right{{0.5, 1.0}, Orientation::decreasing, f, d1, constant(-2.0 * mu),
               constant(0.0),  mu * 0.25,           0.0};
  CriticalPoint c{0.5, 2.0, 2.0, mu * 0.25, mu * 0.25};
  return MapSpec("logistic", resolved, {left, right}, {c});
}

MapSpec make_asymmetric_unimodal(Params& p) {
  double c = param(p, "c", 0.5);
  double ll = param(p, "l_left", 2.0);
  double lr = param(p, "l_right", 2.5);
  double peak = param(p, "peak", 1.0);
  double f0 = param(p, "f0", 0.0);
  double f1 = param(p, "f1", 0.0);
  p.require(c > 0.0 && c < 1.0, "c must be in (0, 1)");
  p.require(ll >= 1.0 && lr >= 1.0, "one-sided orders must be >= 1");
  p.require(peak > 0.0 && peak <= 1.0, "peak must be in (0, 1]");
  p.require(f0 >= 0.0 && f0 < peak, "f0 must be in [0, peak)");
  p.require(f1 >= 0.0 && f1 < peak, "f1 must be in [0, peak)");
  auto resolved = p.finish();
  Branch left = power_branch_left_of(0.0, c, ll, f0, peak);
  Branch right = power_branch_right_of(c, 1.0, lr, peak, f1);
  CriticalPoint cp{c, ll, lr, peak, peak};
  return MapSpec("asymmetric_unimodal", resolved, {left, right}, {cp});
}

MapSpec make_lorenz_affine(Params& p) {
  double c = param(p, "c", 0.5);
  double f0 = param(p, "f0", 0.3);
  double fcl = param(p, "fc_left", 1.0);
  double fcr = param(p, "fc_right", 0.0);
  double f1 = param(p, "f1", 0.7);
  p.require(c > 0.0 && c < 1.0, "c must be in (0, 1)");
  p.require(f0 >= 0.0 && fcl <= 1.0 && f0 < fcl,
            "left branch needs 0 <= f0 < fc_left <= 1");
  p.require(fcr >= 0.0 && f1 <= 1.0 && fcr < f1,
            "right branch needs 0 <= fc_right < f1 <= 1");
  auto resolved = p.finish();
  double sl = (fcl - f0) / c;
  double sr = (f1 - fcr) / (1.0 - c);
  Branch left = affine_branch(0.0, c, sl, f0);
  Branch right = affine_branch(c, 1.0, sr, fcr - sr * c);
  CriticalPoint cp{c, 1.0, 1.0, fcl, fcr};
  return MapSpec("lorenz_affine", resolved, {left, right}, {cp});
}

MapSpec make_lorenz_power(Params& p) {
  double c = param(p, "c", 0.5);
  double ll = param(p, "l_left", 1.5);
  double lr = param(p, "l_right", 2.5);
  double f0 = param(p, "f0", 0.25);
  double f1 = param(p, "f1", 0.75);
  double fcl = param(p, "fc_left", 1.0);
  double fcr = param(p, "fc_right", 0.0);
  p.require(c > 0.0 && c < 1.0, "c must be in (0, 1)");
  p.require(ll >= 1.0 && lr >= 1.0, "one-sided orders must be >= 1");
  p.require(f0 >= 0.0 && fcl <= 1.0 && f0 < fcl,
            "left branch needs 0 <= f0 < fc_left <= 1");
  p.require(fcr >= 0.0 && f1 <= 1.0 && fcr < f1,
            "right branch needs 0 <= fc_right < f1 <= 1");
  auto resolved = p.finish();
  Branch left = power_branch_left_of(0.0, c, ll, f0, fcl);
  Branch right = power_branch_right_of(c, 1.0, lr, fcr, f1);
  CriticalPoint cp{c, ll, lr, fcl, fcr};
  return MapSpec("lorenz_power", resolved, {left, right}, {cp});
}

MapSpec make_gap_affine(Params& p) {
  double c = param(p, "c", 0.5);
  double s = param(p, "slope", 0.4);
  double ol = param(p, "offset_left", 0.3);
  double orr = param(p, "offset_right", 0.35);
  p.require(c > 0.0 && c < 1.0, "c must be in (0, 1)");
  p.require(s > 0.0, "slope must be positive");
  p.require(ol >= 0.0 && ol + s * c <= 1.0, "left branch leaves [0,1]");
  p.require(orr + s * c >= 0.0 && orr + s <= 1.0, "right branch leaves [0,1]");
  p.require(ol <= orr, "offsets must leave a gap (offset_left <= offset_right)");
  auto resolved = p.finish();
  Branch left = affine_branch(0.0, c, s, ol);
  Branch right = affine_branch(c, 1.0, s, orr);
  CriticalPoint cp{c, 1.0, 1.0, static_cast<double>(left.right_value),
                   static_cast<double>(right.left_value)};
  return MapSpec("gap_affine", resolved, {left, right}, {cp});
}

}  // namespace

MapSpec make_builtin(const std::string& family,
                     const std::map<std::string, double>& params) {
  Params p(family, params);
  if (family == "doubling") return make_doubling(p);
  if (family == "tent") return make_tent(p);
  if (family == "logistic") return make_logistic(p);
  if (family == "asymmetric_unimodal") return make_asymmetric_unimodal(p);
  if (family == "lorenz_affine") return make_lorenz_affine(p);
  if (family == "lorenz_power") return make_lorenz_power(p);
  if (family == "gap_affine") return make_gap_affine(p);
  fail(ErrorCode::unknown_family, "unknown map family '" + family + "'");
}

std::vector<std::string> builtin_families() {
  return {"doubling",      "tent",         "logistic",
          "asymmetric_unimodal", "lorenz_affine", "lorenz_power",
          "gap_affine"};
}

}  // namespace intervalkit

#include "intervalkit/ulam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "intervalkit/preimage.hpp"

namespace intervalkit {

namespace {

constexpr double kRowSumTol = 1e-10;

double l1_distance(const std::vector<double>& a, const std::vector<double>& b,
                   double bin_width) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d * bin_width;
}

}  // namespace

Partition::Partition(int bins) : bins_(bins) {
  if (bins < 1) fail(ErrorCode::invalid_argument, "partition needs >= 1 bin");
  edges_.reserve(bins + 1);
  for (int i = 0; i <= bins; ++i) {
    edges_.push_back(static_cast<double>(i) / bins);
  }
}

int Partition::locate(Real x) const {
  int i = static_cast<int>(x * bins_);
  i = std::clamp(i, 0, bins_ - 1);
  while (i > 0 && x < edges_[i]) --i;
  while (i + 1 < bins_ && x >= edges_[i + 1]) ++i;
  return i;
}

std::vector<double> UlamOperator::apply(const std::vector<double>& density) const {
  int k = bins();
  if (static_cast<int>(density.size()) != k) {
    fail(ErrorCode::invalid_argument, "density size does not match operator");
  }
  std::vector<double> out(k, 0.0);
  for (int i = 0; i < k; ++i) {
    double di = density[i];
    if (di == 0.0) continue;
    for (int idx = row_ptr_[i]; idx < row_ptr_[i + 1]; ++idx) {
      out[cols_[idx]] += di * vals_[idx];
    }
  }
  return out;
}

double UlamOperator::entry(int row, int col) const {
  for (int idx = row_ptr_[row]; idx < row_ptr_[row + 1]; ++idx) {
    if (cols_[idx] == col) return vals_[idx];
  }
  return 0.0;
}

double UlamOperator::row_sum(int row) const {
  double s = 0.0;
  for (int idx = row_ptr_[row]; idx < row_ptr_[row + 1]; ++idx) {
    s += vals_[idx];
  }
  return s;
}

std::string UlamOperator::to_triplets() const {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < bins(); ++i) {
    for (int idx = row_ptr_[i]; idx < row_ptr_[i + 1]; ++idx) {
      os << i << ' ' << cols_[idx] << ' ' << vals_[idx] << '\n';
    }
  }
  return os.str();
}

UlamOperator build_ulam(const MapSpec& map, int bins) {
  if (bins < 16) fail(ErrorCode::invalid_argument, "Ulam needs k >= 16");
  Partition part(bins);
  std::vector<std::vector<std::pair<int, double>>> rows(bins);

  for (int j = 0; j < bins; ++j) {
    IntervalSet target = IntervalSet::from_sorted({part.bin(j)});
    IntervalSet pre = one_step_preimage(map, target);
    for (const Interval& comp : pre.parts()) {
      int i0 = part.locate(comp.lo);
      int i1 = part.locate(comp.hi);
      for (int i = i0; i <= i1; ++i) {
        Real lo = std::max(comp.lo, static_cast<Real>(part.edges()[i]));
        Real hi = std::min(comp.hi, static_cast<Real>(part.edges()[i + 1]));
        Real len = hi - lo;
        if (len > 0.0) {
          rows[i].emplace_back(j, static_cast<double>(len * bins));
        }
      }
    }
  }

  UlamOperator op(part);
  op.row_ptr_.assign(bins + 1, 0);
  std::size_t nnz = 0;
  for (auto& row : rows) nnz += row.size();
  op.cols_.reserve(nnz);
  op.vals_.reserve(nnz);

  for (int i = 0; i < bins; ++i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end());
    // merge duplicate columns (several preimage components in one bin)
    std::vector<std::pair<int, double>> merged;
    for (const auto& [col, val] : row) {
      if (!merged.empty() && merged.back().first == col) {
        merged.back().second += val;
      } else {
        merged.emplace_back(col, val);
      }
    }
    double sum = 0.0;
    for (const auto& [col, val] : merged) {
      (void)col;
      sum += val;
    }
    op.max_row_dev_ = std::max(op.max_row_dev_, std::abs(sum - 1.0));
    if (std::abs(sum - 1.0) > kRowSumTol && sum > 0.0) {
      for (auto& [col, val] : merged) {
        (void)col;
        val /= sum;
      }
      op.renormalized_rows_.push_back(i);
    }
    for (const auto& [col, val] : merged) {
      op.cols_.push_back(col);
      op.vals_.push_back(val);
    }
    op.row_ptr_[i + 1] = static_cast<int>(op.cols_.size());
  }
  return op;
}

double Density::integral() const {
  double s = std::accumulate(values.begin(), values.end(), 0.0);
  return s * partition.width();
}

Density uniform_density(int bins) {
  Density d{Partition(bins), std::vector<double>(bins, 1.0), true, 0.0, 0,
            "constant"};
  return d;
}

Density stationary_density(const UlamOperator& op, int max_iters, double tol) {
  return stationary_density_from(op, std::vector<double>(op.bins(), 1.0),
                                 max_iters, tol);
}

Density stationary_density_from(const UlamOperator& op,
                                std::vector<double> start, int max_iters,
                                double tol) {
  if (max_iters < 1) fail(ErrorCode::invalid_argument, "max_iters must be >= 1");
  if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "tol must be positive");
  if (static_cast<int>(start.size()) != op.bins()) {
    fail(ErrorCode::invalid_argument, "start density size mismatch");
  }

  const int k = op.bins();
  const double w = 1.0 / k;
  std::vector<double> d = std::move(start);
  std::vector<double> cesaro_sum(d);
  std::vector<double> avg(d);

  Density out{op.partition(), {}, false, 0.0, 0, "max-iters"};
  double last_rpow = std::numeric_limits<double>::infinity();
  double last_rces = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= max_iters; ++it) {
    std::vector<double> next = op.apply(d);
    last_rpow = l1_distance(next, d, w);
    d = std::move(next);
    double rces = 0.0;
    double inv = 1.0 / (it + 1);
    for (int i = 0; i < k; ++i) {
      cesaro_sum[i] += d[i];
      double a = cesaro_sum[i] * inv;
      rces += std::abs(a - avg[i]);
      avg[i] = a;
    }
    last_rces = rces * w;
    out.iterations = it;
    if (last_rpow < tol) {
      // The raw iterate is a fixed point; it equals the Cesaro limit.
      out.values = d;
      out.converged = true;
      out.residual = last_rpow;
      out.stop_rule = "power-fixed-point";
      break;
    }
    if (last_rces < tol) {
      out.values = avg;
      out.converged = true;
      out.residual = last_rces;
      out.stop_rule = "cesaro-cauchy";
      break;
    }
  }
  if (!out.converged) {
    out.values = avg;
    out.residual = std::min(last_rpow, last_rces);
  }
  double integral = 0.0;
  for (double v : out.values) integral += v;
  integral *= w;
  if (integral > 0.0) {
    for (double& v : out.values) v /= integral;
  }
  return out;
}

double lp_norm(const Density& density, double p) {
  if (!(p >= 1.0)) fail(ErrorCode::invalid_argument, "lp_norm needs p >= 1");
  double s = 0.0;
  for (double v : density.values) s += std::pow(v, p);
  return std::pow(s * density.partition.width(), 1.0 / p);
}

LpReport lp_regularity_check(const MapSpec& map,
                             const std::vector<double>& p_grid,
                             const std::vector<int>& k_grid, int max_iters,
                             double tol) {
  if (p_grid.empty() || k_grid.size() < 2) {
    fail(ErrorCode::invalid_argument,
         "need at least one p and two partition sizes");
  }
  for (std::size_t i = 1; i < k_grid.size(); ++i) {
    if (k_grid[i] <= k_grid[i - 1]) {
      fail(ErrorCode::invalid_argument, "k grid must be increasing");
    }
  }
  for (double p : p_grid) {
    if (!(p >= 1.0)) fail(ErrorCode::invalid_argument, "p must be >= 1");
  }

  LpReport report;
  report.max_iters = max_iters;
  report.tol = tol;
  double lm = map.l_max();
  report.threshold_p = lm > 1.0 ? lm / (lm - 1.0)
                                : std::numeric_limits<double>::infinity();

  std::vector<Density> densities;
  densities.reserve(k_grid.size());
  for (int k : k_grid) {
    UlamOperator op = build_ulam(map, k);
    densities.push_back(stationary_density(op, max_iters, tol));
  }

  for (double p : p_grid) {
    std::vector<double> powers;  // ∫ d^p per refinement
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
      double norm = lp_norm(densities[i], p);
      report.cells.push_back({p, k_grid[i], norm});
      powers.push_back(std::pow(norm, p));
    }
    // The norm itself creeps too slowly at the critical exponent; the ratio
    // test runs on ∫ d^p, which separates log-divergence from stabilization.
    double max_ratio = 0.0;
    for (std::size_t i = 1; i < powers.size(); ++i) {
      max_ratio = std::max(max_ratio, powers[i] / powers[i - 1]);
    }
    report.verdicts.push_back({p, max_ratio < 1.1, max_ratio});
  }
  return report;
}

double invariance_residual(const MapSpec& map, const Density& density,
                           int test_fns) {
  if (test_fns < 1) fail(ErrorCode::invalid_argument, "need test_fns >= 1");
  if (std::abs(density.integral() - 1.0) > 1e-6) {
    fail(ErrorCode::invalid_argument, "density must be normalized");
  }
  const int k = density.partition.bins();
  const int m = 4 * k;  // partition refined 4x
  const double h = 1.0 / m;

  std::vector<double> xs(m), fxs(m), ws(m);
  for (int q = 0; q < m; ++q) {
    double x = (q + 0.5) * h;
    xs[q] = x;
    // one-sided evaluation at the critical set
    fxs[q] = map.critical_at(x) ? map.eval(x, Side::left) : map.eval(x);
    ws[q] = density.values[q / 4] * h;
  }

  const double two_pi = 2.0 * std::acos(-1.0);
  double worst = 0.0;
  for (int fn = 0; fn < test_fns; ++fn) {
    double lhs = 0.0, rhs = 0.0;
    for (int q = 0; q < m; ++q) {
      lhs += ws[q] * std::cos(two_pi * fn * fxs[q]);
      rhs += ws[q] * std::cos(two_pi * fn * xs[q]);
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace intervalkit

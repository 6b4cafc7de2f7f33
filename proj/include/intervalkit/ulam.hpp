#pragma once

#include <string>
#include <vector>

#include "intervalkit/map.hpp"

namespace intervalkit {

/// Uniform partition of [0,1] into k bins.
class Partition {
 public:
  explicit Partition(int bins);

  int bins() const { return bins_; }
  double width() const { return 1.0 / bins_; }
  const std::vector<double>& edges() const { return edges_; }
  Interval bin(int i) const { return {edges_[i], edges_[i + 1]}; }
  double midpoint(int i) const { return (edges_[i] + edges_[i + 1]) * 0.5; }
  int locate(Real x) const;  // clamped to [0, bins-1]

 private:
  int bins_ = 0;
  std::vector<double> edges_;
};

/// Row-stochastic Ulam discretization of the Frobenius-Perron operator:
/// entry(i,j) = |I_i ∩ f^-1(I_j)| / |I_i|, stored CSR by row.
class UlamOperator {
 public:
  const Partition& partition() const { return partition_; }
  int bins() const { return partition_.bins(); }
  int nonzeros() const { return static_cast<int>(vals_.size()); }

  // Adjoint action on piecewise-constant densities: out = d^T P.
  std::vector<double> apply(const std::vector<double>& density) const;

  double entry(int row, int col) const;
  double row_sum(int row) const;

  // Rows whose raw sum deviated from 1 by more than 1e-10 and were rescaled.
  const std::vector<int>& renormalized_rows() const { return renormalized_rows_; }
  double max_raw_row_sum_deviation() const { return max_row_dev_; }

  // Coordinate triplet text, one "row col value" line per nonzero.
  std::string to_triplets() const;

  friend UlamOperator build_ulam(const MapSpec& map, int bins);

 private:
  explicit UlamOperator(Partition p) : partition_(p) {}

  Partition partition_;
  std::vector<int> row_ptr_;
  std::vector<int> cols_;
  std::vector<double> vals_;
  std::vector<int> renormalized_rows_;
  double max_row_dev_ = 0.0;
};

// Entries computed exactly from one-step preimages of each bin intersected
// with the partition; no Monte Carlo. k >= 16 required.
UlamOperator build_ulam(const MapSpec& map, int bins);

/// Piecewise-constant probability density over a partition.
struct Density {
  Partition partition;
  std::vector<double> values;
  bool converged = false;
  double residual = 0.0;
  int iterations = 0;
  std::string stop_rule;  // power-fixed-point | cesaro-cauchy | max-iters

  double integral() const;
};

Density uniform_density(int bins);

// Cesaro-averaged power iteration from the constant density 1. Stops when
// successive Cesaro averages are L1-Cauchy below tol, or earlier when the raw
// power iterate itself is (it is then a fixed point and equals the Cesaro
// limit). Hitting max_iters flags the result as not converged. The returned
// density is renormalized to integral 1.
Density stationary_density(const UlamOperator& op, int max_iters, double tol);

// Same iteration from an arbitrary nonnegative starting density; used to
// probe for multiple fixed points of reducible operators.
Density stationary_density_from(const UlamOperator& op,
                                std::vector<double> start, int max_iters,
                                double tol);

// (sum values[i]^p |I_i|)^{1/p}, p >= 1.
double lp_norm(const Density& density, double p);

struct LpCell {
  double p = 0.0;
  int bins = 0;
  double norm = 0.0;
};

struct LpVerdict {
  double p = 0.0;
  bool bounded = false;
  double max_power_ratio = 0.0;  // max ratio of successive ∫d^p under refinement
};

struct LpReport {
  std::vector<LpCell> cells;
  std::vector<LpVerdict> verdicts;
  double threshold_p = 0.0;  // l_max/(l_max-1); +inf when l_max == 1
  int max_iters = 0;
  double tol = 0.0;
};

// Records lp norms across refinements k_grid for each p. A p is `bounded`
// when ∫d^p stabilizes: every successive-refinement ratio stays below 1.1.
LpReport lp_regularity_check(const MapSpec& map,
                             const std::vector<double>& p_grid,
                             const std::vector<int>& k_grid,
                             int max_iters = 20000, double tol = 1e-10);

// max over g_m(x) = cos(2 pi m x), m = 0..test_fns-1, of
// |∫ g(f(x)) dmu - ∫ g dmu| with midpoint quadrature on the partition
// refined 4x and one-sided evaluation at the critical set.
double invariance_residual(const MapSpec& map, const Density& density,
                           int test_fns);

}  // namespace intervalkit

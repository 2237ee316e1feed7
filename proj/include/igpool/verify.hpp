#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace igpool {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;  // worst observed value
  double bound = 0.0;     // threshold it was compared against
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool passed() const;
};

/// Information-gain equivalence battery: the sparse matrix route against
/// the dense per-node loop on `graphs` random graphs (n <= 30, d <= 8,
/// k in {1, 2}); also re-checks the hop-transition row-sum invariant.
SuiteReport run_oracle_suite(int graphs = 500, std::uint64_t seed = 20240901);

/// Relabeling-invariance battery over `pairs` random (graph, permutation)
/// pairs with enforced distinct gains: gain equivariance, selection
/// correspondence, coarse-graph isomorphism and coarsening-matrix shape,
/// under both pooling modes.
SuiteReport run_props_suite(int pairs = 200, std::uint64_t seed = 20240902);

/// Monte-Carlo entropy relation on the (dim, scale) grid
/// {1,4,16} x {0.25,0.5,2} at `samples` draws per point.
SuiteReport run_entropy_suite(long samples = 100000, std::uint64_t seed = 42);

/// Analytic versus central-difference gradients for a plain-1 model and a
/// pooled-2 model (frozen node choices) on an 8-node random graph.
SuiteReport run_gradients_suite(std::uint64_t seed = 20240904);

/// Selection invariance under positive feature scaling (c in
/// {0.1, 3, 1000}) over `graphs` random graphs, both pooling modes.
SuiteReport run_scaling_suite(int graphs = 100, std::uint64_t seed = 20240905);

/// One line per check: name, pass/fail, measured value and bound.
void print_report(const SuiteReport& report, std::ostream& out);

}  // namespace igpool

#pragma once

// Word-metric growth of finitely generated groups, comparison volumes and
// the nonexistence thresholds derived from them.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace collarext {

/// Flat integer encoding of a group element in the model's normal form.
using Element = std::vector<std::int64_t>;

enum class GroupKind { free, abelian, heisenberg, direct_product, free_product };

/// A finitely generated group with a canonical symmetric generating set and
/// a unique normal form per element:
///   free(N)        reduced words, letters +-1..+-N (inverse pairs)
///   abelian(m)     Z^m as integer vectors, generators +-e_i
///   heisenberg     triples (a, b, c) with
///                  (a,b,c)(a',b',c') = (a+a', b+b'+c a', c+c'),
///                  generators +-(1,0,0), +-(0,0,1)
///   direct_product union of the factors' generators; element = per-factor
///                  normal forms, each prefixed by its length
///   free_product   alternating syllables (factor, length, normal form) with
///                  no identity syllables and no two neighbours from the same factor
class GroupModel {
 public:
  static GroupModel free(int N);
  static GroupModel abelian(int m);
  static GroupModel heisenberg();
  static GroupModel direct_product(std::vector<GroupModel> factors);
  static GroupModel free_product(std::vector<GroupModel> factors);
  /// Parses "free(2)", "Zm(3)", "heisenberg", "product(G, H)",
  /// "freeprod(G, H)"; throws UsageError.
  static GroupModel parse(const std::string& text);

  GroupKind kind() const { return kind_; }
  std::string name() const;
  /// Human-readable description of the generating set.
  std::string generators() const;
  /// Size of the symmetric generating set.
  int generator_count() const;
  Element identity() const;
  /// Normal form of e * s_gen, gen in [0, generator_count()).
  Element times_generator(const Element& e, int gen) const;
  /// Generator index of the inverse of generator `gen`.
  int inverse_generator(int gen) const;

 private:
  GroupKind kind_ = GroupKind::abelian;
  int param_ = 0;
  std::vector<GroupModel> factors_;
};

struct GrowthData {
  std::vector<std::uint64_t> counts;  // |B_R| for R = 0..R_reached
  std::string group;
  std::string generators;
  bool partial = false;  // stopped early by the memory budget
};

/// Exact ball sizes by breadth-first enumeration of normal forms, keeping
/// only the two most recent spheres. Stops with partial = true when the next
/// expansion would hold more than `budget` elements.
GrowthData ball_count(const GroupModel& g, int R_max, std::uint64_t budget = 100000000ull);

/// Sphere sizes |B_R| - |B_{R-1}| (with |B_{-1}| = 0).
std::vector<std::uint64_t> sphere_sizes(const GrowthData& d);

struct GrowthOrderFit {
  double degree = 0.0;
  double width = 0.0;  // twice the standard error of the slope
  bool superpolynomial = false;
  double loglog_residual = 0.0;
  double loglinear_residual = 0.0;
};

/// Least-squares slope of log |B_R| against log R over the upper half of
/// the range. Flags superpolynomial growth when log |B_R| is better fitted
/// linearly in R. Needs at least 6 counts.
GrowthOrderFit growth_order_fit(const GrowthData& d);

struct EntropyEstimate {
  double value = 0.0;             // log |B_Rmax| / R_max
  std::vector<double> sequence;   // log |B_R| / R for R = 1..R_max
};

/// Needs at least 4 counts.
EntropyEstimate entropy_estimate(const GrowthData& d);

/// log(2N - 1).
double free_group_entropy(int N);

/// Volume of the radius-R ball in the m-dimensional model space of constant
/// curvature -C^2, omega_{m-1} int_0^R (sinh(C t)/C)^{m-1} dt; a series is
/// used for C R < 1e-4.
double bg_comparison_volume(int m, double C, double R);

/// h / (2 (m-1) diam). No complete extension with Ric >= -(m-1) C^2 exists
/// for C below this value. h = 0 gives 0.
double smg_threshold(int m, double diam, double entropy_h);

/// Smallest integer N with N > 1/2 + e^{2(m-1) delta C} / 2.
std::int64_t tbg_N_threshold(int m, double delta, double C);

struct SvarcMilnorReport {
  std::vector<bool> holds;         // counts[R] <= alpha * volumes[R]
  std::vector<int> failing_radii;  // R where the inequality fails
};

/// volumes[R] is the measure of the lifted ball of radius beta R.
SvarcMilnorReport svarc_milnor_check(const GrowthData& d, const std::vector<double>& volumes,
                                     double alpha, double beta);

/// Maximal polynomial growth order k - h.
int anderson_bound(int k, int h);

}  // namespace collarext

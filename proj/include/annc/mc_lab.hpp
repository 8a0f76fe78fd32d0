#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "annc/rational.hpp"

namespace annc {

// Haar orthogonal matrices: Gaussian matrix, QR, columns rescaled so diag(R) > 0.
class HaarSampler {
 public:
  HaarSampler(int N, std::uint64_t seed);
  Eigen::MatrixXd next();
  int N() const { return N_; }
  std::uint64_t count() const { return count_; }

 private:
  int N_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_;
  std::uint64_t count_ = 0;
};

Eigen::MatrixXd sample_haar(int N, std::uint64_t seed);

// A letter of a trace word: a Haar matrix ('O', 'P') or a fixed matrix (other capitals), ' transposes.
struct MatLetter {
  char name;
  bool transposed = false;
  bool haar() const { return name == 'O' || name == 'P'; }
};
using TraceWord = std::vector<MatLetter>;
TraceWord parse_trace_word(const std::string& text);  // "OAO'B"

using ExactMatrix = std::vector<std::vector<Rational>>;
ExactMatrix exact_identity(int N);
ExactMatrix exact_unit(int N, int i, int j);  // E_ij, 1-based
Eigen::MatrixXd to_double(const ExactMatrix& m);

// scale · ∏ Tr(word)
struct TraceTerm {
  std::vector<TraceWord> words;
  Rational scale = 1;
};
// a linear combination of trace products
struct TraceQuantity {
  std::string name;
  std::vector<TraceTerm> terms;
};
TraceQuantity quantity(const std::string& name, const std::vector<std::string>& words, const Rational& scale = 1);
TraceTerm term(const std::vector<std::string>& words, const Rational& scale = 1);

// E over independent Haar O, P through the orthogonal Weingarten function; at most 5 pairs per Haar letter
Rational exact_expectation(const TraceTerm& t, const std::map<char, ExactMatrix>& fixed, int N);
Rational exact_expectation(const TraceQuantity& q, const std::map<char, ExactMatrix>& fixed, int N);
double evaluate(const TraceQuantity& q, const std::map<char, Eigen::MatrixXd>& matrices);

// running means and covariances (Welford), mergeable
class TraceStatistics {
 public:
  explicit TraceStatistics(std::size_t k = 0);
  void add(const std::vector<double>& x);
  void merge(const TraceStatistics& other);
  std::uint64_t count() const { return n_; }
  double mean(std::size_t i) const { return mean_[i]; }
  double covariance(std::size_t i, std::size_t j) const;  // divisor count − 1
  double standard_error(std::size_t i) const;

 private:
  std::uint64_t n_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;  // row-major k×k co-moments
};

struct Battery {
  std::string name;
  int N = 8;
  std::map<char, ExactMatrix> fixed;
  std::vector<TraceQuantity> quantities;
  bool with_det_sign = false;  // mean of det O, exact value 0
};
Battery haar_basic_battery(int N);  // one pair of Haar entries per quantity
Battery two_vertex_battery(int N);  // two pairs
Battery battery_by_name(const std::string& name, int N);

struct BatteryLine {
  std::string name;
  double exact = 0, estimate = 0, standard_error = 0, z = 0;
};
struct BatteryReport {
  std::string battery;
  int N = 0;
  std::uint64_t samples = 0, seed = 0;
  std::vector<BatteryLine> lines;
  double max_abs_z() const;
  bool ok(double limit = 4) const { return max_abs_z() < limit; }
  std::string to_json() const;
};

// Samples are drawn in fixed chunks with per-chunk seeds, so results do not depend on the thread count.
TraceStatistics simulate(const Battery& b, std::uint64_t samples, std::uint64_t seed, int jobs = 0);
BatteryReport validate_against_exact(const Battery& b, std::uint64_t samples, std::uint64_t seed, int jobs = 0);

double orthogonality_defect(const Eigen::MatrixXd& q);  // ‖QQᵀ − I‖_F

}  // namespace annc

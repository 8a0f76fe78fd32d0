#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "annc/partition.hpp"
#include "annc/premaps.hpp"
#include "annc/rational.hpp"

namespace annc {

// E(tr_π): product over the cycles of FD(π) of tr(X_{c₁}X_{c₂}⋯), with X_{−k} = X_kᵀ.
// A model must be invariant under rotating a cycle and under reversing it with all signs flipped.
using TraceModel = std::function<Rational(const Premap&)>;
using CumulantModel = std::function<Rational(const Premap&)>;

// cycles of FD(π) as signed index words
std::vector<std::vector<int>> trace_words(const Premap& pi);
// rotation/reversal canonical form of the words, sorted; "(1,-2)(3)"
std::string canonical_trace_key(const Premap& pi);

// pseudo-random rational per canonical trace key
TraceModel random_trace_model(unsigned long seed);
// X_k = O D_k Oᵀ with one Haar O and diagonal D_k; traces are deterministic: tr = (1/N)Σ_i ∏ d_{|c|}(i)
TraceModel diagonal_model(std::vector<std::vector<Rational>> diagonals);
// X₁ = ⋯ = X_n = O D Oᵀ
TraceModel spectrum_model(const std::vector<Rational>& diagonal, int copies);

// Matrix and vertex cumulants for fixed N. Values are memoised; not thread-safe.
class MatrixCumulants {
 public:
  MatrixCumulants(TraceModel model, long N);
  // c given directly, no moments available
  static MatrixCumulants from_cumulants(CumulantModel c, long N);

  long N() const { return N_; }
  Rational moment(const Premap& pi) const;  // E(tr_π)
  Rational c(const Premap& rho) const;      // Σ_π N^{χ_ρ(π)−2#Π(ρ)} wg(Π(Kr_ρ(π))) E(tr_π)
  Rational c(const SetPartition& v, const Premap& pi) const;  // ∏_V c_{π|V}
  // K_{(𝒰,π)} = Σ_{Π(π)⪯𝒱⪯𝒰} μ(𝒱,𝒰) c_{(𝒱,π)}
  Rational vertex(const SetPartition& u, const Premap& pi) const;
  Rational vertex(const Premap& pi) const;  // 𝒰 = 1
  // Σ_{Π(π)⪯𝒱⪯𝒰} K_{(𝒱,π)}, with K multiplicative over the blocks of 𝒱
  Rational c_from_vertex(const SetPartition& u, const Premap& pi) const;
  // Σ_ρ N^{χ_π(ρ)−2#Π(π)} c_ρ
  Rational moment_from_cumulants(const Premap& pi) const;

  // classical cumulant of the traces of the cycles of ρ|_V, multiplied over the blocks of 𝒱
  Rational classical(const SetPartition& v, const Premap& rho) const;
  // K_{(𝒰,π)} through classical and Weingarten cumulants, restricted to Π(π)∨𝒱∨𝒲 = 𝒰
  Rational vertex_connected(const SetPartition& u, const Premap& pi) const;

 private:
  MatrixCumulants(long N) : N_(N) {}
  TraceModel model_;
  CumulantModel cfn_;
  long N_;
  mutable std::map<Premap, Rational> moments_, cums_;
};

SetPartition one_block(const Premap& pi);

struct LogGeneratingReport {
  int r = 0;
  Rational from_log, from_mobius;
  bool ok() const { return from_log == from_mobius; }
};
// coefficient of x₁⋯x_r in log(1 + Σ_I c_{π|∪I} x^I) against K_π; r = #Π(π) ≤ 5
LogGeneratingReport log_generating_check(const MatrixCumulants& mc, const Premap& pi);

struct ExpansionReport {
  Rational classical;  // k_m(tr(…),…,tr(…)) from moments
  Rational expansion;  // Σ N^{χ_τ(π)−2#(τ)} K_{(𝒰,π)} with Π(τ)∨𝒰 = 1
  Rational moment;     // E(∏ tr)
  Rational unfiltered; // same sum without the connectivity filter
  bool ok() const { return classical == expansion && moment == unfiltered; }
};
// τ = τ_{r₁,…,r_m} as a premap; r₁+⋯+r_m ≤ 4
ExpansionReport classical_to_vertex_expansion(const MatrixCumulants& mc, const std::vector<int>& r);

// premap of τ_{r₁,…,r_m}⁻¹
Premap tau_inverse_premap(const std::vector<int>& r);

struct SweepPoint {
  long N;
  double value;
};
struct OrderSweep {
  std::vector<int> r;
  std::vector<SweepPoint> points;  // |K_{τ⁻¹}| per N
  double slope = 0;
  double expected = 0;  // 2 − 2m
  bool ok(double tol = 0.25) const;
};
// K_{τ_{r}⁻¹} on the fixture built for each N
OrderSweep asymptotic_order_sweep(const std::function<TraceModel(long)>& family, const std::vector<int>& r,
                                  const std::vector<long>& Ns);

struct LimitEstimate {
  std::vector<std::pair<long, Rational>> scaled;  // N²K per N, exact
  double extrapolated = 0;
};
// Richardson extrapolation in 1/N of N²K_{τ_{p,q}⁻¹}; Ns must double successively
LimitEstimate second_order_limit(const std::function<TraceModel(long)>& family, int p, int q,
                                 const std::vector<long>& Ns);

// eigenvalues {0,1,4} with weights 1/2, 1/4, 1/4; N divisible by 4
std::vector<Rational> three_point_spectrum(long N);
Rational three_point_moment(int r);  // limit tr(Dʳ)

}  // namespace annc

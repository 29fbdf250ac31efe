#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "hgv/binomial.hpp"
#include "hgv/errors.hpp"
#include "hgv/protocol.hpp"
#include "hgv/rng.hpp"
#include "hgv/stabilizer.hpp"

namespace hgv {

inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return derive_seed(master, "trial", trial);
}

/// `trials` independent protocol runs, ordered by trial index regardless of
/// which worker finished first.
inline std::vector<ProtocolReport> run_campaign(const Hypergraph& g, const ProverStrategy& strategy,
                                                const ProtocolParams& params, std::uint64_t trials,
                                                std::uint64_t master_seed, unsigned threads = 1) {
  if (trials == 0) throw InvalidArgument("campaign needs at least one trial");
  std::vector<ProtocolReport> reports(trials);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(trials, 64))));
  if (threads == 1) {
    for (std::uint64_t t = 0; t < trials; ++t)
      reports[t] = run_protocol(g, strategy, params, trial_seed(master_seed, t));
    return reports;
  }

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t t = next++; t < trials; t = next++) {
          try {
            reports[t] = run_protocol(g, strategy, params, trial_seed(master_seed, t));
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return reports;
}

/// Exact acceptance probability for an i.i.d. prover whose per-test pass
/// probabilities are `pass_probs`: prod_i P[Bin(k, p_i) >= K_min,i].
inline double exact_acceptance_probability(const ProtocolParams& params,
                                           std::span<const double> pass_probs) {
  double acc = 1.0;
  for (std::size_t i = 0; i < pass_probs.size(); ++i)
    acc *= binomial_tail_at_least(params.k, pass_probs[i], min_pass_count(params, params.r_values[i]));
  return acc;
}

/// Hoeffding lower bound on honest acceptance: 1 - sum_i exp(-2 eps^2 k / 2^{2 r_i + 2}).
inline double completeness_bound(const ProtocolParams& params) {
  double s = 0.0;
  for (int r : params.r_values)
    s += std::exp(-2.0 * params.epsilon * params.epsilon * static_cast<double>(params.k) /
                  std::ldexp(1.0, 2 * r + 2));
  return 1.0 - s;
}

/// max(n delta/2, max_i exp(-2 (delta - eps)^2 k / 2^{2 r_i + 2})), the
/// bound on P[accept] (1 - F) for an i.i.d. prover at these parameters.
inline double product_form_bound(const ProtocolParams& params) {
  const double d = params.delta - params.epsilon;
  double tail = 0.0;
  for (int r : params.r_values)
    tail = std::max(tail, std::exp(-2.0 * d * d * static_cast<double>(params.k) /
                                   std::ldexp(1.0, 2 * r + 2)));
  return std::max(params.n * params.delta / 2.0, tail);
}

struct FidelityStats {
  std::uint64_t count = 0;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  std::vector<std::uint64_t> histogram;  // 10 equal bins over [0, 1]
};

/// Exact quantities, available for i.i.d. strategies only.
struct ExactAudit {
  std::vector<double> pass_probabilities;
  double fidelity = 0.0;
  double acceptance_probability = 0.0;
  double joint_probability = 0.0;  // P[accept] (1 - F)
};

struct AuditSummary {
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  double acceptance_rate = 0.0;
  FidelityStats accepted_fidelity;
  double low_fidelity_cutoff = 0.0;  // 1 - 1/n
  std::uint64_t accepted_low_fidelity = 0;
  double joint_frequency = 0.0;      // accepted and F_comp < 1 - 1/n
  double accepted_high_fidelity_fraction = 0.0;
  double completeness_bound = 0.0;
  double product_form_bound = 0.0;
  std::optional<double> product_form_estimate;  // acceptance_rate (1 - F)
  std::optional<ExactAudit> exact;
};

inline ExactAudit exact_audit(const Hypergraph& g, const Ensemble& rho, const ProtocolParams& params) {
  ExactAudit ex;
  for (Vertex i = 1; i <= g.n(); ++i) {
    // Closed form via g_i keeps large r affordable; pass_probability() is
    // the enumerated route and is cross-checked against this one in tests.
    ex.pass_probabilities.push_back(
        closed_form_pass_probability(stabilizer_expectation(rho, g, i), params.r_values[i - 1]));
  }
  ex.fidelity = fidelity_with(rho, g);
  ex.acceptance_probability = exact_acceptance_probability(params, ex.pass_probabilities);
  ex.joint_probability = ex.acceptance_probability * (1.0 - ex.fidelity);
  return ex;
}

/// Summarizes runs that share g and params.
inline AuditSummary soundness_audit(const Hypergraph& g, const ProverStrategy& strategy,
                                    std::span<const ProtocolReport> reports) {
  if (reports.empty()) throw InvalidArgument("soundness audit needs at least one report");
  const ProtocolParams& params = reports.front().params;
  AuditSummary s;
  s.trials = reports.size();
  s.low_fidelity_cutoff = 1.0 - 1.0 / g.n();
  s.accepted_fidelity.histogram.assign(10, 0);
  double sum = 0.0;
  for (const ProtocolReport& r : reports) {
    if (!r.accepted) continue;
    ++s.accepted;
    const double f = r.compute_fidelity;
    FidelityStats& fs = s.accepted_fidelity;
    fs.min = fs.count ? std::min(fs.min, f) : f;
    fs.max = fs.count ? std::max(fs.max, f) : f;
    ++fs.count;
    sum += f;
    fs.histogram[std::min<std::size_t>(9, static_cast<std::size_t>(std::max(0.0, f) * 10.0))]++;
    if (f < s.low_fidelity_cutoff) ++s.accepted_low_fidelity;
  }
  const double trials = static_cast<double>(s.trials);
  s.acceptance_rate = static_cast<double>(s.accepted) / trials;
  if (s.accepted_fidelity.count) s.accepted_fidelity.mean = sum / static_cast<double>(s.accepted);
  s.joint_frequency = static_cast<double>(s.accepted_low_fidelity) / trials;
  s.accepted_high_fidelity_fraction =
      s.accepted ? 1.0 - static_cast<double>(s.accepted_low_fidelity) / static_cast<double>(s.accepted)
                 : 0.0;
  s.completeness_bound = completeness_bound(params);
  s.product_form_bound = product_form_bound(params);

  if (auto rho = iid_ensemble(strategy, g); rho && g.n() <= kNoiseEnsembleCap) {
    s.exact = exact_audit(g, *rho, params);
    s.product_form_estimate = s.acceptance_rate * (1.0 - s.exact->fidelity);
  }
  return s;
}

}  // namespace hgv

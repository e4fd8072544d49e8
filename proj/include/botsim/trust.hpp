#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace botsim::trust {

enum class Outcome { Positive, Negative };

enum class TrustModel { Ebay, Beta, SubjectiveLogic, CertainTrust };

inline const char* model_name(TrustModel m) {
  switch (m) {
    case TrustModel::Ebay: return "ebay";
    case TrustModel::Beta: return "beta";
    case TrustModel::SubjectiveLogic: return "sl";
    case TrustModel::CertainTrust: return "ct";
  }
  return "?";
}

// Per-neighbor experience counts. Append-only: counters only ever grow.
struct EvidenceRecord {
  std::uint32_t positive = 0;
  std::uint32_t negative = 0;

  std::uint32_t total() const { return positive + negative; }
  bool operator==(const EvidenceRecord&) const = default;
};

inline EvidenceRecord record_experience(EvidenceRecord ev, Outcome outcome) {
  if (outcome == Outcome::Positive)
    ++ev.positive;
  else
    ++ev.negative;
  return ev;
}

// Subjective-logic opinion triple plus base rate; b + d + u == 1.
struct Opinion {
  double belief = 0.0;
  double disbelief = 0.0;
  double uncertainty = 1.0;
  double base_rate = 0.5;
};

struct TrustParams {
  TrustModel model = TrustModel::Ebay;
  double threshold = -3.0;        // model-specific units
  std::uint32_t min_experiences = 5;
  double base_rate = 0.5;
  std::uint32_t max_evidence_N = 5;  // CertainTrust only
  double initial_f = 0.5;            // CertainTrust only
};

// Model-appropriate default threshold. Ebay is an integer rating; the
// rest are expectations in [0,1].
inline double default_threshold(TrustModel m) {
  switch (m) {
    case TrustModel::Ebay: return -3.0;
    case TrustModel::Beta: return 0.25;
    case TrustModel::SubjectiveLogic: return 0.25;
    case TrustModel::CertainTrust: return 0.15;
  }
  return 0.0;
}

inline TrustParams default_params(TrustModel m) {
  TrustParams p;
  p.model = m;
  p.threshold = default_threshold(m);
  return p;
}

// Cumulative feedback rating: positives minus negatives.
inline std::int64_t ebay_score(const EvidenceRecord& ev) {
  return static_cast<std::int64_t>(ev.positive) -
         static_cast<std::int64_t>(ev.negative);
}

// Posterior mean of a Beta(p+1, n+1) with uniform prior.
inline double beta_expectation(const EvidenceRecord& ev) {
  return (ev.positive + 1.0) / (ev.total() + 2.0);
}

// Standard evidence-to-opinion mapping with prior weight 2.
inline Opinion sl_opinion(const EvidenceRecord& ev, double base_rate) {
  if (base_rate < 0.0 || base_rate > 1.0)
    throw std::invalid_argument("base_rate outside [0,1]");
  const double denom = ev.total() + 2.0;
  Opinion op;
  op.belief = ev.positive / denom;
  op.disbelief = ev.negative / denom;
  op.uncertainty = 2.0 / denom;
  op.base_rate = base_rate;
  return op;
}

inline double sl_expectation(const Opinion& op) {
  return op.belief + op.base_rate * op.uncertainty;
}

// Certainty-weighted blend of observed rate and initial trust f:
// c = min(1, total/N), t = positive/total (f when no evidence).
inline double certain_trust_expectation(const EvidenceRecord& ev,
                                        std::uint32_t N, double f) {
  if (N < 1) throw std::invalid_argument("max_evidence_N must be >= 1");
  if (f < 0.0 || f > 1.0) throw std::invalid_argument("initial_f outside [0,1]");
  const double n = ev.total();
  const double t = n > 0 ? ev.positive / n : f;
  const double c = n / N < 1.0 ? n / N : 1.0;
  return c * t + (1.0 - c) * f;
}

struct TrustVerdict {
  double score = 0.0;
  bool untrusted = false;
};

inline double model_score(const EvidenceRecord& ev, const TrustParams& p) {
  switch (p.model) {
    case TrustModel::Ebay:
      return static_cast<double>(ebay_score(ev));
    case TrustModel::Beta:
      return beta_expectation(ev);
    case TrustModel::SubjectiveLogic:
      return sl_expectation(sl_opinion(ev, p.base_rate));
    case TrustModel::CertainTrust:
      return certain_trust_expectation(ev, p.max_evidence_N, p.initial_f);
  }
  return 0.0;
}

// Blacklisting decision. The min_experiences gate always applies; Ebay
// uses <= on its integer rating, the real-valued models use strict <.
inline TrustVerdict is_untrusted(const EvidenceRecord& ev,
                                 const TrustParams& p) {
  TrustVerdict v;
  v.score = model_score(ev, p);
  if (ev.total() < p.min_experiences) return v;
  if (p.model == TrustModel::Ebay)
    v.untrusted = v.score <= p.threshold;
  else
    v.untrusted = v.score < p.threshold;
  return v;
}

}  // namespace botsim::trust

#pragma once

#include <set>
#include <string>
#include <vector>

#include "harnesslab/errors.hpp"
#include "harnesslab/scalar.hpp"

namespace harnesslab {

/// The five constants (q, eta, theta, sigma, tau) describing a quadratic
/// harness. Immutable after construction; all operations are pure.
template <class T>
struct ParamSet {
  T q{0};
  T eta{0};
  T theta{0};
  T sigma{0};
  T tau{0};

  friend bool operator==(const ParamSet& a, const ParamSet& b) {
    return a.q == b.q && a.eta == b.eta && a.theta == b.theta && a.sigma == b.sigma &&
           a.tau == b.tau;
  }
};

enum class FamilyTag { Free, Classical, SigmaZero, TauZero, QMeixner, BiPoisson, General };

inline const char* family_name(FamilyTag t) {
  switch (t) {
    case FamilyTag::Free: return "free";
    case FamilyTag::Classical: return "classical";
    case FamilyTag::SigmaZero: return "sigma0";
    case FamilyTag::TauZero: return "tau0";
    case FamilyTag::QMeixner: return "qmeixner";
    case FamilyTag::BiPoisson: return "bipoisson";
    case FamilyTag::General: return "general";
  }
  return "?";
}

struct Constraint {
  std::string name;
  bool satisfied = false;
  /// Process-level hypotheses that cannot be decided from the five
  /// scalars are reported with assumed=true and satisfied=true.
  bool assumed = false;
};

struct AdmissibilityReport {
  std::vector<Constraint> constraints;
  bool admissible = false;
};

/// Checks each constraint independently; diagnostics, not failures.
template <class T>
AdmissibilityReport validate(const ParamSet<T>& p) {
  AdmissibilityReport rep;
  const T st = p.sigma * p.tau;
  const bool sigma_ok = !(p.sigma < T(0));
  const bool tau_ok = !(p.tau < T(0));
  // q <= 1 + 2*sqrt(sigma*tau), decided via sign cases on (q-1)^2 vs 4*sigma*tau.
  const bool q_ok = sigma_ok && tau_ok && cmp_minus_sqrt(T(p.q - T(1)), T(T(4) * st), T(1)) <= 0;
  const bool st_ok = st < T(1);
  const bool corner_ok = !(p.q == T(-1) && st == T(1));
  rep.constraints.push_back({"sigma >= 0", sigma_ok, false});
  rep.constraints.push_back({"tau >= 0", tau_ok, false});
  rep.constraints.push_back({"q <= 1 + 2*sqrt(sigma*tau)", q_ok, false});
  rep.constraints.push_back({"sigma*tau < 1", st_ok, false});
  rep.constraints.push_back({"(q, sigma*tau) != (-1, 1)", corner_ok, false});
  rep.constraints.push_back({"normalizer F nonzero for 0<s<t<u", true, true});
  rep.constraints.push_back({"linear independence of 1, X_s, X_t, X_sX_t, X_s^2, X_t^2", true, true});
  rep.admissible = sigma_ok && tau_ok && q_ok && st_ok && corner_ok;
  return rep;
}

/// Parameter action of the time inversion X_t -> t*X_{1/t}: eta<->theta
/// and sigma<->tau swap, q is unchanged.
template <class T>
ParamSet<T> time_invert(const ParamSet<T>& p) {
  return ParamSet<T>{p.q, p.theta, p.eta, p.tau, p.sigma};
}

/// All family tags whose defining equality holds; General when none does.
template <class T>
std::set<FamilyTag> classify(const ParamSet<T>& p) {
  std::set<FamilyTag> tags;
  const T st = p.sigma * p.tau;
  if (classify_zero(T(p.q + st))) tags.insert(FamilyTag::Free);
  // Classical: q = 1 - 2*sqrt(sigma*tau).
  if constexpr (is_exact_v<T>) {
    if (p.q <= T(1) && (T(1) - p.q) * (T(1) - p.q) == T(4) * st) tags.insert(FamilyTag::Classical);
  } else {
    if (p.sigma >= 0 && p.tau >= 0 && classify_zero(T(T(1) - p.q - 2 * std::sqrt(st))))
      tags.insert(FamilyTag::Classical);
  }
  if (classify_zero(p.sigma)) tags.insert(FamilyTag::SigmaZero);
  if (classify_zero(p.tau)) tags.insert(FamilyTag::TauZero);
  if (classify_zero(p.sigma) && classify_zero(p.eta)) tags.insert(FamilyTag::QMeixner);
  if (classify_zero(p.sigma) && classify_zero(p.tau)) tags.insert(FamilyTag::BiPoisson);
  if (tags.empty()) tags.insert(FamilyTag::General);
  return tags;
}

}  // namespace harnesslab

#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "tgq/errors.hpp"
#include "tgq/numeric.hpp"
#include "tgq/signature.hpp"
#include "tgq/tower.hpp"
#include "tgq/triangle.hpp"

namespace tgq {

enum class Verdict { Finite, Infinite };

inline const char* to_string(Verdict v) {
  return v == Verdict::Finite ? "finite" : "infinite";
}

// Which clause of the finiteness decision fired:
//   a       case 1, always finite
//   b       cases 2 and 7, always infinite
//   c       cases 3, 5, 8: finite iff the derived-subgroup genus is 0
//   d       cases 4 and 6: finite iff some permutation (p', q', r') has r'
//           coprime to p' and q', p' != q', and gcd(p', q') = 2 (sub-case i)
//           or r' = 2 with gcd(p', q') = 3 (sub-case ii)
struct ClassificationReport {
  CaseForm case_form;
  int min_derived_length;  // 1, 2 or 3
  Verdict verdict;
  std::string branch;
  std::optional<std::array<Int, 3>> witness_permutation;  // clause d only
  friend bool operator==(const ClassificationReport&,
                         const ClassificationReport&) = default;
};

// Minimum derived length of a smooth finite soluble quotient: 1 when the
// derived subgroup is torsion-free, 2 when every period has multiplicity > 1,
// 3 when some period occurs exactly once (its generator lands in the second
// derived subgroup, blocking any metabelian smooth quotient).
inline std::pair<int, CaseForm> min_derived_length(const TriangleParams& t) {
  CaseForm c = signature_case(derived_signature(t));
  switch (c) {
    case CaseForm::Case1:
      return {1, c};
    case CaseForm::Case3:
    case CaseForm::Case5:
    case CaseForm::Case8:
      return {2, c};
    default:
      return {3, c};
  }
}

namespace detail {

struct ClauseDMatch {
  bool finite = false;
  const char* branch = "d: no permutation";
  std::optional<std::array<Int, 3>> witness;
};

inline ClauseDMatch clause_d_search(const TriangleParams& t) {
  const std::array<std::array<Int, 3>, 6> perms = {{
      {t.p, t.q, t.r},
      {t.p, t.r, t.q},
      {t.q, t.p, t.r},
      {t.q, t.r, t.p},
      {t.r, t.p, t.q},
      {t.r, t.q, t.p},
  }};
  for (const auto& perm : perms) {
    const Int& a = perm[0];
    const Int& b = perm[1];
    const Int& c = perm[2];
    if (gcd(c, a) != 1 || gcd(c, b) != 1 || a == b) continue;
    if (gcd(a, b) == 2) return {true, "d: i", perm};
    if (c == 2 && gcd(a, b) == 3) return {true, "d: ii", perm};
  }
  return {};
}

}  // namespace detail

// How many smooth finite soluble quotients exist at the minimum derived
// length: finitely or infinitely many.
inline ClassificationReport infinitude_at_c(const TriangleParams& t) {
  FuchsianSignature derived = derived_signature(t);
  ClassificationReport rep;
  rep.case_form = signature_case(derived);
  rep.min_derived_length = min_derived_length(t).first;
  switch (rep.case_form) {
    case CaseForm::Case1:
      rep.verdict = Verdict::Finite;
      rep.branch = "a";
      break;
    case CaseForm::Case2:
    case CaseForm::Case7:
      rep.verdict = Verdict::Infinite;
      rep.branch = "b";
      break;
    case CaseForm::Case3:
    case CaseForm::Case5:
    case CaseForm::Case8:
      if (derived.genus() == 0) {
        rep.verdict = Verdict::Finite;
        rep.branch = "c: g = 0";
      } else {
        rep.verdict = Verdict::Infinite;
        rep.branch = "c: g > 0";
      }
      break;
    case CaseForm::Case4:
    case CaseForm::Case6: {
      detail::ClauseDMatch match = detail::clause_d_search(t);
      rep.verdict = match.finite ? Verdict::Finite : Verdict::Infinite;
      rep.branch = match.branch;
      rep.witness_permutation = match.witness;
      break;
    }
  }
  return rep;
}

// The one-parameter family (p, q, r) = (m, l*u, l) with gcd(l, m) =
// gcd(u, m) = 1.  The derived subgroup has signature (0; u, m^(l)), the K_m
// kernel has signature (g; u^(N)) with
//   N = m^(l-1)   and   g = 1 + m^(l-2) (l m - l - 2m) / 2,
// so the quotient count at the minimum derived length is finite exactly when
// g = 0.  Both closed forms are cross-checked against the general pipeline.
struct ChetiyaReport {
  TriangleParams params;  // (m, l*u, l)
  Int km_index;           // N
  Int genus;              // g
  Verdict verdict;
};

inline ChetiyaReport chetiya_case(const Int& m, const Int& ell, const Int& u) {
  if (m < 2 || ell < 2 || u < 1)
    throw ConstraintViolated("need m >= 2, l >= 2, u >= 1");
  if (gcd(ell, m) != 1 || gcd(u, m) != 1)
    throw ConstraintViolated("m must be coprime to both l and u");
  ChetiyaReport rep;
  rep.params = {m, ell * u, ell};
  if (curvature_class(rep.params) != Curvature::Hyperbolic)
    throw ConstraintViolated("(" + m.get_str() + ", " +
                             Int(ell * u).get_str() + ", " + ell.get_str() +
                             ") is not hyperbolic");

  std::size_t bits = default_tower_limits().max_order_bits;
  rep.km_index = checked_pow(m, Int(ell - 1), bits);
  Int correction = checked_pow(m, Int(ell - 2), bits) * (ell * m - ell - 2 * m);
  if (correction % 2 != 0)
    throw MismatchDetected("genus formula produced an odd correction");
  rep.genus = 1 + correction / 2;
  rep.verdict = rep.genus == 0 ? Verdict::Finite : Verdict::Infinite;

  // cross-check against the general route
  FuchsianSignature expected_derived(
      0, u > 1 ? std::vector<PeriodClass>{{u, Int(1)}, {m, ell}}
               : std::vector<PeriodClass>{{m, ell}});
  FuchsianSignature derived = derived_signature(rep.params);
  if (derived != expected_derived)
    throw MismatchDetected("derived signature " + format_signature(derived) +
                           " does not match the family form " +
                           format_signature(expected_derived));
  KmKernelResult step = km_kernel(derived, m);
  FuchsianSignature expected_kernel(
      rep.genus, u > 1 ? std::vector<PeriodClass>{{u, rep.km_index}}
                       : std::vector<PeriodClass>{});
  if (step.quotient_order != rep.km_index || step.kernel != expected_kernel)
    throw MismatchDetected(
        "K_m route gives order " + step.quotient_order.get_str() +
        " and kernel " + format_signature(step.kernel) +
        ", family formulas give " + rep.km_index.get_str() + " and " +
        format_signature(expected_kernel));
  return rep;
}

}  // namespace tgq

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "tgq/errors.hpp"
#include "tgq/numeric.hpp"
#include "tgq/signature.hpp"

namespace tgq {

// Parameters (p, q, r) of the ordinary triangle group
// <x, y | x^p = y^q = (xy)^r = 1>.  The triple is kept in input order;
// everything computed from it is invariant under permutations.
struct TriangleParams {
  Int p, q, r;
  friend bool operator==(const TriangleParams&, const TriangleParams&) =
      default;
};

inline void validate(const TriangleParams& t) {
  if (t.p < 2 || t.q < 2 || t.r < 2)
    throw InconsistentData("triangle parameters must all be >= 2");
}

enum class Curvature { Spherical, Euclidean, Hyperbolic };

inline const char* to_string(Curvature c) {
  switch (c) {
    case Curvature::Spherical: return "spherical";
    case Curvature::Euclidean: return "euclidean";
    case Curvature::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

// Sign of 1/p + 1/q + 1/r - 1, computed exactly.
inline Curvature curvature_class(const TriangleParams& t) {
  validate(t);
  Int lhs = t.q * t.r + t.p * t.r + t.p * t.q;
  Int rhs = t.p * t.q * t.r;
  if (lhs > rhs) return Curvature::Spherical;
  if (lhs == rhs) return Curvature::Euclidean;
  return Curvature::Hyperbolic;
}

// Pairwise coprime parameters give a perfect group (trivial abelianisation).
inline bool is_perfect(const TriangleParams& t) {
  validate(t);
  return gcd(t.p, t.q) == 1 && gcd(t.q, t.r) == 1 && gcd(t.p, t.r) == 1;
}

// The abelian quotient is C_e x C_f with f | e:
//   e = lcm(gcd(p,q), gcd(q,r), gcd(p,r))     (the exponent)
//   f = gcd(p,q,r)
//   |quotient| = e*f = pqr / lcm(p,q,r)
// and the three canonical generators map to elements of orders
//   e1 = gcd(p, lcm(q,r)),  e2 = gcd(q, lcm(p,r)),  e3 = gcd(r, lcm(p,q)).
struct AbelianisationReport {
  Int e;
  Int f;
  Int order;
  std::array<Int, 3> image_orders;
  std::vector<Int> invariant_factors;  // >1 factors of C_e x C_f, ascending
  friend bool operator==(const AbelianisationReport&,
                         const AbelianisationReport&) = default;
};

inline AbelianisationReport abelianisation(const TriangleParams& t) {
  validate(t);
  AbelianisationReport rep;
  rep.e = lcm(gcd(t.p, t.q), gcd(t.q, t.r), gcd(t.p, t.r));
  rep.f = gcd(t.p, t.q, t.r);
  rep.order = rep.e * rep.f;
  rep.image_orders = {gcd(t.p, lcm(t.q, t.r)), gcd(t.q, lcm(t.p, t.r)),
                      gcd(t.r, lcm(t.p, t.q))};
  if (rep.f > 1) rep.invariant_factors.push_back(rep.f);
  if (rep.e > 1) rep.invariant_factors.push_back(rep.e);
  return rep;
}

namespace detail {

// Image orders grouped by the canonical (merged, ascending-period) classes of
// the parent signature (0; p, q, r).  Equal parameters always share the same
// image order, so the grouping is well defined.
inline std::vector<Int> class_image_orders(const TriangleParams& t,
                                           const AbelianisationReport& ab,
                                           const FuchsianSignature& parent) {
  std::array<std::pair<Int, Int>, 3> by_param = {
      std::make_pair(t.p, ab.image_orders[0]),
      std::make_pair(t.q, ab.image_orders[1]),
      std::make_pair(t.r, ab.image_orders[2])};
  std::vector<Int> orders;
  for (const auto& pc : parent.period_classes()) {
    Int order(0);
    for (const auto& [param, e] : by_param) {
      if (param != pc.period) continue;
      if (order != 0 && order != e)
        throw MismatchDetected("equal parameters with unequal image orders");
      order = e;
    }
    orders.push_back(order);
  }
  return orders;
}

}  // namespace detail

// Signature of the derived subgroup: transfer of (0; p, q, r) along the
// abelian quotient, with the image orders of the generators given by the
// closed forms above.
inline FuchsianSignature derived_signature(const TriangleParams& t) {
  if (curvature_class(t) != Curvature::Hyperbolic)
    throw NotHyperbolic("derived signature needs a hyperbolic triple, (" +
                        t.p.get_str() + ", " + t.q.get_str() + ", " +
                        t.r.get_str() + ") is " +
                        to_string(curvature_class(t)));
  if (is_perfect(t))
    throw PerfectGroup("(" + t.p.get_str() + ", " + t.q.get_str() + ", " +
                       t.r.get_str() +
                       ") is perfect: the derived subgroup is the whole group");
  AbelianisationReport ab = abelianisation(t);
  FuchsianSignature parent(0, {{t.p, 1}, {t.q, 1}, {t.r, 1}});
  return normal_transfer(parent, detail::class_image_orders(t, ab, parent),
                         ab.order);
}

// The eight admissible shapes of a derived-subgroup signature, numbered by
// the (class count, multiplicity pattern) template:
//   1 (g; -)                 5 (g; m1^(n1), m2^(n2))
//   2 (g; m1)                6 (g; m1, m2, m3^(n3))
//   3 (g; m1^(n1))           7 (g; m1, m2^(n2), m3^(n3))
//   4 (g; m1, m2^(n2))       8 (g; m1^(n1), m2^(n2), m3^(n3))
enum class CaseForm {
  Case1 = 1,
  Case2,
  Case3,
  Case4,
  Case5,
  Case6,
  Case7,
  Case8,
};

inline int case_number(CaseForm c) { return static_cast<int>(c); }

inline const char* case_template(CaseForm c) {
  switch (c) {
    case CaseForm::Case1: return "(g; -)";
    case CaseForm::Case2: return "(g; m1)";
    case CaseForm::Case3: return "(g; m1^(n1))";
    case CaseForm::Case4: return "(g; m1, m2^(n2))";
    case CaseForm::Case5: return "(g; m1^(n1), m2^(n2))";
    case CaseForm::Case6: return "(g; m1, m2, m3^(n3))";
    case CaseForm::Case7: return "(g; m1, m2^(n2), m3^(n3))";
    case CaseForm::Case8: return "(g; m1^(n1), m2^(n2), m3^(n3))";
  }
  return "?";
}

// Classifies by shape alone.  The shapes with two or three classes all of
// multiplicity one cannot arise for a derived subgroup and are rejected, as
// is anything with more than three classes.
inline CaseForm signature_case(const FuchsianSignature& sig) {
  const auto& classes = sig.period_classes();
  std::size_t singles = 0;
  for (const auto& pc : classes)
    if (pc.multiplicity == 1) ++singles;
  switch (classes.size()) {
    case 0:
      return CaseForm::Case1;
    case 1:
      return singles == 1 ? CaseForm::Case2 : CaseForm::Case3;
    case 2:
      if (singles == 2)
        throw NotADerivedShape("(g; m1, m2) cannot be a derived subgroup");
      return singles == 1 ? CaseForm::Case4 : CaseForm::Case5;
    case 3:
      if (singles == 3)
        throw NotADerivedShape("(g; m1, m2, m3) cannot be a derived subgroup");
      if (singles == 2) return CaseForm::Case6;
      return singles == 1 ? CaseForm::Case7 : CaseForm::Case8;
    default:
      throw NotADerivedShape(
          "more than three period classes cannot arise for a derived "
          "subgroup");
  }
}

}  // namespace tgq

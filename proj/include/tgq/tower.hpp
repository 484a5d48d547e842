#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tgq/errors.hpp"
#include "tgq/numeric.hpp"
#include "tgq/oracle.hpp"
#include "tgq/signature.hpp"
#include "tgq/triangle.hpp"

namespace tgq {

// Size guards for tower construction.  Orders along a chain grow doubly
// exponentially, so a third descent step can demand numbers with billions of
// digits; anything above these guards raises TowerTooLarge instead.
struct TowerLimits {
  std::size_t max_lattice_columns = kDefaultMaxLatticeColumns;
  std::size_t max_order_bits = std::size_t(1) << 17;
};

inline const TowerLimits& default_tower_limits() {
  static const TowerLimits limits;
  return limits;
}

// Abelianisation of a Fuchsian group as free rank plus invariant factors,
// together with the image order of the elliptic generators of each period
// class (generators in one class are interchangeable and share their order).
struct AbelianStructure {
  Int free_rank;
  std::vector<Int> torsion_factors;    // invariant factors > 1, ascending
  std::vector<Int> class_image_orders;  // one entry per period class
  friend bool operator==(const AbelianStructure&, const AbelianStructure&) =
      default;

  Int torsion_order() const {
    Int n = 1;
    for (const auto& d : torsion_factors) n *= d;
    return n;
  }
};

// Image orders spelled out per elliptic generator, multiplicities expanded.
inline std::vector<Int> generator_image_orders(
    const FuchsianSignature& sig, const AbelianStructure& structure,
    std::size_t max_entries = kDefaultMaxLatticeColumns) {
  std::vector<Int> out;
  const auto& classes = sig.period_classes();
  for (std::size_t j = 0; j < classes.size(); ++j) {
    Int n = classes[j].multiplicity;
    if (Int(out.size()) + n > Int(static_cast<unsigned long>(max_entries)))
      throw TowerTooLarge("expanded image-order list above guard");
    for (Int i = 0; i < n; ++i)
      out.push_back(structure.class_image_orders[j]);
  }
  return out;
}

namespace detail {

// Per-class image orders in the cokernel of the given signature lattice,
// verifying that every generator of a class agrees.
inline std::vector<Int> lattice_class_orders(const FuchsianSignature& sig,
                                             const SignatureLattice& lat,
                                             const SnfResult& s) {
  std::vector<Int> orders;
  std::size_t k = lat.matrix.cols;
  std::vector<Int> unit(k, Int(0));
  const auto& classes = sig.period_classes();
  for (std::size_t j = 0; j < classes.size(); ++j) {
    std::size_t begin = lat.class_offset[j];
    unsigned long n =
        to_ulong_checked(classes[j].multiplicity, "class multiplicity");
    Int order(0);
    for (unsigned long i = 0; i < n; ++i) {
      unit[begin + i] = 1;
      Int o = order_in_cokernel(s, unit);
      unit[begin + i] = 0;
      if (i == 0)
        order = o;
      else if (o != order)
        throw MismatchDetected("generators of one period class got orders " +
                               order.get_str() + " and " + o.get_str());
    }
    orders.push_back(order);
  }
  return orders;
}

}  // namespace detail

// Abelianisation of the group with the given signature, computed from the
// Smith normal form of its relation lattice.  The 2g hyperbolic generators
// appear in no relation and contribute free rank directly.
inline AbelianStructure fuchsian_abelianisation(
    const FuchsianSignature& sig,
    std::size_t max_columns = kDefaultMaxLatticeColumns) {
  SignatureLattice lat = signature_relation_lattice(sig, Int(0), max_columns);
  SnfResult s = snf(lat.matrix, true);
  AbelianStructure out;
  out.free_rank = 2 * sig.genus() + Int(static_cast<unsigned long>(s.free_rank()));
  out.torsion_factors = s.invariant_factors();
  out.class_image_orders = detail::lattice_class_orders(sig, lat, s);
  return out;
}

// Closed form of the abelianisation when the periods are pairwise coprime:
// free rank 2g and one factor prod{ m_i : n_i - 1 >= t } per torsion layer t,
// with multiplicity-one generators mapping to the identity (they are products
// of the others and of commutators).
inline AbelianStructure closed_form_abelianisation(
    const FuchsianSignature& sig) {
  const auto& classes = sig.period_classes();
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i + 1; j < classes.size(); ++j)
      if (gcd(classes[i].period, classes[j].period) != 1)
        throw InconsistentData(
            "closed-form abelianisation needs pairwise coprime periods");
  AbelianStructure out;
  out.free_rank = 2 * sig.genus();
  Int layers = 0;
  for (const auto& pc : classes) {
    layers = std::max(layers, Int(pc.multiplicity - 1));
    out.class_image_orders.push_back(pc.multiplicity > 1 ? pc.period : Int(1));
  }
  unsigned long nlayers = to_ulong_checked(layers, "torsion layer count");
  if (nlayers > (1ul << 20))
    throw TowerTooLarge("closed-form torsion list above guard");
  for (unsigned long t = nlayers; t >= 1; --t) {
    Int factor = 1;
    for (const auto& pc : classes)
      if (pc.multiplicity - 1 >= Int(t)) factor *= pc.period;
    out.torsion_factors.push_back(factor);
  }
  return out;
}

// One descent step along K_m: quotient structure, its order, and the kernel
// signature.
struct KmKernelResult {
  AbelianStructure quotient;  // abelianisation reduced mod m
  Int quotient_order;
  FuchsianSignature kernel;
};

// K_m(G) = G' G^(m): the characteristic subgroup generated by the derived
// subgroup and all m-th powers.  The quotient is the abelianisation with
// every factor reduced mod m; elliptic image orders are read off the mod-m
// relation lattice and feed the normal-subgroup transfer for the kernel.
inline KmKernelResult km_kernel(
    const FuchsianSignature& sig, const Int& m,
    const TowerLimits& limits = default_tower_limits()) {
  if (m < 1) throw InconsistentData("K_m exponent must be >= 1");
  KmKernelResult out;
  if (m == 1) {
    out.quotient.free_rank = 0;
    out.quotient.class_image_orders.assign(sig.period_classes().size(),
                                           Int(1));
    out.quotient_order = 1;
    out.kernel = sig;
    return out;
  }
  if (mu(sig) <= 0)
    throw ZeroAreaInput("K_m descent needs mu > 0, " + format_signature(sig) +
                        " has mu = " + to_string(mu(sig)));

  SignatureLattice lat =
      signature_relation_lattice(sig, m, limits.max_lattice_columns);
  SnfResult s = snf(lat.matrix, true);
  std::vector<Int> elliptic_factors = s.invariant_factors();
  for (const auto& d : elliptic_factors)
    if (!divides(d, m))
      throw MismatchDetected("mod-" + m.get_str() +
                             " quotient produced a factor " + d.get_str());

  Int twice_genus = 2 * sig.genus();
  Int free_layer = checked_pow(m, twice_genus, limits.max_order_bits);
  out.quotient_order = free_layer * s.torsion_order();
  if (mpz_sizeinbase(out.quotient_order.get_mpz_t(), 2) >
      limits.max_order_bits)
    throw TowerTooLarge("layer order exceeds the size guard");

  out.quotient.free_rank = 0;
  out.quotient.torsion_factors = std::move(elliptic_factors);
  unsigned long copies = to_ulong_checked(twice_genus, "free rank");
  out.quotient.torsion_factors.insert(out.quotient.torsion_factors.end(),
                                      copies, m);
  out.quotient.class_image_orders = detail::lattice_class_orders(sig, lat, s);
  out.kernel =
      normal_transfer(sig, out.quotient.class_image_orders, out.quotient_order);
  return out;
}

// Exponent schedule realizing the minimum derived length: the abelianisation
// exponent first, then one K_m step per remaining abelian layer.  The minimal
// admissible exponents are the product of the periods of multiplicity > 1
// (with the least prime coprime to the lone period when that product is
// empty) followed by the product of the multiplicity-one periods.
struct ChainPlan {
  CaseForm case_form;
  int derived_length;
  std::vector<Int> exponents;
};

inline Int least_prime_coprime_to(const Int& n) {
  Int p = 2;
  while (gcd(p, n) != 1)
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
  return p;
}

inline ChainPlan chain_plan(const TriangleParams& t) {
  FuchsianSignature derived = derived_signature(t);
  ChainPlan plan;
  plan.case_form = signature_case(derived);
  plan.exponents.push_back(abelianisation(t).e);
  Int multi_product = 1, singleton_product = 1;
  for (const auto& pc : derived.period_classes())
    (pc.multiplicity > 1 ? multi_product : singleton_product) *= pc.period;
  if (!derived.period_classes().empty()) {
    if (singleton_product == 1) {
      plan.exponents.push_back(multi_product);
    } else {
      plan.exponents.push_back(multi_product > 1
                                   ? multi_product
                                   : least_prime_coprime_to(singleton_product));
      plan.exponents.push_back(singleton_product);
    }
  }
  plan.derived_length = static_cast<int>(plan.exponents.size());
  return plan;
}

struct ChainLevel {
  FuchsianSignature signature;  // the subgroup at this level
  Int exponent;                 // chosen m for the step down from here
  AbelianStructure layer;       // quotient by the next level
  Int layer_order;
  friend bool operator==(const ChainLevel&, const ChainLevel&) = default;
};

// Normal-subgroup tower from the triangle group down to a torsion-free
// kernel, one abelian layer per level; the layer count is the derived length
// of the resulting smooth soluble quotient.
struct WitnessChain {
  TriangleParams params;
  CaseForm case_form;
  int derived_length;
  std::vector<ChainLevel> levels;
  FuchsianSignature final_kernel;
  Int cumulative_order;
  friend bool operator==(const WitnessChain&, const WitnessChain&) = default;
};

// step_exponent_overrides, when nonempty, replaces the planned exponents of
// the K_m descent steps (not the abelianisation step).  Overrides must keep
// the admissibility the construction relies on: multiples of the planned
// products, coprime to the surviving lone periods.
inline WitnessChain witness_chain(
    const TriangleParams& t, const std::vector<Int>& step_exponent_overrides = {},
    const TowerLimits& limits = default_tower_limits()) {
  ChainPlan plan = chain_plan(t);
  FuchsianSignature derived = derived_signature(t);

  std::vector<Int> exponents = plan.exponents;
  if (!step_exponent_overrides.empty()) {
    if (step_exponent_overrides.size() + 1 != exponents.size())
      throw InconsistentData("chain has " +
                             std::to_string(exponents.size() - 1) +
                             " descent steps to override");
    Int multi_product = 1, singleton_product = 1;
    for (const auto& pc : derived.period_classes())
      (pc.multiplicity > 1 ? multi_product : singleton_product) *= pc.period;
    const Int& m = step_exponent_overrides[0];
    if (m < 2 || !divides(multi_product, m) || gcd(m, singleton_product) != 1)
      throw InconsistentData(
          "first descent exponent must be a multiple of " +
          multi_product.get_str() + " coprime to " + singleton_product.get_str());
    if (step_exponent_overrides.size() == 2) {
      const Int& m2 = step_exponent_overrides[1];
      if (m2 < 2 || !divides(singleton_product, m2))
        throw InconsistentData("second descent exponent must be a multiple of " +
                               singleton_product.get_str());
    }
    std::copy(step_exponent_overrides.begin(), step_exponent_overrides.end(),
              exponents.begin() + 1);
  }

  WitnessChain chain;
  chain.params = t;
  chain.case_form = plan.case_form;
  chain.derived_length = static_cast<int>(exponents.size());
  chain.cumulative_order = 1;

  FuchsianSignature current(0, {{t.p, 1}, {t.q, 1}, {t.r, 1}});
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    KmKernelResult step = km_kernel(current, exponents[i], limits);
    if (step.quotient_order <= 1)
      throw InconsistentData("exponent " + exponents[i].get_str() +
                             " gives a trivial layer");
    if (i == 0 && step.kernel != derived)
      throw MismatchDetected(
          "lattice route and closed forms disagree on the derived subgroup: " +
          format_signature(step.kernel) + " vs " + format_signature(derived));
    chain.levels.push_back(
        {current, exponents[i], std::move(step.quotient), step.quotient_order});
    chain.cumulative_order *= step.quotient_order;
    current = std::move(step.kernel);
  }
  if (!current.torsion_free())
    throw MismatchDetected("chain ended at " + format_signature(current) +
                           ", which still has torsion");
  chain.final_kernel = std::move(current);
  return chain;
}

// One application of the Macbeath trick: extend a smooth quotient of order
// |G| whose kernel is a genus-g surface group by (C_m)^(2g).  The new order
// is m^(2g) |G| and the new kernel genus solves
//   2 - 2g' = m^(2g) |G| (1/p + 1/q + 1/r - 1),
// strictly larger than g for m >= 2.
struct MacbeathStep {
  Int exponent;
  Int input_order;
  Int input_genus;
  Int output_order;
  Int output_genus;
  friend bool operator==(const MacbeathStep&, const MacbeathStep&) = default;
};

inline MacbeathStep macbeath_step(
    const TriangleParams& t, const Int& order, const Int& genus, const Int& m,
    const TowerLimits& limits = default_tower_limits()) {
  if (curvature_class(t) != Curvature::Hyperbolic)
    throw NotHyperbolic("Macbeath extension needs a hyperbolic triple");
  if (m < 1) throw InconsistentData("Macbeath exponent must be >= 1");
  if (order < 1) throw InconsistentData("quotient order must be >= 1");
  if (genus < 1)
    throw GenusZeroKernel("Macbeath extension needs a kernel of genus >= 1");

  Rational angle_deficit =
      make_rational(t.q * t.r + t.p * t.r + t.p * t.q - t.p * t.q * t.r,
                    t.p * t.q * t.r);  // 1/p + 1/q + 1/r - 1, negative here
  if (Rational(order) * angle_deficit != Rational(Int(2 - 2 * genus)))
    throw NonIntegralGenus("order " + order.get_str() + " and genus " +
                           genus.get_str() +
                           " do not satisfy Riemann-Hurwitz for this triple");

  MacbeathStep step;
  step.exponent = m;
  step.input_order = order;
  step.input_genus = genus;
  if (m == 1) {
    step.output_order = order;
    step.output_genus = genus;
    return step;
  }
  step.output_order =
      checked_pow(m, Int(2 * genus), limits.max_order_bits) * order;
  Rational out_deficit = Rational(step.output_order) * angle_deficit;
  Rational out_genus = (2 - out_deficit) / 2;
  if (!is_integer(out_genus))
    throw NonIntegralGenus("extension genus is not integral");
  step.output_genus = out_genus.get_num();
  return step;
}

struct TowerLevel {
  Int order;
  Int genus;  // genus of the torsion-free kernel at this level
  int derived_length;
  friend bool operator==(const TowerLevel&, const TowerLevel&) = default;
};

inline std::vector<TowerLevel> macbeath_tower(
    const WitnessChain& chain, const std::vector<Int>& exponents,
    const TowerLimits& limits = default_tower_limits()) {
  std::vector<TowerLevel> levels;
  levels.push_back({chain.cumulative_order, chain.final_kernel.genus(),
                    chain.derived_length});
  for (const auto& m : exponents) {
    if (m < 2)
      throw InconsistentData("tower exponents must be >= 2, got " +
                             m.get_str());
    const TowerLevel& prev = levels.back();
    MacbeathStep step =
        macbeath_step(chain.params, prev.order, prev.genus, m, limits);
    levels.push_back(
        {step.output_order, step.output_genus, prev.derived_length + 1});
  }
  return levels;
}

inline std::vector<TowerLevel> macbeath_tower(
    const TriangleParams& t, const std::vector<Int>& exponents,
    const TowerLimits& limits = default_tower_limits()) {
  return macbeath_tower(witness_chain(t, {}, limits), exponents, limits);
}

}  // namespace tgq

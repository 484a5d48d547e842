#include <catch2/catch.hpp>

#include <vector>

#include "tgq/classify.hpp"

using tgq::CaseForm;
using tgq::Curvature;
using tgq::Int;
using tgq::TriangleParams;
using tgq::Verdict;

namespace {

TriangleParams t(long p, long q, long r) { return {Int(p), Int(q), Int(r)}; }

}  // namespace

TEST_CASE("min_derived_length on the example rows", "[classify]") {
  CHECK(tgq::min_derived_length(t(4, 4, 4)) ==
        std::pair(1, CaseForm::Case1));
  CHECK(tgq::min_derived_length(t(2, 4, 6)) ==
        std::pair(2, CaseForm::Case5));
  CHECK(tgq::min_derived_length(t(2, 3, 12)) ==
        std::pair(3, CaseForm::Case2));
  CHECK(tgq::min_derived_length(t(3, 3, 4)) ==
        std::pair(2, CaseForm::Case3));
  CHECK(tgq::min_derived_length(t(2, 3, 8)) ==
        std::pair(3, CaseForm::Case4));
  CHECK(tgq::min_derived_length(t(2, 9, 15)) ==
        std::pair(3, CaseForm::Case6));
  CHECK(tgq::min_derived_length(t(4, 9, 30)) ==
        std::pair(3, CaseForm::Case7));
  CHECK(tgq::min_derived_length(t(4, 6, 10)) ==
        std::pair(2, CaseForm::Case8));
  CHECK_THROWS_AS(tgq::min_derived_length(t(2, 3, 7)), tgq::PerfectGroup);
  CHECK_THROWS_AS(tgq::min_derived_length(t(2, 3, 6)), tgq::NotHyperbolic);
}

TEST_CASE("derived length 1 iff each parameter divides the lcm of the others",
          "[classify][property]") {
  for (long p = 2; p <= 30; ++p)
    for (long q = p; q <= 30; ++q)
      for (long r = q; r <= 30; ++r) {
        TriangleParams params = t(p, q, r);
        if (tgq::curvature_class(params) != Curvature::Hyperbolic) continue;
        if (tgq::is_perfect(params)) continue;
        bool divisible = tgq::divides(params.p, tgq::lcm(params.q, params.r)) &&
                         tgq::divides(params.q, tgq::lcm(params.p, params.r)) &&
                         tgq::divides(params.r, tgq::lcm(params.p, params.q));
        REQUIRE((tgq::min_derived_length(params).first == 1) == divisible);
      }
}

TEST_CASE("infinitude_at_c on the worked examples", "[classify]") {
  tgq::ClassificationReport a = tgq::infinitude_at_c(t(3, 3, 6));
  CHECK(a.case_form == CaseForm::Case3);
  CHECK(a.min_derived_length == 2);
  CHECK(a.verdict == Verdict::Infinite);
  CHECK(a.branch == "c: g > 0");

  tgq::ClassificationReport b = tgq::infinitude_at_c(t(3, 3, 4));
  CHECK(b.verdict == Verdict::Finite);
  CHECK(b.branch == "c: g = 0");

  tgq::ClassificationReport c = tgq::infinitude_at_c(t(2, 3, 8));
  CHECK(c.case_form == CaseForm::Case4);
  CHECK(c.min_derived_length == 3);
  CHECK(c.verdict == Verdict::Finite);
  CHECK(c.branch == "d: i");
  REQUIRE(c.witness_permutation.has_value());
  // 3 is coprime to 2 and 8, 2 != 8, gcd(2, 8) = 2
  CHECK(*c.witness_permutation ==
        std::array<Int, 3>{Int(2), Int(8), Int(3)});

  tgq::ClassificationReport d = tgq::infinitude_at_c(t(4, 9, 30));
  CHECK(d.case_form == CaseForm::Case7);
  CHECK(d.verdict == Verdict::Infinite);
  CHECK(d.branch == "b");

  tgq::ClassificationReport e = tgq::infinitude_at_c(t(2, 3, 12));
  CHECK(e.case_form == CaseForm::Case2);
  CHECK(e.verdict == Verdict::Infinite);
  CHECK(e.branch == "b");

  tgq::ClassificationReport f = tgq::infinitude_at_c(t(4, 4, 4));
  CHECK(f.verdict == Verdict::Finite);
  CHECK(f.branch == "a");
}

TEST_CASE("verdicts are permutation invariant", "[classify][property]") {
  for (long p = 2; p <= 14; ++p)
    for (long q = p; q <= 14; ++q)
      for (long r = q; r <= 14; ++r) {
        TriangleParams params = t(p, q, r);
        if (tgq::curvature_class(params) != Curvature::Hyperbolic) continue;
        if (tgq::is_perfect(params)) continue;
        tgq::ClassificationReport base = tgq::infinitude_at_c(params);
        for (const TriangleParams& perm :
             {t(p, r, q), t(q, p, r), t(q, r, p), t(r, p, q), t(r, q, p)}) {
          tgq::ClassificationReport other = tgq::infinitude_at_c(perm);
          REQUIRE(other.verdict == base.verdict);
          REQUIRE(other.case_form == base.case_form);
          REQUIRE(other.min_derived_length == base.min_derived_length);
        }
      }
}

TEST_CASE("clause d agrees with the kernel-genus route", "[classify][property]") {
  // For cases 4 and 6 the count at derived length 3 is finite exactly when
  // the first descent kernel K_m has genus 0.
  int seen = 0;
  for (long p = 2; p <= 30; ++p)
    for (long q = p; q <= 30; ++q)
      for (long r = q; r <= 30; ++r) {
        TriangleParams params = t(p, q, r);
        if (tgq::curvature_class(params) != Curvature::Hyperbolic) continue;
        if (tgq::is_perfect(params)) continue;
        tgq::ClassificationReport rep = tgq::infinitude_at_c(params);
        if (rep.case_form != CaseForm::Case4 &&
            rep.case_form != CaseForm::Case6)
          continue;
        ++seen;
        tgq::FuchsianSignature derived = tgq::derived_signature(params);
        Int m = 1;
        for (const auto& pc : derived.period_classes())
          if (pc.multiplicity > 1) m *= pc.period;
        tgq::KmKernelResult step = tgq::km_kernel(derived, m);
        bool finite_by_genus = step.kernel.genus() == 0;
        REQUIRE((rep.verdict == Verdict::Finite) == finite_by_genus);
      }
  CHECK(seen > 50);
}

TEST_CASE("chetiya family on the worked examples", "[classify]") {
  // l = 2 always lands at genus 0
  tgq::ChetiyaReport a = tgq::chetiya_case(Int(3), Int(2), Int(4));
  CHECK(a.params == t(3, 8, 2));
  CHECK(a.km_index == 3);
  CHECK(a.genus == 0);
  CHECK(a.verdict == Verdict::Finite);

  // l = 3, m = 2 also gives genus 0
  tgq::ChetiyaReport b = tgq::chetiya_case(Int(2), Int(3), Int(3));
  CHECK(b.params == t(2, 9, 3));
  CHECK(b.km_index == 4);
  CHECK(b.genus == 0);
  CHECK(b.verdict == Verdict::Finite);

  tgq::ChetiyaReport c = tgq::chetiya_case(Int(5), Int(3), Int(2));
  CHECK(c.params == t(5, 6, 3));
  CHECK(c.km_index == 25);
  CHECK(c.genus == 6);
  CHECK(c.verdict == Verdict::Infinite);

  CHECK_THROWS_AS(tgq::chetiya_case(Int(4), Int(2), Int(2)),
                  tgq::ConstraintViolated);  // gcd(u, m) = 2
  CHECK_THROWS_AS(tgq::chetiya_case(Int(3), Int(3), Int(1)),
                  tgq::ConstraintViolated);  // gcd(l, m) = 3
  CHECK_THROWS_AS(tgq::chetiya_case(Int(3), Int(2), Int(1)),
                  tgq::ConstraintViolated);  // (3, 2, 2) is spherical
}

TEST_CASE("chetiya family matches the general pipeline", "[classify][property]") {
  int checked = 0;
  for (long m = 2; m <= 12; ++m)
    for (long ell = 2; ell <= 12; ++ell)
      for (long u = 1; u <= 12; ++u) {
        if (tgq::gcd(Int(ell), Int(m)) != 1) continue;
        if (tgq::gcd(Int(u), Int(m)) != 1) continue;
        TriangleParams params = t(m, ell * u, ell);
        if (tgq::curvature_class(params) != Curvature::Hyperbolic) continue;
        // chetiya_case cross-checks N and g against derived_signature and
        // km_kernel internally and throws MismatchDetected on disagreement
        tgq::ChetiyaReport rep;
        REQUIRE_NOTHROW(rep = tgq::chetiya_case(Int(m), Int(ell), Int(u)));
        if (ell == 2 || (ell == 3 && m == 2)) {
          REQUIRE(rep.genus == 0);
          REQUIRE(rep.verdict == Verdict::Finite);
        }
        ++checked;
      }
  CHECK(checked > 80);
}

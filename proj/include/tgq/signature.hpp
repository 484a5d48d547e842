#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgq/errors.hpp"
#include "tgq/numeric.hpp"

namespace tgq {

struct PeriodClass {
  Int period;        // >= 2 once stored
  Int multiplicity;  // >= 1
  friend bool operator==(const PeriodClass&, const PeriodClass&) = default;
};

// Signature (g; m1^(n1), ..., mr^(nr)) of a cocompact Fuchsian group: genus
// plus a multiset of elliptic periods grouped by value.  Cusp and boundary
// counts are identically zero here, since every group in sight descends from
// an ordinary triangle group.  Construction canonicalizes: periods equal to 1
// are dropped, equal periods are merged, classes are kept sorted by period.
class FuchsianSignature {
 public:
  FuchsianSignature() = default;  // (0; -)

  FuchsianSignature(Int genus, std::vector<PeriodClass> classes)
      : genus_(std::move(genus)) {
    if (genus_ < 0) throw InconsistentData("signature genus must be >= 0");
    for (const auto& pc : classes) {
      if (pc.period < 1)
        throw InconsistentData("signature period must be >= 1");
      if (pc.multiplicity < 1)
        throw InconsistentData("signature multiplicity must be >= 1");
    }
    std::erase_if(classes, [](const PeriodClass& pc) { return pc.period == 1; });
    std::sort(classes.begin(), classes.end(),
              [](const PeriodClass& a, const PeriodClass& b) {
                return a.period < b.period;
              });
    for (const auto& pc : classes) {
      if (!classes_.empty() && classes_.back().period == pc.period)
        classes_.back().multiplicity += pc.multiplicity;
      else
        classes_.push_back(pc);
    }
  }

  const Int& genus() const { return genus_; }
  const std::vector<PeriodClass>& period_classes() const { return classes_; }
  bool torsion_free() const { return classes_.empty(); }

  // Total number of elliptic generators, i.e. the multiplicity sum.
  Int elliptic_count() const {
    Int n = 0;
    for (const auto& pc : classes_) n += pc.multiplicity;
    return n;
  }

  friend bool operator==(const FuchsianSignature&, const FuchsianSignature&) =
      default;

 private:
  Int genus_{0};
  std::vector<PeriodClass> classes_;
};

// Normalized hyperbolic area of a fundamental domain:
//   mu = 2g - 2 + sum n_i (1 - 1/m_i).
inline Rational mu(const FuchsianSignature& sig) {
  Rational area(Int(2 * sig.genus() - 2));
  for (const auto& pc : sig.period_classes())
    area += make_rational(pc.multiplicity * (pc.period - 1), pc.period);
  return area;
}

// Subgroup index via Riemann-Hurwitz: |parent : sub| = mu(sub)/mu(parent).
inline Int rh_index(const FuchsianSignature& parent,
                    const FuchsianSignature& sub) {
  Rational parent_mu = mu(parent);
  if (parent_mu <= 0)
    throw ZeroAreaParent("Riemann-Hurwitz index needs mu(parent) > 0, got " +
                         to_string(parent_mu));
  Rational ratio = mu(sub) / parent_mu;
  if (!is_integer(ratio) || ratio < 1)
    throw NonIntegralIndex("area ratio " + to_string(ratio) +
                           " is not a positive integer");
  return ratio.get_num();
}

// Signature of a normal subgroup of finite index.  image_orders holds, for
// each period class of the parent in canonical (ascending period) order, the
// order e of the image of that class's elliptic generators in the quotient;
// normality makes the induced permutations semi-regular, so each generator of
// a class of period m contributes index/e cycles of length e, i.e. new
// periods m/e with multiplicity n * index / e.  Periods that collapse to 1
// vanish and the genus is forced by Riemann-Hurwitz.
inline FuchsianSignature normal_transfer(const FuchsianSignature& parent,
                                         const std::vector<Int>& image_orders,
                                         const Int& index) {
  if (index < 1) throw InconsistentData("subgroup index must be >= 1");
  const auto& classes = parent.period_classes();
  if (image_orders.size() != classes.size())
    throw InconsistentData("need one image order per period class, got " +
                           std::to_string(image_orders.size()) + " for " +
                           std::to_string(classes.size()) + " classes");

  std::vector<PeriodClass> transferred;
  Rational period_area(0);  // sum n'(1 - 1/m') over the new classes
  for (std::size_t j = 0; j < classes.size(); ++j) {
    const Int& m = classes[j].period;
    const Int& n = classes[j].multiplicity;
    const Int& e = image_orders[j];
    if (e < 1 || !divides(e, m) || !divides(e, index))
      throw InconsistentData("image order " + e.get_str() +
                             " must divide period " + m.get_str() +
                             " and index " + index.get_str());
    Int new_period = m / e;
    if (new_period == 1) continue;
    Int new_mult = n * (index / e);
    period_area += make_rational(new_mult * (new_period - 1), new_period);
    transferred.push_back({new_period, new_mult});
  }

  Rational twice_genus = Rational(index) * mu(parent) + 2 - period_area;
  if (!is_integer(twice_genus) || twice_genus < 0 ||
      !divides(Int(2), twice_genus.get_num()))
    throw InconsistentData(
        "transfer data forces a non-integral or negative genus (2g = " +
        to_string(twice_genus) + ")");
  return FuchsianSignature(Int(twice_genus.get_num() / 2),
                           std::move(transferred));
}

namespace detail {

// Compact signature grammar (canonical text form):
//   signature := "(" genus "; " ( "-" | classlist ) ")"
//   classlist := class ( ", " class )*
//   class     := period [ "^(" multiplicity ")" ]
// with genus, period and multiplicity plain decimal integers.
class SignatureParser {
 public:
  explicit SignatureParser(std::string_view text) : text_(text) {}

  FuchsianSignature parse() {
    expect('(');
    Int genus = integer("genus");
    expect(';');
    expect(' ');
    std::vector<PeriodClass> classes;
    if (peek() == '-') {
      ++pos_;
    } else {
      classes.push_back(period_class());
      while (peek() == ',') {
        ++pos_;
        expect(' ');
        classes.push_back(period_class());
      }
    }
    expect(')');
    if (pos_ != text_.size())
      throw ParseError("trailing characters after signature", pos_);
    return FuchsianSignature(std::move(genus), std::move(classes));
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  Int integer(const std::string& what) {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) throw ParseError("expected " + what, pos_);
    return Int(std::string(text_.substr(start, pos_ - start)));
  }

  PeriodClass period_class() {
    std::size_t at = pos_;
    Int period = integer("period");
    if (period < 1) throw ParseError("period must be >= 1", at);
    Int multiplicity(1);
    if (peek() == '^') {
      ++pos_;
      expect('(');
      std::size_t mult_at = pos_;
      multiplicity = integer("multiplicity");
      if (multiplicity < 1)
        throw ParseError("multiplicity must be >= 1", mult_at);
      expect(')');
    }
    return {std::move(period), std::move(multiplicity)};
  }

  std::string_view text_;
  std::size_t pos_{0};
};

}  // namespace detail

inline FuchsianSignature parse_signature(std::string_view text) {
  return detail::SignatureParser(text).parse();
}

// Canonical rendering: singleton classes first in ascending period, then
// classes of multiplicity > 1 in ascending period.
inline std::string format_signature(const FuchsianSignature& sig) {
  std::string out = "(" + sig.genus().get_str() + "; ";
  const auto& classes = sig.period_classes();
  if (classes.empty()) {
    out += "-";
  } else {
    bool first = true;
    auto emit = [&](const PeriodClass& pc) {
      if (!first) out += ", ";
      first = false;
      out += pc.period.get_str();
      if (pc.multiplicity != 1)
        out += "^(" + pc.multiplicity.get_str() + ")";
    };
    for (const auto& pc : classes)
      if (pc.multiplicity == 1) emit(pc);
    for (const auto& pc : classes)
      if (pc.multiplicity != 1) emit(pc);
  }
  out += ")";
  return out;
}

}  // namespace tgq

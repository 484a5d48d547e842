#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tgq/classify.hpp"
#include "tgq/errors.hpp"
#include "tgq/numeric.hpp"
#include "tgq/oracle.hpp"
#include "tgq/signature.hpp"
#include "tgq/tower.hpp"
#include "tgq/triangle.hpp"

namespace tgq {

// Everything the CLI reports for a single triple.  Inputs outside the
// hyperbolic non-perfect range yield a partial document with an explanatory
// status instead of an error.
struct ReportDocument {
  TriangleParams params;
  Curvature curvature{Curvature::Hyperbolic};
  bool perfect{false};
  std::string status;  // "ok", "spherical", "euclidean" or the perfect notice
  AbelianisationReport abelianisation;
  std::optional<FuchsianSignature> derived;
  std::optional<ClassificationReport> classification;
  std::optional<WitnessChain> chain;
  std::optional<std::string> chain_error;
  std::optional<std::vector<TowerLevel>> tower;
  friend bool operator==(const ReportDocument&, const ReportDocument&) =
      default;
};

inline const char* kPerfectStatus = "perfect: every finite quotient insoluble";

// Recomputes the closed forms through the integer-lattice oracle and the
// explicit regular representation; throws MismatchDetected on the first
// disagreement.
inline void cross_check_triangle(const TriangleParams& t) {
  AbelianisationReport ab = abelianisation(t);
  FpAbelianisation fp = fp_abelianisation(2, triangle_relation_rows(t));
  if (fp.free_rank != 0)
    throw MismatchDetected("lattice route gave an infinite abelianisation");
  if (fp.invariant_factors != ab.invariant_factors)
    throw MismatchDetected("invariant factors disagree with the lattice");
  if (fp.generator_orders[0] != ab.image_orders[0] ||
      fp.generator_orders[1] != ab.image_orders[1] ||
      order_in_cokernel(fp.snf, {Int(1), Int(1)}) != ab.image_orders[2])
    throw MismatchDetected("generator image orders disagree with the lattice");
  if (fp.snf.torsion_order() != ab.order)
    throw MismatchDetected("abelianisation orders disagree with the lattice");
  cycle_check(t);

  if (curvature_class(t) == Curvature::Hyperbolic && !is_perfect(t)) {
    FuchsianSignature derived = derived_signature(t);
    FuchsianSignature start(0, {{t.p, 1}, {t.q, 1}, {t.r, 1}});
    KmKernelResult first = km_kernel(start, ab.e);
    if (first.kernel != derived || first.quotient_order != ab.order)
      throw MismatchDetected("K_e descent disagrees with the derived closed "
                             "form: " +
                             format_signature(first.kernel) + " vs " +
                             format_signature(derived));
    if (fuchsian_abelianisation(derived) != closed_form_abelianisation(derived))
      throw MismatchDetected(
          "derived-subgroup abelianisation disagrees with the closed form");
    if (rh_index(start, derived) != ab.order)
      throw MismatchDetected("Riemann-Hurwitz index disagrees with the "
                             "abelianisation order");
  }
}

struct ReportOptions {
  bool with_chain = true;
  bool with_tower = false;           // include the tower section even if empty
  std::vector<Int> tower_exponents;  // Macbeath exponents, one per step
  std::vector<Int> chain_exponents;  // empty: minimal canonical choices
  bool oracle_checks = false;
  TowerLimits limits;
};

inline ReportDocument build_report(const TriangleParams& t,
                                   const ReportOptions& opt = {}) {
  validate(t);
  ReportDocument doc;
  doc.params = t;
  doc.curvature = curvature_class(t);
  doc.perfect = is_perfect(t);
  doc.abelianisation = abelianisation(t);
  if (doc.curvature != Curvature::Hyperbolic) {
    doc.status = to_string(doc.curvature);
    return doc;
  }
  if (doc.perfect) {
    doc.status = kPerfectStatus;
    return doc;
  }
  doc.status = "ok";
  doc.derived = derived_signature(t);
  doc.classification = infinitude_at_c(t);
  if (opt.oracle_checks) cross_check_triangle(t);
  bool want_tower = opt.with_tower || !opt.tower_exponents.empty();
  if (opt.with_chain || want_tower) {
    try {
      doc.chain = witness_chain(t, opt.chain_exponents, opt.limits);
    } catch (const TowerTooLarge& e) {
      if (want_tower) throw;
      doc.chain_error = e.what();
    }
    if (doc.chain && want_tower)
      doc.tower = macbeath_tower(*doc.chain, opt.tower_exponents, opt.limits);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// text rendering

inline std::string format_abelian(const AbelianStructure& a) {
  std::string out;
  auto append = [&out](const std::string& part) {
    if (!out.empty()) out += " x ";
    out += part;
  };
  if (a.free_rank == 1) append("Z");
  else if (a.free_rank > 1) append("Z^" + a.free_rank.get_str());
  for (std::size_t i = 0; i < a.torsion_factors.size();) {
    std::size_t j = i;
    while (j < a.torsion_factors.size() &&
           a.torsion_factors[j] == a.torsion_factors[i])
      ++j;
    std::string part = "C" + a.torsion_factors[i].get_str();
    if (j - i > 1) part += "^" + std::to_string(j - i);
    append(part);
    i = j;
  }
  return out.empty() ? "1" : out;
}

inline std::string format_triple(const TriangleParams& t) {
  return "(" + t.p.get_str() + ", " + t.q.get_str() + ", " + t.r.get_str() +
         ")";
}

inline std::string render_report(const ReportDocument& doc) {
  std::ostringstream out;
  out << "triangle group " << format_triple(doc.params) << "\n";
  out << "  curvature:          " << to_string(doc.curvature) << "\n";
  out << "  perfect:            " << (doc.perfect ? "yes" : "no") << "\n";
  const auto& ab = doc.abelianisation;
  out << "  abelianisation:     ";
  if (ab.invariant_factors.empty()) {
    out << "trivial";
  } else {
    for (std::size_t i = 0; i < ab.invariant_factors.size(); ++i)
      out << (i ? " x " : "") << "C" << ab.invariant_factors[i].get_str();
  }
  out << "  (order " << ab.order.get_str() << ", image orders ("
      << ab.image_orders[0].get_str() << ", " << ab.image_orders[1].get_str()
      << ", " << ab.image_orders[2].get_str() << "))\n";
  if (doc.status != "ok") {
    out << "  status:             " << doc.status << "\n";
    return out.str();
  }
  out << "  derived signature:  " << format_signature(*doc.derived) << "\n";
  const auto& cls = *doc.classification;
  out << "  case:               " << case_number(cls.case_form) << "   "
      << case_template(cls.case_form) << "\n";
  out << "  min derived length: " << cls.min_derived_length << "\n";
  out << "  quotients at c:     " << to_string(cls.verdict) << "   [clause "
      << cls.branch << "]";
  if (cls.witness_permutation) {
    const auto& w = *cls.witness_permutation;
    out << "   via (" << w[0].get_str() << ", " << w[1].get_str() << ", "
        << w[2].get_str() << ")";
  }
  out << "\n";
  if (doc.chain) {
    const auto& chain = *doc.chain;
    out << "  witness chain (derived length " << chain.derived_length
        << ", order " << chain.cumulative_order.get_str() << "):\n";
    for (std::size_t i = 0; i < chain.levels.size(); ++i) {
      const auto& lvl = chain.levels[i];
      out << "    level " << i << ": " << format_signature(lvl.signature)
          << "   m = " << lvl.exponent.get_str() << "   layer "
          << format_abelian(lvl.layer) << "   order "
          << lvl.layer_order.get_str() << "\n";
    }
    out << "    kernel:  " << format_signature(chain.final_kernel) << "\n";
  } else if (doc.chain_error) {
    out << "  witness chain:      unavailable (" << *doc.chain_error << ")\n";
  }
  if (doc.tower) {
    out << "  tower:\n";
    for (const auto& lvl : *doc.tower)
      out << "    derived length " << lvl.derived_length << ": order "
          << lvl.order.get_str() << ", kernel genus " << lvl.genus.get_str()
          << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON (lossless; unbounded integers travel as decimal strings)

namespace detail {

inline nlohmann::json to_json(const Int& v) { return v.get_str(); }

inline Int int_from_json(const nlohmann::json& j) {
  return Int(j.get<std::string>());
}

inline nlohmann::json to_json(const std::vector<Int>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

inline std::vector<Int> ints_from_json(const nlohmann::json& j) {
  std::vector<Int> out;
  for (const auto& x : j) out.push_back(int_from_json(x));
  return out;
}

inline nlohmann::json to_json(const AbelianStructure& a) {
  return {{"free_rank", a.free_rank.get_str()},
          {"torsion_factors", to_json(a.torsion_factors)},
          {"class_image_orders", to_json(a.class_image_orders)}};
}

inline AbelianStructure abelian_from_json(const nlohmann::json& j) {
  AbelianStructure a;
  a.free_rank = int_from_json(j.at("free_rank"));
  a.torsion_factors = ints_from_json(j.at("torsion_factors"));
  a.class_image_orders = ints_from_json(j.at("class_image_orders"));
  return a;
}

}  // namespace detail

inline nlohmann::json report_to_json(const ReportDocument& doc) {
  nlohmann::json j;
  j["p"] = doc.params.p.get_str();
  j["q"] = doc.params.q.get_str();
  j["r"] = doc.params.r.get_str();
  j["curvature"] = to_string(doc.curvature);
  j["perfect"] = doc.perfect;
  j["status"] = doc.status;
  j["abelianisation"] = {
      {"e", doc.abelianisation.e.get_str()},
      {"f", doc.abelianisation.f.get_str()},
      {"order", doc.abelianisation.order.get_str()},
      {"image_orders",
       nlohmann::json::array({doc.abelianisation.image_orders[0].get_str(),
                              doc.abelianisation.image_orders[1].get_str(),
                              doc.abelianisation.image_orders[2].get_str()})},
      {"invariant_factors",
       detail::to_json(doc.abelianisation.invariant_factors)}};
  j["derived_signature"] =
      doc.derived ? nlohmann::json(format_signature(*doc.derived))
                  : nlohmann::json();
  if (doc.classification) {
    const auto& cls = *doc.classification;
    j["case"] = case_number(cls.case_form);
    j["min_derived_length"] = cls.min_derived_length;
    j["verdict"] = to_string(cls.verdict);
    j["branch"] = cls.branch;
    j["witness_permutation"] =
        cls.witness_permutation
            ? nlohmann::json::array({(*cls.witness_permutation)[0].get_str(),
                                     (*cls.witness_permutation)[1].get_str(),
                                     (*cls.witness_permutation)[2].get_str()})
            : nlohmann::json();
  } else {
    j["case"] = nullptr;
    j["min_derived_length"] = nullptr;
    j["verdict"] = nullptr;
    j["branch"] = nullptr;
    j["witness_permutation"] = nullptr;
  }
  if (doc.chain) {
    const auto& chain = *doc.chain;
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& lvl : chain.levels)
      levels.push_back({{"signature", format_signature(lvl.signature)},
                        {"exponent", lvl.exponent.get_str()},
                        {"layer", detail::to_json(lvl.layer)},
                        {"layer_order", lvl.layer_order.get_str()}});
    j["chain"] = {{"case", case_number(chain.case_form)},
                  {"derived_length", chain.derived_length},
                  {"levels", std::move(levels)},
                  {"final_kernel", format_signature(chain.final_kernel)},
                  {"cumulative_order", chain.cumulative_order.get_str()}};
  } else {
    j["chain"] = nullptr;
  }
  j["chain_error"] =
      doc.chain_error ? nlohmann::json(*doc.chain_error) : nlohmann::json();
  if (doc.tower) {
    nlohmann::json tower = nlohmann::json::array();
    for (const auto& lvl : *doc.tower)
      tower.push_back({{"order", lvl.order.get_str()},
                       {"genus", lvl.genus.get_str()},
                       {"derived_length", lvl.derived_length}});
    j["tower"] = std::move(tower);
  } else {
    j["tower"] = nullptr;
  }
  return j;
}

inline ReportDocument report_from_json(const nlohmann::json& j) {
  ReportDocument doc;
  doc.params = {detail::int_from_json(j.at("p")),
                detail::int_from_json(j.at("q")),
                detail::int_from_json(j.at("r"))};
  std::string curvature = j.at("curvature").get<std::string>();
  doc.curvature = curvature == "spherical"   ? Curvature::Spherical
                  : curvature == "euclidean" ? Curvature::Euclidean
                                             : Curvature::Hyperbolic;
  doc.perfect = j.at("perfect").get<bool>();
  doc.status = j.at("status").get<std::string>();
  const auto& ab = j.at("abelianisation");
  doc.abelianisation.e = detail::int_from_json(ab.at("e"));
  doc.abelianisation.f = detail::int_from_json(ab.at("f"));
  doc.abelianisation.order = detail::int_from_json(ab.at("order"));
  for (int i = 0; i < 3; ++i)
    doc.abelianisation.image_orders[i] =
        detail::int_from_json(ab.at("image_orders").at(i));
  doc.abelianisation.invariant_factors =
      detail::ints_from_json(ab.at("invariant_factors"));
  if (!j.at("derived_signature").is_null())
    doc.derived =
        parse_signature(j.at("derived_signature").get<std::string>());
  if (!j.at("case").is_null()) {
    ClassificationReport cls;
    cls.case_form = static_cast<CaseForm>(j.at("case").get<int>());
    cls.min_derived_length = j.at("min_derived_length").get<int>();
    cls.verdict = j.at("verdict").get<std::string>() == "finite"
                      ? Verdict::Finite
                      : Verdict::Infinite;
    cls.branch = j.at("branch").get<std::string>();
    if (!j.at("witness_permutation").is_null()) {
      const auto& w = j.at("witness_permutation");
      cls.witness_permutation = {detail::int_from_json(w.at(0)),
                                 detail::int_from_json(w.at(1)),
                                 detail::int_from_json(w.at(2))};
    }
    doc.classification = std::move(cls);
  }
  if (!j.at("chain").is_null()) {
    const auto& c = j.at("chain");
    WitnessChain chain;
    chain.params = doc.params;
    chain.case_form = static_cast<CaseForm>(c.at("case").get<int>());
    chain.derived_length = c.at("derived_length").get<int>();
    for (const auto& l : c.at("levels")) {
      ChainLevel lvl;
      lvl.signature = parse_signature(l.at("signature").get<std::string>());
      lvl.exponent = detail::int_from_json(l.at("exponent"));
      lvl.layer = detail::abelian_from_json(l.at("layer"));
      lvl.layer_order = detail::int_from_json(l.at("layer_order"));
      chain.levels.push_back(std::move(lvl));
    }
    chain.final_kernel =
        parse_signature(c.at("final_kernel").get<std::string>());
    chain.cumulative_order = detail::int_from_json(c.at("cumulative_order"));
    doc.chain = std::move(chain);
  }
  if (!j.at("chain_error").is_null())
    doc.chain_error = j.at("chain_error").get<std::string>();
  if (!j.at("tower").is_null()) {
    std::vector<TowerLevel> tower;
    for (const auto& l : j.at("tower"))
      tower.push_back({detail::int_from_json(l.at("order")),
                       detail::int_from_json(l.at("genus")),
                       l.at("derived_length").get<int>()});
    doc.tower = std::move(tower);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// tables

// The example triples realizing the eight derived-signature shapes.
inline const std::array<TriangleParams, 8>& table_examples() {
  static const std::array<TriangleParams, 8> examples = {{
      {Int(4), Int(4), Int(4)},
      {Int(2), Int(3), Int(12)},
      {Int(3), Int(3), Int(4)},
      {Int(2), Int(3), Int(8)},
      {Int(2), Int(4), Int(6)},
      {Int(2), Int(9), Int(15)},
      {Int(4), Int(9), Int(30)},
      {Int(4), Int(6), Int(10)},
  }};
  return examples;
}

namespace detail {

inline std::string render_columns(
    const std::vector<std::array<std::string, 4>>& rows, std::size_t ncols) {
  std::array<std::size_t, 4> width{};
  for (const auto& row : rows)
    for (std::size_t c = 0; c + 1 < ncols; ++c)
      width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < ncols; ++c) {
      line += row[c];
      if (c + 1 < ncols)
        line.append(width[c] - row[c].size() + 2, ' ');
    }
    out += line;
    out += "\n";
  }
  return out;
}

}  // namespace detail

inline std::string render_table1() {
  std::vector<std::array<std::string, 4>> rows;
  rows.push_back({"case", "form", "example", "derived signature"});
  for (int i = 0; i < 8; ++i) {
    const TriangleParams& t = table_examples()[i];
    FuchsianSignature derived = derived_signature(t);
    CaseForm c = signature_case(derived);
    rows.push_back({std::to_string(case_number(c)), case_template(c),
                    format_triple(t), format_signature(derived)});
  }
  return "Derived subgroup signatures by case\n" +
         detail::render_columns(rows, 4);
}

inline const char* infinitude_column(CaseForm c) {
  switch (c) {
    case CaseForm::Case1: return "Never";
    case CaseForm::Case2:
    case CaseForm::Case7: return "Always";
    case CaseForm::Case3:
    case CaseForm::Case5:
    case CaseForm::Case8: return "Whenever g > 0";
    case CaseForm::Case4:
    case CaseForm::Case6: return "Depends on p, q and r";
  }
  return "?";
}

inline std::string render_table2() {
  std::vector<std::array<std::string, 4>> rows;
  rows.push_back({"case", "form", "c", "infinitely many with length c"});
  for (int i = 0; i < 8; ++i) {
    const TriangleParams& t = table_examples()[i];
    auto [c, form] = min_derived_length(t);
    rows.push_back({std::to_string(case_number(form)), case_template(form),
                    std::to_string(c), infinitude_column(form)});
  }
  return "Minimum derived length of a smooth finite soluble quotient\n" +
         detail::render_columns(rows, 4);
}

// ---------------------------------------------------------------------------
// range scan

struct ScanRow {
  TriangleParams params;
  CaseForm case_form;
  int min_derived_length;
  Verdict verdict;
  Int index;  // order of the abelianisation
  std::string derived;
};

// All hyperbolic non-perfect triples 2 <= p <= q <= r <= max_param in
// lexicographic order.
inline std::vector<ScanRow> scan_rows(long max_param,
                                      bool oracle_checks = false) {
  if (max_param < 2) throw InconsistentData("scan bound must be >= 2");
  std::vector<ScanRow> rows;
  for (long p = 2; p <= max_param; ++p)
    for (long q = p; q <= max_param; ++q)
      for (long r = q; r <= max_param; ++r) {
        TriangleParams t{Int(p), Int(q), Int(r)};
        if (curvature_class(t) != Curvature::Hyperbolic || is_perfect(t))
          continue;
        if (oracle_checks) cross_check_triangle(t);
        ClassificationReport cls = infinitude_at_c(t);
        rows.push_back({t, cls.case_form, cls.min_derived_length, cls.verdict,
                        abelianisation(t).order,
                        format_signature(derived_signature(t))});
      }
  return rows;
}

// Column order: p,q,r,case,c,verdict,index,derived_signature.  The signature
// field is always quoted since canonical signatures contain ", ".
inline std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "p,q,r,case,c,verdict,index,derived_signature\n";
  for (const auto& row : rows) {
    out += row.params.p.get_str() + "," + row.params.q.get_str() + "," +
           row.params.r.get_str() + "," +
           std::to_string(case_number(row.case_form)) + "," +
           std::to_string(row.min_derived_length) + "," +
           to_string(row.verdict) + "," + row.index.get_str() + ",\"" +
           row.derived + "\"\n";
  }
  return out;
}

inline nlohmann::json scan_json(const std::vector<ScanRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows)
    out.push_back({{"p", row.params.p.get_str()},
                   {"q", row.params.q.get_str()},
                   {"r", row.params.r.get_str()},
                   {"case", case_number(row.case_form)},
                   {"c", row.min_derived_length},
                   {"verdict", to_string(row.verdict)},
                   {"index", row.index.get_str()},
                   {"derived_signature", row.derived}});
  return out;
}

}  // namespace tgq

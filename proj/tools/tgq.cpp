#include <CLI11.hpp>

#include <cctype>
#include <iostream>
#include <string>
#include <vector>

#include "tgq/tgq.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

tgq::Int parse_integer(const std::string& text, const std::string& what) {
  if (text.empty()) throw UsageError(what + " must be a decimal integer");
  for (char ch : text)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw UsageError(what + " must be a decimal integer, got '" + text +
                       "'");
  return tgq::Int(text);
}

tgq::TriangleParams parse_triple(const std::string& p, const std::string& q,
                                 const std::string& r) {
  tgq::TriangleParams t{parse_integer(p, "p"), parse_integer(q, "q"),
                        parse_integer(r, "r")};
  if (t.p < 2 || t.q < 2 || t.r < 2)
    throw UsageError("triangle parameters must all be >= 2");
  return t;
}

std::vector<tgq::Int> parse_exponent_list(const std::string& text,
                                          const std::string& what) {
  std::vector<tgq::Int> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = text.find(',', start);
    std::string piece = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_integer(piece, what));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int run_report(const std::string& p, const std::string& q,
               const std::string& r, bool as_json, bool oracle) {
  tgq::ReportOptions opt;
  opt.oracle_checks = oracle;
  tgq::ReportDocument doc = tgq::build_report(parse_triple(p, q, r), opt);
  if (as_json)
    std::cout << tgq::report_to_json(doc).dump(2) << "\n";
  else
    std::cout << tgq::render_report(doc);
  return 0;
}

int run_scan(long max, bool as_csv, bool as_json, bool oracle) {
  if (as_csv && as_json) throw UsageError("choose one of --csv and --json");
  if (max < 2) throw UsageError("--max must be >= 2");
  std::vector<tgq::ScanRow> rows = tgq::scan_rows(max, oracle);
  if (as_json)
    std::cout << tgq::scan_json(rows).dump(2) << "\n";
  else
    std::cout << tgq::scan_csv(rows);
  return 0;
}

int run_tables() {
  std::cout << tgq::render_table1() << "\n" << tgq::render_table2();
  return 0;
}

int run_tower(const std::string& p, const std::string& q, const std::string& r,
              long depth, bool depth_set, const std::string& exponents,
              const std::string& chain_exponents, bool as_json, bool oracle) {
  tgq::TriangleParams t = parse_triple(p, q, r);
  if (tgq::curvature_class(t) != tgq::Curvature::Hyperbolic)
    throw tgq::NotHyperbolic("tower construction needs a hyperbolic triple, " +
                             tgq::format_triple(t) + " is " +
                             tgq::to_string(tgq::curvature_class(t)));
  if (tgq::is_perfect(t))
    throw tgq::PerfectGroup(tgq::format_triple(t) +
                            " is perfect: it has no soluble quotients");

  tgq::ReportOptions opt;
  opt.oracle_checks = oracle;
  opt.with_tower = true;
  if (!exponents.empty()) {
    opt.tower_exponents = parse_exponent_list(exponents, "tower exponent");
    if (depth_set &&
        static_cast<std::size_t>(depth) != opt.tower_exponents.size())
      throw UsageError("--depth disagrees with the --exponents list length");
  } else if (depth_set) {
    if (depth < 0) throw UsageError("--depth must be >= 0");
    opt.tower_exponents.assign(static_cast<std::size_t>(depth), tgq::Int(2));
  }
  if (!chain_exponents.empty())
    opt.chain_exponents =
        parse_exponent_list(chain_exponents, "chain exponent");

  tgq::ReportDocument doc = tgq::build_report(t, opt);
  if (as_json)
    std::cout << tgq::report_to_json(doc).dump(2) << "\n";
  else
    std::cout << tgq::render_report(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact classification of smooth finite soluble quotients of ordinary "
      "triangle groups"};
  app.require_subcommand(1);

  std::string p, q, r;
  bool as_json = false, as_csv = false, oracle = false;

  CLI::App* report =
      app.add_subcommand("report", "classify one triple (p, q, r)");
  report->add_option("p", p, "first parameter")->required();
  report->add_option("q", q, "second parameter")->required();
  report->add_option("r", r, "third parameter")->required();
  report->add_flag("--json", as_json, "emit JSON instead of text");
  report->add_flag("--oracle", oracle,
                   "cross-check every value against the lattice oracle");

  CLI::App* scan = app.add_subcommand(
      "scan", "one row per hyperbolic non-perfect triple with p <= q <= r");
  long max = 0;
  scan->add_option("--max", max, "upper bound for p, q, r")->required();
  scan->add_flag("--csv", as_csv, "CSV output (default)");
  scan->add_flag("--json", as_json, "JSON output");
  scan->add_flag("--oracle", oracle,
                 "cross-check every triple against the lattice oracle");

  app.add_subcommand("tables", "regenerate the two classification tables");

  CLI::App* tower = app.add_subcommand(
      "tower", "witness chain plus Macbeath extensions for one triple");
  tower->add_option("p", p, "first parameter")->required();
  tower->add_option("q", q, "second parameter")->required();
  tower->add_option("r", r, "third parameter")->required();
  long depth = 0;
  std::string exponents, chain_exponents;
  CLI::Option* depth_opt =
      tower->add_option("--depth", depth, "number of Macbeath steps");
  tower->add_option("--exponents", exponents,
                    "comma-separated Macbeath exponents, e.g. 2,3,2");
  tower->add_option("--chain-exponents", chain_exponents,
                    "override the canonical chain descent exponents");
  tower->add_flag("--json", as_json, "emit JSON instead of text");
  tower->add_flag("--oracle", oracle,
                  "cross-check every value against the lattice oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (report->parsed()) return run_report(p, q, r, as_json, oracle);
    if (scan->parsed()) return run_scan(max, as_csv, as_json, oracle);
    if (tower->parsed())
      return run_tower(p, q, r, depth, depth_opt->count() > 0, exponents,
                       chain_exponents, as_json, oracle);
    return run_tables();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const tgq::MismatchDetected& e) {
    std::cerr << "oracle mismatch: " << e.what() << "\n";
    return 3;
  } catch (const tgq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sigmoment/demo.hpp"
#include "sigmoment/json_io.hpp"

namespace {

using namespace sigmoment;
using io::Json;

constexpr int kExitOk = 0;
constexpr int kExitContract = 1;
constexpr int kExitUsage = 2;

constexpr const char* kSchemaHelp = R"(Input and output documents (JSON schemas ship under schemas/):
  moments.schema.json   {"dimension", "max_degree", "entries": [{"alpha": [..], "value": "p/q" | number}]}
                        one entry per multi-index with |alpha| <= max_degree
  support.schema.json   {"class": FullSpace | Orthant | Grid | Strip | BoundedBox | PointSequence1D |
                         UnionOfRays | AffineCone | SampledSet, ...class fields,
                         "certified_representable": bool (optional)}
  measure.schema.json   {"dimension", "atoms": [{"point": [..], "weight": ..}]}
  result.schema.json    construct output: measure + total_variation, residuals, diagnostics
  report.schema.json    analyze output: verdict, witness, density ranks, condition (*), N_0
Exact values are written as "num/den" strings. Axes in JSON are 1-based.
Exit codes: 0 success, 1 contract violated, 2 usage or input error.
The default seed can be overridden with SIGMOMENT_SEED.)";

struct Config {
  std::string support_path;
  std::string moments_path;
  std::string measure_path;
  std::string out_path;
  std::string trace_path;
  std::string mode = "exact";
  std::string objective = "any";
  unsigned degree = kDefaultDegree;
  std::optional<std::size_t> nodes;
  std::uint64_t seed = kDefaultSeed;
  std::string demo = "all";
  bool verbose = false;
  bool quiet = false;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SIGMOMENT_SEED")) {
    try {
      return std::stoull(env, nullptr, 0);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed SIGMOMENT_SEED '" << env << "'\n";
    }
  }
  return kDefaultSeed;
}

void emit(const Json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

int analyze(const Config& c) {
  const auto k = io::read_support(io::read_file(c.support_path));
  const auto rep = classify(k, c.degree, parse_mode(c.mode));
  emit(io::write_analysis_report(rep), c.out_path);
  if (!c.trace_path.empty()) {
    std::ofstream csv(c.trace_path);
    if (!csv) throw Error("cannot write " + c.trace_path);
    if (rep.witness_growth) {
      io::write_growth_csv(csv, *rep.witness_growth);
    } else {
      csv << "stage,radius,max_ratio\n";
    }
  }
  if (c.verbose) std::cerr << k.class_name() << ": " << to_string(rep.verdict) << '\n';
  return kExitOk;
}

template <typename T>
int construct_as(const Config& c, const MomentSequence<Rational>& target, const SupportSpec& k) {
  MatchProblem<T> p{convert<T>(target), k, c.nodes, parse_objective(c.objective), c.seed};
  try {
    const auto r = construct_signed_measure(p);
    const auto report = verify_match(r, p);
    Json j = io::write_match_result(r);
    j["verification"] = io::write_match_report(report);
    emit(j, c.out_path);
    if (!c.quiet)
      std::cerr << "atoms " << r.measure.size() << ", max rel residual "
                << report.max_rel_residual << (report.contract_met ? "" : " (contract violated)")
                << '\n';
    return report.contract_met ? kExitOk : kExitContract;
  } catch (const RankDeficientError& e) {
    Json j{{"error", e.what()}, {"rank", e.rank()}, {"required_rank", e.required()}};
    if (e.exact_certificate()) j["certificate"] = io::write_polynomial(*e.exact_certificate());
    if (e.float_certificate()) j["certificate"] = io::write_polynomial(*e.float_certificate());
    emit(j, c.out_path);
    std::cerr << "error: " << e.what() << '\n';
    return kExitContract;
  }
}

int construct(const Config& c) {
  const auto target = io::read_moments(io::read_file(c.moments_path));
  const auto k = io::read_support(io::read_file(c.support_path));
  if (target.dimension() != k.dimension())
    throw DimensionMismatch(k.dimension(), target.dimension());
  parse_objective(c.objective);
  return parse_mode(c.mode) == NumericMode::Exact ? construct_as<Rational>(c, target, k)
                                                  : construct_as<double>(c, target, k);
}

int verify(const Config& c) {
  const auto mu = io::read_measure(io::read_file(c.measure_path));
  const auto target = io::read_moments(io::read_file(c.moments_path));
  const auto k = io::read_support(io::read_file(c.support_path));
  if (mu.dimension() != target.dimension()) throw DimensionMismatch(target.dimension(), mu.dimension());
  if (k.dimension() != target.dimension()) throw DimensionMismatch(target.dimension(), k.dimension());
  const MatchReport rep = parse_mode(c.mode) == NumericMode::Exact
                              ? verify_measure(mu, target, k)
                              : verify_measure(convert<double>(mu), convert<double>(target), k);
  emit(io::write_match_report(rep), c.out_path);
  return rep.contract_met ? kExitOk : kExitContract;
}

int run_demo(const Config& c) {
  std::vector<std::string> selected;
  if (c.demo == "all") {
    selected = demo::names();
  } else if (demo::known(c.demo)) {
    selected = {c.demo};
  } else {
    std::cerr << "error: unknown demo '" << c.demo << "'; choose all or one of:";
    for (const auto& n : demo::names()) std::cerr << ' ' << n;
    std::cerr << '\n';
    return kExitUsage;
  }
  bool all_passed = true;
  for (const auto& name : selected) {
    const auto o = demo::run(name, c.seed);
    all_passed = all_passed && o.passed;
    if (!c.quiet) {
      std::cout << "[" << (o.passed ? "PASS" : "FAIL") << "] " << o.criterion << ' ' << o.name
                << ": " << o.detail;
      if (c.verbose) std::cout << " (" << o.seconds << " s)";
      std::cout << '\n';
    }
  }
  return all_passed ? kExitOk : kExitContract;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed moment representations on closed supports"};
  app.footer(kSchemaHelp);
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  c.seed = default_seed();

  auto* verbose = app.add_flag("-v,--verbose", c.verbose, "Extra diagnostics on stderr");
  auto* quiet = app.add_flag("-q,--quiet", c.quiet, "Suppress progress output");
  verbose->excludes(quiet);
  app.add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();

  const auto modes = CLI::IsMember({"exact", "float"});

  auto* an = app.add_subcommand("analyze", "Classify a support and write a JSON report");
  an->add_option("--support", c.support_path, "Support spec JSON")->required()->check(CLI::ExistingFile);
  an->add_option("--degree", c.degree, "Highest degree checked")->capture_default_str();
  an->add_option("--mode", c.mode, "exact or float")->check(modes)->capture_default_str();
  an->add_option("--out", c.out_path, "Report path (stdout when omitted)");
  an->add_option("--trace-csv", c.trace_path, "Growth trace of the witness as CSV");

  auto* co = app.add_subcommand("construct", "Build a signed measure matching a moment sequence");
  co->add_option("--moments", c.moments_path, "Moment sequence JSON")->required()->check(CLI::ExistingFile);
  co->add_option("--support", c.support_path, "Support spec JSON")->required()->check(CLI::ExistingFile);
  co->add_option("--objective", c.objective, "any or min-tv")
      ->check(CLI::IsMember({"any", "min-tv"}))
      ->capture_default_str();
  co->add_option("--mode", c.mode, "exact or float")->check(modes)->capture_default_str();
  co->add_option("--nodes", c.nodes, "Node budget (default C(N+d,d), doubled for min-tv)");
  co->add_option("--out", c.out_path, "Result path (stdout when omitted)");

  auto* ve = app.add_subcommand("verify", "Check a measure against a moment sequence and support");
  ve->add_option("--measure", c.measure_path, "Measure JSON")->required()->check(CLI::ExistingFile);
  ve->add_option("--moments", c.moments_path, "Moment sequence JSON")->required()->check(CLI::ExistingFile);
  ve->add_option("--support", c.support_path, "Support spec JSON")->required()->check(CLI::ExistingFile);
  ve->add_option("--mode", c.mode, "exact or float")->check(modes)->capture_default_str();
  ve->add_option("--out", c.out_path, "Report path (stdout when omitted)");

  auto* de = app.add_subcommand("demo", "Run the reference fixtures and print a pass/fail table");
  de->add_option("fixture", c.demo, "all, polya, grid, strip, density, growth, classify, tv, roundtrip")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (an->parsed()) return analyze(c);
    if (co->parsed()) return construct(c);
    if (ve->parsed()) return verify(c);
    return run_demo(c);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SamplingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitContract;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

#include "dnc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dnc/channel_spec.hpp"
#include "dnc/error.hpp"
#include "dnc/gf_builder.hpp"
#include "dnc/oracle.hpp"
#include "dnc/solver.hpp"

namespace dnc::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kMergeTolerance = 1e-9;

struct RunConfig {
  std::string command;
  std::string spec_path;
  std::optional<double> cutoff;
  std::optional<double> tolerance;
  std::string method = "auto";
  bool verify = false;
  bool oracle = false;
  bool json = false;
  double margin = DensityOptions{}.margin;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path, "cannot open spec file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ChannelSpec load_spec(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_spec(text);
  } catch (const SpecError& e) {
    throw SpecError(path + ":" + e.location(), std::string(e.what()).substr(e.location().size() + 2));
  }
}

Json count_json(const Integer& n) {
  if (n <= std::numeric_limits<std::int64_t>::max()) return n.convert_to<std::int64_t>();
  return n.str();
}

Json vector_json(const WeightVector& w, const WeightBasis& basis) {
  Json v = Json::object();
  for (std::size_t i = 0; i < w.extent(); ++i)
    if (w[i] != 0) v[basis[i].name] = w[i];
  return v;
}

Json terms_json(const GeneralizedPolynomial& p) {
  Json arr = Json::array();
  for (const auto& [w, c] : p.sorted_terms())
    arr.push_back(Json{{"weight", w.value(p.basis())},
                       {"vector", vector_json(w, p.basis())},
                       {"coefficient", count_json(c)}});
  return arr;
}

void emit_json(const Io& io, const Json& j) { io.out << j.dump(2) << "\n"; }

// Series rows with numerically equal weights merged.
struct Row {
  double weight;
  std::vector<WeightVector> vectors;
  Integer count;
};

std::vector<Row> merge_rows(const CoefficientSeries& s, bool& merged) {
  std::vector<Row> rows;
  merged = false;
  for (const auto& e : s.entries) {
    const double v = e.weight.value(*s.basis);
    if (!rows.empty() && std::abs(v - rows.back().weight) <= kMergeTolerance) {
      rows.back().vectors.push_back(e.weight);
      rows.back().count += e.count;
      merged = true;
    } else {
      rows.push_back({v, {e.weight}, e.count});
    }
  }
  return rows;
}

Json report_json(const CapacityReport& r) {
  Json j;
  j["method"] = std::string(to_string(r.method));
  j["radius_or_pole"] = r.radius_or_pole;
  j["radius_or_pole_bracket"] = Json::array({r.bracket_lo, r.bracket_hi});
  j["capacity_nats"] = r.capacity_nats;
  j["capacity_error_bound"] = r.error_bound;
  j["iterations"] = r.iterations;
  j["singularity_found"] = r.singularity_found;
  j["note"] = r.note;
  return j;
}

void print_report(const Io& io, const CapacityReport& r) {
  const char* symbol = r.method == CapacityMethod::SmallestPole ? "P" : "R";
  io.out << "method: " << to_string(r.method) << "\n";
  if (r.method == CapacityMethod::OracleEstimate) {
    io.out << fmt::format("C ≈ {} nats (spread {:.3g})\n", format_value(r.capacity_nats), r.error_bound);
  } else {
    io.out << fmt::format("{} = {}  bracket [{:.15g}, {:.15g}]\n", symbol, format_value(r.radius_or_pole),
                          r.bracket_lo, r.bracket_hi);
    io.out << fmt::format("C = {} nats  (error bound {:.3g})\n", format_value(r.capacity_nats),
                          r.error_bound);
  }
  if (!r.note.empty()) io.out << "note: " << r.note << "\n";
}

CapacityReport analytic_capacity(const ChannelSpec& spec, const RationalGF& gf, const RunConfig& cfg) {
  RootOptions ropt;
  PoleOptions popt;
  if (cfg.tolerance) {
    ropt.tolerance = *cfg.tolerance;
    popt.tolerance = *cfg.tolerance;
  }
  if (cfg.method == "characteristic") return capacity_from_characteristic(gf, ropt);
  if (cfg.method == "pole") return smallest_positive_pole(gf, popt);
  // A quotient from the pattern construction is analysed by its poles even
  // when the denominator happens to have the 1 - E(y) shape.
  const bool patterns = std::holds_alternative<ForbiddenPatterns>(spec.constraint);
  if (!patterns && is_star_form(gf)) {
    try {
      return capacity_from_characteristic(gf, ropt);
    } catch (const SolverError&) {
      // Numerator vanishes at the root; the pole scan skips removable roots.
    }
  }
  return smallest_positive_pole(gf, popt);
}

int cmd_capacity(const RunConfig& cfg, const Io& io) {
  const ChannelSpec spec = load_spec(cfg.spec_path);
  Json j;
  j["command"] = "capacity";
  j["spec"] = cfg.spec_path;

  if (cfg.method == "oracle") {
    const CoefficientSeries series = enumerate_by_weight(spec, *cfg.cutoff);
    const CapacityReport r = estimate_capacity(series);
    if (cfg.json) {
      j["cutoff"] = *cfg.cutoff;
      j["report"] = report_json(r);
      emit_json(io, j);
    } else {
      print_report(io, r);
    }
    return kOk;
  }

  const RationalGF gf = build_gf(spec);
  const CapacityReport r = analytic_capacity(spec, gf, cfg);
  j["report"] = report_json(r);
  if (!cfg.json) print_report(io, r);

  int code = kOk;
  if (cfg.verify) {
    const double cutoff = *cfg.cutoff;
    const CoefficientSeries expanded = expand_series(gf, cutoff);
    const CoefficientSeries counted = enumerate_by_weight(spec, cutoff);
    const bool match = expanded.same_entries(counted);
    const CapacityReport est = estimate_capacity(counted);
    const double discrepancy = r.capacity_nats - est.capacity_nats;
    const double allowance = r.error_bound + est.error_bound;
    const bool exceeds = -discrepancy > allowance;
    if (!match || exceeds) code = kVerificationFailed;

    Json v;
    v["cutoff"] = cutoff;
    v["series_match"] = match;
    v["weights_compared"] = std::max(expanded.entries.size(), counted.entries.size());
    v["oracle_estimate"] = est.capacity_nats;
    v["oracle_error_bound"] = est.error_bound;
    v["discrepancy"] = discrepancy;
    v["passed"] = code == kOk;
    j["verification"] = v;
    if (!cfg.json) {
      io.out << fmt::format("verify: series {} ({} weights up to {})\n", match ? "match" : "MISMATCH",
                            v["weights_compared"].get<std::size_t>(), format_value(cutoff));
      io.out << fmt::format("verify: oracle estimate {} (spread {:.3g}), discrepancy {:.3g}: {}\n",
                            format_value(est.capacity_nats), est.error_bound, discrepancy,
                            code == kOk ? "ok" : "FAILED");
    }
  }
  if (cfg.json) emit_json(io, j);
  return code;
}

int print_series(const RunConfig& cfg, const Io& io, const CoefficientSeries& s, const char* source,
                 const std::optional<CapacityReport>& estimate) {
  bool merged = false;
  const std::vector<Row> rows = merge_rows(s, merged);
  if (merged)
    io.err << "warning: numerically equal weights (within " << kMergeTolerance
           << ") were merged in the output\n";
  if (cfg.json) {
    Json j;
    j["command"] = cfg.command;
    j["spec"] = cfg.spec_path;
    j["source"] = source;
    j["cutoff"] = s.cutoff;
    j["merged"] = merged;
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json vecs = Json::array();
      for (const auto& w : row.vectors) vecs.push_back(vector_json(w, *s.basis));
      arr.push_back(Json{{"weight", row.weight}, {"vectors", vecs}, {"count", count_json(row.count)}});
    }
    j["entries"] = arr;
    j["total_strings"] = count_json(s.total());
    if (estimate) j["estimate"] = report_json(*estimate);
    emit_json(io, j);
    return kOk;
  }
  io.out << "# weight\tcount\tvector\n";
  for (const auto& row : rows) {
    std::string vec;
    for (const auto& w : row.vectors) {
      if (!vec.empty()) vec += " ; ";
      vec += to_string(w, *s.basis);
    }
    io.out << fmt::format("{:.10g}\t{}\t{}\n", row.weight, row.count.str(), vec);
  }
  io.out << "# total strings: " << s.total().str() << "\n";
  if (estimate) print_report(io, *estimate);
  return kOk;
}

int cmd_coefficients(const RunConfig& cfg, const Io& io) {
  const ChannelSpec spec = load_spec(cfg.spec_path);
  if (cfg.oracle) return print_series(cfg, io, enumerate_by_weight(spec, *cfg.cutoff), "oracle", std::nullopt);
  return print_series(cfg, io, expand_series(build_gf(spec), *cfg.cutoff), "generating-function",
                      std::nullopt);
}

int cmd_oracle(const RunConfig& cfg, const Io& io) {
  const ChannelSpec spec = load_spec(cfg.spec_path);
  const CoefficientSeries s = enumerate_by_weight(spec, *cfg.cutoff);
  return print_series(cfg, io, s, "oracle", estimate_capacity(s));
}

std::vector<double> density_weights(const std::string& path, double cutoff) {
  const std::string text = read_file(path);
  const Json doc = Json::parse(text, nullptr, false);
  std::vector<double> values;
  if (doc.is_object() && doc.contains("weights") && !doc.contains("symbols")) {
    // Weight-list fixture: {"weights": [w0, w1, ...]}.
    if (!doc["weights"].is_array()) throw SpecError(path + ":/weights", "expected an array of numbers");
    for (const auto& w : doc["weights"]) {
      if (!w.is_number()) throw SpecError(path + ":/weights", "expected an array of numbers");
      values.push_back(w.get<double>());
    }
  } else {
    const ChannelSpec spec = load_spec(path);
    const CoefficientSeries s = enumerate_by_weight(spec, cutoff);
    for (const auto& e : s.entries) values.push_back(e.weight.value(*spec.basis));
  }
  std::sort(values.begin(), values.end());
  std::vector<double> distinct;
  for (double v : values)
    if (distinct.empty() || v - distinct.back() > kMergeTolerance) distinct.push_back(v);
  return distinct;
}

int cmd_check_density(const RunConfig& cfg, const Io& io) {
  const std::vector<double> weights = density_weights(cfg.spec_path, *cfg.cutoff);
  const DensityReport r = check_density(weights, *cfg.cutoff, DensityOptions{cfg.margin});
  if (cfg.json) {
    Json j;
    j["command"] = "check-density";
    j["spec"] = cfg.spec_path;
    j["cutoff"] = r.cutoff;
    Json counts = Json::array();
    for (const auto& [n, c] : r.counts_below_n) counts.push_back(Json::array({n, c}));
    j["counts_below_n"] = counts;
    j["fitted_exponent"] = r.fitted_exponent;
    j["growth_rate"] = r.growth_rate;
    j["sse_power"] = r.sse_power;
    j["sse_exponential"] = r.sse_exponential;
    j["margin"] = cfg.margin;
    j["exponential_flag"] = r.exponential_flag;
    emit_json(io, j);
  } else {
    io.out << "# n\tdistinct weights below n\n";
    for (const auto& [n, c] : r.counts_below_n) io.out << n << "\t" << c << "\n";
    io.out << fmt::format("fitted exponent K ≈ {} (SSE {:.3g}); log-linear growth {} (SSE {:.3g})\n",
                          format_value(r.fitted_exponent), r.sse_power, format_value(r.growth_rate),
                          r.sse_exponential);
    io.out << (r.exponential_flag
                   ? "exponential_flag: true; weights grow exponentially, capacity is not well-defined\n"
                   : "exponential_flag: false\n");
  }
  if (r.exponential_flag) io.err << "warning: capacity is not well-defined for this weight set\n";
  return r.exponential_flag ? kCapacityIllDefined : kOk;
}

int cmd_gf(const RunConfig& cfg, const Io& io) {
  const ChannelSpec spec = load_spec(cfg.spec_path);
  const RationalGF gf = build_gf(spec);
  if (cfg.json) {
    Json j;
    j["command"] = "gf";
    j["spec"] = cfg.spec_path;
    j["numerator"] = terms_json(gf.numerator());
    j["denominator"] = terms_json(gf.denominator());
    j["star_form"] = is_star_form(gf);
    emit_json(io, j);
  } else {
    io.out << "numerator:   " << to_string(gf.numerator()) << "\n";
    io.out << "denominator: " << to_string(gf.denominator()) << "\n";
  }
  return kOk;
}

}  // namespace

std::string format_value(double x) {
  if (x == 0.0) return "0.00000";
  if (!std::isfinite(x)) return fmt::format("{}", x);
  const double mag = std::abs(x);
  if (mag < 1e-5 || mag >= 1e5) return fmt::format("{:.4e}", x);
  const int decimals = std::max(0, 4 - static_cast<int>(std::floor(std::log10(mag))));
  return fmt::format("{:.{}f}", x, decimals);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity of discrete noiseless channels from their generating functions", "dnc"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto positive = CLI::PositiveNumber;
  auto* cap = app.add_subcommand("capacity", "Capacity via characteristic root or smallest pole");
  cap->add_option("spec", cfg.spec_path, "Channel spec (JSON)")->required();
  auto* cap_cutoff = cap->add_option("--cutoff", cfg.cutoff, "Weight cutoff for --verify / oracle")->check(positive);
  cap->add_flag("--verify", cfg.verify, "Cross-check against brute-force enumeration");
  cap->add_option("--method", cfg.method, "auto | characteristic | pole | oracle")
      ->check(CLI::IsMember({"auto", "characteristic", "pole", "oracle"}));
  cap->add_option("--tol", cfg.tolerance, "Root bracketing tolerance")->check(positive);
  cap->add_flag("--json", cfg.json, "Machine-readable output");

  auto* coef = app.add_subcommand("coefficients", "Exact counts N[w_k] up to a weight cutoff");
  coef->add_option("spec", cfg.spec_path)->required();
  coef->add_option("--cutoff", cfg.cutoff)->required()->check(CLI::NonNegativeNumber);
  coef->add_flag("--oracle", cfg.oracle, "Count by enumeration instead of series expansion");
  coef->add_flag("--json", cfg.json);

  auto* orc = app.add_subcommand("oracle", "Brute-force enumeration and capacity estimate");
  orc->add_option("spec", cfg.spec_path)->required();
  orc->add_option("--cutoff", cfg.cutoff)->required()->check(positive);
  orc->add_flag("--json", cfg.json);

  auto* dens = app.add_subcommand("check-density", "Heuristic check that weights are not too dense");
  dens->add_option("spec", cfg.spec_path, "Channel spec or {\"weights\": [...]} fixture")->required();
  dens->add_option("--cutoff", cfg.cutoff)->required()->check(positive);
  dens->add_option("--margin", cfg.margin, "SSE ratio below which growth counts as exponential")
      ->check(positive);
  dens->add_flag("--json", cfg.json);

  auto* gf = app.add_subcommand("gf", "Print the generating function's numerator and denominator");
  gf->add_option("spec", cfg.spec_path)->required();
  gf->add_flag("--json", cfg.json);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if ((cfg.verify || cfg.method == "oracle") && cap_cutoff->count() == 0)
      throw CLI::RequiredError("--cutoff is required with --verify or --method oracle");
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const Io io{out, err};
  try {
    if (cap->parsed()) {
      cfg.command = "capacity";
      return cmd_capacity(cfg, io);
    }
    if (coef->parsed()) {
      cfg.command = "coefficients";
      return cmd_coefficients(cfg, io);
    }
    if (orc->parsed()) {
      cfg.command = "oracle";
      return cmd_oracle(cfg, io);
    }
    if (dens->parsed()) {
      cfg.command = "check-density";
      return cmd_check_density(cfg, io);
    }
    cfg.command = "gf";
    return cmd_gf(cfg, io);
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << "\n";
    return kSpecError;
  } catch (const BuildError& e) {
    err << "spec error: " << e.what() << "\n";
    return kSpecError;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolverError;
  }
}

}  // namespace dnc::cli

// Command-line front end: CSV reports and a machine-readable invariant
// summary over the quasilinear-map library. Exit codes: 0 success, 1 a
// verification-style assertion failed, 2 usage or configuration error.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qlab/asymptotics.hpp"
#include "qlab/csv.hpp"
#include "qlab/distance.hpp"
#include "qlab/estimation.hpp"
#include "qlab/maps.hpp"
#include "qlab/spaces.hpp"
#include "qlab/twisted.hpp"
#include "qlab/verify.hpp"

namespace {

constexpr double kLog2 = 0.6931471805599453;

struct RunConfig {
  double p = 1.0;
  std::vector<std::size_t> n_grid = {16, 64, 256, 1024};
  int budget = 400;
  std::uint64_t seed = 20240901;
  std::map<std::string, double> tolerances;
  std::string out_path;  // empty: write tables to stdout
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": not a number: '" + value + "'");
  }
  if (pos != value.size() || !std::isfinite(v))
    throw std::invalid_argument(key + ": not a finite number: '" + value + "'");
  return v;
}

long long parse_integer(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": not an integer: '" + value + "'");
  }
  if (pos != value.size())
    throw std::invalid_argument(key + ": not an integer: '" + value + "'");
  return v;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    const long long v = parse_integer("n-grid entry", tok);
    if (v < 1) throw std::invalid_argument("n-grid entries must be >= 1");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw std::invalid_argument("n-grid: empty list");
  return out;
}

void parse_tol_entry(const std::string& entry, std::map<std::string, double>& tol) {
  const auto eq = entry.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("--tol expects KEY=VAL, got '" + entry + "'");
  const std::string key = trim(entry.substr(0, eq));
  const double val = parse_double("tol." + key, trim(entry.substr(eq + 1)));
  if (val < 0.0) throw std::invalid_argument("tol." + key + ": must be >= 0");
  tol[key] = val;
}

/// One `key = value` per line, '#' starts a comment line, blank lines
/// ignored. Recognized keys: p, n-grid, budget, seed, out, tol.<name>.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const bool known = key == "p" || key == "n-grid" || key == "budget" ||
                       key == "seed" || key == "out" ||
                       key.rfind("tol.", 0) == 0;
    if (!known)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

/// A table stream plus the line channel for human-readable summaries: tables
/// go to --out when given (summaries then print to stdout), otherwise tables
/// take stdout and summaries move to stderr.
struct OutputTargets {
  std::unique_ptr<std::ofstream> file;
  std::ostream* table = nullptr;
  std::ostream* summary = nullptr;
};

OutputTargets open_outputs(const RunConfig& cfg) {
  OutputTargets t;
  if (!cfg.out_path.empty()) {
    t.file = std::make_unique<std::ofstream>(cfg.out_path, std::ios::binary);
    if (!*t.file)
      throw std::invalid_argument("cannot open output file: " + cfg.out_path);
    t.table = t.file.get();
    t.summary = &std::cout;
  } else {
    t.table = &std::cout;
    t.summary = &std::cerr;
  }
  return t;
}

std::string sanitize_note(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

int cmd_verify(const RunConfig& cfg) {
  qlab::VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.budget = cfg.budget;
  opts.tolerances = cfg.tolerances;
  const std::vector<qlab::CheckResult> results = qlab::run_verification(opts);

  std::unique_ptr<std::ofstream> file;
  std::ostream* lines = &std::cout;
  if (!cfg.out_path.empty()) {
    file = std::make_unique<std::ofstream>(cfg.out_path, std::ios::binary);
    if (!*file)
      throw std::invalid_argument("cannot open output file: " + cfg.out_path);
    lines = file.get();
  }

  long failed = 0;
  for (const qlab::CheckResult& r : results) {
    if (!r.pass) ++failed;
    *lines << (r.pass ? "PASS" : "FAIL") << ' ' << r.module << '.' << r.name
           << ' ' << r.detail << '\n';
  }
  std::ostringstream sum;
  sum << "verify: " << results.size() << " checks, " << failed
      << " failed (seed=" << cfg.seed << " budget=" << cfg.budget << ")";
  *lines << sum.str() << '\n';
  if (file) std::cout << sum.str() << '\n';
  return failed ? 1 : 0;
}

qlab::MapFamily make_family(const std::string& name, const RunConfig& cfg) {
  const qlab::PExponent p(cfg.p);
  if (name == "ribe") return qlab::ribe_family(cfg.n_grid);
  if (name == "kp") return qlab::kp_family(cfg.n_grid, p);
  if (name == "kp-unscaled") return qlab::kp_family_unscaled(cfg.n_grid, p);
  if (name == "linear") return qlab::linear_family(cfg.n_grid, p);
  if (name.rfind("truncation:", 0) == 0) {
    const std::string base = name.substr(std::string("truncation:").size());
    const std::size_t top =
        *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
    qlab::HomogeneousMap phi;
    if (base == "ribe") {
      phi = qlab::ribe_functional(top);
    } else if (base == "kp") {
      const double h = std::log(static_cast<double>(top)) / cfg.p;
      phi = qlab::kalton_peck_map(top, p, qlab::LipschitzProfile::clamp(h));
    } else {
      throw std::invalid_argument("unknown truncation base: '" + base + "'");
    }
    return qlab::truncation_family(phi, cfg.n_grid, cfg.budget, cfg.seed).family;
  }
  throw std::invalid_argument("unknown family: '" + name + "'");
}

int cmd_report(const std::string& family_name, const RunConfig& cfg) {
  const qlab::MapFamily family = make_family(family_name, cfg);
  const qlab::AccessibilityReport rep =
      qlab::accessibility_report(family, cfg.budget, cfg.seed);

  OutputTargets out = open_outputs(cfg);
  qlab::CsvWriter csv(*out.table);
  csv.header({"n", "norm_est", "q_lb", "q_ub", "dist_lb", "classification",
              "notes", "seed"});
  const std::string verdict = qlab::to_string(rep.classification);
  for (const qlab::AccessibilityRow& row : rep.rows) {
    csv.cell(row.n).cell(row.norm_est).cell(row.q_lb);
    if (row.q_ub)
      csv.cell(*row.q_ub);
    else
      csv.cell(std::string_view{});
    std::string notes = sanitize_note(row.notes);
    if (row.dist_certified) notes += ";certified";
    csv.cell(row.dist_lb).cell(verdict).cell(notes).cell(std::size_t{rep.seed});
    csv.end_row();
  }
  *out.summary << "family=" << rep.label << " classification=" << verdict
               << '\n';
  return 0;
}

int cmd_lemma_w(double step, const RunConfig& cfg) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("lemma-w: step must be a positive number");
  const qlab::LemmaWResult res = qlab::lemma_w_scan(qlab::lemma_w_grid(step));

  OutputTargets out = open_outputs(cfg);
  qlab::CsvWriter csv(*out.table);
  csv.header({"step", "max_ratio", "argmax_s", "argmax_t", "pairs_scanned",
              "seed"});
  csv.cell(step)
      .cell(res.max_ratio)
      .cell(res.argmax_s)
      .cell(res.argmax_t)
      .cell(res.pairs_scanned)
      .cell(std::size_t{cfg.seed});
  csv.end_row();

  const double gap = std::fabs(res.max_ratio - kLog2);
  const bool sound = res.max_ratio <= kLog2 + 1e-12;
  const bool attained = gap <= 1e-3;
  *out.summary << "lemma-w: max_ratio=" << qlab::CsvWriter::format(res.max_ratio)
               << " gap_to_log2=" << qlab::CsvWriter::format(gap)
               << " sound=" << (sound ? "yes" : "no")
               << " attained=" << (attained ? "yes" : "no") << '\n';
  return (sound && attained) ? 0 : 1;
}

int cmd_derivation(const RunConfig& cfg) {
  const qlab::PExponent p(cfg.p);
  const qlab::Vec s2(std::vector<double>{1.0, 1.0});

  OutputTargets out = open_outputs(cfg);
  qlab::CsvWriter csv(*out.table);
  csv.header({"n", "defect_measured", "defect_closed_form", "variant_defect",
              "idempotent_decay"});
  for (std::size_t n : cfg.n_grid) {
    const qlab::LeibnizDefect ld =
        qlab::leibniz_defect(qlab::DerivationKind::Homogeneous, s2, s2, n, p);
    qlab::RngStream rng(cfg.seed, 0xde70000ULL + n);
    double variant = 0.0;
    for (int i = 0; i < 8; ++i) {
      const qlab::Vec a = qlab::gaussian_vec(6, rng);
      const qlab::Vec b = qlab::gaussian_vec(6, rng);
      variant = std::max(
          variant,
          qlab::leibniz_defect(qlab::DerivationKind::Variant, a, b, n, p).measured);
    }
    csv.cell(n)
        .cell(ld.measured)
        .cell(ld.closed_form ? *ld.closed_form : 0.0)
        .cell(variant)
        .cell(qlab::derivation_idempotent_decay(4, n, p));
    csv.end_row();
  }
  *out.summary << "derivation: seed=" << cfg.seed << " p="
               << qlab::CsvWriter::format(cfg.p) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasilinear map laboratory: norms, defect estimates, distance "
               "bounds, twisted sums, and accessibility reports"};
  app.require_subcommand(1);

  double p_flag = 1.0;
  std::string grid_flag;
  int budget_flag = 400;
  std::uint64_t seed_flag = 20240901;
  std::string config_flag;
  std::string out_flag;
  std::vector<std::string> tol_flag;

  auto* p_opt = app.add_option("--p", p_flag, "Quasinorm exponent p > 0");
  auto* grid_opt =
      app.add_option("--n-grid", grid_flag, "Comma-separated dimensions, e.g. 10,100,1000");
  auto* budget_opt =
      app.add_option("--budget", budget_flag, "Sampling budget per estimate");
  auto* seed_opt = app.add_option("--seed", seed_flag, "Root seed for all sampling");
  app.add_option("--config", config_flag, "key = value config file; flags win");
  auto* out_opt = app.add_option("--out", out_flag, "Write the table to this file");
  app.add_option("--tol", tol_flag, "Tolerance override KEY=VAL (repeatable)");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run every module's invariant checks");
  CLI::App* report_cmd = app.add_subcommand(
      "report", "Accessibility report for a map family (CSV)");
  std::string family_arg;
  report_cmd
      ->add_option("family", family_arg,
                   "ribe | kp | kp-unscaled | linear | truncation:ribe | truncation:kp")
      ->required();
  CLI::App* lemma_cmd = app.add_subcommand(
      "lemma-w", "Grid maximum of the two-variable defect ratio of t log|t|");
  double step_arg = 0.001;
  lemma_cmd->add_option("step", step_arg, "Grid step on [-2, 2] (default 0.001)");
  CLI::App* deriv_cmd = app.add_subcommand(
      "derivation", "Leibniz defects and idempotent decay of the derivation-like maps");

  for (CLI::App* sub : {verify_cmd, report_cmd, lemma_cmd, deriv_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    std::map<std::string, std::string> file_kv;
    if (!config_flag.empty()) file_kv = read_config(config_flag);
    auto from_file = [&](const char* key) -> const std::string* {
      auto it = file_kv.find(key);
      return it == file_kv.end() ? nullptr : &it->second;
    };

    if (p_opt->count() == 0)
      if (const std::string* v = from_file("p")) p_flag = parse_double("p", *v);
    cfg.p = p_flag;
    (void)qlab::PExponent(cfg.p);  // validates: finite and > 0

    if (grid_opt->count() > 0) {
      cfg.n_grid = parse_grid(grid_flag);
    } else if (const std::string* v = from_file("n-grid")) {
      cfg.n_grid = parse_grid(*v);
    }

    if (budget_opt->count() == 0)
      if (const std::string* v = from_file("budget"))
        budget_flag = static_cast<int>(parse_integer("budget", *v));
    if (budget_flag < 1) throw std::invalid_argument("budget must be >= 1");
    cfg.budget = budget_flag;

    if (seed_opt->count() == 0)
      if (const std::string* v = from_file("seed"))
        seed_flag = static_cast<std::uint64_t>(parse_integer("seed", *v));
    cfg.seed = seed_flag;

    if (out_opt->count() == 0) {
      if (const std::string* v = from_file("out")) out_flag = *v;
    }
    cfg.out_path = out_flag;

    for (const auto& [key, value] : file_kv)
      if (key.rfind("tol.", 0) == 0)
        cfg.tolerances[key.substr(4)] = parse_double(key, value);
    for (const std::string& entry : tol_flag) parse_tol_entry(entry, cfg.tolerances);

    if (verify_cmd->parsed()) return cmd_verify(cfg);
    if (report_cmd->parsed()) return cmd_report(family_arg, cfg);
    if (lemma_cmd->parsed()) return cmd_lemma_w(step_arg, cfg);
    if (deriv_cmd->parsed()) return cmd_derivation(cfg);
    throw std::invalid_argument("no command given");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

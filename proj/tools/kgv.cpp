// kgv: batch front end for the certifier, the sharpness searches, and the
// bilinear validation runs. Exit codes: 0 success, 1 usage/input error,
// 2 verification failure.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "kgv/bilinear.hpp"
#include "kgv/certifier.hpp"
#include "kgv/errors.hpp"
#include "kgv/sharpness.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

struct CommonOpts {
  std::string out_dir = "kgv-out";
  std::uint64_t seed = 20240711ULL;
  int workers = 1;
  double tolerance = 0.05;
};

void add_common(CLI::App* cmd, CommonOpts& c, std::string& config_path) {
  cmd->add_option("--config", config_path, "TOML key = value file; flags override file values");
  cmd->add_option("--out", c.out_dir, "output directory for report files");
  cmd->add_option("--seed", c.seed, "seed for every randomized check (recorded in reports)");
  cmd->add_option("--workers", c.workers, "worker threads (0 = hardware)")
      ->envname("KGV_WORKERS");
  cmd->add_option("--tolerance", c.tolerance, "verification tolerance where applicable");
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw kgv::Error("cannot write " + path.string());
  out << text;
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

kgv::FrequencyProfile parse_profile(const std::string& spec, double lattice_L) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "csv") return kgv::FrequencyProfile::from_csv(args);
  double a = 0, b = 0, amp = 1.0;
  {
    std::string tmp = args;
    std::replace(tmp.begin(), tmp.end(), ',', ' ');
    std::istringstream in(tmp);
    if (!(in >> a >> b)) throw kgv::InvalidParameter("profile spec needs a,b: " + spec);
    in >> amp;
  }
  if (kind == "bump") return kgv::FrequencyProfile::bump_on_lattice(a, b, lattice_L, amp);
  if (kind == "arch") return kgv::FrequencyProfile::arch_on_lattice(a, b, lattice_L, amp);
  if (kind == "ramp") return kgv::FrequencyProfile::ramp_on_lattice(a, b, lattice_L, amp);
  throw kgv::InvalidParameter("unknown profile kind: " + kind);
}


// Flat TOML-style config: `key = value` lines, # comments, optional quoted
// values; section headers are ignored. Entries become --key flags spliced in
// right after the subcommand token, so flags the user passed explicitly keep
// precedence (duplicates from the file are dropped).
std::vector<std::string> config_file_flags(const std::string& path,
                                           const std::vector<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw kgv::Error("cannot read config file: " + path);
  std::vector<std::string> flags;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line.front() == '[' && line.back() == ']') continue;  // section header
    auto eq = line.find('=');
    if (eq == std::string::npos) throw kgv::Error("config line is not key = value: " + line);
    auto trim = [](std::string v) {
      auto a = v.find_first_not_of(" \t");
      auto b = v.find_last_not_of(" \t");
      if (a == std::string::npos) return std::string();
      v = v.substr(a, b - a + 1);
      if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                            (v.front() == '\'' && v.back() == '\'')))
        v = v.substr(1, v.size() - 2);
      return v;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw kgv::Error("config line has an empty key: " + line);
    std::string flag = "--" + key;
    bool overridden = false;
    for (const auto& g : given)
      if (g == flag || g.rfind(flag + "=", 0) == 0) overridden = true;
    if (overridden) continue;
    flags.push_back(flag);
    // split multi-value entries (space separated) so vector options work
    std::istringstream vs(value);
    std::string piece;
    while (vs >> piece) flags.push_back(piece);
  }
  return flags;
}

std::vector<std::string> splice_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> flags = config_file_flags(path, args);
  auto it = std::find_if(args.begin(), args.end(),
                         [](const std::string& a) { return !a.empty() && a[0] != '-'; });
  if (it != args.end()) ++it;
  args.insert(it, flags.begin(), flags.end());
  return args;
}

int run_certify(const CommonOpts& common, const std::string& target_name, double constant_opt,
                double alpha, int max_depth, double min_width, long budget, int initial_depth) {
  kgv::CertifyConfig config;
  config.max_depth = max_depth;
  config.min_width = min_width;
  config.box_budget = budget;
  config.workers = common.workers;
  config.initial_depth = initial_depth;
  config.seed = common.seed;

  auto run_one = [&](kgv::Family family, double constant) -> kgv::CertifyResult {
    kgv::InequalityTarget target =
        std::isnan(constant) ? kgv::make_target(family) : kgv::make_target(family, constant);
    return kgv::certify(target, config);
  };

  if (target_name == "interp") {
    auto e2 = run_one(kgv::Family::E2, std::nan(""));
    auto elem2 = run_one(kgv::Family::Elem2, std::nan(""));
    if (!std::holds_alternative<kgv::Certificate>(e2) ||
        !std::holds_alternative<kgv::Certificate>(elem2)) {
      std::cerr << "endpoint certification failed; cannot interpolate\n";
      return kExitVerification;
    }
    auto conclusion = kgv::compose_interpolation(std::get<kgv::Certificate>(e2),
                                                 std::get<kgv::Certificate>(elem2), alpha,
                                                 100000, common.seed);
    fs::path path = fs::path(common.out_dir) / ("conclusion_alpha_" + fmt_double(alpha) + ".json");
    write_file(path, kgv::conclusion_to_json(conclusion) + "\n");
    std::cout << "interpolated conclusion alpha=" << alpha
              << " constant=" << conclusion.constant << " violations=" << conclusion.violations
              << " -> " << path.string() << "\n";
    return conclusion.violations == 0 ? kExitOk : kExitVerification;
  }

  kgv::Family family = kgv::family_from_name(target_name);
  auto result = run_one(family, constant_opt);
  if (std::holds_alternative<kgv::Certificate>(result)) {
    const auto& cert = std::get<kgv::Certificate>(result);
    fs::create_directories(common.out_dir);
    fs::path path = fs::path(common.out_dir) / ("cert_" + target_name + ".json");
    kgv::save_certificate(cert, path);
    std::cout << "certified " << target_name << ": " << cert.boxes.size() << " boxes, "
              << cert.box_count << " processed, " << cert.walltime_ms << " ms -> "
              << path.string() << "\n";
    return kExitOk;
  }
  const auto& fail = std::get<kgv::CertFailure>(result);
  std::cout << "CertFailure for " << target_name << " (not a disproof): suspect box t1=["
            << fmt_double(fail.suspect.t1.lo()) << "," << fmt_double(fail.suspect.t1.hi())
            << "] t2=[" << fmt_double(fail.suspect.t2.lo()) << ","
            << fmt_double(fail.suspect.t2.hi()) << "] bound=[" << fmt_double(fail.bound.lo())
            << "," << fmt_double(fail.bound.hi()) << "]"
            << (fail.refuted ? " (factored margin provably negative)" : " (inconclusive)")
            << "\n";
  return kExitVerification;
}

int run_sharpness(const CommonOpts& common, std::vector<double> a_grid, std::vector<double> c_grid,
                  const std::string& trace_name, double slope_alpha, double slope_xi1) {
  if (!trace_name.empty()) {
    kgv::RatioTrace trace = kgv::extremal_ratio(kgv::trace_family_from_name(trace_name), 8);
    fs::path path = fs::path(common.out_dir) / ("trace_" + trace_name + ".csv");
    write_file(path, kgv::trace_to_csv(trace));
    std::cout << "trace " << trace_name << ": final ratio "
              << fmt_double(trace.samples.back().second) << " -> " << path.string() << "\n";
    return kExitOk;
  }
  if (slope_alpha > 0.0) {
    kgv::SlopeFit fit = kgv::alpha_blowup_slope(slope_alpha, slope_xi1);
    std::cout << "blowup slope alpha=" << slope_alpha << " xi1=" << slope_xi1 << ": "
              << fmt_double(fit.slope) << " (expected " << fmt_double(slope_alpha - 1.0) << ")\n";
    return kExitOk;
  }
  if (a_grid.empty()) a_grid = {0.55, 0.6, 0.65, 0.7, 0.74};
  if (c_grid.empty()) c_grid = {1.0, 2.0, 10.0, 100.0};
  for (double a : a_grid)
    if (!(a > 0.5 && a < 0.75)) {
      std::cerr << "exponent grid value " << a << " outside (1/2, 3/4)\n";
      return kExitUsage;
    }
  for (double c : c_grid)
    if (!(c >= 1.0)) {
      std::cerr << "constant grid value " << c << " below 1\n";
      return kExitUsage;
    }
  auto rows = kgv::violation_grid(a_grid, c_grid, common.workers);
  write_file(fs::path(common.out_dir) / "violations.csv", kgv::violations_to_csv(rows));
  write_file(fs::path(common.out_dir) / "violations.jsonl", kgv::violations_to_jsonl(rows));
  std::cout << "violations: " << rows.size() << " rows (every cell), re-verified at high precision -> "
            << (fs::path(common.out_dir) / "violations.csv").string() << "\n";
  return kExitOk;
}

int run_bilinear(const CommonOpts& common, const std::string& p1_spec, const std::string& p2_spec,
                 double L, int nx, double dt, double t_initial, int max_doublings) {
  kgv::SpaceTimeGrid grid(L, nx, dt, t_initial, max_doublings);
  kgv::FrequencyProfile p1 = parse_profile(p1_spec, grid.L);
  kgv::FrequencyProfile p2 = parse_profile(p2_spec, grid.L);
  kgv::BilinearReport report = kgv::make_report(p1, p2, grid, 0.01, common.workers);
  write_file(fs::path(common.out_dir) / "bilinear_report.json", report.to_json() + "\n");
  write_file(fs::path(common.out_dir) / "bilinear_summary.csv",
             kgv::BilinearReport::csv_header() + report.to_csv_row());
  bool identity_ok = report.identity_rel_err <= common.tolerance;
  bool ordering_ok = report.frequency <= report.bound_A && report.frequency <= report.bound_1;
  bool alias_ok = report.alias_fraction < 1e-6;
  std::cout << "bilinear: spacetime=" << fmt_double(report.spacetime)
            << " frequency=" << fmt_double(report.frequency)
            << " rel_err=" << fmt_double(report.identity_rel_err)
            << " bound_A=" << fmt_double(report.bound_A)
            << " bound_1=" << fmt_double(report.bound_1)
            << (identity_ok && ordering_ok && alias_ok ? " [ok]" : " [FAIL]") << "\n";
  if (!identity_ok)
    std::cout << "identity error " << fmt_double(report.identity_rel_err) << " above tolerance "
              << fmt_double(common.tolerance) << "\n";
  if (!ordering_ok) std::cout << "bound ordering violated\n";
  if (!alias_ok)
    std::cout << "boundary-band energy fraction " << fmt_double(report.alias_fraction)
              << " exceeds 1e-6\n";
  return identity_ok && ordering_ok && alias_ok ? kExitOk : kExitVerification;
}

int run_replay(const std::string& cert_path) {
  if (!fs::exists(cert_path)) {
    std::cerr << "certificate file not found: " << cert_path << "\n";
    return kExitUsage;
  }
  kgv::Certificate cert = kgv::load_certificate(cert_path);
  kgv::replay(cert);  // throws on any fault
  std::cout << "replay ok: " << cert.boxes.size() << " boxes re-verified, tiling complete\n";
  return kExitOk;
}

int run_weights(const CommonOpts& common, std::vector<double> region, int resolution) {
  if (region.size() != 4) {
    std::cerr << "--region needs xi1_lo,xi1_hi,xi2_lo,xi2_hi\n";
    return kExitUsage;
  }
  auto map = kgv::weight_comparison(region[0], region[1], region[2], region[3], resolution);
  write_file(fs::path(common.out_dir) / "weight_map.csv", map.to_csv());
  std::ostringstream summary;
  summary << "{\"count_A_tighter\":" << map.count_A_tighter
          << ",\"count_1_tighter\":" << map.count_1_tighter << ",\"count_tie\":" << map.count_tie
          << ",\"skipped_near_diagonal\":" << map.skipped_near_diagonal << "}\n";
  write_file(fs::path(common.out_dir) / "weight_summary.json", summary.str());
  std::cout << "weights: A tighter at " << map.count_A_tighter << " points, bound_1 tighter at "
            << map.count_1_tighter << " -> " << (fs::path(common.out_dir) / "weight_map.csv").string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for the one-dimensional Klein-Gordon bilinear estimates"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string config_path;

  auto* certify = app.add_subcommand("certify", "run the interval branch-and-bound prover");
  std::string target_name;
  double constant_opt = std::nan("");
  double alpha = 1.5;
  int max_depth = 40, initial_depth = 4;
  double min_width = 1e-8;
  long budget = 10'000'000;
  certify->add_option("--target", target_name, "E2 | E5 | Elem2 | interp")->required();
  certify->add_option("--constant", constant_opt, "override the inequality constant (control runs)");
  certify->add_option("--alpha", alpha, "alpha for --target interp, in [1, 2]");
  certify->add_option("--max-depth", max_depth);
  certify->add_option("--min-width", min_width);
  certify->add_option("--budget", budget);
  certify->add_option("--initial-depth", initial_depth);
  add_common(certify, common, config_path);

  auto* sharp = app.add_subcommand("sharpness", "violation grid, extremal traces, blowup slopes");
  std::vector<double> a_grid, c_grid;
  std::string trace_name;
  double slope_alpha = 0.0, slope_xi1 = 1.0;
  sharp->add_option("--a-grid", a_grid, "exponents in (1/2, 3/4)");
  sharp->add_option("--c-grid", c_grid, "constants >= 1");
  sharp->add_option("--trace", trace_name, "sigma1_over_J | sigma2_over_J");
  sharp->add_option("--slope-alpha", slope_alpha, "alpha in (0, 1] for the blowup slope");
  sharp->add_option("--slope-xi1", slope_xi1, "base point for the blowup slope");
  add_common(sharp, common, config_path);

  auto* bilinear = app.add_subcommand("bilinear", "space-time vs frequency identity and bounds");
  std::string p1_spec = "bump:1,2", p2_spec = "bump:3,4";
  double L = 704.0, dt = 0.1, t_initial = 32.0;
  int nx = 32768, max_doublings = 4;
  bilinear->add_option("--profile1", p1_spec, "bump:a,b[,amp] | arch:a,b[,amp] | csv:path");
  bilinear->add_option("--profile2", p2_spec, "second profile (support must be disjoint)");
  bilinear->add_option("--grid-L", L);
  bilinear->add_option("--grid-nx", nx);
  bilinear->add_option("--grid-dt", dt);
  bilinear->add_option("--t-initial", t_initial);
  bilinear->add_option("--max-doublings", max_doublings);
  add_common(bilinear, common, config_path);

  auto* replay_cmd = app.add_subcommand("replay", "re-verify a stored certificate");
  std::string cert_path;
  replay_cmd->add_option("--cert", cert_path, "certificate JSON path")->required();
  add_common(replay_cmd, common, config_path);

  auto* weights = app.add_subcommand("weights", "pointwise weight tightness map");
  std::vector<double> region = {-3.0, 3.0, -3.0, 3.0};
  int resolution = 64;
  weights->add_option("--region", region, "xi1_lo,xi1_hi,xi2_lo,xi2_hi")->expected(4);
  weights->add_option("--resolution", resolution);
  add_common(weights, common, config_path);

  std::vector<std::string> args;
  try {
    args = splice_config_args(argc, argv);
  } catch (const kgv::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    std::reverse(args.begin(), args.end());  // CLI11 vector parse takes reversed args
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (certify->parsed())
      return run_certify(common, target_name, constant_opt, alpha, max_depth, min_width, budget,
                         initial_depth);
    if (sharp->parsed())
      return run_sharpness(common, a_grid, c_grid, trace_name, slope_alpha, slope_xi1);
    if (bilinear->parsed())
      return run_bilinear(common, p1_spec, p2_spec, L, nx, dt, t_initial, max_doublings);
    if (replay_cmd->parsed()) return run_replay(cert_path);
    if (weights->parsed()) return run_weights(common, region, resolution);
  } catch (const kgv::SupportsOverlap& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const kgv::InvalidParameter& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const kgv::BadExponentRange& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const kgv::TileGap& e) {
    std::cerr << "replay fault: " << e.what() << "\n";
    return kExitVerification;
  } catch (const kgv::TileOverlap& e) {
    std::cerr << "replay fault: " << e.what() << "\n";
    return kExitVerification;
  } catch (const kgv::NegativeBound& e) {
    std::cerr << "replay fault: " << e.what() << "\n";
    return kExitVerification;
  } catch (const kgv::CertificateFormat& e) {
    std::cerr << "replay fault: " << e.what() << "\n";
    return kExitVerification;
  } catch (const kgv::SearchFailed& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const kgv::NotConverged& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const kgv::ReformulationMismatch& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const kgv::BudgetExhausted& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const kgv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

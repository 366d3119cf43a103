#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "kgv/certifier.hpp"

namespace kgv {

namespace {

using nlohmann::json;

// exact shortest-roundtrip decimal for a double
std::string double_to_string(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double double_from_string(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw CertificateFormat("bad decimal literal: " + s);
  return v;
}

std::string status_name(BoxStatus s) {
  return s == BoxStatus::verified ? "verified" : "boundary-equality-verified";
}

BoxStatus status_from_name(const std::string& s) {
  if (s == "verified") return BoxStatus::verified;
  if (s == "boundary-equality-verified") return BoxStatus::boundary_equality_verified;
  throw CertificateFormat("unknown box status: " + s);
}

std::string domain_name(DomainTag d) {
  return d == DomainTag::upper_triangle ? "upper-triangle" : "full-square";
}

DomainTag domain_from_name(const std::string& s) {
  if (s == "upper-triangle") return DomainTag::upper_triangle;
  if (s == "full-square") return DomainTag::full_square;
  throw CertificateFormat("unknown domain tag: " + s);
}

}  // namespace

std::string certificate_to_json(const Certificate& cert) {
  json j;
  j["target"] = {
      {"family", family_name(cert.family)},
      {"constant", double_to_string(cert.constant)},
      {"domain", domain_name(cert.domain)},
      {"analysis", cert.analysis},
  };
  j["config"] = {
      {"max_depth", cert.config.max_depth},
      {"min_width", double_to_string(cert.config.min_width)},
      {"box_budget", cert.config.box_budget},
      {"workers", cert.config.workers},
      {"initial_depth", cert.config.initial_depth},
      {"validate_samples", cert.config.validate_samples},
      {"seed", std::to_string(cert.config.seed)},
  };
  json boxes = json::array();
  for (const auto& b : cert.boxes) {
    boxes.push_back({
        {"t1", {double_to_string(b.box.t1.lo()), double_to_string(b.box.t1.hi())}},
        {"t2", {double_to_string(b.box.t2.lo()), double_to_string(b.box.t2.hi())}},
        {"bound", double_to_string(b.bound_lo)},
        {"status", status_name(b.status)},
    });
  }
  j["boxes"] = std::move(boxes);
  j["count"] = cert.box_count;
  j["walltime_ms"] = cert.walltime_ms;
  return j.dump(1);
}

Certificate certificate_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CertificateFormat(std::string("certificate JSON parse: ") + e.what());
  }
  try {
    Certificate cert;
    cert.family = family_from_name(j.at("target").at("family").get<std::string>());
    cert.constant = double_from_string(j.at("target").at("constant").get<std::string>());
    cert.domain = domain_from_name(j.at("target").at("domain").get<std::string>());
    if (j.at("target").contains("analysis"))
      cert.analysis = j.at("target").at("analysis").get<std::vector<std::string>>();
    const auto& cfg = j.at("config");
    cert.config.max_depth = cfg.at("max_depth").get<int>();
    cert.config.min_width = double_from_string(cfg.at("min_width").get<std::string>());
    cert.config.box_budget = cfg.at("box_budget").get<long>();
    cert.config.workers = cfg.at("workers").get<int>();
    cert.config.initial_depth = cfg.at("initial_depth").get<int>();
    cert.config.validate_samples = cfg.at("validate_samples").get<long>();
    cert.config.seed = std::stoull(cfg.at("seed").get<std::string>());
    for (const auto& b : j.at("boxes")) {
      CertifiedBox cb;
      cb.box.t1 = Interval(double_from_string(b.at("t1").at(0).get<std::string>()),
                           double_from_string(b.at("t1").at(1).get<std::string>()));
      cb.box.t2 = Interval(double_from_string(b.at("t2").at(0).get<std::string>()),
                           double_from_string(b.at("t2").at(1).get<std::string>()));
      cb.bound_lo = double_from_string(b.at("bound").get<std::string>());
      cb.status = status_from_name(b.at("status").get<std::string>());
      cert.boxes.push_back(cb);
    }
    cert.box_count = j.at("count").get<long>();
    cert.walltime_ms = j.at("walltime_ms").get<long>();
    return cert;
  } catch (const json::exception& e) {
    throw CertificateFormat(std::string("certificate JSON structure: ") + e.what());
  }
}

void save_certificate(const Certificate& cert, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open certificate file for writing: " + path.string());
  out << certificate_to_json(cert) << "\n";
}

Certificate load_certificate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open certificate file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return certificate_from_json(ss.str());
}

namespace {

struct BoxKey {
  double a, b, c, d;
  bool operator<(const BoxKey& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    if (c != o.c) return c < o.c;
    return d < o.d;
  }
};

BoxKey key_of(const AngleBox& box) {
  return BoxKey{box.t1.lo(), box.t1.hi(), box.t2.lo(), box.t2.hi()};
}

// Recursive quadtree cover: a node is covered when it is a certificate leaf,
// an excluded below-diagonal region, or all four bisection children are
// covered. Midpoints are recomputed exactly as the certifier computed them,
// so matching is exact on double endpoints.
void check_cover(const AngleBox& node, const std::map<BoxKey, std::size_t>& leaves,
                 std::vector<bool>& used, DomainTag domain, double min_leaf_width) {
  auto it = leaves.find(key_of(node));
  if (it != leaves.end()) {
    if (used[it->second]) throw TileOverlap("leaf encountered twice in the tiling tree");
    used[it->second] = true;
    return;
  }
  if (domain == DomainTag::upper_triangle && node.t2.hi() <= node.t1.lo()) return;
  if (box_width(node) < 0.5 * min_leaf_width)
    throw TileGap("region uncovered near t1=[" + std::to_string(node.t1.lo()) + "," +
                  std::to_string(node.t1.hi()) + "], t2=[" + std::to_string(node.t2.lo()) + "," +
                  std::to_string(node.t2.hi()) + "]");
  auto [l1, r1] = bisect(node.t1);
  auto [l2, r2] = bisect(node.t2);
  const Interval t1s[2] = {l1, r1};
  const Interval t2s[2] = {l2, r2};
  for (const auto& p2 : t2s)
    for (const auto& p1 : t1s)
      check_cover(AngleBox{p1, p2, node.depth + 1}, leaves, used, domain, min_leaf_width);
}

}  // namespace

bool replay(const Certificate& cert) {
  if (cert.boxes.empty()) throw TileGap("certificate has no boxes");

  double min_leaf_width = box_width(cert.boxes.front().box);
  for (const auto& b : cert.boxes) {
    if (b.bound_lo < 0.0) throw NegativeBound("stored bound is negative");
    min_leaf_width = std::min(min_leaf_width, box_width(b.box));
  }

  // independent re-evaluation with the interval engine
  InequalityTarget target = make_target(cert.family, cert.constant);
  for (const auto& b : cert.boxes) {
    Interval bound = target.factored_bound(b.box);
    if (bound.lo() < 0.0) throw NegativeBound("re-evaluated margin bound is negative");
  }

  std::map<BoxKey, std::size_t> leaves;
  for (std::size_t i = 0; i < cert.boxes.size(); ++i) {
    auto [it, inserted] = leaves.emplace(key_of(cert.boxes[i].box), i);
    if (!inserted) throw TileOverlap("duplicate box in certificate");
  }
  std::vector<bool> used(cert.boxes.size(), false);
  check_cover(root_box(), leaves, used, cert.domain, min_leaf_width);
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) throw TileOverlap("box does not belong to the bisection tree");
  return true;
}

std::string conclusion_to_json(const InterpolatedConclusion& c) {
  json j;
  j["alpha"] = double_to_string(c.alpha);
  j["constant"] = double_to_string(c.constant);
  j["statement"] = c.statement;
  j["spot_check"] = {
      {"samples", c.spot_samples},
      {"violations", c.violations},
      {"max_ratio", double_to_string(c.max_ratio)},
      {"seed", std::to_string(c.seed)},
  };
  return j.dump(1);
}

}  // namespace kgv

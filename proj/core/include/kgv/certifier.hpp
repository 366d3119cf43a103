#ifndef KGV_CERTIFIER_HPP
#define KGV_CERTIFIER_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "kgv/interval.hpp"

// Interval branch-and-bound prover for the three inequality families, run
// in compactified angle coordinates (theta1, theta2) in [-pi/2, pi/2]^2
// with s = sin(theta). The raw margins all vanish on the diagonal, so each
// target certifies a factored margin whose removed factor is provably
// nonnegative on its domain; the hand-derived factorizations are guarded by
// validate_reformulation before any certification run.

namespace kgv {

enum class Family { E2, E5, Elem2 };
enum class DomainTag { full_square, upper_triangle };
enum class BoxStatus { verified, boundary_equality_verified };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct AngleBox {
  Interval t1;
  Interval t2;
  int depth = 0;
};

double box_width(const AngleBox& b);

// Root box: [-H, H]^2 with H the upper endpoint of the pi/2 enclosure, so
// theta = +-pi/2 (s = +-1, the infinite frequencies) is covered.
AngleBox root_box();

class InequalityTarget {
 public:
  InequalityTarget(Family family, double constant);

  Family family() const { return family_; }
  double constant() const { return constant_; }
  DomainTag domain() const { return DomainTag::upper_triangle; }
  // true when the constant is the sharp one the sign-evident factoring covers
  bool canonical() const;
  std::string name() const { return family_name(family_); }
  // analysis steps (factorizations / domain-range clamps) baked into the
  // interval evaluation; recorded in emitted certificates
  const std::vector<std::string>& analysis() const { return analysis_; }

  // point evaluations in theta coordinates (theta2 >= theta1)
  double margin_raw(double th1, double th2) const;
  double margin_factored(double th1, double th2) const;
  double removed_factor(double th1, double th2) const;
  // magnitude of the terms the raw margin subtracts (the comparison scale
  // for validate_reformulation; the margin itself vanishes on the diagonal)
  double margin_scale(double th1, double th2) const;

  // rigorous lower/upper bound of the factored margin over box /\ domain
  Interval factored_bound(const AngleBox& box) const;

  // test hook: deliberately corrupt the factored form (negative control for
  // validate_reformulation)
  void corrupt_factored_for_test() { corrupted_ = true; }

 private:
  Family family_;
  double constant_;
  bool corrupted_ = false;
  std::vector<std::string> analysis_;
};

InequalityTarget make_target(Family family);                   // sharp constant
InequalityTarget make_target(Family family, double constant);  // control variant

struct CertifyConfig {
  int max_depth = 40;
  double min_width = 1e-8;  // radians
  long box_budget = 10'000'000;
  int workers = 1;
  // pre-split depth of the root box before bound evaluation; the canonical
  // targets verify already at the root, the pre-split keeps certificates
  // substantive and exercises tiling and replay
  int initial_depth = 4;
  std::uint64_t seed = 0x6b67760a11ce5eedULL;  // drives validate_reformulation sampling
  long validate_samples = 20'000;
};

struct CertifiedBox {
  AngleBox box;
  double bound_lo = 0.0;
  BoxStatus status = BoxStatus::verified;
};

struct Certificate {
  Family family = Family::E2;
  double constant = 1.0;
  DomainTag domain = DomainTag::upper_triangle;
  std::vector<std::string> analysis;
  CertifyConfig config;
  std::vector<CertifiedBox> boxes;  // canonically sorted tiling
  long box_count = 0;               // total boxes processed during the run
  long walltime_ms = 0;
};

// Inconclusive (or refuted-control) outcome: NOT a disproof of the
// inequality itself; disproof search lives in the sharpness module.
struct CertFailure {
  AngleBox suspect;
  Interval bound{0.0, 0.0};
  bool refuted = false;  // true when the factored margin is provably negative on the box
  long boxes_processed = 0;
};

using CertifyResult = std::variant<Certificate, CertFailure>;

// Runs validate_reformulation first (ReformulationMismatch aborts), then the
// deterministic widest-first subdivision. Throws BudgetExhausted past the
// box budget. Results are identical for any worker count.
CertifyResult certify(const InequalityTarget& target, const CertifyConfig& config = {});

struct ReformulationReport {
  long samples = 0;
  double max_rel_discrepancy = 0.0;
  double min_removed_factor = 0.0;
  bool pass = false;
};

// Checks |margin_raw - removed_factor * margin_factored| <= 1e-10 * scale and
// removed_factor >= 0 at random interior points; throws ReformulationMismatch
// on failure.
ReformulationReport validate_reformulation(const InequalityTarget& target, long samples,
                                           std::uint64_t seed = 0x6b67760a11ce5eedULL);

struct InterpolatedConclusion {
  double alpha = 1.0;
  double constant = 1.0;  // 2^(alpha-1)
  std::string statement;
  long spot_samples = 0;
  long violations = 0;
  double max_ratio = 0.0;  // max sigma_alpha / (2^(alpha-1) J) observed
  std::uint64_t seed = 0;
};

// Combines the two endpoint certificates through the factorization identity
// sigma_alpha = sigma_1^(2-alpha) sigma_2^(alpha-1); spot-checks the
// conclusion at random points (zero violations expected).
InterpolatedConclusion compose_interpolation(const Certificate& cert_e2,
                                             const Certificate& cert_elem2, double alpha,
                                             long spot_samples = 100'000,
                                             std::uint64_t seed = 0x6b67760a11ce5eedULL);

// Certificate files: JSON with endpoints as exact shortest-roundtrip decimal
// strings (see README for the schema).
void save_certificate(const Certificate& cert, const std::filesystem::path& path);
Certificate load_certificate(const std::filesystem::path& path);
std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);

// Independently re-evaluates every box with the interval engine and checks
// the tiling. Returns true on success; throws TileGap / TileOverlap /
// NegativeBound on the corresponding fault.
bool replay(const Certificate& cert);

std::string conclusion_to_json(const InterpolatedConclusion& c);

}  // namespace kgv

#endif  // KGV_CERTIFIER_HPP

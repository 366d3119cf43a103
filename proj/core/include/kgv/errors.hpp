#ifndef KGV_ERRORS_HPP
#define KGV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kgv {

// Base class for every error this library raises on a violated precondition
// or a failed verification step. Domain violations are errors, never NaNs.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// interval
struct DivisionByZeroInterval : Error {
  explicit DivisionByZeroInterval(const std::string& m = "interval divisor contains zero") : Error(m) {}
};
struct NegativeDomain : Error {
  explicit NegativeDomain(const std::string& m = "operand extends below zero") : Error(m) {}
};
struct DomainTooWide : Error {
  explicit DomainTooWide(const std::string& m = "trig argument outside supported range") : Error(m) {}
};
struct ZeroWidth : Error {
  explicit ZeroWidth(const std::string& m = "cannot bisect a degenerate interval") : Error(m) {}
};
struct InvalidInterval : Error {
  explicit InvalidInterval(const std::string& m = "malformed interval endpoints") : Error(m) {}
};
struct InfiniteEndpoint : Error {
  explicit InfiniteEndpoint(const std::string& m = "arithmetic on infinite endpoint") : Error(m) {}
};

// kgfun
struct PoleAtUnitCircle : Error {
  explicit PoleAtUnitCircle(const std::string& m = "to_xi undefined at s = +-1") : Error(m) {}
};
struct DiagonalSingularity : Error {
  explicit DiagonalSingularity(const std::string& m = "weight undefined on the diagonal xi1 == xi2") : Error(m) {}
};
struct BadExponentRange : Error {
  explicit BadExponentRange(const std::string& m = "exponent outside the admissible range") : Error(m) {}
};
struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& m = "parameter outside its stated domain") : Error(m) {}
};

// certifier
struct ReformulationMismatch : Error {
  explicit ReformulationMismatch(const std::string& m = "factored margin disagrees with raw margin") : Error(m) {}
};
struct BudgetExhausted : Error {
  explicit BudgetExhausted(const std::string& m = "box budget exhausted") : Error(m) {}
};
struct TileGap : Error {
  explicit TileGap(const std::string& m = "certificate boxes leave the domain uncovered") : Error(m) {}
};
struct TileOverlap : Error {
  explicit TileOverlap(const std::string& m = "certificate boxes overlap or sit outside the tree") : Error(m) {}
};
struct NegativeBound : Error {
  explicit NegativeBound(const std::string& m = "certificate box carries a negative margin bound") : Error(m) {}
};
struct CertificateFormat : Error {
  explicit CertificateFormat(const std::string& m = "certificate file malformed") : Error(m) {}
};

// sharpness
struct SearchFailed : Error {
  explicit SearchFailed(const std::string& m = "violation search exhausted its budget") : Error(m) {}
};

// bilinear
struct GridMismatch : Error {
  explicit GridMismatch(const std::string& m = "profile grid does not embed in the transform lattice") : Error(m) {}
};
struct SupportsOverlap : Error {
  explicit SupportsOverlap(const std::string& m = "frequency supports are not disjoint") : Error(m) {}
};
struct NotConverged : Error {
  explicit NotConverged(const std::string& m = "time-window doubling did not converge") : Error(m) {}
};

}  // namespace kgv

#endif  // KGV_ERRORS_HPP

#ifndef KGV_BIGFLOAT_HPP
#define KGV_BIGFLOAT_HPP

#include <string>

// Arbitrary-precision float used for the 60-digit re-verification of
// reported violations and as the independent oracle in tests. Thin value
// wrapper over MPFR; completely separate from the double-precision paths
// it audits.

namespace kgv {

class BigFloat {
 public:
  static constexpr long kDefaultPrec = 256;  // ~77 decimal digits

  explicit BigFloat(long prec_bits = kDefaultPrec);
  BigFloat(double x, long prec_bits);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  long precision() const;
  double to_double() const;
  std::string to_string(int digits = 25) const;
  int sign() const;  // -1, 0, +1

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a);

  friend BigFloat sqrt(const BigFloat& a);
  friend BigFloat abs(const BigFloat& a);
  friend BigFloat exp(const BigFloat& a);
  friend BigFloat log(const BigFloat& a);
  friend BigFloat sin(const BigFloat& a);
  friend BigFloat cos(const BigFloat& a);
  friend BigFloat pow(const BigFloat& a, const BigFloat& b);
  friend BigFloat pow(const BigFloat& a, double b);

  friend int cmp(const BigFloat& a, const BigFloat& b);
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return cmp(a, b) < 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return cmp(a, b) > 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return cmp(a, b) <= 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return cmp(a, b) >= 0; }

  // comparisons against doubles are exact (no rounding of the double)
  bool less_than(double x) const;
  bool greater_than(double x) const;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace kgv

#endif  // KGV_BIGFLOAT_HPP

#include "kgv/bigfloat.hpp"

#include <mpfr.h>

#include <algorithm>
#include <vector>

namespace kgv {

struct BigFloat::Impl {
  mpfr_t v;
};

namespace {
mpfr_prec_t prec_of(const BigFloat& a) { return static_cast<mpfr_prec_t>(a.precision()); }
}  // namespace

BigFloat::BigFloat(long prec_bits) : impl_(new Impl) {
  mpfr_init2(impl_->v, prec_bits);
  mpfr_set_zero(impl_->v, 1);
}

BigFloat::BigFloat(double x, long prec_bits) : impl_(new Impl) {
  mpfr_init2(impl_->v, prec_bits);
  mpfr_set_d(impl_->v, x, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) : impl_(new Impl) {
  mpfr_init2(impl_->v, mpfr_get_prec(other.impl_->v));
  mpfr_set(impl_->v, other.impl_->v, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept : impl_(other.impl_) { other.impl_ = nullptr; }

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(impl_->v, mpfr_get_prec(other.impl_->v));
    mpfr_set(impl_->v, other.impl_->v, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  std::swap(impl_, other.impl_);
  return *this;
}

BigFloat::~BigFloat() {
  if (impl_ != nullptr) {
    mpfr_clear(impl_->v);
    delete impl_;
  }
}

long BigFloat::precision() const { return static_cast<long>(mpfr_get_prec(impl_->v)); }

double BigFloat::to_double() const { return mpfr_get_d(impl_->v, MPFR_RNDN); }

std::string BigFloat::to_string(int digits) const {
  std::vector<char> buf(static_cast<size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, impl_->v);
  return std::string(buf.data());
}

int BigFloat::sign() const { return mpfr_sgn(impl_->v); }

#define KGV_BF_BINOP(op, fn)                                    \
  BigFloat operator op(const BigFloat& a, const BigFloat& b) {  \
    BigFloat r(std::max(prec_of(a), prec_of(b)));               \
    fn(r.impl_->v, a.impl_->v, b.impl_->v, MPFR_RNDN);          \
    return r;                                                   \
  }

KGV_BF_BINOP(+, mpfr_add)
KGV_BF_BINOP(-, mpfr_sub)
KGV_BF_BINOP(*, mpfr_mul)
KGV_BF_BINOP(/, mpfr_div)
#undef KGV_BF_BINOP

BigFloat operator-(const BigFloat& a) {
  BigFloat r(prec_of(a));
  mpfr_neg(r.impl_->v, a.impl_->v, MPFR_RNDN);
  return r;
}

#define KGV_BF_UNOP(name, fn)               \
  BigFloat name(const BigFloat& a) {        \
    BigFloat r(prec_of(a));                 \
    fn(r.impl_->v, a.impl_->v, MPFR_RNDN);  \
    return r;                               \
  }

KGV_BF_UNOP(sqrt, mpfr_sqrt)
KGV_BF_UNOP(abs, mpfr_abs)
KGV_BF_UNOP(exp, mpfr_exp)
KGV_BF_UNOP(log, mpfr_log)
KGV_BF_UNOP(sin, mpfr_sin)
KGV_BF_UNOP(cos, mpfr_cos)
#undef KGV_BF_UNOP

BigFloat pow(const BigFloat& a, const BigFloat& b) {
  BigFloat r(std::max(prec_of(a), prec_of(b)));
  mpfr_pow(r.impl_->v, a.impl_->v, b.impl_->v, MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& a, double b) { return pow(a, BigFloat(b, prec_of(a))); }

int cmp(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.impl_->v, b.impl_->v); }

bool BigFloat::less_than(double x) const { return mpfr_cmp_d(impl_->v, x) < 0; }
bool BigFloat::greater_than(double x) const { return mpfr_cmp_d(impl_->v, x) > 0; }

}  // namespace kgv

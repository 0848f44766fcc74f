#include "gtds/system.hpp"

#include <sstream>

#include "gtds/error.hpp"

namespace gtds {

namespace {

std::string branch_error(ErrorCode code, std::size_t branch, const std::string& detail) {
  std::ostringstream msg;
  msg << error_code_name(code) << "(" << branch << ")";
  if (!detail.empty()) msg << ": " << detail;
  return msg.str();
}

void check_triangular(const MultiPoly& poly, std::size_t branch, std::size_t n, const char* name) {
  if (poly.nvars() != n) {
    std::ostringstream msg;
    msg << name << " has " << poly.nvars() << " variables, expected " << n;
    fail(ErrorCode::ArityMismatch, branch_error(ErrorCode::ArityMismatch, branch + 1, msg.str()));
  }
  for (auto var : poly.used_variables()) {
    if (var <= branch) {
      std::ostringstream msg;
      msg << name << " uses x_" << var + 1;
      fail(ErrorCode::VariableOutOfScope,
           branch_error(ErrorCode::VariableOutOfScope, branch + 1, msg.str()));
    }
  }
}

}  // namespace

Gtds Gtds::build(const Field& field, std::vector<Branch> branches, UniPoly p_last) {
  const std::size_t n = branches.size() + 1;
  Gtds sys(field, std::move(branches), std::move(p_last));

  for (std::size_t i = 0; i < n; ++i) {
    const UniPoly& p = sys.p(i);
    if (!(p.field() == field)) fail(ErrorCode::MixedFields, "branch polynomial over a different field");
    try {
      auto cert = certify_permutation(p);
      sys.inverses_.push_back(std::move(cert.inverse));
      sys.degrees_.push_back(cert.deg_f);
      sys.inverse_degrees_.push_back(cert.deg_finv);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotAPermutation) throw;
      fail(ErrorCode::NotAPermutation, branch_error(ErrorCode::NotAPermutation, i + 1, e.what()));
    }
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Branch& b = sys.branches_[i];
    if (!(b.g.field() == field) || !(b.h.field() == field)) {
      fail(ErrorCode::MixedFields, "branch polynomial over a different field");
    }
    check_triangular(b.g, i, n, "g");
    check_triangular(b.h, i, n, "h");
    const ZeroCheck zc = has_no_zeros(b.g);
    if (!zc.zero_free) {
      std::string detail;
      if (zc.witness) {
        std::ostringstream w;
        w << "vanishes at (";
        for (std::size_t k = 0; k < zc.witness->size(); ++k) w << (k ? "," : "") << (*zc.witness)[k].value;
        w << ")";
        detail = w.str();
      }
      fail(ErrorCode::GiHasZero, branch_error(ErrorCode::GiHasZero, i + 1, detail));
    }
  }
  sys.validated_ = true;
  return sys;
}

Gtds Gtds::build_unchecked(const Field& field, std::vector<Branch> branches, UniPoly p_last) {
  const std::size_t n = branches.size() + 1;
  Gtds sys(field, std::move(branches), std::move(p_last));
  for (std::size_t i = 0; i < n; ++i) {
    const UniPoly reduced = reduce_mod(sys.p(i));
    sys.degrees_.push_back(reduced.degree());
    try {
      auto cert = certify_permutation(reduced);
      sys.inverse_degrees_.push_back(cert.deg_finv);
      sys.inverses_.push_back(std::move(cert.inverse));
    } catch (const Error&) {
      sys.inverse_degrees_.push_back(-1);
      sys.inverses_.emplace_back(field);
    }
  }
  return sys;
}

Gtds Gtds::identity(const Field& field, std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "GTDS needs at least one branch");
  std::vector<Branch> branches;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    branches.push_back({UniPoly::identity(field), MultiPoly::constant(field, n, field.one()),
                        MultiPoly(field, n)});
  }
  return build(field, std::move(branches), UniPoly::identity(field));
}

const UniPoly& Gtds::p(std::size_t i) const {
  if (i + 1 == width()) return p_last_;
  if (i >= branches_.size()) fail(ErrorCode::ArityMismatch, "branch index out of range");
  return branches_[i].p;
}

const UniPoly& Gtds::p_inverse(std::size_t i) const {
  if (i >= inverses_.size()) fail(ErrorCode::ArityMismatch, "branch index out of range");
  return inverses_[i];
}

std::int64_t Gtds::degree(std::size_t i) const {
  if (i >= degrees_.size()) fail(ErrorCode::ArityMismatch, "branch index out of range");
  return degrees_[i];
}

std::int64_t Gtds::inverse_degree(std::size_t i) const {
  if (i >= inverse_degrees_.size()) fail(ErrorCode::ArityMismatch, "branch index out of range");
  return inverse_degrees_[i];
}

void Gtds::check_arity(std::span<const Element> x) const {
  if (x.size() != width()) {
    std::ostringstream msg;
    msg << "GTDS of width " << width() << " applied to a vector of length " << x.size();
    fail(ErrorCode::ArityMismatch, msg.str());
  }
}

Vec Gtds::eval(std::span<const Element> x) const {
  check_arity(x);
  const std::size_t n = width();
  Vec y(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Branch& b = branches_[i];
    y[i] = field_.add(field_.mul(b.p(x[i]), b.g(x)), b.h(x));
  }
  y[n - 1] = p_last_(x[n - 1]);
  return y;
}

Vec Gtds::invert(std::span<const Element> y, InversionMode mode) const {
  check_arity(y);
  if (!validated_) fail(ErrorCode::InvalidArgument, "cannot invert an unvalidated GTDS");
  const std::size_t n = width();
  // Lower variables are still unknown while branch i is solved; g_i and h_i
  // ignore them, so zeros are fine as placeholders.
  Vec x(n, field_.zero());
  x[n - 1] = inverses_[n - 1](y[n - 1]);
  for (std::size_t i = n - 1; i-- > 0;) {
    const Branch& b = branches_[i];
    const Element g = b.g(x);
    const Element g_inv = mode == InversionMode::LiteralPower
                              ? field_.pow(g, field_.order() - 2)
                              : field_.inv(g);
    x[i] = inverses_[i](field_.mul(field_.sub(y[i], b.h(x)), g_inv));
  }
  return x;
}

Vec gtds_eval(const Gtds& F, std::span<const Element> x) { return F.eval(x); }

Vec gtds_invert(const Gtds& F, std::span<const Element> y, InversionMode mode) {
  return F.invert(y, mode);
}

bool is_orthogonal_exhaustive(const Gtds& F) {
  const Domain domain(F.field().order(), F.width(), kMaxDomain);
  return is_bijection(domain, [&F](std::span<const Element> x) { return F.eval(x); });
}

}  // namespace gtds

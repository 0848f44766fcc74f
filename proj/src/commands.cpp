#include "gtds/commands.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "gtds/error.hpp"

namespace gtds::commands {

namespace {

using io::json;

// Parseval: sum_{a,b} LP = q^n; checked relative to q^n.
constexpr double kParsevalTolerance = 1e-4;

struct Target {
  Field field;
  std::size_t n;
  VectorMap map;
  std::optional<Gtds> gtds;
};

Target load_target(const json& spec, const json* keys, const RunOptions& opts) {
  if (io::is_gtds_spec(spec)) {
    auto F = std::make_shared<Gtds>(io::parse_gtds(spec, opts.field));
    return {F->field(), F->width(), [F](std::span<const Element> x) { return F->eval(x); }, *F};
  }
  if (io::is_cipher_spec(spec)) {
    auto C = std::make_shared<Cipher>(io::parse_cipher(spec, opts.field));
    auto K = std::make_shared<RoundKeys>(keys ? io::parse_keys(C->field(), *keys) : C->zero_keys());
    C->check_keys(*K);
    return {C->field(), C->width(), [C, K](std::span<const Element> x) { return C->encrypt(*K, x); },
            std::nullopt};
  }
  fail(ErrorCode::ParseError, "spec is neither a GTDS (\"branches\") nor a cipher (\"rounds\")");
}

std::string num(double v) {
  if (std::abs(v) < 1e-15) v = 0.0;  // avoid printing -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void put_vector(std::ostringstream& out, const Vec& v) {
  for (auto e : v) out << e.value << ',';
}

std::string header(const char* in, const char* out_name, std::size_t n, const char* tail) {
  std::ostringstream h;
  for (std::size_t i = 1; i <= n; ++i) h << in << '_' << i << ',';
  for (std::size_t i = 1; i <= n; ++i) h << out_name << '_' << i << ',';
  h << tail << '\n';
  return h.str();
}

struct DdtPart {
  DdtReport report;
  bool has_bounds;
  std::string note;
};

DdtPart ddt_part(const Target& t, const RunOptions& opts) {
  if (t.gtds) {
    try {
      return {check_ddt_against_bounds(*t.gtds, opts.max_domain), true, ""};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HypothesisUnverified) throw;
      return {ddt(TabulatedMap::of(*t.gtds, opts.max_domain), opts.max_domain), false, e.what()};
    }
  }
  return {ddt(TabulatedMap(t.field, t.n, t.map, opts.max_domain), opts.max_domain), false,
          "not a GTDS; no bound"};
}

struct CorrPart {
  CorrReport report;
  bool has_bounds;
  std::string note;
  bool parseval_ok;
};

CorrPart corr_part(const Target& t, const RunOptions& opts) {
  CorrPart part = [&]() -> CorrPart {
    if (t.gtds) {
      try {
        return {check_correlation_against_bounds(*t.gtds, opts.max_domain, opts.tolerance), true, "", true};
      } catch (const Error& e) {
        if (e.code() != ErrorCode::HypothesisUnverified) throw;
        return {correlation_table(TabulatedMap::of(*t.gtds, opts.max_domain), opts.max_domain), false,
                e.what(), true};
      }
    }
    return {correlation_table(TabulatedMap(t.field, t.n, t.map, opts.max_domain), opts.max_domain), false,
            "not a GTDS; no bound", true};
  }();
  const double N = static_cast<double>(part.report.domain.size());
  part.parseval_ok = std::abs(part.report.lp_sum() - N) <= kParsevalTolerance * N;
  return part;
}

void write_ddt_rows(std::ostringstream& out, const DdtPart& part, const char* prefix) {
  const Domain& domain = part.report.domain;
  const std::uint64_t N = domain.size();
  std::unordered_set<std::uint64_t> bad;
  for (const auto& v : part.report.violations) bad.insert(v.dx * N + v.dy);
  for (std::uint64_t a = 0; a < N; ++a) {
    const Vec dx = domain.decode(a);
    for (std::uint64_t b = 0; b < N; ++b) {
      const std::uint64_t idx = a * N + b;
      out << prefix;
      put_vector(out, dx);
      put_vector(out, domain.decode(b));
      out << part.report.table[idx] << ',';
      if (part.has_bounds) out << part.report.bound[idx];
      else out << '-';
      out << ',' << (bad.count(idx) ? 0 : 1) << '\n';
    }
  }
}

// Rows list (a, b) = (output mask, input mask); the bound column bounds LP.
void write_corr_rows(std::ostringstream& out, const CorrPart& part, const char* prefix, bool with_corr) {
  const Domain& domain = part.report.domain;
  const std::uint64_t N = domain.size();
  std::unordered_set<std::uint64_t> bad;
  for (const auto& v : part.report.violations) bad.insert(v.a * N + v.b);
  for (std::uint64_t a = 0; a < N; ++a) {
    const Vec av = domain.decode(a);
    for (std::uint64_t b = 0; b < N; ++b) {
      const std::uint64_t idx = a * N + b;
      out << prefix;
      put_vector(out, av);
      put_vector(out, domain.decode(b));
      if (with_corr) out << num(part.report.corr[idx].real()) << ',' << num(part.report.corr[idx].imag()) << ',';
      out << num(part.report.lp[idx]) << ',';
      if (part.has_bounds) out << num(part.report.bound[idx] * part.report.bound[idx]);
      else out << '-';
      out << ',' << (bad.count(idx) ? 0 : 1) << '\n';
    }
  }
}

json note_or_null(const std::string& note) { return note.empty() ? json(nullptr) : json(note); }

}  // namespace

std::string validate(const json& spec, const RunOptions& opts) {
  std::ostringstream out;
  if (io::is_gtds_spec(spec)) {
    const Gtds F = io::parse_gtds(spec, opts.field);
    out << "valid GTDS of width " << F.width() << " over " << F.field().describe();
  } else if (io::is_cipher_spec(spec)) {
    const Cipher C = io::parse_cipher(spec, opts.field);
    out << "valid cipher of width " << C.width() << " with " << C.rounds().size() << " rounds over "
        << C.field().describe();
  } else {
    fail(ErrorCode::ParseError, "spec is neither a GTDS (\"branches\") nor a cipher (\"rounds\")");
  }
  return out.str();
}

RunResult ddt(const json& spec, const json* keys, const RunOptions& opts) {
  const Target t = load_target(spec, keys, opts);
  const DdtPart part = ddt_part(t, opts);
  std::ostringstream out;
  out << header("dx", "dy", t.n, "count,bound,ok");
  write_ddt_rows(out, part, "");
  const auto& r = part.report;
  RunResult res{out.str(), {}, r.violations.size()};
  res.summary = {{"domain_size", r.domain.size()},
                 {"rows", r.table.size()},
                 {"delta_uniformity", r.delta_uniformity},
                 {"max_lp", nullptr},
                 {"violations", res.violations},
                 {"bounds_checked", part.has_bounds},
                 {"note", note_or_null(part.note)}};
  return res;
}

RunResult corr(const json& spec, const json* keys, const RunOptions& opts) {
  const Target t = load_target(spec, keys, opts);
  const CorrPart part = corr_part(t, opts);
  std::ostringstream out;
  out << header("a", "b", t.n, "corr_re,corr_im,lp,bound,ok");
  write_corr_rows(out, part, "", true);
  const auto& r = part.report;
  RunResult res{out.str(), {}, r.violations.size() + (part.parseval_ok ? 0 : 1)};
  res.summary = {{"domain_size", r.domain.size()},
                 {"rows", r.lp.size()},
                 {"delta_uniformity", nullptr},
                 {"max_lp", r.max_lp()},
                 {"lp_sum", r.lp_sum()},
                 {"parseval_ok", part.parseval_ok},
                 {"violations", res.violations},
                 {"bounds_checked", part.has_bounds},
                 {"note", note_or_null(part.note)}};
  return res;
}

RunResult bounds(const json& spec, const RunOptions& opts) {
  if (!io::is_gtds_spec(spec)) fail(ErrorCode::InvalidArgument, "bounds needs a GTDS spec");
  const Target t = load_target(spec, nullptr, opts);
  // Both bound families need their hypotheses; report them as errors here.
  const DdtReport d = check_ddt_against_bounds(*t.gtds, opts.max_domain);
  CorrPart c{check_correlation_against_bounds(*t.gtds, opts.max_domain, opts.tolerance), true, "", true};
  const double N = static_cast<double>(c.report.domain.size());
  c.parseval_ok = std::abs(c.report.lp_sum() - N) <= kParsevalTolerance * N;

  std::ostringstream out;
  out << "kind," << header("in", "out", t.n, "value,bound,ok");
  write_ddt_rows(out, DdtPart{d, true, ""}, "ddt,");
  write_corr_rows(out, c, "lp,", false);

  const DifferentialBound model(*t.gtds);
  RunResult res{out.str(), {}, d.violations.size() + c.report.violations.size() + (c.parseval_ok ? 0 : 1)};
  res.summary = {{"domain_size", d.domain.size()},
                 {"delta_uniformity", d.delta_uniformity},
                 {"max_lp", c.report.max_lp()},
                 {"lp_sum", c.report.lp_sum()},
                 {"parseval_ok", c.parseval_ok},
                 {"ddt_violations", d.violations.size()},
                 {"corr_violations", c.report.violations.size()},
                 {"corollary_degree", model.corollary_degree() ? json(*model.corollary_degree()) : json(nullptr)},
                 {"violations", res.violations}};
  return res;
}

RunResult weil(const json& spec, const RunOptions& opts) {
  const Field field = spec.is_object() && spec.contains("field") ? io::parse_field(spec.at("field"))
                      : opts.field ? *opts.field
                                   : throw Error(ErrorCode::ParseError, "missing key \"field\"");
  if (!spec.is_object() || !spec.contains("f")) fail(ErrorCode::ParseError, "missing key \"f\"");
  const UniPoly f = io::parse_uni(field, spec.at("f"));
  const auto rows = weil_sweep(f, opts.max_domain, opts.tolerance);
  std::ostringstream out;
  out << "a,b,lhs,bound,ok\n";
  std::uint64_t bad = 0;
  double worst = 0;
  for (const auto& r : rows) {
    out << r.a.value << ',' << r.b.value << ',' << num(r.check.lhs) << ',' << num(r.check.bound) << ','
        << (r.check.ok ? 1 : 0) << '\n';
    bad += r.check.ok ? 0 : 1;
    worst = std::max(worst, r.check.lhs);
  }
  RunResult res{out.str(), {}, bad};
  res.summary = {{"rows", rows.size()},
                 {"max_lhs", worst},
                 {"bound", rows.empty() ? json(nullptr) : json(rows.front().check.bound)},
                 {"delta_uniformity", nullptr},
                 {"max_lp", nullptr},
                 {"violations", bad}};
  return res;
}

RunResult trail_lp(const json& spec, const json* keys, const json& trail, const RunOptions& opts) {
  if (!io::is_cipher_spec(spec)) fail(ErrorCode::InvalidArgument, "trail-lp needs a cipher spec");
  const Cipher C = io::parse_cipher(spec, opts.field);
  const RoundKeys K = keys ? io::parse_keys(C.field(), *keys) : C.zero_keys();
  const LinearTrail T = io::parse_trail(C.field(), trail);
  const double total = gtds::trail_lp(C, K, T);

  std::ostringstream out;
  out << "round,lp\n";
  json per_round = json::array();
  for (std::size_t i = 1; i <= C.rounds().size(); ++i) {
    const Round& R = C.rounds()[i - 1];
    const Vec& k = K.columns[i];
    const double lp = std::norm(correlation(
        C.field(), C.width(), [&](std::span<const Element> x) { return round_apply(R, k, x); }, T.masks[i],
        T.masks[i - 1]));
    out << i << ',' << num(lp) << '\n';
    per_round.push_back(lp);
  }
  RunResult res{out.str(), {}, 0};
  res.summary = {{"trail_lp", total},
                 {"round_lp", per_round},
                 {"delta_uniformity", nullptr},
                 {"max_lp", nullptr},
                 {"violations", 0}};
  return res;
}

RunResult permcheck(const json& spec, const json* keys, const RunOptions& opts) {
  RunResult res;
  if (spec.is_object() && spec.contains("f")) {
    const Field field = spec.contains("field") ? io::parse_field(spec.at("field"))
                        : opts.field ? *opts.field
                                     : throw Error(ErrorCode::ParseError, "missing key \"field\"");
    const UniPoly f = io::parse_uni(field, spec.at("f"));
    try {
      const PermPolyCert cert = certify_permutation(f);
      static const char* kinds[] = {"monomial_gcd", "affine", "exhaustive"};
      res.summary = {{"permutation", true},
                     {"method", kinds[static_cast<int>(cert.kind)]},
                     {"deg_f", cert.deg_f},
                     {"deg_finv", cert.deg_finv},
                     {"inverse", io::uni_to_json(cert.inverse)}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotAPermutation) throw;
      res.summary = {{"permutation", false}, {"reason", e.what()}};
      res.violations = 1;
    }
  } else if (io::is_gtds_spec(spec)) {
    const Gtds F = io::parse_gtds(spec, opts.field);
    const Domain domain(F.field().order(), F.width(), kMaxDomain);
    const bool bijective = is_orthogonal_exhaustive(F);
    std::uint64_t inverse_failures = 0;
    Vec x(F.width());
    for (std::uint64_t i = 0; i < domain.size(); ++i) {
      domain.decode(i, x);
      if (F.invert(F.eval(x)) != x) ++inverse_failures;
    }
    res.violations = (bijective ? 0 : 1) + inverse_failures;
    res.summary = {{"permutation", bijective}, {"domain_size", domain.size()}, {"inverse_failures", inverse_failures}};
  } else if (io::is_cipher_spec(spec)) {
    const Cipher C = io::parse_cipher(spec, opts.field);
    if (keys) {
      const RoundKeys K = io::parse_keys(C.field(), *keys);
      C.check_keys(K);
      const Domain domain(C.field().order(), C.width(), kMaxPairQuery);
      const bool bijective = is_bijection(domain, [&](std::span<const Element> x) { return C.encrypt(K, x); });
      res.violations = bijective ? 0 : 1;
      res.summary = {{"permutation", bijective}, {"keys_tested", 1}};
    } else {
      const auto report = keyed_orthogonality_check(C, opts.samples, opts.seed);
      res.violations = report.failures.size();
      res.summary = {{"permutation", report.ok()},
                     {"keys_tested", report.keys_tested},
                     {"failures", report.failures},
                     {"seed", opts.seed}};
    }
  } else {
    fail(ErrorCode::ParseError, "permcheck needs {\"f\"}, a GTDS or a cipher spec");
  }
  res.summary["violations"] = res.violations;
  return res;
}

}  // namespace gtds::commands

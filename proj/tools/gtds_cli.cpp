// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gtds/gtds.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

// Thrown for unreadable files and malformed vector text.
struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError{"cannot write " + path};
}

int status_exit(gtds_status st) {
  if (st == GTDS_OK) return kExitOk;
  std::cerr << "error: " << gtds_status_name(st) << ": " << gtds_last_error() << '\n';
  if (st == GTDS_DOMAIN_TOO_LARGE) {
    std::cerr << "advisory: the sweep needs a domain within --max-domain (at most 1048576); "
                 "use a smaller field or width, or raise --max-domain\n";
  }
  if (st == GTDS_PARSE_ERROR || st == GTDS_NULL_ARGUMENT || st == GTDS_INTERNAL_ERROR) return kExitUsage;
  return kExitFailed;
}

std::vector<std::uint64_t> parse_vector_line(const std::string& line, std::size_t lineno) {
  std::vector<std::uint64_t> v;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto begin = item.find_first_not_of(" \t\r");
    const auto end = item.find_last_not_of(" \t\r");
    if (begin == std::string::npos) throw UsageError{"empty entry on line " + std::to_string(lineno)};
    item = item.substr(begin, end - begin + 1);
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &used, 10);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item[0] == '-' || item[0] == '+') {
      throw UsageError{"bad decimal \"" + item + "\" on line " + std::to_string(lineno)};
    }
    v.push_back(value);
  }
  return v;
}

struct Globals {
  std::string field;
  std::uint64_t max_domain = 1024;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  std::string out;
};

gtds_options make_options(const Globals& g, std::uint64_t samples = 0) {
  gtds_options opts;
  gtds_options_init(&opts);
  opts.max_domain = g.max_domain;
  opts.tolerance = g.tolerance;
  opts.seed = g.seed;
  if (samples) opts.samples = samples;
  opts.field = g.field.empty() ? nullptr : g.field.c_str();
  return opts;
}

// CSV to --out (stdout by default), summary JSON to --summary (stderr by
// default). Reports without a table send the summary where the CSV would go.
int emit_report(gtds_status st, gtds_report* report, const Globals& g, const std::string& summary_path) {
  if (st != GTDS_OK) return status_exit(st);
  const std::string csv = gtds_report_csv(report);
  const std::string summary = std::string(gtds_report_summary(report)) + "\n";
  const std::uint64_t violations = gtds_report_violations(report);
  gtds_report_free(report);
  if (csv.empty()) {
    write_text(summary_path.empty() ? g.out : summary_path, summary, std::cout);
  } else {
    write_text(g.out, csv, std::cout);
    write_text(summary_path, summary, std::cerr);
  }
  if (violations != 0) {
    std::cerr << "violations: " << violations << '\n';
    return kExitFailed;
  }
  return kExitOk;
}

int run_crypt(bool decrypt, const std::string& spec_path, const std::string& keys_path, const std::string& in_path,
              const Globals& g) {
  const std::string spec = read_file(spec_path);
  gtds_field* field = nullptr;
  if (!g.field.empty()) {
    if (auto st = gtds_field_parse(g.field.c_str(), &field); st != GTDS_OK) return status_exit(st);
  }
  gtds_cipher* cipher = nullptr;
  gtds_status st = gtds_cipher_from_json(spec.c_str(), field, &cipher);
  gtds_field_free(field);
  if (st != GTDS_OK) return status_exit(st);

  gtds_keys* keys = nullptr;
  if (keys_path.empty()) {
    st = gtds_keys_zero(cipher, &keys);
  } else {
    st = gtds_keys_from_json(cipher, read_file(keys_path).c_str(), &keys);
  }
  if (st != GTDS_OK) {
    gtds_cipher_free(cipher);
    return status_exit(st);
  }

  const std::size_t n = gtds_cipher_width(cipher);
  std::istringstream input(read_file(in_path));
  std::ostringstream output;
  std::string line;
  std::size_t lineno = 0;
  int code = kExitOk;
  while (std::getline(input, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::uint64_t> x;
    try {
      x = parse_vector_line(line, lineno);
    } catch (...) {
      gtds_keys_free(keys);
      gtds_cipher_free(cipher);
      throw;
    }
    std::vector<std::uint64_t> y(n);
    st = decrypt ? gtds_cipher_decrypt(cipher, keys, x.data(), x.size(), y.data())
                 : gtds_cipher_encrypt(cipher, keys, x.data(), x.size(), y.data());
    if (st != GTDS_OK) {
      std::cerr << "line " << lineno << ": ";
      code = status_exit(st);
      break;
    }
    for (std::size_t i = 0; i < n; ++i) output << (i ? "," : "") << y[i];
    output << '\n';
  }
  gtds_keys_free(keys);
  gtds_cipher_free(cipher);
  if (code == kExitOk) write_text(g.out, output.str(), std::cout);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangular dynamical system permutations over finite fields"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--field", g.field, "Field for specs without one: p, p^m or a JSON object");
  app.add_option("--max-domain", g.max_domain, "Largest q^n swept exhaustively")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 20));
  app.add_option("--tolerance", g.tolerance, "Slack for bound comparisons")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomized checks");
  app.add_option("--out", g.out, "Output file (default stdout)");

  std::string spec_path, keys_path, in_path = "-", summary_path, family, params_path, trail_path;
  std::uint64_t samples = 0;

  auto* validate = app.add_subcommand("validate", "Check a GTDS or cipher spec");
  validate->add_option("spec", spec_path, "Spec file")->required();

  auto* instantiate = app.add_subcommand("instantiate", "Build a cipher spec for a design family");
  instantiate->add_option("--family", family, "Design family")
      ->required()
      ->check(CLI::IsMember({"feistel", "spn", "pspn", "laimassey", "glm", "horst", "bricks", "arion"}));
  instantiate->add_option("--params", params_path, "Parameter file")->required();

  auto add_crypt = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("spec", spec_path, "Cipher spec file")->required();
    sub->add_option("--keys", keys_path, "Round keys {\"K\": [...]} (default all zero)");
    sub->add_option("--in", in_path, "Vectors, one per line, decimal comma-separated (default stdin)");
    return sub;
  };
  auto* encrypt = add_crypt("encrypt", "Encrypt vectors");
  auto* decrypt = add_crypt("decrypt", "Decrypt vectors");

  auto add_sweep = [&](const char* name, const char* help, bool keyed) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("spec", spec_path, "Spec file")->required();
    if (keyed) sub->add_option("--keys", keys_path, "Round keys for cipher specs (default all zero)");
    sub->add_option("--summary", summary_path, "JSON summary file (default stderr)");
    return sub;
  };
  auto* ddt = add_sweep("ddt", "Difference distribution table", true);
  auto* corr = add_sweep("corr", "Correlation table", true);
  auto* bounds = add_sweep("bounds", "Check a GTDS against its differential and correlation bounds", false);
  auto* weil = add_sweep("weil", "Check the Weil bound for {\"field\", \"f\"}", false);
  auto* trail = add_sweep("trail-lp", "LP of a linear trail through a cipher", true);
  trail->add_option("--trail", trail_path, "Masks {\"masks\": [...]}")->required();
  auto* permcheck = add_sweep("permcheck", "Permutation check of a polynomial, GTDS or cipher", true);
  permcheck->add_option("--samples", samples, "Random key matrices for keyed checks (default 10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) {
      const gtds_options opts = make_options(g);
      char* diag = nullptr;
      const gtds_status st = gtds_validate(read_file(spec_path).c_str(), &opts, &diag);
      if (st == GTDS_OK) std::cout << diag << '\n';
      gtds_string_free(diag);
      return status_exit(st);
    }
    if (instantiate->parsed()) {
      const gtds_options opts = make_options(g);
      char* json = nullptr;
      const gtds_status st = gtds_instantiate(family.c_str(), read_file(params_path).c_str(), &opts, &json);
      if (st != GTDS_OK) return status_exit(st);
      const std::string text = std::string(json) + "\n";
      gtds_string_free(json);
      write_text(g.out, text, std::cout);
      return kExitOk;
    }
    if (encrypt->parsed() || decrypt->parsed()) {
      return run_crypt(decrypt->parsed(), spec_path, keys_path, in_path, g);
    }

    const std::string spec = read_file(spec_path);
    const std::optional<std::string> keys =
        keys_path.empty() ? std::nullopt : std::optional<std::string>(read_file(keys_path));
    const char* keys_c = keys ? keys->c_str() : nullptr;
    const gtds_options opts = make_options(g, samples);
    gtds_report* report = nullptr;

    if (trail->parsed()) {
      const std::string masks = read_file(trail_path);
      const gtds_status st = gtds_trail_lp(spec.c_str(), keys_c, masks.c_str(), &opts, &report);
      return emit_report(st, report, g, summary_path);
    }
    const char* verb = ddt->parsed()      ? "ddt"
                       : corr->parsed()   ? "corr"
                       : bounds->parsed() ? "bounds"
                       : weil->parsed()   ? "weil"
                                          : "permcheck";
    (void)permcheck;
    const gtds_status st = gtds_analyze(verb, spec.c_str(), keys_c, &opts, &report);
    return emit_report(st, report, g, summary_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kExitUsage;
  }
}

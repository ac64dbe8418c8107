#include "vschro/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "vschro/error.hpp"
#include "vschro/problem.hpp"

namespace vschro {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
  if (!out) throw Error("cannot write " + p.string());
}

}  // namespace

bool ReportBundle::all_passed() const {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

ReportBundle make_report(const ExperimentConfig& cfg, std::vector<PropertyCheckResult> results) {
  ReportBundle b;
  b.name = cfg.name;
  b.config_text = config_echo(cfg);
  const Problem p = build_problem(cfg.problem);
  b.hypotheses = validate_hypotheses(p.q, p.v, cfg.problem.alpha);
  b.hypotheses.shift_beta = p.beta;
  b.results = std::move(results);
  return b;
}

std::string render_text(const ReportBundle& r) {
  std::ostringstream o;
  const HypothesisReport& h = r.hypotheses;
  o << "experiment " << r.name << "\n\n";
  o << "hypotheses\n";
  o << "  eta1                 " << num(h.eta1) << '\n';
  o << "  eta2                 " << num(h.eta2) << '\n';
  o << "  dissipativity_margin " << num(h.dissipativity_margin) << '\n';
  o << "  alpha                " << num(h.alpha) << '\n';
  o << "  growth_sup           " << num(h.growth_sup) << '\n';
  o << "  offdiag_min          " << num(h.offdiag_min) << '\n';
  o << "  shift_beta           " << num(h.shift_beta) << '\n';
  o << "  verdict              " << (h.passes() ? "satisfied" : "violated") << '\n';
  if (!h.notes.empty()) o << "  notes                " << h.notes << '\n';
  o << "\nchecks\n";
  for (const auto& c : r.results) {
    o << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << "  tolerance " << num(c.tolerance) << '\n';
    for (const auto& [k, v] : c.measured) o << "      " << k << " = " << num(v) << '\n';
    if (!c.notes.empty()) o << "      # " << c.notes << '\n';
  }
  o << "\n" << (r.all_passed() ? "all checks passed" : "some checks failed") << '\n';
  return o.str();
}

std::string render_csv(const ReportBundle& r) {
  std::ostringstream o;
  o << "check,passed,quantity,value,tolerance\n";
  for (const auto& c : r.results)
    for (const auto& [k, v] : c.measured)
      o << csv_field(c.name) << ',' << (c.passed ? 1 : 0) << ',' << csv_field(k) << ',' << num(v) << ','
        << num(c.tolerance) << '\n';
  return o.str();
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::vector<std::filesystem::path> write_report(const ReportBundle& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, std::string> files[] = {
      {"config.txt", r.config_text}, {"report.txt", render_text(r)}, {"results.csv", render_csv(r)}};
  std::vector<std::filesystem::path> written;
  std::string manifest;
  for (const auto& [name, bytes] : files) {
    write_file(dir / name, bytes);
    written.push_back(dir / name);
    manifest += sha256_hex(bytes) + "  " + name + "\n";
  }
  write_file(dir / "MANIFEST", manifest);
  written.push_back(dir / "MANIFEST");
  return written;
}

bool verify_manifest(const std::filesystem::path& dir, std::string* problem) {
  std::istringstream in(read_file(dir / "MANIFEST"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto sep = line.find("  ");
    if (sep != 64) {
      if (problem) *problem = "malformed MANIFEST line: " + line;
      return false;
    }
    const std::string want = line.substr(0, sep), name = line.substr(sep + 2);
    std::string got;
    try {
      got = sha256_hex(read_file(dir / name));
    } catch (const Error&) {
      if (problem) *problem = name + " is missing";
      return false;
    }
    if (got != want) {
      if (problem) *problem = name + " does not match its recorded hash";
      return false;
    }
  }
  return true;
}

}  // namespace vschro

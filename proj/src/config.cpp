#include "vschro/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "vschro/error.hpp"
#include "vschro/registry.hpp"
#include "vschro/rules.hpp"
#include "vschro/suite.hpp"

namespace vschro {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin_ + (line_ > 0 ? ":" + std::to_string(line_) : "") + ": " + msg);
  }

  double to_double(const std::string& v) const {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(v, &used);
    } catch (const std::exception&) {
      fail("expected a number, got '" + v + "'");
    }
    if (used != v.size()) fail("expected a number, got '" + v + "'");
    return x;
  }

  long long to_int(const std::string& v) const {
    long long x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) fail("expected an integer, got '" + v + "'");
    return x;
  }

  bool to_bool(const std::string& v) const {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail("expected true or false, got '" + v + "'");
  }

  ExperimentConfig parse(std::string_view text) {
    ExperimentConfig cfg;
    std::string section;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      const auto hash = raw.find('#');
      const std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (l.empty()) continue;
      if (l.front() == '[') {
        if (l.back() != ']') fail("malformed section header");
        section = trim(l.substr(1, l.size() - 2));
        if (section != "problem" && section != "run" && section != "checks" && section != "output")
          fail("unknown section [" + section + "]");
        continue;
      }
      const auto eq = l.find('=');
      if (eq == std::string::npos) fail("expected key = value");
      const std::string key = trim(l.substr(0, eq));
      const std::string value = trim(l.substr(eq + 1));
      if (key.empty()) fail("empty key");
      if (section.empty()) {
        if (key != "name") fail("key '" + key + "' outside any section");
        cfg.name = value;
        continue;
      }
      if (!seen.insert(section + "." + key).second) fail("duplicate key '" + key + "'");
      if (section == "problem")
        problem_key(cfg.problem, key, value);
      else if (section == "run")
        run_key(cfg, key, value);
      else if (section == "checks")
        checks_key(cfg, key, value);
      else
        output_key(cfg, key, value);
    }
    line_ = 0;
    validate(cfg);
    return cfg;
  }

 private:
  void rule_key(RuleSpec& rule, const std::string& sub, const std::string& value) {
    if (sub == "table")
      rule.table = value;
    else
      rule.params[sub] = to_double(value);
  }

  void problem_key(ProblemSpec& p, const std::string& key, const std::string& value) {
    if (key == "dim")
      p.dim = static_cast<int>(to_int(value));
    else if (key == "m")
      p.m = static_cast<int>(to_int(value));
    else if (key == "extent")
      p.extent = to_double(value);
    else if (key == "n")
      p.n = static_cast<int>(to_int(value));
    else if (key == "Q")
      p.diffusion.name = value;
    else if (key == "V")
      p.potential.name = value;
    else if (key.rfind("Q.", 0) == 0)
      rule_key(p.diffusion, key.substr(2), value);
    else if (key.rfind("V.", 0) == 0)
      rule_key(p.potential, key.substr(2), value);
    else if (key == "shift") {
      if (value == "none")
        p.shift = ShiftMode::none;
      else if (value == "auto")
        p.shift = ShiftMode::automatic;
      else
        fail("shift must be none or auto");
    } else if (key == "flip")
      p.flip = to_bool(value);
    else if (key == "alpha")
      p.alpha = to_double(value);
    else
      fail("unknown problem key '" + key + "'");
  }

  void run_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    SplitConfig& r = cfg.run;
    if (key == "scheme") {
      if (value == "lie")
        r.scheme = SplitScheme::lie;
      else if (value == "strang")
        r.scheme = SplitScheme::strang;
      else
        fail("scheme must be lie or strang");
    } else if (key == "diffusion") {
      if (value == "crank_nicolson")
        r.diffusion_substep = DiffusionScheme::crank_nicolson;
      else if (value == "backward_euler")
        r.diffusion_substep = DiffusionScheme::backward_euler;
      else
        fail("diffusion must be crank_nicolson or backward_euler");
    } else if (key == "n_steps")
      r.n_steps = static_cast<int>(to_int(value));
    else if (key == "t_final")
      r.t_final = to_double(value);
    else if (key == "solver_tol")
      r.linear_solver_tol = to_double(value);
    else if (key == "max_solver_iters")
      r.max_solver_iters = static_cast<int>(to_int(value));
    else if (key == "record_every")
      r.record_every = static_cast<int>(to_int(value));
    else if (key == "lambda_re")
      cfg.lambda.real(to_double(value));
    else if (key == "lambda_im")
      cfg.lambda.imag(to_double(value));
    else if (key == "eigen_k")
      cfg.eigen_k = static_cast<int>(to_int(value));
    else if (key == "kernel_t")
      cfg.kernel_t = to_double(value);
    else if (key == "source_component")
      cfg.source_component = static_cast<int>(to_int(value));
    else
      fail("unknown run key '" + key + "'");
  }

  void checks_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "names") {
      cfg.checks = split(value, ',');
      for (const auto& c : cfg.checks) {
        const auto& known = check_names();
        if (std::find(known.begin(), known.end(), c) == known.end()) fail("unknown check '" + c + "'");
      }
      return;
    }
    const auto dot = key.find('.');
    if (dot == std::string::npos) fail("check override must look like <check>.<key>");
    const std::string check = key.substr(0, dot), sub = key.substr(dot + 1);
    const auto& known = check_names();
    if (std::find(known.begin(), known.end(), check) == known.end()) fail("unknown check '" + check + "'");
    const auto& keys = check_override_keys(check);
    if (std::find(keys.begin(), keys.end(), sub) == keys.end())
      fail("check '" + check + "' has no setting '" + sub + "'");
    cfg.check_overrides[check][sub] = value;
  }

  void output_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "dir")
      cfg.output_dir = value;
    else if (key == "seed")
      cfg.seed = static_cast<std::uint64_t>(to_int(value));
    else
      fail("unknown output key '" + key + "'");
  }

  void check_rule(const RuleSpec& rule, const std::vector<std::string>& family) {
    if (std::find(family.begin(), family.end(), rule.name) == family.end())
      fail("unknown rule '" + rule.name + "'");
    const auto& allowed = rule_parameters(rule.name);
    for (const auto& [k, v] : rule.params)
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        fail("rule '" + rule.name + "' has no parameter '" + k + "'");
    if (rule.name == "custom_table" && rule.table.empty()) fail("custom_table needs a .table path");
  }

  void validate(const ExperimentConfig& cfg) {
    const ProblemSpec& p = cfg.problem;
    if (p.dim != 1 && p.dim != 2) fail("dim must be 1 or 2");
    if (p.m < 1) fail("m must be positive");
    if (!(p.extent > 0.0)) fail("extent must be positive");
    if (p.n < 3) fail("n must be at least 3");
    if (p.unknowns() > kMaxUnknowns)
      fail("problem has " + std::to_string(p.unknowns()) + " unknowns; the cap is " + std::to_string(kMaxUnknowns));
    if (!(p.alpha >= 0.0 && p.alpha < 0.5)) fail("alpha must lie in [0, 1/2)");
    check_rule(p.diffusion, diffusion_rule_names());
    check_rule(p.potential, potential_rule_names());
    try {
      cfg.run.validate();
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (cfg.eigen_k < 1 || cfg.eigen_k > 20) fail("eigen_k must lie in [1, 20]");
    if (!(cfg.kernel_t > 0.0)) fail("kernel_t must be positive");
    if (cfg.source_component < 0 || cfg.source_component >= p.m) fail("source_component out of range");
  }

  std::string origin_;
  int line_ = 0;
};

const std::string* find_override(const ExperimentConfig& cfg, const std::string& check, const std::string& key) {
  auto it = cfg.check_overrides.find(check);
  if (it == cfg.check_overrides.end()) return nullptr;
  auto jt = it->second.find(key);
  return jt == it->second.end() ? nullptr : &jt->second;
}

std::string origin_for(const std::string& check, const std::string& key) { return "[checks] " + check + "." + key; }

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& origin) {
  return Parser(origin).parse(text);
}

ExperimentConfig load_config(const std::string& path) {
  if (path.rfind("bundled:", 0) == 0) {
    const std::string name = path.substr(8);
    const BundledExperiment* b = find_bundled(name);
    if (!b) throw ConfigError("no bundled experiment named '" + name + "'");
    return parse_config(b->text, path);
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string config_echo(const ExperimentConfig& cfg) {
  std::ostringstream o;
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  const ProblemSpec& p = cfg.problem;
  o << "name = " << cfg.name << '\n';
  o << "[problem]\n";
  o << "dim = " << p.dim << "\nm = " << p.m << "\nextent = " << num(p.extent) << "\nn = " << p.n << '\n';
  o << "Q = " << p.diffusion.name << '\n';
  for (const auto& [k, v] : p.diffusion.params) o << "Q." << k << " = " << num(v) << '\n';
  if (!p.diffusion.table.empty()) o << "Q.table = " << p.diffusion.table << '\n';
  o << "V = " << p.potential.name << '\n';
  for (const auto& [k, v] : p.potential.params) o << "V." << k << " = " << num(v) << '\n';
  if (!p.potential.table.empty()) o << "V.table = " << p.potential.table << '\n';
  o << "shift = " << (p.shift == ShiftMode::automatic ? "auto" : "none") << '\n';
  o << "flip = " << (p.flip ? "true" : "false") << '\n';
  o << "alpha = " << num(p.alpha) << '\n';
  const SplitConfig& r = cfg.run;
  o << "[run]\n";
  o << "scheme = " << (r.scheme == SplitScheme::lie ? "lie" : "strang") << '\n';
  o << "diffusion = " << (r.diffusion_substep == DiffusionScheme::backward_euler ? "backward_euler" : "crank_nicolson")
    << '\n';
  o << "n_steps = " << r.n_steps << "\nt_final = " << num(r.t_final) << "\nsolver_tol = " << num(r.linear_solver_tol)
    << "\nmax_solver_iters = " << r.max_solver_iters << "\nrecord_every = " << r.record_every << '\n';
  o << "lambda_re = " << num(cfg.lambda.real()) << "\nlambda_im = " << num(cfg.lambda.imag()) << '\n';
  o << "eigen_k = " << cfg.eigen_k << "\nkernel_t = " << num(cfg.kernel_t)
    << "\nsource_component = " << cfg.source_component << '\n';
  o << "[checks]\nnames = ";
  for (std::size_t i = 0; i < cfg.checks.size(); ++i) o << (i ? ", " : "") << cfg.checks[i];
  o << '\n';
  for (const auto& [check, kv] : cfg.check_overrides)
    for (const auto& [k, v] : kv) o << check << '.' << k << " = " << v << '\n';
  o << "[output]\ndir = " << cfg.output_dir << "\nseed = " << cfg.seed << '\n';
  return o.str();
}

double override_double(const ExperimentConfig& cfg, const std::string& check, const std::string& key,
                       double fallback) {
  const std::string* v = find_override(cfg, check, key);
  return v ? Parser(origin_for(check, key)).to_double(*v) : fallback;
}

int override_int(const ExperimentConfig& cfg, const std::string& check, const std::string& key, int fallback) {
  const std::string* v = find_override(cfg, check, key);
  return v ? static_cast<int>(Parser(origin_for(check, key)).to_int(*v)) : fallback;
}

bool override_bool(const ExperimentConfig& cfg, const std::string& check, const std::string& key, bool fallback) {
  const std::string* v = find_override(cfg, check, key);
  return v ? Parser(origin_for(check, key)).to_bool(*v) : fallback;
}

std::vector<double> override_list(const ExperimentConfig& cfg, const std::string& check, const std::string& key,
                                  std::vector<double> fallback) {
  const std::string* v = find_override(cfg, check, key);
  if (!v) return fallback;
  Parser parser(origin_for(check, key));
  std::vector<double> out;
  for (const auto& item : split(*v, ' ')) out.push_back(parser.to_double(item));
  if (out.empty()) parser.fail("expected a space separated list of numbers");
  return out;
}

}  // namespace vschro

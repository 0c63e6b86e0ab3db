#include "cssim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cssim {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& v, int line) {
  double x = 0;
  size_t pos = 0;
  bool ok = true;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    ok = false;
  }
  if (!ok || pos != v.size()) fail(line, "expected a number, got '" + v + "'");
  if (!std::isfinite(x)) fail(line, "number '" + v + "' is not finite");
  return x;
}

long long parse_int(const std::string& v, int line) {
  long long x = 0;
  size_t pos = 0;
  bool ok = true;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    ok = false;
  }
  if (!ok || pos != v.size()) fail(line, "expected an integer, got '" + v + "'");
  return x;
}

unsigned long long parse_uint(const std::string& v, int line) {
  unsigned long long x = 0;
  size_t pos = 0;
  bool ok = !v.empty() && v[0] != '-';
  try {
    if (ok) x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    ok = false;
  }
  if (!ok || pos != v.size())
    fail(line, "expected an unsigned integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, "expected true or false, got '" + v + "'");
}

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RunConfig ConfigFile::run_config() const {
  RunConfig r;
  r.model = model;
  r.params.kappa = kappa;
  r.params.v_or_m = is_csh(model) ? v : m;
  r.params.couplings = couplings;
  r.epsilon = epsilon;
  r.radius_R = radius_R;
  r.profile = profile;
  r.n = n;
  r.half_width = half_width;
  r.t_end = t_end;
  r.cfl_safety = cfl_safety;
  r.diag_every = diag_every;
  r.project_every = project_every;
  r.out_dir = out_dir;
  r.dump_state = dump_state;
  r.rng = rng;
  return r;
}

bool operator==(const ConfigFile& a, const ConfigFile& b) {
  return a.model == b.model && a.kappa == b.kappa && a.v == b.v && a.m == b.m &&
         a.couplings == b.couplings && a.epsilon == b.epsilon &&
         a.radius_R == b.radius_R && a.profile == b.profile && a.n == b.n &&
         a.half_width == b.half_width && a.t_end == b.t_end &&
         a.cfl_safety == b.cfl_safety && a.diag_every == b.diag_every &&
         a.project_every == b.project_every && a.out_dir == b.out_dir &&
         a.dump_state == b.dump_state && a.rng == b.rng;
}

ConfigFile parse_config(const std::string& text) {
  ConfigFile c;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  bool saw_model = false;
  std::map<std::string, int> seen;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = s.substr(1, s.size() - 2);
      static const char* known[] = {"model", "params", "data", "grid",
                                    "time",  "output", "seed"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    std::string qual = section + "." + key;
    if (seen.count(qual)) fail(line, "duplicate key " + qual);
    seen[qual] = line;

    if (qual == "model.model") {
      try {
        c.model = model_from_string(val);
      } catch (const std::exception&) {
        fail(line, "unknown model '" + val + "'");
      }
      saw_model = true;
    } else if (qual == "params.kappa") {
      c.kappa = parse_real(val, line);
    } else if (qual == "params.v") {
      c.v = parse_real(val, line);
    } else if (qual == "params.m") {
      c.m = parse_real(val, line);
    } else if (qual == "params.couplings") {
      c.couplings = parse_bool(val, line);
    } else if (qual == "data.epsilon") {
      c.epsilon = parse_real(val, line);
    } else if (qual == "data.radius_R") {
      c.radius_R = parse_real(val, line);
    } else if (qual == "data.profile") {
      c.profile = val;
    } else if (qual == "grid.n") {
      c.n = int(parse_int(val, line));
    } else if (qual == "grid.half_width") {
      c.half_width = parse_real(val, line);
    } else if (qual == "time.t_end") {
      c.t_end = parse_real(val, line);
    } else if (qual == "time.cfl_safety") {
      c.cfl_safety = parse_real(val, line);
    } else if (qual == "time.diag_every") {
      c.diag_every = int(parse_int(val, line));
    } else if (qual == "time.project_every") {
      c.project_every = int(parse_int(val, line));
    } else if (qual == "output.out_dir") {
      c.out_dir = val;
    } else if (qual == "output.dump_state") {
      c.dump_state = parse_bool(val, line);
    } else if (qual == "seed.rng") {
      c.rng = parse_uint(val, line);
    } else {
      fail(line, "unknown key '" + key + "' in section [" + section + "]");
    }
  }

  if (!saw_model) fail(line, "missing required key model.model");
  if (c.kappa == 0) fail(seen["params.kappa"], "kappa must be nonzero");
  if (c.epsilon < 0) fail(seen["data.epsilon"], "epsilon must be nonnegative");
  if (c.radius_R <= 0) fail(seen["data.radius_R"], "radius_R must be positive");
  if (c.profile != "bump") fail(seen["data.profile"], "unknown profile '" + c.profile + "'");
  if (c.n < 16) fail(seen["grid.n"], "n must be at least 16");
  if (c.half_width <= 0) fail(seen["grid.half_width"], "half_width must be positive");
  if (c.t_end <= 0) fail(seen["time.t_end"], "t_end must be positive");
  if (c.cfl_safety <= 0 || c.cfl_safety > 1)
    fail(seen["time.cfl_safety"], "cfl_safety must lie in (0, 1]");
  if (c.diag_every < 1) fail(seen["time.diag_every"], "diag_every must be at least 1");
  if (c.project_every < 0)
    fail(seen["time.project_every"], "project_every must be nonnegative");
  const double margin = std::max(0.5, 6 * 2 * c.half_width / c.n);
  if (c.half_width < c.radius_R + c.t_end + margin)
    fail(line, "containment violated: need half_width > radius_R + t_end + margin (" +
                   fmt_real(c.radius_R + c.t_end + margin) + ")");
  return c;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string print_config(const ConfigFile& c) {
  std::ostringstream o;
  o << "[model]\n";
  o << "model = " << model_to_string(c.model) << "\n\n";
  o << "[params]\n";
  o << "kappa = " << fmt_real(c.kappa) << "\n";
  o << "v = " << fmt_real(c.v) << "\n";
  o << "m = " << fmt_real(c.m) << "\n";
  o << "couplings = " << (c.couplings ? "true" : "false") << "\n\n";
  o << "[data]\n";
  o << "epsilon = " << fmt_real(c.epsilon) << "\n";
  o << "radius_R = " << fmt_real(c.radius_R) << "\n";
  o << "profile = " << c.profile << "\n\n";
  o << "[grid]\n";
  o << "n = " << c.n << "\n";
  o << "half_width = " << fmt_real(c.half_width) << "\n\n";
  o << "[time]\n";
  o << "t_end = " << fmt_real(c.t_end) << "\n";
  o << "cfl_safety = " << fmt_real(c.cfl_safety) << "\n";
  o << "diag_every = " << c.diag_every << "\n";
  o << "project_every = " << c.project_every << "\n\n";
  o << "[output]\n";
  o << "out_dir = " << c.out_dir << "\n";
  o << "dump_state = " << (c.dump_state ? "true" : "false") << "\n\n";
  o << "[seed]\n";
  o << "rng = " << c.rng << "\n";
  return o.str();
}

}  // namespace cssim

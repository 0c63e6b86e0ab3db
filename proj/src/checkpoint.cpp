#include "cssim/checkpoint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cssim {

namespace {

constexpr char kMagic[6] = {'C', 'S', 'S', 'I', 'M', '1'};

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void put_array(std::ostream& out, const double* p, size_t count) {
  out.write(reinterpret_cast<const char*>(p), std::streamsize(count * sizeof(double)));
}

void get_array(std::istream& in, double* p, size_t count) {
  in.read(reinterpret_cast<char*>(p), std::streamsize(count * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint truncated inside a field array");
}

/// Minimal extraction from the fixed metadata schema written below.
std::string json_string(const std::string& j, const std::string& key) {
  std::string pat = "\"" + key + "\":\"";
  size_t p = j.find(pat);
  if (p == std::string::npos) throw std::runtime_error("checkpoint metadata lacks " + key);
  p += pat.size();
  size_t q = j.find('"', p);
  if (q == std::string::npos) throw std::runtime_error("checkpoint metadata malformed");
  return j.substr(p, q - p);
}

double json_number(const std::string& j, const std::string& key) {
  std::string pat = "\"" + key + "\":";
  size_t p = j.find(pat);
  if (p == std::string::npos) throw std::runtime_error("checkpoint metadata lacks " + key);
  return std::stod(j.substr(p + pat.size()));
}

}  // namespace

void write_checkpoint(const std::string& path, const SimState& s, ModelKind model) {
  const int n = s.grid.n;
  std::ostringstream meta;
  meta << "{\"model\":\"" << model_to_string(model) << "\","
       << "\"t\":" << fmt_real(s.t) << ","
       << "\"n\":" << n << ","
       << "\"h\":" << fmt_real(s.grid.h) << ","
       << "\"vd\":" << s.vd << ","
       << "\"gd\":" << s.gd << ","
       << "\"fields\":["
       << "{\"name\":\"phi\",\"shape\":[" << n << "," << n << "," << s.vd << ",2]},"
       << "{\"name\":\"pi\",\"shape\":[" << n << "," << n << "," << s.vd << ",2]},"
       << "{\"name\":\"a1\",\"shape\":[" << n << "," << n << "," << s.gd << "]},"
       << "{\"name\":\"a2\",\"shape\":[" << n << "," << n << "," << s.gd << "]},"
       << "{\"name\":\"b\",\"shape\":[" << n << "," << n << "," << s.gd << "]}]}";
  const std::string m = meta.str();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out.write(kMagic, sizeof kMagic);
  uint64_t len = m.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(m.data(), std::streamsize(m.size()));
  put_array(out, reinterpret_cast<const double*>(s.phi.data()), s.phi.size() * 2);
  put_array(out, reinterpret_cast<const double*>(s.pi.data()), s.pi.size() * 2);
  put_array(out, s.a1.data(), s.a1.size());
  put_array(out, s.a2.data(), s.a2.size());
  put_array(out, s.b.data(), s.b.size());
  if (!out) throw std::runtime_error("write failure on checkpoint " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  char magic[6];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("bad checkpoint magic in " + path);
  uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || len > (1u << 20)) throw std::runtime_error("bad metadata length in " + path);
  std::string meta(len, '\0');
  in.read(meta.data(), std::streamsize(len));
  if (!in) throw std::runtime_error("checkpoint truncated inside metadata");

  Checkpoint c;
  c.model = model_from_string(json_string(meta, "model"));
  c.state.t = json_number(meta, "t");
  c.state.grid.n = int(json_number(meta, "n"));
  c.state.grid.h = json_number(meta, "h");
  c.state.vd = int(json_number(meta, "vd"));
  c.state.gd = int(json_number(meta, "gd"));
  if (c.state.grid.n < 1 || c.state.vd < 1 || c.state.gd < 1)
    throw std::runtime_error("inconsistent checkpoint dimensions in " + path);
  c.state.resize();
  get_array(in, reinterpret_cast<double*>(c.state.phi.data()), c.state.phi.size() * 2);
  get_array(in, reinterpret_cast<double*>(c.state.pi.data()), c.state.pi.size() * 2);
  get_array(in, c.state.a1.data(), c.state.a1.size());
  get_array(in, c.state.a2.data(), c.state.a2.size());
  get_array(in, c.state.b.data(), c.state.b.size());
  return c;
}

}  // namespace cssim

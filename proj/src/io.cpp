#include "pcurl/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pcurl {

namespace {

static_assert(sizeof(double) == 8, "64-bit IEEE doubles required");

void write_doubles_le(std::ostream& os, const std::vector<double>& v) {
  for (double d : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    if constexpr (std::endian::native == std::endian::big)
      bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    os.write(buf, 8);
  }
}

void read_doubles_le(std::istream& is, std::vector<double>& v) {
  for (double& d : v) {
    char buf[8];
    is.read(buf, 8);
    if (!is) throw std::runtime_error("field dump: truncated payload");
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    if constexpr (std::endian::native == std::endian::big)
      bits = __builtin_bswap64(bits);
    std::memcpy(&d, &bits, 8);
  }
}

nlohmann::json header_json(const BoxDomain& g, const std::string& kind) {
  return nlohmann::json{{"format", "pcurl-field"},
                        {"kind", kind},
                        {"nx", g.nx},
                        {"ny", g.ny},
                        {"nz", g.nz},
                        {"lx", g.lx},
                        {"ly", g.ly},
                        {"lz", g.lz},
                        {"components", kind == "cell"
                                           ? nlohmann::json::array({"scalar"})
                                           : nlohmann::json::array({"x", "y", "z"})},
                        {"order", "x-fastest"}};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

}  // namespace

void write_edge_field(const std::string& path, const EdgeField& u,
                      const BoxDomain& g) {
  require_edge_shape(u, g, "write_edge_field");
  std::ofstream os = open_out(path);
  os << header_json(g, "edge").dump() << '\n';
  write_doubles_le(os, u.x.v);
  write_doubles_le(os, u.y.v);
  write_doubles_le(os, u.z.v);
  if (!os) throw std::runtime_error("write failed: " + path);
}

void write_face_field(const std::string& path, const FaceField& w,
                      const BoxDomain& g) {
  require_face_shape(w, g, "write_face_field");
  std::ofstream os = open_out(path);
  os << header_json(g, "face").dump() << '\n';
  write_doubles_le(os, w.x.v);
  write_doubles_le(os, w.y.v);
  write_doubles_le(os, w.z.v);
  if (!os) throw std::runtime_error("write failed: " + path);
}

void write_cell_field(const std::string& path, const CellField& c,
                      const BoxDomain& g) {
  require_cell_shape(c, g, "write_cell_field");
  std::ofstream os = open_out(path);
  os << header_json(g, "cell").dump() << '\n';
  write_doubles_le(os, c.v.v);
  if (!os) throw std::runtime_error("write failed: " + path);
}

EdgeField read_edge_field(const std::string& path, BoxDomain& g_out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open field dump: " + path);
  std::string header;
  if (!std::getline(is, header))
    throw std::runtime_error("field dump: missing header line");
  nlohmann::json h = nlohmann::json::parse(header, nullptr, false);
  if (h.is_discarded() || h.value("format", "") != "pcurl-field")
    throw std::runtime_error("field dump: unrecognized header");
  if (h.value("kind", "") != "edge")
    throw std::runtime_error("field dump: expected an edge field");
  g_out = BoxDomain(h.at("lx").get<double>(), h.at("ly").get<double>(),
                    h.at("lz").get<double>(), h.at("nx").get<int>(),
                    h.at("ny").get<int>(), h.at("nz").get<int>());
  EdgeField u(g_out);
  read_doubles_le(is, u.x.v);
  read_doubles_le(is, u.y.v);
  read_doubles_le(is, u.z.v);
  return u;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

void apply_assignment(ConfigMap& cfg, const std::string& text, int line_no) {
  std::size_t eq = text.find('=');
  if (eq == std::string::npos) {
    std::ostringstream msg;
    msg << "config: expected key=value";
    if (line_no > 0) msg << " on line " << line_no;
    msg << ", got '" << text << "'";
    throw std::invalid_argument(msg.str());
  }
  std::string key = trim(text.substr(0, eq));
  std::string val = trim(text.substr(eq + 1));
  if (key.empty())
    throw std::invalid_argument("config: empty key in '" + text + "'");
  cfg[key] = val;
}

}  // namespace

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open file: " + path);
  ConfigMap cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    apply_assignment(cfg, line, line_no);
  }
  return cfg;
}

void parse_config_overlay(ConfigMap& cfg,
                          const std::vector<std::string>& assignments) {
  for (const std::string& a : assignments) apply_assignment(cfg, a, 0);
}

void validate_keys(const ConfigMap& cfg, const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : cfg) {
    bool ok = false;
    for (const std::string& a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

std::string require_string(const ConfigMap& cfg, const std::string& key) {
  auto it = cfg.find(key);
  if (it == cfg.end() || it->second.empty())
    throw std::invalid_argument("config: missing required key '" + key + "'");
  return it->second;
}

namespace {

double to_double(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    double d = std::stod(val, &pos);
    if (pos != val.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key +
                                "' expects a number, got '" + val + "'");
  }
}

int to_int(const std::string& key, const std::string& val) {
  try {
    std::size_t pos = 0;
    long v = std::stol(val, &pos);
    if (pos != val.size() || v < -2147483647L || v > 2147483647L)
      throw std::invalid_argument("");
    return static_cast<int>(v);
  } catch (...) {
    throw std::invalid_argument("config: key '" + key +
                                "' expects an integer, got '" + val + "'");
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

double require_double(const ConfigMap& cfg, const std::string& key) {
  return to_double(key, require_string(cfg, key));
}

int require_int(const ConfigMap& cfg, const std::string& key) {
  return to_int(key, require_string(cfg, key));
}

std::string get_string(const ConfigMap& cfg, const std::string& key,
                       const std::string& fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

double get_double(const ConfigMap& cfg, const std::string& key, double fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : to_double(key, it->second);
}

int get_int(const ConfigMap& cfg, const std::string& key, int fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : to_int(key, it->second);
}

std::vector<double> get_double_list(const ConfigMap& cfg, const std::string& key,
                                    const std::vector<double>& fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  std::vector<double> out;
  for (const std::string& tok : split_commas(it->second))
    out.push_back(to_double(key, tok));
  return out;
}

std::vector<int> get_int_list(const ConfigMap& cfg, const std::string& key,
                              const std::vector<int>& fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  std::vector<int> out;
  for (const std::string& tok : split_commas(it->second))
    out.push_back(to_int(key, tok));
  return out;
}

std::string serialize_config(const ConfigMap& cfg) {
  std::string out;
  for (const auto& [key, value] : cfg) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
  }
  nlohmann::json j = v;  // shortest round-trip decimal
  return j.dump();
}

}  // namespace pcurl

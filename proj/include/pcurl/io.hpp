#ifndef PCURL_IO_HPP
#define PCURL_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "pcurl/grid.hpp"

namespace pcurl {

// Field dump format: one JSON metadata line (grid dimensions, box lengths,
// field kind, component order) terminated by '\n', then the raw arrays as
// 64-bit little-endian IEEE doubles, components in x, y, z order, each
// x-fastest.  Scalar kinds carry a single array.
void write_edge_field(const std::string& path, const EdgeField& u,
                      const BoxDomain& g);
void write_face_field(const std::string& path, const FaceField& w,
                      const BoxDomain& g);
void write_cell_field(const std::string& path, const CellField& c,
                      const BoxDomain& g);

// Readers recover the grid from the header; they throw std::runtime_error
// on malformed or truncated input.
EdgeField read_edge_field(const std::string& path, BoxDomain& g_out);

// Flat key=value configuration: one pair per line, '#' starts a comment,
// blank lines ignored.  Later assignments win; parse_config_overlay applies
// command-line overrides on top.  Unknown keys are the caller's problem to
// reject (see validate_keys).
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_file(const std::string& path);
void parse_config_overlay(ConfigMap& cfg,
                          const std::vector<std::string>& assignments);

// Throws std::invalid_argument naming the first key outside 'allowed'.
void validate_keys(const ConfigMap& cfg, const std::vector<std::string>& allowed);

// Fetch helpers; the required variants throw std::invalid_argument naming
// the missing or malformed key.
std::string require_string(const ConfigMap& cfg, const std::string& key);
double require_double(const ConfigMap& cfg, const std::string& key);
int require_int(const ConfigMap& cfg, const std::string& key);
std::string get_string(const ConfigMap& cfg, const std::string& key,
                       const std::string& fallback);
double get_double(const ConfigMap& cfg, const std::string& key, double fallback);
int get_int(const ConfigMap& cfg, const std::string& key, int fallback);
std::vector<double> get_double_list(const ConfigMap& cfg, const std::string& key,
                                    const std::vector<double>& fallback);
std::vector<int> get_int_list(const ConfigMap& cfg, const std::string& key,
                              const std::vector<int>& fallback);

// Serialize back to the same flat text form (sorted keys, round-trippable).
std::string serialize_config(const ConfigMap& cfg);

// Shortest round-trip decimal text for a double (deterministic output).
std::string format_double(double v);

}  // namespace pcurl

#endif

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include <pcurl/grid.hpp>
#include <pcurl/io.hpp>

#include "helpers.hpp"

using namespace pcurl;
using namespace pcurl::testing;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("pcurl-io-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

}  // namespace

TEST_CASE("edge field dumps round trip bitwise") {
  TempDir tmp;
  BoxDomain g(1.0, 1.3, 0.7, 5, 7, 6);
  EdgeField u = random_edge_field(g, 42);
  const std::string path = tmp.file("u.field");
  write_edge_field(path, u, g);

  BoxDomain g2;
  EdgeField v = read_edge_field(path, g2);
  CHECK(g2.nx == g.nx);
  CHECK(g2.ny == g.ny);
  CHECK(g2.nz == g.nz);
  CHECK(g2.lx == g.lx);
  CHECK(g2.ly == g.ly);
  CHECK(g2.lz == g.lz);
  REQUIRE(v.same_shape(u));
  for (auto pair : {std::make_pair(&u.x, &v.x), std::make_pair(&u.y, &v.y),
                    std::make_pair(&u.z, &v.z)})
    for (std::size_t n = 0; n < pair.first->v.size(); ++n)
      CHECK(pair.first->v[n] == pair.second->v[n]);
}

TEST_CASE("face and cell field dumps are readable headers plus payload") {
  TempDir tmp;
  BoxDomain g(1, 1, 1, 4, 4, 4);
  FaceField w = random_face_field(g, 7);
  CellField c(g);
  c.v.fill(2.5);
  write_face_field(tmp.file("w.field"), w, g);
  write_cell_field(tmp.file("c.field"), c, g);

  std::ifstream in(tmp.file("w.field"), std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("\"kind\":") != std::string::npos);
  CHECK(header.find("face") != std::string::npos);
}

TEST_CASE("malformed field files are rejected") {
  TempDir tmp;
  BoxDomain g(1, 1, 1, 4, 4, 4);
  BoxDomain g_out;

  CHECK_THROWS_AS(read_edge_field(tmp.file("missing.field"), g_out),
                  std::runtime_error);

  write_text_file(tmp.file("nojson.field"), "not json at all\n");
  CHECK_THROWS_AS(read_edge_field(tmp.file("nojson.field"), g_out),
                  std::runtime_error);

  // Wrong kind: a cell dump read as an edge field.
  CellField c(g);
  write_cell_field(tmp.file("c.field"), c, g);
  CHECK_THROWS_AS(read_edge_field(tmp.file("c.field"), g_out),
                  std::runtime_error);

  // Truncated payload.
  EdgeField u = random_edge_field(g, 3);
  write_edge_field(tmp.file("u.field"), u, g);
  auto full = std::filesystem::file_size(tmp.file("u.field"));
  std::filesystem::resize_file(tmp.file("u.field"), full - 16);
  CHECK_THROWS_AS(read_edge_field(tmp.file("u.field"), g_out),
                  std::runtime_error);
}

TEST_CASE("config files parse with comments, blanks and later-wins") {
  TempDir tmp;
  write_text_file(tmp.file("a.cfg"),
                  "# header comment\n"
                  "p = 2.5\n"
                  "\n"
                  "nx = 16   # trailing comment\n"
                  "p = 3.0\n");
  ConfigMap cfg = parse_config_file(tmp.file("a.cfg"));
  CHECK(cfg.size() == 2);
  CHECK(cfg.at("p") == "3.0");
  CHECK(cfg.at("nx") == "16");

  parse_config_overlay(cfg, {"p=1.5", "seed = 9"});
  CHECK(cfg.at("p") == "1.5");
  CHECK(cfg.at("seed") == "9");

  CHECK_THROWS_AS(parse_config_overlay(cfg, {"no-equals-sign"}),
                  std::invalid_argument);

  write_text_file(tmp.file("bad.cfg"), "p 2.5\n");
  CHECK_THROWS_AS(parse_config_file(tmp.file("bad.cfg")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config_file(tmp.file("missing.cfg")),
                  std::invalid_argument);
}

TEST_CASE("unknown keys are named in the error") {
  ConfigMap cfg{{"p", "2"}, {"tyop", "1"}};
  try {
    validate_keys(cfg, {"p", "nx"});
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("tyop") != std::string::npos);
  }
}

TEST_CASE("typed getters validate their input") {
  ConfigMap cfg{{"p", "2.5"},   {"nx", "16"},        {"junk", "2.5x"},
                {"list", "1e-2, 1e-4"}, {"ints", "8,16,32"}};
  CHECK(require_double(cfg, "p") == 2.5);
  CHECK(require_int(cfg, "nx") == 16);
  CHECK(require_string(cfg, "p") == "2.5");
  CHECK_THROWS_AS(require_double(cfg, "junk"), std::invalid_argument);
  CHECK_THROWS_AS(require_int(cfg, "p"), std::invalid_argument);
  CHECK_THROWS_AS(require_double(cfg, "absent"), std::invalid_argument);
  CHECK(get_double(cfg, "absent", 7.5) == 7.5);
  CHECK(get_int(cfg, "absent", -3) == -3);
  CHECK(get_string(cfg, "absent", "dflt") == "dflt");

  auto list = get_double_list(cfg, "list", {});
  REQUIRE(list.size() == 2);
  CHECK(list[0] == 1e-2);
  CHECK(list[1] == 1e-4);
  auto ints = get_int_list(cfg, "ints", {});
  REQUIRE(ints.size() == 3);
  CHECK(ints[2] == 32);
  auto fallback = get_double_list(cfg, "absent", {4.0});
  REQUIRE(fallback.size() == 1);
  CHECK(fallback[0] == 4.0);
}

TEST_CASE("serialization round trips the map") {
  TempDir tmp;
  ConfigMap cfg{{"p", "3"}, {"eps_schedule", "1e-2,1e-4,0"}, {"nx", "32"}};
  write_text_file(tmp.file("round.cfg"), serialize_config(cfg));
  ConfigMap back = parse_config_file(tmp.file("round.cfg"));
  CHECK(back == cfg);
}

TEST_CASE("doubles format to shortest text that parses back exactly") {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 200; ++i) {
    double v = std::ldexp(mant(eng), expo(eng));
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.0) == "0.0");
  CHECK(format_double(1.0) == "1.0");
  CHECK(std::strtod(format_double(0.1).c_str(), nullptr) == 0.1);
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

#include <istream>
#include <ostream>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/sbasis.hpp"

namespace fraclap {

using nlohmann::json;

json combo_to_json(const SHCombo& v) {
  json blocks = json::array();
  for (const SHBlock& b : v.blocks()) {
    json c;
    if (b.c.is_exact_double()) {
      c = b.c.to_double();
    } else {
      c = b.c.to_string();
    }
    blocks.push_back(json{{"t", b.t}, {"c", c}, {"r", b.r}});
  }
  return json{{"s", v.s()},
              {"interval", json::array({v.a(), v.b()})},
              {"precision_bits", v.empty() ? 53L : v.precision_bits()},
              {"blocks", blocks}};
}

SHCombo combo_from_json(const json& j) {
  try {
    const double s = j.at("s").get<double>();
    double a = -1.0, b = 1.0;
    if (j.contains("interval")) {
      const auto& iv = j.at("interval");
      if (!iv.is_array() || iv.size() != 2) throw ConfigError("combo JSON: interval must be [a, b]");
      a = iv[0].get<double>();
      b = iv[1].get<double>();
    }
    const long bits = j.value("precision_bits", 53L);
    if (bits < 2) throw ConfigError("combo JSON: precision_bits must be at least 2");
    std::vector<SHBlock> blocks;
    for (const auto& e : j.at("blocks")) {
      SHBlock blk;
      blk.t = e.at("t").get<double>();
      blk.r = e.value("r", 1.0);
      const auto& c = e.at("c");
      if (c.is_string()) {
        blk.c = BigFloat::parse(c.get<std::string>(), bits);
      } else {
        blk.c = BigFloat(c.get<double>(), bits);
      }
      blocks.push_back(std::move(blk));
    }
    return SHCombo(s, std::move(blocks), a, b);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("combo JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("combo JSON: ") + e.what());
  }
}

void write_combo_json(const SHCombo& v, std::ostream& out) {
  out << combo_to_json(v).dump(2) << '\n';
}

SHCombo read_combo_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("combo JSON: ") + e.what());
  }
  return combo_from_json(j);
}

}  // namespace fraclap

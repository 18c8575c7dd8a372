#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "accord/agreement.hpp"
#include "accord/report.hpp"

using namespace accord;

namespace {

BlandAltmanReport sample_ba() {
  PairedMeasurements pm{"AH", "EP", {}};
  pm.pairs = {{"P1", 80, 50}, {"P2", 60, 40}, {"P3", 70, 60}, {"P4", 30, 55}};
  return bland_altman(pm);
}

// Tiny well-formedness check: every opened tag is closed in LIFO order.
bool svg_well_formed(const std::string& svg) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while ((i = svg.find('<', i)) != std::string::npos) {
    if (svg.compare(i, 2, "<?") == 0 || svg.compare(i, 4, "<!--") == 0) {
      i = svg.find('>', i);
      if (i == std::string::npos) return false;
      continue;
    }
    const std::size_t end = svg.find('>', i);
    if (end == std::string::npos) return false;
    std::string tag = svg.substr(i + 1, end - i - 1);
    const bool closing = !tag.empty() && tag[0] == '/';
    const bool self_closing = !tag.empty() && tag.back() == '/';
    if (closing) tag = tag.substr(1);
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (!self_closing) {
      stack.push_back(name);
    }
    i = end + 1;
  }
  return stack.empty();
}

std::size_t count_occurrences(const std::string& hay, const std::string& pat) {
  std::size_t n = 0, pos = 0;
  while ((pos = hay.find(pat, pos)) != std::string::npos) {
    ++n;
    pos += pat.size();
  }
  return n;
}

}  // namespace

TEST_CASE("json objects keep insertion order and escape strings") {
  auto j = Json::object();
  j.set("zeta", Json::num(0.1));
  j.set("alpha", Json::str("a\"b\\c\nd"));
  j.set("flag", Json::boolean(true));
  j.set("nothing", Json::null());
  const std::string s = j.dump();
  CHECK(s ==
        "{\"zeta\":0.10000000000000001,\"alpha\":\"a\\\"b\\\\c\\nd\","
        "\"flag\":true,\"nothing\":null}");
  CHECK(s.find("zeta") < s.find("alpha"));
}

TEST_CASE("json doubles round-trip at 17 significant digits") {
  for (double v : {1.0 / 3.0, M_PI, 62.2, -33.21, 1e-12, 12345.678901234567}) {
    const std::string s = Json::num(v).dump();
    CHECK(std::stod(s) == v);
  }
  // integral doubles still parse back exactly
  CHECK(std::stod(Json::num(100.0).dump()) == 100.0);
  CHECK(Json::integer(74).dump() == "74");
}

TEST_CASE("json dump is deterministic") {
  auto make = [] {
    auto j = Json::object();
    j.set("b", Json::num(2.5));
    auto arr = Json::array();
    arr.push(Json::integer(1));
    arr.push(Json::str("x"));
    j.set("a", std::move(arr));
    return j.dump(2);
  };
  CHECK(make() == make());
}

TEST_CASE("content_digest is 16 hex chars and input-sensitive") {
  const std::string d1 = content_digest("hello");
  const std::string d2 = content_digest("hello ");
  CHECK(d1.size() == 16);
  CHECK(d1.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(d1 != d2);
  CHECK(d1 == content_digest("hello"));
}

TEST_CASE("render_report top-level shape") {
  auto sec = Json::object();
  sec.set("d_bar", Json::num(20.0));
  const std::string out =
      render_report("bland_altman", "00112233aabbccdd",
                    {{"bland_altman", std::move(sec)}}, {"caution"});
  CHECK(out.find("\"tool_version\": \"0.1.0\"") != std::string::npos);
  CHECK(out.find("\"input_digest\": \"00112233aabbccdd\"") !=
        std::string::npos);
  CHECK(out.find("\"analysis\": \"bland_altman\"") != std::string::npos);
  CHECK(out.find("\"warnings\"") != std::string::npos);
  CHECK(out.back() == '\n');
  // keys appear in the documented order
  CHECK(out.find("tool_version") < out.find("input_digest"));
  CHECK(out.find("input_digest") < out.find("\"analysis\""));
  CHECK(out.find("\"bland_altman\":") < out.find("\"warnings\""));
}

TEST_CASE("bland_altman_to_json carries the derived fields") {
  const std::string s = bland_altman_to_json(sample_ba()).dump();
  CHECK(s.find("\"mean_difference\"") != std::string::npos);
  CHECK(s.find("\"sd_difference\"") != std::string::npos);
  CHECK(s.find("\"lower_limit\"") != std::string::npos);
  CHECK(s.find("\"upper_limit\"") != std::string::npos);
  CHECK(s.find("\"points\"") != std::string::npos);
  CHECK(s.find("\"outside_count\"") != std::string::npos);
}

TEST_CASE("bland-altman svg has exactly three horizontal lines") {
  const std::string svg = bland_altman_svg(sample_ba());
  CHECK(svg_well_formed(svg));
  CHECK(svg.find("viewBox=\"0 0 640 480\"") != std::string::npos);
  CHECK(count_occurrences(svg, "<line") == 3);
  CHECK(count_occurrences(svg, "<circle") == 4);
  CHECK(svg.find("<rect") != std::string::npos);
}

TEST_CASE("deviation svg draws the identity diagonal on a 0-100 frame") {
  DeviationReport r;
  r.points = {{"P1", 10, 12}, {"P2", 50, 45}, {"P3", 90, 90}};
  r.epsilon = 0.5;
  const std::string svg = deviation_svg(r);
  CHECK(svg_well_formed(svg));
  CHECK(svg.find("viewBox=\"0 0 640 480\"") != std::string::npos);
  CHECK(count_occurrences(svg, "<circle") == 3);
  CHECK(count_occurrences(svg, "<line") >= 1);
}

TEST_CASE("points csv formats") {
  const std::string ba = bland_altman_points_csv(sample_ba());
  CHECK(ba.rfind("pair_mean,difference,object_id\n", 0) == 0);
  CHECK(count_occurrences(ba, "\n") == 5);  // header + 4 points

  DeviationReport r;
  r.points = {{"P1", 10, 12}};
  const std::string dv = deviation_points_csv(r);
  CHECK(dv.rfind("true_value,measured_value,object_id\n", 0) == 0);
  CHECK(dv.find("10,12,P1") != std::string::npos);
}

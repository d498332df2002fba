// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

#include <json.hpp>

#include "pcup/error.hpp"
#include "pcup/metrics.hpp"

namespace pcup {
namespace {

std::string format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string MetricReport::to_text() const {
  std::string s;
  const auto line = [&](const char* key, double v) { s += std::string(key) + "=" + format(v) + "\n"; };
  line("cd", cd);
  line("hd", hd);
  line("jsd", jsd);
  line("p2f", p2f);
  line("psnr_y", psnr_y);
  line("psnr_r", psnr_r);
  line("psnr_g", psnr_g);
  line("psnr_b", psnr_b);
  if (g_c) line("g_c", *g_c);
  if (a_c) line("a_c", *a_c);
  return s;
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["cd"] = cd;
  j["hd"] = hd;
  j["jsd"] = jsd;
  j["p2f"] = p2f;
  j["psnr_y"] = psnr_y;
  j["psnr_r"] = psnr_r;
  j["psnr_g"] = psnr_g;
  j["psnr_b"] = psnr_b;
  j["g_c"] = g_c ? nlohmann::ordered_json(*g_c) : nlohmann::ordered_json(nullptr);
  j["a_c"] = a_c ? nlohmann::ordered_json(*a_c) : nlohmann::ordered_json(nullptr);
  return j.dump(2) + "\n";
}

MetricReport MetricReport::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("metric report: ") + e.what());
  }
  MetricReport r;
  try {
    r.cd = j.at("cd").get<double>();
    r.hd = j.at("hd").get<double>();
    r.jsd = j.at("jsd").get<double>();
    r.p2f = j.at("p2f").get<double>();
    r.psnr_y = j.at("psnr_y").get<double>();
    r.psnr_r = j.at("psnr_r").get<double>();
    r.psnr_g = j.at("psnr_g").get<double>();
    r.psnr_b = j.at("psnr_b").get<double>();
    if (j.contains("g_c") && !j["g_c"].is_null()) r.g_c = j["g_c"].get<double>();
    if (j.contains("a_c") && !j["a_c"].is_null()) r.a_c = j["a_c"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("metric report: ") + e.what());
  }
  return r;
}

}  // namespace pcup
